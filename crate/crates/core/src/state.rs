//! States: total approximations of all oracles at once, their trusted
//! domain, the information ordering, and the stabilization loop that patches
//! a state until a term's oracle queries are all trusted.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::eval::{eval_at, EvalBudget};
use crate::kernel::{library, Const, SimpleType, Term};
use crate::logic::{decode_tuple, GammaSet, SkolemRegistry};
use crate::truth::{bounded_truth, GroundVerdict, SearchBound};
use crate::update::{Triple, Update};

/// A total function ℕ² → ℕ: a finite overlay over the constantly-0 default.
///
/// The representation is canonical (no overlay entry maps to the default), so
/// two states denote the same function exactly when they compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct State {
    overlay: BTreeMap<(u64, u64), u64>,
}

impl State {
    /// The constantly-0 state.
    pub fn new() -> State {
        State::default()
    }

    pub fn from_triples<I: IntoIterator<Item = Triple>>(triples: I) -> State {
        let mut s = State::new();
        for (i, n, m) in triples {
            s.set(i, n, m);
        }
        s
    }

    /// `s_i(n)`.
    pub fn get(&self, index: u64, arg: u64) -> u64 {
        self.overlay.get(&(index, arg)).copied().unwrap_or(0)
    }

    fn set(&mut self, index: u64, arg: u64, value: u64) {
        if value == 0 {
            self.overlay.remove(&(index, arg));
        } else {
            self.overlay.insert((index, arg), value);
        }
    }

    /// The state that agrees with `self` except at `(index, arg)`.
    pub fn with(&self, index: u64, arg: u64, value: u64) -> State {
        let mut s = self.clone();
        s.set(index, arg, value);
        s
    }

    /// Pointwise overwrite by every triple of the update. Triples of one
    /// update are mutually consistent, so order does not matter.
    pub fn apply_update(&self, update: &Update) -> State {
        let mut s = self.clone();
        for &(i, n, m) in update.iter() {
            s.set(i, n, m);
        }
        s
    }

    pub fn overlay(&self) -> impl Iterator<Item = Triple> + '_ {
        self.overlay.iter().map(|(&(i, n), &m)| (i, n, m))
    }

    pub fn overlay_len(&self) -> usize {
        self.overlay.len()
    }

    /// Points where the two states disagree.
    pub fn diff(&self, other: &State) -> Vec<Triple> {
        let mut out = Vec::new();
        let keys: std::collections::BTreeSet<(u64, u64)> = self
            .overlay
            .keys()
            .chain(other.overlay.keys())
            .copied()
            .collect();
        for (i, n) in keys {
            let v = other.get(i, n);
            if self.get(i, n) != v {
                out.push((i, n, v));
            }
        }
        out
    }

    /// The closed term `\x:Nat. \y:Nat. if x = i && y = n then m else ... else 0`
    /// denoting this state. Normalizing `synthesize_term s i n` gives `s_i(n)`.
    pub fn synthesize_term(&self) -> Term {
        use SimpleType::Nat;
        let mut body = Term::numeral(0);
        // innermost chain entry checked last; iterate in reverse so the
        // printed chain reads in overlay order
        for (&(i, n), &m) in self.overlay.iter().rev() {
            let cond = library::and(
                library::eq(Term::Var(1), Term::numeral(i)),
                library::eq(Term::Var(0), Term::numeral(n)),
            );
            body = Term::apps(
                Term::Const(Const::If(Nat)),
                [cond, Term::numeral(m), body],
            );
        }
        Term::lam("x", Nat, Term::lam("y", Nat, body))
    }
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct File {
            overlay: Vec<Triple>,
            default: u64,
        }
        File {
            overlay: self.overlay().collect(),
            default: 0,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for State {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<State, D::Error> {
        #[derive(Deserialize)]
        struct File {
            overlay: Vec<Triple>,
            #[serde(default)]
            default: u64,
        }
        let file = File::deserialize(deserializer)?;
        if file.default != 0 {
            return Err(D::Error::custom("only the constantly-0 default is supported"));
        }
        Ok(State::from_triples(file.overlay))
    }
}

#[derive(Debug, Error)]
pub enum StateError {
    #[error("stabilization did not settle within {0} iterations")]
    MaxItersExceeded(u64),
    #[error("bounded search exhausted: {0}")]
    BoundExhausted(String),
    #[error(transparent)]
    Eval(#[from] crate::eval::EvalError),
    #[error(transparent)]
    Truth(#[from] crate::truth::TruthError),
}

/// Verdict on one oracle point of a state: is the stored value a trusted
/// witness for the point's formula?
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainWitness {
    InDomain,
    /// The stored value is wrong and `better` (the least bounded witness)
    /// would be right.
    OutOfDomain { better: u64 },
    /// Some instance could not be decided within the bound.
    Unknown,
}

/// Membership of `(index, point)` in the trusted domain of `state`.
///
/// Points whose index is unregistered or outside Γ are trivially trusted.
/// For a tracked formula A, the point is in the domain when the stored value
/// already witnesses A, or when no witness exists within the bound (the
/// defining implication is vacuous); it is out of the domain when a bounded
/// witness exists and the stored value fails.
pub fn dm_member(
    state: &State,
    index: u64,
    point: u64,
    gamma: &GammaSet,
    registry: &SkolemRegistry,
    bound: SearchBound,
    budget: EvalBudget,
) -> Result<DomainWitness, StateError> {
    let small_index = match u32::try_from(index) {
        Ok(i) => i,
        Err(_) => return Ok(DomainWitness::InDomain),
    };
    let pattern = match registry.pattern(small_index) {
        Some(p) => p,
        None => return Ok(DomainWitness::InDomain),
    };
    if !gamma.contains(small_index) {
        return Ok(DomainWitness::InDomain);
    }
    let args = decode_tuple(point, pattern.arity());
    let current = state.get(index, point);
    let verdict_at = |value: u64| -> Result<GroundVerdict, StateError> {
        let instance = pattern.instance(&args, value);
        Ok(bounded_truth(&instance, &[], bound, budget)?)
    };
    let current_verdict = verdict_at(current)?;
    if current_verdict == GroundVerdict::True {
        return Ok(DomainWitness::InDomain);
    }
    let mut undecided = false;
    for candidate in 0..=bound.value() {
        match verdict_at(candidate)? {
            GroundVerdict::True => {
                return Ok(if current_verdict.is_decisive() {
                    DomainWitness::OutOfDomain { better: candidate }
                } else {
                    DomainWitness::Unknown
                });
            }
            GroundVerdict::Unknown(_) => undecided = true,
            GroundVerdict::False => {}
        }
    }
    if undecided {
        Ok(DomainWitness::Unknown)
    } else {
        // no witness within the bound: the defining implication is vacuous
        Ok(DomainWitness::InDomain)
    }
}

/// The state ordering: `s2 >= s1` when every point trusted in `s1` keeps its
/// value in `s2`. Checked over the points where the overlays could disagree;
/// `None` when a needed domain verdict is unknown at this bound.
pub fn check_geq(
    s2: &State,
    s1: &State,
    gamma: &GammaSet,
    registry: &SkolemRegistry,
    bound: SearchBound,
    budget: EvalBudget,
) -> Result<Option<bool>, StateError> {
    let keys: std::collections::BTreeSet<(u64, u64)> = s1
        .overlay()
        .chain(s2.overlay())
        .map(|(i, n, _)| (i, n))
        .collect();
    let mut unknown = false;
    for (i, n) in keys {
        if s1.get(i, n) == s2.get(i, n) {
            continue;
        }
        match dm_member(s1, i, n, gamma, registry, bound, budget)? {
            DomainWitness::InDomain => return Ok(Some(false)),
            DomainWitness::OutOfDomain { .. } => {}
            DomainWitness::Unknown => unknown = true,
        }
    }
    Ok(if unknown { None } else { Some(true) })
}

/// Drives a term's oracle queries into the trusted domain: evaluate, replace
/// every out-of-domain point the evaluation consulted with its bounded
/// witness, and repeat until the log is clean. The result is a state above
/// the input in which the term's value no longer changes for this reason.
pub fn stabilize(
    t: &Term,
    state: &State,
    gamma: &GammaSet,
    registry: &SkolemRegistry,
    bound: SearchBound,
    budget: EvalBudget,
    max_iters: u64,
) -> Result<State, StateError> {
    let mut s = state.clone();
    for _ in 0..max_iters {
        let (_, log) = eval_at(t, &s, budget)?;
        let mut changed = false;
        for q in log.iter() {
            match dm_member(&s, q.index, q.arg, gamma, registry, bound, budget)? {
                DomainWitness::InDomain => {}
                DomainWitness::OutOfDomain { better } => {
                    s = s.with(q.index, q.arg, better);
                    changed = true;
                }
                DomainWitness::Unknown => {
                    return Err(StateError::BoundExhausted(format!(
                        "oracle point ({}, {}) undecided",
                        q.index, q.arg
                    )));
                }
            }
        }
        if !changed {
            return Ok(s);
        }
    }
    Err(StateError::MaxItersExceeded(max_iters))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_is_canonical() {
        let s = State::from_triples([(0, 5, 7), (1, 1, 0)]);
        assert_eq!(s.overlay_len(), 1);
        assert_eq!(s.get(0, 5), 7);
        assert_eq!(s.get(1, 1), 0);
        assert_eq!(s.with(0, 5, 0), State::new());
    }

    #[test]
    fn apply_update_overwrites_pointwise() {
        let s = State::new();
        assert_eq!(s.apply_update(&Update::empty()), s);
        let s1 = s.apply_update(&Update::singleton(0, 5, 7));
        assert_eq!(s1.get(0, 5), 7);
        assert_eq!(s1.get(0, 6), 0);
        let s2 = s1.apply_update(&Update::singleton(0, 5, 9));
        assert_eq!(s2.get(0, 5), 9);
    }

    #[test]
    fn json_round_trip() {
        let s = State::from_triples([(0, 5, 7), (2, 0, 1)]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"overlay":[[0,5,7],[2,0,1]],"default":0}"#);
        let back: State = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn synthesized_term_agrees_with_the_state() {
        let s = State::from_triples([(0, 5, 7), (1, 2, 3)]);
        assert_eq!(State::new().synthesize_term().to_string(), "\\x:Nat. \\y:Nat. 0");
        let syn = s.synthesize_term();
        for (i, n) in [(0, 5), (1, 2), (0, 6), (9, 9)] {
            let applied = Term::apps(syn.clone(), [Term::numeral(i), Term::numeral(n)]);
            let got = crate::eval::normalize(&applied, EvalBudget::default()).unwrap();
            assert_eq!(got, Term::numeral(s.get(i, n)), "at ({i},{n})");
        }
    }

    mod domain {
        use super::*;
        use crate::logic::{Formula, Pattern};
        use crate::kernel::library;

        fn budget() -> EvalBudget {
            EvalBudget::default()
        }

        fn bound() -> SearchBound {
            SearchBound::default()
        }

        /// registry with A(y) := (y = 7) at some index
        fn reg_y_eq_7() -> (SkolemRegistry, u32) {
            let mut reg = SkolemRegistry::new();
            let p = Pattern::new(
                Formula::Atomic(library::eq(Term::Var(0), Term::numeral(7))),
                0,
            )
            .unwrap();
            let i = reg.intern(p);
            (reg, i)
        }

        /// registry with A(y) := (y = y + 1); no witness exists
        fn reg_unsat() -> (SkolemRegistry, u32) {
            let mut reg = SkolemRegistry::new();
            let p = Pattern::new(
                Formula::Atomic(library::eq(
                    Term::Var(0),
                    library::add(Term::Var(0), Term::numeral(1)),
                )),
                0,
            )
            .unwrap();
            let i = reg.intern(p);
            (reg, i)
        }

        #[test]
        fn untracked_points_are_trivially_in_domain() {
            let (reg, i) = reg_y_eq_7();
            let gamma = GammaSet::only([]);
            let v = dm_member(&State::new(), i as u64, 0, &gamma, &reg, bound(), budget()).unwrap();
            assert_eq!(v, DomainWitness::InDomain);
            // unregistered index
            let v = dm_member(&State::new(), 99, 0, &GammaSet::all(), &reg, bound(), budget())
                .unwrap();
            assert_eq!(v, DomainWitness::InDomain);
        }

        #[test]
        fn wrong_value_with_a_witness_is_out_of_domain() {
            let (reg, i) = reg_y_eq_7();
            let v = dm_member(&State::new(), i as u64, 0, &GammaSet::all(), &reg, bound(), budget())
                .unwrap();
            assert_eq!(v, DomainWitness::OutOfDomain { better: 7 });
        }

        #[test]
        fn no_witness_means_vacuously_in_domain() {
            let (reg, i) = reg_unsat();
            let v = dm_member(&State::new(), i as u64, 0, &GammaSet::all(), &reg, bound(), budget())
                .unwrap();
            assert_eq!(v, DomainWitness::InDomain);
        }

        #[test]
        fn geq_is_reflexive_and_tracks_domain() {
            let (reg, i) = reg_y_eq_7();
            let gamma = GammaSet::all();
            let s = State::new();
            assert_eq!(
                check_geq(&s, &s, &gamma, &reg, bound(), budget()).unwrap(),
                Some(true)
            );
            // overwriting an out-of-domain point is allowed ...
            let s2 = s.with(i as u64, 0, 7);
            assert_eq!(
                check_geq(&s2, &s, &gamma, &reg, bound(), budget()).unwrap(),
                Some(true)
            );
            // ... but changing the now-correct value is not
            let s3 = s2.with(i as u64, 0, 9);
            assert_eq!(
                check_geq(&s3, &s2, &gamma, &reg, bound(), budget()).unwrap(),
                Some(false)
            );
        }

        #[test]
        fn stabilize_corrects_logged_points() {
            let (reg, i) = reg_y_eq_7();
            // t = phi{i} 0
            let t = Term::app(Term::skolem(i), Term::numeral(0));
            let s = stabilize(
                &t,
                &State::new(),
                &GammaSet::all(),
                &reg,
                bound(),
                budget(),
                100,
            )
            .unwrap();
            assert_eq!(s.get(i as u64, 0), 7);
        }

        #[test]
        fn stabilize_leaves_pure_terms_alone() {
            let (reg, _) = reg_y_eq_7();
            let t = Term::apps(
                Term::Const(Const::Get),
                [
                    Term::apps(
                        Term::Const(Const::MkUpd),
                        [Term::numeral(0), Term::numeral(0), Term::numeral(0)],
                    ),
                    Term::numeral(0),
                    Term::numeral(0),
                    Term::numeral(0),
                ],
            );
            let s0 = State::from_triples([(3, 3, 3)]);
            let s = stabilize(&t, &s0, &GammaSet::all(), &reg, bound(), budget(), 100).unwrap();
            assert_eq!(s, s0);
        }
    }
}
