//! Truth of arithmetical formulas: compilation to boolean terms whose
//! quantifiers are answered by oracles, evaluation of that term at a state,
//! a bounded classical ground-truth oracle, and the saturation procedure that
//! extends a state until truth-at-state matches ground truth.

use thiserror::Error;

use crate::eval::{eval_at, normalize, EvalBudget, OracleLog};
use crate::kernel::{library, Term};
use crate::logic::{code_args, encode_tuple, Formula, LogicError, Pattern, SkolemRegistry};
use crate::state::State;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TruthError {
    #[error("formula is not arithmetical: {0}")]
    NotArithmetical(String),
    #[error("quantifier pattern not registered: {0}")]
    UnregisteredPattern(String),
    #[error("expected {expected} argument(s) for the free variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("bounded search exhausted at {0}: {1}")]
    BoundExhausted(u64, String),
    #[error(transparent)]
    Eval(#[from] crate::eval::EvalError),
    #[error("internal: {0}")]
    Internal(String),
}

impl From<LogicError> for TruthError {
    fn from(e: LogicError) -> TruthError {
        match e {
            LogicError::NotArithmetical(s) => TruthError::NotArithmetical(s),
            other => TruthError::Internal(other.to_string()),
        }
    }
}

/// Per-quantifier witness search limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBound(u64);

impl SearchBound {
    pub const DEFAULT: u64 = 64;

    /// Panics on a zero bound.
    pub fn new(bound: u64) -> SearchBound {
        assert!(bound >= 1, "search bound must be at least 1");
        SearchBound(bound)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl Default for SearchBound {
    fn default() -> Self {
        SearchBound(Self::DEFAULT)
    }
}

/// Three-valued bounded verdict. `Unknown` carries the exhausted bound: an
/// existential search ran out without a witness, so the classical truth value
/// may lie beyond it. A universal check that survives the whole bound counts
/// as true at that bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroundVerdict {
    True,
    False,
    Unknown(u64),
}

impl GroundVerdict {
    pub fn is_true(self) -> bool {
        self == GroundVerdict::True
    }

    pub fn is_decisive(self) -> bool {
        !matches!(self, GroundVerdict::Unknown(_))
    }

    fn negate(self) -> GroundVerdict {
        match self {
            GroundVerdict::True => GroundVerdict::False,
            GroundVerdict::False => GroundVerdict::True,
            u => u,
        }
    }

    fn and(self, other: GroundVerdict) -> GroundVerdict {
        use GroundVerdict::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            (Unknown(b), _) | (_, Unknown(b)) => Unknown(b),
        }
    }

    fn or(self, other: GroundVerdict) -> GroundVerdict {
        self.negate().and(other.negate()).negate()
    }
}

/// Compiles an arithmetical formula to a boolean term with the same free
/// variables: connectives become the boolean library, an existential
/// quantifier asks its Skolem oracle for the witness, a universal one asks
/// the dual formula's oracle for a counterexample. Every quantifier pattern
/// must be registered.
pub fn compile_truth(f: &Formula, registry: &SkolemRegistry) -> Result<Term, TruthError> {
    if !f.is_arithmetical() {
        return Err(TruthError::NotArithmetical(f.to_string()));
    }
    let frees = f.free_names();
    let closed = f.close_frees(&frees, 0);
    // innermost slot first; the free names are the outermost slots
    let env: Vec<Term> = frees.iter().rev().map(Term::free).collect();
    compile_env(&closed, &env, registry)
}

/// The compiler on nameless formulas, carrying the terms that stand for the
/// enclosing binder slots (innermost first). Used both for whole formulas and
/// for registered pattern instances.
pub(crate) fn compile_env(
    f: &Formula,
    env: &[Term],
    registry: &SkolemRegistry,
) -> Result<Term, TruthError> {
    match f {
        Formula::Atomic(t) => Ok(t.open_env(env)),
        Formula::And(a, b) => Ok(library::and(
            compile_env(a, env, registry)?,
            compile_env(b, env, registry)?,
        )),
        Formula::Or(a, b) => Ok(library::or(
            compile_env(a, env, registry)?,
            compile_env(b, env, registry)?,
        )),
        Formula::Implies(a, b) => Ok(library::imp(
            compile_env(a, env, registry)?,
            compile_env(b, env, registry)?,
        )),
        Formula::Minus(a, b) => Ok(library::and(
            compile_env(a, env, registry)?,
            compile_env(&b.inv_negate(), env, registry)?,
        )),
        Formula::Exists(_, _, body) => {
            let pattern = Pattern::new(body.as_ref().clone(), env.len())?;
            let i = lookup(registry, &pattern)?;
            compile_site(body, i, env, registry)
        }
        Formula::Forall(_, _, body) => {
            let pattern = Pattern::new(body.inv_negate(), env.len())?;
            let i = lookup(registry, &pattern)?;
            compile_site(body, i, env, registry)
        }
    }
}

fn lookup(registry: &SkolemRegistry, pattern: &Pattern) -> Result<u32, TruthError> {
    registry
        .lookup(pattern)
        .ok_or_else(|| TruthError::UnregisteredPattern(pattern.to_string()))
}

fn compile_site(
    body: &Formula,
    oracle: u32,
    env: &[Term],
    registry: &SkolemRegistry,
) -> Result<Term, TruthError> {
    // coding order is outermost first
    let outer: Vec<Term> = env.iter().rev().cloned().collect();
    let phi = Term::app(Term::skolem(oracle), code_args(&outer));
    let mut inner_env = vec![phi];
    inner_env.extend(env.iter().cloned());
    compile_env(body, &inner_env, registry)
}

/// `tr_s(A)(n⃗, witness)` for the registered formula at `index`: the truth
/// value the state assigns to one instance of a Skolem formula. This is the
/// condition the atomic realizability clause imposes on update triples.
pub fn pattern_truth_at(
    registry: &SkolemRegistry,
    index: u32,
    args: &[u64],
    witness: u64,
    state: &State,
    budget: EvalBudget,
) -> Result<bool, TruthError> {
    let p = registry
        .pattern(index)
        .ok_or_else(|| TruthError::UnregisteredPattern(format!("oracle index {index}")))?;
    if args.len() != p.arity() {
        return Err(TruthError::ArityMismatch {
            expected: p.arity(),
            got: args.len(),
        });
    }
    let mut env = vec![Term::numeral(witness)];
    env.extend(args.iter().rev().map(|&n| Term::numeral(n)));
    let compiled = compile_env(p.body(), &env, registry)?;
    let (value, _) = eval_at(&compiled, state, budget)?;
    value
        .as_bool()
        .ok_or_else(|| TruthError::Internal(format!("pattern truth stuck at {value}")))
}

fn bind_args(f: &Formula, args: &[u64]) -> Result<Formula, TruthError> {
    let frees = f.free_names();
    if frees.len() != args.len() {
        return Err(TruthError::ArityMismatch {
            expected: frees.len(),
            got: args.len(),
        });
    }
    let bindings = frees
        .into_iter()
        .zip(args.iter().map(|&n| Term::numeral(n)))
        .collect();
    Ok(f.substitute(&bindings))
}

/// The truth value of `F(args)` in state `s`: the compiled truth term,
/// instantiated and evaluated at the state.
pub fn truth_at(
    f: &Formula,
    args: &[u64],
    state: &State,
    registry: &SkolemRegistry,
    budget: EvalBudget,
) -> Result<bool, TruthError> {
    truth_at_logged(f, args, state, registry, budget).map(|(b, _)| b)
}

/// As [`truth_at`], also returning the oracle points consulted.
///
/// The free variables are substituted after compilation: the compiled truth
/// term is a function of them, and its oracle points must not depend on the
/// particular arguments.
pub fn truth_at_logged(
    f: &Formula,
    args: &[u64],
    state: &State,
    registry: &SkolemRegistry,
    budget: EvalBudget,
) -> Result<(bool, OracleLog), TruthError> {
    let frees = f.free_names();
    if frees.len() != args.len() {
        return Err(TruthError::ArityMismatch {
            expected: frees.len(),
            got: args.len(),
        });
    }
    let compiled = compile_truth(f, registry)?;
    let bindings = frees
        .into_iter()
        .zip(args.iter().map(|&n| Term::numeral(n)))
        .collect();
    let closed = compiled.substitute(&bindings);
    let (value, log) = eval_at(&closed, state, budget)?;
    let b = value
        .as_bool()
        .ok_or_else(|| TruthError::Internal(format!("truth term stuck at {value}")))?;
    Ok((b, log))
}

/// How quantifier exhaustion is reported.
#[derive(Clone, Copy, PartialEq, Eq)]
enum BoundMode {
    /// An exhausted existential search is `Unknown`: the witness may live
    /// beyond the bound.
    Conservative,
    /// "Truth at bound B": exhaustion decides — no witness within the bound
    /// counts as false, no counterexample as true. Total on formulas whose
    /// atoms evaluate.
    Total,
}

/// Bounded classical truth: quantifiers are searched over 0..=B. Existential
/// exhaustion yields `Unknown(B)`; a universal with no counterexample and no
/// undecided instance is `True` ("truth at bound B"). Quantifier-free
/// formulas are always decisive.
pub fn ground_truth(
    f: &Formula,
    args: &[u64],
    bound: SearchBound,
    budget: EvalBudget,
) -> Result<GroundVerdict, TruthError> {
    if !f.is_arithmetical() {
        return Err(TruthError::NotArithmetical(f.to_string()));
    }
    let instantiated = bind_args(f, args)?;
    ground_env(&instantiated, &mut Vec::new(), bound, budget, BoundMode::Conservative)
}

/// The total bounded semantics used by the domain machinery (domain
/// membership, the state ordering, saturation): both quantifiers decide at
/// the bound, so verdicts on arithmetical formulas never come back unknown
/// from exhaustion alone. The involutive dual then evaluates to the exact
/// complement, which the dual-oracle constructions rely on.
pub fn bounded_truth(
    f: &Formula,
    args: &[u64],
    bound: SearchBound,
    budget: EvalBudget,
) -> Result<GroundVerdict, TruthError> {
    if !f.is_arithmetical() {
        return Err(TruthError::NotArithmetical(f.to_string()));
    }
    let instantiated = bind_args(f, args)?;
    ground_env(&instantiated, &mut Vec::new(), bound, budget, BoundMode::Total)
}

fn ground_env(
    f: &Formula,
    env: &mut Vec<u64>,
    bound: SearchBound,
    budget: EvalBudget,
    mode: BoundMode,
) -> Result<GroundVerdict, TruthError> {
    match f {
        Formula::Atomic(t) => {
            let images: Vec<Term> = env.iter().map(|&n| Term::numeral(n)).collect();
            let closed = t.open_env(&images);
            let nf = normalize(&closed, budget)?;
            match nf.as_bool() {
                Some(true) => Ok(GroundVerdict::True),
                Some(false) => Ok(GroundVerdict::False),
                None => Err(TruthError::Internal(format!("ground atom stuck at {nf}"))),
            }
        }
        Formula::And(a, b) => Ok(ground_env(a, env, bound, budget, mode)?
            .and(ground_env(b, env, bound, budget, mode)?)),
        Formula::Or(a, b) => Ok(ground_env(a, env, bound, budget, mode)?
            .or(ground_env(b, env, bound, budget, mode)?)),
        Formula::Implies(a, b) => Ok(ground_env(a, env, bound, budget, mode)?
            .negate()
            .or(ground_env(b, env, bound, budget, mode)?)),
        Formula::Minus(a, b) => Ok(ground_env(a, env, bound, budget, mode)?
            .and(ground_env(b, env, bound, budget, mode)?.negate())),
        Formula::Exists(_, _, body) => {
            let mut saw_unknown = false;
            for m in 0..=bound.value() {
                env.insert(0, m);
                let v = ground_env(body, env, bound, budget, mode);
                env.remove(0);
                match v? {
                    GroundVerdict::True => return Ok(GroundVerdict::True),
                    GroundVerdict::Unknown(_) => saw_unknown = true,
                    GroundVerdict::False => {}
                }
            }
            match mode {
                // a witness may still live beyond the bound
                BoundMode::Conservative => Ok(GroundVerdict::Unknown(bound.value())),
                BoundMode::Total if saw_unknown => Ok(GroundVerdict::Unknown(bound.value())),
                BoundMode::Total => Ok(GroundVerdict::False),
            }
        }
        Formula::Forall(_, _, body) => {
            let mut saw_unknown = false;
            for m in 0..=bound.value() {
                env.insert(0, m);
                let v = ground_env(body, env, bound, budget, mode);
                env.remove(0);
                match v? {
                    GroundVerdict::False => return Ok(GroundVerdict::False),
                    GroundVerdict::Unknown(_) => saw_unknown = true,
                    GroundVerdict::True => {}
                }
            }
            if saw_unknown {
                Ok(GroundVerdict::Unknown(bound.value()))
            } else {
                Ok(GroundVerdict::True)
            }
        }
    }
}

/// Bounded witness search on a nameless body under `env`: the least
/// `m <= B` whose instance is decisively true. `Ok(None)` means every
/// instance was decisively false; an undecided instance is an error.
fn search_witness(
    body: &Formula,
    env: &mut Vec<u64>,
    bound: SearchBound,
    budget: EvalBudget,
) -> Result<Option<u64>, TruthError> {
    let mut undecided = None;
    for m in 0..=bound.value() {
        env.insert(0, m);
        let v = ground_env(body, env, bound, budget, BoundMode::Total);
        env.remove(0);
        match v? {
            GroundVerdict::True => return Ok(Some(m)),
            GroundVerdict::Unknown(b) => undecided = Some(b),
            GroundVerdict::False => {}
        }
    }
    match undecided {
        Some(b) => Err(TruthError::BoundExhausted(
            b,
            format!("undecided instance while searching {body}"),
        )),
        None => Ok(None),
    }
}

/// Extends `s` to a state whose truth value for `F(args)` is the bounded
/// ground truth, following the quantifier structure: at each existential
/// site, if the state's current value is not a witness but one exists within
/// the bound, the point is overwritten with the least one (such points are
/// outside the trusted domain, so the result stays above `s`); dually for
/// universal sites via the dual formula's oracle. Agreement is guaranteed
/// when the starting state's values are within the bound.
pub fn saturate_truth_state(
    f: &Formula,
    args: &[u64],
    state: &State,
    registry: &SkolemRegistry,
    bound: SearchBound,
    budget: EvalBudget,
) -> Result<State, TruthError> {
    if !f.is_arithmetical() {
        return Err(TruthError::NotArithmetical(f.to_string()));
    }
    let frees = f.free_names();
    if frees.len() != args.len() {
        return Err(TruthError::ArityMismatch {
            expected: frees.len(),
            got: args.len(),
        });
    }
    // close the frees into slots so site patterns line up with registration,
    // and seed the environment with their values (innermost slot first)
    let closed = f.close_frees(&frees, 0);
    let mut env: Vec<u64> = args.iter().rev().copied().collect();
    let mut s = state.clone();
    saturate_env(&closed, &mut env, &mut s, registry, bound, budget)?;
    Ok(s)
}

fn saturate_env(
    f: &Formula,
    env: &mut Vec<u64>,
    s: &mut State,
    registry: &SkolemRegistry,
    bound: SearchBound,
    budget: EvalBudget,
) -> Result<(), TruthError> {
    match f {
        Formula::Atomic(_) => Ok(()),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            saturate_env(a, env, s, registry, bound, budget)?;
            saturate_env(b, env, s, registry, bound, budget)
        }
        Formula::Minus(a, b) => {
            saturate_env(a, env, s, registry, bound, budget)?;
            saturate_env(&b.inv_negate(), env, s, registry, bound, budget)
        }
        Formula::Exists(_, _, body) => {
            let pattern = Pattern::new(body.as_ref().clone(), env.len())?;
            let i = lookup(registry, &pattern)?;
            let chosen = saturate_site(body, i, false, env, s, bound, budget)?;
            env.insert(0, chosen);
            let r = saturate_env(body, env, s, registry, bound, budget);
            env.remove(0);
            r
        }
        Formula::Forall(_, _, body) => {
            let pattern = Pattern::new(body.inv_negate(), env.len())?;
            let i = lookup(registry, &pattern)?;
            let chosen = saturate_site(body, i, true, env, s, bound, budget)?;
            env.insert(0, chosen);
            let r = saturate_env(body, env, s, registry, bound, budget);
            env.remove(0);
            r
        }
    }
}

/// Fixes the oracle point a quantifier site reads, returning the value the
/// compiled truth term will see there. For an existential site the oracle
/// should hold a witness of `body`; for a universal site (dual = true) a
/// counterexample, i.e. a witness of the dual.
fn saturate_site(
    body: &Formula,
    oracle: u32,
    dual: bool,
    env: &mut Vec<u64>,
    s: &mut State,
    bound: SearchBound,
    budget: EvalBudget,
) -> Result<u64, TruthError> {
    let outer: Vec<u64> = env.iter().rev().copied().collect();
    let point = encode_tuple(&outer);
    let target = if dual { body.inv_negate() } else { body.clone() };
    let current = s.get(oracle as u64, point);

    env.insert(0, current);
    let current_verdict = ground_env(&target, env, bound, budget, BoundMode::Total);
    env.remove(0);

    match current_verdict? {
        GroundVerdict::True => Ok(current),
        GroundVerdict::False => {
            match search_witness(&target, env, bound, budget)? {
                Some(witness) => {
                    *s = s.with(oracle as u64, point, witness);
                    Ok(witness)
                }
                // no witness within bound: the current value is vacuously fine
                None => Ok(current),
            }
        }
        GroundVerdict::Unknown(b) => Err(TruthError::BoundExhausted(
            b,
            format!("current oracle value {current} undecided for {target}"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::SimpleType::Nat;

    fn budget() -> EvalBudget {
        EvalBudget::default()
    }

    fn bound() -> SearchBound {
        SearchBound::default()
    }

    /// `ex y. 2*y = target`
    fn exists_double_eq(target: u64) -> Formula {
        Formula::exists(
            "y",
            Nat,
            Formula::Atomic(library::eq(
                library::mul(Term::numeral(2), Term::Var(0)),
                Term::numeral(target),
            )),
        )
    }

    /// `ex y. y = y + 1` — unsatisfiable
    fn exists_impossible() -> Formula {
        Formula::exists(
            "y",
            Nat,
            Formula::Atomic(library::eq(
                Term::Var(0),
                library::add(Term::Var(0), Term::numeral(1)),
            )),
        )
    }

    fn registered(f: &Formula) -> SkolemRegistry {
        let mut reg = SkolemRegistry::new();
        reg.register_formula(f).unwrap();
        reg
    }

    #[test]
    fn compile_atoms_unchanged() {
        let reg = SkolemRegistry::new();
        let p = Formula::Atomic(Term::free("P"));
        assert_eq!(compile_truth(&p, &reg).unwrap(), Term::free("P"));
    }

    #[test]
    fn compile_existential_uses_the_oracle() {
        // ex y. y = x  compiles to  phi{i}(x) = x
        let f = Formula::exists(
            "y",
            Nat,
            Formula::Atomic(library::eq(Term::Var(0), Term::free("x"))),
        );
        let reg = registered(&f);
        let compiled = compile_truth(&f, &reg).unwrap();
        let i = compiled.skolem_indices().into_iter().next().unwrap();
        let phi_x = Term::app(Term::skolem(i), Term::free("x"));
        assert_eq!(compiled, library::eq(phi_x, Term::free("x")));
        assert_eq!(compiled.free_names(), vec!["x".to_string()]);
    }

    #[test]
    fn compile_universal_uses_the_dual_oracle() {
        // all y. y = y  compiles to  phi{i}(0) = phi{i}(0)  with i the dual's index
        let f = Formula::forall(
            "y",
            Nat,
            Formula::Atomic(library::eq(Term::Var(0), Term::Var(0))),
        );
        let reg = registered(&f);
        let compiled = compile_truth(&f, &reg).unwrap();
        let i = compiled.skolem_indices().into_iter().next().unwrap();
        let dual = reg.dual(i).unwrap();
        // the oracle belongs to the negated body's pattern
        let expected_pattern = Pattern::new(
            Formula::Atomic(library::not(library::eq(Term::Var(0), Term::Var(0)))),
            0,
        )
        .unwrap();
        assert_eq!(reg.lookup(&expected_pattern), Some(i));
        assert_eq!(reg.pattern(dual).unwrap().body(), &Formula::Atomic(library::eq(Term::Var(0), Term::Var(0))));
        let phi = Term::app(Term::skolem(i), Term::numeral(0));
        assert_eq!(compiled, library::eq(phi.clone(), phi));
    }

    #[test]
    fn truth_at_examples() {
        let reg = SkolemRegistry::new();
        let trivial = Formula::Atomic(library::eq(Term::numeral(0), Term::numeral(0)));
        assert!(truth_at(&trivial, &[], &State::new(), &reg, budget()).unwrap());

        // ex y. y = 7 at the constantly-0 state: oracle answers 0, 0 != 7
        let f = Formula::exists(
            "y",
            Nat,
            Formula::Atomic(library::eq(Term::Var(0), Term::numeral(7))),
        );
        let reg = registered(&f);
        let compiled = compile_truth(&f, &reg).unwrap();
        let i = compiled.skolem_indices().into_iter().next().unwrap();
        assert!(!truth_at(&f, &[], &State::new(), &reg, budget()).unwrap());

        // with the oracle corrected, it is true
        let s = State::new().with(i as u64, 0, 7);
        assert!(truth_at(&f, &[], &s, &reg, budget()).unwrap());
    }

    #[test]
    fn ground_truth_examples() {
        let f = exists_double_eq(6);
        assert_eq!(
            ground_truth(&f, &[], SearchBound::new(32), budget()).unwrap(),
            GroundVerdict::True
        );

        // all y. 0 <= y, exhaustive at the bound, counts as true
        let alltrue = Formula::forall(
            "y",
            Nat,
            Formula::Atomic(library::le(Term::numeral(0), Term::Var(0))),
        );
        assert_eq!(
            ground_truth(&alltrue, &[], SearchBound::new(32), budget()).unwrap(),
            GroundVerdict::True
        );

        // ex y. y = B+1 cannot be decided at bound B
        let b = 16;
        let out_of_reach = Formula::exists(
            "y",
            Nat,
            Formula::Atomic(library::eq(Term::Var(0), Term::numeral(b + 1))),
        );
        assert_eq!(
            ground_truth(&out_of_reach, &[], SearchBound::new(b), budget()).unwrap(),
            GroundVerdict::Unknown(b)
        );
    }

    #[test]
    fn ground_truth_monotone_for_existentials() {
        let f = exists_double_eq(30);
        let mut last_true = false;
        for b in [4u64, 8, 15, 16, 64] {
            let v = ground_truth(&f, &[], SearchBound::new(b), budget()).unwrap();
            if last_true {
                assert_eq!(v, GroundVerdict::True);
            }
            last_true = v.is_true();
        }
        assert!(last_true);
    }

    #[test]
    fn saturate_plants_the_witness() {
        let f = exists_double_eq(6);
        let reg = registered(&f);
        let s = saturate_truth_state(&f, &[], &State::new(), &reg, bound(), budget()).unwrap();
        let compiled = compile_truth(&f, &reg).unwrap();
        let i = compiled.skolem_indices().into_iter().next().unwrap();
        assert_eq!(s.get(i as u64, 0), 3);
        assert!(truth_at(&f, &[], &s, &reg, budget()).unwrap());
    }

    #[test]
    fn saturate_quantifier_free_is_identity() {
        let f = Formula::Atomic(library::lt(Term::numeral(1), Term::numeral(2)));
        let reg = SkolemRegistry::new();
        let s0 = State::new().with(9, 9, 9);
        let s = saturate_truth_state(&f, &[], &s0, &reg, bound(), budget()).unwrap();
        assert_eq!(s, s0);
    }

    #[test]
    fn saturate_without_witness_leaves_the_state() {
        let f = exists_impossible();
        let reg = registered(&f);
        let s = saturate_truth_state(&f, &[], &State::new(), &reg, bound(), budget()).unwrap();
        assert_eq!(s, State::new());
        assert!(!truth_at(&f, &[], &s, &reg, budget()).unwrap());
    }

    #[test]
    fn saturate_keeps_an_already_correct_value() {
        let f = exists_double_eq(6);
        let reg = registered(&f);
        let compiled = compile_truth(&f, &reg).unwrap();
        let i = compiled.skolem_indices().into_iter().next().unwrap();
        // 3 is the only witness; a state already holding it is untouched
        let s0 = State::new().with(i as u64, 0, 3);
        let s = saturate_truth_state(&f, &[], &s0, &reg, bound(), budget()).unwrap();
        assert_eq!(s, s0);
    }

    #[test]
    fn free_variables_are_an_argument_prefix() {
        // ex y. y = x, args [5]
        let f = Formula::exists(
            "y",
            Nat,
            Formula::Atomic(library::eq(Term::Var(0), Term::free("x"))),
        );
        let reg = registered(&f);
        assert_eq!(
            ground_truth(&f, &[5], bound(), budget()).unwrap(),
            GroundVerdict::True
        );
        let s = saturate_truth_state(&f, &[5], &State::new(), &reg, bound(), budget()).unwrap();
        assert!(truth_at(&f, &[5], &s, &reg, budget()).unwrap());
        assert!(matches!(
            truth_at(&f, &[], &State::new(), &reg, budget()),
            Err(TruthError::ArityMismatch { .. })
        ));
    }
}
