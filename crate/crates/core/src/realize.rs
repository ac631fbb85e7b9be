//! Interactive realizability: realizer types, the checker for "t realizes F
//! at state s", its state-free counterpart on approximated terms, and the
//! canonical realizer constructors for Skolem and excluded-middle axioms over
//! decidable matrices.
//!
//! The two checkers are deliberately separate recursions. One evaluates the
//! candidate at the state (oracles answered and logged), the other takes an
//! already pure term; that they agree through literal approximation is a
//! theorem the acceptance suite exercises, so the code paths must not be
//! collapsed.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::eval::{eval_at, normalize, EvalBudget};
use crate::kernel::{typecheck, Const, SimpleType, Term, TypingContext};
use crate::logic::{code_args, decode_tuple, Formula, GammaSet, SkolemRegistry};
use crate::state::State;
use crate::truth::{compile_env, pattern_truth_at, TruthError};
use crate::update::Update;

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("matrix is not decidable (quantifiers present): {0}")]
    MatrixNotDecidable(String),
    #[error("no formula registered at oracle index {0}")]
    Unregistered(u32),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Eval(#[from] crate::eval::EvalError),
    #[error(transparent)]
    Truth(#[from] TruthError),
    #[error("internal: {0}")]
    Internal(String),
}

/// Which sampled clause kept a verdict one-sided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Universal,
    Implication,
}

/// Outcome of a realizability check. Universal and implication clauses are
/// checked against finite candidate pools, so passing them yields
/// `Inconclusive`, never `Realizes`; the other clauses are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealizerVerdict {
    Realizes,
    Inconclusive(Sampling),
    Fails { path: Vec<String>, reason: String },
}

impl RealizerVerdict {
    pub fn is_fails(&self) -> bool {
        matches!(self, RealizerVerdict::Fails { .. })
    }

    pub fn passes(&self) -> bool {
        !self.is_fails()
    }

    /// Structural shape for cross-checker agreement: category plus clause
    /// path, without the prose (which mentions the concrete terms).
    pub fn shape(&self) -> (&'static str, Vec<String>) {
        match self {
            RealizerVerdict::Realizes => ("realizes", Vec::new()),
            RealizerVerdict::Inconclusive(Sampling::Universal) => {
                ("inconclusive", vec!["sampled-universal".to_string()])
            }
            RealizerVerdict::Inconclusive(Sampling::Implication) => {
                ("inconclusive", vec!["sampled-implication".to_string()])
            }
            RealizerVerdict::Fails { path, .. } => ("fails", path.clone()),
        }
    }
}

impl fmt::Display for RealizerVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealizerVerdict::Realizes => write!(f, "realizes"),
            RealizerVerdict::Inconclusive(Sampling::Universal) => {
                write!(f, "inconclusive (sampled universal)")
            }
            RealizerVerdict::Inconclusive(Sampling::Implication) => {
                write!(f, "inconclusive (sampled implication)")
            }
            RealizerVerdict::Fails { path, reason } => {
                write!(f, "fails at {}: {}", path.join("."), reason)
            }
        }
    }
}

impl Serialize for RealizerVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RealizerVerdict", 3)?;
        match self {
            RealizerVerdict::Realizes => {
                s.serialize_field("verdict", "realizes")?;
                s.serialize_field("clause_path", &Vec::<String>::new())?;
                s.serialize_field("details", "")?;
            }
            RealizerVerdict::Inconclusive(which) => {
                s.serialize_field("verdict", "inconclusive")?;
                s.serialize_field("clause_path", &Vec::<String>::new())?;
                s.serialize_field(
                    "details",
                    match which {
                        Sampling::Universal => "sampled-universal",
                        Sampling::Implication => "sampled-implication",
                    },
                )?;
            }
            RealizerVerdict::Fails { path, reason } => {
                s.serialize_field("verdict", "fails")?;
                s.serialize_field("clause_path", path)?;
                s.serialize_field("details", reason)?;
            }
        }
        s.end()
    }
}

fn both(a: RealizerVerdict, b: RealizerVerdict) -> RealizerVerdict {
    use RealizerVerdict::*;
    match (a, b) {
        (f @ Fails { .. }, _) | (_, f @ Fails { .. }) => f,
        (Inconclusive(w), _) | (_, Inconclusive(w)) => Inconclusive(w),
        (Realizes, Realizes) => Realizes,
    }
}

/// The type a realizer of `F` must have.
pub fn realizer_type(f: &Formula) -> SimpleType {
    match f {
        Formula::Atomic(_) => SimpleType::Update,
        Formula::And(a, b) => SimpleType::prod(realizer_type(a), realizer_type(b)),
        Formula::Or(a, b) => SimpleType::prod(
            SimpleType::Bool,
            SimpleType::prod(realizer_type(a), realizer_type(b)),
        ),
        Formula::Implies(a, b) => SimpleType::arrow(realizer_type(a), realizer_type(b)),
        Formula::Minus(a, b) => {
            SimpleType::prod(realizer_type(a), realizer_type(&b.inv_negate()))
        }
        Formula::Forall(_, ty, b) => SimpleType::arrow(ty.clone(), realizer_type(b)),
        Formula::Exists(_, ty, b) => SimpleType::prod(ty.clone(), realizer_type(b)),
    }
}

/// Closed candidate terms used to instantiate universal clauses and
/// implication antecedents.
#[derive(Debug, Clone)]
pub struct CandidatePool {
    nats: Vec<u64>,
    extra: BTreeMap<SimpleType, Vec<Term>>,
    max_antecedents: usize,
    exists_witnesses: Vec<u64>,
}

impl CandidatePool {
    /// 0..=15 plus the numeral constants appearing in the formula.
    pub fn default_for(f: &Formula) -> CandidatePool {
        let mut nats: Vec<u64> = (0..=15).collect();
        f.walk_atoms(&mut |t| collect_numerals(t, &mut nats));
        nats.sort_unstable();
        nats.dedup();
        CandidatePool {
            nats,
            extra: BTreeMap::new(),
            max_antecedents: 6,
            exists_witnesses: (0..=8).collect(),
        }
    }

    pub fn with_nats(mut self, nats: Vec<u64>) -> CandidatePool {
        self.nats = nats;
        self
    }

    pub fn add_term(&mut self, ty: SimpleType, t: Term) {
        self.extra.entry(ty).or_default().push(t);
    }

    fn extras_of(&self, ty: &SimpleType) -> &[Term] {
        self.extra.get(ty).map_or(&[], |v| v.as_slice())
    }
}

fn collect_numerals(t: &Term, out: &mut Vec<u64>) {
    if let Some(n) = t.as_numeral() {
        out.push(n);
        return;
    }
    match t {
        Term::App(a, b) | Term::Pair(a, b) => {
            collect_numerals(a, out);
            collect_numerals(b, out);
        }
        Term::Lam(_, _, b) | Term::Proj(_, b) => collect_numerals(b, out),
        _ => {}
    }
}

/// A closed inhabitant of a type; the filler for candidate slots.
pub fn default_term_of_type(ty: &SimpleType) -> Term {
    match ty {
        SimpleType::Nat => Term::numeral(0),
        SimpleType::Bool => Term::bool_const(true),
        SimpleType::Update => Term::empty_update(),
        SimpleType::Arrow(d, c) => Term::lam("_u", d.as_ref().clone(), default_term_of_type(c)),
        SimpleType::Prod(l, r) => Term::pair(default_term_of_type(l), default_term_of_type(r)),
    }
}

struct Ctx<'a> {
    state: &'a State,
    pool: &'a CandidatePool,
    gamma: &'a GammaSet,
    registry: &'a SkolemRegistry,
    budget: EvalBudget,
}

/// Checks `t ⊩_s F`: the candidate is evaluated at the state (oracles
/// answered from it), and atomic-level updates must consist of triples that
/// demonstrably correct the state. `F` must be closed and `t` must have the
/// realizer type of `F`.
pub fn check_at(
    t: &Term,
    f: &Formula,
    state: &State,
    pool: &CandidatePool,
    gamma: &GammaSet,
    registry: &SkolemRegistry,
    budget: EvalBudget,
) -> Result<RealizerVerdict, RealizeError> {
    check_shape(t, f)?;
    let ctx = Ctx {
        state,
        pool,
        gamma,
        registry,
        budget,
    };
    let mut path = Vec::new();
    check_at_rec(t, f, &mut path, &ctx)
}

fn check_shape(t: &Term, f: &Formula) -> Result<(), RealizeError> {
    if !f.is_closed() {
        return Err(RealizeError::TypeMismatch(format!(
            "formula is not closed: {f}"
        )));
    }
    let want = realizer_type(f);
    let got = typecheck(t, &TypingContext::new())
        .map_err(|e| RealizeError::TypeMismatch(e.to_string()))?;
    if got != want {
        return Err(RealizeError::TypeMismatch(format!(
            "realizer has type {got}, formula wants {want}"
        )));
    }
    Ok(())
}

fn fails(path: &[String], reason: impl Into<String>) -> RealizerVerdict {
    RealizerVerdict::Fails {
        path: path.to_vec(),
        reason: reason.into(),
    }
}

/// The two truth conditions of the atomic clause, shared verbatim by both
/// checkers: every triple must name a tracked formula, refute the state's
/// current value and assert a value that holds at the state.
fn triples_correct(
    update: &Update,
    path: &[String],
    ctx: &Ctx<'_>,
) -> Result<Option<RealizerVerdict>, RealizeError> {
    for &(i, n, m) in update.iter() {
        let index = match u32::try_from(i).ok().filter(|&ix| ctx.registry.pattern(ix).is_some()) {
            Some(ix) => ix,
            None => {
                return Ok(Some(fails(
                    path,
                    format!("triple ({i},{n},{m}) names an unregistered oracle"),
                )))
            }
        };
        if !ctx.gamma.contains(index) {
            return Ok(Some(fails(
                path,
                format!("triple ({i},{n},{m}) names a formula outside the tracked set"),
            )));
        }
        let arity = ctx.registry.pattern(index).expect("registered").arity();
        let args = decode_tuple(n, arity);
        let current = ctx.state.get(i, n);
        let current_truth =
            pattern_truth_at(ctx.registry, index, &args, current, ctx.state, ctx.budget)?;
        if current_truth {
            return Ok(Some(fails(
                path,
                format!("triple ({i},{n},{m}): the state's value {current} already passes"),
            )));
        }
        let new_truth = pattern_truth_at(ctx.registry, index, &args, m, ctx.state, ctx.budget)?;
        if !new_truth {
            return Ok(Some(fails(
                path,
                format!("triple ({i},{n},{m}): proposed value {m} does not pass"),
            )));
        }
    }
    Ok(None)
}

fn expect_update(v: &Term) -> Result<Update, RealizeError> {
    match v {
        Term::Const(Const::Upd(u)) => Ok(u.clone()),
        other => Err(RealizeError::Internal(format!(
            "normal form of an Update-typed closed term is not an update constant: {other}"
        ))),
    }
}

fn check_at_rec(
    t: &Term,
    f: &Formula,
    path: &mut Vec<String>,
    ctx: &Ctx<'_>,
) -> Result<RealizerVerdict, RealizeError> {
    match f {
        Formula::Atomic(q) => {
            path.push("atomic".to_string());
            let (v, _) = eval_at(t, ctx.state, ctx.budget)?;
            let update = expect_update(&v)?;
            let verdict = if let Some(bad) = triples_correct(&update, path, ctx)? {
                bad
            } else if update.is_empty() {
                let (qv, _) = eval_at(q, ctx.state, ctx.budget)?;
                match qv.as_bool() {
                    Some(true) => RealizerVerdict::Realizes,
                    Some(false) => fails(path, "empty update but the atom is false at the state"),
                    None => {
                        return Err(RealizeError::Internal(format!(
                            "atom stuck at {qv}"
                        )))
                    }
                }
            } else {
                RealizerVerdict::Realizes
            };
            path.pop();
            Ok(verdict)
        }
        Formula::And(a, b) => {
            path.push("and.left".to_string());
            let left = check_at_rec(&Term::proj(0, t.clone()), a, path, ctx)?;
            path.pop();
            if left.is_fails() {
                return Ok(left);
            }
            path.push("and.right".to_string());
            let right = check_at_rec(&Term::proj(1, t.clone()), b, path, ctx)?;
            path.pop();
            Ok(both(left, right))
        }
        Formula::Or(a, b) => {
            let (flag, _) = eval_at(&Term::proj(0, t.clone()), ctx.state, ctx.budget)?;
            let flag = flag.as_bool().ok_or_else(|| {
                RealizeError::Internal("disjunction flag did not evaluate to a boolean".into())
            })?;
            let inner = Term::proj(1, t.clone());
            if flag {
                path.push("or.left".to_string());
                let v = check_at_rec(&Term::proj(0, inner), a, path, ctx)?;
                path.pop();
                Ok(v)
            } else {
                path.push("or.right".to_string());
                let v = check_at_rec(&Term::proj(1, inner), b, path, ctx)?;
                path.pop();
                Ok(v)
            }
        }
        Formula::Implies(a, b) => {
            path.push("implies".to_string());
            let mut verdict = RealizerVerdict::Inconclusive(Sampling::Implication);
            let candidates = antecedent_candidates(a, ctx, true)?;
            for u in candidates {
                let mut probe_path = Vec::new();
                let u_ok = check_at_rec(&u, a, &mut probe_path, ctx)?;
                if u_ok.is_fails() {
                    continue;
                }
                path.push(format!("antecedent {u}"));
                let v = check_at_rec(&Term::app(t.clone(), u.clone()), b, path, ctx)?;
                path.pop();
                if v.is_fails() {
                    verdict = v;
                    break;
                }
            }
            path.pop();
            Ok(verdict)
        }
        Formula::Minus(a, b) => {
            path.push("minus.left".to_string());
            let left = check_at_rec(&Term::proj(0, t.clone()), a, path, ctx)?;
            path.pop();
            if left.is_fails() {
                return Ok(left);
            }
            path.push("minus.right".to_string());
            let right = check_at_rec(&Term::proj(1, t.clone()), &b.inv_negate(), path, ctx)?;
            path.pop();
            Ok(both(left, right))
        }
        Formula::Forall(_, ty, body) => {
            path.push("forall".to_string());
            let mut verdict = RealizerVerdict::Inconclusive(Sampling::Universal);
            let instances: Vec<Term> = if *ty == SimpleType::Nat {
                ctx.pool.nats.iter().map(|&n| Term::numeral(n)).collect()
            } else {
                ctx.pool.extras_of(ty).to_vec()
            };
            for u in instances {
                path.push(format!("at {u}"));
                let v = check_at_rec(&Term::app(t.clone(), u.clone()), &body.open(&u), path, ctx)?;
                path.pop();
                if v.is_fails() {
                    verdict = v;
                    break;
                }
            }
            path.pop();
            Ok(verdict)
        }
        Formula::Exists(_, _, body) => {
            path.push("exists".to_string());
            let (witness, _) = eval_at(&Term::proj(0, t.clone()), ctx.state, ctx.budget)?;
            path.push(format!("witness {witness}"));
            let v = check_at_rec(&Term::proj(1, t.clone()), &body.open(&witness), path, ctx)?;
            path.pop();
            path.pop();
            Ok(v)
        }
    }
}

/// Checks the state-free relation on an already pure term against a pure
/// formula: the term is normalized rather than approximated, while the truth
/// conditions of the atomic clause still evaluate at the state.
pub fn check_mrsf(
    t: &Term,
    f: &Formula,
    state: &State,
    pool: &CandidatePool,
    gamma: &GammaSet,
    registry: &SkolemRegistry,
    budget: EvalBudget,
) -> Result<RealizerVerdict, RealizeError> {
    if t.has_skolem() {
        return Err(RealizeError::TypeMismatch(format!(
            "term mentions oracle constants: {t}"
        )));
    }
    if f.has_skolem() {
        return Err(RealizeError::TypeMismatch(format!(
            "formula mentions oracle constants: {f}"
        )));
    }
    check_shape(t, f)?;
    let ctx = Ctx {
        state,
        pool,
        gamma,
        registry,
        budget,
    };
    let mut path = Vec::new();
    check_mrsf_rec(t, f, &mut path, &ctx)
}

fn check_mrsf_rec(
    t: &Term,
    f: &Formula,
    path: &mut Vec<String>,
    ctx: &Ctx<'_>,
) -> Result<RealizerVerdict, RealizeError> {
    match f {
        Formula::Atomic(q) => {
            path.push("atomic".to_string());
            let v = normalize(t, ctx.budget)?;
            let update = expect_update(&v)?;
            let verdict = if let Some(bad) = triples_correct(&update, path, ctx)? {
                bad
            } else if update.is_empty() {
                let qv = normalize(q, ctx.budget)?;
                match qv.as_bool() {
                    Some(true) => RealizerVerdict::Realizes,
                    Some(false) => fails(path, "empty update but the atom is false"),
                    None => return Err(RealizeError::Internal(format!("atom stuck at {qv}"))),
                }
            } else {
                RealizerVerdict::Realizes
            };
            path.pop();
            Ok(verdict)
        }
        Formula::And(a, b) => {
            path.push("and.left".to_string());
            let left = check_mrsf_rec(&Term::proj(0, t.clone()), a, path, ctx)?;
            path.pop();
            if left.is_fails() {
                return Ok(left);
            }
            path.push("and.right".to_string());
            let right = check_mrsf_rec(&Term::proj(1, t.clone()), b, path, ctx)?;
            path.pop();
            Ok(both(left, right))
        }
        Formula::Or(a, b) => {
            let flag = normalize(&Term::proj(0, t.clone()), ctx.budget)?;
            let flag = flag.as_bool().ok_or_else(|| {
                RealizeError::Internal("disjunction flag did not evaluate to a boolean".into())
            })?;
            let inner = Term::proj(1, t.clone());
            if flag {
                path.push("or.left".to_string());
                let v = check_mrsf_rec(&Term::proj(0, inner), a, path, ctx)?;
                path.pop();
                Ok(v)
            } else {
                path.push("or.right".to_string());
                let v = check_mrsf_rec(&Term::proj(1, inner), b, path, ctx)?;
                path.pop();
                Ok(v)
            }
        }
        Formula::Implies(a, b) => {
            path.push("implies".to_string());
            let mut verdict = RealizerVerdict::Inconclusive(Sampling::Implication);
            let candidates = antecedent_candidates(a, ctx, false)?;
            for u in candidates {
                let mut probe_path = Vec::new();
                let u_ok = check_mrsf_rec(&u, a, &mut probe_path, ctx)?;
                if u_ok.is_fails() {
                    continue;
                }
                path.push(format!("antecedent {u}"));
                let v = check_mrsf_rec(&Term::app(t.clone(), u.clone()), b, path, ctx)?;
                path.pop();
                if v.is_fails() {
                    verdict = v;
                    break;
                }
            }
            path.pop();
            Ok(verdict)
        }
        Formula::Minus(a, b) => {
            path.push("minus.left".to_string());
            let left = check_mrsf_rec(&Term::proj(0, t.clone()), a, path, ctx)?;
            path.pop();
            if left.is_fails() {
                return Ok(left);
            }
            path.push("minus.right".to_string());
            let right = check_mrsf_rec(&Term::proj(1, t.clone()), &b.inv_negate(), path, ctx)?;
            path.pop();
            Ok(both(left, right))
        }
        Formula::Forall(_, ty, body) => {
            path.push("forall".to_string());
            let mut verdict = RealizerVerdict::Inconclusive(Sampling::Universal);
            let instances: Vec<Term> = if *ty == SimpleType::Nat {
                ctx.pool.nats.iter().map(|&n| Term::numeral(n)).collect()
            } else {
                ctx.pool.extras_of(ty).to_vec()
            };
            for u in instances {
                path.push(format!("at {u}"));
                let v =
                    check_mrsf_rec(&Term::app(t.clone(), u.clone()), &body.open(&u), path, ctx)?;
                path.pop();
                if v.is_fails() {
                    verdict = v;
                    break;
                }
            }
            path.pop();
            Ok(verdict)
        }
        Formula::Exists(_, _, body) => {
            path.push("exists".to_string());
            let witness = normalize(&Term::proj(0, t.clone()), ctx.budget)?;
            path.push(format!("witness {witness}"));
            let v = check_mrsf_rec(&Term::proj(1, t.clone()), &body.open(&witness), path, ctx)?;
            path.pop();
            path.pop();
            Ok(v)
        }
    }
}

/// Canonical candidate realizers for an antecedent's shape, plus the pool's
/// extra terms of the right type. The caller filters them through the
/// checker before use.
fn antecedent_candidates(
    f: &Formula,
    ctx: &Ctx<'_>,
    allow_skolem: bool,
) -> Result<Vec<Term>, RealizeError> {
    let mut out = canonical_candidates(f, ctx)?;
    let want = realizer_type(f);
    for extra in ctx.pool.extras_of(&want) {
        if !allow_skolem && extra.has_skolem() {
            continue;
        }
        if typecheck(extra, &TypingContext::new()).map(|ty| ty == want) == Ok(true) {
            out.push(extra.clone());
        }
    }
    out.truncate(ctx.pool.max_antecedents);
    Ok(out)
}

/// Plausible realizers for a formula shape, used to probe universal and
/// implication clauses. Not all of them realize the formula; they are
/// filtered by the checker.
fn canonical_candidates(f: &Formula, ctx: &Ctx<'_>) -> Result<Vec<Term>, RealizeError> {
    let cap = 4;
    let mut out = Vec::new();
    match f {
        Formula::Atomic(_) => out.push(Term::empty_update()),
        Formula::And(a, b) => {
            let left = canonical_candidates(a, ctx)?;
            let right = canonical_candidates(b, ctx)?;
            for l in left.iter().take(2) {
                for r in right.iter().take(2) {
                    out.push(Term::pair(l.clone(), r.clone()));
                }
            }
        }
        Formula::Or(a, b) => {
            let left = canonical_candidates(a, ctx)?;
            let right = canonical_candidates(b, ctx)?;
            let fill_a = default_term_of_type(&realizer_type(a));
            let fill_b = default_term_of_type(&realizer_type(b));
            for l in left.iter().take(2) {
                out.push(Term::pair(
                    Term::bool_const(true),
                    Term::pair(l.clone(), fill_b.clone()),
                ));
            }
            for r in right.iter().take(2) {
                out.push(Term::pair(
                    Term::bool_const(false),
                    Term::pair(fill_a.clone(), r.clone()),
                ));
            }
        }
        Formula::Implies(a, b) => {
            let dom = realizer_type(a);
            for c in canonical_candidates(b, ctx)?.into_iter().take(2) {
                out.push(Term::lam("_v", dom.clone(), c));
            }
        }
        Formula::Minus(a, b) => {
            let left = canonical_candidates(a, ctx)?;
            let right = canonical_candidates(&b.inv_negate(), ctx)?;
            for l in left.iter().take(2) {
                for r in right.iter().take(2) {
                    out.push(Term::pair(l.clone(), r.clone()));
                }
            }
        }
        Formula::Exists(_, ty, body) => {
            if *ty == SimpleType::Nat {
                for &w in &ctx.pool.exists_witnesses {
                    let inst = body.open(&Term::numeral(w));
                    if let Some(c) = canonical_candidates(&inst, ctx)?.into_iter().next() {
                        out.push(Term::pair(Term::numeral(w), c));
                    }
                    if out.len() >= cap {
                        break;
                    }
                }
            } else {
                let filler = default_term_of_type(ty);
                let inst = body.open(&filler);
                if let Some(c) = canonical_candidates(&inst, ctx)?.into_iter().next() {
                    out.push(Term::pair(filler, c));
                }
            }
        }
        Formula::Forall(_, ty, body) => {
            let probe = if *ty == SimpleType::Nat {
                Term::numeral(0)
            } else {
                default_term_of_type(ty)
            };
            let inst = body.open(&probe);
            for c in canonical_candidates(&inst, ctx)?.into_iter().take(2) {
                out.push(Term::lam("_w", ty.clone(), c));
            }
        }
    }
    out.truncate(cap);
    Ok(out)
}

fn quantifier_free_pattern(
    registry: &SkolemRegistry,
    index: u32,
) -> Result<(Formula, usize), RealizeError> {
    let p = registry
        .pattern(index)
        .ok_or(RealizeError::Unregistered(index))?;
    if !p.body().is_quantifier_free() {
        return Err(RealizeError::MatrixNotDecidable(p.to_string()));
    }
    Ok((p.body().clone(), p.arity()))
}

/// The matrix as one boolean term over named variables `x1..xk` and a
/// supplied witness term. Boolean combinations collapse to a single atom,
/// which is what the realizer constructions need.
fn matrix_truth_term(
    registry: &SkolemRegistry,
    body: &Formula,
    arity: usize,
    witness: Term,
) -> Result<Term, RealizeError> {
    let mut env = vec![witness];
    env.extend((1..=arity).rev().map(|j| Term::free(format!("x{j}"))));
    Ok(compile_env(body, &env, registry)?)
}

fn arg_names(arity: usize) -> Vec<String> {
    (1..=arity).map(|j| format!("x{j}")).collect()
}

fn lam_over_args(arity: usize, body: Term) -> Term {
    let mut t = body;
    for j in (1..=arity).rev() {
        t = Term::lam_named(format!("x{j}"), SimpleType::Nat, t);
    }
    t
}

fn if_update(cond: Term, then: Term, els: Term) -> Term {
    Term::apps(Term::Const(Const::If(SimpleType::Update)), [cond, then, els])
}

/// The canonical realizer of the Skolem axiom for a quantifier-free matrix:
///
/// `\x⃗. \p. if tr(A)(x⃗, phi⟨x⃗⟩) then ∅
///           else p1 p ⋓ (if tr(A)(x⃗, p0 p) then mkupd i ⟨x⃗⟩ (p0 p) else ∅)`
///
/// Given a claimed witness pair for `∃y A(x⃗, y)`, it either confirms the
/// oracle's value or forwards the antecedent's corrections, learning the
/// claimed witness when it checks out.
pub fn sk_realizer(registry: &SkolemRegistry, index: u32) -> Result<Term, RealizeError> {
    let (body, arity) = quantifier_free_pattern(registry, index)?;
    let names = arg_names(arity);
    let code = code_args(
        &names
            .iter()
            .map(|n| Term::free(n.clone()))
            .collect::<Vec<_>>(),
    );
    let phi = Term::app(Term::skolem(index), code.clone());
    let p = || Term::free("p");
    let p0 = Term::proj(0, p());
    let p1 = Term::proj(1, p());
    let guard = matrix_truth_term(registry, &body, arity, phi)?;
    let claim_ok = matrix_truth_term(registry, &body, arity, p0.clone())?;
    let learn = Term::apps(
        Term::Const(Const::MkUpd),
        [Term::numeral(index as u64), code, p0],
    );
    let else_branch = Term::apps(
        Term::Const(Const::Cup),
        [p1, if_update(claim_ok, learn, Term::empty_update())],
    );
    let inner = if_update(guard, Term::empty_update(), else_branch);
    let with_p = Term::lam_named(
        "p",
        SimpleType::prod(SimpleType::Nat, SimpleType::Update),
        inner,
    );
    Ok(lam_over_args(arity, with_p))
}

/// The canonical realizer of `∀x⃗. (∃y A) ∨ (∀y A⊥)` for a quantifier-free
/// matrix:
///
/// `\x⃗. < tr(A)(x⃗, phi⟨x⃗⟩),
///        < <phi⟨x⃗⟩, ∅>,
///          \y. if tr(A)(x⃗, y) then mkupd i ⟨x⃗⟩ y else ∅ > >`
///
/// When the oracle's value passes the matrix it is offered as the witness;
/// otherwise the right branch refutes each counterexample candidate, emitting
/// a correction whenever one would in fact witness the matrix.
pub fn em1_realizer(registry: &SkolemRegistry, index: u32) -> Result<Term, RealizeError> {
    let (body, arity) = quantifier_free_pattern(registry, index)?;
    let names = arg_names(arity);
    let code = code_args(
        &names
            .iter()
            .map(|n| Term::free(n.clone()))
            .collect::<Vec<_>>(),
    );
    let phi = Term::app(Term::skolem(index), code.clone());
    let guard = matrix_truth_term(registry, &body, arity, phi.clone())?;
    let left = Term::pair(phi, Term::empty_update());
    let at_y = matrix_truth_term(registry, &body, arity, Term::free("y"))?;
    let learn = Term::apps(
        Term::Const(Const::MkUpd),
        [Term::numeral(index as u64), code, Term::free("y")],
    );
    let right = Term::lam_named(
        "y",
        SimpleType::Nat,
        if_update(at_y, learn, Term::empty_update()),
    );
    let tuple = Term::pair(guard, Term::pair(left, right));
    Ok(lam_over_args(arity, tuple))
}

/// An excluded-middle-derived realizer for a closed `∃y A` (arity-0 matrix),
/// shaped as a witness/update pair: the oracle's current guess, and either
/// nothing (the guess passes) or the corrections found by probing the matrix
/// at 0..=probe, of which the consistent union keeps the least.
pub fn sigma1_realizer(
    registry: &SkolemRegistry,
    index: u32,
    probe: u64,
) -> Result<Term, RealizeError> {
    let (body, arity) = quantifier_free_pattern(registry, index)?;
    if arity != 0 {
        return Err(RealizeError::Unsupported(format!(
            "witness extraction realizer needs a closed matrix, this one has arity {arity}"
        )));
    }
    let phi = Term::app(Term::skolem(index), Term::numeral(0));
    let guard = matrix_truth_term(registry, &body, 0, phi.clone())?;
    let at_j = matrix_truth_term(registry, &body, 0, Term::free("j"))?;
    let learn = Term::apps(
        Term::Const(Const::MkUpd),
        [Term::numeral(index as u64), Term::numeral(0), Term::free("j")],
    );
    let step_body = Term::apps(
        Term::Const(Const::Cup),
        [
            Term::free("acc"),
            if_update(at_j, learn, Term::empty_update()),
        ],
    );
    let step = Term::lam_named(
        "j",
        SimpleType::Nat,
        Term::lam_named("acc", SimpleType::Update, step_body),
    );
    let probe_fold = Term::apps(
        Term::Const(Const::Rec(SimpleType::Update)),
        [Term::empty_update(), step, Term::numeral(probe + 1)],
    );
    let update = if_update(guard, Term::empty_update(), probe_fold);
    Ok(Term::pair(phi, update))
}
