//! The learning loop: drive a realizer against successively corrected
//! states, harvesting its updates, until an extracted witness verifies or a
//! refuting state is found.

use serde::Serialize;
use thiserror::Error;

use crate::eval::{eval_at, EvalBudget};
use crate::kernel::{typecheck, Const, SimpleType, Term, TypingContext};
use crate::logic::{decode_tuple, Formula, GammaSet, SkolemRegistry};
use crate::realize::{check_at, realizer_type, CandidatePool, RealizeError};
use crate::state::{dm_member, stabilize, DomainWitness, State, StateError};
use crate::truth::{ground_truth, saturate_truth_state, GroundVerdict, SearchBound, TruthError};
use crate::update::{Triple, Update};

#[derive(Debug, Clone)]
pub struct LoopConfig {
    pub max_iters: u64,
    pub bound: SearchBound,
    pub gamma: GammaSet,
    pub budget: EvalBudget,
}

impl Default for LoopConfig {
    fn default() -> Self {
        LoopConfig {
            max_iters: 1000,
            bound: SearchBound::default(),
            gamma: GammaSet::all(),
            budget: EvalBudget::default(),
        }
    }
}

/// One iteration of a learning run.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct IterationRecord {
    pub iter: u64,
    pub candidate: Option<u64>,
    pub update: Vec<Triple>,
    pub state_diff: Vec<Triple>,
    pub verdict: String,
}

/// A full run: iteration records plus the outcome. Serialized as JSON lines,
/// one record per line, with a final summary line; the format carries no
/// timing, so identical runs serialize identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionTrace {
    pub records: Vec<IterationRecord>,
    pub result: String,
    pub witness: Option<u64>,
}

#[derive(Serialize)]
struct Summary<'a> {
    result: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<u64>,
    iterations: u64,
}

impl ExtractionTrace {
    fn new() -> ExtractionTrace {
        ExtractionTrace {
            records: Vec::new(),
            result: String::new(),
            witness: None,
        }
    }

    pub fn iterations(&self) -> u64 {
        self.records.len() as u64
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        let summary = Summary {
            result: &self.result,
            witness: self.witness,
            iterations: self.iterations(),
        };
        out.push_str(&serde_json::to_string(&summary).expect("summary serializes"));
        out.push('\n');
        out
    }
}

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("no stable witness within {iters} iterations")]
    MaxItersExceeded {
        iters: u64,
        trace: Box<ExtractionTrace>,
    },
    #[error("bounded search exhausted: {reason}")]
    BoundExhausted {
        reason: String,
        trace: Box<ExtractionTrace>,
    },
    #[error("shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Truth(#[from] TruthError),
    #[error(transparent)]
    Eval(#[from] crate::eval::EvalError),
    #[error("internal: {0}")]
    Internal(String),
}

impl ExtractError {
    /// The partial trace, when the failure produced one.
    pub fn trace(&self) -> Option<&ExtractionTrace> {
        match self {
            ExtractError::MaxItersExceeded { trace, .. }
            | ExtractError::BoundExhausted { trace, .. } => Some(trace),
            _ => None,
        }
    }
}

fn state_err(e: StateError, trace: &ExtractionTrace) -> ExtractError {
    match e {
        StateError::BoundExhausted(reason) => ExtractError::BoundExhausted {
            reason,
            trace: Box::new(trace.clone()),
        },
        StateError::MaxItersExceeded(iters) => ExtractError::MaxItersExceeded {
            iters,
            trace: Box::new(trace.clone()),
        },
        StateError::Eval(e) => ExtractError::Eval(e),
        StateError::Truth(e) => ExtractError::Truth(e),
    }
}

fn split_witness_pair(v: &Term) -> Result<(u64, Update), ExtractError> {
    match v {
        Term::Pair(a, b) => {
            let n = a
                .read_numeral()
                .map_err(|e| ExtractError::Internal(e.to_string()))?;
            match b.as_ref() {
                Term::Const(Const::Upd(u)) => Ok((n, u.clone())),
                other => Err(ExtractError::Internal(format!(
                    "second component is not an update constant: {other}"
                ))),
            }
        }
        other => Err(ExtractError::Internal(format!(
            "realizer value is not a pair: {other}"
        ))),
    }
}

/// Extracts a verified witness for a closed `∃y P` with quantifier-free
/// matrix: evaluate the realizer, and either return its witness (when it
/// claims nothing and the matrix checks out by brute force), apply its
/// update, or — when it claims nothing but is wrong — push the state's
/// logged oracle points into the trusted domain and retry.
pub fn extract_witness(
    t: &Term,
    f: &Formula,
    start: &State,
    cfg: &LoopConfig,
    registry: &SkolemRegistry,
) -> Result<(u64, State, ExtractionTrace), ExtractError> {
    let matrix = match f {
        Formula::Exists(_, SimpleType::Nat, body) if body.is_quantifier_free() => body,
        _ => {
            return Err(ExtractError::Shape(format!(
                "extraction needs a closed existential with a quantifier-free matrix, got {f}"
            )))
        }
    };
    if !f.is_closed() || !f.is_arithmetical() {
        return Err(ExtractError::Shape(format!(
            "extraction needs a closed arithmetical formula, got {f}"
        )));
    }
    let want = realizer_type(f);
    let got = typecheck(t, &TypingContext::new()).map_err(|e| ExtractError::Shape(e.to_string()))?;
    if got != want {
        return Err(ExtractError::Shape(format!(
            "realizer has type {got}, formula wants {want}"
        )));
    }

    let mut trace = ExtractionTrace::new();
    let mut s = start.clone();
    for iter in 0..cfg.max_iters {
        let (v, log) = eval_at(t, &s, cfg.budget)?;
        let (candidate, update) = split_witness_pair(&v)?;
        if update.is_empty() {
            let instance = matrix.open(&Term::numeral(candidate));
            match ground_truth(&instance, &[], cfg.bound, cfg.budget)? {
                GroundVerdict::True => {
                    trace.records.push(IterationRecord {
                        iter,
                        candidate: Some(candidate),
                        update: Vec::new(),
                        state_diff: Vec::new(),
                        verdict: "witness-verified".to_string(),
                    });
                    trace.result = "witness".to_string();
                    trace.witness = Some(candidate);
                    return Ok((candidate, s, trace));
                }
                GroundVerdict::Unknown(b) => {
                    trace.result = "bound-exhausted".to_string();
                    return Err(ExtractError::BoundExhausted {
                        reason: format!("matrix undecided at bound {b} for candidate {candidate}"),
                        trace: Box::new(trace),
                    });
                }
                GroundVerdict::False => {
                    // the realizer claims nothing and is wrong: correct the
                    // oracle points it consulted
                    let mut s2 = s.clone();
                    for q in log.iter() {
                        match dm_member(
                            &s2, q.index, q.arg, &cfg.gamma, registry, cfg.bound, cfg.budget,
                        )
                        .map_err(|e| state_err(e, &trace))?
                        {
                            DomainWitness::OutOfDomain { better } => {
                                s2 = s2.with(q.index, q.arg, better);
                            }
                            DomainWitness::InDomain => {}
                            DomainWitness::Unknown => {
                                trace.result = "bound-exhausted".to_string();
                                return Err(ExtractError::BoundExhausted {
                                    reason: format!(
                                        "oracle point ({}, {}) undecided",
                                        q.index, q.arg
                                    ),
                                    trace: Box::new(trace),
                                });
                            }
                        }
                    }
                    let diff = s.diff(&s2);
                    if diff.is_empty() {
                        trace.result = "bound-exhausted".to_string();
                        return Err(ExtractError::BoundExhausted {
                            reason: format!(
                                "candidate {candidate} fails the matrix and no oracle point can be corrected"
                            ),
                            trace: Box::new(trace),
                        });
                    }
                    trace.records.push(IterationRecord {
                        iter,
                        candidate: Some(candidate),
                        update: Vec::new(),
                        state_diff: diff,
                        verdict: "stabilized".to_string(),
                    });
                    s = s2;
                }
            }
        } else {
            let s2 = s.apply_update(&update);
            let diff = s.diff(&s2);
            trace.records.push(IterationRecord {
                iter,
                candidate: Some(candidate),
                update: update.triples().to_vec(),
                state_diff: diff,
                verdict: "update-applied".to_string(),
            });
            s = s2;
        }
    }
    trace.result = "max-iters".to_string();
    Err(ExtractError::MaxItersExceeded {
        iters: cfg.max_iters,
        trace: Box::new(trace),
    })
}

/// Searches for a state refuting `t ⊩ ⊥`: stabilize the term, saturate the
/// truth of the formula instance its update implicates, correct the state's
/// value when a better witness exists, and re-check, until the atomic clause
/// fails.
pub fn refute_bottom(
    t: &Term,
    start: &State,
    cfg: &LoopConfig,
    registry: &SkolemRegistry,
) -> Result<(State, ExtractionTrace), ExtractError> {
    let got = typecheck(t, &TypingContext::new()).map_err(|e| ExtractError::Shape(e.to_string()))?;
    if got != SimpleType::Update {
        return Err(ExtractError::Shape(format!(
            "refutation needs an Update-typed term, got {got}"
        )));
    }
    let bottom = Formula::bottom();
    let pool = CandidatePool::default_for(&bottom);
    let mut trace = ExtractionTrace::new();
    let mut s = start.clone();
    for iter in 0..cfg.max_iters {
        let stabilized = stabilize(
            t,
            &s,
            &cfg.gamma,
            registry,
            cfg.bound,
            cfg.budget,
            cfg.max_iters,
        )
        .map_err(|e| state_err(e, &trace))?;
        let mut diff = s.diff(&stabilized);
        let mut verdict_text;
        s = stabilized;

        let verdict = check_at(t, &bottom, &s, &pool, &cfg.gamma, registry, cfg.budget)?;
        if verdict.is_fails() {
            trace.records.push(IterationRecord {
                iter,
                candidate: None,
                update: Vec::new(),
                state_diff: diff,
                verdict: "refuted".to_string(),
            });
            trace.result = "refuted".to_string();
            return Ok((s, trace));
        }

        // Still realizes bottom: its update is nonempty and every triple
        // corrects the state. Make the implicated instance's truth match
        // ground truth, then move the point into the trusted domain.
        let (v, _) = eval_at(t, &s, cfg.budget)?;
        let update = match v {
            Term::Const(Const::Upd(u)) if !u.is_empty() => u,
            other => {
                return Err(ExtractError::Internal(format!(
                    "bottom still realized but value is {other}"
                )))
            }
        };
        let &(i, n, m) = update.iter().next().expect("nonempty");
        let index = u32::try_from(i)
            .map_err(|_| ExtractError::Internal(format!("oracle index {i} out of range")))?;
        let pattern = registry
            .pattern(index)
            .ok_or_else(|| ExtractError::Internal(format!("unregistered index {index}")))?
            .clone();
        let args = decode_tuple(n, pattern.arity());

        let mut s2 = s.clone();
        for value in [s.get(i, n), m] {
            let instance = pattern.instance(&args, value);
            s2 = saturate_truth_state(&instance, &[], &s2, registry, cfg.bound, cfg.budget)?;
        }
        if s2 != s {
            verdict_text = "truth-saturated".to_string();
        } else {
            match dm_member(&s, i, n, &cfg.gamma, registry, cfg.bound, cfg.budget)
                .map_err(|e| state_err(e, &trace))?
            {
                DomainWitness::OutOfDomain { better } => {
                    s2 = s.with(i, n, better);
                    let instance = pattern.instance(&args, better);
                    s2 = saturate_truth_state(&instance, &[], &s2, registry, cfg.bound, cfg.budget)?;
                    verdict_text = "domain-corrected".to_string();
                }
                DomainWitness::Unknown => {
                    trace.result = "bound-exhausted".to_string();
                    return Err(ExtractError::BoundExhausted {
                        reason: format!("oracle point ({i}, {n}) undecided"),
                        trace: Box::new(trace),
                    });
                }
                DomainWitness::InDomain => {
                    trace.result = "bound-exhausted".to_string();
                    return Err(ExtractError::BoundExhausted {
                        reason: format!(
                            "triple ({i}, {n}, {m}) stays correcting but the point is trusted at this bound"
                        ),
                        trace: Box::new(trace),
                    });
                }
            }
        }
        diff.extend(s.diff(&s2));
        if s.diff(&s2).is_empty() {
            verdict_text = "no-progress".to_string();
        }
        trace.records.push(IterationRecord {
            iter,
            candidate: None,
            update: update.triples().to_vec(),
            state_diff: diff,
            verdict: verdict_text,
        });
        s = s2;
    }
    trace.result = "max-iters".to_string();
    Err(ExtractError::MaxItersExceeded {
        iters: cfg.max_iters,
        trace: Box::new(trace),
    })
}
