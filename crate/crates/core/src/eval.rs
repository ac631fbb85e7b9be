//! Reduction: pure normalization for oracle-free terms, and evaluation at a
//! state, where each oracle constant is read off the state and every consulted
//! point is logged.
//!
//! The workhorse is a big-step normalizer. A single-step leftmost-outermost
//! reducer is also provided; both reach the same (unique) normal form, which
//! the property suites exercise, and the stepper is what the subject-reduction
//! checks walk through.

use thiserror::Error;

use crate::kernel::{Const, LibOp, Term};
use crate::state::State;
use crate::update::Update;

/// Contraction allowance for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalBudget(u64);

impl EvalBudget {
    pub const DEFAULT_STEPS: u64 = 1_000_000;

    /// Panics on a zero budget.
    pub fn new(max_steps: u64) -> EvalBudget {
        assert!(max_steps > 0, "evaluation budget must be positive");
        EvalBudget(max_steps)
    }

    pub fn steps(self) -> u64 {
        self.0
    }
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget(Self::DEFAULT_STEPS)
    }
}

/// One oracle consultation: `phi{index}(arg) = answer`, answer supplied by the
/// state in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleQuery {
    pub index: u64,
    pub arg: u64,
    pub answer: u64,
}

/// Consulted oracle points, in evaluation order. May contain repeats.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleLog(Vec<OracleQuery>);

impl OracleLog {
    pub fn queries(&self) -> &[OracleQuery] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &OracleQuery> {
        self.0.iter()
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("evaluation budget of {limit} steps exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("ill-typed evaluation: {0}")]
    IllTyped(String),
}

/// Normal form of a pure (oracle-free) term.
pub fn normalize(t: &Term, budget: EvalBudget) -> Result<Term, EvalError> {
    if t.has_skolem() {
        return Err(EvalError::IllTyped(
            "oracle constant in pure normalization".to_string(),
        ));
    }
    let mut m = Machine::new(budget, None);
    m.nf(t)
}

/// Evaluation at a state: oracle constants applied to numerals are answered
/// by the state and logged. For closed terms of atomic type the result equals
/// `normalize(approximate(t, s))`.
pub fn eval_at(t: &Term, state: &State, budget: EvalBudget) -> Result<(Term, OracleLog), EvalError> {
    let mut m = Machine::new(budget, Some(state));
    let nf = m.nf(t)?;
    Ok((nf, OracleLog(m.log)))
}

/// Literal approximation `t[s]`: every oracle constant `phi{i}` becomes the
/// synthesized state term applied to `i`. The result is a pure term.
pub fn approximate(t: &Term, state: &State) -> Term {
    let syn = state.synthesize_term();
    replace_skolems(t, &syn)
}

fn replace_skolems(t: &Term, syn: &Term) -> Term {
    match t {
        Term::Const(Const::Skolem(i)) => Term::app(syn.clone(), Term::numeral(*i as u64)),
        Term::Var(_) | Term::Free(_) | Term::Const(_) => t.clone(),
        Term::App(a, b) => Term::app(replace_skolems(a, syn), replace_skolems(b, syn)),
        Term::Lam(h, ty, b) => Term::lam(h.clone(), ty.clone(), replace_skolems(b, syn)),
        Term::Pair(a, b) => Term::pair(replace_skolems(a, syn), replace_skolems(b, syn)),
        Term::Proj(i, b) => Term::proj(*i, replace_skolems(b, syn)),
    }
}

struct Machine<'a> {
    fuel: u64,
    limit: u64,
    state: Option<&'a State>,
    log: Vec<OracleQuery>,
}

impl<'a> Machine<'a> {
    fn new(budget: EvalBudget, state: Option<&'a State>) -> Machine<'a> {
        Machine {
            fuel: budget.steps(),
            limit: budget.steps(),
            state,
            log: Vec::new(),
        }
    }

    fn spend(&mut self) -> Result<(), EvalError> {
        if self.fuel == 0 {
            return Err(EvalError::BudgetExceeded { limit: self.limit });
        }
        self.fuel -= 1;
        Ok(())
    }

    /// Full normal form.
    fn nf(&mut self, t: &Term) -> Result<Term, EvalError> {
        let w = self.whnf(t.clone())?;
        Ok(match w {
            Term::Lam(h, ty, b) => Term::lam(h, ty, self.nf(&b)?),
            Term::Pair(a, b) => Term::pair(self.nf(&a)?, self.nf(&b)?),
            Term::Proj(i, a) => Term::proj(i, self.nf(&a)?),
            Term::App(_, _) => {
                let (head, args) = w.spine();
                let head = head.clone();
                let mut out = head;
                for arg in args {
                    out = Term::app(out, self.nf(arg)?);
                }
                out
            }
            atom => atom,
        })
    }

    /// Weak head normal form, spine-based. `args` holds pending arguments,
    /// last pushed = first applied.
    fn whnf(&mut self, t: Term) -> Result<Term, EvalError> {
        let mut head = t;
        let mut args: Vec<Term> = Vec::new();
        loop {
            match head {
                Term::App(f, a) => {
                    args.push(*a);
                    head = *f;
                }
                Term::Lam(_, _, body) if !args.is_empty() => {
                    let arg = args.pop().expect("nonempty");
                    self.spend()?;
                    head = body.open(&arg);
                }
                Term::Proj(side, inner) => {
                    let w = self.whnf(*inner)?;
                    if let Term::Pair(a, b) = w {
                        self.spend()?;
                        head = if side == 0 { *a } else { *b };
                    } else {
                        head = Term::proj(side, w);
                        break;
                    }
                }
                Term::Const(ref c) => {
                    let c = c.clone();
                    match self.delta(&c, &mut args)? {
                        Some(next) => head = next,
                        None => break,
                    }
                }
                _ => break,
            }
        }
        let mut out = head;
        while let Some(a) = args.pop() {
            out = Term::app(out, a);
        }
        Ok(out)
    }

    /// Tries to contract `c` applied to the pending arguments. On success the
    /// consumed arguments are removed and the contractum returned; on a stuck
    /// or under-applied head, any argument already evaluated is written back.
    fn delta(&mut self, c: &Const, args: &mut Vec<Term>) -> Result<Option<Term>, EvalError> {
        fn take(args: &mut Vec<Term>, n: usize) -> Vec<Term> {
            // first n applied arguments, in application order
            let at = args.len() - n;
            let mut tail = args.split_off(at);
            tail.reverse();
            tail
        }
        let have = args.len();
        let slot = |args: &mut Vec<Term>, i: usize| -> usize {
            // index of the i-th applied argument in the stack
            args.len() - 1 - i
        };
        match c {
            Const::If(_) if have >= 3 => {
                let pos = slot(args, 0);
                let cond = self.whnf(args[pos].clone())?;
                args[pos] = cond.clone();
                match cond {
                    Term::Const(Const::True) => {
                        let taken = take(args, 3);
                        self.spend()?;
                        Ok(Some(taken[1].clone()))
                    }
                    Term::Const(Const::False) => {
                        let taken = take(args, 3);
                        self.spend()?;
                        Ok(Some(taken[2].clone()))
                    }
                    _ => Ok(None),
                }
            }
            Const::Rec(_) if have >= 3 => {
                let pos = slot(args, 2);
                let n = self.nf(&args[pos].clone())?;
                args[pos] = n.clone();
                if let Some(n) = n.as_numeral() {
                    let taken = take(args, 3);
                    let (u, v) = (taken[0].clone(), taken[1].clone());
                    // iterative unfold with an eagerly evaluated accumulator:
                    // a step that uses its accumulator twice must not
                    // re-evaluate the whole recursion per use
                    let mut acc = u;
                    for k in 0..n {
                        self.spend()?;
                        acc = self.nf(&Term::apps(v.clone(), [Term::numeral(k), acc]))?;
                    }
                    self.spend()?;
                    Ok(Some(acc))
                } else if let Term::App(ref f, ref pred) = n {
                    if matches!(f.as_ref(), Term::Const(Const::Succ)) {
                        // open successor chain: one textual unfold
                        let taken = take(args, 3);
                        let (u, v) = (taken[0].clone(), taken[1].clone());
                        self.spend()?;
                        let again = Term::apps(
                            Term::Const(c.clone()),
                            [u, v.clone(), pred.as_ref().clone()],
                        );
                        Ok(Some(Term::apps(v, [pred.as_ref().clone(), again])))
                    } else {
                        Ok(None)
                    }
                } else {
                    Ok(None)
                }
            }
            Const::Min if have >= 1 => {
                let pos = slot(args, 0);
                let u = self.whnf(args[pos].clone())?;
                args[pos] = u.clone();
                if let Term::Const(Const::Upd(update)) = u {
                    take(args, 1);
                    self.spend()?;
                    Ok(Some(Term::numeral(update.min_index())))
                } else {
                    Ok(None)
                }
            }
            Const::Get if have >= 4 => {
                let pos = slot(args, 0);
                let u = self.whnf(args[pos].clone())?;
                args[pos] = u.clone();
                let mut nums = [0u64; 3];
                for (k, num) in nums.iter_mut().enumerate() {
                    let pos = slot(args, k + 1);
                    let v = self.nf(&args[pos].clone())?;
                    args[pos] = v.clone();
                    match v.as_numeral() {
                        Some(n) => *num = n,
                        None => return Ok(None),
                    }
                }
                if let Term::Const(Const::Upd(update)) = u {
                    take(args, 4);
                    self.spend()?;
                    Ok(Some(Term::numeral(update.lookup(nums[0], nums[1], nums[2]))))
                } else {
                    Ok(None)
                }
            }
            Const::MkUpd if have >= 3 => {
                let mut nums = [0u64; 3];
                for (k, num) in nums.iter_mut().enumerate() {
                    let pos = slot(args, k);
                    let v = self.nf(&args[pos].clone())?;
                    args[pos] = v.clone();
                    match v.as_numeral() {
                        Some(n) => *num = n,
                        None => return Ok(None),
                    }
                }
                take(args, 3);
                self.spend()?;
                Ok(Some(Term::upd(Update::singleton(nums[0], nums[1], nums[2]))))
            }
            Const::Cup if have >= 2 => {
                let mut ups = Vec::with_capacity(2);
                for k in 0..2 {
                    let pos = slot(args, k);
                    let v = self.whnf(args[pos].clone())?;
                    args[pos] = v.clone();
                    match v {
                        Term::Const(Const::Upd(u)) => ups.push(u),
                        _ => return Ok(None),
                    }
                }
                take(args, 2);
                self.spend()?;
                Ok(Some(Term::upd(ups[0].consistent_union(&ups[1]))))
            }
            Const::Skolem(i) if have >= 1 => {
                let pos = slot(args, 0);
                let v = self.nf(&args[pos].clone())?;
                args[pos] = v.clone();
                match (v.as_numeral(), self.state) {
                    (Some(n), Some(state)) => {
                        take(args, 1);
                        self.spend()?;
                        let answer = state.get(*i as u64, n);
                        self.log.push(OracleQuery {
                            index: *i as u64,
                            arg: n,
                            answer,
                        });
                        Ok(Some(Term::numeral(answer)))
                    }
                    _ => Ok(None),
                }
            }
            Const::Lib(op) => self.delta_lib(*op, args),
            _ => Ok(None),
        }
    }

    fn delta_lib(&mut self, op: LibOp, args: &mut Vec<Term>) -> Result<Option<Term>, EvalError> {
        let have = args.len();
        let slot = |args: &Vec<Term>, i: usize| -> usize { args.len() - 1 - i };
        match op {
            LibOp::Not if have >= 1 => {
                let pos = slot(args, 0);
                let v = self.whnf(args[pos].clone())?;
                args[pos] = v.clone();
                match v.as_bool() {
                    Some(b) => {
                        args.pop();
                        self.spend()?;
                        Ok(Some(Term::bool_const(!b)))
                    }
                    None => Ok(None),
                }
            }
            LibOp::And | LibOp::Or | LibOp::Imp if have >= 2 => {
                let pos = slot(args, 0);
                let v = self.whnf(args[pos].clone())?;
                args[pos] = v.clone();
                let b = match v.as_bool() {
                    Some(b) => b,
                    None => return Ok(None),
                };
                let at = args.len() - 2;
                let mut taken = args.split_off(at);
                taken.reverse();
                let second = taken.into_iter().nth(1).expect("two args");
                self.spend()?;
                // same branching as the definitional if-terms
                Ok(Some(match (op, b) {
                    (LibOp::And, true) | (LibOp::Or, false) | (LibOp::Imp, true) => second,
                    (LibOp::And, false) => Term::bool_const(false),
                    (LibOp::Or, true) => Term::bool_const(true),
                    (LibOp::Imp, false) => Term::bool_const(true),
                    _ => unreachable!(),
                }))
            }
            LibOp::Eq | LibOp::Lt | LibOp::Le | LibOp::Add | LibOp::Sub | LibOp::Mul
                if have >= 2 =>
            {
                let mut nums = [0u64; 2];
                for (k, num) in nums.iter_mut().enumerate() {
                    let pos = slot(args, k);
                    let v = self.nf(&args[pos].clone())?;
                    args[pos] = v.clone();
                    match v.as_numeral() {
                        Some(n) => *num = n,
                        None => return Ok(None),
                    }
                }
                let at = args.len() - 2;
                args.truncate(at);
                self.spend()?;
                let (m, n) = (nums[0], nums[1]);
                Ok(Some(match op {
                    LibOp::Eq => Term::bool_const(m == n),
                    LibOp::Lt => Term::bool_const(m < n),
                    LibOp::Le => Term::bool_const(m <= n),
                    LibOp::Add => Term::numeral(m + n),
                    LibOp::Sub => Term::numeral(m.saturating_sub(n)),
                    LibOp::Mul => Term::numeral(m * n),
                    _ => unreachable!(),
                }))
            }
            _ => Ok(None),
        }
    }
}

/// One leftmost-outermost reduction step of a pure term, if any redex exists.
/// Oracle constants never fire here.
pub fn step_pure(t: &Term) -> Option<Term> {
    if let Some(next) = contract_root(t) {
        return Some(next);
    }
    match t {
        Term::App(f, a) => step_pure(f)
            .map(|f2| Term::app(f2, a.as_ref().clone()))
            .or_else(|| step_pure(a).map(|a2| Term::app(f.as_ref().clone(), a2))),
        Term::Lam(h, ty, b) => step_pure(b).map(|b2| Term::lam(h.clone(), ty.clone(), b2)),
        Term::Pair(a, b) => step_pure(a)
            .map(|a2| Term::pair(a2, b.as_ref().clone()))
            .or_else(|| step_pure(b).map(|b2| Term::pair(a.as_ref().clone(), b2))),
        Term::Proj(i, b) => step_pure(b).map(|b2| Term::proj(*i, b2)),
        _ => None,
    }
}

fn contract_root(t: &Term) -> Option<Term> {
    if let Term::App(f, a) = t {
        if let Term::Lam(_, _, body) = f.as_ref() {
            return Some(body.open(a));
        }
    }
    if let Term::Proj(side, inner) = t {
        if let Term::Pair(a, b) = inner.as_ref() {
            return Some(if *side == 0 {
                a.as_ref().clone()
            } else {
                b.as_ref().clone()
            });
        }
    }
    let (head, args) = t.spine();
    let c = match head {
        Term::Const(c) => c,
        _ => return None,
    };
    let fire = |contractum: Term, consumed: usize| -> Option<Term> {
        Some(
            args[consumed..]
                .iter()
                .fold(contractum, |acc, &extra| Term::app(acc, extra.clone())),
        )
    };
    match c {
        Const::If(_) if args.len() >= 3 => match args[0] {
            Term::Const(Const::True) => fire(args[1].clone(), 3),
            Term::Const(Const::False) => fire(args[2].clone(), 3),
            _ => None,
        },
        Const::Rec(_) if args.len() >= 3 => match args[2] {
            Term::Const(Const::Zero) => fire(args[0].clone(), 3),
            Term::App(f, pred) if matches!(f.as_ref(), Term::Const(Const::Succ)) => {
                let again = Term::apps(
                    Term::Const(c.clone()),
                    [args[0].clone(), args[1].clone(), pred.as_ref().clone()],
                );
                fire(
                    Term::apps(args[1].clone(), [pred.as_ref().clone(), again]),
                    3,
                )
            }
            _ => None,
        },
        Const::Min if !args.is_empty() => match args[0] {
            Term::Const(Const::Upd(u)) => fire(Term::numeral(u.min_index()), 1),
            _ => None,
        },
        Const::Get if args.len() >= 4 => {
            let u = match args[0] {
                Term::Const(Const::Upd(u)) => u,
                _ => return None,
            };
            let nums: Option<Vec<u64>> = args[1..4].iter().map(|a| a.as_numeral()).collect();
            let nums = nums?;
            fire(Term::numeral(u.lookup(nums[0], nums[1], nums[2])), 4)
        }
        Const::MkUpd if args.len() >= 3 => {
            let nums: Option<Vec<u64>> = args[..3].iter().map(|a| a.as_numeral()).collect();
            let nums = nums?;
            fire(Term::upd(Update::singleton(nums[0], nums[1], nums[2])), 3)
        }
        Const::Cup if args.len() >= 2 => match (args[0], args[1]) {
            (Term::Const(Const::Upd(u1)), Term::Const(Const::Upd(u2))) => {
                fire(Term::upd(u1.consistent_union(u2)), 2)
            }
            _ => None,
        },
        Const::Lib(op) => {
            let op = *op;
            let fire_bool = |result: Term| fire(result, 2);
            match op {
                LibOp::Not if !args.is_empty() => match args[0].as_bool() {
                    Some(b) => fire(Term::bool_const(!b), 1),
                    None => None,
                },
                LibOp::And | LibOp::Or | LibOp::Imp if args.len() >= 2 => {
                    let b = args[0].as_bool()?;
                    match (op, b) {
                        (LibOp::And, true) | (LibOp::Or, false) | (LibOp::Imp, true) => {
                            fire_bool(args[1].clone())
                        }
                        (LibOp::And, false) | (LibOp::Imp, false) => {
                            fire_bool(Term::bool_const(op == LibOp::Imp))
                        }
                        (LibOp::Or, true) => fire_bool(Term::bool_const(true)),
                        _ => unreachable!(),
                    }
                }
                LibOp::Eq | LibOp::Lt | LibOp::Le | LibOp::Add | LibOp::Sub | LibOp::Mul
                    if args.len() >= 2 =>
                {
                    let m = args[0].as_numeral()?;
                    let n = args[1].as_numeral()?;
                    let result = match op {
                        LibOp::Eq => Term::bool_const(m == n),
                        LibOp::Lt => Term::bool_const(m < n),
                        LibOp::Le => Term::bool_const(m <= n),
                        LibOp::Add => Term::numeral(m + n),
                        LibOp::Sub => Term::numeral(m.saturating_sub(n)),
                        LibOp::Mul => Term::numeral(m * n),
                        _ => unreachable!(),
                    };
                    fire(result, 2)
                }
                _ => None,
            }
        }
        _ => None,
    }
}
