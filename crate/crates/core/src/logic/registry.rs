use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use super::coding::code_args;
use super::formula::Formula;
use crate::kernel::{SimpleType, Term};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LogicError {
    #[error("formula is not arithmetical: {0}")]
    NotArithmetical(String),
    #[error("no formula registered at oracle index {0}")]
    UnregisteredIndex(u32),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
}

/// A registered Skolem formula `A(x⃗, y)`, stored namelessly: dangling index
/// 0 is the witness variable y, indices 1..=arity are the argument tuple
/// x⃗ with the innermost binder at 1. The coding order `⟨x⃗⟩` is outermost
/// first, i.e. slots arity, arity-1, ..., 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    body: Formula,
    arity: usize,
}

impl Pattern {
    pub fn new(body: Formula, arity: usize) -> Result<Pattern, LogicError> {
        if !body.is_arithmetical() {
            return Err(LogicError::NotArithmetical(body.to_string()));
        }
        if !body.free_names().is_empty() {
            return Err(LogicError::InvalidPattern(format!(
                "free names in pattern: {body}"
            )));
        }
        if let Some(d) = body.max_dangling() {
            if d > arity {
                return Err(LogicError::InvalidPattern(format!(
                    "index {d} escapes arity {arity}: {body}"
                )));
            }
        }
        Ok(Pattern { body, arity })
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dual(&self) -> Pattern {
        Pattern {
            body: self.body.inv_negate(),
            arity: self.arity,
        }
    }

    /// The closed instance `A(n⃗, y_val)`.
    pub fn instance(&self, args: &[u64], y_val: u64) -> Formula {
        assert_eq!(args.len(), self.arity, "pattern arity mismatch");
        // environment is innermost-first: slot 0 = y, slot j = j-th innermost
        // argument; coding order is outermost first, so reverse
        let mut env = vec![Term::numeral(y_val)];
        env.extend(args.iter().rev().map(|&n| Term::numeral(n)));
        self.body.open_env(&env)
    }

    /// The body with y replaced and the argument slots left open.
    pub fn open_witness(&self, witness: &Term) -> Formula {
        self.body.open(witness)
    }
}

impl fmt::Display for Pattern {
    /// Shown with an explicit quantifier prefix so the slots get names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut shown = Formula::exists("y", SimpleType::Nat, self.body.clone());
        for j in (1..=self.arity).rev() {
            shown = Formula::forall(format!("x{j}"), SimpleType::Nat, shown);
        }
        write!(f, "{shown}")
    }
}

/// Bijective table between oracle indices and Skolem formulas. Registering a
/// formula also registers its involutive dual at the next index, which the
/// truth compiler needs for universal quantifiers.
#[derive(Debug, Clone, Default)]
pub struct SkolemRegistry {
    patterns: Vec<Pattern>,
    index: HashMap<Pattern, u32>,
}

impl SkolemRegistry {
    pub fn new() -> SkolemRegistry {
        SkolemRegistry::default()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn pattern(&self, i: u32) -> Option<&Pattern> {
        self.patterns.get(i as usize)
    }

    pub fn lookup(&self, p: &Pattern) -> Option<u32> {
        self.index.get(p).copied()
    }

    /// Index of the dual formula.
    pub fn dual(&self, i: u32) -> Option<u32> {
        let p = self.pattern(i)?;
        self.lookup(&p.dual())
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Pattern)> {
        self.patterns.iter().enumerate().map(|(i, p)| (i as u32, p))
    }

    /// Interns a pattern and its dual; idempotent.
    pub fn intern(&mut self, p: Pattern) -> u32 {
        if let Some(i) = self.index.get(&p) {
            return *i;
        }
        let i = self.patterns.len() as u32;
        self.index.insert(p.clone(), i);
        self.patterns.push(p.clone());
        let dual = p.dual();
        if !self.index.contains_key(&dual) {
            let j = self.patterns.len() as u32;
            self.index.insert(dual.clone(), j);
            self.patterns.push(dual);
        }
        i
    }

    /// Registers the Skolem pattern at every quantifier site the truth
    /// compiler will visit. Free names are treated as an outermost argument
    /// prefix (first occurrence outermost), and the subtraction connective
    /// descends into the dual of its right side, mirroring the compiler.
    pub fn register_formula(&mut self, f: &Formula) -> Result<(), LogicError> {
        if !f.is_arithmetical() {
            return Err(LogicError::NotArithmetical(f.to_string()));
        }
        let frees = f.free_names();
        let closed = f.close_frees(&frees, 0);
        self.walk(&closed, frees.len())
    }

    fn walk(&mut self, f: &Formula, depth: usize) -> Result<(), LogicError> {
        match f {
            Formula::Atomic(_) => Ok(()),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.walk(a, depth)?;
                self.walk(b, depth)
            }
            Formula::Minus(a, b) => {
                self.walk(a, depth)?;
                self.walk(&b.inv_negate(), depth)
            }
            Formula::Exists(_, _, body) => {
                self.intern(Pattern::new(body.as_ref().clone(), depth)?);
                self.walk(body, depth + 1)
            }
            Formula::Forall(_, _, body) => {
                self.intern(Pattern::new(body.inv_negate(), depth)?);
                self.walk(body, depth + 1)
            }
        }
    }
}

/// Oracle indices the current run actually tracks; everything outside is
/// trivially trusted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GammaSet {
    restriction: Option<BTreeSet<u32>>,
}

impl GammaSet {
    /// All registered formulas (the default).
    pub fn all() -> GammaSet {
        GammaSet { restriction: None }
    }

    pub fn only<I: IntoIterator<Item = u32>>(indices: I) -> GammaSet {
        GammaSet {
            restriction: Some(indices.into_iter().collect()),
        }
    }

    pub fn contains(&self, i: u32) -> bool {
        self.restriction.as_ref().map_or(true, |s| s.contains(&i))
    }

    pub fn is_all(&self) -> bool {
        self.restriction.is_none()
    }
}

/// `∀x⃗. ∃y A(x⃗,y) → A(x⃗, Φ_i⟨x⃗⟩)`.
pub fn sk_axiom(registry: &SkolemRegistry, i: u32) -> Result<Formula, LogicError> {
    let p = registry
        .pattern(i)
        .ok_or(LogicError::UnregisteredIndex(i))?;
    let k = p.arity();
    let antecedent = Formula::exists("y", SimpleType::Nat, p.body().clone());
    let code = code_args(&(0..k).map(|j| Term::Var(k - 1 - j)).collect::<Vec<_>>());
    let phi = Term::app(Term::skolem(i), code);
    let consequent = p.body().open(&phi);
    let mut ax = Formula::implies(antecedent, consequent);
    for j in (1..=k).rev() {
        ax = Formula::forall(format!("x{j}"), SimpleType::Nat, ax);
    }
    Ok(ax)
}

/// `∀x⃗. A(x⃗) ∨ ¬A(x⃗)` over the free variables of A, with `¬A := A → ⊥`.
pub fn em_axiom(a: &Formula) -> Result<Formula, LogicError> {
    if !a.is_arithmetical() {
        return Err(LogicError::NotArithmetical(a.to_string()));
    }
    let names = a.free_names();
    let mut ax = Formula::or(a.clone(), Formula::neg(a.clone()));
    for name in names.into_iter().rev() {
        ax = Formula::forall_named(name, SimpleType::Nat, ax);
    }
    Ok(ax)
}

/// `∀x⃗. (∃y A) ∨ (∀y A⊥)` — the excluded-middle instance the canonical
/// Σ⁰₁ realizer targets, with the involutive dual on the right.
pub fn em1_axiom(registry: &SkolemRegistry, i: u32) -> Result<Formula, LogicError> {
    let p = registry
        .pattern(i)
        .ok_or(LogicError::UnregisteredIndex(i))?;
    let k = p.arity();
    let left = Formula::exists("y", SimpleType::Nat, p.body().clone());
    let right = Formula::forall("y", SimpleType::Nat, p.body().inv_negate());
    let mut ax = Formula::or(left, right);
    for j in (1..=k).rev() {
        ax = Formula::forall(format!("x{j}"), SimpleType::Nat, ax);
    }
    Ok(ax)
}
