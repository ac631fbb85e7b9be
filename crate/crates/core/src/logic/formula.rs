use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::kernel::{fmt_term_in_scope, library, pick_fresh, Const, LibOp, SimpleType, Term};

/// Formulas over atomic boolean terms. Quantifiers bind term variables with
/// the same nameless discipline as lambda binders: the binder name is a
/// printing hint, occurrences inside atoms are de Bruijn indices that count
/// both quantifier and lambda binders.
#[derive(Debug, Clone)]
pub enum Formula {
    Atomic(Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `A \ B`, the dual of implication: A and the opposite of B.
    Minus(Box<Formula>, Box<Formula>),
    Forall(String, SimpleType, Box<Formula>),
    Exists(String, SimpleType, Box<Formula>),
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        use Formula::*;
        match (self, other) {
            (Atomic(a), Atomic(b)) => a == b,
            (And(a, b), And(c, d))
            | (Or(a, b), Or(c, d))
            | (Implies(a, b), Implies(c, d))
            | (Minus(a, b), Minus(c, d)) => a == c && b == d,
            // binder hint ignored
            (Forall(_, t, a), Forall(_, u, b)) | (Exists(_, t, a), Exists(_, u, b)) => {
                t == u && a == b
            }
            _ => false,
        }
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        use Formula::*;
        std::mem::discriminant(self).hash(state);
        match self {
            Atomic(t) => t.hash(state),
            And(a, b) | Or(a, b) | Implies(a, b) | Minus(a, b) => {
                a.hash(state);
                b.hash(state);
            }
            Forall(_, ty, b) | Exists(_, ty, b) => {
                ty.hash(state);
                b.hash(state);
            }
        }
    }
}

impl Formula {
    pub fn atomic(t: Term) -> Formula {
        Formula::Atomic(t)
    }

    /// `⊥`, the atomic formula `false`.
    pub fn bottom() -> Formula {
        Formula::Atomic(Term::bool_const(false))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn minus(a: Formula, b: Formula) -> Formula {
        Formula::Minus(Box::new(a), Box::new(b))
    }

    /// `¬A` as the formula `A → ⊥`.
    pub fn neg(a: Formula) -> Formula {
        Formula::implies(a, Formula::bottom())
    }

    pub fn forall(hint: impl Into<String>, ty: SimpleType, body: Formula) -> Formula {
        Formula::Forall(hint.into(), ty, Box::new(body))
    }

    pub fn exists(hint: impl Into<String>, ty: SimpleType, body: Formula) -> Formula {
        Formula::Exists(hint.into(), ty, Box::new(body))
    }

    /// Quantifies over the free variable `name`, turning its occurrences into
    /// the new bound variable.
    pub fn forall_named(name: impl Into<String>, ty: SimpleType, body: Formula) -> Formula {
        let name = name.into();
        let closed = body.close_free(&name, 0);
        Formula::Forall(name, ty, Box::new(closed))
    }

    pub fn exists_named(name: impl Into<String>, ty: SimpleType, body: Formula) -> Formula {
        let name = name.into();
        let closed = body.close_free(&name, 0);
        Formula::Exists(name, ty, Box::new(closed))
    }

    pub fn map_atoms(&self, f: &mut impl FnMut(&Term) -> Term) -> Formula {
        match self {
            Formula::Atomic(t) => Formula::Atomic(f(t)),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Minus(a, b) => Formula::minus(a.map_atoms(f), b.map_atoms(f)),
            Formula::Forall(h, ty, b) => Formula::forall(h.clone(), ty.clone(), b.map_atoms(f)),
            Formula::Exists(h, ty, b) => Formula::exists(h.clone(), ty.clone(), b.map_atoms(f)),
        }
    }

    pub(crate) fn walk_atoms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Atomic(t) => f(t),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Minus(a, b) => {
                a.walk_atoms(f);
                b.walk_atoms(f);
            }
            Formula::Forall(_, _, b) | Formula::Exists(_, _, b) => b.walk_atoms(f),
        }
    }

    pub fn has_skolem(&self) -> bool {
        let mut found = false;
        self.walk_atoms(&mut |t| found |= t.has_skolem());
        found
    }

    pub fn skolem_indices(&self) -> std::collections::BTreeSet<u32> {
        let mut out = std::collections::BTreeSet::new();
        self.walk_atoms(&mut |t| out.extend(t.skolem_indices()));
        out
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atomic(_) => true,
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Minus(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Forall(_, _, _) | Formula::Exists(_, _, _) => false,
        }
    }

    /// Arithmetical: no oracle constant in any atom, and every quantifier
    /// ranges over Nat.
    pub fn is_arithmetical(&self) -> bool {
        match self {
            Formula::Atomic(t) => !t.has_skolem(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Minus(a, b) => a.is_arithmetical() && b.is_arithmetical(),
            Formula::Forall(_, ty, b) | Formula::Exists(_, ty, b) => {
                *ty == SimpleType::Nat && b.is_arithmetical()
            }
        }
    }

    /// Free variable names across all atoms, in first-occurrence order.
    pub fn free_names(&self) -> Vec<String> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        self.walk_atoms(&mut |t| {
            for name in t.free_names() {
                if seen.insert(name.clone()) {
                    out.push(name);
                }
            }
        });
        out
    }

    pub fn max_dangling(&self) -> Option<usize> {
        fn go(f: &Formula, depth: usize, best: &mut Option<usize>) {
            match f {
                Formula::Atomic(t) => {
                    if let Some(d) = t.max_dangling() {
                        if d >= depth {
                            let dangling = d - depth;
                            *best = Some(best.map_or(dangling, |b: usize| b.max(dangling)));
                        }
                    }
                }
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Minus(a, b) => {
                    go(a, depth, best);
                    go(b, depth, best);
                }
                Formula::Forall(_, _, b) | Formula::Exists(_, _, b) => go(b, depth + 1, best),
            }
        }
        let mut best = None;
        go(self, 0, &mut best);
        best
    }

    /// Closed: no free names and no dangling indices.
    pub fn is_closed(&self) -> bool {
        self.free_names().is_empty() && self.max_dangling().is_none()
    }

    /// Opens the outermost binder slot with `image` (which must be locally
    /// closed relative to itself; its own dangling indices are shifted as
    /// they move under binders).
    pub fn open(&self, image: &Term) -> Formula {
        self.open_at(0, image)
    }

    pub fn open_at(&self, k: usize, image: &Term) -> Formula {
        match self {
            Formula::Atomic(t) => Formula::Atomic(t.open_at(k, image)),
            Formula::And(a, b) => Formula::and(a.open_at(k, image), b.open_at(k, image)),
            Formula::Or(a, b) => Formula::or(a.open_at(k, image), b.open_at(k, image)),
            Formula::Implies(a, b) => Formula::implies(a.open_at(k, image), b.open_at(k, image)),
            Formula::Minus(a, b) => Formula::minus(a.open_at(k, image), b.open_at(k, image)),
            Formula::Forall(h, ty, b) => {
                Formula::forall(h.clone(), ty.clone(), b.open_at(k + 1, image))
            }
            Formula::Exists(h, ty, b) => {
                Formula::exists(h.clone(), ty.clone(), b.open_at(k + 1, image))
            }
        }
    }

    /// Substitutes the environment (innermost slot first) for this formula's
    /// dangling indices.
    pub fn open_env(&self, images: &[Term]) -> Formula {
        fn go(f: &Formula, depth: usize, images: &[Term]) -> Formula {
            match f {
                Formula::Atomic(t) => Formula::Atomic(t.open_env_from(depth, images)),
                Formula::And(a, b) => Formula::and(go(a, depth, images), go(b, depth, images)),
                Formula::Or(a, b) => Formula::or(go(a, depth, images), go(b, depth, images)),
                Formula::Implies(a, b) => {
                    Formula::implies(go(a, depth, images), go(b, depth, images))
                }
                Formula::Minus(a, b) => {
                    Formula::minus(go(a, depth, images), go(b, depth, images))
                }
                Formula::Forall(h, ty, b) => {
                    Formula::forall(h.clone(), ty.clone(), go(b, depth + 1, images))
                }
                Formula::Exists(h, ty, b) => {
                    Formula::exists(h.clone(), ty.clone(), go(b, depth + 1, images))
                }
            }
        }
        if images.is_empty() {
            self.clone()
        } else {
            go(self, 0, images)
        }
    }

    pub fn close_free(&self, name: &str, k: usize) -> Formula {
        match self {
            Formula::Atomic(t) => Formula::Atomic(t.close_free(name, k)),
            Formula::And(a, b) => Formula::and(a.close_free(name, k), b.close_free(name, k)),
            Formula::Or(a, b) => Formula::or(a.close_free(name, k), b.close_free(name, k)),
            Formula::Implies(a, b) => {
                Formula::implies(a.close_free(name, k), b.close_free(name, k))
            }
            Formula::Minus(a, b) => Formula::minus(a.close_free(name, k), b.close_free(name, k)),
            Formula::Forall(h, ty, b) => {
                Formula::forall(h.clone(), ty.clone(), b.close_free(name, k + 1))
            }
            Formula::Exists(h, ty, b) => {
                Formula::exists(h.clone(), ty.clone(), b.close_free(name, k + 1))
            }
        }
    }

    /// As [`Term::close_frees_from`], lifted over the formula structure.
    pub fn close_frees(&self, names: &[String], base: usize) -> Formula {
        fn go(f: &Formula, depth: usize, names: &[String], base: usize) -> Formula {
            match f {
                Formula::Atomic(t) => Formula::Atomic(t.close_frees_from(depth, names, base)),
                Formula::And(a, b) => {
                    Formula::and(go(a, depth, names, base), go(b, depth, names, base))
                }
                Formula::Or(a, b) => {
                    Formula::or(go(a, depth, names, base), go(b, depth, names, base))
                }
                Formula::Implies(a, b) => {
                    Formula::implies(go(a, depth, names, base), go(b, depth, names, base))
                }
                Formula::Minus(a, b) => {
                    Formula::minus(go(a, depth, names, base), go(b, depth, names, base))
                }
                Formula::Forall(h, ty, b) => {
                    Formula::forall(h.clone(), ty.clone(), go(b, depth + 1, names, base))
                }
                Formula::Exists(h, ty, b) => {
                    Formula::exists(h.clone(), ty.clone(), go(b, depth + 1, names, base))
                }
            }
        }
        if names.is_empty() {
            self.clone()
        } else {
            go(self, 0, names, base)
        }
    }

    /// Simultaneous substitution of free names in every atom.
    pub fn substitute(&self, bindings: &BTreeMap<String, Term>) -> Formula {
        self.map_atoms(&mut |t| t.substitute(bindings))
    }

    /// The formula approximated at a state: every oracle constant in an atom
    /// is replaced by the synthesized state term. The result mentions no
    /// oracle.
    pub fn approximate(&self, state: &crate::state::State) -> Formula {
        self.map_atoms(&mut |t| crate::eval::approximate(t, state))
    }

    /// Involutive negation. Atoms are first normalized to at most one
    /// leading boolean negation (even stacks stripped), then toggled; the
    /// connectives follow the de Morgan table, with implication and
    /// subtraction swapping.
    pub fn inv_negate(&self) -> Formula {
        match self {
            Formula::Atomic(t) => {
                let (nots, core) = strip_nots(t);
                if nots % 2 == 0 {
                    Formula::Atomic(library::not(core.clone()))
                } else {
                    Formula::Atomic(core.clone())
                }
            }
            Formula::And(a, b) => Formula::or(a.inv_negate(), b.inv_negate()),
            Formula::Or(a, b) => Formula::and(a.inv_negate(), b.inv_negate()),
            Formula::Implies(a, b) => {
                Formula::minus(a.as_ref().clone(), b.as_ref().clone())
            }
            Formula::Minus(a, b) => {
                Formula::implies(a.as_ref().clone(), b.as_ref().clone())
            }
            Formula::Forall(h, ty, b) => Formula::exists(h.clone(), ty.clone(), b.inv_negate()),
            Formula::Exists(h, ty, b) => Formula::forall(h.clone(), ty.clone(), b.inv_negate()),
        }
    }
}

/// Splits a stack of boolean negations off an atom's payload.
fn strip_nots(t: &Term) -> (usize, &Term) {
    let mut count = 0;
    let mut cur = t;
    while let Term::App(f, a) = cur {
        if matches!(f.as_ref(), Term::Const(Const::Lib(LibOp::Not))) {
            count += 1;
            cur = a;
        } else {
            break;
        }
    }
    (count, cur)
}

const FPREC_QUANT: u8 = 0;
const FPREC_IMP: u8 = 1;
const FPREC_OR: u8 = 2;
const FPREC_AND: u8 = 3;

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut scope = Vec::new();
        fmt_formula(self, FPREC_QUANT, &mut scope, f)
    }
}

fn fmt_formula(
    formula: &Formula,
    prec: u8,
    scope: &mut Vec<String>,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    match formula {
        Formula::Atomic(t) => fmt_term_in_scope(t, scope, f),
        Formula::And(a, b) => {
            let parens = prec > FPREC_AND;
            if parens {
                f.write_str("(")?;
            }
            fmt_formula(a, FPREC_AND, scope, f)?;
            f.write_str(" & ")?;
            fmt_formula(b, FPREC_AND + 1, scope, f)?;
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
        Formula::Or(a, b) => {
            let parens = prec > FPREC_OR;
            if parens {
                f.write_str("(")?;
            }
            fmt_formula(a, FPREC_OR, scope, f)?;
            f.write_str(" | ")?;
            fmt_formula(b, FPREC_OR + 1, scope, f)?;
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
        Formula::Implies(a, b) | Formula::Minus(a, b) => {
            let parens = prec > FPREC_IMP;
            if parens {
                f.write_str("(")?;
            }
            fmt_formula(a, FPREC_IMP + 1, scope, f)?;
            f.write_str(if matches!(formula, Formula::Implies(_, _)) {
                " -> "
            } else {
                " \\ "
            })?;
            fmt_formula(b, FPREC_IMP, scope, f)?;
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
        Formula::Forall(hint, ty, body) | Formula::Exists(hint, ty, body) => {
            let frees = body.free_names();
            let name = pick_fresh(hint, &|candidate: &str| {
                frees.iter().any(|n| n == candidate) || scope.iter().any(|n| n == candidate)
            });
            let parens = prec > FPREC_QUANT;
            if parens {
                f.write_str("(")?;
            }
            let kw = if matches!(formula, Formula::Forall(_, _, _)) {
                "all"
            } else {
                "ex"
            };
            write!(f, "{kw} {name}:{ty}. ")?;
            scope.push(name);
            fmt_formula(body, FPREC_QUANT, scope, f)?;
            scope.pop();
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}
