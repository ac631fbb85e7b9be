use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use super::types::SimpleType;
use crate::update::Update;

/// Arithmetic and boolean connectives assumed to exist as closed terms of the
/// base system. They are carried as constants with their own reduction rules;
/// `definition()` in the library module gives the pure rec/lambda term each
/// one abbreviates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LibOp {
    Not,
    And,
    Or,
    Imp,
    Eq,
    Lt,
    Le,
    Add,
    Sub,
    Mul,
}

impl LibOp {
    pub fn name(self) -> &'static str {
        match self {
            LibOp::Not => "not",
            LibOp::And => "and",
            LibOp::Or => "or",
            LibOp::Imp => "imp",
            LibOp::Eq => "eq",
            LibOp::Lt => "lt",
            LibOp::Le => "le",
            LibOp::Add => "add",
            LibOp::Sub => "sub",
            LibOp::Mul => "mul",
        }
    }

    pub fn infix_symbol(self) -> Option<&'static str> {
        Some(match self {
            LibOp::Not => return None,
            LibOp::And => "&&",
            LibOp::Or => "||",
            LibOp::Imp => "=>",
            LibOp::Eq => "=",
            LibOp::Lt => "<",
            LibOp::Le => "<=",
            LibOp::Add => "+",
            LibOp::Sub => "-",
            LibOp::Mul => "*",
        })
    }

    pub fn ty(self) -> SimpleType {
        use SimpleType::*;
        match self {
            LibOp::Not => SimpleType::arrow(Bool, Bool),
            LibOp::And | LibOp::Or | LibOp::Imp => {
                SimpleType::arrows([Bool, Bool], Bool)
            }
            LibOp::Eq | LibOp::Lt | LibOp::Le => SimpleType::arrows([Nat, Nat], Bool),
            LibOp::Add | LibOp::Sub | LibOp::Mul => SimpleType::arrows([Nat, Nat], Nat),
        }
    }
}

/// Constants of the calculus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Const {
    Zero,
    Succ,
    True,
    False,
    /// `if[tau] : Bool -> tau -> tau -> tau`
    If(SimpleType),
    /// `rec[tau] : tau -> (Nat -> tau -> tau) -> Nat -> tau`
    Rec(SimpleType),
    /// Least oracle index of an update, 0 on the empty one.
    Min,
    /// `get U a n l`: the value at (a, n), or l when undefined.
    Get,
    /// `mkupd a n m`: the singleton update.
    MkUpd,
    /// Consistent union of two update constants.
    Cup,
    /// An update constant.
    Upd(Update),
    /// Oracle constant `phi{i}` of type Nat -> Nat. Inert in pure terms;
    /// interpreted by a state during evaluation-at-state.
    Skolem(u32),
    Lib(LibOp),
}

impl Const {
    pub fn ty(&self) -> SimpleType {
        use SimpleType::*;
        match self {
            Const::Zero => Nat,
            Const::Succ => SimpleType::arrow(Nat, Nat),
            Const::True | Const::False => Bool,
            Const::If(tau) => SimpleType::arrows([Bool, tau.clone(), tau.clone()], tau.clone()),
            Const::Rec(tau) => SimpleType::arrows(
                [
                    tau.clone(),
                    SimpleType::arrow(Nat, SimpleType::arrow(tau.clone(), tau.clone())),
                    Nat,
                ],
                tau.clone(),
            ),
            Const::Min => SimpleType::arrow(Update, Nat),
            Const::Get => SimpleType::arrows([Update, Nat, Nat, Nat], Nat),
            Const::MkUpd => SimpleType::arrows([Nat, Nat, Nat], Update),
            Const::Cup => SimpleType::arrows([Update, Update], Update),
            Const::Upd(_) => Update,
            Const::Skolem(_) => SimpleType::arrow(Nat, Nat),
            Const::Lib(op) => op.ty(),
        }
    }
}

/// Terms, with a locally nameless representation: bound variables are de
/// Bruijn indices, free variables carry names. Binder names are printing
/// hints only and do not take part in equality or hashing, so alpha-equal
/// terms compare equal structurally.
#[derive(Debug, Clone)]
pub enum Term {
    /// Bound variable (de Bruijn index).
    Var(usize),
    /// Free variable, by name.
    Free(String),
    Const(Const),
    App(Box<Term>, Box<Term>),
    Lam(String, SimpleType, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Proj(u8, Box<Term>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Term::Var(i), Term::Var(j)) => i == j,
            (Term::Free(a), Term::Free(b)) => a == b,
            (Term::Const(a), Term::Const(b)) => a == b,
            (Term::App(f, a), Term::App(g, b)) => f == g && a == b,
            // binder hint ignored
            (Term::Lam(_, t, a), Term::Lam(_, u, b)) => t == u && a == b,
            (Term::Pair(a, b), Term::Pair(c, d)) => a == c && b == d,
            (Term::Proj(i, a), Term::Proj(j, b)) => i == j && a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Term::Var(i) => i.hash(state),
            Term::Free(n) => n.hash(state),
            Term::Const(c) => c.hash(state),
            Term::App(f, a) => {
                f.hash(state);
                a.hash(state);
            }
            Term::Lam(_, ty, b) => {
                ty.hash(state);
                b.hash(state);
            }
            Term::Pair(a, b) => {
                a.hash(state);
                b.hash(state);
            }
            Term::Proj(i, a) => {
                i.hash(state);
                a.hash(state);
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("not a numeral: {0}")]
    NotANumeral(String),
    #[error("not a boolean: {0}")]
    NotABoolean(String),
}

impl Term {
    pub fn free(name: impl Into<String>) -> Term {
        Term::Free(name.into())
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(fun: Term, args: I) -> Term {
        args.into_iter().fold(fun, Term::app)
    }

    pub fn lam(hint: impl Into<String>, ty: SimpleType, body: Term) -> Term {
        Term::Lam(hint.into(), ty, Box::new(body))
    }

    /// Abstracts the free variable `name`: every `Free(name)` in `body`
    /// becomes the bound variable of the new lambda.
    pub fn lam_named(name: impl Into<String>, ty: SimpleType, body: Term) -> Term {
        let name = name.into();
        let closed = body.close_free(&name, 0);
        Term::Lam(name, ty, Box::new(closed))
    }

    pub fn pair(left: Term, right: Term) -> Term {
        Term::Pair(Box::new(left), Box::new(right))
    }

    pub fn proj(side: u8, arg: Term) -> Term {
        debug_assert!(side < 2);
        Term::Proj(side, Box::new(arg))
    }

    pub fn upd(update: Update) -> Term {
        Term::Const(Const::Upd(update))
    }

    pub fn empty_update() -> Term {
        Term::upd(Update::empty())
    }

    pub fn skolem(index: u32) -> Term {
        Term::Const(Const::Skolem(index))
    }

    pub fn bool_const(b: bool) -> Term {
        Term::Const(if b { Const::True } else { Const::False })
    }

    /// `S(...S(0)...)` with `n` successors.
    pub fn numeral(n: u64) -> Term {
        let mut t = Term::Const(Const::Zero);
        for _ in 0..n {
            t = Term::app(Term::Const(Const::Succ), t);
        }
        t
    }

    /// The value of a successor chain ending in zero, if this is one.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut t = self;
        loop {
            match t {
                Term::Const(Const::Zero) => return Some(n),
                Term::App(f, a) if matches!(f.as_ref(), Term::Const(Const::Succ)) => {
                    n += 1;
                    t = a;
                }
                _ => return None,
            }
        }
    }

    /// Reads a numeral back. Fails on anything that is not a successor chain
    /// ending in zero, which on closed normal Nat terms signals an evaluator
    /// bug.
    pub fn read_numeral(&self) -> Result<u64, TermError> {
        self.as_numeral()
            .ok_or_else(|| TermError::NotANumeral(format!("{self}")))
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Term::Const(Const::True) => Some(true),
            Term::Const(Const::False) => Some(false),
            _ => None,
        }
    }

    pub fn read_bool(&self) -> Result<bool, TermError> {
        self.as_bool()
            .ok_or_else(|| TermError::NotABoolean(format!("{self}")))
    }

    pub fn is_numeral(&self) -> bool {
        self.as_numeral().is_some()
    }

    /// Free variable names, in first-occurrence order.
    pub fn free_names(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.walk_frees(&mut |name| {
            if seen.insert(name.to_string()) {
                out.push(name.to_string());
            }
        });
        out
    }

    fn walk_frees(&self, f: &mut impl FnMut(&str)) {
        match self {
            Term::Free(n) => f(n),
            Term::App(a, b) | Term::Pair(a, b) => {
                a.walk_frees(f);
                b.walk_frees(f);
            }
            Term::Lam(_, _, b) | Term::Proj(_, b) => b.walk_frees(f),
            Term::Var(_) | Term::Const(_) => {}
        }
    }

    pub fn has_skolem(&self) -> bool {
        match self {
            Term::Const(Const::Skolem(_)) => true,
            Term::Const(_) | Term::Var(_) | Term::Free(_) => false,
            Term::App(a, b) | Term::Pair(a, b) => a.has_skolem() || b.has_skolem(),
            Term::Lam(_, _, b) | Term::Proj(_, b) => b.has_skolem(),
        }
    }

    pub fn skolem_indices(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_skolems(&mut out);
        out
    }

    fn collect_skolems(&self, out: &mut BTreeSet<u32>) {
        match self {
            Term::Const(Const::Skolem(i)) => {
                out.insert(*i);
            }
            Term::App(a, b) | Term::Pair(a, b) => {
                a.collect_skolems(out);
                b.collect_skolems(out);
            }
            Term::Lam(_, _, b) | Term::Proj(_, b) => b.collect_skolems(out),
            _ => {}
        }
    }

    /// True when no de Bruijn index escapes the term.
    pub fn is_locally_closed(&self) -> bool {
        self.max_dangling().is_none()
    }

    /// Largest dangling index, if any (0-based, relative to the root).
    pub fn max_dangling(&self) -> Option<usize> {
        fn go(t: &Term, depth: usize, best: &mut Option<usize>) {
            match t {
                Term::Var(i) if *i >= depth => {
                    let dangling = *i - depth;
                    *best = Some(best.map_or(dangling, |b: usize| b.max(dangling)));
                }
                Term::Var(_) | Term::Free(_) | Term::Const(_) => {}
                Term::App(a, b) | Term::Pair(a, b) => {
                    go(a, depth, best);
                    go(b, depth, best);
                }
                Term::Lam(_, _, b) => go(b, depth + 1, best),
                Term::Proj(_, b) => go(b, depth, best),
            }
        }
        let mut best = None;
        go(self, 0, &mut best);
        best
    }

    /// Shifts dangling indices >= cutoff up by `amount`.
    pub fn shift_above(&self, cutoff: usize, amount: usize) -> Term {
        match self {
            Term::Var(i) => {
                if *i >= cutoff {
                    Term::Var(i + amount)
                } else {
                    Term::Var(*i)
                }
            }
            Term::Free(_) | Term::Const(_) => self.clone(),
            Term::App(a, b) => Term::app(a.shift_above(cutoff, amount), b.shift_above(cutoff, amount)),
            Term::Lam(h, ty, b) => Term::lam(h.clone(), ty.clone(), b.shift_above(cutoff + 1, amount)),
            Term::Pair(a, b) => {
                Term::pair(a.shift_above(cutoff, amount), b.shift_above(cutoff, amount))
            }
            Term::Proj(i, b) => Term::proj(*i, b.shift_above(cutoff, amount)),
        }
    }

    /// Beta-style opening: replaces the variable bound at level `k` (counted
    /// from this term's root) with `image` and removes the binder level, so
    /// indices above it slide down by one.
    pub fn open_at(&self, k: usize, image: &Term) -> Term {
        match self {
            Term::Var(i) => {
                if *i == k {
                    image.shift_above(0, k)
                } else if *i > k {
                    Term::Var(i - 1)
                } else {
                    Term::Var(*i)
                }
            }
            Term::Free(_) | Term::Const(_) => self.clone(),
            Term::App(a, b) => Term::app(a.open_at(k, image), b.open_at(k, image)),
            Term::Lam(h, ty, b) => Term::lam(h.clone(), ty.clone(), b.open_at(k + 1, image)),
            Term::Pair(a, b) => Term::pair(a.open_at(k, image), b.open_at(k, image)),
            Term::Proj(i, b) => Term::proj(*i, b.open_at(k, image)),
        }
    }

    pub fn open(&self, image: &Term) -> Term {
        self.open_at(0, image)
    }

    /// Substitutes `images[j]` for the dangling index `j` (innermost first)
    /// and removes those binder levels. Indices beyond the environment slide
    /// down. Images must be locally closed.
    pub fn open_env(&self, images: &[Term]) -> Term {
        self.open_env_from(0, images)
    }

    /// As [`Term::open_env`], but the first environment slot sits at binder
    /// level `depth` rather than at this term's root. Used when the binders
    /// live outside the term, e.g. in a surrounding formula.
    pub fn open_env_from(&self, depth: usize, images: &[Term]) -> Term {
        if images.is_empty() {
            return self.clone();
        }
        debug_assert!(images.iter().all(|t| t.is_locally_closed()));
        fn go(t: &Term, depth: usize, images: &[Term]) -> Term {
            match t {
                Term::Var(i) => {
                    if *i < depth {
                        Term::Var(*i)
                    } else {
                        let j = *i - depth;
                        if j < images.len() {
                            images[j].clone()
                        } else {
                            Term::Var(*i - images.len())
                        }
                    }
                }
                Term::Free(_) | Term::Const(_) => t.clone(),
                Term::App(a, b) => Term::app(go(a, depth, images), go(b, depth, images)),
                Term::Lam(h, ty, b) => {
                    Term::lam(h.clone(), ty.clone(), go(b, depth + 1, images))
                }
                Term::Pair(a, b) => Term::pair(go(a, depth, images), go(b, depth, images)),
                Term::Proj(i, b) => Term::proj(*i, go(b, depth, images)),
            }
        }
        go(self, depth, images)
    }

    /// Turns `Free(name)` into the bound variable at level `k`. The caller is
    /// responsible for wrapping a binder; no other index is renumbered, so
    /// the target level must be above every existing dangling index.
    pub fn close_free(&self, name: &str, k: usize) -> Term {
        match self {
            Term::Free(n) if n == name => Term::Var(k),
            Term::Var(_) | Term::Free(_) | Term::Const(_) => self.clone(),
            Term::App(a, b) => Term::app(a.close_free(name, k), b.close_free(name, k)),
            Term::Lam(h, ty, b) => Term::lam(h.clone(), ty.clone(), b.close_free(name, k + 1)),
            Term::Pair(a, b) => Term::pair(a.close_free(name, k), b.close_free(name, k)),
            Term::Proj(i, b) => Term::proj(*i, b.close_free(name, k)),
        }
    }

    /// Turns the free variables `names` (outermost first) into dangling
    /// indices, the j-th name at level `depth + base + (len - 1 - j)` when
    /// seen from binder depth `depth` inside the term. Existing indices are
    /// not renumbered, so `base` must exceed every dangling index.
    pub fn close_frees_from(&self, depth: usize, names: &[String], base: usize) -> Term {
        if names.is_empty() {
            return self.clone();
        }
        fn go(t: &Term, depth: usize, names: &[String], base: usize) -> Term {
            match t {
                Term::Free(n) => match names.iter().position(|m| m == n) {
                    Some(j) => Term::Var(depth + base + (names.len() - 1 - j)),
                    None => t.clone(),
                },
                Term::Var(_) | Term::Const(_) => t.clone(),
                Term::App(a, b) => {
                    Term::app(go(a, depth, names, base), go(b, depth, names, base))
                }
                Term::Lam(h, ty, b) => {
                    Term::lam(h.clone(), ty.clone(), go(b, depth + 1, names, base))
                }
                Term::Pair(a, b) => {
                    Term::pair(go(a, depth, names, base), go(b, depth, names, base))
                }
                Term::Proj(i, b) => Term::proj(*i, go(b, depth, names, base)),
            }
        }
        go(self, depth, names, base)
    }

    /// Simultaneous capture-avoiding substitution of free variables. Bound
    /// variables are indices, so images (which must be locally closed) can
    /// never be captured.
    pub fn substitute(&self, bindings: &BTreeMap<String, Term>) -> Term {
        if bindings.is_empty() {
            return self.clone();
        }
        debug_assert!(bindings.values().all(|t| t.is_locally_closed()));
        match self {
            Term::Free(n) => bindings.get(n).cloned().unwrap_or_else(|| self.clone()),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(a, b) => Term::app(a.substitute(bindings), b.substitute(bindings)),
            Term::Lam(h, ty, b) => Term::lam(h.clone(), ty.clone(), b.substitute(bindings)),
            Term::Pair(a, b) => Term::pair(a.substitute(bindings), b.substitute(bindings)),
            Term::Proj(i, b) => Term::proj(*i, b.substitute(bindings)),
        }
    }

    /// Peels an application spine: `f a b c` gives `(f, [a, b, c])`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        (head, args)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::print::fmt_term(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> SimpleType {
        SimpleType::Nat
    }

    #[test]
    fn alpha_equal_terms_compare_equal() {
        let a = Term::lam("x", nat(), Term::Var(0));
        let b = Term::lam("y", nat(), Term::Var(0));
        assert_eq!(a, b);
    }

    #[test]
    fn numeral_roundtrip() {
        assert_eq!(Term::numeral(0), Term::Const(Const::Zero));
        assert_eq!(
            Term::numeral(3),
            Term::app(
                Term::Const(Const::Succ),
                Term::app(
                    Term::Const(Const::Succ),
                    Term::app(Term::Const(Const::Succ), Term::Const(Const::Zero))
                )
            )
        );
        assert_eq!(Term::numeral(1).read_numeral(), Ok(1));
        for n in [0u64, 1, 2, 17, 64] {
            assert_eq!(Term::numeral(n).read_numeral(), Ok(n));
        }
        assert!(Term::free("x").read_numeral().is_err());
    }

    #[test]
    fn substitute_ignores_bound_occurrences() {
        // (\y. x)[x := 0]  ->  \y. 0
        let t = Term::lam_named("y", nat(), Term::free("x"));
        let mut b = BTreeMap::new();
        b.insert("x".to_string(), Term::numeral(0));
        assert_eq!(t.substitute(&b), Term::lam("y", nat(), Term::numeral(0)));

        // (\x. x)[x := 0]  ->  \x. x
        let id = Term::lam_named("x", nat(), Term::free("x"));
        assert_eq!(id.substitute(&b), id);
    }

    #[test]
    fn substitute_is_simultaneous() {
        // (x y)[x := \z. z, y := 0]  ->  (\z. z) 0
        let t = Term::app(Term::free("x"), Term::free("y"));
        let mut b = BTreeMap::new();
        b.insert("x".to_string(), Term::lam("z", nat(), Term::Var(0)));
        b.insert("y".to_string(), Term::numeral(0));
        assert_eq!(
            t.substitute(&b),
            Term::app(Term::lam("z", nat(), Term::Var(0)), Term::numeral(0))
        );
    }

    #[test]
    fn free_names_in_first_occurrence_order() {
        let t = Term::apps(
            Term::free("b"),
            [Term::free("a"), Term::free("b"), Term::free("c")],
        );
        assert_eq!(t.free_names(), vec!["b", "a", "c"]);
    }

    #[test]
    fn open_env_substitutes_innermost_first() {
        // body of \x.\y. x y with env [y := 1, x := 2] (innermost first)
        let body = Term::app(Term::Var(1), Term::Var(0));
        let opened = body.open_env(&[Term::numeral(1), Term::numeral(2)]);
        assert_eq!(opened, Term::app(Term::numeral(2), Term::numeral(1)));
    }

    #[test]
    fn lam_named_binds_exactly_that_name() {
        let body = Term::app(Term::free("x"), Term::free("y"));
        let t = Term::lam_named("x", nat(), body);
        assert_eq!(
            t,
            Term::lam("x", nat(), Term::app(Term::Var(0), Term::free("y")))
        );
    }
}
