//! The fixed library of boolean connectives and numeric operations.
//!
//! Each [`LibOp`] constant abbreviates a closed rec/lambda term of the base
//! system, given by [`definition`]. The evaluator computes the constants
//! directly on numerals and booleans; a property test pins that computation
//! to these definitions.

use super::term::{Const, LibOp, Term};
use super::types::SimpleType;

use SimpleType::{Bool, Nat};

pub fn lib(op: LibOp) -> Term {
    Term::Const(Const::Lib(op))
}

pub fn not(t: Term) -> Term {
    Term::app(lib(LibOp::Not), t)
}

pub fn and(a: Term, b: Term) -> Term {
    Term::apps(lib(LibOp::And), [a, b])
}

pub fn or(a: Term, b: Term) -> Term {
    Term::apps(lib(LibOp::Or), [a, b])
}

pub fn imp(a: Term, b: Term) -> Term {
    Term::apps(lib(LibOp::Imp), [a, b])
}

pub fn eq(a: Term, b: Term) -> Term {
    Term::apps(lib(LibOp::Eq), [a, b])
}

pub fn lt(a: Term, b: Term) -> Term {
    Term::apps(lib(LibOp::Lt), [a, b])
}

pub fn le(a: Term, b: Term) -> Term {
    Term::apps(lib(LibOp::Le), [a, b])
}

pub fn add(a: Term, b: Term) -> Term {
    Term::apps(lib(LibOp::Add), [a, b])
}

pub fn sub(a: Term, b: Term) -> Term {
    Term::apps(lib(LibOp::Sub), [a, b])
}

pub fn mul(a: Term, b: Term) -> Term {
    Term::apps(lib(LibOp::Mul), [a, b])
}

fn if_(ty: SimpleType, c: Term, t: Term, e: Term) -> Term {
    Term::apps(Term::Const(Const::If(ty)), [c, t, e])
}

fn rec(ty: SimpleType, base: Term, step: Term, n: Term) -> Term {
    Term::apps(Term::Const(Const::Rec(ty)), [base, step, n])
}

fn succ(t: Term) -> Term {
    Term::app(Term::Const(Const::Succ), t)
}

/// `\n:Nat. rec[Nat] 0 (\k.\acc. k) n` — predecessor, 0 at 0.
pub fn pred_def() -> Term {
    Term::lam(
        "n",
        Nat,
        rec(
            Nat,
            Term::numeral(0),
            Term::lam("k", Nat, Term::lam("acc", Nat, Term::Var(1))),
            Term::Var(0),
        ),
    )
}

/// `\n:Nat. rec[Bool] true (\k.\acc. false) n`
pub fn is_zero_def() -> Term {
    Term::lam(
        "n",
        Nat,
        rec(
            Bool,
            Term::bool_const(true),
            Term::lam("k", Nat, Term::lam("acc", Bool, Term::bool_const(false))),
            Term::Var(0),
        ),
    )
}

/// Floor division by two, via a flip-flop pair recursion.
pub fn half_def() -> Term {
    let pair_ty = SimpleType::prod(Nat, Bool);
    let step = Term::lam(
        "k",
        Nat,
        Term::lam(
            "p",
            pair_ty.clone(),
            if_(
                pair_ty.clone(),
                Term::proj(1, Term::Var(0)),
                Term::pair(succ(Term::proj(0, Term::Var(0))), Term::bool_const(false)),
                Term::pair(Term::proj(0, Term::Var(0)), Term::bool_const(true)),
            ),
        ),
    );
    Term::lam(
        "n",
        Nat,
        Term::proj(
            0,
            rec(
                pair_ty,
                Term::pair(Term::numeral(0), Term::bool_const(false)),
                step,
                Term::Var(0),
            ),
        ),
    )
}

/// The pure term each library constant abbreviates.
pub fn definition(op: LibOp) -> Term {
    match op {
        LibOp::Not => Term::lam(
            "b",
            Bool,
            if_(Bool, Term::Var(0), Term::bool_const(false), Term::bool_const(true)),
        ),
        LibOp::And => Term::lam(
            "a",
            Bool,
            Term::lam(
                "b",
                Bool,
                if_(Bool, Term::Var(1), Term::Var(0), Term::bool_const(false)),
            ),
        ),
        LibOp::Or => Term::lam(
            "a",
            Bool,
            Term::lam(
                "b",
                Bool,
                if_(Bool, Term::Var(1), Term::bool_const(true), Term::Var(0)),
            ),
        ),
        LibOp::Imp => Term::lam(
            "a",
            Bool,
            Term::lam(
                "b",
                Bool,
                if_(Bool, Term::Var(1), Term::Var(0), Term::bool_const(true)),
            ),
        ),
        // \m.\n. rec[Nat] n (\k.\acc. S acc) m — cost linear in m
        LibOp::Add => Term::lam(
            "m",
            Nat,
            Term::lam(
                "n",
                Nat,
                rec(
                    Nat,
                    Term::Var(0),
                    Term::lam("k", Nat, Term::lam("acc", Nat, succ(Term::Var(0)))),
                    Term::Var(1),
                ),
            ),
        ),
        // truncated: \m.\n. rec[Nat] m (\k.\acc. pred acc) n
        LibOp::Sub => Term::lam(
            "m",
            Nat,
            Term::lam(
                "n",
                Nat,
                rec(
                    Nat,
                    Term::Var(1),
                    Term::lam(
                        "k",
                        Nat,
                        Term::lam("acc", Nat, Term::app(pred_def(), Term::Var(0))),
                    ),
                    Term::Var(0),
                ),
            ),
        ),
        // \m.\n. rec[Nat] 0 (\k.\acc. add n acc) m
        LibOp::Mul => Term::lam(
            "m",
            Nat,
            Term::lam(
                "n",
                Nat,
                rec(
                    Nat,
                    Term::numeral(0),
                    Term::lam(
                        "k",
                        Nat,
                        Term::lam(
                            "acc",
                            Nat,
                            Term::apps(definition(LibOp::Add), [Term::Var(2), Term::Var(0)]),
                        ),
                    ),
                    Term::Var(1),
                ),
            ),
        ),
        // \m.\n. is_zero ((m - n) + (n - m))
        LibOp::Eq => Term::lam(
            "m",
            Nat,
            Term::lam(
                "n",
                Nat,
                Term::app(
                    is_zero_def(),
                    Term::apps(
                        definition(LibOp::Add),
                        [
                            Term::apps(definition(LibOp::Sub), [Term::Var(1), Term::Var(0)]),
                            Term::apps(definition(LibOp::Sub), [Term::Var(0), Term::Var(1)]),
                        ],
                    ),
                ),
            ),
        ),
        // \m.\n. is_zero (m - n)
        LibOp::Le => Term::lam(
            "m",
            Nat,
            Term::lam(
                "n",
                Nat,
                Term::app(
                    is_zero_def(),
                    Term::apps(definition(LibOp::Sub), [Term::Var(1), Term::Var(0)]),
                ),
            ),
        ),
        // \m.\n. le (S m) n
        LibOp::Lt => Term::lam(
            "m",
            Nat,
            Term::lam(
                "n",
                Nat,
                Term::apps(definition(LibOp::Le), [succ(Term::Var(1)), Term::Var(0)]),
            ),
        ),
    }
}
