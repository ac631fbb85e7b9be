//! Seeded generators shared by the property and acceptance suites.

#![allow(dead_code)]

use irk_core::kernel::{library, Const, SimpleType, Term};
use irk_core::logic::Formula;
use irk_core::update::Update;
use irk_core::State;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gen_atomic_type(rng: &mut impl Rng) -> SimpleType {
    match rng.gen_range(0..3) {
        0 => SimpleType::Nat,
        1 => SimpleType::Bool,
        _ => SimpleType::Update,
    }
}

pub fn gen_type(rng: &mut impl Rng, depth: usize) -> SimpleType {
    if depth == 0 || rng.gen_bool(0.6) {
        gen_atomic_type(rng)
    } else if rng.gen_bool(0.6) {
        SimpleType::arrow(gen_type(rng, depth - 1), gen_type(rng, depth - 1))
    } else {
        SimpleType::prod(gen_type(rng, depth - 1), gen_type(rng, depth - 1))
    }
}

pub fn gen_update(rng: &mut impl Rng) -> Update {
    let n = rng.gen_range(0..=3);
    let mut triples = Vec::new();
    for _ in 0..n {
        triples.push((
            rng.gen_range(0..4u64),
            rng.gen_range(0..6u64),
            rng.gen_range(0..10u64),
        ));
    }
    // duplicate keys may conflict; first write wins to keep generation total
    let mut seen = std::collections::BTreeSet::new();
    triples.retain(|&(a, b, _)| seen.insert((a, b)));
    Update::try_from_triples(triples).expect("keys deduplicated")
}

pub fn gen_state(rng: &mut impl Rng, max_value: u64) -> State {
    let n = rng.gen_range(0..=4);
    let mut s = State::new();
    for _ in 0..n {
        s = s.with(
            rng.gen_range(0..6u64),
            rng.gen_range(0..6u64),
            rng.gen_range(0..=max_value),
        );
    }
    s
}

/// A closed value of the type, built structurally.
fn canonical_value(rng: &mut impl Rng, want: &SimpleType, sk: bool) -> Term {
    match want {
        SimpleType::Nat => {
            if sk && rng.gen_bool(0.25) {
                Term::app(
                    Term::skolem(rng.gen_range(0..4)),
                    Term::numeral(rng.gen_range(0..=6)),
                )
            } else {
                Term::numeral(rng.gen_range(0..=6))
            }
        }
        SimpleType::Bool => Term::bool_const(rng.gen()),
        SimpleType::Update => Term::upd(gen_update(rng)),
        SimpleType::Arrow(d, c) => Term::lam("v", d.as_ref().clone(), {
            // body may not mention the binder; keep it closed and simple
            canonical_value(rng, c, sk)
        }),
        SimpleType::Prod(l, r) => {
            Term::pair(canonical_value(rng, l, sk), canonical_value(rng, r, sk))
        }
    }
}

/// A well-typed closed term of the wanted type. `sk` allows oracle constants
/// `phi{0..3}`.
pub fn gen_term(rng: &mut impl Rng, want: &SimpleType, depth: usize, sk: bool) -> Term {
    let mut env = Vec::new();
    go_term(rng, want, &mut env, depth, sk)
}

fn go_term(
    rng: &mut impl Rng,
    want: &SimpleType,
    env: &mut Vec<SimpleType>,
    depth: usize,
    sk: bool,
) -> Term {
    // bound variables of the right type, as de Bruijn distances
    let vars: Vec<usize> = env
        .iter()
        .rev()
        .enumerate()
        .filter(|(_, ty)| *ty == want)
        .map(|(i, _)| i)
        .collect();
    if depth == 0 {
        if !vars.is_empty() && rng.gen_bool(0.5) {
            return Term::Var(*vars.choose(rng).expect("nonempty"));
        }
        return canonical_value(rng, want, sk);
    }
    let d = depth - 1;
    let roll = rng.gen_range(0..100);
    if roll < 18 {
        return canonical_value(rng, want, sk);
    }
    if roll < 28 && !vars.is_empty() {
        return Term::Var(*vars.choose(rng).expect("nonempty"));
    }
    if roll < 38 {
        // beta redex
        let arg_ty = gen_type(rng, 1);
        env.push(arg_ty.clone());
        let body = go_term(rng, want, env, d, sk);
        env.pop();
        let arg = go_term(rng, &arg_ty, env, d, sk);
        return Term::app(Term::lam("z", arg_ty, body), arg);
    }
    if roll < 48 {
        // conditional at the wanted type
        let c = go_term(rng, &SimpleType::Bool, env, d, sk);
        let t = go_term(rng, want, env, d, sk);
        let e = go_term(rng, want, env, d, sk);
        return Term::apps(Term::Const(Const::If(want.clone())), [c, t, e]);
    }
    if roll < 56 {
        // primitive recursion at the wanted type, small recursion depth
        let base = go_term(rng, want, env, d, sk);
        let step_ty = SimpleType::arrow(
            SimpleType::Nat,
            SimpleType::arrow(want.clone(), want.clone()),
        );
        let step = go_term(rng, &step_ty, env, d, sk);
        let n = Term::numeral(rng.gen_range(0..=3));
        return Term::apps(Term::Const(Const::Rec(want.clone())), [base, step, n]);
    }
    if roll < 64 {
        // projection out of a generated pair type
        let other = gen_type(rng, 1);
        let side: u8 = rng.gen_range(0..2);
        let prod = if side == 0 {
            SimpleType::prod(want.clone(), other)
        } else {
            SimpleType::prod(other, want.clone())
        };
        let inner = go_term(rng, &prod, env, d, sk);
        return Term::proj(side, inner);
    }
    match want {
        SimpleType::Nat => match rng.gen_range(0..6) {
            0 => Term::app(
                Term::Const(Const::Succ),
                go_term(rng, &SimpleType::Nat, env, d, sk),
            ),
            1 => Term::app(
                Term::Const(Const::Min),
                go_term(rng, &SimpleType::Update, env, d, sk),
            ),
            2 => Term::apps(
                Term::Const(Const::Get),
                [
                    go_term(rng, &SimpleType::Update, env, d, sk),
                    go_term(rng, &SimpleType::Nat, env, d, sk),
                    go_term(rng, &SimpleType::Nat, env, d, sk),
                    go_term(rng, &SimpleType::Nat, env, d, sk),
                ],
            ),
            3 => library::add(
                go_term(rng, &SimpleType::Nat, env, d, sk),
                go_term(rng, &SimpleType::Nat, env, d, sk),
            ),
            4 => library::mul(
                go_term(rng, &SimpleType::Nat, env, d, sk),
                go_term(rng, &SimpleType::Nat, env, d, sk),
            ),
            _ if sk => Term::app(
                Term::skolem(rng.gen_range(0..4)),
                go_term(rng, &SimpleType::Nat, env, d, sk),
            ),
            _ => library::sub(
                go_term(rng, &SimpleType::Nat, env, d, sk),
                go_term(rng, &SimpleType::Nat, env, d, sk),
            ),
        },
        SimpleType::Bool => {
            let nat = SimpleType::Nat;
            let b = SimpleType::Bool;
            match rng.gen_range(0..6) {
                0 => library::eq(go_term(rng, &nat, env, d, sk), go_term(rng, &nat, env, d, sk)),
                1 => library::lt(go_term(rng, &nat, env, d, sk), go_term(rng, &nat, env, d, sk)),
                2 => library::le(go_term(rng, &nat, env, d, sk), go_term(rng, &nat, env, d, sk)),
                3 => library::not(go_term(rng, &b, env, d, sk)),
                4 => library::and(go_term(rng, &b, env, d, sk), go_term(rng, &b, env, d, sk)),
                _ => library::or(go_term(rng, &b, env, d, sk), go_term(rng, &b, env, d, sk)),
            }
        }
        SimpleType::Update => match rng.gen_range(0..3) {
            0 => Term::apps(
                Term::Const(Const::MkUpd),
                [
                    go_term(rng, &SimpleType::Nat, env, d, sk),
                    go_term(rng, &SimpleType::Nat, env, d, sk),
                    go_term(rng, &SimpleType::Nat, env, d, sk),
                ],
            ),
            1 => Term::apps(
                Term::Const(Const::Cup),
                [
                    go_term(rng, &SimpleType::Update, env, d, sk),
                    go_term(rng, &SimpleType::Update, env, d, sk),
                ],
            ),
            _ => Term::upd(gen_update(rng)),
        },
        SimpleType::Arrow(dom, cod) => {
            env.push(dom.as_ref().clone());
            let body = go_term(rng, cod, env, d, sk);
            env.pop();
            Term::lam("w", dom.as_ref().clone(), body)
        }
        SimpleType::Prod(l, r) => Term::pair(
            go_term(rng, l, env, d, sk),
            go_term(rng, r, env, d, sk),
        ),
    }
}

/// `a * Var(i) + b` over the quantifier scope, or a constant.
fn gen_linear(rng: &mut impl Rng, scope: usize) -> Term {
    if scope > 0 && rng.gen_bool(0.7) {
        let var = Term::Var(rng.gen_range(0..scope));
        let a = rng.gen_range(1..=3u64);
        let b = rng.gen_range(0..=8u64);
        let scaled = if a == 1 {
            var
        } else {
            library::mul(Term::numeral(a), var)
        };
        if b == 0 {
            scaled
        } else {
            library::add(scaled, Term::numeral(b))
        }
    } else {
        Term::numeral(rng.gen_range(0..=8))
    }
}

/// An arithmetical atom over the quantifier scope, at most one leading
/// boolean negation.
pub fn gen_atom(rng: &mut impl Rng, scope: usize) -> Formula {
    let l = gen_linear(rng, scope);
    let r = gen_linear(rng, scope);
    let core = match rng.gen_range(0..3) {
        0 => library::eq(l, r),
        1 => library::lt(l, r),
        _ => library::le(l, r),
    };
    if rng.gen_bool(0.25) {
        Formula::Atomic(library::not(core))
    } else {
        Formula::Atomic(core)
    }
}

/// Arbitrary arithmetical formulas over any connective; closed when
/// `scope == 0`.
pub fn gen_formula_any(rng: &mut impl Rng, depth: usize, scope: usize) -> Formula {
    if depth == 0 {
        return gen_atom(rng, scope);
    }
    let d = depth - 1;
    match rng.gen_range(0..10) {
        0 | 1 => gen_atom(rng, scope),
        2 => Formula::and(
            gen_formula_any(rng, d, scope),
            gen_formula_any(rng, d, scope),
        ),
        3 => Formula::or(
            gen_formula_any(rng, d, scope),
            gen_formula_any(rng, d, scope),
        ),
        4 => Formula::implies(
            gen_formula_any(rng, d, scope),
            gen_formula_any(rng, d, scope),
        ),
        5 => Formula::minus(
            gen_formula_any(rng, d, scope),
            gen_formula_any(rng, d, scope),
        ),
        6 | 7 => Formula::exists("y", SimpleType::Nat, gen_formula_any(rng, d, scope + 1)),
        _ => Formula::forall("y", SimpleType::Nat, gen_formula_any(rng, d, scope + 1)),
    }
}

/// Implication-free, universal-free formulas (the exact fragment of the
/// checkers). The right side of a subtraction stays quantifier-free so its
/// dual introduces no universal.
pub fn gen_formula_exact(rng: &mut impl Rng, depth: usize, scope: usize) -> Formula {
    if depth == 0 {
        return gen_atom(rng, scope);
    }
    let d = depth - 1;
    match rng.gen_range(0..8) {
        0 | 1 => gen_atom(rng, scope),
        2 => Formula::and(
            gen_formula_exact(rng, d, scope),
            gen_formula_exact(rng, d, scope),
        ),
        3 => Formula::or(
            gen_formula_exact(rng, d, scope),
            gen_formula_exact(rng, d, scope),
        ),
        4 => Formula::minus(gen_formula_exact(rng, d, scope), gen_atom(rng, scope)),
        _ => Formula::exists("y", SimpleType::Nat, gen_formula_exact(rng, d, scope + 1)),
    }
}

/// An atom true for every Nat value of the newest variable.
fn taut_atom(rng: &mut impl Rng) -> Formula {
    let b = rng.gen_range(0..=4u64);
    Formula::Atomic(library::le(
        Term::numeral(b),
        library::add(Term::Var(0), Term::numeral(b)),
    ))
}

/// An atom false for every Nat value of the newest variable.
fn absurd_atom(_rng: &mut impl Rng) -> Formula {
    Formula::Atomic(library::lt(Term::Var(0), Term::numeral(0)))
}

/// Pins the newest variable to `w`: true exactly at `w`.
fn pin_atom(rng: &mut impl Rng, w: u64) -> Formula {
    let a = rng.gen_range(1..=3u64);
    let b = rng.gen_range(0..=5u64);
    Formula::Atomic(library::eq(
        library::add(library::mul(Term::numeral(a), Term::Var(0)), Term::numeral(b)),
        Term::numeral(a * w + b),
    ))
}

/// Closed formulas whose bounded ground verdict is decisively `want_true`
/// at any bound >= 16: every existential in a true position has a planted
/// witness <= 12, and existentials never sit in false positions (a false
/// existential is undecidable by bounded search). Quantified bodies mention
/// only their own variable, so subformulas stay closed.
pub fn gen_formula_decidable(rng: &mut impl Rng, depth: usize, want_true: bool) -> Formula {
    if depth == 0 {
        return decidable_atom(rng, want_true);
    }
    let d = depth - 1;
    if want_true {
        match rng.gen_range(0..10) {
            0 | 1 => decidable_atom(rng, true),
            2 => Formula::and(
                gen_formula_decidable(rng, d, true),
                gen_formula_decidable(rng, d, true),
            ),
            3 => {
                let other: bool = rng.gen();
                Formula::or(
                    gen_formula_decidable(rng, d, true),
                    gen_formula_decidable(rng, d, other),
                )
            }
            4 => {
                let other: bool = rng.gen();
                Formula::implies(
                    gen_formula_decidable(rng, d, false),
                    gen_formula_decidable(rng, d, other),
                )
            }
            5 => Formula::minus(
                gen_formula_decidable(rng, d, true),
                gen_formula_decidable(rng, d, false),
            ),
            6 | 7 => {
                // plant a witness: the body is pinned to it
                let w = rng.gen_range(0..=12u64);
                let body = Formula::and(pin_atom(rng, w), gen_formula_decidable(rng, d, true));
                Formula::exists("y", SimpleType::Nat, body)
            }
            _ => {
                // true for all values of the bound variable
                let body = Formula::and(taut_atom(rng), gen_formula_decidable(rng, d, true));
                Formula::forall("y", SimpleType::Nat, body)
            }
        }
    } else {
        match rng.gen_range(0..8) {
            0 | 1 => decidable_atom(rng, false),
            2 => {
                let other: bool = rng.gen();
                Formula::and(
                    gen_formula_decidable(rng, d, false),
                    gen_formula_decidable(rng, d, other),
                )
            }
            3 => Formula::or(
                gen_formula_decidable(rng, d, false),
                gen_formula_decidable(rng, d, false),
            ),
            4 => Formula::implies(
                gen_formula_decidable(rng, d, true),
                gen_formula_decidable(rng, d, false),
            ),
            5 => {
                let other: bool = rng.gen();
                Formula::minus(
                    gen_formula_decidable(rng, d, other),
                    gen_formula_decidable(rng, d, true),
                )
            }
            _ => {
                // false at a small counterexample, decisively checkable
                let w = rng.gen_range(0..=8u64);
                let body = Formula::Atomic(library::not(match pin_atom(rng, w) {
                    Formula::Atomic(t) => t,
                    _ => unreachable!(),
                }));
                Formula::forall("y", SimpleType::Nat, body)
            }
        }
    }
}

fn decidable_atom(rng: &mut impl Rng, want_true: bool) -> Formula {
    let a = rng.gen_range(0..=8u64);
    let b = rng.gen_range(0..=8u64);
    if want_true {
        Formula::Atomic(library::le(Term::numeral(a.min(b)), Term::numeral(a.max(b))))
    } else {
        Formula::Atomic(library::lt(Term::numeral(a.max(b)), Term::numeral(a.min(b))))
    }
}

/// A candidate realizer matching the formula's realizer type: sometimes the
/// canonical shape, sometimes mutated (wrong witness, junk update, an oracle
/// guess for a witness, or a beta-wrapped version).
pub fn gen_realizer(rng: &mut impl Rng, f: &Formula, oracles: &[u32]) -> Term {
    let t = build_realizer(rng, f, oracles);
    if rng.gen_bool(0.3) {
        let ty = irk_core::realizer_type(f);
        Term::app(Term::lam("r", ty, Term::Var(0)), t)
    } else {
        t
    }
}

fn build_realizer(rng: &mut impl Rng, f: &Formula, oracles: &[u32]) -> Term {
    match f {
        Formula::Atomic(_) => {
            if rng.gen_bool(0.6) {
                Term::empty_update()
            } else if !oracles.is_empty() && rng.gen_bool(0.7) {
                let i = *oracles.choose(rng).expect("nonempty");
                Term::upd(Update::singleton(
                    i as u64,
                    rng.gen_range(0..3),
                    rng.gen_range(0..10),
                ))
            } else {
                Term::upd(Update::singleton(
                    rng.gen_range(90..95),
                    rng.gen_range(0..3),
                    rng.gen_range(0..10),
                ))
            }
        }
        Formula::And(a, b) => Term::pair(
            build_realizer(rng, a, oracles),
            build_realizer(rng, b, oracles),
        ),
        Formula::Or(a, b) => Term::pair(
            Term::bool_const(rng.gen()),
            Term::pair(
                build_realizer(rng, a, oracles),
                build_realizer(rng, b, oracles),
            ),
        ),
        Formula::Implies(a, b) => Term::lam(
            "u",
            irk_core::realizer_type(a),
            build_realizer(rng, b, oracles),
        ),
        Formula::Minus(a, b) => Term::pair(
            build_realizer(rng, a, oracles),
            build_realizer(rng, &b.inv_negate(), oracles),
        ),
        Formula::Exists(_, ty, body) => {
            let witness = if *ty == SimpleType::Nat {
                if !oracles.is_empty() && rng.gen_bool(0.35) {
                    Term::app(
                        Term::skolem(*oracles.choose(rng).expect("nonempty")),
                        Term::numeral(rng.gen_range(0..3)),
                    )
                } else {
                    Term::numeral(rng.gen_range(0..=8))
                }
            } else {
                irk_core::realize::default_term_of_type(ty)
            };
            let shape = body.open(&Term::numeral(0));
            Term::pair(witness, build_realizer(rng, &shape, oracles))
        }
        Formula::Forall(_, ty, body) => {
            let shape = body.open(&Term::numeral(0));
            Term::lam("n", ty.clone(), build_realizer(rng, &shape, oracles))
        }
    }
}
