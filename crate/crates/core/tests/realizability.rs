//! Realizability properties: the saturation proposition (equal-at-state
//! terms realize the same formulas) and sampled checker coherence.

mod common;

use irk_core::eval::{eval_at, EvalBudget};
use irk_core::kernel::{library, SimpleType, Term};
use irk_core::logic::{Formula, GammaSet, SkolemRegistry};
use irk_core::realize::{check_at, CandidatePool};
use irk_core::State;

use rand::Rng;

fn budget() -> EvalBudget {
    EvalBudget::default()
}

/// A formula with one free Nat variable x, in the exact fragment (atoms,
/// conjunction, existentials).
fn formula_in_x(rng: &mut impl Rng) -> Formula {
    match rng.gen_range(0..4) {
        0 => Formula::Atomic(library::eq(Term::free("x"), Term::numeral(rng.gen_range(0..6)))),
        1 => Formula::Atomic(library::le(Term::free("x"), Term::numeral(rng.gen_range(0..9)))),
        2 => Formula::exists(
            "y",
            SimpleType::Nat,
            Formula::Atomic(library::eq(Term::Var(0), Term::free("x"))),
        ),
        _ => Formula::and(
            Formula::Atomic(library::le(Term::numeral(0), Term::free("x"))),
            Formula::exists(
                "y",
                SimpleType::Nat,
                Formula::Atomic(library::eq(
                    library::add(Term::Var(0), Term::numeral(1)),
                    Term::free("x"),
                )),
            ),
        ),
    }
}

/// Wraps a term without changing its value anywhere: a beta redex.
fn wrap(t: &Term, ty: SimpleType) -> Term {
    Term::app(Term::lam("z", ty, Term::Var(0)), t.clone())
}

/// If t1 = t2 and u1 = u2 at the state, then t1 realizes B[u1/x] exactly
/// when t2 realizes B[u2/x]. Exercised on the exact fragment.
#[test]
fn saturation_proposition_on_equal_at_state_terms() {
    let mut rng = common::rng(0x5A70);
    for round in 0..150 {
        let b = formula_in_x(&mut rng);
        let mut reg = SkolemRegistry::new();
        reg.register_formula(&b).expect("arithmetical");

        let s = common::gen_state(&mut rng, 9);
        // u1 and u2: same value at s, different terms
        let u1 = if rng.gen_bool(0.5) {
            Term::numeral(rng.gen_range(0..6))
        } else {
            Term::app(Term::skolem(rng.gen_range(0..3)), Term::numeral(rng.gen_range(0..4)))
        };
        let u2 = wrap(&library::add(u1.clone(), Term::numeral(0)), SimpleType::Nat);
        let (v1, _) = eval_at(&u1, &s, budget()).expect("eval u1");
        let (v2, _) = eval_at(&u2, &s, budget()).expect("eval u2");
        assert_eq!(v1, v2, "wrap must preserve the value");

        let mut bind1 = std::collections::BTreeMap::new();
        bind1.insert("x".to_string(), u1.clone());
        let b1 = b.substitute(&bind1);
        let mut bind2 = std::collections::BTreeMap::new();
        bind2.insert("x".to_string(), u2.clone());
        let b2 = b.substitute(&bind2);

        // t1 and t2: a candidate realizer and its wrapped variant
        let t1 = common::gen_realizer(&mut rng, &b1, &[0, 1]);
        let t2 = wrap(&t1, irk_core::realizer_type(&b1));

        let pool = CandidatePool::default_for(&b1);
        let gamma = GammaSet::all();
        let verdict1 =
            check_at(&t1, &b1, &s, &pool, &gamma, &reg, budget()).expect("check t1 against B[u1]");
        let verdict2 =
            check_at(&t2, &b2, &s, &pool, &gamma, &reg, budget()).expect("check t2 against B[u2]");
        assert_eq!(
            verdict1.shape(),
            verdict2.shape(),
            "round {round}: B = {b}, u1 = {u1}, verdicts {verdict1} vs {verdict2}"
        );
    }
}

/// An update acceptable as a realizer of bottom stops being one once applied:
/// learning is consumed by the state it corrects.
#[test]
fn accepted_learning_updates_are_consumed_by_application() {
    use irk_core::logic::Pattern;
    use irk_core::update::Update;

    let mut rng = common::rng(0x5A71);
    for _ in 0..60 {
        let target = rng.gen_range(1..=9u64);
        let mut reg = SkolemRegistry::new();
        let i = reg.intern(
            Pattern::new(
                Formula::Atomic(library::eq(Term::Var(0), Term::numeral(target))),
                0,
            )
            .expect("pattern"),
        );
        let s = State::new(); // holds 0, which is wrong for target >= 1
        let t = Term::upd(Update::singleton(i as u64, 0, target));
        let pool = CandidatePool::default_for(&Formula::bottom());
        let gamma = GammaSet::all();
        let before = check_at(&t, &Formula::bottom(), &s, &pool, &gamma, &reg, budget())
            .expect("check before");
        assert!(before.passes(), "triple should be learning: {before}");

        let s2 = s.apply_update(&Update::singleton(i as u64, 0, target));
        let after = check_at(&t, &Formula::bottom(), &s2, &pool, &gamma, &reg, budget())
            .expect("check after");
        assert!(after.is_fails(), "consumed update still accepted: {after}");
    }
}
