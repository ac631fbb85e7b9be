//! Tuple coding: an injection of ℕ^k into ℕ and its term counterpart.
//!
//! Arity 1 is the identity; higher arities right-nest the Cantor pairing
//! `<a,b> = (a+b)(a+b+1)/2 + b`. The empty tuple codes to 0, which is where
//! zero-argument oracle points live.

use crate::kernel::{library, SimpleType, Term};

pub fn cantor_pair(a: u64, b: u64) -> u64 {
    let s = a + b;
    s * (s + 1) / 2 + b
}

fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

pub fn cantor_unpair(z: u64) -> (u64, u64) {
    let w = (isqrt(8 * z + 1) - 1) / 2;
    let t = w * (w + 1) / 2;
    let b = z - t;
    let a = w - b;
    (a, b)
}

/// `⟨n⃗⟩`. Bijective at every arity; the empty tuple codes to 0.
pub fn encode_tuple(values: &[u64]) -> u64 {
    match values {
        [] => 0,
        [n] => *n,
        [n, rest @ ..] => cantor_pair(*n, encode_tuple(rest)),
    }
}

/// Inverse of [`encode_tuple`] at a known arity.
pub fn decode_tuple(code: u64, arity: usize) -> Vec<u64> {
    match arity {
        0 => Vec::new(),
        1 => vec![code],
        _ => {
            let (head, rest) = cantor_unpair(code);
            let mut out = vec![head];
            out.extend(decode_tuple(rest, arity - 1));
            out
        }
    }
}

/// The pairing as a term: `\a.\b. half ((a+b) * S (a+b)) + b`.
fn cantor_pair_term(a: Term, b: Term) -> Term {
    let s = library::add(a, b.clone());
    library::add(
        Term::app(library::half_def(), library::mul(s.clone(), Term::app(Term::Const(crate::kernel::Const::Succ), s))),
        b,
    )
}

/// Applies the arity-k coding to argument terms.
pub fn code_args(args: &[Term]) -> Term {
    match args {
        [] => Term::numeral(0),
        [t] => t.clone(),
        [t, rest @ ..] => cantor_pair_term(t.clone(), code_args(rest)),
    }
}

/// The closed term of type `Nat^k -> Nat` computing the arity-k coding. At
/// arity 0 this is the constant 0.
pub fn code_term(arity: usize) -> Term {
    let vars: Vec<Term> = (0..arity).map(|j| Term::Var(arity - 1 - j)).collect();
    let mut body = code_args(&vars);
    for j in (0..arity).rev() {
        body = Term::lam(format!("x{}", j + 1), SimpleType::Nat, body);
    }
    body
}
