//! Canonical printed syntax for terms.
//!
//! `\x:Nat. t`, application by juxtaposition, `<t,u>`, `p0 t`/`p1 t`,
//! `rec[Nat]`, `if[Bool]`, `phi{i}`, `upd{(a,n,m);...}`, decimal numerals,
//! and infix sugar for the library connectives. The command-line parser
//! accepts exactly this syntax, and parsing a printed term yields the same
//! term.

use std::fmt;

use super::term::{Const, LibOp, Term};

pub(crate) const KEYWORDS: &[&str] = &[
    "true", "false", "min", "get", "mkupd", "cup", "rec", "if", "phi", "upd", "p0", "p1", "S",
    "not", "and", "or", "imp", "eq", "lt", "le", "add", "sub", "mul", "Nat", "Bool", "Update",
    "all", "ex",
];

/// Precedence levels, loosest first.
const PREC_LAM: u8 = 0;
const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_CMP: u8 = 4;
const PREC_ADD: u8 = 5;
const PREC_MUL: u8 = 6;
const PREC_NOT: u8 = 7;
const PREC_APP: u8 = 8;
const PREC_ATOM: u8 = 9;

fn op_prec(op: LibOp) -> u8 {
    match op {
        LibOp::Imp => PREC_IMP,
        LibOp::Or => PREC_OR,
        LibOp::And => PREC_AND,
        LibOp::Eq | LibOp::Lt | LibOp::Le => PREC_CMP,
        LibOp::Add | LibOp::Sub => PREC_ADD,
        LibOp::Mul => PREC_MUL,
        LibOp::Not => PREC_NOT,
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&s)
}

/// A printable binder name not clashing with anything visible.
fn fresh_hint(hint: &str, avoid: &dyn Fn(&str) -> bool) -> String {
    let base = if is_ident(hint) { hint } else { "x" };
    if !avoid(base) {
        return base.to_string();
    }
    for i in 1u32.. {
        let candidate = format!("{base}{i}");
        if !avoid(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}

pub(crate) fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut scope = Vec::new();
    go(t, PREC_LAM, &mut scope, f)
}

/// Prints a term whose dangling indices are bound by `scope` (innermost
/// last), as when the binders live in a surrounding formula.
pub(crate) fn fmt_term_in_scope(
    t: &Term,
    scope: &mut Vec<String>,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    go(t, PREC_LAM, scope, f)
}

pub(crate) fn pick_fresh(hint: &str, avoid: &dyn Fn(&str) -> bool) -> String {
    fresh_hint(hint, avoid)
}

fn go(t: &Term, prec: u8, scope: &mut Vec<String>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(i) => {
            if *i < scope.len() {
                f.write_str(&scope[scope.len() - 1 - i])
            } else {
                // dangling index; only reachable when printing open pattern bodies
                write!(f, "#{}", i - scope.len())
            }
        }
        Term::Free(name) => f.write_str(name),
        Term::Const(c) => fmt_const(c, f),
        Term::Lam(hint, ty, body) => {
            let frees = body.free_names();
            let name = fresh_hint(hint, &|candidate: &str| {
                frees.iter().any(|n| n == candidate) || scope.iter().any(|n| n == candidate)
            });
            let parens = prec > PREC_LAM;
            if parens {
                f.write_str("(")?;
            }
            write!(f, "\\{name}:{ty}. ")?;
            scope.push(name);
            go(body, PREC_LAM, scope, f)?;
            scope.pop();
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
        Term::Pair(a, b) => {
            f.write_str("<")?;
            go(a, PREC_LAM, scope, f)?;
            f.write_str(", ")?;
            go(b, PREC_LAM, scope, f)?;
            f.write_str(">")
        }
        Term::Proj(side, a) => {
            let parens = prec > PREC_APP;
            if parens {
                f.write_str("(")?;
            }
            write!(f, "p{side} ")?;
            go(a, PREC_ATOM, scope, f)?;
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
        Term::App(_, _) => {
            if let Some(n) = t.as_numeral() {
                return write!(f, "{n}");
            }
            // infix sugar for saturated library operators
            if let Term::App(fun, b) = t {
                match fun.as_ref() {
                    Term::Const(Const::Lib(LibOp::Not)) => {
                        let parens = prec > PREC_NOT;
                        if parens {
                            f.write_str("(")?;
                        }
                        f.write_str("!")?;
                        go(b, PREC_NOT + 1, scope, f)?;
                        if parens {
                            f.write_str(")")?;
                        }
                        return Ok(());
                    }
                    Term::App(inner, a) => {
                        if let Term::Const(Const::Lib(op)) = inner.as_ref() {
                            if let Some(sym) = op.infix_symbol() {
                                let level = op_prec(*op);
                                let parens = prec > level;
                                if parens {
                                    f.write_str("(")?;
                                }
                                // left-assoc ops take themselves on the left,
                                // right-assoc (=>), on the right; comparisons
                                // are non-associative.
                                let (lp, rp) = match op {
                                    LibOp::Imp => (level + 1, level),
                                    LibOp::Eq | LibOp::Lt | LibOp::Le => (level + 1, level + 1),
                                    _ => (level, level + 1),
                                };
                                go(a, lp, scope, f)?;
                                write!(f, " {sym} ")?;
                                go(b, rp, scope, f)?;
                                if parens {
                                    f.write_str(")")?;
                                }
                                return Ok(());
                            }
                        }
                    }
                    _ => {}
                }
            }
            let (head, args) = t.spine();
            let parens = prec > PREC_APP;
            if parens {
                f.write_str("(")?;
            }
            go(head, PREC_ATOM, scope, f)?;
            for arg in args {
                f.write_str(" ")?;
                go(arg, PREC_ATOM, scope, f)?;
            }
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

fn fmt_const(c: &Const, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match c {
        Const::Zero => f.write_str("0"),
        Const::Succ => f.write_str("S"),
        Const::True => f.write_str("true"),
        Const::False => f.write_str("false"),
        Const::If(ty) => write!(f, "if[{ty}]"),
        Const::Rec(ty) => write!(f, "rec[{ty}]"),
        Const::Min => f.write_str("min"),
        Const::Get => f.write_str("get"),
        Const::MkUpd => f.write_str("mkupd"),
        Const::Cup => f.write_str("cup"),
        Const::Upd(u) => write!(f, "{u}"),
        Const::Skolem(i) => write!(f, "phi{{{i}}}"),
        Const::Lib(op) => f.write_str(op.name()),
    }
}
