use std::fmt;

use thiserror::Error;

use super::term::Term;
use super::types::SimpleType;

/// Ordered typing assumptions for free variables. Duplicate names rejected.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypingContext {
    entries: Vec<(String, SimpleType)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("duplicate binding for {0}")]
pub struct DuplicateBinding(pub String);

impl TypingContext {
    pub fn new() -> Self {
        TypingContext::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, ty: SimpleType) -> Result<(), DuplicateBinding> {
        let name = name.into();
        if self.lookup(&name).is_some() {
            return Err(DuplicateBinding(name));
        }
        self.entries.push((name, ty));
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<&SimpleType> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SimpleType)> {
        self.entries.iter().map(|(n, t)| (n.as_str(), t))
    }
}

/// Where in the term a typing error was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStep {
    AppFun,
    AppArg,
    LamBody,
    PairLeft,
    PairRight,
    ProjArg,
}

impl fmt::Display for PathStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PathStep::AppFun => "fun",
            PathStep::AppArg => "arg",
            PathStep::LamBody => "body",
            PathStep::PairLeft => "left",
            PathStep::PairRight => "right",
            PathStep::ProjArg => "proj",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub struct TypeError {
    pub path: Vec<PathStep>,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type error at ")?;
        if self.path.is_empty() {
            write!(f, "root")?;
        } else {
            for (i, step) in self.path.iter().enumerate() {
                if i > 0 {
                    write!(f, ".")?;
                }
                write!(f, "{step}")?;
            }
        }
        write!(f, ": expected {}, found {}", self.expected, self.found)
    }
}

/// The unique type of `t` under `ctx`, or the first failing rule.
pub fn typecheck(t: &Term, ctx: &TypingContext) -> Result<SimpleType, TypeError> {
    let mut bound = Vec::new();
    let mut path = Vec::new();
    check(t, ctx, &mut bound, &mut path)
}

fn err(path: &[PathStep], expected: impl Into<String>, found: impl Into<String>) -> TypeError {
    TypeError {
        path: path.to_vec(),
        expected: expected.into(),
        found: found.into(),
    }
}

fn check(
    t: &Term,
    ctx: &TypingContext,
    bound: &mut Vec<SimpleType>,
    path: &mut Vec<PathStep>,
) -> Result<SimpleType, TypeError> {
    match t {
        Term::Var(i) => {
            // indices count binders inside-out
            if *i < bound.len() {
                Ok(bound[bound.len() - 1 - i].clone())
            } else {
                Err(err(path, "a bound variable in scope", format!("dangling index {i}")))
            }
        }
        Term::Free(name) => ctx
            .lookup(name)
            .cloned()
            .ok_or_else(|| err(path, format!("a binding for {name}"), "no such variable".to_string())),
        Term::Const(c) => Ok(c.ty()),
        Term::App(f, a) => {
            path.push(PathStep::AppFun);
            let fun_ty = check(f, ctx, bound, path)?;
            path.pop();
            match fun_ty {
                SimpleType::Arrow(dom, cod) => {
                    path.push(PathStep::AppArg);
                    let arg_ty = check(a, ctx, bound, path)?;
                    path.pop();
                    if arg_ty == *dom {
                        Ok(*cod)
                    } else {
                        path.push(PathStep::AppArg);
                        let e = err(path, dom.to_string(), arg_ty.to_string());
                        path.pop();
                        Err(e)
                    }
                }
                other => {
                    path.push(PathStep::AppFun);
                    let e = err(path, "a function type", other.to_string());
                    path.pop();
                    Err(e)
                }
            }
        }
        Term::Lam(_, dom, body) => {
            bound.push(dom.clone());
            path.push(PathStep::LamBody);
            let cod = check(body, ctx, bound, path);
            path.pop();
            bound.pop();
            Ok(SimpleType::arrow(dom.clone(), cod?))
        }
        Term::Pair(a, b) => {
            path.push(PathStep::PairLeft);
            let left = check(a, ctx, bound, path)?;
            path.pop();
            path.push(PathStep::PairRight);
            let right = check(b, ctx, bound, path)?;
            path.pop();
            Ok(SimpleType::prod(left, right))
        }
        Term::Proj(side, a) => {
            path.push(PathStep::ProjArg);
            let arg_ty = check(a, ctx, bound, path)?;
            path.pop();
            match arg_ty {
                SimpleType::Prod(l, r) => Ok(if *side == 0 { *l } else { *r }),
                other => {
                    path.push(PathStep::ProjArg);
                    let e = err(path, "a product type", other.to_string());
                    path.pop();
                    Err(e)
                }
            }
        }
    }
}
