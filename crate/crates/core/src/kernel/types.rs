use std::fmt;

/// Simple types of the calculus: two base types for data, one for updates,
/// arrows and products.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimpleType {
    Nat,
    Bool,
    Update,
    Arrow(Box<SimpleType>, Box<SimpleType>),
    Prod(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn arrow(dom: SimpleType, cod: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn prod(left: SimpleType, right: SimpleType) -> SimpleType {
        SimpleType::Prod(Box::new(left), Box::new(right))
    }

    /// Nat, Bool and Update are the atomic types.
    pub fn is_atomic(&self) -> bool {
        matches!(self, SimpleType::Nat | SimpleType::Bool | SimpleType::Update)
    }

    /// `a -> b -> ... -> z` from a list of domains and a codomain.
    pub fn arrows<I: IntoIterator<Item = SimpleType>>(doms: I, cod: SimpleType) -> SimpleType
    where
        I::IntoIter: DoubleEndedIterator,
    {
        doms.into_iter()
            .rev()
            .fold(cod, |acc, dom| SimpleType::arrow(dom, acc))
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // arrow is right-associative and binds looser than product
        match self {
            SimpleType::Nat => write!(f, "Nat"),
            SimpleType::Bool => write!(f, "Bool"),
            SimpleType::Update => write!(f, "Update"),
            SimpleType::Arrow(a, b) => {
                match a.as_ref() {
                    SimpleType::Arrow(_, _) => write!(f, "({a}) -> {b}"),
                    _ => write!(f, "{a} -> {b}"),
                }
            }
            SimpleType::Prod(a, b) => {
                let left = match a.as_ref() {
                    SimpleType::Arrow(_, _) | SimpleType::Prod(_, _) => format!("({a})"),
                    _ => format!("{a}"),
                };
                let right = match b.as_ref() {
                    SimpleType::Arrow(_, _) | SimpleType::Prod(_, _) => format!("({b})"),
                    _ => format!("{b}"),
                };
                write!(f, "{left} * {right}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_respects_precedence() {
        let t = SimpleType::arrow(
            SimpleType::arrow(SimpleType::Nat, SimpleType::Bool),
            SimpleType::prod(SimpleType::Nat, SimpleType::Update),
        );
        assert_eq!(t.to_string(), "(Nat -> Bool) -> Nat * Update");
    }

    #[test]
    fn arrows_builder_is_right_nested() {
        let t = SimpleType::arrows(
            [SimpleType::Nat, SimpleType::Nat],
            SimpleType::Bool,
        );
        assert_eq!(
            t,
            SimpleType::arrow(SimpleType::Nat, SimpleType::arrow(SimpleType::Nat, SimpleType::Bool))
        );
    }
}
