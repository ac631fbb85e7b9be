//! Updates: finite partial functions on oracle points, stored as consistent
//! triples `(index, coded-arg, value)`.
//!
//! An update is the piece of information an atomic-level realizer emits when
//! it has learned that some oracle value is wrong and what it should be
//! instead. The only non-obvious operation is the consistent union, which
//! keeps the left operand's triples on conflict and is therefore not
//! commutative.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One learned association: oracle `index`, coded argument `arg`, `value`.
pub type Triple = (u64, u64, u64);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UpdateError {
    #[error("inconsistent triples: ({0}, {1}) mapped to both {2} and {3}")]
    Inconsistent(u64, u64, u64, u64),
}

/// A finite partial function ℕ² → ℕ.
///
/// Triples are kept sorted by `(index, arg)` with no duplicate keys, so two
/// updates denote the same partial function exactly when they compare equal.
/// This is load-bearing: update constants embedded in terms inherit this
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Update {
    triples: Vec<Triple>,
}

impl Update {
    pub fn empty() -> Self {
        Update::default()
    }

    pub fn singleton(index: u64, arg: u64, value: u64) -> Self {
        Update {
            triples: vec![(index, arg, value)],
        }
    }

    /// Builds an update from arbitrary triples, rejecting inconsistent input.
    /// Exact duplicates collapse.
    pub fn try_from_triples<I: IntoIterator<Item = Triple>>(
        triples: I,
    ) -> Result<Self, UpdateError> {
        let mut sorted: Vec<Triple> = triples.into_iter().collect();
        sorted.sort_unstable();
        sorted.dedup();
        for pair in sorted.windows(2) {
            let ((a, n, m), (a2, n2, m2)) = (pair[0], pair[1]);
            if a == a2 && n == n2 {
                return Err(UpdateError::Inconsistent(a, n, m, m2));
            }
        }
        Ok(Update { triples: sorted })
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// `value` if `(index, arg)` is in the domain, `default` otherwise.
    pub fn lookup(&self, index: u64, arg: u64, default: u64) -> u64 {
        match self.triples.binary_search_by_key(&(index, arg), |t| (t.0, t.1)) {
            Ok(pos) => self.triples[pos].2,
            Err(_) => default,
        }
    }

    /// Least oracle index mentioned by any triple; 0 for the empty update.
    pub fn min_index(&self) -> u64 {
        self.triples.first().map_or(0, |t| t.0)
    }

    /// Consistent union: all of `self`, plus the triples of `other` that do
    /// not clash with a triple of `self`. Not commutative.
    pub fn consistent_union(&self, other: &Update) -> Update {
        let mut triples = self.triples.clone();
        for &(a, n, m) in &other.triples {
            match triples.binary_search_by_key(&(a, n), |t| (t.0, t.1)) {
                Ok(_) => {} // self wins
                Err(pos) => triples.insert(pos, (a, n, m)),
            }
        }
        Update { triples }
    }
}

impl fmt::Display for Update {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "upd{{")?;
        for (i, (a, n, m)) in self.triples.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "({a},{n},{m})")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upd(triples: &[Triple]) -> Update {
        Update::try_from_triples(triples.iter().copied()).unwrap()
    }

    #[test]
    fn union_of_empties_is_empty() {
        assert_eq!(Update::empty().consistent_union(&Update::empty()), Update::empty());
    }

    #[test]
    fn union_drops_conflicting_right_triples() {
        let left = upd(&[(0, 1, 2), (3, 3, 3)]);
        let right = upd(&[(0, 1, 5), (4, 4, 4)]);
        assert_eq!(
            left.consistent_union(&right),
            upd(&[(0, 1, 2), (3, 3, 3), (4, 4, 4)])
        );
    }

    #[test]
    fn union_is_not_commutative() {
        let left = upd(&[(0, 1, 5)]);
        let right = upd(&[(0, 1, 2)]);
        assert_eq!(left.consistent_union(&right), upd(&[(0, 1, 5)]));
        assert_ne!(left.consistent_union(&right), right.consistent_union(&left));
    }

    #[test]
    fn singleton_conflict_keeps_left() {
        let got = Update::singleton(1, 1, 1).consistent_union(&Update::singleton(1, 1, 2));
        assert_eq!(got, upd(&[(1, 1, 1)]));
    }

    #[test]
    fn min_index_examples() {
        assert_eq!(Update::empty().min_index(), 0);
        assert_eq!(upd(&[(2, 0, 1), (5, 3, 3)]).min_index(), 2);
        assert_eq!(upd(&[(0, 9, 9)]).min_index(), 0);
    }

    #[test]
    fn lookup_examples() {
        let u = upd(&[(1, 2, 3)]);
        assert_eq!(u.lookup(1, 2, 9), 3);
        assert_eq!(Update::empty().lookup(1, 2, 9), 9);
        assert_eq!(u.lookup(1, 3, 0), 0);
    }

    #[test]
    fn singleton_examples() {
        assert_eq!(Update::singleton(0, 0, 0).triples(), &[(0, 0, 0)]);
        assert_eq!(Update::singleton(2, 7, 1).triples(), &[(2, 7, 1)]);
    }

    #[test]
    fn from_triples_rejects_inconsistency() {
        assert_eq!(
            Update::try_from_triples([(1, 1, 1), (1, 1, 2)]),
            Err(UpdateError::Inconsistent(1, 1, 1, 2))
        );
        // exact duplicates are fine
        assert_eq!(upd(&[(1, 1, 1), (1, 1, 1)]).len(), 1);
    }

    #[test]
    fn display_is_canonical() {
        let u = upd(&[(3, 3, 3), (0, 1, 2)]);
        assert_eq!(u.to_string(), "upd{(0,1,2);(3,3,3)}");
        assert_eq!(Update::empty().to_string(), "upd{}");
    }
}
