//! Formulas, the arithmetical subclass, involutive negation, tuple coding,
//! and the Skolem registry tying oracle indices to formulas.

pub mod coding;
mod formula;
mod registry;

pub use coding::{cantor_pair, cantor_unpair, code_args, code_term, decode_tuple, encode_tuple};
pub use formula::Formula;
pub use registry::{
    em1_axiom, em_axiom, sk_axiom, GammaSet, LogicError, Pattern, SkolemRegistry,
};
