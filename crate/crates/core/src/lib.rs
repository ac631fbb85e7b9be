//! Executable kernel for interactive realizability: a typed term calculus
//! with oracle constants approximated by finite states, a truth-in-state
//! compiler, realizability checkers, and a learning loop that corrects states
//! until extracted witnesses stabilize.

pub mod eval;
pub mod extract;
pub mod kernel;
pub mod logic;
pub mod realize;
pub mod state;
pub mod truth;
pub mod update;

pub use eval::{approximate, eval_at, normalize, EvalBudget, OracleLog};
pub use extract::{extract_witness, refute_bottom, ExtractionTrace, LoopConfig};
pub use kernel::{typecheck, Const, LibOp, SimpleType, Term, TypeError, TypingContext};
pub use logic::{Formula, GammaSet, SkolemRegistry};
pub use realize::{check_at, check_mrsf, realizer_type, CandidatePool, RealizerVerdict};
pub use state::State;
pub use truth::{compile_truth, ground_truth, saturate_truth_state, truth_at, GroundVerdict, SearchBound};
pub use update::Update;
