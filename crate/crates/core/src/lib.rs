//! Executable game semantics for second-order arithmetic.
//!
//! Formulas ([`logic`], [`parser`]) are interpreted as lazily explored
//! games ([`games`], [`forall`]); [`strategy`] provides the exhaustive
//! strategy `EXH` and strategy validation, and [`engine`] runs plays,
//! solves finite games and checks the ∀Game theorem on finite instances.

pub mod engine;
pub mod forall;
pub mod games;
pub mod gen;
pub mod logic;
pub mod parser;
pub mod semantics;
pub mod strategy;
pub mod suites;

pub use engine::{exh_verdict, minimax_winner, run_play, theorem_forall_check, Budget, Verdict};
pub use forall::{exists_game, forall_game, ForallPosition, PlayOutcome};
pub use games::{Game, Move, ParamAssignment, ParamScope, Parameter, Player};
pub use logic::{Formula, Registry, Sequent, Term};
pub use semantics::{eval_truth, interpret_formula, interpret_sequent, TruthValue};
