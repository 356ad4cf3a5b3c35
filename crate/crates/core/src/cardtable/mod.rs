//! Cardinal-relation facts, their closure under a fixed rule set, the
//! built-in axiom sets of the permutation models, and the arithmetic lemmas
//! the refutation engines rely on.
//!
//! Strictness is carried by `!<=` facts: `a < b` unfolds to `a <= b` and
//! `b !<= a`, and a closure is contradictory exactly when some `a <= b` meets
//! `a !<= b`. Surjections (`<=*`) enter only through the power-set rule.

mod arith;
mod closure;
mod expr;
mod models;
mod summary;


pub use arith::{certify_two_color_triangles, factorial_bounds, ramsey_upper, TriangleCertificate};
pub use closure::{
    close, close_with, universe, Closure, Contradiction, DeductionTrace, Provenance, Rel, RelationFact, Rule, Statement,
    DEFAULT_DEPTH,
};
pub use expr::CardinalExpr;
pub use models::Model;
pub use summary::{
    check_forbidden, check_summary_table, expected_chains, forbidden_pattern, table_cells, CellCheck, ChainCheck, ModelCheck,
    ScenarioCheck, SummaryReport,
};
