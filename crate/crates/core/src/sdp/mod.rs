//! PSD-plus-linear feasibility systems `Σ aᵢQᵢ ⪰ 0, A·(a, b) = c`: the
//! block-diagonal single-pencil encoding, a numeric solver, rationalization
//! of its output and a sparse text dump.

mod dump;
mod encoding;
mod rationalize;
mod solver;
mod system;

pub use dump::{parse_sparse_text, to_sparse_text};
pub use encoding::{block_diagonal_encode, BlockEncoding};
pub use rationalize::{rationalize, RationalizeFailure, RationalizeOutcome};
pub use solver::{solve_feasibility, InfeasibleReport, NumericSolution, SolveOutcome, SolverOptions};
pub use system::FeasibilitySystem;
