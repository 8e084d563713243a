//! Finite-dimensional spaces over a prime field, the double-dualization
//! monad, and the checks built on them.

mod choice;
mod coordinate;
pub mod dual;
mod field;
mod matrix;
mod naturality;
mod space;

pub use choice::{
    dual_choice_bound, dual_choice_check, enumerate_linear_partitions, evaluation_witness,
    is_evaluation_vector, DualChoice, LinearPartition, PartitionSystem,
};
pub use coordinate::{coordinate_limit_check, coordinate_subspace_diagram};
pub use dual::{dd_monad, dd_monad_check, dd_on_map, dual_map, MonadComponents};
pub use field::Field;
pub use matrix::{all_vectors, Matrix};
pub use naturality::{natural_families, scalar_uniqueness_check, LinearFunctor};
pub use space::{constraint_matrix, FinVec, LinMap, VecObj};
