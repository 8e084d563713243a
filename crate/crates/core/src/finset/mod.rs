//! The category of finite sets: maps, equalizers, partitions, coherent
//! choices and the ultrafilter monad.

mod checks;
mod partition;
mod set;
pub mod ultrafilter;

pub use checks::{galvin_horn_check, partition_limit_check, partition_quotient_diagram, ultrafilter_monad_check};
pub use partition::{
    all_partitions, all_partitions_bounded, coarsening_map, coherent_choices,
    coherent_choices_over, is_coarser, partition_of_map, CoherentChoice, Partition,
    DEFAULT_PARTITION_BOUND,
};
pub use set::{all_maps, equalizer, FinSet, SetMap, SetObj};
pub use ultrafilter::{pushforward_ultrafilter, FinUltrafilter};
