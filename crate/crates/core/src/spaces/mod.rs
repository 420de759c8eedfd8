//! Concrete multicovered spaces: finite metrics, lattices and groups.

pub mod abelian;
pub mod free;
pub mod group;
pub mod lattice;
pub mod lift;
pub mod metric;

pub use free::{FreeGroup, Word};
pub use group::{
    finite_group_space, finite_group_space_radii, group_multicover, is_o_bounded, is_strictly_o_bounded,
    play_on_finite_group, verify_on_group, EnumerationStrategy, FiniteGroup, Group, GroupCover, LatticeGroup, Side,
};
pub use lattice::{probe_box, Block, LatticeCover, Norm, DEFAULT_PROBE_BOX};
pub use metric::{metric_multicover, FiniteMetricSpace};
pub use abelian::{
    addition_map_perfectness, lift_hurewicz, lift_scheepers, AbelianLift, AdditionDomain, CenteredBox, GeneratorChain,
    Generators, LiftTrace, NeighborhoodSchedule,
};
pub use lift::{radius_budget, ChainStep, LetterStrategy, LiftSchedule, LiftedStrategy};
