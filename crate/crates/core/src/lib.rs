//! Multicovered spaces and cover-bounded selection games.
//!
//! The crate is organised bottom-up:
//!
//! * [`cover`]: covers, multicovers, boundedness, cover classes, the ≺ preorder and maps.
//! * [`game`]: finite-horizon budgeted games, strategy evaluation and an exact solver.
//! * [`combinators`]: strategy and witness transformations (union, γ-upgrade, product, transfer).
//! * [`spaces`]: metric, lattice, free-group and finite-group multicovers and group liftings.
//! * [`format`] and [`corpus`]: the JSON instance format and the small-instance enumeration.

pub mod bits;
pub mod combinators;
pub mod corpus;
pub mod cover;
pub mod error;
pub mod format;
pub mod game;
pub mod spaces;

pub use error::{Error, Result};
