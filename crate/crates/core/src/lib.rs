//! Momentum methods (heavy ball and Nesterov) for optimization on Lie groups.
//!
//! The crate is organised bottom-up:
//!
//! - [`so3`]: rotation matrices and the hat/vee isomorphism.
//! - [`retraction`]: exp, Cayley and unskew retractions with trivialized tangents.
//! - [`group`]: the [`LieGroup`] abstraction with SO(3) and translation instances.
//! - [`reconstruction`]: solvers for the reconstruction step.
//! - [`objective`]: test objectives and their trivialized gradients.
//! - [`optimizer`]: gradient descent and the momentum iterations.
//! - [`pontryagin`]: Hamilton-Pontryagin variational integrators.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod group;
pub mod objective;
pub mod optimizer;
pub mod pontryagin;
pub mod reconstruction;
pub mod retraction;
pub mod so3;

pub use error::{Error, Result};
pub use group::{AlgebraVector, LieGroup, So3Group, TranslationGroup};
pub use objective::Objective;
pub use optimizer::{Family, MethodKind, Strategy, Trajectory};
pub use reconstruction::{ExplicitSolver, FixedPointSolver, ReconstructionSolver};
pub use retraction::{Retraction, Side};
pub use so3::{Mat3, Rotation, Vec3};
