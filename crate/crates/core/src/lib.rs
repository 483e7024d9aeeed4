//! Mechanics, tendon actuation, sequencing and design search for inflated
//! rotational joints: thin-film inflated beams whose bending plane is set by
//! taping part of the circumference into a permanently wrinkled state.
//!
//! All quantities are SI (m, Pa, N, rad). Module map:
//!
//! - [`section`]: moment law of a partially wrinkled cross-section.
//! - [`joint`]: directional maximum moment and moment-rotation law of a joint.
//! - [`tendon`]: lever arms, buckle thresholds and routing sweeps.
//! - [`chain`]: event-driven tension ramp, forward kinematics, tendon energy.
//! - [`search`]: exhaustive search over unit order, mounting and routing.
//! - [`reduce`]: plateau extraction and pressure-scaling fits for test data.
//! - [`io`] and [`cli`]: file formats and the `irjoint` command line.

pub mod chain;
pub mod cli;
pub mod error;
pub mod io;
pub mod joint;
pub mod reduce;
pub mod search;
pub mod section;
pub mod tendon;
pub mod units;

pub use error::{Error, Module, Result};
pub use joint::{BendingDirection, JointSpec};
pub use section::{moment_scale_factor, stiffness_ratio, SectionSpec, WrinkleState};
