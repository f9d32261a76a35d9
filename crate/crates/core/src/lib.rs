//! Arnold-tongue structure of the Mathieu equation
//!
//! ```text
//! x'' + (delta + epsilon cos t) x = 0
//! ```
//!
//! and the localized gap modes created inside its tongues by a kick
//! `F(t)` added to the potential.
//!
//! - [`ode`]: adaptive propagation of `(x, x')` under the kicked potential.
//! - [`floquet`]: period maps, stability classes, tongue edges and decaying
//!   Floquet solutions.
//! - [`delta_kick`]: gap modes of a Dirac kick, solved through the matching
//!   condition at the origin.
//! - [`asymptotics`]: small-epsilon closed forms for the first tongue and
//!   envelope fitting.
//! - [`finite_kick`]: Gaussian, Lorentzian and shear-potential kicks by
//!   two-sided shooting.

pub mod asymptotics;
pub mod delta_kick;
pub mod error;
pub mod finite_kick;
pub mod floquet;
pub mod ode;
pub mod profile;
pub mod roots;

pub use delta_kick::{GapMode, OriginJoin};
pub use error::{Error, Result};
pub use floquet::{Direction, FloquetMode, Monodromy, StabilityClass};
pub use ode::{KickSpec, MathieuParams, Matrix2, State, DEFAULT_TOL};
pub use profile::Profile;
