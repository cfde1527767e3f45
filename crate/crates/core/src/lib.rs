//! Stable marriage with general preferences.
//!
//! Men hold strict complete orders over the women; each woman holds an
//! arbitrary binary relation over the men, given as a set of ordered pairs.
//! The crate provides stability checkers, a deferred-acceptance solver that
//! is complete on asymmetric instances, an exact-rational LP feasibility
//! route with rounding, the reductions from stable marriage with ties and
//! incomplete lists (SMTI) and from the stable-extension problem of cyclic
//! 3D matching, and brute-force enumeration oracles for small instances.

pub mod cyclic3d;
pub mod da;
mod error;
pub mod gadget;
pub mod gen;
mod ids;
pub mod io;
pub mod lp;
pub mod oracle;
pub mod smg;
pub mod smti;

pub use error::Error;
pub use ids::{Dog, Man, StrictOrder, Woman};

pub type Result<T> = std::result::Result<T, Error>;
