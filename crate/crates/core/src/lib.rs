//! Filling systems of curves on closed orientable surfaces.
//!
//! Curve systems are 4-valent combinatorial maps ([`surface_map`]) whose
//! straight-ahead orbits are the curves ([`curve_system`]). Dehn twists,
//! bigon reduction and the filling-family construction live in
//! [`twist_engine`]; free-group certificates in [`free_group`].

pub mod catalog_io;
pub mod curve_system;
pub mod diagram;
pub mod error;
pub mod free_group;
pub mod surface_map;
pub mod twist_engine;

pub use error::{Error, Result};
