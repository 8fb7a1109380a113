//! Dynamics of two families of holomorphic correspondences on the Riemann
//! sphere: the multivalued power maps `z^(p/q) + c` (relation `(w-c)^q = z^p`)
//! and the modular-group matings `F_a` (relation
//! `((aw-1)/(w-1))^2 + ((aw-1)/(w-1))((az+1)/(z+1)) + ((az+1)/(z+1))^2 = 3`).
//!
//! The crate is organized around the exact branch algebra in [`corr`]; on top
//! of it sit the depth-limited orbit engine ([`orbit`]), grid rasterization
//! and classification ([`raster`]), the mating-side limit sets and Yoccoz
//! verification ([`mating`]), exact Sturmian/Minkowski combinatorics and disk
//! families ([`sturmian`]), and the CIFS / dimension / branched-motion
//! toolkit near c = 0 ([`cifs`]). The `corrdyn` binary exposes all of it as
//! subcommands.

pub mod cifs;
pub mod cli;
pub mod corr;
pub mod error;
pub mod mating;
pub mod orbit;
pub mod parallel;
pub mod raster;
pub mod roots;
pub mod sturmian;
pub mod tol;

pub use corr::Cx;
pub use error::Error;
