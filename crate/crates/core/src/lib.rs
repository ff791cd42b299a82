//! Numerical thermodynamic formalism for the Thue-Morse Riesz-product measure
//! `ν = prod_{l >= 0} (1 - cos 2 pi 2^l x)` on the circle.
//!
//! * [`symbolic`]: binary words, dyadic cylinders, the subshifts `X_m` and the collapse map.
//! * [`potential`]: `psi(x) = log(1 - cos 2 pi x)` and its Birkhoff sums.
//! * [`measure`]: exact cylinder masses of the approximants, Gibbs bounds, local exponents.
//! * [`pressure`]: pressure approximants, restricted pressure and Legendre spectra.
//! * [`entropy`]: autocorrelations and the high-precision entropy series.
//! * [`verify`]: the numerical acceptance checks, also exposed by the CLI.
//!
//! Heavy kernels accept an [`Exec`] policy; with the default `parallel`
//! feature they run on rayon, and results are bit-identical either way.

pub mod entropy;
pub mod error;
pub mod exec;
pub mod grid;
pub mod hiprec;
pub mod limits;
pub mod measure;
pub mod potential;
pub mod pressure;
pub mod symbolic;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use symbolic::{BinaryWord, Rational, Sft};
