//! Numerical toolkit for the soft-edge scaling limit of beta ensembles.
//!
//! Three independent routes produce samples of the limiting low-lying spectrum
//! (largest eigenvalues after edge centering and scaling):
//!
//! * [`ensembles`]: finite tridiagonal/bidiagonal random matrix models whose
//!   scaled extreme eigenvalues converge to the limit law,
//! * [`airyop`]: direct discretization of the limiting random Schrödinger
//!   operator `-d²/dx² + x + noise` on the half line,
//! * [`riccati`]: the first-order diffusion whose explosions count eigenvalues
//!   below a level, sampled pathwise.
//!
//! [`painleve`] supplies the deterministic Tracy-Widom reference curves
//! (beta = 1, 2, 4) through the Painlevé II representation, and [`harness`]
//! holds the statistics and persistence glue used to compare all of the above.

pub mod airyop;
pub mod ensembles;
pub mod harness;
pub mod painleve;
pub mod randkit;
pub mod riccati;
pub mod tridiag;

pub use airyop::NoiseGrid;
pub use ensembles::{EdgeSample, EnsembleSpec, HermiteSpec, LaguerreSpec};
pub use harness::{CdfEstimate, Method, RunManifest};
pub use painleve::{PainleveConfig, PainleveSolution, TwBeta};
pub use randkit::RngStream;
pub use riccati::{ExplosionRecord, RiccatiConfig};
pub use tridiag::{TridiagSym, Which};
