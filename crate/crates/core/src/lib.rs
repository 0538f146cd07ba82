//! Analytics for binary codes on the Boolean hypercube and the
//! non-interactive simulation problem over doubly symmetric binary sources.
//!
//! * [`cube`]: codes as sorted word lists, complements, symmetries, canonical forms.
//! * [`distance`]: distance distributions, enumerators, dual distributions,
//!   MacWilliams–Delsarte transforms and average-distance bounds.
//! * [`fourier`]: Walsh–Hadamard spectra and Fourier level sums.
//! * [`nis`]: exact collision probabilities `P(f(X) = g(Y) = 1)`.
//! * [`bounds`]: closed-form and optimizer-based bounds on the collision probability.
//! * [`oracle`]: exhaustive and heuristic extremal search at small blocklength.

pub mod bounds;
pub mod cube;
pub mod distance;
mod error;
pub mod fourier;
pub mod nis;
pub mod oracle;

pub use error::{Error, Result};

pub use cube::{BinaryCode, CubeSymmetry};
pub use distance::{DistanceDistribution, DualDistribution};
pub use fourier::{FourierSpectrum, LevelSums};
