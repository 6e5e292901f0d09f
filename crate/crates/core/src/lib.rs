//! Exact counts of invertible 2x2 matrices over Z/nZ with a prescribed
//! permanent, together with a brute-force enumeration oracle and executable
//! versions of the bijections that explain the counts.
//!
//! * [`modarith`]: residues, gcd, inverses, factorization, totient, divisors.
//! * [`closedform`]: `g_n(x)`, `|GL_2(Z/nZ)|`, value spectra, divisor sums.
//! * [`census`]: exhaustive enumeration of `M_2(Z/nZ)`.
//! * [`bijections`]: the sign-flip, shift, scaling and CRT maps, plus a verifier.
//! * [`verify`]: batch suites that cross-check all of the above.

pub mod bijections;
pub mod census;
pub mod closedform;
mod error;
pub mod modarith;
pub mod verify;

pub use bijections::{BijectionReport, MapSpec};
pub use census::{CensusConfig, CensusTable, Matrix2, DEFAULT_CAP};
pub use closedform::{DivisorSumCheck, PrimePowerClass, Spectrum, SpectrumClass, XClass};
pub use error::{Count, Error, Result};
pub use modarith::{Factorization, Residue};
