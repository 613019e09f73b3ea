//! Phase retrieval for functions in the shift-invariant space spanned by
//! integer shifts of a Gaussian.
//!
//! A function `f(x) = Σ c_k exp(-γ (x - βk)²)` is observed only through
//! the magnitudes `|f(λ)|` on a separated set `Λ`. For real coefficients and
//! sampling density above `2/β` the function is recovered up to sign; for
//! complex coefficients the full family of functions sharing the same
//! magnitudes is enumerated by zero flipping of a periodic entire function.
//!
//! Module map:
//!
//! * [`space`]: coefficient sequences, evaluation, the `|f|²` expansion.
//! * [`sampling`]: sample sets, density estimates, least-squares recovery of
//!   the `|f|²` coefficients.
//! * [`periodic`]: Laurent series in `q = e^{2πiz}` and their strip zeros.
//! * [`factorization`]: zero-set products, involution and the solution family.
//! * [`pipeline`]: end-to-end reconstruction and solution checks.
//! * [`sharpness`]: ambiguity counterexamples below the critical density.
//! * [`io`]: JSON and CSV formats.

pub mod error;
pub mod factorization;
pub mod io;
pub mod linalg;
pub mod periodic;
pub mod pipeline;
pub mod roots;
pub mod sampling;
pub mod sharpness;
pub mod space;

pub use error::{Error, Result};
pub use factorization::{FactorFamily, FactorSpec};
pub use periodic::{LaurentSeries, Region, StripZero, ZeroOptions, ZeroSet};
pub use pipeline::{RetrievalMode, RetrievalOptions, RetrievalReport};
pub use sampling::{FrameBounds, PhaselessSamples, SampleSet};
pub use space::{CoeffRole, CoeffSeq, SIFunction, SpaceParams};

pub use num_complex::Complex64;
