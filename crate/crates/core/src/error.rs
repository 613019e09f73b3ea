use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index {index} too wide for gamma {gamma}: exp(gamma k^2) exceeds 1e300")]
    IndexRangeTooWide { index: i64, gamma: f64 },

    #[error("sample points must be finite and strictly increasing")]
    NotSeparated,

    #[error("window too small for density radius {radius}")]
    WindowTooSmall { radius: f64 },

    #[error("collocation system ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("growth bound violated at y = {y}: observed {observed:e} > bound {bound:e}")]
    GrowthViolation { y: f64, observed: f64, bound: f64 },

    #[error("zero series has no zero set")]
    ZeroPolynomial,

    #[error("root clusters at relative distance {distance:e} are ambiguous for tolerance {tol:e}")]
    ClusterAmbiguous { distance: f64, tol: f64 },

    #[error("eigenvalue iteration did not converge")]
    RootFinding,

    #[error("zero set contains the origin; its multiplicity belongs in m")]
    ZeroAtOrigin,

    #[error("normalization factor vanishes for zero {re} + {im}i")]
    NormalizationSingular { re: f64, im: f64 },

    #[error("series is not self-adjoint (max imaginary coefficient {max_imag:e})")]
    NotSelfAdjoint { max_imag: f64 },

    #[error("zero on the symmetry axes has odd multiplicity {mult}")]
    OddMultiplicityOnAxis { mult: u32 },

    #[error("origin multiplicity {m0} or exponential shift {shift} is odd")]
    OddShiftOrOrigin { m0: u32, shift: i64 },

    #[error("zero has odd multiplicity {mult}; series is not a perfect square")]
    OddMultiplicity { mult: u32 },

    #[error("series is not the square of a real series")]
    NotASquare,

    #[error("spectrum takes negative value {min:e}")]
    NegativeSpectrum { min: f64 },

    #[error("spectrum is not real-valued (max imaginary part {max_imag:e})")]
    NonRealSpectrum { max_imag: f64 },

    #[error("collocation matrix has no numerical null space (smallest/largest singular value {ratio:e})")]
    NoNullSpace { ratio: f64 },
}
