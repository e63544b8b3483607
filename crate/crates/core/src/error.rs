use crate::digitsys::LatticePoint;

/// Errors produced by the evaluation routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("base must be at least 2 (got {0})")]
    InvalidBase(u32),
    #[error("digit set is empty")]
    EmptyDigitSet,
    #[error("digit set {{0}} has no non-zero digit")]
    OnlyZeroDigit,
    #[error("digit {digit} is out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("cannot parse digit set {0:?}")]
    DigitSyntax(String),
    #[error("enumeration of {count} admissible integers exceeds the cap of {cap}; try the geometric-series engine")]
    EnumerationTooLarge { count: u128, cap: u64 },
    #[error("|b^(s+{m}) - N| = {distance:e} is below the pole threshold")]
    NearCandidatePole { m: u32, distance: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("Re s = {re} is outside the half-plane of convergence Re s >= {bound}")]
    OutsideHalfPlane { re: f64, bound: f64 },
    #[error("s is within {distance:e} of the pole lattice point (m={}, k={}); residue estimate {residue_re:e}{residue_im:+e}i", point.m, point.k)]
    TooCloseToPole {
        point: LatticePoint,
        distance: f64,
        residue_re: f64,
        residue_im: f64,
    },
    #[error("depth {given} is below the required {required}")]
    DepthInsufficient { given: i64, required: i64 },
    #[error("closed form requires a single admissible digit (N = 1)")]
    NotN1System,
    #[error("all digits admissible: K(s) is the Riemann zeta function, which has a pole at s = 1")]
    IsRiemannZeta,
    #[error("lambda-to-mu conversion undefined: (-s0)_(m+1) vanishes for N = 1 or N = b at k = 0")]
    DefmuUndefined,
    #[error("E(t) is too close to zero (|E| = {0:e})")]
    NearZeroOfE(f64),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("t is too close to a pole of C(t)")]
    NearPoleOfC,
    #[error("floating-point overflow: {0}")]
    Overflow(String),
}

impl Error {
    /// True for errors caused by the mathematical domain (poles, unsupported
    /// digit systems) rather than malformed input.
    pub fn is_domain(&self) -> bool {
        !matches!(
            self,
            Error::InvalidBase(_)
                | Error::EmptyDigitSet
                | Error::OnlyZeroDigit
                | Error::DigitOutOfRange { .. }
                | Error::DigitSyntax(_)
                | Error::DepthInsufficient { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
