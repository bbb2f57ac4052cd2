use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("photon number {n} outside truncated range 0..={max}")]
    IndexOutOfRange { n: usize, max: usize },

    #[error("vectors {i} and {j} are not orthonormal (overlap {overlap:.3e})")]
    NotOrthonormal { i: usize, j: usize, overlap: f64 },

    #[error("operator is not unitary: max |U*U - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("energy sequence not strictly increasing at index {index}")]
    RepeatedEnergy { index: usize },

    #[error("mixing angle undefined: kappa = 0 at zero detuning")]
    DegenerateLevel,

    #[error("invalid dressed level: {0}")]
    InvalidLevel(String),

    #[error("level n = {n} exceeds truncation N = {max}")]
    Truncation { n: usize, max: usize },

    #[error("cut index K0 = {k0} violates K0 >= max(3, M0) = {required}")]
    ConstraintViolation { k0: usize, required: usize },

    #[error("unknown weight family '{0}' (expected 'factorial' or 'uniform_moment')")]
    UnknownFamily(String),

    #[error("x = {x} outside [0, {radius})")]
    Domain { x: f64, radius: f64 },

    #[error("tail mass {tail:.3e} >= tolerance {tol:.3e}; need N >= {required_n}")]
    TailTooLarge { tail: f64, tol: f64, required_n: usize },

    #[error("tail bound unavailable: terms are not decaying at N = {n_cut}")]
    BoundUnavailable { n_cut: usize },

    #[error("{family} energies not strictly increasing at k = {index} (K0 below M0?)")]
    NotIncreasing { family: String, index: usize },

    #[error("families built for K0 = {families} but code uses K0 = {code}")]
    InconsistentK0 { families: usize, code: usize },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("state leaks out of the code space (leakage {leakage:.3e})")]
    NotInCodeSpace { leakage: f64 },

    #[error("anticlique candidate has rank {rank} < 2")]
    InvalidAnticlique { rank: usize },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
