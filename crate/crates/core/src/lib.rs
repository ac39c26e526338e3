//! Exact Weil–Petersson volume polynomials and their large-genus approximants.
//!
//! * [`qpi`]: rationals, the ring ℚ[π²], Bernoulli numbers, ζ(2i), the
//!   recursion weights `u_i`, and validated interval arithmetic.
//! * [`recursion`]: Mirzakhani's topological recursion for the volume
//!   coefficients `c_{g,n}(α)` with a memoized, level-by-level table fill.
//! * [`store`]: the persistent, checksummed cache file.
//! * [`asymptotics`]: volume evaluation and the explicit first- and
//!   second-order approximants.
//! * [`discrete`]: discrete derivatives, discrete Taylor expansion and the
//!   constructive approximant of arbitrary order.
//! * [`verify`]: residual statistics and the check suites used by the CLI.

pub mod asymptotics;
pub mod discrete;
pub mod qpi;
pub mod recursion;
pub mod store;
pub mod verify;

pub use qpi::{PiPoly, Rational};
pub use recursion::{CoeffTable, Convention, MultiIndex, Signature};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature (g={g}, n={n}): need n >= 1 and 2g-2+n > 0")]
    InvalidSignature { g: u32, n: u32 },
    #[error("multi-index has length {got}, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("comparison undecided at precision {precision} bits")]
    Undecided { precision: u32 },
    #[error("missing coefficients for signature ({g},{n}); run `fill` first")]
    MissingTable { g: u32, n: u32 },
    #[error("invalid interval [{a}, {b}]: need 0 < a <= b")]
    InvalidInterval { a: String, b: String },
    #[error("convention mismatch: cache has `{found}`, engine configured for `{expected}`")]
    ConventionMismatch { expected: String, found: String },
    #[error("unsupported cache version `{0}`")]
    VersionMismatch(String),
    #[error("checksum mismatch")]
    ChecksumMismatch,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: integrity violation: {msg}")]
    Integrity { line: usize, msg: String },
    #[error("empty admissible set: {0}")]
    EmptyAdmissibleSet(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
