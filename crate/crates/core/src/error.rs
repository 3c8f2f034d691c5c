//! Error type shared across the crate.

use std::fmt;

/// Errors raised by waveform synthesis and analysis operations.
#[derive(Debug)]
pub enum WaveError {
    /// Evaluation time outside the waveform support `[-T/2, T/2]`.
    OutOfDomain { t: f64, half_span: f64 },
    /// Sample rate too low for the occupied band.
    NyquistViolation { fs: f64, required: f64 },
    /// Requested truncation order leaves too much tail energy.
    TruncationTooSmall { m: usize, required: usize, tail_energy: f64 },
    /// Frequency grid does not cover the coefficient support.
    GridTooNarrow { lo: f64, hi: f64, need_lo: f64, need_hi: f64 },
    /// A grid argument was empty.
    EmptyGrid,
    /// A grid argument was not uniformly spaced.
    NonUniformGrid,
    /// A cut was requested at a coordinate the grid does not contain.
    GridMissingZero,
    /// Spectrum or waveform carries no energy.
    ZeroEnergy,
    /// Delay-Doppler coupling determinant is not positive.
    SingularCoupling { det: f64 },
    /// Bearing outside the half-space seen by the projector.
    ThetaOutOfRange { theta: f64 },
    /// Reference angle of maximum FI is zero; percent deviation undefined.
    ZeroReference,
    /// Invalid parameter combination.
    InvalidParameter(String),
    /// I/O failure while exporting results.
    Io(std::io::Error),
}

impl fmt::Display for WaveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaveError::OutOfDomain { t, half_span } => {
                write!(f, "time {t} s outside waveform support [-{half_span}, {half_span}] s")
            }
            WaveError::NyquistViolation { fs, required } => {
                write!(f, "sample rate {fs} Hz too low for occupied band; need at least {required} Hz")
            }
            WaveError::TruncationTooSmall { m, required, tail_energy } => {
                write!(
                    f,
                    "truncation order {m} leaves tail energy {tail_energy:.3e}; need at least M = {required}"
                )
            }
            WaveError::GridTooNarrow { lo, hi, need_lo, need_hi } => {
                write!(
                    f,
                    "frequency grid [{lo}, {hi}] Hz does not cover coefficient support [{need_lo}, {need_hi}] Hz"
                )
            }
            WaveError::EmptyGrid => write!(f, "empty grid"),
            WaveError::NonUniformGrid => write!(f, "grid is not uniformly spaced"),
            WaveError::GridMissingZero => write!(f, "grid does not contain 0"),
            WaveError::ZeroEnergy => write!(f, "zero-energy spectrum or waveform"),
            WaveError::SingularCoupling { det } => {
                write!(f, "delay-Doppler coupling determinant {det:.3e} is not positive (perfectly coupled design)")
            }
            WaveError::ThetaOutOfRange { theta } => {
                write!(f, "bearing {theta} rad outside [-pi/2, pi/2]")
            }
            WaveError::ZeroReference => write!(f, "reference angle of maximum FI is zero"),
            WaveError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            WaveError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for WaveError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            WaveError::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for WaveError {
    fn from(e: std::io::Error) -> Self {
        WaveError::Io(e)
    }
}
