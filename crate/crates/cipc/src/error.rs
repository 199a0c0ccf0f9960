use std::fmt;

/// Errors produced by sketch construction, serialization, estimation and
/// the experiment harness.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Register width outside the supported `[1, 56]` range.
    InvalidRegisterBits { given: u8 },
    /// A hash multiplier must be odd to be a bijection modulo 2^64.
    EvenMultiplier { multiplier: u64 },
    /// Two sketches with different register widths or hash constants.
    ConfigMismatch,
    /// Serialized state does not start with the `CIPC` magic.
    BadMagic,
    /// Serialized state carries a format version this build cannot read.
    UnsupportedVersion { found: u8 },
    /// Serialized state is shorter than its header and payload require.
    TruncatedPayload { needed: usize, found: usize },
    /// Serialized state has bytes left over after the payload.
    TrailingBytes { extra: usize },
    /// Every register position is set; the collision-included estimator
    /// is undefined and the sketch should be rebuilt with a larger register.
    Saturated { register_bits: u8 },
    /// An aggregate was requested over zero samples.
    EmptySamples,
    /// A confidence interval needs at least two samples.
    InsufficientSamples { found: usize },
    /// Percent error is only defined against a positive true value.
    NonPositiveTruth { truth: f64 },
    /// A workload of `m` distinct values cannot be drawn from a smaller universe.
    UniverseTooSmall { m: u64, universe_max: u64 },
    /// An experiment needs at least one trial.
    NoTrials,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidRegisterBits { given } => {
                write!(f, "register width {given} outside supported range [1, 56]")
            }
            Self::EvenMultiplier { multiplier } => {
                write!(f, "mix multiplier {multiplier:#x} must be odd")
            }
            Self::ConfigMismatch => {
                write!(f, "sketches have different register widths or hash constants")
            }
            Self::BadMagic => write!(f, "not a sketch state file (bad magic)"),
            Self::UnsupportedVersion { found } => {
                write!(f, "unsupported state format version {found}")
            }
            Self::TruncatedPayload { needed, found } => {
                write!(f, "truncated state: need {needed} bytes, found {found}")
            }
            Self::TrailingBytes { extra } => {
                write!(f, "malformed state: {extra} trailing bytes after payload")
            }
            Self::Saturated { register_bits } => {
                write!(
                    f,
                    "register saturated (all {register_bits} positions set); \
                     rebuild with a larger register width"
                )
            }
            Self::EmptySamples => write!(f, "no samples to aggregate"),
            Self::InsufficientSamples { found } => {
                write!(f, "confidence interval needs at least 2 samples, found {found}")
            }
            Self::NonPositiveTruth { truth } => {
                write!(f, "percent error undefined for non-positive true value {truth}")
            }
            Self::UniverseTooSmall { m, universe_max } => {
                write!(
                    f,
                    "cannot draw {m} distinct values from universe [1, {universe_max}]"
                )
            }
            Self::NoTrials => write!(f, "experiment needs at least one trial"),
        }
    }
}

impl std::error::Error for Error {}
