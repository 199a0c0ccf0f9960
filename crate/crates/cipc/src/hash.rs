//! Deterministic record hashing.
//!
//! Records are arbitrary byte sequences. They are folded to a 64-bit word
//! with FNV-1a, diffused with a multiplicative avalanche mix, and the top
//! `L` bits of the result form a value uniformly distributed over
//! `[0, 2^L - 1]`. Everything here is a pure function: the same record and
//! configuration always hash to the same value, on every platform.
//!
//! None of this is cryptographic. The goal is statistical uniformity on
//! real workloads, not resistance to adversarial inputs.

use crate::error::Error;

/// FNV-1a 64-bit offset basis.
pub const FOLD_OFFSET: u64 = 14695981039346656037;
/// FNV-1a 64-bit prime.
pub const FOLD_PRIME: u64 = 1099511628211;
/// Odd multiplier for the mixing stage (2^64 / golden ratio).
pub const MIX_MULTIPLIER: u64 = 0x9E37_79B9_7F4A_7C15;
/// Widest register this crate supports. Keeping `L <= 56` keeps `2^L` and
/// `1 - 2^-L` exactly representable in the `f64` arithmetic the estimators
/// run on.
pub const MAX_REGISTER_BITS: u8 = 56;

// Finalizer round constants (Stafford / splitmix64 variant 13).
const MIX_ROUND1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_ROUND2: u64 = 0x94D0_49BB_1331_11EB;

/// Register width plus the constants that define the record hash.
///
/// Two sketches can only be merged when their configurations are identical;
/// the configuration therefore travels with every serialized sketch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashConfig {
    register_bits: u8,
    fold_offset: u64,
    fold_prime: u64,
    mix_multiplier: u64,
}

impl HashConfig {
    /// Configuration with the standard fold and mix constants.
    pub fn new(register_bits: u8) -> Result<Self, Error> {
        Self::with_constants(register_bits, FOLD_OFFSET, FOLD_PRIME, MIX_MULTIPLIER)
    }

    /// Configuration with explicit constants, as read back from a state file.
    pub fn with_constants(
        register_bits: u8,
        fold_offset: u64,
        fold_prime: u64,
        mix_multiplier: u64,
    ) -> Result<Self, Error> {
        if register_bits < 1 || register_bits > MAX_REGISTER_BITS {
            return Err(Error::InvalidRegisterBits {
                given: register_bits,
            });
        }
        if mix_multiplier % 2 == 0 {
            return Err(Error::EvenMultiplier {
                multiplier: mix_multiplier,
            });
        }
        Ok(Self {
            register_bits,
            fold_offset,
            fold_prime,
            mix_multiplier,
        })
    }

    /// Number of register positions, `L`.
    pub fn register_bits(&self) -> u8 {
        self.register_bits
    }

    /// Size of the hash range, `2^L`.
    pub fn domain_size(&self) -> u64 {
        1u64 << self.register_bits
    }

    pub fn fold_offset(&self) -> u64 {
        self.fold_offset
    }

    pub fn fold_prime(&self) -> u64 {
        self.fold_prime
    }

    pub fn mix_multiplier(&self) -> u64 {
        self.mix_multiplier
    }

    /// Hash a record into `[0, 2^L - 1]`.
    ///
    /// The fold reduces the record to one word; the mix diffuses every input
    /// bit across the word; the top `L` bits of the mix are the hash value.
    pub fn hash_to_domain(&self, record: &[u8]) -> u64 {
        let folded = fold_with(record, self.fold_offset, self.fold_prime);
        mix64(folded, self.mix_multiplier) >> (64 - self.register_bits)
    }
}

/// Fold a record to a 64-bit word with FNV-1a and the standard constants.
///
/// An empty record folds to the offset basis. Folding is byte-order
/// sensitive: `"ab"` and `"ba"` fold differently.
pub fn fold_bytes(record: &[u8]) -> u64 {
    fold_with(record, FOLD_OFFSET, FOLD_PRIME)
}

fn fold_with(record: &[u8], offset: u64, prime: u64) -> u64 {
    let mut value = offset;
    for &byte in record {
        value = (value ^ u64::from(byte)).wrapping_mul(prime);
    }
    value
}

/// Avalanche mix: multiply by `multiplier`, then two xorshift-multiply
/// rounds and a final xorshift.
///
/// A bare multiplication leaves nearby inputs correlated in a way that
/// visibly distorts collision statistics on dense integer workloads; the
/// finalizer rounds give full avalanche, so the top bits behave like an
/// independent uniform draw. `mix64(1, MIX_MULTIPLIER)` equals the
/// well-known splitmix64 output for seed 0.
pub fn mix64(value: u64, multiplier: u64) -> u64 {
    let mut z = value.wrapping_mul(multiplier);
    z = (z ^ (z >> 30)).wrapping_mul(MIX_ROUND1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_ROUND2);
    z ^ (z >> 31)
}

/// Position of the least significant set bit of `h`, for `h` in
/// `[0, 2^L - 1]`.
///
/// `h = 0` has no set bit and is clamped to `L - 1`, so every hashed record
/// marks exactly one register position and the result always lies in
/// `[0, L - 1]`.
pub fn lssb(h: u64, register_bits: u8) -> u8 {
    debug_assert!(register_bits >= 1 && register_bits <= MAX_REGISTER_BITS);
    debug_assert!(register_bits == 64 || h < (1u64 << register_bits));
    if h == 0 {
        register_bits - 1
    } else {
        (h.trailing_zeros() as u8).min(register_bits - 1)
    }
}
