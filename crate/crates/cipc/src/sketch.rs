//! The `L`-bit register and its serialization.
//!
//! A sketch is a row of `L` bits, all clear at creation. Adding a record
//! hashes it, finds the least significant set bit of the hash, and sets
//! that register position. Bits only ever turn on, so the register is
//! insensitive to duplicates and to input order, and the union of two
//! record streams is the bitwise OR of their registers.
//!
//! The register plus its hash configuration is the only state that ever
//! persists. Its size is fixed by `L` alone — nothing about the records,
//! not even how many there were, is recoverable from it.

use crate::error::Error;
use crate::estimate::EstimateReport;
use crate::hash::{lssb, HashConfig};

/// Magic bytes at the start of every serialized sketch.
pub const STATE_MAGIC: [u8; 4] = *b"CIPC";
/// Current state file format version.
pub const STATE_VERSION: u8 = 1;

/// Header: magic (4) + version (1) + register width (1) + three u64 hash
/// constants (24).
const HEADER_LEN: usize = 30;

/// A mergeable distinct-count register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sketch {
    cfg: HashConfig,
    bits: u64,
}

impl Sketch {
    /// Empty sketch with the given configuration.
    pub fn new(cfg: HashConfig) -> Self {
        Self { cfg, bits: 0 }
    }

    /// Empty sketch with the standard hash constants and `register_bits`
    /// positions.
    pub fn with_register_bits(register_bits: u8) -> Result<Self, Error> {
        Ok(Self::new(HashConfig::new(register_bits)?))
    }

    pub fn config(&self) -> &HashConfig {
        &self.cfg
    }

    /// Register width `L`.
    pub fn register_bits(&self) -> u8 {
        self.cfg.register_bits()
    }

    /// Record one observation. Duplicates set the same position again and
    /// therefore change nothing.
    pub fn add(&mut self, record: &[u8]) {
        let h = self.cfg.hash_to_domain(record);
        self.bits |= 1u64 << lssb(h, self.cfg.register_bits());
    }

    /// Whether register position `position` is set.
    pub fn bit(&self, position: u8) -> bool {
        debug_assert!(position < self.cfg.register_bits());
        self.bits >> position & 1 == 1
    }

    /// True when no record has ever been added.
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// True when every register position is set.
    pub fn is_saturated(&self) -> bool {
        self.bits == self.mask()
    }

    /// Index of the lowest clear register position, the estimators' `k`.
    ///
    /// Returns `L` when every position is set (saturation); the register
    /// itself stays valid, but the collision-included estimator is
    /// undefined there.
    pub fn rightmost_zero(&self) -> u8 {
        (!self.bits).trailing_zeros() as u8
    }

    /// Union of two sketches: the position-wise OR of their registers.
    ///
    /// The result is identical to the sketch of the concatenated record
    /// streams, so ingestion can be sharded and combined later. Fails with
    /// [`Error::ConfigMismatch`] unless both sketches share the same width
    /// and hash constants.
    pub fn merge(&self, other: &Sketch) -> Result<Sketch, Error> {
        if self.cfg != other.cfg {
            return Err(Error::ConfigMismatch);
        }
        Ok(Sketch {
            cfg: self.cfg,
            bits: self.bits | other.bits,
        })
    }

    /// Cardinality estimates for the current register contents.
    pub fn report(&self) -> EstimateReport {
        EstimateReport::from_sketch(self)
    }

    /// Serialize to the fixed binary state format.
    ///
    /// Layout, all multi-byte fields little-endian:
    ///
    /// | bytes  | field                     |
    /// |--------|---------------------------|
    /// | 0..4   | magic `"CIPC"`            |
    /// | 4      | version (1)               |
    /// | 5      | register width `L`        |
    /// | 6..14  | mix multiplier            |
    /// | 14..22 | fold offset               |
    /// | 22..30 | fold prime                |
    /// | 30..   | `ceil(L/8)` payload bytes |
    ///
    /// Register position `i` is stored in payload byte `i / 8` at bit
    /// `i % 8`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let payload = payload_len(self.cfg.register_bits());
        let mut out = Vec::with_capacity(HEADER_LEN + payload);
        out.extend_from_slice(&STATE_MAGIC);
        out.push(STATE_VERSION);
        out.push(self.cfg.register_bits());
        out.extend_from_slice(&self.cfg.mix_multiplier().to_le_bytes());
        out.extend_from_slice(&self.cfg.fold_offset().to_le_bytes());
        out.extend_from_slice(&self.cfg.fold_prime().to_le_bytes());
        out.extend_from_slice(&self.bits.to_le_bytes()[..payload]);
        out
    }

    /// Reconstruct a sketch from its serialized form.
    pub fn from_bytes(bytes: &[u8]) -> Result<Sketch, Error> {
        if bytes.len() >= 4 && bytes[0..4] != STATE_MAGIC {
            return Err(Error::BadMagic);
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::TruncatedPayload {
                needed: HEADER_LEN,
                found: bytes.len(),
            });
        }
        if bytes[4] != STATE_VERSION {
            return Err(Error::UnsupportedVersion { found: bytes[4] });
        }
        let register_bits = bytes[5];
        if register_bits < 1 || register_bits > crate::hash::MAX_REGISTER_BITS {
            return Err(Error::InvalidRegisterBits {
                given: register_bits,
            });
        }
        let expected = HEADER_LEN + payload_len(register_bits);
        if bytes.len() < expected {
            return Err(Error::TruncatedPayload {
                needed: expected,
                found: bytes.len(),
            });
        }
        if bytes.len() > expected {
            return Err(Error::TrailingBytes {
                extra: bytes.len() - expected,
            });
        }
        let mix_multiplier = u64::from_le_bytes(bytes[6..14].try_into().unwrap());
        let fold_offset = u64::from_le_bytes(bytes[14..22].try_into().unwrap());
        let fold_prime = u64::from_le_bytes(bytes[22..30].try_into().unwrap());
        let cfg =
            HashConfig::with_constants(register_bits, fold_offset, fold_prime, mix_multiplier)?;

        let mut raw = [0u8; 8];
        raw[..payload_len(register_bits)].copy_from_slice(&bytes[HEADER_LEN..expected]);
        let bits = u64::from_le_bytes(raw) & ((1u64 << register_bits) - 1);
        Ok(Sketch { cfg, bits })
    }

    fn mask(&self) -> u64 {
        (1u64 << self.cfg.register_bits()) - 1
    }
}

/// Payload bytes needed for an `L`-bit register.
pub fn payload_len(register_bits: u8) -> usize {
    (register_bits as usize).div_ceil(8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sketch16() -> Sketch {
        Sketch::with_register_bits(16).unwrap()
    }

    #[test]
    fn fresh_sketch_is_empty() {
        let sk = sketch16();
        assert!(sk.is_empty());
        assert_eq!(sk.rightmost_zero(), 0);
        assert!(!sk.is_saturated());
    }

    #[test]
    fn add_sets_the_lssb_position() {
        // Find a record whose hash has LSSB 4, then check only bit 4 is set.
        let mut sk = sketch16();
        let cfg = *sk.config();
        let rec = (0u64..)
            .map(|i| i.to_le_bytes())
            .find(|r| lssb(cfg.hash_to_domain(r), 16) == 4)
            .unwrap();
        sk.add(&rec);
        for i in 0..16 {
            assert_eq!(sk.bit(i), i == 4);
        }
    }

    #[test]
    fn add_is_idempotent() {
        let mut a = sketch16();
        a.add(b"record");
        let mut b = a.clone();
        b.add(b"record");
        assert_eq!(a, b);
    }

    #[test]
    fn rightmost_zero_scans_past_set_prefix() {
        let mut sk = sketch16();
        sk.bits = 0b0011_1111; // positions 0-5 set, 6 clear
        assert_eq!(sk.rightmost_zero(), 6);
        sk.bits |= 0b1 << 9; // a set bit beyond the gap changes nothing
        assert_eq!(sk.rightmost_zero(), 6);
    }

    #[test]
    fn saturated_register_reports_full_width() {
        let mut sk = sketch16();
        sk.bits = (1u64 << 16) - 1;
        assert!(sk.is_saturated());
        assert_eq!(sk.rightmost_zero(), 16);
    }

    #[test]
    fn merge_is_or_and_identity_on_empty() {
        let mut a = sketch16();
        let mut b = sketch16();
        a.add(b"left");
        b.add(b"right");
        let ab = a.merge(&b).unwrap();
        let ba = b.merge(&a).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(sketch16().merge(&a).unwrap(), a);
    }

    #[test]
    fn merge_rejects_different_configs() {
        let a = sketch16();
        let b = Sketch::with_register_bits(20).unwrap();
        assert_eq!(a.merge(&b).unwrap_err(), Error::ConfigMismatch);
    }

    #[test]
    fn roundtrip_preserves_bits_and_config() {
        let mut sk = Sketch::with_register_bits(20).unwrap();
        for i in 0u64..500 {
            sk.add(&i.to_le_bytes());
        }
        let bytes = sk.to_bytes();
        assert_eq!(Sketch::from_bytes(&bytes).unwrap(), sk);
    }

    #[test]
    fn empty_sixteen_bit_state_layout() {
        let bytes = sketch16().to_bytes();
        assert_eq!(bytes.len(), 32); // 30-byte header + 2 payload bytes
        assert_eq!(&bytes[0..4], b"CIPC");
        assert_eq!(bytes[4], 1);
        assert_eq!(bytes[5], 16);
        assert_eq!(&bytes[30..], &[0, 0]);
    }

    #[test]
    fn payload_bit_layout() {
        let mut sk = sketch16();
        sk.bits = 1 << 9; // position 9 -> payload byte 1, bit 1
        let bytes = sk.to_bytes();
        assert_eq!(bytes[30], 0);
        assert_eq!(bytes[31], 0b10);
    }

    #[test]
    fn tampered_magic_is_rejected() {
        let mut bytes = sketch16().to_bytes();
        bytes[0] = b'X';
        assert_eq!(Sketch::from_bytes(&bytes).unwrap_err(), Error::BadMagic);
    }

    #[test]
    fn unknown_version_is_rejected() {
        let mut bytes = sketch16().to_bytes();
        bytes[4] = 9;
        assert_eq!(
            Sketch::from_bytes(&bytes).unwrap_err(),
            Error::UnsupportedVersion { found: 9 }
        );
    }

    #[test]
    fn short_input_is_truncated() {
        let bytes = sketch16().to_bytes();
        assert!(matches!(
            Sketch::from_bytes(&bytes[..31]).unwrap_err(),
            Error::TruncatedPayload { .. }
        ));
        assert!(matches!(
            Sketch::from_bytes(&bytes[..3]).unwrap_err(),
            Error::TruncatedPayload { .. }
        ));
    }

    #[test]
    fn trailing_bytes_are_rejected() {
        let mut bytes = sketch16().to_bytes();
        bytes.push(0);
        assert_eq!(
            Sketch::from_bytes(&bytes).unwrap_err(),
            Error::TrailingBytes { extra: 1 }
        );
    }

    #[test]
    fn out_of_range_width_is_rejected() {
        let mut bytes = sketch16().to_bytes();
        bytes[5] = 0;
        assert!(matches!(
            Sketch::from_bytes(&bytes).unwrap_err(),
            Error::InvalidRegisterBits { given: 0 }
        ));
    }

    #[test]
    fn serialized_size_depends_only_on_width() {
        let empty = Sketch::with_register_bits(24).unwrap();
        let mut busy = Sketch::with_register_bits(24).unwrap();
        for i in 0u64..10_000 {
            busy.add(&i.to_le_bytes());
        }
        assert_eq!(empty.to_bytes().len(), busy.to_bytes().len());
    }
}
