//! Cardinality estimators for the bitmap register.
//!
//! With hash values uniform over `[0, 2^L - 1]`, a fraction `2^-(i+1)` of
//! distinct records sets register position `i`, so the lowest clear
//! position `k` tracks `log2` of the distinct count `M`. Two estimators
//! turn `k` into a count:
//!
//! * **PC** — the classic corrected estimate `2^k / φ` with the constant
//!   correction factor `φ = 0.77351`.
//! * **CIPC** — collision-included probabilistic counting. Hashing `M`
//!   distinct records into `2^L` values loses some of them to collisions;
//!   the raw indicator `2^k` counts occupied hash values, not records.
//!   Solving the expected-occupancy relation
//!   `2^k = 2^L (1 - (1 - 2^-L)^M)` for `M` gives
//!
//!   ```text
//!   M ≈ floor( log(1 - 2^(k-L)) / log(1 - 2^-L) )
//!   ```
//!
//!   which adds the expected collision count back onto `2^k`.
//!
//! CIPC is undefined at saturation (`k = L` makes the logarithm's argument
//! zero); callers get [`Error::Saturated`] and should rebuild with a larger
//! register.

use crate::error::Error;
use crate::hash::MAX_REGISTER_BITS;
use crate::sketch::Sketch;

/// The correction factor `φ` dividing the raw indicator in the classic
/// estimate.
pub const CORRECTION_FACTOR: f64 = 0.77351;

/// Classic corrected estimate, `2^k / φ`.
///
/// Defined for every `k` in `[0, L]`, including saturation.
pub fn estimate_pc(k: u8, register_bits: u8) -> f64 {
    debug_assert!(k <= register_bits && register_bits <= MAX_REGISTER_BITS);
    (1u64 << k) as f64 / CORRECTION_FACTOR
}

/// Collision-included estimate before the final floor.
///
/// Evaluated as `ln_1p(-2^(k-L)) / ln_1p(-2^-L)` to avoid cancellation at
/// large `L`. Fails with [`Error::Saturated`] when `k = L`.
pub fn cipc_raw(k: u8, register_bits: u8) -> Result<f64, Error> {
    debug_assert!(k <= register_bits && register_bits <= MAX_REGISTER_BITS);
    if k >= register_bits {
        return Err(Error::Saturated { register_bits });
    }
    let gap = 1.0 / (1u64 << (register_bits - k)) as f64; // 2^(k-L), exact
    let unit = 1.0 / (1u64 << register_bits) as f64; // 2^-L, exact
    Ok((-gap).ln_1p() / (-unit).ln_1p())
}

/// Collision-included estimate: the floor of [`cipc_raw`].
pub fn estimate_cipc(k: u8, register_bits: u8) -> Result<u64, Error> {
    cipc_raw(k, register_bits).map(|v| v.floor() as u64)
}

/// Expected number of hash collisions when `m` distinct records are hashed
/// uniformly into `2^L` values (birthday paradox):
///
/// ```text
/// C = m - 2^L + 2^L ((2^L - 1) / 2^L)^m
/// ```
///
/// Evaluated as `m + 2^L · exp_m1(m · ln_1p(-2^-L))` for numerical
/// stability. Accepts fractional `m`; at most one record means no
/// collisions, exactly.
pub fn expected_collisions(m: f64, register_bits: u8) -> f64 {
    debug_assert!(m >= 0.0 && register_bits >= 1 && register_bits <= MAX_REGISTER_BITS);
    if m <= 1.0 {
        return 0.0;
    }
    let domain = (1u64 << register_bits) as f64;
    m + domain * (m * (-1.0 / domain).ln_1p()).exp_m1()
}

/// Register width to use for an anticipated count: `floor(log2 M) + 2`,
/// clamped to the supported range.
///
/// Two positions of headroom keep the register from saturating at the
/// anticipated load while staying small enough that the collision model
/// retains signal.
pub fn recommend_register_size(expected_m: u64) -> u8 {
    let bits = expected_m.max(1).ilog2() + 2;
    (bits.min(MAX_REGISTER_BITS as u32)).max(1) as u8
}

/// Everything the estimators can say about one register.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    /// Lowest clear register position.
    pub k: u8,
    /// Raw indicator `2^k`.
    pub raw_indicator: f64,
    /// Classic corrected estimate.
    pub pc_estimate: f64,
    /// Collision-included estimate before the floor; `None` at saturation.
    pub cipc_estimate: Option<f64>,
    /// Collision-included estimate after the floor; `None` at saturation.
    pub cipc_floor: Option<u64>,
    /// True when every register position is set.
    pub saturated: bool,
}

impl EstimateReport {
    /// Estimates for a sketch's current contents.
    ///
    /// A register that has never seen a record reports 0 for both
    /// estimators: the formulas would say `1/φ` and 1 respectively, but the
    /// all-zero register is unambiguous evidence of an empty stream. A
    /// register where position 0 is clear but other positions are set is
    /// not special-cased.
    pub fn from_sketch(sketch: &Sketch) -> Self {
        let register_bits = sketch.register_bits();
        let k = sketch.rightmost_zero();
        if sketch.is_empty() {
            return Self {
                k,
                raw_indicator: 1.0,
                pc_estimate: 0.0,
                cipc_estimate: Some(0.0),
                cipc_floor: Some(0),
                saturated: false,
            };
        }
        let saturated = k == register_bits;
        let (cipc_estimate, cipc_floor) = if saturated {
            (None, None)
        } else {
            let raw = cipc_raw(k, register_bits).expect("k < L");
            (Some(raw), Some(raw.floor() as u64))
        };
        Self {
            k,
            raw_indicator: (1u64 << k) as f64,
            pc_estimate: estimate_pc(k, register_bits),
            cipc_estimate,
            cipc_floor,
            saturated,
        }
    }
}
