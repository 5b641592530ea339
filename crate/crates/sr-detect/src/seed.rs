//! Deterministic seed derivation for parallel Monte-Carlo work.
//!
//! Replicates, grid cells, and pixels each get their own RNG substream,
//! derived from a base seed and the item index. Derivation is pure, so
//! results never depend on scheduling or thread count.

/// SplitMix64 finalizer; full-avalanche mixing of a 64-bit word.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Substream seed for item `index` under `base`.
///
/// Chained calls derive nested streams, e.g.
/// `derive_stream(derive_stream(base, cell), replicate)`.
#[inline]
pub fn derive_stream(base: u64, index: u64) -> u64 {
    splitmix64(base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}
