//! Deterministic seed derivation.
//!
//! Every random stream in the crate is keyed by a 64-bit seed derived from a
//! parent seed and an integer tag via [`mix`]. Chaining `mix` calls gives
//! independent, platform-stable substreams without any shared sequential
//! generator, so adding a consumer never perturbs existing draws.

/// splitmix64-style finalizer combining a parent seed with a stream tag.
pub(crate) fn mix(base: u64, tag: u64) -> u64 {
    let mut z = base ^ tag
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
