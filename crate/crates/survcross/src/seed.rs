//! Deterministic seed derivation.
//!
//! Every stochastic routine in this crate takes an explicit `u64` seed and
//! derives sub-seeds through [`mix`], so serial and parallel execution agree
//! bit for bit. The mix is SplitMix64: starting from the first component,
//! each further component is XORed into the state and the state is advanced
//! one SplitMix64 step.

/// One step of the SplitMix64 generator.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Fold a sequence of components into a single derived seed.
///
/// `mix(&[s])` differs from `s` itself, so a parent seed never collides with
/// its own first child stream.
pub fn mix(parts: &[u64]) -> u64 {
    let mut state = 0x853c_49e6_748f_ea9b;
    for &p in parts {
        state = splitmix64(state ^ p);
    }
    state
}
