//! Deterministic seed derivation.
//!
//! All randomized procedures derive their stream seeds from a master seed
//! plus structural context (replicate number, series role, label pair,
//! direction), so results are reproducible for any evaluation order or
//! thread count.

/// SplitMix64 finalizer; decorrelates nearby seeds.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Fold a sequence of context words into a master seed.
pub fn mix(master_seed: u64, parts: &[u64]) -> u64 {
    let mut state = splitmix64(master_seed);
    for &p in parts {
        state = splitmix64(state ^ p);
    }
    state
}

/// FNV-1a hash of a byte string, for folding labels into seeds.
pub fn hash_bytes(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Seed for one causal direction, keyed by the sorted label pair and a
/// direction flag so that `detect_pair(a, b)` and `detect_pair(b, a)`
/// derive identical per-direction streams.
pub fn direction_seed(master_seed: u64, from: &str, to: &str) -> u64 {
    let (lo, hi, flag) = if from <= to {
        (from, to, 0u64)
    } else {
        (to, from, 1u64)
    };
    mix(
        master_seed,
        &[hash_bytes(lo.as_bytes()), hash_bytes(hi.as_bytes()), flag],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mix_is_deterministic_and_context_sensitive() {
        assert_eq!(mix(7, &[1, 2]), mix(7, &[1, 2]));
        assert_ne!(mix(7, &[1, 2]), mix(7, &[2, 1]));
        assert_ne!(mix(7, &[1, 2]), mix(8, &[1, 2]));
    }

    #[test]
    fn direction_seed_is_order_invariant_per_direction() {
        // The seed depends on which series causes which, not on argument
        // order at the call site.
        let ab = direction_seed(42, "a", "b");
        let ba = direction_seed(42, "b", "a");
        assert_ne!(ab, ba);
        assert_eq!(ab, direction_seed(42, "a", "b"));
    }
}
