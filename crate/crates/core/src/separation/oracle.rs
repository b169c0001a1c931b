//! The simulated random oracle and the moderately-hard function built on it.

/// Seeded pseudorandom function standing in for a random oracle.
///
/// `read_block(i)` returns 64 pseudorandom bits for block index `i` and
/// charges exactly one cost unit; identical `(seed, index)` always give the
/// same bits. There is no way to observe oracle bits without paying.
#[derive(Debug, Clone)]
pub struct CostedOracle {
    seed: u64,
    reads: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl CostedOracle {
    pub fn new(seed: u64) -> Self {
        Self { seed, reads: 0 }
    }

    /// One unit per call, always.
    pub fn read_block(&mut self, index: u128) -> u64 {
        self.reads += 1;
        let lo = index as u64;
        let hi = (index >> 64) as u64;
        splitmix64(splitmix64(self.seed ^ splitmix64(lo)) ^ hi.wrapping_mul(0xd134_2543_de82_ef95))
    }

    pub fn reads(&self) -> u64 {
        self.reads
    }
}

/// `H_n : {0,1}^{2n} → {0,1}^n` with a direct-sum cost structure.
///
/// The block index is derived from the number whose binary representation is
/// `1 ∘ z`, so distinct inputs touch disjoint oracle blocks; each of the
/// `p_units` block reads per evaluation folds into the output by XOR, making
/// one evaluation cost exactly `P(n)` units.
#[derive(Debug, Clone, Copy)]
pub struct HFunction {
    pub n: u32,
    pub p_units: u64,
}

impl HFunction {
    pub fn new(n: u32, p_units: u64) -> Self {
        assert!(n >= 1 && n <= 31, "desk-scale n");
        assert!(p_units >= 1);
        Self { n, p_units }
    }

    /// `b(z)`: the integer with binary representation `1 ∘ z` for a 2n-bit z.
    pub fn prefixed(&self, z: u64) -> u64 {
        debug_assert!(z < (1u64 << (2 * self.n)));
        (1u64 << (2 * self.n)) | z
    }

    /// Evaluate on a 2n-bit input; costs exactly `p_units` oracle reads.
    pub fn eval(&self, z: u64, oracle: &mut CostedOracle) -> u64 {
        let base = self.prefixed(z) as u128 * self.p_units as u128;
        let mut acc = 0u64;
        for j in 0..self.p_units {
            acc ^= oracle.read_block(base + j as u128);
        }
        acc & ((1u64 << self.n) - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_counts_every_read() {
        let mut o = CostedOracle::new(5);
        let a = o.read_block(10);
        let b = o.read_block(10);
        assert_eq!(a, b);
        assert_eq!(o.reads(), 2);
    }

    #[test]
    fn oracle_is_seed_and_index_keyed() {
        let mut o1 = CostedOracle::new(1);
        let mut o2 = CostedOracle::new(2);
        assert_ne!(o1.read_block(7), o2.read_block(7));
        let mut o = CostedOracle::new(1);
        assert_ne!(o.read_block(7), o.read_block(8));
    }

    #[test]
    fn h_costs_exactly_p_per_fresh_input_and_blocks_are_disjoint() {
        let h = HFunction::new(10, 10);
        let mut o = CostedOracle::new(3);
        let k = 57u64;
        for z in 0..k {
            h.eval(z, &mut o);
        }
        assert_eq!(o.reads(), k * h.p_units);
        // Disjoint blocks: block ranges of distinct inputs cannot overlap.
        let b1 = h.prefixed(5) as u128 * 10;
        let b2 = h.prefixed(6) as u128 * 10;
        assert!(b1 + 10 <= b2 || b2 + 10 <= b1);
    }

    #[test]
    fn h_is_deterministic_in_z() {
        let h = HFunction::new(8, 4);
        let mut o = CostedOracle::new(9);
        let a = h.eval(123, &mut o);
        let b = h.eval(123, &mut o);
        assert_eq!(a, b);
        assert!(a < (1 << 8));
    }
}
