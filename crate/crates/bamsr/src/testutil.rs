//! Shared fixtures for unit tests.

use crate::field::FieldSpec;
use crate::params::CodeParams;

/// The worked micro-code: mu = 1, delta = 2 over GF(7) with points 1..4,
/// small enough to check every quantity by hand.
pub(crate) fn worked_code() -> CodeParams {
    CodeParams::with_points(1, 2, &FieldSpec::prime(7), &[1, 2, 3, 4]).unwrap()
}

/// A deterministic source for the worked code.
pub(crate) fn worked_source() -> Vec<u16> {
    vec![1, 2, 3, 4]
}

/// Tiny deterministic generator for test data, independent of the simulator
/// RNG and of any external crate.
pub(crate) struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(
            seed.wrapping_mul(2862933555777941757)
                .wrapping_add(3037000493),
        )
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    pub fn symbols(&mut self, len: usize, q: u32) -> Vec<u16> {
        (0..len).map(|_| (self.below(q as u64)) as u16).collect()
    }
}
