//! Benchmark scenarios, kept in a library so the criterion harness stays a
//! thin timing loop and the scenarios themselves are testable.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use oldcong_core::congruence::{self, CongruenceReport, Method};
use oldcong_core::{fixtures, oldspace_matrix, Level};

/// Full dual-route pipeline for a fixture conductor.
pub fn fixture_pipeline(level: u64) -> CongruenceReport {
    let curve = fixtures::by_level(level);
    congruence::congruence_primes(&curve, Method::Both).expect("fixture pipeline runs")
}

/// Saturation route at a level with no fixture curve: the old subspace is
/// assembled and a synthetic primitive vector (the first unit vector, which
/// no old form matches) stands in for the newform coefficients.
pub fn stretch_saturation(level: u64) -> (Vec<BigUint>, BigUint) {
    let level = Level::new(level);
    let old = oldspace_matrix(level);
    let mut probe = vec![BigInt::zero(); old.precision()];
    probe[0] = BigInt::one();
    congruence::saturation_congruence_primes(&probe, old.matrix(), level)
        .expect("probe vector avoids the rational old space")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_scenario_reproduces_the_known_congruence() {
        let report = fixture_pipeline(33);
        assert_eq!(report.congruence_primes, vec![BigUint::from(3u32)]);
    }

    #[test]
    fn stretch_scenario_runs_at_a_two_prime_level() {
        let (primes, exponent) = stretch_saturation(302);
        // Every reported prime divides the exponent.
        for p in &primes {
            assert!((&exponent % p).is_zero());
        }
    }
}
