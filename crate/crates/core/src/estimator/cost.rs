//! Round counts and total response bandwidth for a target security level.

use num_bigint::BigUint;
use num_traits::Pow;

use super::EstimatorParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// This scheme, cheating probability 1/2 per round.
    Half,
    /// The earlier scheme with cheating probability 2/3 per round.
    TwoThirds,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Half => "half",
            Scheme::TwoThirds => "two_thirds",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostReport {
    pub scheme: Scheme,
    pub ell: u64,
    /// Real-valued round count used in the bandwidth formula.
    pub rounds: f64,
    /// `rounds` rounded up.
    pub rounds_presented: u64,
    pub bits: f64,
    /// `floor(bits / 8)`.
    pub total_bytes: u64,
}

/// `ceil(ell / (log2 3 - 1))`, computed exactly as the least `N` with
/// `3^N >= 2^(N + ell)`.
pub fn two_thirds_base_rounds(ell: u64) -> u64 {
    let approx = (ell as f64 / (libm::log2(3.0) - 1.0)) as u64;
    let holds = |n: u64| -> bool {
        let three: BigUint = Pow::pow(BigUint::from(3u32), n);
        let two: BigUint = Pow::pow(BigUint::from(2u32), n + ell);
        three >= two
    };
    let mut n = approx.saturating_sub(2);
    while !holds(n) {
        n += 1;
    }
    while n > 0 && holds(n - 1) {
        n -= 1;
    }
    n
}

/// `ell` for the half scheme, `(2/3) ceil(ell / (log2 3 - 1))` otherwise.
pub fn rounds_needed(ell: u64, scheme: Scheme) -> f64 {
    match scheme {
        Scheme::Half => ell as f64,
        Scheme::TwoThirds => 2.0 * two_thirds_base_rounds(ell) as f64 / 3.0,
    }
}

/// Bits sent over all rounds: `R ((n^2 + m - 1) log2 q + k ell)` with
/// `k = 5/2` for the half scheme and `3/2` for the other. Exact when `q` is a
/// power of two.
pub fn comm_cost(ell: u64, p: &EstimatorParams, scheme: Scheme) -> CostReport {
    let rounds = rounds_needed(ell, scheme);
    let (numer, denom) = match scheme {
        Scheme::Half => (ell as u128, 1u128),
        Scheme::TwoThirds => (2 * two_thirds_base_rounds(ell) as u128, 3u128),
    };
    let rounds_presented = numer.div_ceil(denom) as u64;
    let elems = (p.n * p.n + p.m - 1) as u128;
    let slack = match scheme {
        Scheme::Half => 5u128,
        Scheme::TwoThirds => 3u128,
    };
    let (bits, total_bytes) = if p.q.is_power_of_two() {
        // bits = numer/denom * (elems * k + slack * ell / 2)
        let k = p.q.trailing_zeros() as u128;
        let twice = numer * (2 * elems * k + slack * ell as u128);
        let den = 2 * denom;
        (twice as f64 / den as f64, (twice / (8 * den)) as u64)
    } else {
        let bits = rounds * (elems as f64 * p.log2_q() + slack as f64 * ell as f64 / 2.0);
        (bits, libm::floor(bits / 8.0) as u64)
    };
    CostReport { scheme, ell, rounds, rounds_presented, bits, total_bytes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_rounds() {
        assert_eq!(two_thirds_base_rounds(128), 219);
        assert_eq!(two_thirds_base_rounds(192), 329);
        assert_eq!(two_thirds_base_rounds(256), 438);
        assert_eq!(two_thirds_base_rounds(1), 2);
    }

    #[test]
    fn half_bits() {
        let p = EstimatorParams::new(2, 26, 209, 13, 3.0).unwrap();
        let c = comm_cost(128, &p, Scheme::Half);
        assert_eq!(c.bits, 154112.0);
        assert_eq!(c.total_bytes, 19264);
    }
}
