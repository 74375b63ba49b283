use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow};

use super::bigmath::{binom, binom_signed, log2_add, log2_big, ratio_f64};
use super::{mgd::d_mgd, EstimatorParams, Undetermined};
use crate::{Error, Result};

fn lg(x: f64) -> f64 {
    libm::log2(x)
}

/// Numerator and denominator of the probability that a uniform `n x n`
/// matrix over `F_q` has rank `ell`.
fn prob_rank_fraction(n: u64, ell: u64, q: u64) -> (BigUint, BigUint) {
    let qb = BigUint::from(q);
    let qn: BigUint = Pow::pow(&qb, n);
    let ql: BigUint = Pow::pow(&qb, ell);
    let mut num = BigUint::one();
    let mut den: BigUint = Pow::pow(&qb, n * n);
    let mut qi = BigUint::one();
    for _ in 0..ell {
        let f = &qn - &qi;
        num *= &f * &f;
        den *= &ql - &qi;
        qi *= &qb;
    }
    (num, den)
}

pub fn prob_rank(n: u64, ell: u64, q: u64) -> Result<f64> {
    if ell > n {
        return Err(Error::RankOutOfRange { r: ell as usize, n: n as usize });
    }
    let (num, den) = prob_rank_fraction(n, ell, q);
    Ok(ratio_f64(&num, &den))
}

pub fn log2_prob_rank(n: u64, ell: u64, q: u64) -> Result<f64> {
    if ell > n {
        return Err(Error::RankOutOfRange { r: ell as usize, n: n as usize });
    }
    let (num, den) = prob_rank_fraction(n, ell, q);
    Ok(log2_big(&num) - log2_big(&den))
}

/// `(direct, rank)`: `q^(m-1) (r+1)^w` and `(sum_{l=1..r} P(n,l))^-1 (r+1)^w`.
pub fn exhaustive_cx(p: &EstimatorParams) -> (f64, f64) {
    let tail = p.omega * lg((p.r + 1) as f64);
    let direct = (p.m - 1) as f64 * p.log2_q() + tail;
    let mass = (1..=p.r).fold(f64::NEG_INFINITY, |acc, l| log2_add(acc, log2_prob_rank(p.n, l, p.q).unwrap()));
    (direct, -mass + tail)
}

/// `min(q^(ceil(m/n) r), q^(floor(m/n) r + m mod n)) m^w`.
pub fn kernel_cx(p: &EstimatorParams) -> f64 {
    let a = p.m.div_ceil(p.n) * p.r;
    let b = (p.m / p.n) * p.r + p.m % p.n;
    a.min(b) as f64 * p.log2_q() + p.omega * lg(p.m as f64)
}

/// `q^max(0, n(n-r) - m) (n(n-r))^w`.
pub fn bigm_cx(p: &EstimatorParams) -> f64 {
    let nn = p.n * (p.n - p.r);
    let e = nn.saturating_sub(p.m);
    e as f64 * p.log2_q() + p.omega * lg(nn as f64)
}

/// `q^max((n^2-m-1)/2, nr-m-r^2/4) n^2 r`, with the hidden constant set to 1
/// and the exponent floored at 0 (it is negative only once `m >= n^2`).
pub fn syndrome_cx(p: &EstimatorParams) -> f64 {
    let (n, m, r) = (p.n as f64, p.m as f64, p.r as f64);
    let e = ((n * n - m - 1.0) / 2.0).max(n * r - m - r * r / 4.0).max(0.0);
    e * p.log2_q() + lg(n * n * r)
}

/// `D_KS = min{d in 1..=r : C(r,d) n > C(r,d+1) m} + 2`.
pub fn d_ks(p: &EstimatorParams) -> Option<u64> {
    let (n, m, r) = (p.n as i64, p.m as i64, p.r as i64);
    (1..=r).find(|&d| binom(r, d) * n as u64 > binom(r, d + 1) * m as u64).map(|d| d as u64 + 2)
}

/// `log2(q) C(n,r)^(w (n-r))`.
pub fn ks_flp_cx(p: &EstimatorParams) -> f64 {
    lg(p.log2_q()) + p.omega * (p.n - p.r) as f64 * log2_big(&binom(p.n as i64, p.r as i64))
}

/// Admissible `c` for the Kipnis-Shamir variants: `ceil(m/(n-r)) ..= n-r`.
pub fn verbel_c_range(p: &EstimatorParams) -> core::ops::RangeInclusive<u64> {
    p.m.div_ceil(p.n - p.r)..=p.n - p.r
}

/// `(m C(cr + D_KS - 1, D_KS))^w`, minimized over `c`.
pub fn ks_verbel_cx(p: &EstimatorParams) -> core::result::Result<f64, Undetermined> {
    let range = verbel_c_range(p);
    if range.is_empty() {
        return Err(Undetermined::EmptyCRange);
    }
    let d = d_ks(p).ok_or(Undetermined::NoThreshold)? as i64;
    let best = range
        .map(|c| {
            let b = binom((c * p.r) as i64 + d - 1, d) * p.m;
            p.omega * log2_big(&b)
        })
        .fold(f64::INFINITY, f64::min);
    Ok(best)
}

/// `C(m + cr + D_mgd, D_mgd)^w`, minimized over `c`; any undetermined
/// `D_mgd` in the range makes the whole estimate undetermined.
pub fn ks_nakamura_cx(p: &EstimatorParams, degree_cap: u32) -> core::result::Result<f64, Undetermined> {
    let range = verbel_c_range(p);
    if range.is_empty() {
        return Err(Undetermined::EmptyCRange);
    }
    let mut best = f64::INFINITY;
    for c in range {
        let d = d_mgd(p, c, degree_cap)? as i64;
        let b = binom((p.m + c * p.r) as i64 + d, d);
        best = best.min(p.omega * log2_big(&b));
    }
    Ok(best)
}

/// `C(m + r, r)^w`.
pub fn minors_cx(p: &EstimatorParams) -> f64 {
    p.omega * log2_big(&binom((p.m + p.r) as i64, p.r as i64))
}

/// `R(b) = sum_{i=1..b} (-1)^(i+1) C(n, r+i) C(n+i-1, i) C(m+b-i-1, b-i)`.
pub(crate) fn spp_r(p: &EstimatorParams, b: i64) -> BigInt {
    let (n, m, r) = (p.n as i64, p.m as i64, p.r as i64);
    let mut acc = BigInt::default();
    for i in 1..=b {
        let t = binom_signed(n, r + i) * binom_signed(n + i - 1, i) * binom_signed(m + b - i - 1, b - i);
        if i % 2 == 1 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

/// Least `b <= cap` with `R(b) > C(m+b, b) C(n, r) - 1`.
pub fn d_spp(p: &EstimatorParams, cap: u32) -> core::result::Result<u64, Undetermined> {
    let cnr = binom_signed(p.n as i64, p.r as i64);
    (1..=cap as i64)
        .find(|&b| spp_r(p, b) > binom_signed((p.m as i64) + b, b) * &cnr - 1)
        .map(|b| b as u64)
        .ok_or(Undetermined::CapExhausted { cap })
}

/// `3 C(m + D_Spp, D_Spp)^2 C(n, r)^2 (r + 1) m`.
pub fn support_minors_cx(p: &EstimatorParams, cap: u32) -> core::result::Result<f64, Undetermined> {
    let d = d_spp(p, cap)? as i64;
    let v = 2.0 * log2_big(&binom(p.m as i64 + d, d)) + 2.0 * log2_big(&binom(p.n as i64, p.r as i64));
    Ok(lg(3.0) + v + lg((p.r + 1) as f64) + lg(p.m as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn all_ranks(n: u64, q: u64) -> Vec<f64> {
        (0..=n).map(|l| prob_rank(n, l, q).unwrap()).collect()
    }

    fn ep(q: u64, n: u64, m: u64, r: u64) -> EstimatorParams {
        EstimatorParams::new(q, n, m, r, 3.0).unwrap()
    }

    #[test]
    fn prob_rank_small() {
        assert_eq!(prob_rank(1, 1, 2).unwrap(), 0.5);
        assert_eq!(prob_rank(3, 0, 2).unwrap(), 1.0 / 512.0);
        assert!(prob_rank(2, 3, 2).is_err());
        for q in [2, 3] {
            for n in 1..=4 {
                let s: f64 = all_ranks(n, q).iter().sum();
                assert!((s - 1.0).abs() < 1e-12, "q={q} n={n} sum={s}");
            }
        }
    }

    #[test]
    fn closed_forms() {
        let (direct, rank) = exhaustive_cx(&ep(2, 3, 10, 1));
        assert!((direct - 12.0).abs() < 1e-12);
        assert!(rank >= 0.0);
        let p = ep(2, 4, 5, 2);
        assert!((bigm_cx(&p) - (3.0 + 9.0)).abs() < 1e-12);
        let p = ep(2, 4, 3, 2);
        assert_eq!(d_ks(&p), Some(3));
        assert!((minors_cx(&p) - 3.0 * libm::log2(10.0)).abs() < 1e-12);
        assert!(ks_flp_cx(&p).is_finite());
    }

    #[test]
    fn kernel_at_multiple() {
        let p = ep(2, 4, 8, 2);
        assert!((kernel_cx(&p) - (4.0 + 9.0)).abs() < 1e-12);
    }

    #[test]
    fn spp_first_term() {
        let p = ep(2, 6, 7, 2);
        assert_eq!(spp_r(&p, 1), BigInt::from(6) * binom_signed(6, 3));
    }
}
