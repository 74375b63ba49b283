//! `D_mgd`: the first total degree in `t_1..t_c` at which the series
//!
//! ```text
//! prod_{i=1..c} (1 - t_0 t_i)^n / ((1 - t_0)^m prod_{i=1..c} (1 - t_i)^r)
//! ```
//!
//! has a negative coefficient.
//!
//! The coefficient of `t_1^e_1 ... t_c^e_c` is a series in `t_0` equal to
//! `prod_i f_{e_i}(t_0) / (1 - t_0)^m` with
//! `f_e(t_0) = sum_k (-1)^k C(n,k) C(r-1+e-k, e-k) t_0^k`. It is symmetric in
//! the `e_i`, so only non-increasing tuples are visited, grouped by total
//! degree.
//!
//! Products are carried in double-double precision next to a bound on the
//! sum of absolute values of all terms. The sign is taken from the
//! double-double value when it clears the rounding bound. Otherwise the true
//! value is tiny next to the bound, so its residue modulo `2^512` is the value
//! itself; bounds too large even for that are redone in arbitrary precision.

use alloc::vec;
use alloc::vec::Vec;

use bnum::types::I512;
use num_bigint::{BigInt, Sign};
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use twofloat::TwoFloat;

use super::bigmath::binom_signed;
use super::{EstimatorParams, Undetermined};

/// Accumulated double-double error stays below `1e-28` of the bound for any
/// product reachable under a degree cap of a few hundred.
const SCREEN: f64 = 1e-25;
/// Below this bound an ambiguous value fits in 510 bits.
const WIDE_LIMIT: f64 = 1e160;

const WIDE_ZERO: I512 = I512::from_le_bytes([0; 64]);
const WIDE_ONE: I512 = {
    let mut b = [0u8; 64];
    b[0] = 1;
    I512::from_le_bytes(b)
};

fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

fn to_dd(x: &BigInt) -> TwoFloat {
    let hi = to_f64(x);
    match BigInt::from_f64(hi) {
        Some(h) => TwoFloat::new_add(hi, to_f64(&(x - h))),
        None => TwoFloat::from(hi),
    }
}

fn wrap512(x: &BigInt) -> I512 {
    let mut bytes = [0u8; 64];
    let le = x.magnitude().to_bytes_le();
    let k = le.len().min(64);
    bytes[..k].copy_from_slice(&le[..k]);
    let v = I512::from_le_bytes(bytes);
    if x.sign() == Sign::Minus {
        v.wrapping_neg()
    } else {
        v
    }
}

#[derive(Clone)]
struct Poly {
    approx: Vec<TwoFloat>,
    bound: Vec<f64>,
}

impl Poly {
    fn one() -> Self {
        Poly { approx: vec![TwoFloat::from(1.0)], bound: vec![1.0] }
    }

    fn mul(&self, other: &Poly, cap: usize) -> Poly {
        let len = (self.approx.len() + other.approx.len() - 1).min(cap + 1);
        let mut out = Poly { approx: vec![TwoFloat::from(0.0); len], bound: vec![0.0; len] };
        for i in 0..self.approx.len() {
            for j in 0..other.approx.len().min(len.saturating_sub(i)) {
                out.approx[i + j] += self.approx[i] * other.approx[j];
                out.bound[i + j] += self.bound[i] * other.bound[j];
            }
        }
        out
    }
}

struct Tables {
    cap: usize,
    exact: Vec<Vec<BigInt>>,
    polys: Vec<Poly>,
    wide: Vec<Vec<I512>>,
    series: Vec<BigInt>,
    series_dd: Vec<TwoFloat>,
    series_f: Vec<f64>,
    series_wide: Vec<I512>,
}

impl Tables {
    fn new(p: &EstimatorParams, cap: usize) -> Self {
        let (n, m, r) = (p.n as i64, p.m as i64, p.r as i64);
        let exact: Vec<Vec<BigInt>> = (0..=cap as i64)
            .map(|e| {
                (0..=e.min(n).min(cap as i64))
                    .map(|k| {
                        let v = binom_signed(n, k) * binom_signed(r - 1 + e - k, e - k);
                        if k % 2 == 1 {
                            -v
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        let polys = exact
            .iter()
            .map(|f| Poly { approx: f.iter().map(to_dd).collect(), bound: f.iter().map(|x| to_f64(x).abs()).collect() })
            .collect();
        let wide = exact.iter().map(|f| f.iter().map(wrap512).collect()).collect();
        let series: Vec<BigInt> = (0..=cap as i64).map(|j| binom_signed(m - 1 + j, j)).collect();
        Tables {
            cap,
            polys,
            wide,
            series_dd: series.iter().map(to_dd).collect(),
            series_f: series.iter().map(to_f64).collect(),
            series_wide: series.iter().map(wrap512).collect(),
            series,
            exact,
        }
    }

    fn wide_product(&self, tuple: &[usize]) -> Vec<I512> {
        let mut poly = vec![WIDE_ONE];
        for &e in tuple {
            let f = &self.wide[e];
            let len = (poly.len() + f.len() - 1).min(self.cap + 1);
            let mut next = vec![WIDE_ZERO; len];
            for (i, x) in poly.iter().enumerate() {
                for (j, y) in f.iter().enumerate().take(len.saturating_sub(i)) {
                    next[i + j] = next[i + j].wrapping_add(x.wrapping_mul(*y));
                }
            }
            poly = next;
        }
        poly
    }

    fn wide_coefficient(&self, wide: &[I512], e0: usize) -> I512 {
        (0..=e0.min(wide.len() - 1)).fold(WIDE_ZERO, |acc, j| acc.wrapping_add(wide[j].wrapping_mul(self.series_wide[e0 - j])))
    }

    fn exact_coefficient(&self, tuple: &[usize], e0: usize) -> BigInt {
        let mut poly = vec![BigInt::from(1)];
        for &e in tuple {
            let f = &self.exact[e];
            let len = (poly.len() + f.len() - 1).min(self.cap + 1);
            let mut next = vec![BigInt::zero(); len];
            for (i, x) in poly.iter().enumerate() {
                for (j, y) in f.iter().enumerate().take(len.saturating_sub(i)) {
                    next[i + j] += x * y;
                }
            }
            poly = next;
        }
        (0..=e0.min(poly.len() - 1)).map(|j| &poly[j] * &self.series[e0 - j]).sum()
    }

    fn negative_at(&self, tuple: &[usize], poly: &Poly, e0: usize, wide: &mut Option<Vec<I512>>) -> bool {
        let mut s = TwoFloat::from(0.0);
        let mut a = 0.0;
        for j in 0..=e0.min(poly.approx.len() - 1) {
            s += poly.approx[j] * self.series_dd[e0 - j];
            a += poly.bound[j] * self.series_f[e0 - j];
        }
        if a.is_finite() {
            let s = s.hi();
            if s < -SCREEN * a {
                return true;
            }
            if s > SCREEN * a || a == 0.0 {
                return false;
            }
            if a < WIDE_LIMIT {
                let w = wide.get_or_insert_with(|| self.wide_product(tuple));
                return self.wide_coefficient(w, e0).is_negative();
            }
        }
        self.exact_coefficient(tuple, e0).is_negative()
    }
}

struct Search<'a> {
    t: &'a Tables,
    parts: usize,
    tuple: Vec<usize>,
}

impl Search<'_> {
    /// Visits non-increasing completions of `tuple` adding `rest` to its sum.
    fn visit(&mut self, rest: usize, max_part: usize, poly: &Poly) -> bool {
        if rest == 0 {
            let mut wide = None;
            return (0..=self.t.cap).any(|e0| self.t.negative_at(&self.tuple, poly, e0, &mut wide));
        }
        let slots = self.parts - self.tuple.len();
        if slots == 0 {
            return false;
        }
        for e in (rest.div_ceil(slots)..=max_part.min(rest)).rev() {
            let next = poly.mul(&self.t.polys[e], self.t.cap);
            self.tuple.push(e);
            let hit = self.visit(rest - e, e, &next);
            self.tuple.pop();
            if hit {
                return true;
            }
        }
        false
    }
}

/// Least total degree `e_1 + ... + e_c <= degree_cap` with a negative
/// coefficient for some `e_0 <= degree_cap`.
pub fn d_mgd(p: &EstimatorParams, c: u64, degree_cap: u32) -> core::result::Result<u64, Undetermined> {
    let cap = degree_cap as usize;
    if c == 0 || cap == 0 {
        return Err(Undetermined::CapExhausted { cap: degree_cap });
    }
    let tables = Tables::new(p, cap);
    let mut search = Search { t: &tables, parts: c as usize, tuple: Vec::new() };
    let one = Poly::one();
    (0..=cap)
        .find(|&d| search.visit(d, d, &one))
        .map(|d| d as u64)
        .ok_or(Undetermined::CapExhausted { cap: degree_cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_matches_low_bits() {
        let y = BigInt::from(-9) * (BigInt::from(1) << 600u32) - 11;
        assert_eq!(wrap512(&y), WIDE_ZERO.wrapping_sub(wrap512(&BigInt::from(11))));
        assert!(wrap512(&BigInt::from(-3)).is_negative());
    }

    #[test]
    fn screens_agree_with_exact() {
        let p = EstimatorParams::new(2, 26, 150, 13, 3.0).unwrap();
        let t = Tables::new(&p, 30);
        let tuple = [9, 7, 5, 3, 2, 1, 1];
        let mut poly = Poly::one();
        for &e in &tuple {
            poly = poly.mul(&t.polys[e], t.cap);
        }
        let wide = t.wide_product(&tuple);
        for e0 in 0..=30 {
            let exact = t.exact_coefficient(&tuple, e0);
            assert_eq!(t.wide_coefficient(&wide, e0).is_negative(), exact.is_negative(), "e0={e0}");
            assert_eq!(t.negative_at(&tuple, &poly, e0, &mut None), exact.is_negative(), "e0={e0}");
        }
    }

    #[test]
    fn cap_is_monotone() {
        let p = EstimatorParams::new(2, 10, 20, 5, 3.0).unwrap();
        let d = d_mgd(&p, 4, 30).unwrap();
        assert_eq!(d_mgd(&p, 4, 40), Ok(d));
    }
}
