//! Exact binomials and overflow-free base-2 logarithms of big integers.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

/// `C(n, k)`, zero when `k < 0`, `k > n` or `n < 0`.
pub fn binom(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` as a signed integer.
pub fn binom_signed(n: i64, k: i64) -> BigInt {
    BigInt::from_biguint(Sign::Plus, binom(n, k))
}

/// `log2(x)`, `-inf` for zero. Uses the top 64 bits, so the relative error is
/// at the level of `f64` rounding regardless of size.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return libm::log2(x.to_u64().unwrap() as f64);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    libm::log2(top as f64) + shift as f64
}

/// `num / den` as `f64`, computed from a 64-bit quotient so neither operand
/// needs to fit in a float.
pub fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "division by zero");
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 { (num << shift as u64) / den } else { (num >> (-shift) as u64) / den };
    let q = q.to_f64().unwrap();
    libm::ldexp(q, -shift as i32)
}

/// `log2(2^a + 2^b)` without leaving log space.
pub fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + libm::log2(1.0 + libm::exp2(lo - hi))
}
