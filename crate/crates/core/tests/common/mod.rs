#![allow(dead_code)]

use minrank_core::{keygen, Field, KeyPair, Params, RngStream};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = RngStream<ChaCha8Rng>;

pub fn rng(seed: u64) -> Rng {
    RngStream(ChaCha8Rng::seed_from_u64(seed))
}

pub fn params(q: u32, n: usize, m: usize, r: usize) -> Params {
    Params::new(Field::new(q).unwrap(), n, m, r).unwrap()
}

pub fn keypair(q: u32, n: usize, m: usize, r: usize, seed: u64) -> KeyPair {
    keygen(params(q, n, m, r), &mut rng(seed)).unwrap()
}

/// Upper tail probability of a chi-square statistic.
pub fn chi_square_p(stat: f64, dof: usize) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    1.0 - ChiSquared::new(dof as f64).unwrap().cdf(stat)
}

/// Homogeneity test between two samples over the same categories.
/// Categories empty in both samples are dropped.
pub fn two_sample_chi_square(a: &[u64], b: &[u64]) -> (f64, usize) {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let mut stat = 0.0;
    let mut cells = 0;
    for (&x, &y) in a.iter().zip(b) {
        let tot = (x + y) as f64;
        if tot == 0.0 {
            continue;
        }
        cells += 1;
        let ea = tot * na / (na + nb);
        let eb = tot * nb / (na + nb);
        stat += (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb;
    }
    (stat, cells.max(1) - 1)
}

/// Determinant by cofactor expansion, reduced mod `q`.
pub fn det(a: &[Vec<i64>], q: i64) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut acc = 0;
    for j in 0..n {
        let minor: Vec<Vec<i64>> = a[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect()).collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        acc = (acc + sign * a[0][j] * det(&minor, q)).rem_euclid(q);
    }
    acc
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect()).collect()
}

/// Rank as the largest order of a nonzero minor.
pub fn rank_by_minors(a: &[Vec<u16>], q: u32) -> usize {
    let (rows, cols) = (a.len(), a[0].len());
    for k in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j] as i64).collect()).collect();
                if det(&sub, q as i64) != 0 {
                    return k;
                }
            }
        }
    }
    0
}
