//! Stream-driven samplers and linear combinations.

use crate::coeffs::CoeffVector;
use crate::field::Field;
use crate::matrix::Matrix;
use crate::stream::{BitReader, ByteStream};
use crate::{Error, Result};

/// Uniform `rows x cols` matrix. Over `F_2` each entry takes one bit of the
/// stream, LSB-first, row-major.
pub fn random_matrix<S: ByteStream + ?Sized>(stream: &mut S, field: Field, rows: usize, cols: usize) -> Matrix {
    if field.is_binary() {
        let mut bits = BitReader::new(stream);
        let mut m = Matrix::zero(field, rows, cols);
        for i in 0..rows {
            let row = m.row_words_mut(i);
            for j in 0..cols {
                row[j / 64] |= bits.bit() << (j % 64);
            }
        }
        m
    } else {
        Matrix::from_fn(field, rows, cols, |_, _| field.sample(stream))
    }
}

/// Uniform element of `GL_n(F_q)` by rejection.
pub fn random_invertible<S: ByteStream + ?Sized>(stream: &mut S, field: Field, n: usize) -> Matrix {
    loop {
        let m = random_matrix(stream, field, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// Uniform `n x n` matrix of rank exactly `r`, built as `T * D_r * S` with
/// `T, S` uniform invertible and `D_r = diag(1,..,1,0,..,0)`.
pub fn random_rank_r<S: ByteStream + ?Sized>(stream: &mut S, field: Field, n: usize, r: usize) -> Result<Matrix> {
    if r > n {
        return Err(Error::RankOutOfRange { r, n });
    }
    let t = random_invertible(stream, field, n);
    let s = random_invertible(stream, field, n);
    let d = Matrix::from_fn(field, n, n, |i, j| (i == j && i < r) as u16);
    t.mul(&d)?.mul(&s)
}

/// `sum_i coeffs[i] * mats[i]`, minus `subtrahend` when given.
pub fn linear_combination(coeffs: &CoeffVector, mats: &[Matrix], subtrahend: Option<&Matrix>) -> Result<Matrix> {
    if coeffs.len() != mats.len() {
        return Err(Error::LengthMismatch { expected: mats.len(), got: coeffs.len() });
    }
    let shape_of = mats.first().or(subtrahend).ok_or(Error::InvalidParams("empty linear combination"))?;
    let field = coeffs.field();
    if shape_of.field() != field {
        return Err(Error::FieldMismatch { left: field.q(), right: shape_of.field().q() });
    }
    let mut acc = Matrix::zero(field, shape_of.rows(), shape_of.cols());
    for (&c, m) in coeffs.values().iter().zip(mats) {
        acc.add_scaled_assign(m, c)?;
    }
    if let Some(sub) = subtrahend {
        acc.add_scaled_assign(sub, field.neg(1))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::RngStream;
    use alloc::vec::Vec;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn stream(seed: u64) -> RngStream<ChaCha8Rng> {
        RngStream(ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn sampling_is_deterministic() {
        let f3 = Field::new(3).unwrap();
        for field in [Field::GF2, f3] {
            assert_eq!(random_matrix(&mut stream(1), field, 5, 7), random_matrix(&mut stream(1), field, 5, 7));
            assert_eq!(random_invertible(&mut stream(2), field, 6), random_invertible(&mut stream(2), field, 6));
        }
    }

    #[test]
    fn entries_are_reduced() {
        let f3 = Field::new(3).unwrap();
        let m = random_matrix(&mut stream(3), f3, 20, 20);
        assert!(m.to_rows().iter().flatten().all(|&v| v < 3));
        let f257 = Field::new(257).unwrap();
        let m = random_matrix(&mut stream(3), f257, 20, 20);
        assert!(m.to_rows().iter().flatten().all(|&v| v < 257));
    }

    #[test]
    fn rank_r_edge_cases() {
        let mut s = stream(4);
        assert!(random_rank_r(&mut s, Field::GF2, 5, 0).unwrap().is_zero());
        assert_eq!(random_rank_r(&mut s, Field::GF2, 5, 5).unwrap().rank(), 5);
        assert_eq!(random_rank_r(&mut s, Field::GF2, 3, 4), Err(Error::RankOutOfRange { r: 4, n: 3 }));
    }

    #[test]
    fn linear_combination_cases() {
        let f = Field::new(5).unwrap();
        let mut s = stream(5);
        let mats: Vec<Matrix> = (0..3).map(|_| random_matrix(&mut s, f, 3, 3)).collect();
        let m0 = random_matrix(&mut s, f, 3, 3);
        let zero = CoeffVector::zero(f, 3);
        assert!(linear_combination(&zero, &mats, None).unwrap().is_zero());
        assert_eq!(linear_combination(&zero, &mats, Some(&m0)).unwrap(), m0.neg());
        assert_eq!(linear_combination(&CoeffVector::unit(f, 3, 1), &mats, None).unwrap(), mats[1]);
        assert!(matches!(
            linear_combination(&CoeffVector::zero(f, 2), &mats, None),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
