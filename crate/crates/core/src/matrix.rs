//! Dense matrices over `F_q`.
//!
//! Over `F_2` rows are bit-packed, 64 columns per word, and elimination runs
//! on whole words. Other fields store one `u16` per entry.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::Field;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Data {
    /// Row-major packed bits; bits past `cols` in each row are always zero.
    Bits { stride: usize, words: Vec<u64> },
    Elems(Vec<u16>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Data,
}

#[inline]
fn stride_for(cols: usize) -> usize {
    cols.div_ceil(64)
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        let data = if field.is_binary() {
            let stride = stride_for(cols);
            Data::Bits { stride, words: vec![0; stride * rows] }
        } else {
            Data::Elems(vec![0; rows * cols])
        };
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row slices; every entry must already be reduced.
    pub fn from_rows<R: AsRef<[u32]>>(field: Field, rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zero(field, nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(Error::DimensionMismatch { left: (nrows, ncols), right: (i, row.len()) });
            }
            for (j, &v) in row.iter().enumerate() {
                let v = field.check(v)?;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u16) -> Self {
        let mut m = Self::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u16 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        match &self.data {
            Data::Bits { stride, words } => ((words[i * stride + j / 64] >> (j % 64)) & 1) as u16,
            Data::Elems(e) => e[i * self.cols + j],
        }
    }

    /// Sets entry `(i, j)`. Panics if `v` is not reduced mod `q`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u16) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        assert!(v < self.field.q(), "entry {v} not reduced mod {}", self.field.q());
        let cols = self.cols;
        match &mut self.data {
            Data::Bits { stride, words } => {
                let w = &mut words[i * *stride + j / 64];
                let mask = 1u64 << (j % 64);
                if v == 1 {
                    *w |= mask;
                } else {
                    *w &= !mask;
                }
            }
            Data::Elems(e) => e[i * cols + j] = v,
        }
    }

    /// Packed words of row `i` (binary field only).
    pub(crate) fn row_words(&self, i: usize) -> &[u64] {
        match &self.data {
            Data::Bits { stride, words } => &words[i * stride..(i + 1) * stride],
            Data::Elems(_) => panic!("row_words on a non-binary matrix"),
        }
    }

    pub(crate) fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        match &mut self.data {
            Data::Bits { stride, words } => &mut words[i * *stride..(i + 1) * *stride],
            Data::Elems(_) => panic!("row_words_mut on a non-binary matrix"),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u16>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Bits { words, .. } => words.iter().all(|&w| w == 0),
            Data::Elems(e) => e.iter().all(|&v| v == 0),
        }
    }

    fn check_same(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: self.field.q(), right: other.field.q() });
        }
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch { left: self.shape(), right: other.shape() });
        }
        Ok(())
    }

    /// `self += c * other`.
    pub fn add_scaled_assign(&mut self, other: &Matrix, c: u16) -> Result<()> {
        self.check_same(other)?;
        if c == 0 {
            return Ok(());
        }
        let f = self.field;
        match (&mut self.data, &other.data) {
            (Data::Bits { words, .. }, Data::Bits { words: ow, .. }) => {
                for (a, b) in words.iter_mut().zip(ow) {
                    *a ^= *b;
                }
            }
            (Data::Elems(e), Data::Elems(oe)) => {
                for (a, &b) in e.iter_mut().zip(oe) {
                    *a = f.add(*a, f.mul(c, b));
                }
            }
            _ => unreachable!("storage follows the field"),
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        let mut out = self.clone();
        out.add_scaled_assign(other, 1)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        let mut out = self.clone();
        out.add_scaled_assign(other, self.field.neg(1))?;
        Ok(out)
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.field.neg(1))
    }

    pub fn scale(&self, c: u16) -> Matrix {
        let f = self.field;
        let mut out = self.clone();
        match &mut out.data {
            Data::Bits { words, .. } => {
                if c == 0 {
                    words.iter_mut().for_each(|w| *w = 0);
                }
            }
            Data::Elems(e) => e.iter_mut().for_each(|v| *v = f.mul(*v, c)),
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: self.field.q(), right: other.field.q() });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { left: self.shape(), right: other.shape() });
        }
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        match (&self.data, &other.data) {
            (Data::Bits { .. }, Data::Bits { .. }) => {
                for i in 0..self.rows {
                    let lhs = self.row_words(i).to_vec();
                    let dst = out.row_words_mut(i);
                    for (wi, &w) in lhs.iter().enumerate() {
                        let mut bits = w;
                        while bits != 0 {
                            let k = wi * 64 + bits.trailing_zeros() as usize;
                            for (d, s) in dst.iter_mut().zip(other.row_words(k)) {
                                *d ^= *s;
                            }
                            bits &= bits - 1;
                        }
                    }
                }
            }
            (Data::Elems(a), Data::Elems(b)) => {
                let q = self.field.q() as u64;
                let mut acc = vec![0u64; other.cols];
                for i in 0..self.rows {
                    acc.iter_mut().for_each(|x| *x = 0);
                    for k in 0..self.cols {
                        let aik = a[i * self.cols + k] as u64;
                        if aik == 0 {
                            continue;
                        }
                        let brow = &b[k * other.cols..(k + 1) * other.cols];
                        for (x, &bkj) in acc.iter_mut().zip(brow) {
                            *x += aik * bkj as u64;
                        }
                    }
                    for (j, x) in acc.iter().enumerate() {
                        out.set(i, j, (x % q) as u16);
                    }
                }
            }
            _ => unreachable!("storage follows the field"),
        }
        Ok(out)
    }

    /// Row rank by Gaussian elimination, pivoting on the first nonzero entry
    /// of each column, left to right.
    pub fn rank(&self) -> usize {
        match &self.data {
            Data::Bits { stride, words } => rank_bits(words.clone(), self.rows, self.cols, *stride),
            Data::Elems(e) => rank_elems(self.field, e.clone(), self.rows, self.cols),
        }
    }

    pub fn is_invertible(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        Ok(self.rank() == self.rows)
    }

    /// Gauss-Jordan inverse.
    pub fn invert(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let f = self.field;
        let mut a = self.to_rows();
        let mut inv = Matrix::identity(f, n).to_rows();
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r][col] != 0).ok_or(Error::Singular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p_inv = f.inv(a[col][col]);
            for j in 0..n {
                a[col][j] = f.mul(a[col][j], p_inv);
                inv[col][j] = f.mul(inv[col][j], p_inv);
            }
            for r in 0..n {
                if r == col || a[r][col] == 0 {
                    continue;
                }
                let factor = a[r][col];
                for j in 0..n {
                    a[r][j] = f.sub(a[r][j], f.mul(factor, a[col][j]));
                    inv[r][j] = f.sub(inv[r][j], f.mul(factor, inv[col][j]));
                }
            }
        }
        Ok(Matrix::from_fn(f, n, n, |i, j| inv[i][j]))
    }
}

fn rank_bits(mut words: Vec<u64>, rows: usize, cols: usize, stride: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let (w, mask) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows).find(|&r| words[r * stride + w] & mask != 0) else {
            continue;
        };
        if pivot != rank {
            for k in 0..stride {
                words.swap(pivot * stride + k, rank * stride + k);
            }
        }
        for r in rank + 1..rows {
            if words[r * stride + w] & mask != 0 {
                for k in w..stride {
                    words[r * stride + k] ^= words[rank * stride + k];
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_elems(f: Field, mut e: Vec<u16>, rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| e[r * cols + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for k in 0..cols {
                e.swap(pivot * cols + k, rank * cols + k);
            }
        }
        let p_inv = f.inv(e[rank * cols + col]);
        for r in rank + 1..rows {
            let lead = e[r * cols + col];
            if lead == 0 {
                continue;
            }
            let factor = f.mul(lead, p_inv);
            for k in col..cols {
                let v = f.mul(factor, e[rank * cols + k]);
                e[r * cols + k] = f.sub(e[r * cols + k], v);
            }
        }
        rank += 1;
    }
    rank
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<F_{}>{:?}", self.field.q(), self.to_rows())
    }
}
