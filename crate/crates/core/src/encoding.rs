//! Canonical byte encodings of matrices and coefficient vectors.
//!
//! These bytes are what the commitment hashes and what the wire format
//! carries. Over `F_2` each matrix row is packed LSB-first into
//! `ceil(cols / 8)` bytes and coefficient vectors are packed the same way;
//! for `q < 256` every element is one byte, otherwise two bytes
//! little-endian. Padding bits must be zero.

use alloc::vec::Vec;

use crate::coeffs::CoeffVector;
use crate::field::Field;
use crate::matrix::Matrix;
use crate::{Error, Result};

pub fn matrix_len(field: Field, rows: usize, cols: usize) -> usize {
    if field.is_binary() {
        rows * cols.div_ceil(8)
    } else {
        rows * cols * field.element_bytes()
    }
}

pub fn coeffs_len(field: Field, len: usize) -> usize {
    if field.is_binary() {
        len.div_ceil(8)
    } else {
        len * field.element_bytes()
    }
}

pub fn encode_matrix(m: &Matrix, out: &mut Vec<u8>) {
    let field = m.field();
    if field.is_binary() {
        let row_bytes = m.cols().div_ceil(8);
        for i in 0..m.rows() {
            let words = m.row_words(i);
            for b in 0..row_bytes {
                out.push((words[b / 8] >> (8 * (b % 8))) as u8);
            }
        }
    } else {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                push_elem(field, m.get(i, j), out);
            }
        }
    }
}

pub fn matrix_bytes(m: &Matrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(matrix_len(m.field(), m.rows(), m.cols()));
    encode_matrix(m, &mut out);
    out
}

pub fn decode_matrix(field: Field, rows: usize, cols: usize, bytes: &[u8]) -> Result<Matrix> {
    if bytes.len() != matrix_len(field, rows, cols) {
        return Err(Error::Encoding("matrix body has the wrong length"));
    }
    let mut m = Matrix::zero(field, rows, cols);
    if field.is_binary() {
        let row_bytes = cols.div_ceil(8);
        for i in 0..rows {
            let src = &bytes[i * row_bytes..(i + 1) * row_bytes];
            check_padding(src, cols)?;
            let dst = m.row_words_mut(i);
            for (b, &byte) in src.iter().enumerate() {
                dst[b / 8] |= (byte as u64) << (8 * (b % 8));
            }
        }
    } else {
        let w = field.element_bytes();
        for (k, chunk) in bytes.chunks_exact(w).enumerate() {
            m.set(k / cols, k % cols, read_elem(field, chunk)?);
        }
    }
    Ok(m)
}

pub fn encode_coeffs(v: &CoeffVector, out: &mut Vec<u8>) {
    let field = v.field();
    if field.is_binary() {
        let mut packed = alloc::vec![0u8; v.len().div_ceil(8)];
        for (i, &b) in v.values().iter().enumerate() {
            packed[i / 8] |= (b as u8) << (i % 8);
        }
        out.extend_from_slice(&packed);
    } else {
        for &x in v.values() {
            push_elem(field, x, out);
        }
    }
}

pub fn decode_coeffs(field: Field, len: usize, bytes: &[u8]) -> Result<CoeffVector> {
    if bytes.len() != coeffs_len(field, len) {
        return Err(Error::Encoding("coefficient vector has the wrong length"));
    }
    let values = if field.is_binary() {
        check_padding(bytes, len)?;
        (0..len).map(|i| ((bytes[i / 8] >> (i % 8)) & 1) as u16).collect()
    } else {
        bytes
            .chunks_exact(field.element_bytes())
            .map(|c| read_elem(field, c))
            .collect::<Result<Vec<_>>>()?
    };
    CoeffVector::new(field, values)
}

fn push_elem(field: Field, v: u16, out: &mut Vec<u8>) {
    if field.element_bytes() == 1 {
        out.push(v as u8);
    } else {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

fn read_elem(field: Field, chunk: &[u8]) -> Result<u16> {
    let v = if chunk.len() == 1 { chunk[0] as u32 } else { u16::from_le_bytes([chunk[0], chunk[1]]) as u32 };
    field.check(v)
}

fn check_padding(bytes: &[u8], bits: usize) -> Result<()> {
    if bits % 8 != 0 {
        let last = bytes[bytes.len() - 1];
        if last >> (bits % 8) != 0 {
            return Err(Error::Encoding("nonzero padding bits"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_identity_packs_lsb_first() {
        let i2 = Matrix::identity(Field::GF2, 2);
        assert_eq!(matrix_bytes(&i2), [0x01, 0x02]);
    }

    #[test]
    fn row_padding_is_per_row() {
        assert_eq!(matrix_len(Field::GF2, 26, 26), 26 * 4);
        assert_eq!(coeffs_len(Field::GF2, 208), 26);
        assert_eq!(matrix_len(Field::new(257).unwrap(), 2, 3), 12);
    }

    #[test]
    fn rejects_bad_padding_and_unreduced() {
        assert!(decode_matrix(Field::GF2, 1, 2, &[0x04]).is_err());
        assert!(decode_matrix(Field::new(3).unwrap(), 1, 1, &[3]).is_err());
        assert!(decode_coeffs(Field::GF2, 3, &[0x08]).is_err());
        assert!(decode_coeffs(Field::GF2, 3, &[0x07, 0]).is_err());
    }
}
