use alloc::vec::Vec;

use crate::field::Field;
use crate::stream::ByteStream;
use crate::{Error, Result};

/// A vector of field elements: the secret `alpha`, the masks `beta_b`, the
/// shifted masks `beta_b + alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffVector {
    field: Field,
    values: Vec<u16>,
}

impl CoeffVector {
    pub fn new(field: Field, values: Vec<u16>) -> Result<Self> {
        for &v in &values {
            field.check(v as u32)?;
        }
        Ok(CoeffVector { field, values })
    }

    pub fn zero(field: Field, len: usize) -> Self {
        CoeffVector { field, values: alloc::vec![0; len] }
    }

    pub fn unit(field: Field, len: usize, index: usize) -> Self {
        let mut v = Self::zero(field, len);
        v.values[index] = 1;
        v
    }

    pub fn random<S: ByteStream + ?Sized>(field: Field, len: usize, stream: &mut S) -> Self {
        let values = if field.is_binary() {
            let mut bits = crate::stream::BitReader::new(stream);
            (0..len).map(|_| bits.bit() as u16).collect()
        } else {
            (0..len).map(|_| field.sample(stream)).collect()
        };
        CoeffVector { field, values }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u16] {
        &self.values
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u16, u16) -> u16) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: self.field.q(), right: other.field.q() });
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: other.len() });
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect();
        Ok(CoeffVector { field: self.field, values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let f = self.field;
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let f = self.field;
        self.zip_with(other, |a, b| f.sub(a, b))
    }
}
