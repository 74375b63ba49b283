//! Hash commitment with domain separation and the counter-mode seed
//! expander used to regenerate `(S, T, X)` and `beta` from short seeds.
//!
//! The commitment is the bare hash `H(tag || len(tag) || payload)` with no
//! appended randomness, so hiding rests on the hash behaving like a random
//! oracle on inputs longer than its output.

use alloc::vec::Vec;

use sha2::{Digest as _, Sha256};

use crate::coeffs::CoeffVector;
use crate::field::Field;
use crate::instance::Params;
use crate::matrix::Matrix;
use crate::sample::{random_invertible, random_matrix};
use crate::stream::ByteStream;
use crate::Result;

pub const TAG_U00: &[u8] = b"U00";
pub const TAG_U01: &[u8] = b"U01";
pub const TAG_R0: &[u8] = b"R0";
pub const TAG_U10: &[u8] = b"U10";
pub const TAG_U11: &[u8] = b"U11";
pub const TAG_R1: &[u8] = b"R1";
pub const TAG_S: &[u8] = b"S";
pub const TAG_T: &[u8] = b"T";
pub const TAG_X: &[u8] = b"X";
pub const TAG_BETA: &[u8] = b"B";

/// Hash function identity; the discriminant is the algorithm id byte written
/// into key and transcript headers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum HashAlg {
    #[default]
    Sha256 = 0x01,
}

impl HashAlg {
    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0x01 => Some(HashAlg::Sha256),
            _ => None,
        }
    }

    pub fn hash(self, parts: &[&[u8]]) -> Digest {
        match self {
            HashAlg::Sha256 => {
                let mut h = Sha256::new();
                for p in parts {
                    h.update(p);
                }
                let mut out = [0u8; 32];
                out.copy_from_slice(&h.finalize());
                Digest(out)
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(pub [u8; 32]);

impl Digest {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl core::fmt::Debug for Digest {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Digest(")?;
        for b in &self.0[..8] {
            write!(f, "{b:02x}")?;
        }
        write!(f, "..)")
    }
}

/// A PRG seed; `ceil(l / 8)` bytes at `l`-bit security.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Seed(Vec<u8>);

impl Seed {
    pub fn new(bytes: Vec<u8>) -> Self {
        Seed(bytes)
    }

    pub fn random<S: ByteStream + ?Sized>(len: usize, rng: &mut S) -> Self {
        let mut bytes = alloc::vec![0u8; len];
        rng.fill(&mut bytes);
        Seed(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `H(tag || len(tag) as u32 LE || payload)`.
pub fn commit(alg: HashAlg, tag: &[u8], payload: &[u8]) -> Digest {
    commit_parts(alg, tag, &[payload])
}

pub fn commit_parts(alg: HashAlg, tag: &[u8], payload: &[&[u8]]) -> Digest {
    let len = (tag.len() as u32).to_le_bytes();
    let mut parts: Vec<&[u8]> = Vec::with_capacity(payload.len() + 2);
    parts.push(tag);
    parts.push(&len);
    parts.extend_from_slice(payload);
    alg.hash(&parts)
}

/// Infinite stream whose block `i` is `H(tag || seed || i as u32 LE)`.
#[derive(Clone)]
pub struct Expander {
    alg: HashAlg,
    prefix: Vec<u8>,
    counter: u32,
    block: [u8; 32],
    pos: usize,
}

impl Expander {
    pub fn new(alg: HashAlg, seed: &[u8], tag: &[u8]) -> Self {
        let mut prefix = Vec::with_capacity(tag.len() + seed.len());
        prefix.extend_from_slice(tag);
        prefix.extend_from_slice(seed);
        Expander { alg, prefix, counter: 0, block: [0; 32], pos: 32 }
    }

    fn refill(&mut self) {
        let ctr = self.counter.to_le_bytes();
        self.block = self.alg.hash(&[&self.prefix, &ctr]).0;
        self.counter = self.counter.checked_add(1).expect("expander counter exhausted");
        self.pos = 0;
    }
}

impl ByteStream for Expander {
    fn fill(&mut self, dst: &mut [u8]) {
        let mut off = 0;
        while off < dst.len() {
            if self.pos == 32 {
                self.refill();
            }
            let take = (32 - self.pos).min(dst.len() - off);
            dst[off..off + take].copy_from_slice(&self.block[self.pos..self.pos + take]);
            self.pos += take;
            off += take;
        }
    }
}

pub fn expand(alg: HashAlg, seed: &Seed, tag: &[u8]) -> Expander {
    Expander::new(alg, seed.as_bytes(), tag)
}

/// The masking randomness `R = (S, T, X)` of one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Randomness {
    pub s: Matrix,
    pub t: Matrix,
    pub x: Matrix,
}

impl Randomness {
    /// Canonical bytes of `S || T || X`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        crate::encoding::encode_matrix(&self.s, &mut out);
        crate::encoding::encode_matrix(&self.t, &mut out);
        crate::encoding::encode_matrix(&self.x, &mut out);
        out
    }

    /// `T * A * S + X`.
    pub fn mask(&self, a: &Matrix) -> Result<Matrix> {
        self.t.mul(a)?.mul(&self.s)?.add(&self.x)
    }
}

/// `S, T` uniform invertible and `X` uniform, each from its own tagged stream.
pub fn derive_stx(alg: HashAlg, seed_stx: &Seed, field: Field, n: usize) -> Randomness {
    let s = random_invertible(&mut expand(alg, seed_stx, TAG_S), field, n);
    let t = random_invertible(&mut expand(alg, seed_stx, TAG_T), field, n);
    let x = random_matrix(&mut expand(alg, seed_stx, TAG_X), field, n, n);
    Randomness { s, t, x }
}

pub fn derive_beta(alg: HashAlg, seed_beta: &Seed, field: Field, len: usize) -> CoeffVector {
    CoeffVector::random(field, len, &mut expand(alg, seed_beta, TAG_BETA))
}

pub fn derive_side(alg: HashAlg, seed_stx: &Seed, seed_beta: &Seed, params: &Params) -> (Randomness, CoeffVector) {
    let r = derive_stx(alg, seed_stx, params.field(), params.n());
    let beta = derive_beta(alg, seed_beta, params.field(), params.m() - 1);
    (r, beta)
}
