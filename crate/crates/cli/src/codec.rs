//! Byte formats for keys, commitments, responses and verdicts.
//!
//! Every integer is little-endian. Matrix and coefficient bodies use the
//! canonical encoding from `minrank_core::encoding`, so the bytes on the
//! wire are the bytes that were hashed.
//!
//! Key file layout (`MRPK` / `MRSK`):
//!
//! ```text
//! magic[4] | version u8 | hash id u8 | q u16 | n u16 | m u16 | r u16 | body
//! ```
//!
//! The public body is the `m` matrices `M_0 .. M_{m-1}`; the secret body is
//! `alpha` (`m - 1` coefficients). A response is a one-byte challenge tag
//! followed by its fields in declaration order, seeds raw at the session
//! seed length.

use minrank_core::encoding::{coeffs_len, decode_coeffs, decode_matrix, encode_coeffs, encode_matrix, matrix_len};
use minrank_core::protocol::{Check, CommitmentBundle, RejectReason, Response, Verdict};
use minrank_core::{CoeffVector, Digest, Field, HashAlg, Matrix, Params, PublicKey, SecretKey, Seed};
use thiserror::Error;

pub const KEY_VERSION: u8 = 0x01;
pub const PK_MAGIC: [u8; 4] = *b"MRPK";
pub const SK_MAGIC: [u8; 4] = *b"MRSK";
pub const KEY_HEADER_LEN: usize = 4 + 1 + 1 + 8;
pub const COMMITMENT_LEN: usize = 6 * 32;
pub const VERDICT_LEN: usize = 3;

/// Decoding failures. Each variant has its own stable code, which is also
/// what an endpoint sends in an error frame.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodecError {
    #[error("input truncated")]
    Truncated,
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0}")]
    BadVersion(u8),
    #[error("unknown hash algorithm id {0}")]
    UnknownHash(u8),
    #[error("unknown frame type {0:#04x}")]
    UnknownFrameType(u8),
    #[error("declared payload of {0} bytes exceeds the limit")]
    TooLarge(u32),
    #[error("{0} unexpected trailing bytes")]
    TrailingBytes(usize),
    #[error("invariant violation: {0}")]
    Invalid(String),
}

impl CodecError {
    pub fn code(&self) -> u8 {
        match self {
            CodecError::Truncated => 0x10,
            CodecError::BadMagic => 0x11,
            CodecError::BadVersion(_) => 0x12,
            CodecError::UnknownHash(_) => 0x13,
            CodecError::UnknownFrameType(_) => 0x14,
            CodecError::TooLarge(_) => 0x15,
            CodecError::TrailingBytes(_) => 0x16,
            CodecError::Invalid(_) => 0x17,
        }
    }
}

impl From<minrank_core::Error> for CodecError {
    fn from(e: minrank_core::Error) -> Self {
        CodecError::Invalid(e.to_string())
    }
}

pub type CodecResult<T> = Result<T, CodecError>;

/// Cursor over a byte slice that reports running off the end as
/// [`CodecError::Truncated`].
pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    pub fn take(&mut self, n: usize) -> CodecResult<&'a [u8]> {
        let end = self.pos.checked_add(n).ok_or(CodecError::Truncated)?;
        let s = self.buf.get(self.pos..end).ok_or(CodecError::Truncated)?;
        self.pos = end;
        Ok(s)
    }

    pub fn u8(&mut self) -> CodecResult<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u16(&mut self) -> CodecResult<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    pub fn u32(&mut self) -> CodecResult<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> CodecResult<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn rest(&mut self) -> &'a [u8] {
        let s = &self.buf[self.pos..];
        self.pos = self.buf.len();
        s
    }

    pub fn finish(self) -> CodecResult<()> {
        match self.remaining() {
            0 => Ok(()),
            n => Err(CodecError::TrailingBytes(n)),
        }
    }
}

pub fn hash_from_id(id: u8) -> CodecResult<HashAlg> {
    HashAlg::from_id(id).ok_or(CodecError::UnknownHash(id))
}

pub fn encode_params(p: &Params, out: &mut Vec<u8>) {
    for v in [p.field().q() as usize, p.n(), p.m(), p.r()] {
        out.extend_from_slice(&(v as u16).to_le_bytes());
    }
}

pub fn decode_params(r: &mut Reader) -> CodecResult<Params> {
    let q = r.u16()?;
    let (n, m, rank) = (r.u16()?, r.u16()?, r.u16()?);
    let field = Field::new(q as u32)?;
    Ok(Params::new(field, n as usize, m as usize, rank as usize)?)
}

fn key_header(magic: [u8; 4], hash: HashAlg, p: &Params) -> Vec<u8> {
    let mut out = Vec::with_capacity(KEY_HEADER_LEN);
    out.extend_from_slice(&magic);
    out.push(KEY_VERSION);
    out.push(hash.id());
    encode_params(p, &mut out);
    out
}

fn read_key_header(r: &mut Reader, magic: [u8; 4]) -> CodecResult<(HashAlg, Params)> {
    if r.take(4)? != magic {
        return Err(CodecError::BadMagic);
    }
    let version = r.u8()?;
    if version != KEY_VERSION {
        return Err(CodecError::BadVersion(version));
    }
    let hash = hash_from_id(r.u8()?)?;
    Ok((hash, decode_params(r)?))
}

pub fn encode_pk(pk: &PublicKey, hash: HashAlg) -> Vec<u8> {
    let p = pk.params();
    let mut out = key_header(PK_MAGIC, hash, p);
    out.reserve(p.m() * matrix_len(p.field(), p.n(), p.n()));
    for m in pk.matrices() {
        encode_matrix(m, &mut out);
    }
    out
}

pub fn decode_pk(bytes: &[u8]) -> CodecResult<(HashAlg, PublicKey)> {
    let mut r = Reader::new(bytes);
    let (hash, p) = read_key_header(&mut r, PK_MAGIC)?;
    let len = matrix_len(p.field(), p.n(), p.n());
    let matrices = (0..p.m())
        .map(|_| Ok(decode_matrix(p.field(), p.n(), p.n(), r.take(len)?)?))
        .collect::<CodecResult<Vec<_>>>()?;
    r.finish()?;
    Ok((hash, PublicKey::new(p, matrices)?))
}

pub fn encode_sk(sk: &SecretKey, params: &Params, hash: HashAlg) -> Vec<u8> {
    let mut out = key_header(SK_MAGIC, hash, params);
    encode_coeffs(sk.alpha(), &mut out);
    out
}

pub fn decode_sk(bytes: &[u8]) -> CodecResult<(HashAlg, Params, SecretKey)> {
    let mut r = Reader::new(bytes);
    let (hash, p) = read_key_header(&mut r, SK_MAGIC)?;
    let alpha = decode_coeffs(p.field(), p.m() - 1, r.take(coeffs_len(p.field(), p.m() - 1))?)?;
    r.finish()?;
    Ok((hash, p, SecretKey::new(alpha)))
}

/// Digest identifying a public key in session headers.
pub fn pk_fingerprint(pk: &PublicKey, hash: HashAlg) -> Digest {
    hash.hash(&[b"pk", &encode_pk(pk, hash)])
}

pub fn encode_commitment(y: &CommitmentBundle) -> Vec<u8> {
    let mut out = Vec::with_capacity(COMMITMENT_LEN);
    for side in &y.sides {
        for d in side {
            out.extend_from_slice(d.as_bytes());
        }
    }
    out
}

pub fn decode_commitment(bytes: &[u8]) -> CodecResult<CommitmentBundle> {
    let mut r = Reader::new(bytes);
    let mut sides = [[Digest([0; 32]); 3]; 2];
    for side in sides.iter_mut() {
        for d in side.iter_mut() {
            d.0.copy_from_slice(r.take(32)?);
        }
    }
    r.finish()?;
    Ok(CommitmentBundle { sides })
}

/// Everything needed to size and decode a response.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResponseShape {
    pub params: Params,
    pub seed_len: usize,
}

impl ResponseShape {
    fn matrix_len(&self) -> usize {
        let p = &self.params;
        matrix_len(p.field(), p.n(), p.n())
    }

    fn mu_len(&self) -> usize {
        coeffs_len(self.params.field(), self.params.m() - 1)
    }

    /// Encoded length of the response to challenge `c`, tag included.
    pub fn response_len(&self, c: u8) -> usize {
        let body = match c {
            0 | 3 => 2 * self.matrix_len() + 2 * self.seed_len,
            _ => 3 * self.seed_len + self.mu_len(),
        };
        1 + body
    }
}

pub fn encode_response(z: &Response, out: &mut Vec<u8>) {
    out.push(z.challenge().value());
    match z {
        Response::C0 { u00, u01, seed_stx1, seed_beta1 } => {
            encode_matrix(u00, out);
            encode_matrix(u01, out);
            out.extend_from_slice(seed_stx1.as_bytes());
            out.extend_from_slice(seed_beta1.as_bytes());
        }
        Response::C1 { seed_stx0, seed_beta0, seed_stx1, mu1 } => {
            out.extend_from_slice(seed_stx0.as_bytes());
            out.extend_from_slice(seed_beta0.as_bytes());
            out.extend_from_slice(seed_stx1.as_bytes());
            encode_coeffs(mu1, out);
        }
        Response::C2 { seed_stx0, mu0, seed_stx1, seed_beta1 } => {
            out.extend_from_slice(seed_stx0.as_bytes());
            encode_coeffs(mu0, out);
            out.extend_from_slice(seed_stx1.as_bytes());
            out.extend_from_slice(seed_beta1.as_bytes());
        }
        Response::C3 { seed_stx0, seed_beta0, u10, u11 } => {
            out.extend_from_slice(seed_stx0.as_bytes());
            out.extend_from_slice(seed_beta0.as_bytes());
            encode_matrix(u10, out);
            encode_matrix(u11, out);
        }
    }
}

pub fn response_bytes(z: &Response) -> Vec<u8> {
    let mut out = Vec::new();
    encode_response(z, &mut out);
    out
}

pub fn decode_response(shape: &ResponseShape, bytes: &[u8]) -> CodecResult<Response> {
    let p = &shape.params;
    let mut r = Reader::new(bytes);
    let tag = r.u8()?;
    let seed = |r: &mut Reader| -> CodecResult<Seed> { Ok(Seed::new(r.take(shape.seed_len)?.to_vec())) };
    let matrix = |r: &mut Reader| -> CodecResult<Matrix> {
        Ok(decode_matrix(p.field(), p.n(), p.n(), r.take(shape.matrix_len())?)?)
    };
    let mu = |r: &mut Reader| -> CodecResult<CoeffVector> {
        Ok(decode_coeffs(p.field(), p.m() - 1, r.take(shape.mu_len())?)?)
    };
    let z = match tag {
        0 => Response::C0 { u00: matrix(&mut r)?, u01: matrix(&mut r)?, seed_stx1: seed(&mut r)?, seed_beta1: seed(&mut r)? },
        1 => Response::C1 { seed_stx0: seed(&mut r)?, seed_beta0: seed(&mut r)?, seed_stx1: seed(&mut r)?, mu1: mu(&mut r)? },
        2 => Response::C2 { seed_stx0: seed(&mut r)?, mu0: mu(&mut r)?, seed_stx1: seed(&mut r)?, seed_beta1: seed(&mut r)? },
        3 => Response::C3 { seed_stx0: seed(&mut r)?, seed_beta0: seed(&mut r)?, u10: matrix(&mut r)?, u11: matrix(&mut r)? },
        t => return Err(CodecError::Invalid(format!("response tag {t} is not a challenge"))),
    };
    r.finish()?;
    Ok(z)
}

/// `[status, side, check]`: accept is `[0x00, 0xff, 0x00]`, a reject is
/// `[0x01, side or 0xff, check code]`.
pub fn encode_verdict(v: &Verdict) -> [u8; VERDICT_LEN] {
    match v {
        Verdict::Accept => [0x00, 0xff, 0x00],
        Verdict::Reject(RejectReason { side, check }) => [0x01, side.unwrap_or(0xff), *check as u8],
    }
}

pub fn decode_verdict(bytes: &[u8]) -> CodecResult<Verdict> {
    let b: [u8; VERDICT_LEN] = match bytes.try_into() {
        Ok(b) => b,
        Err(_) if bytes.len() < VERDICT_LEN => return Err(CodecError::Truncated),
        Err(_) => return Err(CodecError::TrailingBytes(bytes.len() - VERDICT_LEN)),
    };
    match b {
        [0x00, 0xff, 0x00] => Ok(Verdict::Accept),
        [0x01, side, code] => {
            let side = match side {
                0 | 1 => Some(side),
                0xff => None,
                s => return Err(CodecError::Invalid(format!("verdict side {s}"))),
            };
            let check = Check::from_code(code).ok_or_else(|| CodecError::Invalid(format!("check code {code:#04x}")))?;
            Ok(Verdict::Reject(RejectReason { side, check }))
        }
        _ => Err(CodecError::Invalid("malformed verdict".into())),
    }
}
