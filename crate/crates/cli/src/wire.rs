//! Length-prefixed frames.
//!
//! ```text
//! "MRID" | version 0x01 | frame type u8 | payload length u32 | payload
//! ```

use std::io::{self, Read, Write};

use minrank_core::protocol::SessionConfig;
use minrank_core::{Digest, HashAlg, Params};

use crate::codec::{decode_params, encode_params, hash_from_id, CodecError, CodecResult, Reader};

pub const MAGIC: [u8; 4] = *b"MRID";
pub const VERSION: u8 = 0x01;
pub const FRAME_HEADER_LEN: usize = 10;
/// Upper bound on a single payload; larger declared lengths are rejected
/// before anything is allocated.
pub const MAX_PAYLOAD: u32 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum FrameType {
    Commit = 0x01,
    Challenge = 0x02,
    Response = 0x03,
    Verdict = 0x04,
    SessionHeader = 0x05,
    Error = 0x06,
}

impl FrameType {
    pub fn from_byte(b: u8) -> CodecResult<Self> {
        Ok(match b {
            0x01 => FrameType::Commit,
            0x02 => FrameType::Challenge,
            0x03 => FrameType::Response,
            0x04 => FrameType::Verdict,
            0x05 => FrameType::SessionHeader,
            0x06 => FrameType::Error,
            other => return Err(CodecError::UnknownFrameType(other)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub kind: FrameType,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn new(kind: FrameType, payload: Vec<u8>) -> Self {
        Frame { kind, payload }
    }

    pub fn encode_into(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(self.kind as u8);
        out.extend_from_slice(&(self.payload.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.payload);
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(FRAME_HEADER_LEN + self.payload.len());
        self.encode_into(&mut out);
        out
    }

    /// Parses one frame from the front of `r`.
    pub fn read_from(r: &mut Reader) -> CodecResult<Self> {
        let (kind, len) = parse_header(r.take(FRAME_HEADER_LEN)?)?;
        Ok(Frame { kind, payload: r.take(len as usize)?.to_vec() })
    }

    /// Parses exactly one frame.
    pub fn decode(bytes: &[u8]) -> CodecResult<Self> {
        let mut r = Reader::new(bytes);
        let f = Frame::read_from(&mut r)?;
        r.finish()?;
        Ok(f)
    }
}

fn parse_header(h: &[u8]) -> CodecResult<(FrameType, u32)> {
    if h[..4] != MAGIC {
        return Err(CodecError::BadMagic);
    }
    if h[4] != VERSION {
        return Err(CodecError::BadVersion(h[4]));
    }
    let kind = FrameType::from_byte(h[5])?;
    let len = u32::from_le_bytes(h[6..10].try_into().unwrap());
    if len > MAX_PAYLOAD {
        return Err(CodecError::TooLarge(len));
    }
    Ok((kind, len))
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("transport closed")]
    Closed,
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

pub fn write_frame<W: Write + ?Sized>(w: &mut W, frame: &Frame) -> io::Result<()> {
    w.write_all(&frame.encode())?;
    w.flush()
}

/// Reads one frame. End of stream before the first header byte is
/// [`ReadError::Closed`]; end of stream inside a frame is truncation.
pub fn read_frame<R: Read + ?Sized>(r: &mut R) -> Result<Frame, ReadError> {
    let mut header = [0u8; FRAME_HEADER_LEN];
    let mut got = 0;
    while got < header.len() {
        match r.read(&mut header[got..]) {
            Ok(0) if got == 0 => return Err(ReadError::Closed),
            Ok(0) => return Err(CodecError::Truncated.into()),
            Ok(k) => got += k,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e.into()),
        }
    }
    let (kind, len) = parse_header(&header)?;
    let mut payload = vec![0u8; len as usize];
    r.read_exact(&mut payload).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => ReadError::Codec(CodecError::Truncated),
        _ => ReadError::Io(e),
    })?;
    Ok(Frame { kind, payload })
}

/// Payload of frame 0x05, sent by the verifier to open a session.
///
/// ```text
/// q n m r (u16 each) | rounds u32 | hash id u8 | seed length u16 | pk fingerprint[32]
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SessionHeader {
    pub params: Params,
    pub rounds: u32,
    pub hash: HashAlg,
    pub seed_len: u16,
    pub pk_fingerprint: Digest,
}

impl SessionHeader {
    pub const LEN: usize = 8 + 4 + 1 + 2 + 32;
    pub const MAX_SEED_LEN: u16 = 64;

    pub fn config(&self) -> SessionConfig {
        SessionConfig { hash: self.hash, seed_len: self.seed_len as usize }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::LEN);
        encode_params(&self.params, &mut out);
        out.extend_from_slice(&self.rounds.to_le_bytes());
        out.push(self.hash.id());
        out.extend_from_slice(&self.seed_len.to_le_bytes());
        out.extend_from_slice(self.pk_fingerprint.as_bytes());
        out
    }

    pub fn decode(bytes: &[u8]) -> CodecResult<Self> {
        let mut r = Reader::new(bytes);
        let params = decode_params(&mut r)?;
        let rounds = r.u32()?;
        let hash = hash_from_id(r.u8()?)?;
        let seed_len = r.u16()?;
        let mut fp = [0u8; 32];
        fp.copy_from_slice(r.take(32)?);
        r.finish()?;
        if rounds == 0 {
            return Err(CodecError::Invalid("session with zero rounds".into()));
        }
        if seed_len == 0 || seed_len > Self::MAX_SEED_LEN {
            return Err(CodecError::Invalid(format!("seed length {seed_len}")));
        }
        Ok(SessionHeader { params, rounds, hash, seed_len, pk_fingerprint: Digest(fp) })
    }
}

/// Payload of frame 0x06: an error code and a UTF-8 message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorPayload {
    pub code: u8,
    pub message: String,
}

impl ErrorPayload {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = vec![self.code];
        out.extend_from_slice(self.message.as_bytes());
        out
    }

    pub fn decode(bytes: &[u8]) -> CodecResult<Self> {
        let (&code, msg) = bytes.split_first().ok_or(CodecError::Truncated)?;
        let message = std::str::from_utf8(msg).map_err(|_| CodecError::Invalid("error message is not UTF-8".into()))?;
        Ok(ErrorPayload { code, message: message.to_owned() })
    }
}
