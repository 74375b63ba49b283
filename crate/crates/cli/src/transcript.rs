//! Recorded sessions.
//!
//! ```text
//! "MRTR" | version u8 | started u64 | finished u64 | frames
//! ```
//!
//! Timestamps are milliseconds since the Unix epoch. The frames are exactly
//! those exchanged on the wire: one session header, then commit, challenge,
//! response and verdict for every played round. Nothing follows a rejected
//! round.

use minrank_core::protocol::{verify_round, Challenge, RoundRecord, Transcript, Verdict};
use minrank_core::PublicKey;

use crate::codec::{
    decode_commitment, decode_response, decode_verdict, encode_commitment, encode_response, encode_verdict, pk_fingerprint,
    CodecError, CodecResult, Reader, ResponseShape,
};
use crate::wire::{Frame, FrameType, SessionHeader};

pub const TRANSCRIPT_MAGIC: [u8; 4] = *b"MRTR";
pub const TRANSCRIPT_VERSION: u8 = 0x01;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptFile {
    pub header: SessionHeader,
    pub started_ms: u64,
    pub finished_ms: u64,
    pub records: Vec<RoundRecord>,
}

impl TranscriptFile {
    pub fn shape(&self) -> ResponseShape {
        ResponseShape { params: self.header.params, seed_len: self.header.seed_len as usize }
    }

    /// Accepted iff every announced round was played and accepted.
    pub fn accepted(&self) -> bool {
        self.records.len() == self.header.rounds as usize && self.records.iter().all(|r| r.verdict.is_accept())
    }

    pub fn frames(&self) -> Vec<Frame> {
        let mut frames = vec![Frame::new(FrameType::SessionHeader, self.header.encode())];
        for rec in &self.records {
            frames.extend(round_frames(rec));
        }
        frames
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = TRANSCRIPT_MAGIC.to_vec();
        out.push(TRANSCRIPT_VERSION);
        out.extend_from_slice(&self.started_ms.to_le_bytes());
        out.extend_from_slice(&self.finished_ms.to_le_bytes());
        for f in self.frames() {
            f.encode_into(&mut out);
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> CodecResult<Self> {
        let mut r = Reader::new(bytes);
        if r.take(4)? != TRANSCRIPT_MAGIC {
            return Err(CodecError::BadMagic);
        }
        let version = r.u8()?;
        if version != TRANSCRIPT_VERSION {
            return Err(CodecError::BadVersion(version));
        }
        let started_ms = r.u64()?;
        let finished_ms = r.u64()?;
        let header = SessionHeader::decode(&expect(&mut r, FrameType::SessionHeader)?)?;
        let shape = ResponseShape { params: header.params, seed_len: header.seed_len as usize };
        let mut records = Vec::new();
        while r.remaining() > 0 {
            if records.len() == header.rounds as usize {
                return Err(CodecError::Invalid("more rounds than announced".into()));
            }
            if records.last().is_some_and(|rec: &RoundRecord| !rec.verdict.is_accept()) {
                return Err(CodecError::Invalid("round recorded after a reject".into()));
            }
            let commitment = decode_commitment(&expect(&mut r, FrameType::Commit)?)?;
            let challenge = decode_challenge(&expect(&mut r, FrameType::Challenge)?)?;
            let response = decode_response(&shape, &expect(&mut r, FrameType::Response)?)?;
            if response.challenge() != challenge {
                return Err(CodecError::Invalid("response answers a different challenge".into()));
            }
            let verdict = decode_verdict(&expect(&mut r, FrameType::Verdict)?)?;
            records.push(RoundRecord { commitment, challenge, response, verdict });
        }
        Ok(TranscriptFile { header, started_ms, finished_ms, records })
    }

    /// Re-verifies every round against `pk`, returning recorded and
    /// recomputed verdicts side by side.
    pub fn replay(&self, pk: &PublicKey) -> CodecResult<Vec<(Verdict, Verdict)>> {
        if pk.params() != &self.header.params || pk_fingerprint(pk, self.header.hash) != self.header.pk_fingerprint {
            return Err(CodecError::Invalid("transcript was recorded against a different public key".into()));
        }
        Ok(self
            .records
            .iter()
            .map(|rec| (rec.verdict, verify_round(pk, self.header.hash, &rec.commitment, rec.challenge, &rec.response)))
            .collect())
    }

    pub fn to_transcript(&self) -> Transcript {
        Transcript {
            params: self.header.params,
            config: self.header.config(),
            rounds: self.header.rounds as usize,
            records: self.records.clone(),
        }
    }
}

pub fn round_frames(rec: &RoundRecord) -> [Frame; 4] {
    let mut z = Vec::new();
    encode_response(&rec.response, &mut z);
    [
        Frame::new(FrameType::Commit, encode_commitment(&rec.commitment)),
        Frame::new(FrameType::Challenge, vec![rec.challenge.value()]),
        Frame::new(FrameType::Response, z),
        Frame::new(FrameType::Verdict, encode_verdict(&rec.verdict).to_vec()),
    ]
}

pub fn decode_challenge(payload: &[u8]) -> CodecResult<Challenge> {
    match payload {
        [c] => Challenge::new(*c).map_err(CodecError::from),
        [] => Err(CodecError::Truncated),
        _ => Err(CodecError::TrailingBytes(payload.len() - 1)),
    }
}

fn expect(r: &mut Reader, kind: FrameType) -> CodecResult<Vec<u8>> {
    let f = Frame::read_from(r)?;
    if f.kind != kind {
        return Err(CodecError::Invalid(format!("expected frame {kind:?}, found {:?}", f.kind)));
    }
    Ok(f.payload)
}
