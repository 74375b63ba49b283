//! Prover and verifier state machines over a duplex byte stream.
//!
//! The verifier opens with a session header (0x05). The prover checks it
//! against its own key and either aborts with an error frame (0x06) or
//! plays the announced rounds: commit (0x01), challenge (0x02), response
//! (0x03), verdict (0x04). Both sides stop after the first reject. Any
//! local failure other than a dead transport is reported to the peer with
//! an error frame before returning.

use std::io::{self, Read, Write};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use minrank_core::protocol::{prover_commit, verifier_challenge, verify_round, Challenge, RoundRecord, SessionConfig, Verdict};
use minrank_core::{ByteStream, HashAlg, KeyPair, Params, PublicKey};

use crate::codec::{
    decode_commitment, decode_response, decode_verdict, encode_commitment, encode_verdict, pk_fingerprint, response_bytes,
    CodecError, ResponseShape,
};
use crate::transcript::{decode_challenge, TranscriptFile};
use crate::wire::{read_frame, write_frame, ErrorPayload, Frame, FrameType, ReadError, SessionHeader};

pub const CODE_MISMATCH: u8 = 0x20;
pub const CODE_TIMEOUT: u8 = 0x21;
pub const CODE_UNEXPECTED_FRAME: u8 = 0x22;
pub const CODE_INTERNAL: u8 = 0x23;

#[derive(Debug, thiserror::Error)]
pub enum EndpointError {
    #[error("transport closed mid-session")]
    Closed,
    #[error("timed out waiting for the peer")]
    Timeout,
    #[error("transport error: {0}")]
    Io(io::Error),
    #[error("malformed frame: {0}")]
    Codec(#[from] CodecError),
    #[error("expected a {expected:?} frame, got {got:?}")]
    UnexpectedFrame { expected: FrameType, got: FrameType },
    #[error("session header mismatch: {0}")]
    Mismatch(String),
    #[error("peer aborted with code {code:#04x}: {message}")]
    Remote { code: u8, message: String },
    #[error(transparent)]
    Core(#[from] minrank_core::Error),
}

impl EndpointError {
    /// Code for the error frame sent to the peer, or `None` when nothing
    /// should be sent (the transport is gone or the peer already aborted).
    pub fn wire_code(&self) -> Option<u8> {
        match self {
            EndpointError::Closed | EndpointError::Io(_) | EndpointError::Remote { .. } => None,
            EndpointError::Timeout => Some(CODE_TIMEOUT),
            EndpointError::Codec(e) => Some(e.code()),
            EndpointError::UnexpectedFrame { .. } => Some(CODE_UNEXPECTED_FRAME),
            EndpointError::Mismatch(_) => Some(CODE_MISMATCH),
            EndpointError::Core(_) => Some(CODE_INTERNAL),
        }
    }
}

impl From<io::Error> for EndpointError {
    fn from(e: io::Error) -> Self {
        match e.kind() {
            io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut => EndpointError::Timeout,
            io::ErrorKind::BrokenPipe | io::ErrorKind::ConnectionReset | io::ErrorKind::UnexpectedEof => {
                EndpointError::Closed
            }
            _ => EndpointError::Io(e),
        }
    }
}

impl From<ReadError> for EndpointError {
    fn from(e: ReadError) -> Self {
        match e {
            ReadError::Closed => EndpointError::Closed,
            ReadError::Io(e) => e.into(),
            ReadError::Codec(e) => EndpointError::Codec(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProverOptions {
    /// Hash the key pair is used with; the header must announce the same.
    pub hash: HashAlg,
    /// Abort unless the verifier asks for exactly this many rounds.
    pub expected_rounds: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProverOutcome {
    pub rounds_played: u32,
    pub accepted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifierOptions {
    pub config: SessionConfig,
    pub rounds: u32,
    /// Ask this challenge every round instead of drawing one.
    pub forced_challenge: Option<Challenge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifierOutcome {
    pub accepted: bool,
    pub transcript: TranscriptFile,
}

pub fn prover_endpoint<T, S>(
    kp: &KeyPair,
    opts: &ProverOptions,
    transport: &mut T,
    rng: &mut S,
) -> Result<ProverOutcome, EndpointError>
where
    T: Read + Write + ?Sized,
    S: ByteStream + ?Sized,
{
    let result = run_prover(kp, opts, transport, rng);
    report(transport, result)
}

fn run_prover<T, S>(kp: &KeyPair, opts: &ProverOptions, t: &mut T, rng: &mut S) -> Result<ProverOutcome, EndpointError>
where
    T: Read + Write + ?Sized,
    S: ByteStream + ?Sized,
{
    let header = SessionHeader::decode(&expect(t, FrameType::SessionHeader)?)?;
    if &header.params != kp.pk.params() {
        return Err(EndpointError::Mismatch(format!(
            "verifier announced {}, key has {}",
            describe(&header.params),
            describe(kp.pk.params())
        )));
    }
    if header.hash != opts.hash {
        return Err(EndpointError::Mismatch(format!("hash id {} not supported by this key", header.hash.id())));
    }
    if header.pk_fingerprint != pk_fingerprint(&kp.pk, opts.hash) {
        return Err(EndpointError::Mismatch("public key fingerprint differs".into()));
    }
    if opts.expected_rounds.is_some_and(|r| r != header.rounds) {
        return Err(EndpointError::Mismatch(format!("verifier asked for {} rounds", header.rounds)));
    }
    let cfg = header.config();
    for i in 0..header.rounds {
        let (mut state, y) = prover_commit(kp, &cfg, rng)?;
        write_frame(t, &Frame::new(FrameType::Commit, encode_commitment(&y)))?;
        let c = decode_challenge(&expect(t, FrameType::Challenge)?)?;
        let z = state.respond(c)?;
        write_frame(t, &Frame::new(FrameType::Response, response_bytes(&z)))?;
        if !decode_verdict(&expect(t, FrameType::Verdict)?)?.is_accept() {
            return Ok(ProverOutcome { rounds_played: i + 1, accepted: false });
        }
    }
    Ok(ProverOutcome { rounds_played: header.rounds, accepted: true })
}

pub fn verifier_endpoint<T, S>(
    pk: &PublicKey,
    opts: &VerifierOptions,
    transport: &mut T,
    rng: &mut S,
) -> Result<VerifierOutcome, EndpointError>
where
    T: Read + Write + ?Sized,
    S: ByteStream + ?Sized,
{
    let result = run_verifier(pk, opts, transport, rng);
    report(transport, result)
}

fn run_verifier<T, S>(pk: &PublicKey, opts: &VerifierOptions, t: &mut T, rng: &mut S) -> Result<VerifierOutcome, EndpointError>
where
    T: Read + Write + ?Sized,
    S: ByteStream + ?Sized,
{
    if opts.rounds == 0 {
        return Err(minrank_core::Error::ZeroRounds.into());
    }
    let seed_len = u16::try_from(opts.config.seed_len)
        .ok()
        .filter(|&s| s >= 1 && s <= SessionHeader::MAX_SEED_LEN)
        .ok_or(minrank_core::Error::InvalidParams("seed length out of range"))?;
    let hash = opts.config.hash;
    let header = SessionHeader {
        params: *pk.params(),
        rounds: opts.rounds,
        hash,
        seed_len,
        pk_fingerprint: pk_fingerprint(pk, hash),
    };
    let shape = ResponseShape { params: header.params, seed_len: seed_len as usize };
    let started_ms = now_ms();
    write_frame(t, &Frame::new(FrameType::SessionHeader, header.encode()))?;
    let mut records = Vec::with_capacity(opts.rounds as usize);
    for _ in 0..opts.rounds {
        let commitment = decode_commitment(&expect(t, FrameType::Commit)?)?;
        let challenge = opts.forced_challenge.unwrap_or_else(|| verifier_challenge(rng));
        write_frame(t, &Frame::new(FrameType::Challenge, vec![challenge.value()]))?;
        let response = decode_response(&shape, &expect(t, FrameType::Response)?)?;
        let verdict = verify_round(pk, hash, &commitment, challenge, &response);
        write_frame(t, &Frame::new(FrameType::Verdict, encode_verdict(&verdict).to_vec()))?;
        records.push(RoundRecord { commitment, challenge, response, verdict });
        if verdict != Verdict::Accept {
            break;
        }
    }
    let transcript = TranscriptFile { header, started_ms, finished_ms: now_ms(), records };
    Ok(VerifierOutcome { accepted: transcript.accepted(), transcript })
}

fn expect<T: Read + ?Sized>(t: &mut T, kind: FrameType) -> Result<Vec<u8>, EndpointError> {
    let f = read_frame(t)?;
    if f.kind == FrameType::Error {
        let e = ErrorPayload::decode(&f.payload)?;
        return Err(EndpointError::Remote { code: e.code, message: e.message });
    }
    if f.kind != kind {
        return Err(EndpointError::UnexpectedFrame { expected: kind, got: f.kind });
    }
    Ok(f.payload)
}

fn report<T: Write + ?Sized, O>(t: &mut T, result: Result<O, EndpointError>) -> Result<O, EndpointError> {
    if let Err(e) = &result {
        if let Some(code) = e.wire_code() {
            let payload = ErrorPayload { code, message: e.to_string() };
            let _ = write_frame(t, &Frame::new(FrameType::Error, payload.encode()));
        }
    }
    result
}

/// `q=.. n=.. m=.. r=..`
pub fn describe(p: &Params) -> String {
    format!("q={} n={} m={} r={}", p.field().q(), p.n(), p.m(), p.r())
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

/// Joins a reader and a writer into one duplex transport.
pub struct Duplex<R, W> {
    pub reader: R,
    pub writer: W,
}

impl<R: Read, W> Read for Duplex<R, W> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        self.reader.read(buf)
    }
}

impl<R, W: Write> Write for Duplex<R, W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.writer.write(buf)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.writer.flush()
    }
}

/// Gives a read deadline to streams that have none of their own (pipes,
/// stdin) by reading on a helper thread. A read that waits longer than the
/// timeout fails with [`io::ErrorKind::TimedOut`].
pub struct DeadlineReader {
    rx: Receiver<io::Result<Vec<u8>>>,
    buf: Vec<u8>,
    pos: usize,
    timeout: Option<Duration>,
}

impl DeadlineReader {
    pub fn spawn<R: Read + Send + 'static>(mut inner: R, timeout: Option<Duration>) -> Self {
        let (tx, rx) = mpsc::sync_channel(4);
        thread::spawn(move || {
            let mut chunk = vec![0u8; 1 << 16];
            loop {
                match inner.read(&mut chunk) {
                    Ok(0) => break,
                    Ok(k) => {
                        if tx.send(Ok(chunk[..k].to_vec())).is_err() {
                            break;
                        }
                    }
                    Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
                    Err(e) => {
                        let _ = tx.send(Err(e));
                        break;
                    }
                }
            }
        });
        DeadlineReader { rx, buf: Vec::new(), pos: 0, timeout }
    }
}

impl Read for DeadlineReader {
    fn read(&mut self, out: &mut [u8]) -> io::Result<usize> {
        if self.pos == self.buf.len() {
            let next = match self.timeout {
                Some(t) => self.rx.recv_timeout(t),
                None => self.rx.recv().map_err(|_| RecvTimeoutError::Disconnected),
            };
            match next {
                Ok(Ok(chunk)) => {
                    self.buf = chunk;
                    self.pos = 0;
                }
                Ok(Err(e)) => return Err(e),
                Err(RecvTimeoutError::Timeout) => return Err(io::ErrorKind::TimedOut.into()),
                Err(RecvTimeoutError::Disconnected) => return Ok(0),
            }
        }
        let k = out.len().min(self.buf.len() - self.pos);
        out[..k].copy_from_slice(&self.buf[self.pos..self.pos + k]);
        self.pos += k;
        Ok(k)
    }
}
