#![allow(dead_code)]

use std::io::{self, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::thread;

use minrank_core::protocol::{Response, SessionConfig};
use minrank_core::{keygen, random_matrix, CoeffVector, Field, HashAlg, KeyPair, Params, RngStream, Seed};
use minrank_id::endpoint::{prover_endpoint, EndpointError, ProverOptions, ProverOutcome};
use minrank_id::wire::{FrameType, FRAME_HEADER_LEN};
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

pub fn prover_opts() -> ProverOptions {
    ProverOptions { hash: HashAlg::Sha256, expected_rounds: None }
}

pub fn cfg() -> SessionConfig {
    SessionConfig::default()
}

/// A structurally valid response with random contents.
pub fn random_response(p: &Params, seed_len: usize, c: u8, r: &mut Rng) -> Response {
    let f = p.field();
    let n = p.n();
    let seed = |r: &mut Rng| {
        let mut b = vec![0u8; seed_len];
        minrank_core::ByteStream::fill(r, &mut b);
        Seed::new(b)
    };
    match c {
        0 => Response::C0 {
            u00: random_matrix(r, f, n, n),
            u01: random_matrix(r, f, n, n),
            seed_stx1: seed(r),
            seed_beta1: seed(r),
        },
        1 => Response::C1 {
            seed_stx0: seed(r),
            seed_beta0: seed(r),
            seed_stx1: seed(r),
            mu1: CoeffVector::random(f, p.m() - 1, r),
        },
        2 => Response::C2 {
            seed_stx0: seed(r),
            mu0: CoeffVector::random(f, p.m() - 1, r),
            seed_stx1: seed(r),
            seed_beta1: seed(r),
        },
        _ => Response::C3 {
            seed_stx0: seed(r),
            seed_beta0: seed(r),
            u10: random_matrix(r, f, n, n),
            u11: random_matrix(r, f, n, n),
        },
    }
}

/// Serves one prover session on an ephemeral local port.
pub fn spawn_prover(
    kp: KeyPair,
    opts: ProverOptions,
    seed: u64,
) -> (String, thread::JoinHandle<Result<ProverOutcome, EndpointError>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap().to_string();
    let h = thread::spawn(move || {
        let (mut s, _) = listener.accept().unwrap();
        prover_endpoint(&kp, &opts, &mut s, &mut rng(seed))
    });
    (addr, h)
}

pub fn connect(addr: &str) -> TcpStream {
    TcpStream::connect(addr).unwrap()
}

/// Wraps a transport and logs the type of every frame written through it.
/// Assumes each frame goes out in a single `write_all`, which is how
/// `write_frame` sends them.
pub struct Tap<T> {
    pub inner: T,
    pub sent: Vec<FrameType>,
}

impl<T> Tap<T> {
    pub fn new(inner: T) -> Self {
        Tap { inner, sent: Vec::new() }
    }
}

impl<T: Read> Read for Tap<T> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        self.inner.read(buf)
    }
}

impl<T: Write> Write for Tap<T> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        if buf.len() >= FRAME_HEADER_LEN && &buf[..4] == b"MRID" {
            self.sent.push(FrameType::from_byte(buf[5]).unwrap());
        }
        self.inner.write_all(buf)?;
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Flips one byte of the first response frame written through it.
pub struct TamperResponse<T> {
    pub inner: T,
    pub offset: usize,
    pub done: bool,
}

impl<T: Read> Read for TamperResponse<T> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        self.inner.read(buf)
    }
}

impl<T: Write> Write for TamperResponse<T> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        if !self.done && buf.len() > FRAME_HEADER_LEN && buf[5] == FrameType::Response as u8 {
            let mut copy = buf.to_vec();
            copy[FRAME_HEADER_LEN + self.offset] ^= 0x01;
            self.done = true;
            self.inner.write_all(&copy)?;
        } else {
            self.inner.write_all(buf)?;
        }
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}
