//! The three-pass identification round and everything built on it.
//!
//! Each side `b` of a commitment carries three digests: of the masked span
//! `U_{b,0} = T_b N_b S_b + X_b`, of `U_{b,1} = T_b M S_b + U_{b,0}`, and of
//! the randomness `R_b = (S_b, T_b, X_b)`. A challenge opens each side in
//! one of three ways (see [`OpeningKind`]); any three challenges between them
//! open some side in all three ways, which is what the extractor exploits.

mod extract;
mod forge;
mod prover;
mod session;
mod verify;

pub use extract::extract_secret;
pub use forge::{cheating_prover, forge, simulate_transcript, simulate_with_rewinding, Forgery};
pub use prover::{prover_commit, ProverRound};
pub use session::{run_session, RoundRecord, Transcript};
pub use verify::{verifier_challenge, verify_round};

use crate::coeffs::CoeffVector;
use crate::commit::{Digest, HashAlg, Seed, TAG_R0, TAG_R1, TAG_U00, TAG_U01, TAG_U10, TAG_U11};
use crate::matrix::Matrix;
use crate::{Error, Result};

/// Per-session settings shared by prover and verifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SessionConfig {
    pub hash: HashAlg,
    /// Seed length in bytes, `ceil(l / 8)` at `l`-bit security.
    pub seed_len: usize,
}

impl SessionConfig {
    pub fn for_security(bits: u32) -> Self {
        SessionConfig { hash: HashAlg::Sha256, seed_len: (bits as usize).div_ceil(8).max(1) }
    }
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self::for_security(128)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Challenge(u8);

impl Challenge {
    pub const ALL: [Challenge; 4] = [Challenge(0), Challenge(1), Challenge(2), Challenge(3)];

    pub fn new(c: u8) -> Result<Self> {
        if c < 4 {
            Ok(Challenge(c))
        } else {
            Err(Error::InvalidChallenge(c))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// How each side is opened in answer to this challenge.
    pub fn openings(self) -> [OpeningKind; 2] {
        use OpeningKind::*;
        match self.0 {
            0 => [Difference, Mask],
            1 => [Mask, Shifted],
            2 => [Shifted, Mask],
            _ => [Mask, Difference],
        }
    }
}

/// The three ways one side of a commitment can be opened.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpeningKind {
    /// `U_{b,0}` and `U_{b,1}` in the clear; their difference must have rank `r`.
    Difference,
    /// Seeds for `R_b` and `beta_b`; the verifier recomputes `U_{b,0}`.
    Mask,
    /// Seed for `R_b` and `beta_b + alpha`; the verifier recomputes `U_{b,1}`.
    Shifted,
}

/// Borrowed view of one side of a response.
#[derive(Clone, Copy, Debug)]
pub enum Opening<'a> {
    Difference { low: &'a Matrix, high: &'a Matrix },
    Mask { seed_stx: &'a Seed, seed_beta: &'a Seed },
    Shifted { seed_stx: &'a Seed, mu: &'a CoeffVector },
}

impl Opening<'_> {
    pub fn kind(&self) -> OpeningKind {
        match self {
            Opening::Difference { .. } => OpeningKind::Difference,
            Opening::Mask { .. } => OpeningKind::Mask,
            Opening::Shifted { .. } => OpeningKind::Shifted,
        }
    }
}

/// First message: `Y = (Y_0, Y_1)`, each `(H(U_{b,0}), H(U_{b,1}), H(R_b))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CommitmentBundle {
    pub sides: [[Digest; 3]; 2],
}

pub(crate) const SLOT_LOW: usize = 0;
pub(crate) const SLOT_HIGH: usize = 1;
pub(crate) const SLOT_RAND: usize = 2;

pub(crate) const SLOT_TAGS: [[&[u8]; 3]; 2] = [[TAG_U00, TAG_U01, TAG_R0], [TAG_U10, TAG_U11, TAG_R1]];

/// Third message, one variant per challenge. Randomness and masks travel as
/// the seeds they were expanded from; matrices and shifted masks are explicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Response {
    C0 { u00: Matrix, u01: Matrix, seed_stx1: Seed, seed_beta1: Seed },
    C1 { seed_stx0: Seed, seed_beta0: Seed, seed_stx1: Seed, mu1: CoeffVector },
    C2 { seed_stx0: Seed, mu0: CoeffVector, seed_stx1: Seed, seed_beta1: Seed },
    C3 { seed_stx0: Seed, seed_beta0: Seed, u10: Matrix, u11: Matrix },
}

impl Response {
    pub fn challenge(&self) -> Challenge {
        match self {
            Response::C0 { .. } => Challenge(0),
            Response::C1 { .. } => Challenge(1),
            Response::C2 { .. } => Challenge(2),
            Response::C3 { .. } => Challenge(3),
        }
    }

    pub fn openings(&self) -> [Opening<'_>; 2] {
        match self {
            Response::C0 { u00, u01, seed_stx1, seed_beta1 } => [
                Opening::Difference { low: u00, high: u01 },
                Opening::Mask { seed_stx: seed_stx1, seed_beta: seed_beta1 },
            ],
            Response::C1 { seed_stx0, seed_beta0, seed_stx1, mu1 } => [
                Opening::Mask { seed_stx: seed_stx0, seed_beta: seed_beta0 },
                Opening::Shifted { seed_stx: seed_stx1, mu: mu1 },
            ],
            Response::C2 { seed_stx0, mu0, seed_stx1, seed_beta1 } => [
                Opening::Shifted { seed_stx: seed_stx0, mu: mu0 },
                Opening::Mask { seed_stx: seed_stx1, seed_beta: seed_beta1 },
            ],
            Response::C3 { seed_stx0, seed_beta0, u10, u11 } => [
                Opening::Mask { seed_stx: seed_stx0, seed_beta: seed_beta0 },
                Opening::Difference { low: u10, high: u11 },
            ],
        }
    }
}

/// One verifier check. Codes are stable and used on the wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Check {
    ChallengeMismatch = 0x01,
    Malformed = 0x02,
    /// `H(Z_{b,0}) = Y_{b,0}` for an opened difference pair.
    LowDigest = 0x03,
    /// `H(Z_{b,1}) = Y_{b,1}` for an opened difference pair.
    HighDigest = 0x04,
    /// `rank(Z_{b,1} - Z_{b,0}) = r`.
    RankDifference = 0x05,
    SInvertible = 0x06,
    TInvertible = 0x07,
    /// `H(R_b) = Y_{b,2}`.
    RandomnessDigest = 0x08,
    /// `H(T (sum gamma_i M_i) S + X) = Y_{b,0}`.
    RecomputedLow = 0x09,
    /// `H(T (sum mu_i M_i) S + X - T M_0 S) = Y_{b,1}`.
    RecomputedHigh = 0x0a,
}

impl Check {
    pub fn from_code(code: u8) -> Option<Self> {
        use Check::*;
        Some(match code {
            0x01 => ChallengeMismatch,
            0x02 => Malformed,
            0x03 => LowDigest,
            0x04 => HighDigest,
            0x05 => RankDifference,
            0x06 => SInvertible,
            0x07 => TInvertible,
            0x08 => RandomnessDigest,
            0x09 => RecomputedLow,
            0x0a => RecomputedHigh,
            _ => return None,
        })
    }
}

/// The first failing check; `side` is `None` for whole-response failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RejectReason {
    pub side: Option<u8>,
    pub check: Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

pub(crate) fn digest_matrix(hash: HashAlg, side: usize, slot: usize, m: &Matrix) -> Digest {
    crate::commit::commit(hash, SLOT_TAGS[side][slot], &crate::encoding::matrix_bytes(m))
}

pub(crate) fn digest_randomness(hash: HashAlg, side: usize, r: &crate::commit::Randomness) -> Digest {
    crate::commit::commit(hash, SLOT_TAGS[side][SLOT_RAND], &r.to_bytes())
}
