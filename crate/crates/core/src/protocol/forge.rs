//! Secret-free transcripts: the per-challenge simulator and the
//! two-of-four cheating prover share one construction.
//!
//! Each side is built to survive the opening kinds demanded of it by the
//! prepared challenges. Any two kinds can be met without the secret:
//! `Mask + Shifted` leaves the rank unconstrained, and a difference pair is
//! arranged by offsetting the recomputable slot by a random rank-`r` matrix.
//! Slots no prepared challenge opens are commitments to uniform matrices.

use crate::coeffs::CoeffVector;
use crate::commit::{derive_side, Digest, Seed};
use crate::instance::PublicKey;
use crate::matrix::Matrix;
use crate::sample::{random_matrix, random_rank_r};
use crate::stream::ByteStream;
use crate::{Error, Result};

use super::{digest_matrix, digest_randomness, Challenge, CommitmentBundle, OpeningKind, Response, SessionConfig};
use super::{SLOT_HIGH, SLOT_LOW, SLOT_RAND};

struct ForgedSide {
    seed_stx: Seed,
    seed_beta: Seed,
    mu: CoeffVector,
    low: Matrix,
    high: Matrix,
}

/// A commitment fixed in advance together with the responses it can give.
#[derive(Clone, Debug)]
pub struct Forgery {
    commitment: CommitmentBundle,
    responses: [Option<Response>; 4],
}

impl Forgery {
    pub fn commitment(&self) -> &CommitmentBundle {
        &self.commitment
    }

    /// An accepting response for a prepared challenge, `None` otherwise.
    pub fn respond(&self, c: Challenge) -> Option<Response> {
        self.responses[c.value() as usize].clone()
    }

    pub fn prepared(&self) -> impl Iterator<Item = Challenge> + '_ {
        Challenge::ALL.into_iter().filter(|c| self.responses[c.value() as usize].is_some())
    }
}

/// Builds a commitment answerable for every challenge in `prepared` without
/// the secret key. Fails if some side would need all three opening kinds.
pub fn forge<S: ByteStream + ?Sized>(
    pk: &PublicKey,
    cfg: &SessionConfig,
    prepared: &[Challenge],
    rng: &mut S,
) -> Result<Forgery> {
    let mut wanted = [false; 4];
    for c in prepared {
        wanted[c.value() as usize] = true;
    }
    let needs = |b: usize, kind: OpeningKind| {
        Challenge::ALL.iter().any(|c| wanted[c.value() as usize] && c.openings()[b] == kind)
    };
    let params = pk.params();
    let (field, n) = (params.field(), params.n());

    let mut sides = alloc::vec::Vec::with_capacity(2);
    let mut digests = [[Digest([0; 32]); 3]; 2];
    for (b, slots) in digests.iter_mut().enumerate() {
        let (diff, mask, shifted) =
            (needs(b, OpeningKind::Difference), needs(b, OpeningKind::Mask), needs(b, OpeningKind::Shifted));
        if diff && mask && shifted {
            return Err(Error::Unforgeable(wanted));
        }
        let seed_stx = Seed::random(cfg.seed_len, rng);
        let seed_beta = Seed::random(cfg.seed_len, rng);
        let (rand, beta) = derive_side(cfg.hash, &seed_stx, &seed_beta, params);
        let mu = CoeffVector::random(field, params.m() - 1, rng);
        let honest_low = rand.mask(&pk.span(&beta)?)?;
        let shifted_high = rand.mask(&pk.combination(&mu)?)?;

        let (low, high) = match (diff, mask, shifted) {
            (true, false, true) => {
                let e = random_rank_r(rng, field, n, params.r())?;
                (shifted_high.sub(&e)?, shifted_high)
            }
            (true, _, false) => {
                let e = random_rank_r(rng, field, n, params.r())?;
                (honest_low.clone(), honest_low.add(&e)?)
            }
            (false, true, true) => (honest_low, shifted_high),
            (false, true, false) => (honest_low, random_matrix(rng, field, n, n)),
            (false, false, true) => (random_matrix(rng, field, n, n), shifted_high),
            _ => (random_matrix(rng, field, n, n), random_matrix(rng, field, n, n)),
        };
        slots[SLOT_LOW] = digest_matrix(cfg.hash, b, SLOT_LOW, &low);
        slots[SLOT_HIGH] = digest_matrix(cfg.hash, b, SLOT_HIGH, &high);
        slots[SLOT_RAND] = digest_randomness(cfg.hash, b, &rand);
        sides.push(ForgedSide { seed_stx, seed_beta, mu, low, high });
    }

    let (s0, s1) = (&sides[0], &sides[1]);
    let mut responses: [Option<Response>; 4] = Default::default();
    for c in Challenge::ALL {
        if !wanted[c.value() as usize] {
            continue;
        }
        responses[c.value() as usize] = Some(match c.value() {
            0 => Response::C0 {
                u00: s0.low.clone(),
                u01: s0.high.clone(),
                seed_stx1: s1.seed_stx.clone(),
                seed_beta1: s1.seed_beta.clone(),
            },
            1 => Response::C1 {
                seed_stx0: s0.seed_stx.clone(),
                seed_beta0: s0.seed_beta.clone(),
                seed_stx1: s1.seed_stx.clone(),
                mu1: s1.mu.clone(),
            },
            2 => Response::C2 {
                seed_stx0: s0.seed_stx.clone(),
                mu0: s0.mu.clone(),
                seed_stx1: s1.seed_stx.clone(),
                seed_beta1: s1.seed_beta.clone(),
            },
            _ => Response::C3 {
                seed_stx0: s0.seed_stx.clone(),
                seed_beta0: s0.seed_beta.clone(),
                u10: s1.low.clone(),
                u11: s1.high.clone(),
            },
        });
    }
    Ok(Forgery { commitment: CommitmentBundle { sides: digests }, responses })
}

/// Honest-verifier simulator: an accepting `(Y, Z)` for a challenge known in
/// advance, produced from the public key alone.
pub fn simulate_transcript<S: ByteStream + ?Sized>(
    pk: &PublicKey,
    cfg: &SessionConfig,
    c: Challenge,
    rng: &mut S,
) -> Result<(CommitmentBundle, Response)> {
    let forgery = forge(pk, cfg, &[c], rng)?;
    let z = forgery.respond(c).expect("prepared challenge");
    Ok((forgery.commitment, z))
}

/// Simulator against an arbitrary verifier: guess the challenge, build the
/// transcript for the guess, and rewind until the verifier asks for it.
/// Returns the transcript and the number of attempts used.
pub fn simulate_with_rewinding<S, V>(
    pk: &PublicKey,
    cfg: &SessionConfig,
    mut verifier: V,
    rng: &mut S,
    max_attempts: usize,
) -> Result<Option<(CommitmentBundle, Challenge, Response, usize)>>
where
    S: ByteStream + ?Sized,
    V: FnMut(&CommitmentBundle) -> Challenge,
{
    for attempt in 1..=max_attempts {
        let guess = super::verifier_challenge(rng);
        let (y, z) = simulate_transcript(pk, cfg, guess, rng)?;
        if verifier(&y) == guess {
            return Ok(Some((y, guess, z, attempt)));
        }
    }
    Ok(None)
}

/// A prover without the secret that can answer exactly the two challenges in
/// `pair` on one commitment.
pub fn cheating_prover<S: ByteStream + ?Sized>(
    pk: &PublicKey,
    cfg: &SessionConfig,
    pair: [Challenge; 2],
    rng: &mut S,
) -> Result<Forgery> {
    if pair[0] == pair[1] {
        return Err(Error::InvalidParams("cheating pair must hold two distinct challenges"));
    }
    forge(pk, cfg, &pair, rng)
}
