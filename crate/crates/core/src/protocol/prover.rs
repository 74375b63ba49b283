use crate::coeffs::CoeffVector;
use crate::commit::{derive_side, Randomness, Seed};
use crate::instance::KeyPair;
use crate::matrix::Matrix;
use crate::stream::ByteStream;
use crate::{Error, Result};

use super::{digest_matrix, digest_randomness, Challenge, CommitmentBundle, Response, SessionConfig};
use super::{SLOT_HIGH, SLOT_LOW, SLOT_RAND};

#[derive(Clone, Debug)]
struct Side {
    seed_stx: Seed,
    seed_beta: Seed,
    rand: Randomness,
    beta: CoeffVector,
    low: Matrix,
    high: Matrix,
}

/// Prover state between the commitment and the response. It answers exactly
/// one challenge: two answers from one commitment can reveal the secret.
#[derive(Debug)]
pub struct ProverRound {
    sides: [Side; 2],
    alpha: CoeffVector,
    commitment: CommitmentBundle,
    consumed: bool,
}

/// Draws fresh seeds, expands `(S_b, T_b, X_b, beta_b)` for both sides and
/// commits to `U_{b,0} = T_b N_b S_b + X_b`, `U_{b,1} = T_b M S_b + U_{b,0}`
/// and `R_b`.
pub fn prover_commit<S: ByteStream + ?Sized>(
    kp: &KeyPair,
    cfg: &SessionConfig,
    rng: &mut S,
) -> Result<(ProverRound, CommitmentBundle)> {
    let pk = &kp.pk;
    let secret = pk.combination(kp.sk.alpha())?;
    let mut make_side = |b: usize| -> Result<(Side, [crate::commit::Digest; 3])> {
        let seed_stx = Seed::random(cfg.seed_len, rng);
        let seed_beta = Seed::random(cfg.seed_len, rng);
        let (rand, beta) = derive_side(cfg.hash, &seed_stx, &seed_beta, pk.params());
        let low = rand.mask(&pk.span(&beta)?)?;
        let shifted = rand.t.mul(&secret)?.mul(&rand.s)?;
        let high = shifted.add(&low)?;
        debug_assert_eq!(high.sub(&low)?, shifted);
        let mut digests = [crate::commit::Digest([0; 32]); 3];
        digests[SLOT_LOW] = digest_matrix(cfg.hash, b, SLOT_LOW, &low);
        digests[SLOT_HIGH] = digest_matrix(cfg.hash, b, SLOT_HIGH, &high);
        digests[SLOT_RAND] = digest_randomness(cfg.hash, b, &rand);
        Ok((Side { seed_stx, seed_beta, rand, beta, low, high }, digests))
    };
    let (side0, y0) = make_side(0)?;
    let (side1, y1) = make_side(1)?;
    let commitment = CommitmentBundle { sides: [y0, y1] };
    let round = ProverRound { sides: [side0, side1], alpha: kp.sk.alpha().clone(), commitment, consumed: false };
    Ok((round, commitment))
}

impl ProverRound {
    pub fn commitment(&self) -> &CommitmentBundle {
        &self.commitment
    }

    /// `(S_b, T_b, X_b)` held for side `b`.
    pub fn randomness(&self, b: usize) -> &Randomness {
        &self.sides[b].rand
    }

    /// `(U_{b,0}, U_{b,1})` held for side `b`.
    pub fn masked(&self, b: usize) -> (&Matrix, &Matrix) {
        (&self.sides[b].low, &self.sides[b].high)
    }

    pub fn is_consumed(&self) -> bool {
        self.consumed
    }

    /// Answers `c`; any later call fails with [`Error::StateConsumed`].
    pub fn respond(&mut self, c: Challenge) -> Result<Response> {
        if self.consumed {
            return Err(Error::StateConsumed);
        }
        self.consumed = true;
        let [s0, s1] = &self.sides;
        Ok(match c.value() {
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
                mu1: s1.beta.add(&self.alpha)?,
            },
            2 => Response::C2 {
                seed_stx0: s0.seed_stx.clone(),
                mu0: s0.beta.add(&self.alpha)?,
                seed_stx1: s1.seed_stx.clone(),
                seed_beta1: s1.seed_beta.clone(),
            },
            _ => Response::C3 {
                seed_stx0: s0.seed_stx.clone(),
                seed_beta0: s0.seed_beta.clone(),
                u10: s1.low.clone(),
                u11: s1.high.clone(),
            },
        })
    }
}
