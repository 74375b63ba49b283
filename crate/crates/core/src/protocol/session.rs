use alloc::vec::Vec;

use crate::instance::{KeyPair, Params};
use crate::stream::ByteStream;
use crate::{Error, Result};

use super::{prover_commit, verifier_challenge, verify_round, Challenge, CommitmentBundle, Response, SessionConfig, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub commitment: CommitmentBundle,
    pub challenge: Challenge,
    pub response: Response,
    pub verdict: Verdict,
}

/// Ordered record of a session. The session stops at the first rejected
/// round, so a rejected transcript may hold fewer than `rounds` records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub params: Params,
    pub config: SessionConfig,
    pub rounds: usize,
    pub records: Vec<RoundRecord>,
}

impl Transcript {
    pub fn new(params: Params, config: SessionConfig, rounds: usize) -> Self {
        Transcript { params, config, rounds, records: Vec::new() }
    }

    /// Accepted iff all `rounds` rounds were played and every one accepted.
    pub fn accepted(&self) -> bool {
        self.records.len() == self.rounds && self.records.iter().all(|r| r.verdict.is_accept())
    }
}

/// `rounds` sequential commit / challenge / respond / verify rounds between an
/// honest prover and an honest verifier.
pub fn run_session<P, V>(
    kp: &KeyPair,
    cfg: &SessionConfig,
    rounds: usize,
    prover_rng: &mut P,
    verifier_rng: &mut V,
) -> Result<Transcript>
where
    P: ByteStream + ?Sized,
    V: ByteStream + ?Sized,
{
    if rounds == 0 {
        return Err(Error::ZeroRounds);
    }
    let mut transcript = Transcript::new(*kp.pk.params(), *cfg, rounds);
    for _ in 0..rounds {
        let (mut state, commitment) = prover_commit(kp, cfg, prover_rng)?;
        let challenge = verifier_challenge(verifier_rng);
        let response = state.respond(challenge)?;
        let verdict = verify_round(&kp.pk, cfg.hash, &commitment, challenge, &response);
        transcript.records.push(RoundRecord { commitment, challenge, response, verdict });
        if !verdict.is_accept() {
            break;
        }
    }
    Ok(transcript)
}
