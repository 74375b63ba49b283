use crate::commit::{derive_beta, derive_stx, HashAlg, Randomness, Seed};
use crate::instance::PublicKey;
use crate::matrix::Matrix;
use crate::stream::ByteStream;

use super::{digest_matrix, digest_randomness, Challenge, Check, CommitmentBundle, Opening, RejectReason, Response, Verdict};
use super::{SLOT_HIGH, SLOT_LOW, SLOT_RAND};

/// Uniform challenge from the low two bits of one stream byte.
pub fn verifier_challenge<S: ByteStream + ?Sized>(rng: &mut S) -> Challenge {
    Challenge::new(rng.next_byte() & 3).expect("two bits")
}

/// Runs every checking equation for challenge `c` and reports the first
/// failure. Malformed responses are rejected, never panicked on.
pub fn verify_round(pk: &PublicKey, hash: HashAlg, y: &CommitmentBundle, c: Challenge, z: &Response) -> Verdict {
    if z.challenge() != c {
        return Verdict::Reject(RejectReason { side: None, check: Check::ChallengeMismatch });
    }
    for (b, opening) in z.openings().into_iter().enumerate() {
        if let Err(check) = check_side(pk, hash, y, b, opening) {
            return Verdict::Reject(RejectReason { side: Some(b as u8), check });
        }
    }
    Verdict::Accept
}

fn well_formed(pk: &PublicKey, m: &Matrix) -> bool {
    let p = pk.params();
    m.field() == p.field() && m.shape() == (p.n(), p.n())
}

fn expand_randomness(pk: &PublicKey, hash: HashAlg, seed_stx: &Seed) -> Result<Randomness, Check> {
    if seed_stx.is_empty() {
        return Err(Check::Malformed);
    }
    let rand = derive_stx(hash, seed_stx, pk.params().field(), pk.params().n());
    if !rand.s.is_invertible().unwrap_or(false) {
        return Err(Check::SInvertible);
    }
    if !rand.t.is_invertible().unwrap_or(false) {
        return Err(Check::TInvertible);
    }
    Ok(rand)
}

pub(super) fn check_side(
    pk: &PublicKey,
    hash: HashAlg,
    y: &CommitmentBundle,
    b: usize,
    opening: Opening<'_>,
) -> Result<(), Check> {
    let slots = &y.sides[b];
    let params = pk.params();
    match opening {
        Opening::Difference { low, high } => {
            if !well_formed(pk, low) || !well_formed(pk, high) {
                return Err(Check::Malformed);
            }
            if digest_matrix(hash, b, SLOT_LOW, low) != slots[SLOT_LOW] {
                return Err(Check::LowDigest);
            }
            if digest_matrix(hash, b, SLOT_HIGH, high) != slots[SLOT_HIGH] {
                return Err(Check::HighDigest);
            }
            let diff = high.sub(low).map_err(|_| Check::Malformed)?;
            if diff.rank() != params.r() {
                return Err(Check::RankDifference);
            }
        }
        Opening::Mask { seed_stx, seed_beta } => {
            if seed_beta.is_empty() {
                return Err(Check::Malformed);
            }
            let rand = expand_randomness(pk, hash, seed_stx)?;
            if digest_randomness(hash, b, &rand) != slots[SLOT_RAND] {
                return Err(Check::RandomnessDigest);
            }
            let gamma = derive_beta(hash, seed_beta, params.field(), params.m() - 1);
            let u = pk.span(&gamma).and_then(|span| rand.mask(&span)).map_err(|_| Check::Malformed)?;
            if digest_matrix(hash, b, SLOT_LOW, &u) != slots[SLOT_LOW] {
                return Err(Check::RecomputedLow);
            }
        }
        Opening::Shifted { seed_stx, mu } => {
            if mu.field() != params.field() || mu.len() != params.m() - 1 {
                return Err(Check::Malformed);
            }
            let rand = expand_randomness(pk, hash, seed_stx)?;
            if digest_randomness(hash, b, &rand) != slots[SLOT_RAND] {
                return Err(Check::RandomnessDigest);
            }
            let w = pk.combination(mu).and_then(|comb| rand.mask(&comb)).map_err(|_| Check::Malformed)?;
            if digest_matrix(hash, b, SLOT_HIGH, &w) != slots[SLOT_HIGH] {
                return Err(Check::RecomputedHigh);
            }
        }
    }
    Ok(())
}
