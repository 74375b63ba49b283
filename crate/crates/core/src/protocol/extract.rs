use crate::coeffs::CoeffVector;
use crate::commit::{derive_beta, derive_stx, HashAlg, Seed};
use crate::instance::{check_solution, PublicKey};
use crate::matrix::Matrix;
use crate::{Error, Result};

use super::{verify_round, CommitmentBundle, Opening, Response};

/// Recovers a MinRank solution from valid responses to three distinct
/// challenges on one commitment.
///
/// Any three challenges open one side `b` in all three ways: a difference
/// pair `(Z_{b,0}, Z_{b,1})`, a mask opening `(R_b, gamma)` and a shifted
/// opening `(R_b, mu)`. Binding forces `Z_{b,0} = T (sum gamma_i M_i) S + X`
/// and `Z_{b,1} = T (sum mu_i M_i - M_0) S + X`, so the difference has the
/// rank of `sum (mu_i - gamma_i) M_i - M_0` and `alpha = mu - gamma`.
pub fn extract_secret(pk: &PublicKey, hash: HashAlg, y: &CommitmentBundle, responses: &[Response]) -> Result<CoeffVector> {
    let mut by_challenge: [Option<&Response>; 4] = [None; 4];
    for z in responses {
        let c = z.challenge();
        if !verify_round(pk, hash, y, c, z).is_accept() {
            return Err(Error::InvalidResponse(c.value()));
        }
        by_challenge[c.value() as usize].get_or_insert(z);
    }
    let present = by_challenge.iter().flatten().count();
    if present < 3 {
        return Err(Error::TooFewResponses(present));
    }

    for b in 0..2 {
        let mut diff = None;
        let mut mask = None;
        let mut shifted = None;
        for z in by_challenge.iter().flatten() {
            match z.openings()[b] {
                Opening::Difference { low, high } => diff = diff.or(Some((low, high))),
                Opening::Mask { seed_stx, seed_beta } => mask = mask.or(Some((seed_stx, seed_beta))),
                Opening::Shifted { seed_stx, mu } => shifted = shifted.or(Some((seed_stx, mu))),
            }
        }
        if let (Some(diff), Some(mask), Some(shifted)) = (diff, mask, shifted) {
            return extract_side(pk, hash, diff, mask, shifted);
        }
    }
    unreachable!("three distinct challenges always open one side all three ways")
}

fn extract_side(
    pk: &PublicKey,
    hash: HashAlg,
    (low, high): (&Matrix, &Matrix),
    (stx_a, seed_beta): (&Seed, &Seed),
    (stx_b, mu): (&Seed, &CoeffVector),
) -> Result<CoeffVector> {
    let params = pk.params();
    let rand = derive_stx(hash, stx_a, params.field(), params.n());
    if derive_stx(hash, stx_b, params.field(), params.n()) != rand {
        return Err(Error::BindingViolation("R"));
    }
    let gamma = derive_beta(hash, seed_beta, params.field(), params.m() - 1);
    if rand.mask(&pk.span(&gamma)?)? != *low {
        return Err(Error::BindingViolation("U_low"));
    }
    if rand.mask(&pk.combination(mu)?)? != *high {
        return Err(Error::BindingViolation("U_high"));
    }
    let alpha = mu.sub(&gamma)?;
    if !check_solution(pk, &alpha)? {
        return Err(Error::ExtractionFailed);
    }
    Ok(alpha)
}
