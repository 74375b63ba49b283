//! MinRank instances: planted key generation, lossy generation, the
//! exhaustive search oracle and the decisional distinguishing game.

use alloc::vec::Vec;

use crate::coeffs::CoeffVector;
use crate::commit::Expander;
use crate::field::Field;
use crate::matrix::Matrix;
use crate::sample::{linear_combination, random_matrix, random_rank_r};
use crate::stream::ByteStream;
use crate::{Error, Result};

/// Default limit on `q^(m-1)` for [`brute_force_solve`], as a power of two.
pub const BRUTE_FORCE_CAP_LOG2: u32 = 24;

/// `(F_q, n, m, r)`: `m` matrices of size `n x n`, target rank `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    field: Field,
    n: usize,
    m: usize,
    r: usize,
}

impl Params {
    /// Requires `1 <= r < n` and `m >= 2`.
    pub fn new(field: Field, n: usize, m: usize, r: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParams("m must be at least 2"));
        }
        Self::relaxed(field, n, m, r)
    }

    fn relaxed(field: Field, n: usize, m: usize, r: usize) -> Result<Self> {
        if r == 0 || r >= n {
            return Err(Error::InvalidParams("rank must satisfy 1 <= r < n"));
        }
        if m == 0 {
            return Err(Error::InvalidParams("an instance needs at least M_0"));
        }
        if n > u16::MAX as usize || m > u16::MAX as usize {
            return Err(Error::InvalidParams("dimensions must fit in 16 bits"));
        }
        Ok(Params { field, n, m, r })
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn r(&self) -> usize {
        self.r
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    params: Params,
    matrices: Vec<Matrix>,
}

impl PublicKey {
    /// Wraps `[M_0, .., M_{m-1}]`. A lone `M_0` (`m = 1`, empty coefficient
    /// vector) is accepted here so the search oracle can handle it, even
    /// though [`Params::new`] requires `m >= 2`.
    pub fn from_matrices(field: Field, r: usize, matrices: Vec<Matrix>) -> Result<Self> {
        let n = matrices.first().map_or(0, |m| m.rows());
        let params = Params::relaxed(field, n, matrices.len(), r)?;
        Self::new(params, matrices)
    }

    pub fn new(params: Params, matrices: Vec<Matrix>) -> Result<Self> {
        if matrices.len() != params.m {
            return Err(Error::LengthMismatch { expected: params.m, got: matrices.len() });
        }
        for mat in &matrices {
            if mat.field() != params.field {
                return Err(Error::FieldMismatch { left: params.field.q(), right: mat.field().q() });
            }
            if mat.shape() != (params.n, params.n) {
                return Err(Error::DimensionMismatch { left: (params.n, params.n), right: mat.shape() });
            }
        }
        Ok(PublicKey { params, matrices })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn m0(&self) -> &Matrix {
        &self.matrices[0]
    }

    /// `M_1, .., M_{m-1}`.
    pub fn basis(&self) -> &[Matrix] {
        &self.matrices[1..]
    }

    /// `sum_i alpha_i M_i - M_0`.
    pub fn combination(&self, alpha: &CoeffVector) -> Result<Matrix> {
        linear_combination(alpha, self.basis(), Some(self.m0()))
    }

    /// `sum_i gamma_i M_i`.
    pub fn span(&self, gamma: &CoeffVector) -> Result<Matrix> {
        if self.params.m == 1 {
            return Ok(Matrix::zero(self.params.field, self.params.n, self.params.n));
        }
        linear_combination(gamma, self.basis(), None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    alpha: CoeffVector,
}

impl SecretKey {
    pub fn new(alpha: CoeffVector) -> Self {
        SecretKey { alpha }
    }

    pub fn alpha(&self) -> &CoeffVector {
        &self.alpha
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyPair {
    pub pk: PublicKey,
    pub sk: SecretKey,
}

impl KeyPair {
    /// Pairs keys after checking the rank condition.
    pub fn new(pk: PublicKey, sk: SecretKey) -> Result<Self> {
        if !check_solution(&pk, sk.alpha())? {
            return Err(Error::InvalidParams("secret key does not solve the public instance"));
        }
        Ok(KeyPair { pk, sk })
    }
}

/// Plants a solution: `M_1..M_{m-1}` and `alpha` uniform, `E` uniform of rank
/// exactly `r`, and `M_0 = sum alpha_i M_i - E`.
pub fn keygen<S: ByteStream + ?Sized>(params: Params, rng: &mut S) -> Result<KeyPair> {
    if params.m < 2 {
        return Err(Error::InvalidParams("m must be at least 2"));
    }
    let Params { field, n, m, r } = params;
    let basis: Vec<Matrix> = (1..m).map(|_| random_matrix(rng, field, n, n)).collect();
    let alpha = CoeffVector::random(field, m - 1, rng);
    let e = random_rank_r(rng, field, n, r)?;
    let m0 = linear_combination(&alpha, &basis, Some(&e))?;
    let mut matrices = Vec::with_capacity(m);
    matrices.push(m0);
    matrices.extend(basis);
    Ok(KeyPair { pk: PublicKey { params, matrices }, sk: SecretKey { alpha } })
}

/// `m` independent uniform matrices; no planted solution.
pub fn lossy_gen<S: ByteStream + ?Sized>(params: Params, rng: &mut S) -> PublicKey {
    let Params { field, n, m, .. } = params;
    let matrices = (0..m).map(|_| random_matrix(rng, field, n, n)).collect();
    PublicKey { params, matrices }
}

pub fn check_solution(pk: &PublicKey, alpha: &CoeffVector) -> Result<bool> {
    let expected = pk.params.m - 1;
    if alpha.len() != expected {
        return Err(Error::LengthMismatch { expected, got: alpha.len() });
    }
    if expected == 0 {
        return Ok(pk.m0().neg().rank() == pk.params.r);
    }
    Ok(pk.combination(alpha)?.rank() == pk.params.r)
}

/// Every `alpha` with `rank(sum alpha_i M_i - M_0) = r`, in lexicographic
/// order (alpha_1 most significant), with the default enumeration cap.
pub fn brute_force_solve(pk: &PublicKey) -> Result<Vec<CoeffVector>> {
    brute_force_solve_capped(pk, BRUTE_FORCE_CAP_LOG2)
}

pub fn brute_force_solve_capped(pk: &PublicKey, cap_log2: u32) -> Result<Vec<CoeffVector>> {
    let Params { field, m, r, .. } = pk.params;
    let q = field.q();
    let len = m - 1;
    let size_log2 = len as f64 * libm::log2(q as f64);
    if size_log2 > cap_log2 as f64 {
        return Err(Error::CapExceeded { size_log2, cap_log2 });
    }
    let mut digits = alloc::vec![0u16; len];
    let mut acc = pk.m0().neg();
    let mut found = Vec::new();
    loop {
        if acc.rank() == r {
            found.push(CoeffVector::new(field, digits.clone())?);
        }
        // odometer step; every digit change adds one copy of M_k (q * M_k = 0)
        let mut k = len;
        loop {
            if k == 0 {
                return Ok(found);
            }
            k -= 1;
            acc.add_scaled_assign(&pk.matrices[k + 1], 1)?;
            digits[k] = (digits[k] + 1) % q;
            if digits[k] != 0 {
                break;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleChoice {
    /// Planted instances from [`keygen`].
    IGen,
    /// Uniform instances from [`lossy_gen`].
    LossyGen,
}

/// Runs the chosen generator `trials` times and returns the fraction of keys
/// on which `distinguisher` outputs 1. Each trial draws its key from its own
/// expander stream seeded from `rng`, so the outcome does not depend on the
/// order trials are evaluated in.
pub fn decisional_experiment<D, S>(
    mut distinguisher: D,
    params: Params,
    oracle: OracleChoice,
    trials: usize,
    rng: &mut S,
) -> Result<f64>
where
    D: FnMut(&PublicKey) -> bool,
    S: ByteStream + ?Sized,
{
    if trials == 0 {
        return Ok(0.0);
    }
    let mut hits = 0usize;
    for _ in 0..trials {
        let mut seed = [0u8; 32];
        rng.fill(&mut seed);
        let mut stream = Expander::new(crate::HashAlg::Sha256, &seed, b"trial");
        let pk = match oracle {
            OracleChoice::IGen => keygen(params, &mut stream)?.pk,
            OracleChoice::LossyGen => lossy_gen(params, &mut stream),
        };
        if distinguisher(&pk) {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::RngStream;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn stream(seed: u64) -> RngStream<ChaCha8Rng> {
        RngStream(ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn params_invariants() {
        assert!(Params::new(Field::GF2, 4, 5, 4).is_err());
        assert!(Params::new(Field::GF2, 4, 5, 0).is_err());
        assert!(Params::new(Field::GF2, 4, 1, 2).is_err());
        assert!(Params::new(Field::GF2, 4, 2, 3).is_ok());
    }

    #[test]
    fn keygen_solves_its_instance() {
        let p = Params::new(Field::GF2, 4, 5, 2).unwrap();
        let kp = keygen(p, &mut stream(1)).unwrap();
        assert!(check_solution(&kp.pk, kp.sk.alpha()).unwrap());
        assert!(brute_force_solve(&kp.pk).unwrap().contains(kp.sk.alpha()));
        assert_eq!(kp.pk.matrices().len(), 5);
    }

    #[test]
    fn zero_alpha_on_full_rank_m0_fails() {
        let n = 4;
        let m0 = Matrix::identity(Field::GF2, n);
        let m1 = Matrix::zero(Field::GF2, n, n);
        let pk = PublicKey::from_matrices(Field::GF2, 2, alloc::vec![m0, m1]).unwrap();
        assert!(!check_solution(&pk, &CoeffVector::zero(Field::GF2, 1)).unwrap());
        assert!(matches!(
            check_solution(&pk, &CoeffVector::zero(Field::GF2, 2)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn single_matrix_instance() {
        let f = Field::GF2;
        let rank2 = Matrix::from_rows(f, &[[1u32, 0, 0], [0, 1, 0], [0, 0, 0]]).unwrap();
        let pk = PublicKey::from_matrices(f, 2, alloc::vec![rank2.clone()]).unwrap();
        let sols = brute_force_solve(&pk).unwrap();
        assert_eq!(sols, alloc::vec![CoeffVector::zero(f, 0)]);
        let pk = PublicKey::from_matrices(f, 1, alloc::vec![rank2]).unwrap();
        assert!(brute_force_solve(&pk).unwrap().is_empty());
    }

    #[test]
    fn brute_force_cap() {
        let p = Params::new(Field::GF2, 3, 30, 1).unwrap();
        let pk = lossy_gen(p, &mut stream(2));
        assert!(matches!(brute_force_solve(&pk), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn lossy_gen_shape_and_determinism() {
        let p = Params::new(Field::new(3).unwrap(), 4, 3, 1).unwrap();
        let a = lossy_gen(p, &mut stream(3));
        assert_eq!(a, lossy_gen(p, &mut stream(3)));
        assert_eq!(a.matrices().len(), 3);
        assert!(a.matrices().iter().all(|m| m.shape() == (4, 4)));
    }

    #[test]
    fn constant_distinguisher_has_no_advantage() {
        let p = Params::new(Field::GF2, 4, 3, 1).unwrap();
        let a = decisional_experiment(|_| true, p, OracleChoice::IGen, 50, &mut stream(4)).unwrap();
        let b = decisional_experiment(|_| true, p, OracleChoice::LossyGen, 50, &mut stream(4)).unwrap();
        assert_eq!((a, b), (1.0, 1.0));
    }
}
