//! Three-pass zero-knowledge identification over the MinRank problem with
//! cheating probability 1/2 per round.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computation: prime-field linear algebra with a bit-packed `F_2` path,
//! MinRank instance generation, the hash commitment and seed expander, the
//! prover/verifier round, the knowledge extractor, the per-challenge
//! simulator and two-of-four cheating prover, and the attack-cost and
//! communication-cost estimator. Serialization, framing and the command
//! line live in the `minrank-id` crate.

#![no_std]

extern crate alloc;

#[cfg(any(feature = "std", test))]
extern crate std;

pub mod coeffs;
pub mod commit;
pub mod encoding;
pub mod error;
pub mod estimator;
pub mod field;
pub mod instance;
pub mod matrix;
pub mod protocol;
pub mod sample;
pub mod stream;

pub use coeffs::CoeffVector;
pub use commit::{commit, derive_beta, derive_side, derive_stx, Digest, Expander, HashAlg, Seed};
pub use error::Error;
pub use field::Field;
pub use instance::{
    brute_force_solve, check_solution, decisional_experiment, keygen, lossy_gen, KeyPair,
    OracleChoice, Params, PublicKey, SecretKey,
};
pub use matrix::Matrix;
pub use sample::{linear_combination, random_invertible, random_matrix, random_rank_r};
pub use stream::{ByteStream, RngStream};

pub type Result<T> = core::result::Result<T, Error>;
