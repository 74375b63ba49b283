//! Serialization, framed transport and command line for the MinRank
//! identification scheme in `minrank-core`.
//!
//! * [`codec`]: key files, commitments, responses and verdicts as bytes.
//! * [`wire`]: the `MRID` frame layer and the session header.
//! * [`transcript`]: recorded sessions that can be replayed and re-verified.
//! * [`endpoint`]: prover and verifier over any duplex byte stream.
//! * [`cli`]: the `minrank-id` subcommands.

pub mod cli;
pub mod codec;
pub mod endpoint;
pub mod transcript;
pub mod wire;
