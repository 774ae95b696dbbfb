//! Anonymous privacy-preserving federated learning over a public bulletin board.
//!
//! The crate wires together the building blocks of the protocol:
//!
//! - [`crypto`]: hashing, dataset commitments, PRF tags, EdDSA signatures.
//! - [`merkle`]: anonymity-set Merkle trees with inclusion proofs.
//! - [`threshold_he`]: additively homomorphic threshold Paillier encryption.
//! - [`zkrel`]: the registration/training NP relations behind a pluggable
//!   proof-system interface with a transparent relation-checking backend.
//! - [`dp`]: differential-privacy calibration (clipping, sensitivity, Gaussian
//!   noise scale, membership-advantage and error bounds).
//! - [`encoding`]: fixed-point encoding of gradients into the HE plaintext space.
//! - [`board`]: the validated append-only bulletin board with sid-indexed state.
//! - [`parties`]: certifier, client, aggregator committee, and model owner
//!   state machines.
//! - [`trainer`]: local gradient computation for FedSGD on small built-in models.
//! - [`games`]: the oracle-driven anonymity and dataset-indistinguishability
//!   game harnesses.
//! - [`scenario`]: end-to-end scenario configuration, orchestration, and
//!   run reports.

pub mod board;
pub mod cli;
pub mod crypto;
pub mod dp;
pub mod encoding;
pub mod games;
pub mod merkle;
pub mod parties;
pub mod rng;
pub mod scenario;
pub mod threshold_he;
pub mod trainer;
pub mod wire;
pub mod zkrel;
