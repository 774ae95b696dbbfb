//! Hashing, dataset commitments, PRF tags, and EdDSA signatures.
//!
//! All hashing is SHA-256 with a one-byte domain-separation prefix per
//! context, and every variable-length field inside a hashed concatenation is
//! length-prefixed (see [`crate::wire`]), so no two contexts or field splits
//! can produce the same preimage.

use ed25519_dalek::{Signer, Verifier};
use rand::{CryptoRng, RngCore};
use sha2::{Digest as _, Sha256};

pub const DIGEST_LEN: usize = 32;
/// Commitment salt length: lambda = 128 bits.
pub const SALT_LEN: usize = 16;
pub const SIG_PUBLIC_LEN: usize = 32;
pub const SIGNATURE_LEN: usize = 64;

/// Domain-separation prefixes, one per hashing context.
pub mod domain {
    pub const COMMITMENT: u8 = 0x01;
    pub const PRF_OUTER: u8 = 0x02;
    pub const PRF_INNER: u8 = 0x03;
    pub const MERKLE_LEAF: u8 = 0x04;
    pub const MERKLE_NODE: u8 = 0x05;
    pub const BOARD_ENTRY: u8 = 0x06;
    pub const STATEMENT: u8 = 0x07;
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CryptoError {
    #[error("salt must be exactly {SALT_LEN} bytes")]
    InvalidSalt,
    #[error("malformed {0} encoding")]
    Decode(&'static str),
}

/// A 32-byte SHA-256 output.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest([u8; DIGEST_LEN]);

impl Digest {
    pub fn new(bytes: [u8; DIGEST_LEN]) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; DIGEST_LEN] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self, CryptoError> {
        let raw: [u8; DIGEST_LEN] =
            bytes.try_into().map_err(|_| CryptoError::Decode("digest"))?;
        Ok(Self(raw))
    }

    pub fn from_hex(s: &str) -> Result<Self, CryptoError> {
        let raw = hex::decode(s).map_err(|_| CryptoError::Decode("digest hex"))?;
        Self::from_slice(&raw)
    }
}

impl std::fmt::Debug for Digest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Digest({})", &self.to_hex()[..16])
    }
}

impl std::fmt::Display for Digest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Plain SHA-256 of raw bytes.
pub fn hash_bytes(data: &[u8]) -> Digest {
    let mut h = Sha256::new();
    h.update(data);
    Digest(h.finalize().into())
}

/// Domain-separated hash over length-prefixed fields:
/// `SHA-256(domain || be32(len(f1)) || f1 || be32(len(f2)) || f2 || ...)`.
pub fn hash_domain(domain: u8, fields: &[&[u8]]) -> Digest {
    let mut h = Sha256::new();
    h.update([domain]);
    for f in fields {
        h.update((f.len() as u32).to_be_bytes());
        h.update(f);
    }
    Digest(h.finalize().into())
}

/// Fresh per-registration commitment randomness.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Salt([u8; SALT_LEN]);

impl Salt {
    pub fn random<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        let mut raw = [0u8; SALT_LEN];
        rng.fill_bytes(&mut raw);
        Self(raw)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CryptoError> {
        let raw: [u8; SALT_LEN] = bytes.try_into().map_err(|_| CryptoError::InvalidSalt)?;
        Ok(Self(raw))
    }

    pub fn as_bytes(&self) -> &[u8; SALT_LEN] {
        &self.0
    }
}

impl std::fmt::Debug for Salt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Salt(..)")
    }
}

/// A hiding, binding commitment to `(dataset, mpk)` under a fresh salt.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Commitment(pub Digest);

/// `comm = H(0x01 || dataset || mpk || salt)` with length-prefixed fields.
pub fn commit(dataset: &[u8], mpk: &[u8], salt: &Salt) -> Commitment {
    Commitment(hash_domain(domain::COMMITMENT, &[dataset, mpk, &salt.0]))
}

/// True iff `c` opens to `(dataset, mpk, salt)`.
pub fn verify_opening(c: &Commitment, dataset: &[u8], mpk: &[u8], salt: &Salt) -> bool {
    commit(dataset, mpk, salt) == *c
}

/// PRF output binding a fresh per-message signature key to a client's master
/// secret key; doubles as the board's replay/dedup nullifier.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Tag(pub Digest);

/// `tag = H(0x02 || msk || a)` where `a = H(0x03 || pk_sig)`.
pub fn prf_tag(msk: &[u8], pk_sig: &[u8]) -> Tag {
    let inner = hash_domain(domain::PRF_INNER, &[pk_sig]);
    Tag(hash_domain(domain::PRF_OUTER, &[msk, inner.as_bytes()]))
}

/// A client's long-lived master keypair. The public half is derivable from
/// the secret half, which is how ownership is checked inside the relations.
#[derive(Clone)]
pub struct MasterKeypair {
    secret: ed25519_dalek::SigningKey,
}

impl MasterKeypair {
    pub fn generate<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        let mut seed = [0u8; 32];
        rng.fill_bytes(&mut seed);
        Self { secret: ed25519_dalek::SigningKey::from_bytes(&seed) }
    }

    pub fn from_seed(seed: [u8; 32]) -> Self {
        Self { secret: ed25519_dalek::SigningKey::from_bytes(&seed) }
    }

    pub fn msk_bytes(&self) -> [u8; 32] {
        self.secret.to_bytes()
    }

    pub fn mpk_bytes(&self) -> [u8; 32] {
        self.secret.verifying_key().to_bytes()
    }

    /// Recompute the public key from a candidate secret and compare.
    pub fn mpk_matches(msk: &[u8; 32], mpk: &[u8]) -> bool {
        let derived = ed25519_dalek::SigningKey::from_bytes(msk).verifying_key();
        derived.to_bytes() == mpk
    }
}

impl std::fmt::Debug for MasterKeypair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MasterKeypair(mpk={})", hex::encode(self.mpk_bytes()))
    }
}

/// Ed25519 verification key (wire form: 32 bytes).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SigPublicKey(ed25519_dalek::VerifyingKey);

impl SigPublicKey {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CryptoError> {
        let raw: [u8; SIG_PUBLIC_LEN] =
            bytes.try_into().map_err(|_| CryptoError::Decode("signature public key"))?;
        ed25519_dalek::VerifyingKey::from_bytes(&raw)
            .map(Self)
            .map_err(|_| CryptoError::Decode("signature public key"))
    }

    pub fn to_bytes(&self) -> [u8; SIG_PUBLIC_LEN] {
        self.0.to_bytes()
    }
}

impl std::fmt::Debug for SigPublicKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SigPublicKey({})", &hex::encode(self.to_bytes())[..16])
    }
}

/// Detached Ed25519 signature (wire form: 64 bytes).
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct SignatureBytes([u8; SIGNATURE_LEN]);

impl SignatureBytes {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CryptoError> {
        let raw: [u8; SIGNATURE_LEN] =
            bytes.try_into().map_err(|_| CryptoError::Decode("signature"))?;
        Ok(Self(raw))
    }

    pub fn to_bytes(&self) -> [u8; SIGNATURE_LEN] {
        self.0
    }
}

impl std::fmt::Debug for SignatureBytes {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SignatureBytes({})", &hex::encode(self.0)[..16])
    }
}

/// Fresh signing keypair; clients generate one per message.
#[derive(Clone)]
pub struct SigKeypair {
    secret: ed25519_dalek::SigningKey,
}

impl SigKeypair {
    pub fn generate<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        let mut seed = [0u8; 32];
        rng.fill_bytes(&mut seed);
        Self { secret: ed25519_dalek::SigningKey::from_bytes(&seed) }
    }

    pub fn public(&self) -> SigPublicKey {
        SigPublicKey(self.secret.verifying_key())
    }

    pub fn public_bytes(&self) -> [u8; SIG_PUBLIC_LEN] {
        self.secret.verifying_key().to_bytes()
    }

    pub fn sign(&self, msg: &[u8]) -> SignatureBytes {
        SignatureBytes(self.secret.sign(msg).to_bytes())
    }
}

impl std::fmt::Debug for SigKeypair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SigKeypair(pk={})", &hex::encode(self.public_bytes())[..16])
    }
}

/// True iff `sig` is a valid signature on `msg` under `pk`.
pub fn verify_sig(pk: &SigPublicKey, msg: &[u8], sig: &SignatureBytes) -> bool {
    match ed25519_dalek::Signature::try_from(&sig.0[..]) {
        Ok(s) => pk.0.verify(msg, &s).is_ok(),
        Err(_) => false,
    }
}

/// Parse-then-verify for wire-form keys and signatures.
pub fn verify_sig_bytes(pk: &[u8], msg: &[u8], sig: &[u8]) -> bool {
    match (SigPublicKey::from_bytes(pk), SignatureBytes::from_bytes(sig)) {
        (Ok(pk), Ok(sig)) => verify_sig(&pk, msg, &sig),
        _ => false,
    }
}
