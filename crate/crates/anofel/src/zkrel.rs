//! NP relations for registration and training, behind a pluggable proof
//! system interface.
//!
//! The relations are plain predicates over (statement, witness), so a SNARK
//! backend can be swapped in without touching them. The bundled transparent
//! backend seals the witness with authenticated encryption under a per-run
//! verifier oracle key held by the board's validator: verification decrypts
//! and re-runs the relation. Soundness semantics are exact; the
//! zero-knowledge property is delegated to the backend contract (the sealed
//! bytes reveal nothing without the oracle key).

use rand::{CryptoRng, RngCore};
use rug::Integer;

use chacha20poly1305::aead::{Aead, KeyInit, Payload};
use chacha20poly1305::{ChaCha20Poly1305, Key, Nonce};

use crate::crypto::{
    commit, domain, hash_bytes, hash_domain, prf_tag, verify_sig_bytes, Commitment, Digest,
    MasterKeypair, Salt, Tag,
};
use crate::merkle::{verify_inclusion, InclusionProof};
use crate::threshold_he::{Ciphertext, ThresholdPublicKey};
use crate::wire::{Reader, WireError, Writer};

pub const RELATION_REGISTRATION: u8 = 0x01;
pub const RELATION_TRAINING: u8 = 0x02;
pub const BACKEND_TRANSPARENT: u8 = 0x01;

const NONCE_LEN: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum ZkError {
    #[error("witness does not satisfy the relation")]
    UnsatisfiedRelation,
    #[error("unknown proof backend id {0:#04x}")]
    BadBackend(u8),
    #[error("statement and witness belong to different relations")]
    RelationMismatch,
    #[error("wire error: {0}")]
    Wire(#[from] WireError),
}

/// Optional relation clauses for the stronger (semi-malicious) client model.
/// Both default off, matching the base semi-honest training model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RelationConfig {
    /// Clause 5: the target committee's dataset type must equal the certified one.
    pub dataset_types: bool,
    /// Clause 6: re-encrypt the claimed plaintexts and require exactly one
    /// nonzero slot.
    pub ciphertext_checks: bool,
}

/// Canonical message a certifier signs: `dataset || mpk [|| dt]`.
pub fn certificate_message(dataset: &[u8], mpk: &[u8], dt: Option<&[u8]>) -> Vec<u8> {
    let mut w = Writer::new();
    w.put_bytes(dataset);
    w.put_bytes(mpk);
    if let Some(dt) = dt {
        w.put_bytes(dt);
    }
    w.finish()
}

/// Leaf digest for a certifier key in the PK_C anonymity set.
pub fn certifier_leaf(cert_pk: &[u8]) -> Digest {
    hash_bytes(cert_pk)
}

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

/// Public inputs of the registration relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegStatement {
    pub comm: Commitment,
    pub tag: Tag,
    pub pk_sig: [u8; 32],
    pub sid: u64,
    /// Merkle root of PK_C at `sid`.
    pub cert_root: Digest,
}

/// Public inputs of the training relation. The extension block is present
/// only when ciphertext/dataset-type clauses are enabled.
#[derive(Debug, Clone)]
pub struct TrainStatement {
    pub tag: Tag,
    pub pk_sig: [u8; 32],
    pub sid: u64,
    /// Merkle root of CM_CL at `sid`.
    pub client_root: Digest,
    pub ext: Option<TrainStatementExt>,
}

/// Extension context: the ciphertext vector and, per slot, the receiving
/// committee's public key and declared dataset type.
#[derive(Debug, Clone)]
pub struct TrainStatementExt {
    pub ciphertexts: Vec<Vec<Ciphertext>>,
    pub committees: Vec<ThresholdPublicKey>,
    pub dataset_types: Vec<Vec<u8>>,
}

impl RegStatement {
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_u8(RELATION_REGISTRATION);
        w.put_digest(&self.comm.0);
        w.put_digest(&self.tag.0);
        w.put_bytes(&self.pk_sig);
        w.put_u64(self.sid);
        w.put_digest(&self.cert_root);
        w.finish()
    }

    pub fn digest(&self) -> Digest {
        hash_domain(domain::STATEMENT, &[&self.canonical_bytes()])
    }
}

impl TrainStatement {
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_u8(RELATION_TRAINING);
        w.put_digest(&self.tag.0);
        w.put_bytes(&self.pk_sig);
        w.put_u64(self.sid);
        w.put_digest(&self.client_root);
        match &self.ext {
            None => {
                w.put_u8(0);
            }
            Some(ext) => {
                w.put_u8(1);
                w.put_u32(ext.ciphertexts.len() as u32);
                for (slot, cts) in ext.ciphertexts.iter().enumerate() {
                    w.put_digest(&ext.committees[slot].fingerprint());
                    w.put_bytes(&ext.dataset_types[slot]);
                    w.put_u32(cts.len() as u32);
                    for ct in cts {
                        ct.write_to(&mut w);
                    }
                }
            }
        }
        w.finish()
    }

    pub fn digest(&self) -> Digest {
        hash_domain(domain::STATEMENT, &[&self.canonical_bytes()])
    }
}

/// A statement for either relation.
#[derive(Debug, Clone)]
pub enum Statement {
    Registration(RegStatement),
    Training(TrainStatement),
}

impl Statement {
    pub fn relation_id(&self) -> u8 {
        match self {
            Statement::Registration(_) => RELATION_REGISTRATION,
            Statement::Training(_) => RELATION_TRAINING,
        }
    }

    pub fn digest(&self) -> Digest {
        match self {
            Statement::Registration(s) => s.digest(),
            Statement::Training(s) => s.digest(),
        }
    }
}

// ---------------------------------------------------------------------------
// Witnesses
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RegWitness {
    pub dataset: Vec<u8>,
    pub salt: Salt,
    pub msk: [u8; 32],
    pub mpk: [u8; 32],
    pub cert_pk: [u8; 32],
    pub cert_inclusion: InclusionProof,
    pub certificate: [u8; 64],
    pub sk_sig: [u8; 32],
    pub dt: Option<Vec<u8>>,
}

#[derive(Debug, Clone)]
pub struct TrainWitness {
    pub dataset: Vec<u8>,
    pub salt: Salt,
    pub msk: [u8; 32],
    pub mpk: [u8; 32],
    pub comm: Commitment,
    pub comm_inclusion: InclusionProof,
    pub sk_sig: [u8; 32],
    pub ext: Option<TrainWitnessExt>,
}

/// Extension witness for the re-encryption clause: plaintexts and randomness
/// per slot, plus the certified dataset type.
#[derive(Debug, Clone)]
pub struct TrainWitnessExt {
    pub certified_dt: Vec<u8>,
    pub plaintexts: Vec<Vec<Integer>>,
    pub randomness: Vec<Vec<Integer>>,
}

#[derive(Debug, Clone)]
pub enum Witness {
    Registration(RegWitness),
    Training(TrainWitness),
}

fn int_bytes(v: &Integer) -> Vec<u8> {
    v.to_digits::<u8>(rug::integer::Order::MsfBe)
}

fn int_from(bytes: &[u8]) -> Integer {
    Integer::from_digits(bytes, rug::integer::Order::MsfBe)
}

impl RegWitness {
    fn canonical_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_bytes(&self.dataset);
        w.put_bytes(self.salt.as_bytes());
        w.put_bytes(&self.msk);
        w.put_bytes(&self.mpk);
        w.put_bytes(&self.cert_pk);
        w.put_bytes(&self.cert_inclusion.to_bytes());
        w.put_bytes(&self.certificate);
        w.put_bytes(&self.sk_sig);
        match &self.dt {
            Some(dt) => w.put_u8(1).put_bytes(dt),
            None => w.put_u8(0),
        };
        w.finish()
    }

    fn from_canonical(bytes: &[u8]) -> Result<Self, ZkError> {
        let mut r = Reader::new(bytes);
        let dataset = r.take_bytes("dataset")?;
        let salt =
            Salt::from_bytes(&r.take_bytes("salt")?).map_err(|_| WireError::Invalid("salt"))?;
        let msk: [u8; 32] =
            r.take_bytes("msk")?.try_into().map_err(|_| WireError::Invalid("msk"))?;
        let mpk: [u8; 32] =
            r.take_bytes("mpk")?.try_into().map_err(|_| WireError::Invalid("mpk"))?;
        let cert_pk: [u8; 32] =
            r.take_bytes("cert pk")?.try_into().map_err(|_| WireError::Invalid("cert pk"))?;
        let cert_inclusion = InclusionProof::from_bytes(&r.take_bytes("inclusion")?)?;
        let certificate: [u8; 64] = r
            .take_bytes("certificate")?
            .try_into()
            .map_err(|_| WireError::Invalid("certificate"))?;
        let sk_sig: [u8; 32] =
            r.take_bytes("sk sig")?.try_into().map_err(|_| WireError::Invalid("sk sig"))?;
        let dt = match r.take_u8("dt flag")? {
            0 => None,
            _ => Some(r.take_bytes("dt")?),
        };
        r.finish()?;
        Ok(Self { dataset, salt, msk, mpk, cert_pk, cert_inclusion, certificate, sk_sig, dt })
    }
}

impl TrainWitness {
    fn canonical_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_bytes(&self.dataset);
        w.put_bytes(self.salt.as_bytes());
        w.put_bytes(&self.msk);
        w.put_bytes(&self.mpk);
        w.put_digest(&self.comm.0);
        w.put_bytes(&self.comm_inclusion.to_bytes());
        w.put_bytes(&self.sk_sig);
        match &self.ext {
            None => {
                w.put_u8(0);
            }
            Some(ext) => {
                w.put_u8(1);
                w.put_bytes(&ext.certified_dt);
                w.put_u32(ext.plaintexts.len() as u32);
                for (slot, values) in ext.plaintexts.iter().enumerate() {
                    w.put_u32(values.len() as u32);
                    for v in values {
                        w.put_bytes(&int_bytes(v));
                    }
                    for v in &ext.randomness[slot] {
                        w.put_bytes(&int_bytes(v));
                    }
                }
            }
        }
        w.finish()
    }

    fn from_canonical(bytes: &[u8]) -> Result<Self, ZkError> {
        let mut r = Reader::new(bytes);
        let dataset = r.take_bytes("dataset")?;
        let salt =
            Salt::from_bytes(&r.take_bytes("salt")?).map_err(|_| WireError::Invalid("salt"))?;
        let msk: [u8; 32] =
            r.take_bytes("msk")?.try_into().map_err(|_| WireError::Invalid("msk"))?;
        let mpk: [u8; 32] =
            r.take_bytes("mpk")?.try_into().map_err(|_| WireError::Invalid("mpk"))?;
        let comm = Commitment(r.take_digest("commitment")?);
        let comm_inclusion = InclusionProof::from_bytes(&r.take_bytes("inclusion")?)?;
        let sk_sig: [u8; 32] =
            r.take_bytes("sk sig")?.try_into().map_err(|_| WireError::Invalid("sk sig"))?;
        let ext = match r.take_u8("ext flag")? {
            0 => None,
            _ => {
                let certified_dt = r.take_bytes("dt")?;
                let slots = r.take_u32("slots")? as usize;
                let mut plaintexts = Vec::with_capacity(slots);
                let mut randomness = Vec::with_capacity(slots);
                for _ in 0..slots {
                    let len = r.take_u32("slot len")? as usize;
                    let mut ms = Vec::with_capacity(len);
                    for _ in 0..len {
                        ms.push(int_from(&r.take_bytes("plaintext")?));
                    }
                    let mut rs = Vec::with_capacity(len);
                    for _ in 0..len {
                        rs.push(int_from(&r.take_bytes("randomness")?));
                    }
                    plaintexts.push(ms);
                    randomness.push(rs);
                }
                Some(TrainWitnessExt { certified_dt, plaintexts, randomness })
            }
        };
        r.finish()?;
        Ok(Self { dataset, salt, msk, mpk, comm, comm_inclusion, sk_sig, ext })
    }
}

// ---------------------------------------------------------------------------
// Relations
// ---------------------------------------------------------------------------

/// Registration relation: (1) the commitment opens to (dataset, mpk, salt);
/// (2) the certificate verifies under a certifier key included in PK_C at the
/// referenced sid; (3) mpk is derivable from msk; (4) the tag is the PRF of
/// the fresh signature key under msk.
pub fn reg_relation_check(stmt: &RegStatement, wit: &RegWitness, cfg: &RelationConfig) -> bool {
    if commit(&wit.dataset, &wit.mpk, &wit.salt) != stmt.comm {
        return false;
    }
    let dt = if cfg.dataset_types { wit.dt.as_deref() } else { None };
    let cert_msg = certificate_message(&wit.dataset, &wit.mpk, dt);
    if !verify_sig_bytes(&wit.cert_pk, &cert_msg, &wit.certificate) {
        return false;
    }
    if !verify_inclusion(&stmt.cert_root, &certifier_leaf(&wit.cert_pk), &wit.cert_inclusion) {
        return false;
    }
    if !MasterKeypair::mpk_matches(&wit.msk, &wit.mpk) {
        return false;
    }
    prf_tag(&wit.msk, &stmt.pk_sig) == stmt.tag
}

/// Training relation: (1) commitment opening; (2) the commitment is included
/// in CM_CL at the referenced sid; (3) mpk derivable from msk; (4) tag
/// correctness; plus optional clauses (5) dataset-type match and (6)
/// ciphertext well-formedness with exactly one nonzero slot.
pub fn train_relation_check(
    stmt: &TrainStatement,
    wit: &TrainWitness,
    cfg: &RelationConfig,
) -> bool {
    if commit(&wit.dataset, &wit.mpk, &wit.salt) != wit.comm {
        return false;
    }
    if !verify_inclusion(&stmt.client_root, &wit.comm.0, &wit.comm_inclusion) {
        return false;
    }
    if !MasterKeypair::mpk_matches(&wit.msk, &wit.mpk) {
        return false;
    }
    if prf_tag(&wit.msk, &stmt.pk_sig) != stmt.tag {
        return false;
    }
    if cfg.ciphertext_checks || cfg.dataset_types {
        let (Some(sx), Some(wx)) = (&stmt.ext, &wit.ext) else {
            return false;
        };
        let slots = sx.ciphertexts.len();
        if wx.plaintexts.len() != slots || wx.randomness.len() != slots {
            return false;
        }
        let mut nonzero_slot = None;
        for slot in 0..slots {
            if wx.plaintexts[slot].len() != sx.ciphertexts[slot].len()
                || wx.randomness[slot].len() != sx.ciphertexts[slot].len()
            {
                return false;
            }
            let any_nonzero = wx.plaintexts[slot].iter().any(|m| *m != 0u8);
            if any_nonzero {
                if nonzero_slot.is_some() {
                    return false;
                }
                nonzero_slot = Some(slot);
            }
            if cfg.ciphertext_checks {
                for (i, ct) in sx.ciphertexts[slot].iter().enumerate() {
                    match sx.committees[slot]
                        .encrypt_with(&wx.plaintexts[slot][i], &wx.randomness[slot][i])
                    {
                        Ok(reenc) if &reenc == ct => {}
                        _ => return false,
                    }
                }
            }
        }
        let Some(target) = nonzero_slot else {
            return false;
        };
        if cfg.dataset_types && sx.dataset_types[target] != wx.certified_dt {
            return false;
        }
    }
    true
}

fn relation_check(stmt: &Statement, wit: &Witness, cfg: &RelationConfig) -> Result<bool, ZkError> {
    match (stmt, wit) {
        (Statement::Registration(s), Witness::Registration(w)) => {
            Ok(reg_relation_check(s, w, cfg))
        }
        (Statement::Training(s), Witness::Training(w)) => Ok(train_relation_check(s, w, cfg)),
        _ => Err(ZkError::RelationMismatch),
    }
}

// ---------------------------------------------------------------------------
// Proofs and backends
// ---------------------------------------------------------------------------

/// Opaque proof. Wire form: 1-byte backend id, 32-byte statement digest,
/// length-prefixed payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub backend_id: u8,
    pub stmt_digest: Digest,
    pub payload: Vec<u8>,
}

impl Proof {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_u8(self.backend_id);
        w.put_digest(&self.stmt_digest);
        w.put_bytes(&self.payload);
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ZkError> {
        let mut r = Reader::new(bytes);
        let backend_id = r.take_u8("backend id")?;
        let stmt_digest = r.take_digest("statement digest")?;
        let payload = r.take_bytes("payload")?;
        r.finish().map_err(ZkError::Wire)?;
        Ok(Self { backend_id, stmt_digest, payload })
    }
}

/// A proof system for the two relations. Relations stay pure predicates;
/// backends only decide how a witness is argued.
pub trait ProofBackend {
    fn backend_id(&self) -> u8;

    /// Produce a proof; sound backends refuse witnesses that do not satisfy
    /// the relation.
    fn prove(
        &self,
        stmt: &Statement,
        wit: &Witness,
        cfg: &RelationConfig,
        rng: &mut dyn RngCore,
    ) -> Result<Proof, ZkError>;

    /// Check a proof against a statement.
    fn verify(
        &self,
        stmt: &Statement,
        proof: &Proof,
        cfg: &RelationConfig,
    ) -> Result<bool, ZkError>;
}

/// The transparent backend: the proof payload is an AEAD encryption of the
/// canonical witness under the verifier oracle key, bound to the statement
/// digest and relation id via associated data.
pub struct TransparentBackend {
    key: [u8; 32],
}

impl TransparentBackend {
    pub fn new(key: [u8; 32]) -> Self {
        Self { key }
    }

    pub fn generate<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        let mut key = [0u8; 32];
        rng.fill_bytes(&mut key);
        Self { key }
    }

    pub fn key(&self) -> [u8; 32] {
        self.key
    }

    fn aad(stmt_digest: &Digest, relation_id: u8) -> Vec<u8> {
        let mut aad = stmt_digest.as_bytes().to_vec();
        aad.push(relation_id);
        aad
    }
}

impl ProofBackend for TransparentBackend {
    fn backend_id(&self) -> u8 {
        BACKEND_TRANSPARENT
    }

    fn prove(
        &self,
        stmt: &Statement,
        wit: &Witness,
        cfg: &RelationConfig,
        rng: &mut dyn RngCore,
    ) -> Result<Proof, ZkError> {
        if !relation_check(stmt, wit, cfg)? {
            return Err(ZkError::UnsatisfiedRelation);
        }
        let stmt_digest = stmt.digest();
        let witness_bytes = match wit {
            Witness::Registration(w) => w.canonical_bytes(),
            Witness::Training(w) => w.canonical_bytes(),
        };
        let cipher = ChaCha20Poly1305::new(Key::from_slice(&self.key));
        let mut nonce = [0u8; NONCE_LEN];
        rng.fill_bytes(&mut nonce);
        let aad = Self::aad(&stmt_digest, stmt.relation_id());
        let sealed = cipher
            .encrypt(Nonce::from_slice(&nonce), Payload { msg: &witness_bytes, aad: &aad })
            .expect("aead encryption is infallible for in-memory buffers");
        let mut payload = nonce.to_vec();
        payload.extend_from_slice(&sealed);
        Ok(Proof { backend_id: BACKEND_TRANSPARENT, stmt_digest, payload })
    }

    fn verify(
        &self,
        stmt: &Statement,
        proof: &Proof,
        cfg: &RelationConfig,
    ) -> Result<bool, ZkError> {
        if proof.backend_id != BACKEND_TRANSPARENT {
            return Err(ZkError::BadBackend(proof.backend_id));
        }
        let stmt_digest = stmt.digest();
        if proof.stmt_digest != stmt_digest {
            return Ok(false);
        }
        if proof.payload.len() < NONCE_LEN {
            return Ok(false);
        }
        let (nonce, sealed) = proof.payload.split_at(NONCE_LEN);
        let cipher = ChaCha20Poly1305::new(Key::from_slice(&self.key));
        let aad = Self::aad(&stmt_digest, stmt.relation_id());
        let Ok(witness_bytes) =
            cipher.decrypt(Nonce::from_slice(nonce), Payload { msg: sealed, aad: &aad })
        else {
            return Ok(false);
        };
        let wit = match stmt {
            Statement::Registration(_) => match RegWitness::from_canonical(&witness_bytes) {
                Ok(w) => Witness::Registration(w),
                Err(_) => return Ok(false),
            },
            Statement::Training(_) => match TrainWitness::from_canonical(&witness_bytes) {
                Ok(w) => Witness::Training(w),
                Err(_) => return Ok(false),
            },
        };
        relation_check(stmt, &wit, cfg)
    }
}

/// Spec-level entry point: prove `stmt` with `wit` under `backend`.
pub fn prove(
    stmt: &Statement,
    wit: &Witness,
    cfg: &RelationConfig,
    backend: &dyn ProofBackend,
    rng: &mut dyn RngCore,
) -> Result<Proof, ZkError> {
    backend.prove(stmt, wit, cfg, rng)
}

/// Spec-level entry point: verify `proof` for `stmt` under `backend`.
pub fn verify(
    stmt: &Statement,
    proof: &Proof,
    cfg: &RelationConfig,
    backend: &dyn ProofBackend,
) -> Result<bool, ZkError> {
    backend.verify(stmt, proof, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crypto::SigKeypair;
    use crate::merkle::MerkleTree;
    use crate::threshold_he::keygen;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    struct RegFixture {
        stmt: RegStatement,
        wit: RegWitness,
    }

    fn reg_fixture(rng: &mut ChaCha20Rng) -> RegFixture {
        let master = MasterKeypair::generate(rng);
        let certifier = SigKeypair::generate(rng);
        let other_cert = SigKeypair::generate(rng);
        let dataset: Vec<u8> = (0..48).map(|_| rng.gen()).collect();
        let salt = Salt::random(rng);
        let comm = commit(&dataset, &master.mpk_bytes(), &salt);

        let leaves = vec![
            certifier_leaf(&certifier.public_bytes()),
            certifier_leaf(&other_cert.public_bytes()),
        ];
        let tree = MerkleTree::build(&leaves).unwrap();
        let cert_inclusion = tree.prove_inclusion(0).unwrap();

        let cert_msg = certificate_message(&dataset, &master.mpk_bytes(), None);
        let certificate = certifier.sign(&cert_msg).to_bytes();

        let fresh = SigKeypair::generate(rng);
        let tag = prf_tag(&master.msk_bytes(), &fresh.public_bytes());

        RegFixture {
            stmt: RegStatement {
                comm,
                tag,
                pk_sig: fresh.public_bytes(),
                sid: 3,
                cert_root: tree.root(),
            },
            wit: RegWitness {
                dataset,
                salt,
                msk: master.msk_bytes(),
                mpk: master.mpk_bytes(),
                cert_pk: certifier.public_bytes(),
                cert_inclusion,
                certificate,
                sk_sig: [0u8; 32],
                dt: None,
            },
        }
    }

    struct TrainFixture {
        stmt: TrainStatement,
        wit: TrainWitness,
    }

    fn train_fixture(rng: &mut ChaCha20Rng) -> TrainFixture {
        let master = MasterKeypair::generate(rng);
        let dataset: Vec<u8> = (0..48).map(|_| rng.gen()).collect();
        let salt = Salt::random(rng);
        let comm = commit(&dataset, &master.mpk_bytes(), &salt);
        let other = Commitment(hash_bytes(b"someone else"));
        let tree = MerkleTree::build(&[comm.0, other.0]).unwrap();
        let comm_inclusion = tree.prove_inclusion(0).unwrap();
        let fresh = SigKeypair::generate(rng);
        let tag = prf_tag(&master.msk_bytes(), &fresh.public_bytes());
        TrainFixture {
            stmt: TrainStatement {
                tag,
                pk_sig: fresh.public_bytes(),
                sid: 9,
                client_root: tree.root(),
                ext: None,
            },
            wit: TrainWitness {
                dataset,
                salt,
                msk: master.msk_bytes(),
                mpk: master.mpk_bytes(),
                comm,
                comm_inclusion,
                sk_sig: [0u8; 32],
                ext: None,
            },
        }
    }

    fn cfg() -> RelationConfig {
        RelationConfig::default()
    }

    #[test]
    fn honest_registration_witness_satisfies_relation() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let f = reg_fixture(&mut rng);
        assert!(reg_relation_check(&f.stmt, &f.wit, &cfg()));
    }

    // Enumerate violations of each of the four registration conjuncts.
    #[test]
    fn each_registration_conjunct_is_enforced() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let f = reg_fixture(&mut rng);

        // (1) wrong salt
        let mut bad = f.wit.clone();
        bad.salt = Salt::random(&mut rng);
        assert!(!reg_relation_check(&f.stmt, &bad, &cfg()));

        // (2a) certificate from a key not in PK_C: re-sign under an outsider
        let outsider = SigKeypair::generate(&mut rng);
        let mut bad = f.wit.clone();
        bad.cert_pk = outsider.public_bytes();
        bad.certificate =
            outsider.sign(&certificate_message(&bad.dataset, &bad.mpk, None)).to_bytes();
        assert!(!reg_relation_check(&f.stmt, &bad, &cfg()));

        // (2b) valid member key but tampered certificate
        let mut bad = f.wit.clone();
        bad.certificate[0] ^= 0x01;
        assert!(!reg_relation_check(&f.stmt, &bad, &cfg()));

        // (3) msk that does not own mpk
        let mut bad = f.wit.clone();
        bad.msk = MasterKeypair::generate(&mut rng).msk_bytes();
        assert!(!reg_relation_check(&f.stmt, &bad, &cfg()));

        // (4) tag mismatch via a different pk_sig in the statement
        let mut bad_stmt = f.stmt.clone();
        bad_stmt.pk_sig = SigKeypair::generate(&mut rng).public_bytes();
        assert!(!reg_relation_check(&bad_stmt, &f.wit, &cfg()));
    }

    #[test]
    fn honest_training_witness_satisfies_relation() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let f = train_fixture(&mut rng);
        assert!(train_relation_check(&f.stmt, &f.wit, &cfg()));
    }

    #[test]
    fn training_commitment_must_be_in_set() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let f = train_fixture(&mut rng);
        let mut stmt = f.stmt.clone();
        // root of an unrelated set
        stmt.client_root =
            MerkleTree::build(&[hash_bytes(b"x"), hash_bytes(b"y")]).unwrap().root();
        assert!(!train_relation_check(&stmt, &f.wit, &cfg()));
    }

    #[test]
    fn transparent_backend_completeness() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let backend = TransparentBackend::generate(&mut rng);
        let f = reg_fixture(&mut rng);
        let stmt = Statement::Registration(f.stmt);
        let wit = Witness::Registration(f.wit);
        let proof = prove(&stmt, &wit, &cfg(), &backend, &mut rng).unwrap();
        assert!(verify(&stmt, &proof, &cfg(), &backend).unwrap());

        let t = train_fixture(&mut rng);
        let stmt = Statement::Training(t.stmt);
        let wit = Witness::Training(t.wit);
        let proof = prove(&stmt, &wit, &cfg(), &backend, &mut rng).unwrap();
        assert!(verify(&stmt, &proof, &cfg(), &backend).unwrap());
    }

    #[test]
    fn prover_refuses_unsatisfied_witness() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let backend = TransparentBackend::generate(&mut rng);
        let f = reg_fixture(&mut rng);
        let mut bad = f.wit.clone();
        bad.salt = Salt::random(&mut rng);
        let res = prove(
            &Statement::Registration(f.stmt),
            &Witness::Registration(bad),
            &cfg(),
            &backend,
            &mut rng,
        );
        assert!(matches!(res, Err(ZkError::UnsatisfiedRelation)));
    }

    #[test]
    fn proof_replay_against_different_sid_fails() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let backend = TransparentBackend::generate(&mut rng);
        let f = reg_fixture(&mut rng);
        let stmt = Statement::Registration(f.stmt.clone());
        let proof =
            prove(&stmt, &Witness::Registration(f.wit), &cfg(), &backend, &mut rng).unwrap();
        let mut replayed = f.stmt;
        replayed.sid += 1;
        assert!(!verify(&Statement::Registration(replayed), &proof, &cfg(), &backend).unwrap());
    }

    // Mutate every statement field; the proof must not verify under any.
    #[test]
    fn statement_binding_field_sweep() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let backend = TransparentBackend::generate(&mut rng);
        let f = reg_fixture(&mut rng);
        let stmt = Statement::Registration(f.stmt.clone());
        let proof =
            prove(&stmt, &Witness::Registration(f.wit), &cfg(), &backend, &mut rng).unwrap();

        let mut variants = Vec::new();
        let mut s = f.stmt.clone();
        s.comm = Commitment(hash_bytes(b"other"));
        variants.push(s);
        let mut s = f.stmt.clone();
        s.tag = Tag(hash_bytes(b"other tag"));
        variants.push(s);
        let mut s = f.stmt.clone();
        s.pk_sig[0] ^= 1;
        variants.push(s);
        let mut s = f.stmt.clone();
        s.sid ^= 1;
        variants.push(s);
        let mut s = f.stmt.clone();
        s.cert_root = hash_bytes(b"other root");
        variants.push(s);

        for v in variants {
            assert!(!verify(&Statement::Registration(v), &proof, &cfg(), &backend).unwrap());
        }
    }

    #[test]
    fn truncated_proof_fails() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let backend = TransparentBackend::generate(&mut rng);
        let f = train_fixture(&mut rng);
        let stmt = Statement::Training(f.stmt);
        let mut proof =
            prove(&stmt, &Witness::Training(f.wit), &cfg(), &backend, &mut rng).unwrap();
        proof.payload.truncate(proof.payload.len() - 1);
        assert!(!verify(&stmt, &proof, &cfg(), &backend).unwrap());
        proof.payload.truncate(4);
        assert!(!verify(&stmt, &proof, &cfg(), &backend).unwrap());
    }

    #[test]
    fn unknown_backend_id_is_an_error() {
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let backend = TransparentBackend::generate(&mut rng);
        let f = reg_fixture(&mut rng);
        let stmt = Statement::Registration(f.stmt);
        let mut proof =
            prove(&stmt, &Witness::Registration(f.wit), &cfg(), &backend, &mut rng).unwrap();
        proof.backend_id = 0x7f;
        assert!(matches!(
            verify(&stmt, &proof, &cfg(), &backend),
            Err(ZkError::BadBackend(0x7f))
        ));
    }

    // Engineering smoke check, not a cryptographic ZK claim: sealed proof
    // bytes never contain witness fields in the clear.
    #[test]
    fn witness_bytes_never_appear_in_proofs() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let backend = TransparentBackend::generate(&mut rng);
        let contains = |haystack: &[u8], needle: &[u8]| {
            !needle.is_empty() && haystack.windows(needle.len()).any(|w| w == needle)
        };
        for _ in 0..1000 {
            let f = reg_fixture(&mut rng);
            let stmt = Statement::Registration(f.stmt);
            let proof = prove(
                &stmt,
                &Witness::Registration(f.wit.clone()),
                &cfg(),
                &backend,
                &mut rng,
            )
            .unwrap();
            let bytes = proof.to_bytes();
            assert!(!contains(&bytes, &f.wit.dataset));
            assert!(!contains(&bytes, f.wit.salt.as_bytes()));
            assert!(!contains(&bytes, &f.wit.msk));
            assert!(!contains(&bytes, &f.wit.mpk));
        }
    }

    #[test]
    fn proof_wire_roundtrip() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let backend = TransparentBackend::generate(&mut rng);
        let f = reg_fixture(&mut rng);
        let stmt = Statement::Registration(f.stmt);
        let proof =
            prove(&stmt, &Witness::Registration(f.wit), &cfg(), &backend, &mut rng).unwrap();
        let decoded = Proof::from_bytes(&proof.to_bytes()).unwrap();
        assert_eq!(decoded, proof);
        assert!(verify(&stmt, &decoded, &cfg(), &backend).unwrap());
    }

    // Extension clauses: one honest fixture, then two-nonzero-slot, dt
    // mismatch, and re-encryption mismatch variants.
    #[test]
    fn ciphertext_extension_clauses() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let keys_a = keygen(1, 1, 512, &mut rng).unwrap();
        let keys_b = keygen(1, 1, 512, &mut rng).unwrap();
        let base = train_fixture(&mut rng);
        let ext_cfg = RelationConfig { dataset_types: true, ciphertext_checks: true };

        let build = |values: [(u32, &ThresholdPublicKey); 2],
                     rng: &mut ChaCha20Rng|
         -> (TrainStatementExt, TrainWitnessExt) {
            let mut cts = Vec::new();
            let mut plaintexts = Vec::new();
            let mut randomness = Vec::new();
            for (v, pk) in values {
                let m = Integer::from(v);
                let r = pk.sample_randomness(rng);
                cts.push(vec![pk.encrypt_with(&m, &r).unwrap()]);
                plaintexts.push(vec![m]);
                randomness.push(vec![r]);
            }
            (
                TrainStatementExt {
                    ciphertexts: cts,
                    committees: vec![values[0].1.clone(), values[1].1.clone()],
                    dataset_types: vec![b"medical".to_vec(), b"vehicles".to_vec()],
                },
                TrainWitnessExt {
                    certified_dt: b"medical".to_vec(),
                    plaintexts,
                    randomness,
                },
            )
        };

        // honest: one nonzero slot targeting the matching-dt committee
        let (sx, wx) = build([(5, &keys_a.public_key), (0, &keys_b.public_key)], &mut rng);
        let mut stmt = base.stmt.clone();
        stmt.ext = Some(sx);
        let mut wit = base.wit.clone();
        wit.ext = Some(wx);
        assert!(train_relation_check(&stmt, &wit, &ext_cfg));

        // two nonzero slots
        let (sx, wx) = build([(5, &keys_a.public_key), (6, &keys_b.public_key)], &mut rng);
        let mut stmt2 = base.stmt.clone();
        stmt2.ext = Some(sx);
        let mut wit2 = base.wit.clone();
        wit2.ext = Some(wx);
        assert!(!train_relation_check(&stmt2, &wit2, &ext_cfg));

        // dataset-type mismatch: nonzero slot points at the "vehicles" committee
        let (sx, wx) = build([(0, &keys_a.public_key), (6, &keys_b.public_key)], &mut rng);
        let mut stmt3 = base.stmt.clone();
        stmt3.ext = Some(sx);
        let mut wit3 = base.wit.clone();
        wit3.ext = Some(wx);
        assert!(!train_relation_check(&stmt3, &wit3, &ext_cfg));

        // ciphertext that does not match the claimed plaintext/randomness
        let (sx, mut wx) = build([(5, &keys_a.public_key), (0, &keys_b.public_key)], &mut rng);
        wx.plaintexts[0][0] = Integer::from(77u32);
        let mut stmt4 = base.stmt;
        stmt4.ext = Some(sx);
        let mut wit4 = base.wit;
        wit4.ext = Some(wx);
        assert!(!train_relation_check(&stmt4, &wit4, &ext_cfg));
    }

    // Completeness over randomized fixtures.
    #[test]
    fn completeness_property_randomized() {
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        let backend = TransparentBackend::generate(&mut rng);
        for _ in 0..50 {
            let f = reg_fixture(&mut rng);
            let stmt = Statement::Registration(f.stmt);
            let proof = prove(&stmt, &Witness::Registration(f.wit), &cfg(), &backend, &mut rng)
                .unwrap();
            assert!(verify(&stmt, &proof, &cfg(), &backend).unwrap());
            let t = train_fixture(&mut rng);
            let stmt = Statement::Training(t.stmt);
            let proof =
                prove(&stmt, &Witness::Training(t.wit), &cfg(), &backend, &mut rng).unwrap();
            assert!(verify(&stmt, &proof, &cfg(), &backend).unwrap());
        }
    }
}
