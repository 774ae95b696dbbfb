//! Additively homomorphic encryption with t-of-n threshold decryption.
//!
//! Paillier with the decryption exponent Shamir-shared over the integers mod
//! `m*N` (safe-prime modulus, trusted dealer inside keygen). Encryption of
//! `x` is `(1 + xN) * r^N mod N^2`; multiplying ciphertexts adds plaintexts.
//! A partial decryption from share `s_i` is `c^{2*delta*s_i} mod N^2` with
//! `delta = n!`, and any `t` partials recombine via integer Lagrange
//! coefficients. Fewer than `t` shares never reach a plaintext.

use rand::{CryptoRng, RngCore};
use rug::{integer::IsPrime, integer::Order, Complete, Integer};

use crate::crypto::{hash_domain, Digest};
use crate::wire::{Reader, WireError, Writer};

/// Domain prefix for key and ciphertext fingerprints.
const FP_DOMAIN: u8 = 0x08;

/// Default modulus size; tests and desk-scale scenarios use 512.
pub const DEFAULT_KEY_BITS: u32 = 2048;
pub const MIN_KEY_BITS: u32 = 512;
const PRIME_REPS: u32 = 25;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HeError {
    #[error("invalid threshold: need 1 <= t <= n, got t={t}, n={n}")]
    BadThreshold { t: usize, n: usize },
    #[error("key size {0} below minimum {MIN_KEY_BITS}")]
    KeyTooSmall(u32),
    #[error("plaintext out of range [0, N)")]
    PlaintextRange,
    #[error("encryption randomness must be a unit mod N")]
    BadRandomness,
    #[error("ciphertext/share bound to a different public key")]
    KeyMismatch,
    #[error("need at least {needed} partial decryptions, got {got}")]
    InsufficientShares { needed: usize, got: usize },
    #[error("duplicate share index {0}")]
    DuplicateShare(u32),
    #[error("partial decryptions do not combine: {0}")]
    CombineFailure(&'static str),
    #[error("wire error: {0}")]
    Wire(#[from] WireError),
}

fn int_to_bytes(v: &Integer) -> Vec<u8> {
    v.to_digits::<u8>(Order::MsfBe)
}

fn int_from_bytes(bytes: &[u8]) -> Integer {
    Integer::from_digits(bytes, Order::MsfBe)
}

fn random_bits<R: RngCore>(rng: &mut R, bits: u32) -> Integer {
    let nbytes = bits.div_ceil(8) as usize;
    let mut buf = vec![0u8; nbytes];
    rng.fill_bytes(&mut buf);
    let excess = (nbytes as u32) * 8 - bits;
    buf[0] &= 0xffu8 >> excess;
    int_from_bytes(&buf)
}

fn random_below<R: RngCore>(rng: &mut R, bound: &Integer) -> Integer {
    let bits = bound.significant_bits();
    loop {
        let candidate = random_bits(rng, bits);
        if &candidate < bound {
            return candidate;
        }
    }
}

fn random_unit<R: RngCore>(rng: &mut R, modulus: &Integer) -> Integer {
    loop {
        let candidate = random_below(rng, modulus);
        if candidate != 0u8 && Integer::from(candidate.gcd_ref(modulus)) == 1u8 {
            return candidate;
        }
    }
}

/// Generate a safe prime `p = 2q + 1` with exactly `bits` bits.
fn gen_safe_prime<R: RngCore>(rng: &mut R, bits: u32) -> Integer {
    loop {
        let mut q = random_bits(rng, bits - 1);
        q.set_bit(bits - 2, true);
        q.set_bit(0, true);
        if q.is_probably_prime(PRIME_REPS) == IsPrime::No {
            continue;
        }
        let p: Integer = (q << 1) + 1u8;
        if p.is_probably_prime(PRIME_REPS) != IsPrime::No {
            return p;
        }
    }
}

/// Committee public key: everything needed to encrypt, add, and combine.
#[derive(Debug, Clone)]
pub struct ThresholdPublicKey {
    modulus: Integer,
    modulus_sq: Integer,
    theta: Integer,
    delta: Integer,
    combine_inverse: Integer,
    t: usize,
    n: usize,
    fingerprint: Digest,
}

/// One party's share of the decryption exponent.
#[derive(Debug, Clone)]
pub struct SecretShare {
    pub index: u32,
    value: Integer,
    pk_fingerprint: Digest,
}

/// Full output of the dealer: public key plus all n shares.
#[derive(Debug, Clone)]
pub struct ThresholdKeyMaterial {
    pub public_key: ThresholdPublicKey,
    pub shares: Vec<SecretShare>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    value: Integer,
    pk_fingerprint: Digest,
}

/// Partial decryption bound to one ciphertext. The proof field is a
/// placeholder keeping the wire format stable; share-correctness proofs are
/// not produced in the semi-honest aggregator model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialDecryption {
    pub share_index: u32,
    value: Integer,
    ct_fingerprint: Digest,
    pub proof: Option<Vec<u8>>,
}

/// Dealer-based threshold key generation.
pub fn keygen<R: RngCore + CryptoRng>(
    n: usize,
    t: usize,
    key_bits: u32,
    rng: &mut R,
) -> Result<ThresholdKeyMaterial, HeError> {
    if t < 1 || t > n {
        return Err(HeError::BadThreshold { t, n });
    }
    if key_bits < MIN_KEY_BITS {
        return Err(HeError::KeyTooSmall(key_bits));
    }
    let half = key_bits / 2;
    let p = gen_safe_prime(rng, half);
    let q = loop {
        let q = gen_safe_prime(rng, half);
        if q != p {
            break q;
        }
    };
    let p_sub = Integer::from(&p >> 1);
    let q_sub = Integer::from(&q >> 1);
    let modulus = Integer::from(&p * &q);
    let m_order = Integer::from(&p_sub * &q_sub);
    let modulus_sq = Integer::from(&modulus * &modulus);

    let beta = random_unit(rng, &modulus);
    let theta = Integer::from(&m_order * &beta) % &modulus;
    let delta = Integer::factorial(n as u32).complete();

    // Shamir over Z_{m*N} with constant term beta*m.
    let share_modulus = Integer::from(&m_order * &modulus);
    let secret = Integer::from(&beta * &m_order);
    let coefficients: Vec<Integer> =
        (1..t).map(|_| random_below(rng, &share_modulus)).collect();
    let mut shares = Vec::with_capacity(n);

    // fingerprint over the public parameters only
    let fingerprint = hash_domain(
        FP_DOMAIN,
        &[
            b"threshold-pk",
            &int_to_bytes(&modulus),
            &int_to_bytes(&theta),
            &(t as u32).to_be_bytes(),
            &(n as u32).to_be_bytes(),
        ],
    );

    for i in 1..=n {
        let x = Integer::from(i as u32);
        let mut acc = secret.clone();
        let mut x_pow = Integer::from(1u8);
        for coeff in &coefficients {
            x_pow *= &x;
            acc += Integer::from(coeff * &x_pow);
        }
        shares.push(SecretShare {
            index: i as u32,
            value: acc % &share_modulus,
            pk_fingerprint: fingerprint,
        });
    }

    let combine_base: Integer = Integer::from(4u8) * Integer::from(delta.square_ref()) * &theta;
    let combine_inverse = combine_base
        .invert(&modulus)
        .expect("4*delta^2*theta is a unit mod N for valid key material");

    Ok(ThresholdKeyMaterial {
        public_key: ThresholdPublicKey {
            modulus,
            modulus_sq,
            theta,
            delta,
            combine_inverse,
            t,
            n,
            fingerprint,
        },
        shares,
    })
}

impl ThresholdPublicKey {
    pub fn modulus(&self) -> &Integer {
        &self.modulus
    }

    pub fn threshold(&self) -> usize {
        self.t
    }

    pub fn committee_size(&self) -> usize {
        self.n
    }

    pub fn fingerprint(&self) -> Digest {
        self.fingerprint
    }

    /// Encrypt `m` in `[0, N)` under fresh randomness.
    pub fn encrypt<R: RngCore + CryptoRng>(
        &self,
        m: &Integer,
        rng: &mut R,
    ) -> Result<Ciphertext, HeError> {
        let r = self.sample_randomness(rng);
        self.encrypt_with(m, &r)
    }

    /// Draw encryption randomness: a unit mod N.
    pub fn sample_randomness<R: RngCore + CryptoRng>(&self, rng: &mut R) -> Integer {
        random_unit(rng, &self.modulus)
    }

    /// Deterministic encryption under caller-supplied randomness; used both
    /// by clients and by the ciphertext well-formedness relation clause,
    /// which re-encrypts the claimed plaintexts and compares.
    pub fn encrypt_with(&self, m: &Integer, r: &Integer) -> Result<Ciphertext, HeError> {
        if m < &0u8 || m >= &self.modulus {
            return Err(HeError::PlaintextRange);
        }
        if r <= &0u8 || r >= &self.modulus || Integer::from(r.gcd_ref(&self.modulus)) != 1u8 {
            return Err(HeError::BadRandomness);
        }
        let g_m = (Integer::from(m * &self.modulus) + 1u8) % &self.modulus_sq;
        let r_n = r
            .clone()
            .pow_mod(&self.modulus, &self.modulus_sq)
            .expect("non-negative exponent");
        let value = g_m * r_n % &self.modulus_sq;
        Ok(Ciphertext { value, pk_fingerprint: self.fingerprint })
    }

    /// Homomorphic addition of plaintexts (ciphertext multiplication).
    pub fn add(&self, a: &Ciphertext, b: &Ciphertext) -> Result<Ciphertext, HeError> {
        if a.pk_fingerprint != self.fingerprint || b.pk_fingerprint != self.fingerprint {
            return Err(HeError::KeyMismatch);
        }
        Ok(Ciphertext {
            value: Integer::from(&a.value * &b.value) % &self.modulus_sq,
            pk_fingerprint: self.fingerprint,
        })
    }

    /// `c^{2*delta*s_i} mod N^2`; deterministic for fixed inputs.
    pub fn partial_decrypt(
        &self,
        share: &SecretShare,
        ct: &Ciphertext,
    ) -> Result<PartialDecryption, HeError> {
        if share.pk_fingerprint != self.fingerprint || ct.pk_fingerprint != self.fingerprint {
            return Err(HeError::KeyMismatch);
        }
        let exponent = Integer::from(2u8) * &self.delta * &share.value;
        let value = ct
            .value
            .clone()
            .pow_mod(&exponent, &self.modulus_sq)
            .expect("non-negative exponent");
        Ok(PartialDecryption {
            share_index: share.index,
            value,
            ct_fingerprint: ct.fingerprint(),
            proof: None,
        })
    }

    /// Combine at least `t` distinct partial decryptions of one ciphertext.
    pub fn combine(&self, partials: &[PartialDecryption]) -> Result<Integer, HeError> {
        if partials.len() < self.t {
            return Err(HeError::InsufficientShares { needed: self.t, got: partials.len() });
        }
        let mut seen = std::collections::HashSet::new();
        for p in partials {
            if !seen.insert(p.share_index) {
                return Err(HeError::DuplicateShare(p.share_index));
            }
            if p.ct_fingerprint != partials[0].ct_fingerprint {
                return Err(HeError::CombineFailure("mixed ciphertext fingerprints"));
            }
        }

        let mut w = Integer::from(1u8);
        for p in partials {
            // integer Lagrange coefficient at 0: delta * prod_j j/(j - i)
            let mut num = self.delta.clone();
            let mut den = Integer::from(1u8);
            for other in partials {
                if other.share_index == p.share_index {
                    continue;
                }
                num *= other.share_index;
                den *= Integer::from(other.share_index as i64 - p.share_index as i64);
            }
            if !num.is_divisible(&den) {
                return Err(HeError::CombineFailure("non-integral Lagrange coefficient"));
            }
            let lambda = num / den;
            let exponent = Integer::from(2u8) * lambda;
            let factor = p
                .value
                .clone()
                .pow_mod(&exponent, &self.modulus_sq)
                .map_err(|_| HeError::CombineFailure("non-invertible partial"))?;
            w = w * factor % &self.modulus_sq;
        }

        // L(w) = (w - 1) / N, then divide out 4*delta^2*theta
        let l = (w - 1u8) / &self.modulus;
        Ok(l * &self.combine_inverse % &self.modulus)
    }
}

impl Ciphertext {
    pub fn pk_fingerprint(&self) -> Digest {
        self.pk_fingerprint
    }

    /// Fingerprint binding partial decryptions to this exact ciphertext.
    pub fn fingerprint(&self) -> Digest {
        hash_domain(
            FP_DOMAIN,
            &[b"ciphertext", self.pk_fingerprint.as_bytes(), &int_to_bytes(&self.value)],
        )
    }

    /// Wire form: 32-byte pk fingerprint + length-prefixed big-endian magnitude.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_digest(&self.pk_fingerprint);
        w.put_bytes(&int_to_bytes(&self.value));
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, HeError> {
        let mut r = Reader::new(bytes);
        let out = Self::read_from(&mut r)?;
        r.finish()?;
        Ok(out)
    }

    pub fn write_to(&self, w: &mut Writer) {
        w.put_digest(&self.pk_fingerprint);
        w.put_bytes(&int_to_bytes(&self.value));
    }

    pub fn read_from(r: &mut Reader<'_>) -> Result<Self, HeError> {
        let pk_fingerprint = r.take_digest("pk fingerprint")?;
        let value = int_from_bytes(&r.take_bytes("ciphertext value")?);
        Ok(Self { value, pk_fingerprint })
    }
}

impl PartialDecryption {
    pub fn ct_fingerprint(&self) -> Digest {
        self.ct_fingerprint
    }

    pub fn write_to(&self, w: &mut Writer) {
        w.put_u32(self.share_index);
        w.put_bytes(&int_to_bytes(&self.value));
        w.put_digest(&self.ct_fingerprint);
        match &self.proof {
            Some(p) => {
                w.put_u8(1);
                w.put_bytes(p);
            }
            None => {
                w.put_u8(0);
            }
        }
    }

    pub fn read_from(r: &mut Reader<'_>) -> Result<Self, HeError> {
        let share_index = r.take_u32("share index")?;
        let value = int_from_bytes(&r.take_bytes("partial value")?);
        let ct_fingerprint = r.take_digest("ct fingerprint")?;
        let proof = match r.take_u8("proof flag")? {
            0 => None,
            _ => Some(r.take_bytes("proof placeholder")?),
        };
        Ok(Self { share_index, value, ct_fingerprint, proof })
    }
}
