//! Merkle-tree anonymity sets with proofs of inclusion.
//!
//! Trees are built over 32-byte leaf digests (certifier-key hashes or client
//! commitments), padded to the next power of two with a fixed padding leaf so
//! every set size has proofs of uniform depth. Leaf and node hashes carry
//! distinct domain prefixes, so a forged path cannot cross levels.

use crate::crypto::{domain, hash_domain, Digest};
use crate::wire::{Reader, WireError, Writer};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MerkleError {
    #[error("cannot build a tree over an empty leaf set")]
    EmptySet,
    #[error("leaf index {index} out of range for {len} leaves")]
    BadIndex { index: usize, len: usize },
}

/// Which side a sibling sits on along an authentication path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn to_byte(self) -> u8 {
        match self {
            Side::Left => 0x00,
            Side::Right => 0x01,
        }
    }

    fn from_byte(b: u8) -> Result<Self, WireError> {
        match b {
            0x00 => Ok(Side::Left),
            0x01 => Ok(Side::Right),
            _ => Err(WireError::Invalid("side flag")),
        }
    }
}

/// Authentication path for one leaf. `siblings.len()` equals the tree depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionProof {
    pub leaf_index: usize,
    pub siblings: Vec<(Digest, Side)>,
}

impl InclusionProof {
    /// Wire form: 4-byte leaf index, 1-byte depth, then depth x (side, digest).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_u32(self.leaf_index as u32);
        w.put_u8(self.siblings.len() as u8);
        for (digest, side) in &self.siblings {
            w.put_u8(side.to_byte());
            w.put_digest(digest);
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let leaf_index = r.take_u32("leaf index")? as usize;
        let depth = r.take_u8("depth")? as usize;
        let mut siblings = Vec::with_capacity(depth);
        for _ in 0..depth {
            let side = Side::from_byte(r.take_u8("side")?)?;
            let digest = r.take_digest("sibling")?;
            siblings.push((digest, side));
        }
        r.finish()?;
        Ok(Self { leaf_index, siblings })
    }
}

/// Immutable Merkle tree over an ordered list of leaf digests.
#[derive(Debug, Clone)]
pub struct MerkleTree {
    leaves: Vec<Digest>,
    depth: usize,
    /// levels[0] is the padded leaf-hash layer; levels[depth] is [root]
    levels: Vec<Vec<Digest>>,
}

fn leaf_hash(leaf: &Digest) -> Digest {
    hash_domain(domain::MERKLE_LEAF, &[leaf.as_bytes()])
}

fn node_hash(left: &Digest, right: &Digest) -> Digest {
    hash_domain(domain::MERKLE_NODE, &[left.as_bytes(), right.as_bytes()])
}

/// The fixed leaf-layer value used to pad to a power of two.
pub fn padding_leaf() -> Digest {
    hash_domain(domain::MERKLE_LEAF, &[b"ANOFEL_PAD"])
}

impl MerkleTree {
    /// Build a tree over `leaves`. Depth is `ceil(log2(len))`, with a floor of
    /// one level so even a single-leaf tree has a root distinct from its leaf
    /// hash.
    pub fn build(leaves: &[Digest]) -> Result<Self, MerkleError> {
        if leaves.is_empty() {
            return Err(MerkleError::EmptySet);
        }
        let depth = std::cmp::max(1, (leaves.len() as f64).log2().ceil() as usize);
        let width = 1usize << depth;
        let pad = padding_leaf();
        let mut layer: Vec<Digest> = leaves.iter().map(leaf_hash).collect();
        layer.resize(width, pad);
        let mut levels = vec![layer];
        for _ in 0..depth {
            let prev = levels.last().unwrap();
            let next: Vec<Digest> =
                prev.chunks(2).map(|pair| node_hash(&pair[0], &pair[1])).collect();
            levels.push(next);
        }
        Ok(Self { leaves: leaves.to_vec(), depth, levels })
    }

    pub fn root(&self) -> Digest {
        self.levels[self.depth][0]
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn leaves(&self) -> &[Digest] {
        &self.leaves
    }

    pub fn prove_inclusion(&self, index: usize) -> Result<InclusionProof, MerkleError> {
        if index >= self.leaves.len() {
            return Err(MerkleError::BadIndex { index, len: self.leaves.len() });
        }
        let mut siblings = Vec::with_capacity(self.depth);
        let mut pos = index;
        for level in &self.levels[..self.depth] {
            if pos % 2 == 0 {
                siblings.push((level[pos + 1], Side::Right));
            } else {
                siblings.push((level[pos - 1], Side::Left));
            }
            pos /= 2;
        }
        Ok(InclusionProof { leaf_index: index, siblings })
    }
}

/// Recompute the path from `leaf` along `proof` and compare against `root`.
pub fn verify_inclusion(root: &Digest, leaf: &Digest, proof: &InclusionProof) -> bool {
    let mut cur = leaf_hash(leaf);
    let mut pos = proof.leaf_index;
    for (sibling, side) in &proof.siblings {
        // the claimed index must be consistent with the recorded sides
        let expected = if pos % 2 == 0 { Side::Right } else { Side::Left };
        if *side != expected {
            return false;
        }
        cur = match side {
            Side::Left => node_hash(sibling, &cur),
            Side::Right => node_hash(&cur, sibling),
        };
        pos /= 2;
    }
    cur == *root
}
