//! Canonical byte encodings.
//!
//! Every structure that is hashed, signed, or persisted goes through these
//! helpers. Variable-length fields carry a 4-byte big-endian length prefix so
//! concatenations are unambiguous; digests are fixed 32 bytes; floats are
//! encoded as IEEE-754 bit patterns.

use crate::crypto::{Digest, DIGEST_LEN};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WireError {
    #[error("truncated input while reading {0}")]
    Truncated(&'static str),
    #[error("trailing bytes after decode")]
    Trailing,
    #[error("invalid value for {0}")]
    Invalid(&'static str),
}

#[derive(Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put_u8(&mut self, v: u8) -> &mut Self {
        self.buf.push(v);
        self
    }

    pub fn put_u32(&mut self, v: u32) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn put_u64(&mut self, v: u64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn put_f64(&mut self, v: f64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_bits().to_be_bytes());
        self
    }

    /// Length-prefixed variable-size field.
    pub fn put_bytes(&mut self, v: &[u8]) -> &mut Self {
        self.put_u32(v.len() as u32);
        self.buf.extend_from_slice(v);
        self
    }

    /// Fixed-size digest, no length prefix.
    pub fn put_digest(&mut self, d: &Digest) -> &mut Self {
        self.buf.extend_from_slice(d.as_bytes());
        self
    }

    pub fn put_f64_slice(&mut self, v: &[f64]) -> &mut Self {
        self.put_u32(v.len() as u32);
        for x in v {
            self.put_f64(*x);
        }
        self
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.buf
    }
}

pub struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [u8], WireError> {
        if self.pos + n > self.data.len() {
            return Err(WireError::Truncated(what));
        }
        let out = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn take_u8(&mut self, what: &'static str) -> Result<u8, WireError> {
        Ok(self.take(1, what)?[0])
    }

    pub fn take_u32(&mut self, what: &'static str) -> Result<u32, WireError> {
        Ok(u32::from_be_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    pub fn take_u64(&mut self, what: &'static str) -> Result<u64, WireError> {
        Ok(u64::from_be_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    pub fn take_f64(&mut self, what: &'static str) -> Result<f64, WireError> {
        Ok(f64::from_bits(self.take_u64(what)?))
    }

    pub fn take_bytes(&mut self, what: &'static str) -> Result<Vec<u8>, WireError> {
        let len = self.take_u32(what)? as usize;
        Ok(self.take(len, what)?.to_vec())
    }

    pub fn take_digest(&mut self, what: &'static str) -> Result<Digest, WireError> {
        let raw: [u8; DIGEST_LEN] = self.take(DIGEST_LEN, what)?.try_into().unwrap();
        Ok(Digest::new(raw))
    }

    pub fn take_f64_vec(&mut self, what: &'static str) -> Result<Vec<f64>, WireError> {
        let len = self.take_u32(what)? as usize;
        let mut out = Vec::with_capacity(len.min(1 << 20));
        for _ in 0..len {
            out.push(self.take_f64(what)?);
        }
        Ok(out)
    }

    pub fn finish(self) -> Result<(), WireError> {
        if self.pos == self.data.len() {
            Ok(())
        } else {
            Err(WireError::Trailing)
        }
    }

    pub fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_mixed_fields() {
        let mut w = Writer::new();
        w.put_u8(7).put_u32(1234).put_bytes(b"hello").put_f64(-1.5).put_u64(99);
        let bytes = w.finish();
        let mut r = Reader::new(&bytes);
        assert_eq!(r.take_u8("a").unwrap(), 7);
        assert_eq!(r.take_u32("b").unwrap(), 1234);
        assert_eq!(r.take_bytes("c").unwrap(), b"hello");
        assert_eq!(r.take_f64("d").unwrap(), -1.5);
        assert_eq!(r.take_u64("e").unwrap(), 99);
        r.finish().unwrap();
    }

    #[test]
    fn truncated_and_trailing_are_rejected() {
        let mut w = Writer::new();
        w.put_bytes(b"abcdef");
        let bytes = w.finish();
        let mut r = Reader::new(&bytes[..4]);
        assert!(matches!(r.take_bytes("x"), Err(WireError::Truncated(_))));
        let mut r = Reader::new(&bytes);
        let _ = r.take_u32("len").unwrap();
        assert_eq!(r.finish(), Err(WireError::Trailing));
    }
}
