//! Fixed-point encoding of real gradient vectors into the Paillier plaintext
//! space.
//!
//! One gradient entry per plaintext. Reals are scaled by `2^scale_bits` and
//! rounded; negatives map to the top half of `[0, N)` as `N - |v|`. The codec
//! is constructed with an overflow budget: `2^scale_bits * max_magnitude *
//! max_participants` must stay below `N/2`, so a sum over all participants
//! can never wrap around the signed midpoint.

use rug::Integer;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EncodingError {
    #[error("codec construction failed: {0}")]
    BadCodec(&'static str),
    #[error("value at index {index} overflows the encoding range")]
    EncodeOverflow { index: usize },
}

/// Encoded gradient vector; each entry lies in `[0, N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedUpdate {
    pub values: Vec<Integer>,
}

#[derive(Debug, Clone)]
pub struct FixedPointCodec {
    scale_bits: u32,
    modulus: Integer,
    half_modulus: Integer,
    max_participants: usize,
    max_magnitude: f64,
}

pub const DEFAULT_SCALE_BITS: u32 = 16;

impl FixedPointCodec {
    pub fn new(
        scale_bits: u32,
        modulus: Integer,
        max_participants: usize,
        max_magnitude: f64,
    ) -> Result<Self, EncodingError> {
        if scale_bits == 0 || scale_bits > 52 {
            return Err(EncodingError::BadCodec("scale_bits must be in 1..=52"));
        }
        if max_participants == 0 {
            return Err(EncodingError::BadCodec("max_participants must be >= 1"));
        }
        if !(max_magnitude > 0.0) || !max_magnitude.is_finite() {
            return Err(EncodingError::BadCodec("max_magnitude must be positive and finite"));
        }
        let budget =
            (scale_bits as f64).exp2() * max_magnitude * max_participants as f64;
        let budget_int = Integer::from_f64(budget.ceil())
            .ok_or(EncodingError::BadCodec("overflow budget not representable"))?;
        let half_modulus = Integer::from(&modulus >> 1);
        if budget_int >= half_modulus {
            return Err(EncodingError::BadCodec(
                "overflow budget exceeds half the plaintext modulus",
            ));
        }
        Ok(Self { scale_bits, modulus, half_modulus, max_participants, max_magnitude })
    }

    pub fn scale_bits(&self) -> u32 {
        self.scale_bits
    }

    pub fn max_participants(&self) -> usize {
        self.max_participants
    }

    pub fn max_magnitude(&self) -> f64 {
        self.max_magnitude
    }

    /// Quantization step `2^-scale_bits`.
    pub fn resolution(&self) -> f64 {
        (-(self.scale_bits as f64)).exp2()
    }

    /// Map a real to `[0, N)`: `round(x * 2^s)`, negatives as `N - |v|`.
    pub fn encode(&self, x: f64) -> Result<Integer, EncodingError> {
        self.encode_at(x, 0)
    }

    fn encode_at(&self, x: f64, index: usize) -> Result<Integer, EncodingError> {
        if !x.is_finite() {
            return Err(EncodingError::EncodeOverflow { index });
        }
        let scaled = (x * (self.scale_bits as f64).exp2()).round();
        let magnitude = Integer::from_f64(scaled.abs())
            .ok_or(EncodingError::EncodeOverflow { index })?;
        if magnitude >= self.half_modulus {
            return Err(EncodingError::EncodeOverflow { index });
        }
        if scaled < 0.0 {
            Ok(Integer::from(&self.modulus - &magnitude))
        } else {
            Ok(magnitude)
        }
    }

    /// Interpret `v` in `[0, N)`: below `N/2` positive, above negative;
    /// divide by `2^scale_bits`. Averaging by participant count stays with
    /// the caller.
    pub fn decode(&self, v: &Integer, _n_summands: usize) -> f64 {
        let reduced = Integer::from(v % &self.modulus);
        let signed = if reduced < self.half_modulus {
            reduced
        } else {
            -Integer::from(&self.modulus - &reduced)
        };
        signed.to_f64() * self.resolution()
    }

    /// Whether a decoded value is plausible for a sum of `n_summands` inputs
    /// each bounded by the codec's magnitude budget. Used to flag corrupt
    /// aggregates after decryption.
    pub fn within_budget(&self, x: f64, n_summands: usize) -> bool {
        x.is_finite() && x.abs() <= self.max_magnitude * n_summands as f64 + self.resolution()
    }

    pub fn encode_vector(&self, g: &[f64]) -> Result<EncodedUpdate, EncodingError> {
        let values = g
            .iter()
            .enumerate()
            .map(|(i, x)| self.encode_at(*x, i))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EncodedUpdate { values })
    }

    pub fn decode_vector(&self, values: &[Integer], n_summands: usize) -> Vec<f64> {
        values.iter().map(|v| self.decode(v, n_summands)).collect()
    }
}
