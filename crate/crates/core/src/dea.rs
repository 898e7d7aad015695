//! n-bit word arithmetic and the carry identities behind the DEA
//! `(alpha + k) ^ (beta + k) = y (mod 2^n)`.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub const MIN_BITS: u32 = 2;
pub const MAX_BITS: u32 = 32;

/// Unsigned value with an explicit width `n`, always `< 2^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    value: u32,
    bits: u32,
}

#[inline]
pub(crate) fn low_mask(bits: u32) -> u64 {
    (1u64 << bits) - 1
}

impl Word {
    pub fn new(value: u32, bits: u32) -> Result<Self> {
        if !(MIN_BITS..=MAX_BITS).contains(&bits) {
            return Err(Error::InvalidWidth(bits));
        }
        if u64::from(value) > low_mask(bits) {
            return Err(Error::ValueOutOfRange { value: value.into(), bits });
        }
        Ok(Word { value, bits })
    }

    /// Reduces `value` modulo `2^bits`.
    pub fn wrapping(value: u64, bits: u32) -> Result<Self> {
        if !(MIN_BITS..=MAX_BITS).contains(&bits) {
            return Err(Error::InvalidWidth(bits));
        }
        Ok(Word { value: (value & low_mask(bits)) as u32, bits })
    }

    pub fn byte(value: u8) -> Self {
        Word { value: value.into(), bits: 8 }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Bit `i` of the value. Panics if `i >= n`.
    pub fn bit(self, i: u32) -> bool {
        assert!(i < self.bits, "bit {i} out of range for {}-bit word", self.bits);
        (self.value >> i) & 1 == 1
    }

    pub fn msb_flipped(self) -> Self {
        Word { value: self.value ^ (1 << (self.bits - 1)), bits: self.bits }
    }

    pub fn xor(self, other: Word) -> Result<Word> {
        same_width(self, other)?;
        Ok(Word { value: self.value ^ other.value, bits: self.bits })
    }
}

fn same_width(a: Word, b: Word) -> Result<u32> {
    if a.bits != b.bits {
        return Err(Error::WidthMismatch { left: a.bits, right: b.bits });
    }
    Ok(a.bits)
}

pub fn mod_add(a: Word, b: Word) -> Result<Word> {
    let n = same_width(a, b)?;
    Word::wrapping(u64::from(a.value) + u64::from(b.value), n)
}

pub fn mod_sub(a: Word, b: Word) -> Result<Word> {
    let n = same_width(a, b)?;
    Word::wrapping(u64::from(a.value).wrapping_sub(u64::from(b.value)), n)
}

/// `(alpha + k) ^ (beta + k)` at the common width.
pub fn dea_eval(alpha: Word, beta: Word, k: Word) -> Result<Word> {
    same_width(alpha, beta)?;
    mod_add(alpha, k)?.xor(mod_add(beta, k)?)
}

/// Raw form used by the solvers' inner loops.
#[inline]
pub(crate) fn dea_raw(alpha: u32, beta: u32, k: u32, bits: u32) -> u32 {
    let m = low_mask(bits);
    ((((alpha as u64) + (k as u64)) ^ ((beta as u64) + (k as u64))) & m) as u32
}

/// A known `(alpha, beta, y)` instance. `y` comes from an oracle, never from a guessed key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub alpha: Word,
    pub beta: Word,
    pub y: Word,
}

impl Triple {
    pub fn new(alpha: Word, beta: Word, y: Word) -> Result<Self> {
        same_width(alpha, beta)?;
        same_width(alpha, y)?;
        Ok(Triple { alpha, beta, y })
    }

    pub fn bytes(alpha: u8, beta: u8, y: u8) -> Self {
        Triple { alpha: Word::byte(alpha), beta: Word::byte(beta), y: Word::byte(y) }
    }

    pub fn bits(&self) -> u32 {
        self.alpha.bits
    }
}

/// Carry bits `c_0..c_n` of `a + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarryChain {
    bits: Vec<bool>,
}

impl CarryChain {
    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// Carries below bit `n` packed as an integer, bit i = c_i.
    pub fn packed(&self) -> u64 {
        self.bits
            .iter()
            .take(self.bits.len() - 1)
            .enumerate()
            .fold(0, |acc, (i, &c)| acc | (u64::from(c) << i))
    }
}

/// Carry recurrence `c_{i+1} = k_i a_i ^ k_i c_i ^ a_i c_i`, with `c_0 = 0`.
pub fn carry_chain(a: Word, k: Word) -> Result<CarryChain> {
    let n = same_width(a, k)?;
    let mut bits = Vec::with_capacity(n as usize + 1);
    let mut c = false;
    bits.push(c);
    for i in 0..n {
        let (ai, ki) = (a.bit(i), k.bit(i));
        c = (ki & ai) ^ (ki & c) ^ (ai & c);
        bits.push(c);
    }
    Ok(CarryChain { bits })
}

/// `y ^ alpha ^ beta`; for the true key its bit i is `c_i ^ c~_i`.
pub fn tilde_y(t: &Triple) -> Word {
    Word { value: t.y.value ^ t.alpha.value ^ t.beta.value, bits: t.bits() }
}

/// Key bit from one triple with `y_i = 1`. Meaningless when `y_i = 0`.
#[inline]
pub fn k_bit_rule(alpha_i: bool, beta_i: bool, c_i: bool, ctilde_i: bool, ytilde_next: bool) -> bool {
    ytilde_next ^ (alpha_i & c_i) ^ (beta_i & ctilde_i)
}

/// `floor(S * k * 10^8 / 2^32) mod 256` in exact integer arithmetic.
pub fn g_mul(sum: u64, k: u8) -> u8 {
    let prod = u128::from(sum) * u128::from(k) * 100_000_000u128;
    (prod >> 32) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: u32, n: u32) -> Word {
        Word::new(v, n).unwrap()
    }

    #[test]
    fn word_rejects_bad_width_and_value() {
        assert!(matches!(Word::new(0, 1), Err(Error::InvalidWidth(1))));
        assert!(matches!(Word::new(0, 33), Err(Error::InvalidWidth(33))));
        assert!(Word::new(16, 4).is_err());
        assert_eq!(Word::new(u32::MAX, 32).unwrap().value(), u32::MAX);
    }

    #[test]
    fn add_sub_examples() {
        assert_eq!(mod_add(w(255, 8), w(1, 8)).unwrap().value(), 0);
        assert_eq!(mod_add(w(3, 8), w(7, 8)).unwrap().value(), 10);
        assert_eq!(mod_add(w(9, 4), w(12, 4)).unwrap().value(), 5);
        assert_eq!(mod_sub(w(0, 8), w(1, 8)).unwrap().value(), 255);
        assert_eq!(mod_sub(w(14, 8), w(10, 8)).unwrap().value(), 4);
        assert_eq!(mod_sub(w(5, 4), w(9, 4)).unwrap().value(), 12);
        assert!(matches!(mod_add(w(1, 8), w(1, 4)), Err(Error::WidthMismatch { .. })));
    }

    #[test]
    fn dea_examples() {
        assert_eq!(dea_eval(w(3, 8), w(5, 8), w(7, 8)).unwrap().value(), 6);
        assert_eq!(dea_eval(w(200, 8), w(17, 8), w(0, 8)).unwrap().value(), 200 ^ 17);
        assert_eq!(dea_raw(3, 5, 7, 8), 6);
    }

    #[test]
    fn carry_examples() {
        let c = carry_chain(w(1, 8), w(1, 8)).unwrap();
        let expect = [false, true, false, false, false, false, false, false, false];
        assert_eq!(c.as_slice(), &expect);
        let zero = carry_chain(w(0, 8), w(0xff, 8)).unwrap();
        assert!(zero.as_slice().iter().all(|&b| !b));
    }

    #[test]
    fn tilde_y_example() {
        assert_eq!(tilde_y(&Triple::bytes(3, 5, 6)).value(), 0);
        assert_eq!(tilde_y(&Triple::bytes(9, 9, 77)).value(), 77);
    }

    #[test]
    fn k_bit_rule_examples() {
        assert!(k_bit_rule(true, true, false, true, false));
        assert!(!k_bit_rule(false, false, false, true, false));
    }

    #[test]
    fn g_mul_examples() {
        assert_eq!(g_mul(300, 100), 186);
        assert_eq!(g_mul(12345, 0), 0);
        assert_eq!(g_mul(0, 77), 0);
        // largest sum in scope (512x512 of 255) stays exact
        let s = 255u64 * 512 * 512;
        let exact = (u128::from(s) * 255 * 100_000_000 / (1u128 << 32)) % 256;
        assert_eq!(u128::from(g_mul(s, 255)), exact);
    }
}
