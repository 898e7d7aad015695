//! Key recovery from sets of DEA triples and multiplicative triples.

use crate::dea::{dea_raw, g_mul, k_bit_rule, low_mask, Triple, Word, MAX_BITS, MIN_BITS};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Triples sharing one width. Covering subsets are derived on demand.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TripleSet {
    bits: u32,
    triples: Vec<Triple>,
}

impl TripleSet {
    pub fn new(bits: u32) -> Result<Self> {
        if !(MIN_BITS..=MAX_BITS).contains(&bits) {
            return Err(Error::InvalidWidth(bits));
        }
        Ok(TripleSet { bits, triples: Vec::new() })
    }

    pub fn from_triples(bits: u32, triples: impl IntoIterator<Item = Triple>) -> Result<Self> {
        let mut set = Self::new(bits)?;
        for t in triples {
            set.push(t)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, t: Triple) -> Result<()> {
        if t.bits() != self.bits {
            return Err(Error::WidthMismatch { left: self.bits, right: t.bits() });
        }
        self.triples.push(t);
        Ok(())
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    /// Triples with `y_j = 1`.
    pub fn covering(&self, j: u32) -> impl Iterator<Item = &Triple> {
        self.triples.iter().filter(move |t| t.y.bit(j))
    }
}

/// Recovered key value plus which bits are confirmed.
///
/// Additive solvers never confirm bit `n-1`. The multiplicative solver may
/// confirm all eight bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyEstimate {
    pub value: Word,
    pub determined: u32,
}

impl KeyEstimate {
    pub fn undetermined(bits: u32) -> Result<Self> {
        Ok(KeyEstimate { value: Word::new(0, bits)?, determined: 0 })
    }

    pub fn exact(value: Word) -> Self {
        KeyEstimate { value, determined: low_mask(value.bits()) as u32 }
    }

    /// Bits `0..=i` are all confirmed.
    pub fn prefix_determined(&self, i: u32) -> bool {
        let m = low_mask(i + 1) as u32;
        self.determined & m == m
    }

    /// Number of confirmed low bits before the first gap.
    pub fn determined_prefix_len(&self) -> u32 {
        self.determined.trailing_ones()
    }
}

/// All `k < 2^(n-1)` satisfying every triple. Empty means the triples are inconsistent.
pub fn brute_force_solve(set: &TripleSet) -> Vec<Word> {
    let n = set.bits;
    let half = 1u64 << (n - 1);
    (0..half)
        .map(|k| k as u32)
        .filter(|&k| set.triples.iter().all(|t| dea_raw(t.alpha.value(), t.beta.value(), k, n) == t.y.value()))
        .map(|k| Word::new(k, n).expect("below 2^(n-1)"))
        .collect()
}

/// Bit-plane propagation with default 0 for uncovered bits.
pub fn bit_plane_solve(set: &TripleSet) -> KeyEstimate {
    let zero = Word::new(0, set.bits).expect("validated width");
    bit_plane_solve_with_default(set, zero)
}

/// Same as [`bit_plane_solve`] but uncovered bits come from `default`.
pub fn bit_plane_solve_with_default(set: &TripleSet, default: Word) -> KeyEstimate {
    let n = set.bits;
    assert_eq!(default.bits(), n, "default width must match the triple set");
    let mut k = u64::from(default.value());
    let mut mask = 0u32;
    for i in 0..n - 1 {
        let Some(t) = set.covering(i).next() else { continue };
        // carries into bit i from the estimate's bits below i
        let low = low_mask(i);
        let (a, b) = (u64::from(t.alpha.value()), u64::from(t.beta.value()));
        let c = ((a & low) + (k & low)) >> i & 1 == 1;
        let ct = ((b & low) + (k & low)) >> i & 1 == 1;
        let yt = t.y.value() ^ t.alpha.value() ^ t.beta.value();
        let ki = k_bit_rule(t.alpha.bit(i), t.beta.bit(i), c, ct, (yt >> (i + 1)) & 1 == 1);
        k = (k & !(1 << i)) | (u64::from(ki) << i);
        mask |= 1 << i;
    }
    KeyEstimate { value: Word::wrapping(k, n).expect("validated width"), determined: mask }
}

fn pattern(bits: u32, unit: u64) -> u64 {
    let mut v = 0u64;
    let mut j = 0;
    while 2 * j < bits {
        v |= unit << (2 * j);
        j += 1;
    }
    v & low_mask(bits)
}

/// The two chosen `(alpha, beta)` queries that pin `k mod 2^(n-1)`.
pub fn theorem1_queries(bits: u32) -> Result<[(Word, Word); 2]> {
    if bits <= 2 || bits > MAX_BITS {
        return Err(Error::InvalidWidth(bits));
    }
    let zeros = Word::wrapping(0, bits)?;
    let tens = Word::wrapping(pattern(bits, 0b10), bits)?;
    let ones = Word::wrapping(pattern(bits, 0b01), bits)?;
    Ok([(zeros, tens), (tens, ones)])
}

/// Another valid query pair with the same covering property.
pub fn theorem1_alternate_queries(bits: u32) -> Result<[(Word, Word); 2]> {
    let [(zeros, tens), (_, ones)] = theorem1_queries(bits)?;
    Ok([(tens, zeros), (zeros, ones)])
}

/// Probability that bits `0..=i` are confirmed from `g` uniform triples.
pub fn confirm_probability(i: u32, g: u32, bits: u32) -> Result<f64> {
    if !(MIN_BITS..=MAX_BITS).contains(&bits) {
        return Err(Error::InvalidWidth(bits));
    }
    if i >= bits - 1 {
        return Err(Error::InvalidArgument(format!("bit index {i} outside 0..{}", bits - 1)));
    }
    let cover = 1.0 - 0.5f64.powi(g as i32);
    Ok(cover.powi(i as i32 + 1))
}

/// One instance of `(alpha + k) ^ g_mul(sum, k) = y` over bytes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulTriple {
    pub alpha: u8,
    pub sum: u64,
    pub y: u8,
}

impl MulTriple {
    pub fn holds(&self, k: u8) -> bool {
        self.alpha.wrapping_add(k) ^ g_mul(self.sum, k) == self.y
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulSolution {
    /// Unique key as fully determined, otherwise the smallest survivor with mask 0.
    pub estimate: KeyEstimate,
    pub candidates: Vec<u8>,
}

impl MulSolution {
    pub fn is_unique(&self) -> bool {
        self.candidates.len() == 1
    }
}

/// Intersects candidate sets triple by triple, stopping once one key is left.
pub fn mult_solve(triples: &[MulTriple]) -> Result<MulSolution> {
    let mut alive = [true; 256];
    let mut count = 256usize;
    for t in triples {
        if count == 1 {
            break;
        }
        for k in 0..=255u8 {
            if alive[k as usize] && !t.holds(k) {
                alive[k as usize] = false;
                count -= 1;
            }
        }
    }
    let candidates: Vec<u8> = (0..=255u8).filter(|&k| alive[k as usize]).collect();
    let Some(&first) = candidates.first() else {
        return Err(Error::Inconsistent);
    };
    let estimate = if candidates.len() == 1 {
        KeyEstimate::exact(Word::byte(first))
    } else {
        KeyEstimate { value: Word::byte(first), determined: 0 }
    };
    Ok(MulSolution { estimate, candidates })
}
