use crate::keysched::{CipherKind, KeyMaterial};
use crate::solvers::KeyEstimate;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Attack output. `keystream[l]` estimates `k(l)`.
///
/// For Parvin, positions 0 and 1 are only identifiable through
/// `z = (k(0) + k(1)) ^ k(1)`; attacks report `k(1) = 0`, `k(0) = z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveredKey {
    pub cipher: CipherKind,
    pub height: usize,
    pub width: usize,
    pub keystream: Vec<KeyEstimate>,
    pub u: Option<Vec<u32>>,
    pub v: Option<Vec<u32>>,
    pub queries: u64,
}

impl RecoveredKey {
    /// Key material built from the estimate, with identity permutations where none were recovered.
    pub fn key_material(&self) -> KeyMaterial {
        let (h, w) = (self.height, self.width);
        let (du, dv) = match self.cipher {
            CipherKind::Norouzi => (Vec::new(), Vec::new()),
            CipherKind::Parvin => (vec![w as u32; h], vec![h as u32; w]),
            CipherKind::Yang => ((1..=w as u32).collect(), (1..=h as u32).collect()),
        };
        KeyMaterial {
            cipher: self.cipher,
            height: h,
            width: w,
            keystream: self.keystream.iter().map(|e| e.value.value() as u8).collect(),
            u: self.u.clone().unwrap_or(du),
            v: self.v.clone().unwrap_or(dv),
        }
    }

    /// Positions whose estimate is confirmed (7 low bits for additive keys, all 8 otherwise).
    pub fn confirmed_positions(&self) -> usize {
        let need = match self.cipher {
            CipherKind::Parvin => 0x7f,
            _ => 0xff,
        };
        self.keystream.iter().filter(|e| e.determined & need == need).count()
    }
}

fn parvin_z(k: &[u8]) -> u8 {
    k[0].wrapping_add(k[1]) ^ k[1]
}

/// Percentage of keystream positions recovered up to key equivalence.
///
/// Parvin compares positions from 2 on modulo 128 and positions 0 and 1 jointly
/// through `z`. Norouzi and Yang compare exact bytes.
pub fn recovery_rate(est: &RecoveredKey, truth: &KeyMaterial) -> Result<f64> {
    if est.cipher != truth.cipher
        || (est.height, est.width) != (truth.height, truth.width)
        || est.keystream.len() != truth.keystream.len()
    {
        return Err(Error::SizeMismatch {
            expected: format!("{} {}x{}", truth.cipher, truth.height, truth.width),
            actual: format!("{} {}x{}", est.cipher, est.height, est.width),
        });
    }
    let guess: Vec<u8> = est.keystream.iter().map(|e| e.value.value() as u8).collect();
    let k = &truth.keystream;
    let hits = match truth.cipher {
        CipherKind::Parvin => {
            let head = if parvin_z(&guess) == parvin_z(k) { 2 } else { 0 };
            head + (2..k.len()).filter(|&l| (guess[l] ^ k[l]) & 0x7f == 0).count()
        }
        _ => guess.iter().zip(k).filter(|(a, b)| a == b).count(),
    };
    Ok(100.0 * hits as f64 / k.len() as f64)
}
