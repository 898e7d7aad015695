//! Deterministic key schedule standing in for the ciphers' chaotic generators.

use crate::image::check_dims;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CipherKind {
    Parvin,
    Norouzi,
    Yang,
}

impl CipherKind {
    pub const ALL: [CipherKind; 3] = [CipherKind::Parvin, CipherKind::Norouzi, CipherKind::Yang];

    pub fn name(self) -> &'static str {
        match self {
            CipherKind::Parvin => "parvin",
            CipherKind::Norouzi => "norouzi",
            CipherKind::Yang => "yang",
        }
    }
}

impl fmt::Display for CipherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CipherKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "parvin" => Ok(CipherKind::Parvin),
            "norouzi" => Ok(CipherKind::Norouzi),
            "yang" => Ok(CipherKind::Yang),
            other => Err(Error::InvalidArgument(format!("unknown cipher {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub value: u64,
    pub cipher: CipherKind,
}

impl Seed {
    pub fn new(value: u64, cipher: CipherKind) -> Self {
        Seed { value, cipher }
    }
}

/// SplitMix64.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Little-endian byte stream over SplitMix64 outputs.
#[derive(Clone, Debug)]
pub struct ByteStream {
    rng: SplitMix64,
    buf: [u8; 8],
    pos: usize,
}

impl ByteStream {
    pub fn new(seed: u64) -> Self {
        ByteStream { rng: SplitMix64::new(seed), buf: [0; 8], pos: 8 }
    }

    pub fn next_byte(&mut self) -> u8 {
        if self.pos == 8 {
            self.buf = self.rng.next_u64().to_le_bytes();
            self.pos = 0;
        }
        let b = self.buf[self.pos];
        self.pos += 1;
        b
    }

    pub fn fill(&mut self, out: &mut [u8]) {
        for b in out {
            *b = self.next_byte();
        }
    }

    pub fn bytes(&mut self, n: usize) -> Vec<u8> {
        let mut v = vec![0; n];
        self.fill(&mut v);
        v
    }

    pub fn next_u32(&mut self) -> u32 {
        let mut b = [0u8; 4];
        self.fill(&mut b);
        u32::from_le_bytes(b)
    }

    /// Uniform draw in `0..n` by rejection on 32-bit words.
    pub fn below(&mut self, n: u32) -> u32 {
        assert!(n > 0, "empty range");
        let zone = (1u64 << 32) - ((1u64 << 32) % u64::from(n));
        loop {
            let x = u64::from(self.next_u32());
            if x < zone {
                return (x % u64::from(n)) as u32;
            }
        }
    }

    /// Fisher-Yates shuffle of `1..=n`.
    pub fn permutation(&mut self, n: usize) -> Vec<u32> {
        let mut p: Vec<u32> = (1..=n as u32).collect();
        for i in (1..n).rev() {
            let j = self.below(i as u32 + 1) as usize;
            p.swap(i, j);
        }
        p
    }
}

/// Secret material for one cipher instance.
///
/// `keystream[l]` is `k(l)` for `l` in `0..=L`. `u` and `v` hold 1-based values:
/// Parvin row/column shifts, or Yang column/row permutations. Both are empty for Norouzi.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyMaterial {
    pub cipher: CipherKind,
    pub height: usize,
    pub width: usize,
    pub keystream: Vec<u8>,
    pub u: Vec<u32>,
    pub v: Vec<u32>,
}

impl KeyMaterial {
    pub fn len(&self) -> usize {
        self.height * self.width
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks lengths and ranges for the declared cipher.
    pub fn validate(&self) -> Result<()> {
        check_dims(self.height, self.width, 2)?;
        let (h, w) = (self.height, self.width);
        if self.keystream.len() != h * w + 1 {
            return Err(Error::SizeMismatch {
                expected: format!("{} keystream bytes", h * w + 1),
                actual: format!("{}", self.keystream.len()),
            });
        }
        let want = |name: &str, v: &[u32], n: usize| -> Result<()> {
            if v.len() != n {
                return Err(Error::SizeMismatch { expected: format!("{n} {name} entries"), actual: v.len().to_string() });
            }
            Ok(())
        };
        match self.cipher {
            CipherKind::Norouzi => {
                want("u", &self.u, 0)?;
                want("v", &self.v, 0)?;
            }
            CipherKind::Parvin => {
                want("u", &self.u, h)?;
                want("v", &self.v, w)?;
                if self.u.iter().any(|&x| x == 0 || x as usize > w) || self.v.iter().any(|&x| x == 0 || x as usize > h) {
                    return Err(Error::InvalidArgument("shift value out of range".into()));
                }
            }
            CipherKind::Yang => {
                want("u", &self.u, w)?;
                want("v", &self.v, h)?;
                if !is_permutation(&self.u) {
                    return Err(Error::NotBijective("U"));
                }
                if !is_permutation(&self.v) {
                    return Err(Error::NotBijective("V"));
                }
            }
        }
        Ok(())
    }

    pub fn check_image(&self, height: usize, width: usize) -> Result<()> {
        if (height, width) != (self.height, self.width) {
            return Err(Error::SizeMismatch {
                expected: format!("{}x{}", self.height, self.width),
                actual: format!("{height}x{width}"),
            });
        }
        Ok(())
    }
}

/// True when `v` is a permutation of `1..=v.len()`.
pub fn is_permutation(v: &[u32]) -> bool {
    let mut seen = vec![false; v.len()];
    for &x in v {
        let Some(slot) = (x as usize).checked_sub(1).and_then(|i| seen.get_mut(i)) else {
            return false;
        };
        if std::mem::replace(slot, true) {
            return false;
        }
    }
    true
}

/// Byte order: K first (`L + 1` bytes), then U, then V.
pub fn key_schedule(seed: Seed, height: usize, width: usize) -> Result<KeyMaterial> {
    check_dims(height, width, 2)?;
    let mut stream = ByteStream::new(seed.value);
    let keystream = stream.bytes(height * width + 1);
    let (u, v) = match seed.cipher {
        CipherKind::Norouzi => (Vec::new(), Vec::new()),
        CipherKind::Parvin => {
            let u = (0..height).map(|_| 1 + stream.below(width as u32)).collect();
            let v = (0..width).map(|_| 1 + stream.below(height as u32)).collect();
            (u, v)
        }
        CipherKind::Yang => {
            let u = stream.permutation(width);
            let v = stream.permutation(height);
            (u, v)
        }
    };
    Ok(KeyMaterial { cipher: seed.cipher, height, width, keystream, u, v })
}
