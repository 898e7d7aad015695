use super::{random_image, RecoveredKey};
use crate::ciphers::{decrypt, encrypt, yang_unpermute};
use crate::image::Image;
use crate::keysched::{key_schedule, ByteStream, KeyMaterial, Seed};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttackModel {
    #[serde(rename = "kp")]
    KnownPlaintext,
    #[serde(rename = "cp")]
    ChosenPlaintext,
}

impl fmt::Display for AttackModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackModel::KnownPlaintext => "kp",
            AttackModel::ChosenPlaintext => "cp",
        })
    }
}

impl FromStr for AttackModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kp" => Ok(AttackModel::KnownPlaintext),
            "cp" => Ok(AttackModel::ChosenPlaintext),
            other => Err(Error::InvalidArgument(format!("unknown attack model {other:?}"))),
        }
    }
}

/// Encryption oracle with a hidden key.
///
/// Known-plaintext oracles only hand out random pairs; chosen-plaintext oracles
/// only encrypt caller images. Every successful call counts as one query.
pub trait Oracle {
    fn model(&self) -> AttackModel;
    fn dims(&self) -> (usize, usize);
    fn encrypt(&mut self, plain: &Image) -> Result<Image>;
    fn sample(&mut self) -> Result<(Image, Image)>;
    fn query_count(&self) -> u64;
}

impl<O: Oracle + ?Sized> Oracle for &mut O {
    fn model(&self) -> AttackModel {
        (**self).model()
    }
    fn dims(&self) -> (usize, usize) {
        (**self).dims()
    }
    fn encrypt(&mut self, plain: &Image) -> Result<Image> {
        (**self).encrypt(plain)
    }
    fn sample(&mut self) -> Result<(Image, Image)> {
        (**self).sample()
    }
    fn query_count(&self) -> u64 {
        (**self).query_count()
    }
}

/// Salt separating the known-plaintext sample stream from the key stream.
const SAMPLE_SALT: u64 = 0x5_DEEC_E66D;

pub struct LocalOracle {
    key: KeyMaterial,
    model: AttackModel,
    queries: u64,
    samples: ByteStream,
}

impl LocalOracle {
    pub fn new(seed: Seed, height: usize, width: usize, model: AttackModel) -> Result<Self> {
        let key = key_schedule(seed, height, width)?;
        Ok(Self::with_key(key, model, seed.value ^ SAMPLE_SALT))
    }

    pub fn with_key(key: KeyMaterial, model: AttackModel, sample_seed: u64) -> Self {
        LocalOracle { key, model, queries: 0, samples: ByteStream::new(sample_seed) }
    }

    /// The hidden key, for scoring experiments.
    pub fn key_material(&self) -> &KeyMaterial {
        &self.key
    }
}

impl Oracle for LocalOracle {
    fn model(&self) -> AttackModel {
        self.model
    }

    fn dims(&self) -> (usize, usize) {
        (self.key.height, self.key.width)
    }

    fn encrypt(&mut self, plain: &Image) -> Result<Image> {
        if self.model != AttackModel::ChosenPlaintext {
            return Err(Error::OracleRefused("known-plaintext oracle does not encrypt chosen images".into()));
        }
        let c = encrypt(plain, &self.key)?;
        self.queries += 1;
        Ok(c)
    }

    fn sample(&mut self) -> Result<(Image, Image)> {
        if self.model != AttackModel::KnownPlaintext {
            return Err(Error::OracleRefused("chosen-plaintext oracle does not hand out samples".into()));
        }
        let p = random_image(&mut self.samples, self.key.height, self.key.width);
        let c = encrypt(&p, &self.key)?;
        self.queries += 1;
        Ok((p, c))
    }

    fn query_count(&self) -> u64 {
        self.queries
    }
}

/// Presents a Yang oracle with its permutation undone, leaving only the diffusion.
pub struct Unpermuted<'a, O: ?Sized> {
    inner: &'a mut O,
    u: Vec<u32>,
    v: Vec<u32>,
}

impl<'a, O: Oracle + ?Sized> Unpermuted<'a, O> {
    pub fn new(inner: &'a mut O, u: Vec<u32>, v: Vec<u32>) -> Self {
        Unpermuted { inner, u, v }
    }
}

impl<O: Oracle + ?Sized> Oracle for Unpermuted<'_, O> {
    fn model(&self) -> AttackModel {
        self.inner.model()
    }
    fn dims(&self) -> (usize, usize) {
        self.inner.dims()
    }
    fn encrypt(&mut self, plain: &Image) -> Result<Image> {
        let c = self.inner.encrypt(plain)?;
        Ok(yang_unpermute(&c, &self.u, &self.v))
    }
    fn sample(&mut self) -> Result<(Image, Image)> {
        let (p, c) = self.inner.sample()?;
        Ok((p, yang_unpermute(&c, &self.u, &self.v)))
    }
    fn query_count(&self) -> u64 {
        self.inner.query_count()
    }
}

/// Decrypts a fresh ciphertext with the recovered key; true if the plaintext comes back exactly.
pub fn challenge<O: Oracle + ?Sized>(oracle: &mut O, key: &RecoveredKey, seed: u64) -> Result<bool> {
    let (h, w) = oracle.dims();
    let (p, c) = match oracle.model() {
        AttackModel::KnownPlaintext => oracle.sample()?,
        AttackModel::ChosenPlaintext => {
            let p = random_image(&mut ByteStream::new(seed), h, w);
            let c = oracle.encrypt(&p)?;
            (p, c)
        }
    };
    Ok(decrypt(&c, &key.key_material())? == p)
}
