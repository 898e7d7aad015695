//! Parvin, Norouzi and Yang permutation-diffusion ciphers.

mod diffusion;
mod norouzi;
mod parvin;
mod yang;

pub use diffusion::{bidirectional_diffuse, bidirectional_undiffuse, parvin_diffuse, parvin_undiffuse, suffix_sums};
pub use norouzi::{norouzi_decrypt, norouzi_encrypt};
pub use parvin::{parvin_decrypt, parvin_encrypt, parvin_permute, parvin_unpermute};
pub use yang::{yang_decrypt, yang_encrypt, yang_permute, yang_unpermute};

use crate::image::Image;
use crate::keysched::{CipherKind, KeyMaterial};
use crate::Result;

pub fn encrypt(plain: &Image, km: &KeyMaterial) -> Result<Image> {
    match km.cipher {
        CipherKind::Parvin => parvin_encrypt(plain, km),
        CipherKind::Norouzi => norouzi_encrypt(plain, km),
        CipherKind::Yang => yang_encrypt(plain, km),
    }
}

pub fn decrypt(cipher: &Image, km: &KeyMaterial) -> Result<Image> {
    match km.cipher {
        CipherKind::Parvin => parvin_decrypt(cipher, km),
        CipherKind::Norouzi => norouzi_decrypt(cipher, km),
        CipherKind::Yang => yang_decrypt(cipher, km),
    }
}

fn prepare(img: &Image, km: &KeyMaterial, expect: CipherKind) -> Result<()> {
    if km.cipher != expect {
        return Err(crate::Error::InvalidArgument(format!("{} key used with {expect} cipher", km.cipher)));
    }
    km.validate()?;
    km.check_image(img.height(), img.width())
}
