use super::diffusion::{bidirectional_diffuse, bidirectional_undiffuse};
use super::prepare;
use crate::image::Image;
use crate::keysched::{CipherKind, KeyMaterial};
use crate::Result;

pub fn norouzi_encrypt(plain: &Image, km: &KeyMaterial) -> Result<Image> {
    prepare(plain, km, CipherKind::Norouzi)?;
    Image::new(km.height, km.width, bidirectional_diffuse(plain.pixels(), &km.keystream))
}

pub fn norouzi_decrypt(cipher: &Image, km: &KeyMaterial) -> Result<Image> {
    prepare(cipher, km, CipherKind::Norouzi)?;
    Image::new(km.height, km.width, bidirectional_undiffuse(cipher.pixels(), &km.keystream))
}
