use super::diffusion::{bidirectional_diffuse, bidirectional_undiffuse};
use super::prepare;
use crate::image::Image;
use crate::keysched::{CipherKind, KeyMaterial};
use crate::Result;

/// `c(v(i), u(j)) = p'(i, j)` with 1-based `u`, `v`.
pub fn yang_permute(p: &Image, u: &[u32], v: &[u32]) -> Image {
    let (h, w) = p.dims();
    let mut c = p.clone();
    for i in 0..h {
        for j in 0..w {
            c.set(v[i] as usize - 1, u[j] as usize - 1, p.get(i, j));
        }
    }
    c
}

pub fn yang_unpermute(c: &Image, u: &[u32], v: &[u32]) -> Image {
    let (h, w) = c.dims();
    let mut p = c.clone();
    for i in 0..h {
        for j in 0..w {
            p.set(i, j, c.get(v[i] as usize - 1, u[j] as usize - 1));
        }
    }
    p
}

pub fn yang_encrypt(plain: &Image, km: &KeyMaterial) -> Result<Image> {
    prepare(plain, km, CipherKind::Yang)?;
    let diffused = Image::new(km.height, km.width, bidirectional_diffuse(plain.pixels(), &km.keystream))?;
    Ok(yang_permute(&diffused, &km.u, &km.v))
}

pub fn yang_decrypt(cipher: &Image, km: &KeyMaterial) -> Result<Image> {
    prepare(cipher, km, CipherKind::Yang)?;
    let diffused = yang_unpermute(cipher, &km.u, &km.v);
    Image::new(km.height, km.width, bidirectional_undiffuse(diffused.pixels(), &km.keystream))
}
