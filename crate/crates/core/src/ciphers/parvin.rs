use super::diffusion::{parvin_diffuse, parvin_undiffuse};
use super::prepare;
use crate::image::Image;
use crate::keysched::{CipherKind, KeyMaterial};
use crate::Result;

/// Row shift by `u(i)` then column shift by `v(j)`, both 0-based modulo the dimension.
pub fn parvin_permute(p: &Image, u: &[u32], v: &[u32]) -> Image {
    let (h, w) = p.dims();
    let mut shifted = p.clone();
    for i in 0..h {
        for j in 0..w {
            shifted.set(i, (j + u[i] as usize) % w, p.get(i, j));
        }
    }
    let mut s = shifted.clone();
    for i in 0..h {
        for j in 0..w {
            s.set((i + v[j] as usize) % h, j, shifted.get(i, j));
        }
    }
    s
}

pub fn parvin_unpermute(s: &Image, u: &[u32], v: &[u32]) -> Image {
    let (h, w) = s.dims();
    let mut shifted = s.clone();
    for i in 0..h {
        for j in 0..w {
            shifted.set(i, j, s.get((i + v[j] as usize) % h, j));
        }
    }
    let mut p = shifted.clone();
    for i in 0..h {
        for j in 0..w {
            p.set(i, j, shifted.get(i, (j + u[i] as usize) % w));
        }
    }
    p
}

pub fn parvin_encrypt(plain: &Image, km: &KeyMaterial) -> Result<Image> {
    prepare(plain, km, CipherKind::Parvin)?;
    let s = parvin_permute(plain, &km.u, &km.v);
    Image::new(km.height, km.width, parvin_diffuse(s.pixels(), &km.keystream))
}

pub fn parvin_decrypt(cipher: &Image, km: &KeyMaterial) -> Result<Image> {
    prepare(cipher, km, CipherKind::Parvin)?;
    let s = Image::new(km.height, km.width, parvin_undiffuse(cipher.pixels(), &km.keystream))?;
    Ok(parvin_unpermute(&s, &km.u, &km.v))
}
