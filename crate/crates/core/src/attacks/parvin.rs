use super::{require_model, AttackModel, Oracle, RecoveredKey};
use crate::attacks::reduce::reduce_parvin_pairs;
use crate::ciphers::parvin_unpermute;
use crate::dea::Word;
use crate::image::Image;
use crate::keysched::CipherKind;
use crate::solvers::{bit_plane_solve, KeyEstimate};
use crate::{Error, Result};

/// Probe value for locating a pixel through the permutation. An MSB flip
/// passes through the Parvin diffusion unchanged.
pub const PARVIN_PROBE: u8 = 128;

fn first_two(z: u8) -> [KeyEstimate; 2] {
    [
        KeyEstimate { value: Word::byte(z), determined: 0x7f },
        KeyEstimate { value: Word::byte(0), determined: 0x7f },
    ]
}

/// Known-plaintext diffusion attack with known (or identity) shifts.
pub fn kp_attack_parvin_diffusion(pairs: &[(Image, Image)], shifts: Option<(&[u32], &[u32])>) -> Result<RecoveredKey> {
    let sets = reduce_parvin_pairs(pairs, shifts)?;
    let (h, w) = pairs[0].0.dims();
    let s: Vec<Image> = match shifts {
        Some((u, v)) => pairs.iter().map(|(p, _)| crate::ciphers::parvin_permute(p, u, v)).collect(),
        None => pairs.iter().map(|(p, _)| p.clone()).collect(),
    };
    // c(1) = s(1) ^ z for every pair
    let z = pairs[0].1.at(1) ^ s[0].at(1);
    if s.iter().zip(pairs).any(|(s, (_, c))| c.at(1) ^ s.at(1) != z) {
        return Err(Error::Inconsistent);
    }
    let mut keystream = first_two(z).to_vec();
    keystream.extend(sets.iter().skip(1).map(bit_plane_solve));
    Ok(RecoveredKey {
        cipher: CipherKind::Parvin,
        height: h,
        width: w,
        keystream,
        u: shifts.map(|(u, _)| u.to_vec()),
        v: shifts.map(|(_, v)| v.to_vec()),
        queries: pairs.len() as u64,
    })
}

struct Shifts {
    u: Vec<u32>,
    v: Vec<u32>,
    zero_cipher: Image,
}

/// First differing position as 0-based (row, col), checking the MSB-flip signature.
fn locate(base: &Image, probe: &Image) -> Result<(usize, usize)> {
    let (a, b) = (base.pixels(), probe.pixels());
    let first = a.iter().zip(b).position(|(x, y)| x != y).ok_or_else(|| {
        Error::ModelViolation("probe ciphertext equals the reference".into())
    })?;
    if a[first..].iter().zip(&b[first..]).any(|(x, y)| x ^ y != PARVIN_PROBE) {
        return Err(Error::ModelViolation(format!(
            "difference from position {} is not a constant {PARVIN_PROBE}",
            first + 1
        )));
    }
    Ok((first / base.width(), first % base.width()))
}

fn recover_shifts<O: Oracle + ?Sized>(oracle: &mut O) -> Result<Shifts> {
    require_model(oracle, AttackModel::ChosenPlaintext)?;
    let (h, w) = oracle.dims();
    let zero = Image::zeros(h, w)?;
    let zero_cipher = oracle.encrypt(&zero)?;
    let mut u = vec![None; h];
    let mut v: Vec<Option<usize>> = vec![None; w];
    let set_v = |v: &mut Vec<Option<usize>>, j1: usize, val: usize| -> Result<()> {
        match v[j1] {
            Some(old) if old != val => {
                Err(Error::ModelViolation(format!("column {j1} located with two row shifts")))
            }
            _ => {
                v[j1] = Some(val);
                Ok(())
            }
        }
    };
    for i in 0..h {
        let j = i % w;
        let mut probe = zero.clone();
        probe.set(i, j, PARVIN_PROBE);
        let (i1, j1) = locate(&zero_cipher, &oracle.encrypt(&probe)?)?;
        u[i] = Some((j1 + w - j) % w);
        set_v(&mut v, j1, (i1 + h - i) % h)?;
    }
    let u0 = u[0].expect("row 0 probed");
    for j1 in 0..w {
        if v[j1].is_some() {
            continue;
        }
        // pixel (0, j) lands in column j1 after the row shift
        let j = (j1 + w - u0) % w;
        let mut probe = zero.clone();
        probe.set(0, j, PARVIN_PROBE);
        let (i1, got) = locate(&zero_cipher, &oracle.encrypt(&probe)?)?;
        if got != j1 {
            return Err(Error::ModelViolation(format!("expected column {j1}, probe landed in {got}")));
        }
        set_v(&mut v, j1, i1)?;
    }
    let one_based = |x: usize, n: usize| if x == 0 { n as u32 } else { x as u32 };
    Ok(Shifts {
        u: u.into_iter().map(|x| one_based(x.expect("every row probed"), w)).collect(),
        v: v.into_iter().map(|x| one_based(x.expect("every column filled"), h)).collect(),
        zero_cipher,
    })
}

/// Row and column shifts (1-based, residue 0 reported as the dimension).
pub fn cp_attack_parvin_permutation<O: Oracle + ?Sized>(oracle: &mut O) -> Result<(Vec<u32>, Vec<u32>)> {
    let s = recover_shifts(oracle)?;
    Ok((s.u, s.v))
}

#[inline]
fn x_map(c: u8, k: u8) -> u8 {
    c.wrapping_add(k) ^ k
}

/// Permutation recovery, then one designed image per bit plane.
///
/// Image `i` is built from the current estimate so that every position's
/// triple against the all-zero reference has `y_i = 1`; bit `i` is then fixed
/// everywhere once bits below it are.
pub fn cp_attack_parvin_full<O: Oracle + ?Sized>(oracle: &mut O) -> Result<RecoveredKey> {
    let start = oracle.query_count();
    let Shifts { u, v, zero_cipher } = recover_shifts(oracle)?;
    let (h, w) = oracle.dims();
    let len = h * w;
    let c_ref = zero_cipher.pixels().to_vec();
    let z = c_ref[0];
    let mut k = vec![0u8; len + 1];
    let mut pairs = vec![(Image::zeros(h, w)?, zero_cipher.clone())];
    let mut keystream = Vec::new();
    for bit in 0..7u32 {
        let low = ((1u16 << (bit + 1)) - 1) as u8;
        let mut s = vec![0u8; len];
        let mut prev = 0u8;
        for q in 1..=len {
            let want = if q < len {
                let x = x_map(c_ref[q - 1], k[q + 1]);
                ((x >> bit) & 1 ^ 1) << bit
            } else {
                0
            };
            s[q - 1] = if q == 1 { want ^ z } else { (want ^ x_map(prev, k[q])) & low };
            prev = want;
        }
        let plain = parvin_unpermute(&Image::new(h, w, s)?, &u, &v);
        let cipher = oracle.encrypt(&plain)?;
        pairs.push((plain, cipher));
        let sets = reduce_parvin_pairs(&pairs, Some((&u, &v)))?;
        for (l, set) in sets.iter().enumerate().skip(1) {
            let last = set.triples().last().expect("one triple per designed image");
            if !last.y.bit(bit) {
                return Err(Error::ModelViolation(format!("designed image {bit} missed position {}", l + 1)));
            }
        }
        keystream = first_two(z).to_vec();
        keystream.extend(sets.iter().skip(1).map(bit_plane_solve));
        for (l, e) in keystream.iter().enumerate() {
            k[l] = e.value.value() as u8;
        }
    }
    Ok(RecoveredKey {
        cipher: CipherKind::Parvin,
        height: h,
        width: w,
        keystream,
        u: Some(u),
        v: Some(v),
        queries: oracle.query_count() - start,
    })
}
