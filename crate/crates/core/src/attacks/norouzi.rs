use super::{random_image, require_model, AttackModel, Oracle, RecoveredKey};
use crate::attacks::reduce::reduce_norouzi_pair;
use crate::ciphers::suffix_sums;
use crate::dea::{g_mul, Triple, Word};
use crate::image::Image;
use crate::keysched::{ByteStream, CipherKind};
use crate::solvers::{bit_plane_solve, mult_solve, KeyEstimate, MulTriple, TripleSet};
use crate::{Error, Result};

/// Cap on one-pixel variants spent on a single position.
pub const NOROUZI_MAX_ATTEMPTS: usize = 64;
/// Variants at `l0` before switching to variants at `l0 - 1`.
const SWITCH_AFTER: usize = 8;

/// Joint search for `(k(0), k(1))` from `y = (k0 + k1) ^ g_mul(sum, k1)` relations.
fn solve_first_two(relations: &[(u64, u8)]) -> Result<[KeyEstimate; 2]> {
    let Some(&(sum0, y0)) = relations.first() else {
        return Ok([KeyEstimate { value: Word::byte(0), determined: 0 }; 2]);
    };
    let mut found = Vec::new();
    for k1 in 0..=255u8 {
        let k0 = (y0 ^ g_mul(sum0, k1)).wrapping_sub(k1);
        if relations.iter().all(|&(s, y)| k0.wrapping_add(k1) ^ g_mul(s, k1) == y) {
            found.push((k0, k1));
        }
    }
    match found.as_slice() {
        [] => Err(Error::Inconsistent),
        [(k0, k1)] => Ok([KeyEstimate::exact(Word::byte(*k0)), KeyEstimate::exact(Word::byte(*k1))]),
        [(k0, k1), ..] => Ok([
            KeyEstimate { value: Word::byte(*k0), determined: 0 },
            KeyEstimate { value: Word::byte(*k1), determined: 0 },
        ]),
    }
}

fn first_relation(plain: &Image, cipher: &Image) -> (u64, u8) {
    let sum = plain.pixels()[1..].iter().map(|&p| u64::from(p)).sum();
    (sum, cipher.at(1) ^ plain.at(1))
}

/// Known-plaintext attack on the bidirectional diffusion.
pub fn kp_attack_norouzi(pairs: &[(Image, Image)]) -> Result<RecoveredKey> {
    let Some((p0, _)) = pairs.first() else {
        return Err(Error::InvalidArgument("need at least one pair".into()));
    };
    let (h, w) = p0.dims();
    let per_image: Vec<Vec<MulTriple>> =
        pairs.iter().map(|(p, c)| p0.same_dims(p).and_then(|_| reduce_norouzi_pair(p, c))).collect::<Result<_>>()?;
    let relations: Vec<(u64, u8)> = pairs.iter().map(|(p, c)| first_relation(p, c)).collect();
    let mut keystream = solve_first_two(&relations)?.to_vec();
    for l in 0..h * w - 1 {
        let triples: Vec<MulTriple> = per_image.iter().map(|t| t[l]).collect();
        keystream.push(mult_solve(&triples)?.estimate);
    }
    Ok(RecoveredKey {
        cipher: CipherKind::Norouzi,
        height: h,
        width: w,
        keystream,
        u: None,
        v: None,
        queries: pairs.len() as u64,
    })
}

/// Draws `images` known pairs from the oracle and runs [`kp_attack_norouzi`].
pub fn kp_attack_norouzi_oracle<O: Oracle + ?Sized>(oracle: &mut O, images: usize) -> Result<RecoveredKey> {
    require_model(oracle, AttackModel::KnownPlaintext)?;
    let start = oracle.query_count();
    let pairs = (0..images).map(|_| oracle.sample()).collect::<Result<Vec<_>>>()?;
    let mut key = kp_attack_norouzi(&pairs)?;
    key.queries = oracle.query_count() - start;
    Ok(key)
}

/// Chosen-plaintext attack: for `l0 = L..2`, one-pixel variants of a random base image.
///
/// A variant changes pixel `l0`. If that stalls (the carry byte `c(l0 - 1)`
/// barely reacts when the earlier key bytes are small), variants change pixel
/// `l0 - 1` instead; those leave `p(l0)` and `S_l0` alone, so they still give
/// DEA triples at `l0`.
///
/// The 7 low bits come from DEA triples; the top bit from the multiplicative
/// term over every image queried so far; `(k(0), k(1))` by joint search.
pub fn cp_attack_norouzi<O: Oracle + ?Sized>(oracle: &mut O, seed: u64) -> Result<RecoveredKey> {
    require_model(oracle, AttackModel::ChosenPlaintext)?;
    let start = oracle.query_count();
    let (h, w) = oracle.dims();
    let len = h * w;
    let mut rng = ByteStream::new(seed);
    let base = random_image(&mut rng, h, w);
    let base_c = oracle.encrypt(&base)?;
    let mut seen: Vec<(Image, Image, Vec<u64>)> = vec![(base.clone(), base_c.clone(), suffix_sums(base.pixels()))];
    let mut keystream = vec![KeyEstimate { value: Word::byte(0), determined: 0 }; len + 1];
    for l0 in (2..=len).rev() {
        let mut set = TripleSet::new(8)?;
        let mut est = bit_plane_solve(&set);
        let mut attempts = 0;
        while est.determined & 0x7f != 0x7f {
            attempts += 1;
            if attempts > NOROUZI_MAX_ATTEMPTS {
                return Err(Error::ModelViolation(format!("position {l0} not resolved after {NOROUZI_MAX_ATTEMPTS} pairs")));
            }
            let at = if attempts > SWITCH_AFTER { l0 - 1 } else { l0 };
            let mut p2 = base.clone();
            let old = base.at(at);
            let new = loop {
                let b = rng.next_byte();
                if b != old {
                    break b;
                }
            };
            p2.pixels_mut()[at - 1] = new;
            let c2 = oracle.encrypt(&p2)?;
            let y = base_c.at(l0) ^ c2.at(l0) ^ base.at(l0) ^ p2.at(l0);
            set.push(Triple::bytes(base_c.at(l0 - 1), c2.at(l0 - 1), y))?;
            let sums = suffix_sums(p2.pixels());
            seen.push((p2, c2, sums));
            est = bit_plane_solve(&set);
        }
        let low = est.value.value() as u8 & 0x7f;
        let holds = |k: u8| {
            seen.iter().all(|(p, c, s)| {
                MulTriple { alpha: c.at(l0 - 1), sum: s[l0 - 1], y: c.at(l0) ^ p.at(l0) }.holds(k)
            })
        };
        keystream[l0] = match (holds(low), holds(low | 0x80)) {
            (true, false) => KeyEstimate::exact(Word::byte(low)),
            (false, true) => KeyEstimate::exact(Word::byte(low | 0x80)),
            (true, true) => KeyEstimate { value: Word::byte(low), determined: 0x7f },
            (false, false) => return Err(Error::ModelViolation(format!("no key byte fits position {l0}"))),
        };
    }
    let relations: Vec<(u64, u8)> = seen.iter().map(|(p, c, _)| first_relation(p, c)).collect();
    let [k0, k1] = solve_first_two(&relations)?;
    keystream[0] = k0;
    keystream[1] = k1;
    Ok(RecoveredKey {
        cipher: CipherKind::Norouzi,
        height: h,
        width: w,
        keystream,
        u: None,
        v: None,
        queries: oracle.query_count() - start,
    })
}
