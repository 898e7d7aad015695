use crate::ciphers::{parvin_permute, suffix_sums};
use crate::dea::Triple;
use crate::image::Image;
use crate::solvers::{MulTriple, TripleSet};
use crate::{Error, Result};

/// Per-position DEA triples from known Parvin pairs, image 0 against each other image.
///
/// Entry `l - 1` holds position `l`. Position 1 stays empty because `c(0)` is secret.
pub fn reduce_parvin_pairs(pairs: &[(Image, Image)], shifts: Option<(&[u32], &[u32])>) -> Result<Vec<TripleSet>> {
    if pairs.len() < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 pairs, got {}", pairs.len())));
    }
    let (p0, _) = &pairs[0];
    for (p, c) in pairs {
        p0.same_dims(p)?;
        p0.same_dims(c)?;
    }
    let permuted: Vec<Image> = pairs
        .iter()
        .map(|(p, _)| match shifts {
            Some((u, v)) => parvin_permute(p, u, v),
            None => p.clone(),
        })
        .collect();
    let len = p0.len();
    let mut sets = vec![TripleSet::new(8)?; len];
    let (s1, c1) = (permuted[0].pixels(), pairs[0].1.pixels());
    for (s2, (_, c2)) in permuted.iter().zip(pairs).skip(1) {
        let (s2, c2) = (s2.pixels(), c2.pixels());
        for l in 1..len {
            let y = c1[l] ^ c2[l] ^ s1[l] ^ s2[l];
            sets[l].push(Triple::bytes(c1[l - 1], c2[l - 1], y))?;
        }
    }
    Ok(sets)
}

/// Multiplicative triples of one Norouzi pair for positions `2..=L` (entry `l - 2`).
pub fn reduce_norouzi_pair(plain: &Image, cipher: &Image) -> Result<Vec<MulTriple>> {
    plain.same_dims(cipher)?;
    let (p, c) = (plain.pixels(), cipher.pixels());
    let sums = suffix_sums(p);
    Ok((1..p.len()).map(|l| MulTriple { alpha: c[l - 1], sum: sums[l], y: c[l] ^ p[l] }).collect())
}
