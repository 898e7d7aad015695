use crate::dea::g_mul;

/// `c(l) = s(l) ^ (c(l-1) + k(l)) ^ k(l)` with `c(0) = k(0)`.
pub fn parvin_diffuse(s: &[u8], k: &[u8]) -> Vec<u8> {
    assert_eq!(k.len(), s.len() + 1);
    let mut prev = k[0];
    s.iter()
        .zip(&k[1..])
        .map(|(&x, &kl)| {
            prev = x ^ prev.wrapping_add(kl) ^ kl;
            prev
        })
        .collect()
}

pub fn parvin_undiffuse(c: &[u8], k: &[u8]) -> Vec<u8> {
    assert_eq!(k.len(), c.len() + 1);
    let mut prev = k[0];
    c.iter()
        .zip(&k[1..])
        .map(|(&x, &kl)| {
            let s = x ^ prev.wrapping_add(kl) ^ kl;
            prev = x;
            s
        })
        .collect()
}

/// `out[l-1] = sum of p(i) for i > l`, so the last entry is 0.
pub fn suffix_sums(p: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; p.len()];
    let mut acc = 0u64;
    for l in (0..p.len()).rev() {
        out[l] = acc;
        acc += u64::from(p[l]);
    }
    out
}

/// `c(l) = p(l) ^ (c(l-1) + k(l)) ^ g_mul(S_l, k(l))` with `c(0) = k(0)`.
pub fn bidirectional_diffuse(p: &[u8], k: &[u8]) -> Vec<u8> {
    assert_eq!(k.len(), p.len() + 1);
    let sums = suffix_sums(p);
    let mut prev = k[0];
    p.iter()
        .zip(&k[1..])
        .zip(&sums)
        .map(|((&x, &kl), &s)| {
            prev = x ^ prev.wrapping_add(kl) ^ g_mul(s, kl);
            prev
        })
        .collect()
}

/// Runs backward from the last pixel, where the suffix sum is 0.
pub fn bidirectional_undiffuse(c: &[u8], k: &[u8]) -> Vec<u8> {
    assert_eq!(k.len(), c.len() + 1);
    let mut p = vec![0u8; c.len()];
    let mut sum = 0u64;
    for l in (0..c.len()).rev() {
        let prev = if l == 0 { k[0] } else { c[l - 1] };
        let kl = k[l + 1];
        p[l] = c[l] ^ prev.wrapping_add(kl) ^ g_mul(sum, kl);
        sum += u64::from(p[l]);
    }
    p
}
