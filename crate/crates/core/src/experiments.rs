//! Verification suites and Monte-Carlo experiments behind the CLI and acceptance checks.

use crate::attacks::{
    challenge, cp_attack_norouzi, cp_attack_parvin_full, cp_attack_yang_detailed, kp_attack_norouzi,
    kp_attack_norouzi_oracle, kp_attack_parvin_diffusion, recovery_rate, AttackModel, LocalOracle, Oracle,
    RecoveredKey, YangPermutation,
};
use crate::ciphers::encrypt;
use crate::dea::{dea_eval, low_mask, Triple, Word};
use crate::image::Image;
use crate::keysched::{key_schedule, ByteStream, CipherKind, Seed};
use crate::solvers::{bit_plane_solve, bit_plane_solve_with_default, brute_force_solve, confirm_probability};
use crate::solvers::{theorem1_alternate_queries, theorem1_queries, TripleSet};
use crate::{Error, Result};
use serde::Serialize;

fn word(rng: &mut ByteStream, bits: u32) -> Word {
    Word::wrapping(rng.next_u32().into(), bits).expect("validated width")
}

/// One point of the confirmation-probability curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub g: u32,
    pub i: u32,
    pub analytic: f64,
    /// Fraction of trials with mask bits `0..=i` all set.
    pub empirical: f64,
    /// Fraction of trials whose value bits `0..=i` match the key (random default).
    pub empirical_correct: f64,
}

/// Monte-Carlo over uniform random triples, randomized default for uncovered bits.
pub fn prob_curve(trials: usize, gs: &[u32], bits: u32, seed: u64) -> Result<Vec<CurvePoint>> {
    let mut out = Vec::new();
    let top = bits - 1;
    for &g in gs {
        let mut rng = ByteStream::new(seed ^ u64::from(g).wrapping_mul(0x9E37_79B9));
        let mut determined = vec![0usize; top as usize];
        let mut correct = vec![0usize; top as usize];
        for _ in 0..trials {
            let k = word(&mut rng, bits);
            let mut set = TripleSet::new(bits)?;
            for _ in 0..g {
                let (a, b) = (word(&mut rng, bits), word(&mut rng, bits));
                set.push(Triple::new(a, b, dea_eval(a, b, k)?)?)?;
            }
            let est = bit_plane_solve_with_default(&set, word(&mut rng, bits));
            let wrong = est.value.value() ^ k.value();
            for i in 0..top {
                if est.prefix_determined(i) {
                    determined[i as usize] += 1;
                }
                if u64::from(wrong) & low_mask(i + 1) == 0 {
                    correct[i as usize] += 1;
                }
            }
        }
        for i in 0..top {
            out.push(CurvePoint {
                g,
                i,
                analytic: confirm_probability(i, g, bits)?,
                empirical: determined[i as usize] as f64 / trials as f64,
                empirical_correct: correct[i as usize] as f64 / trials as f64,
            });
        }
    }
    Ok(out)
}

/// Every class of `k mod 2^(n-1)` is pinned by both chosen query pairs and both solvers.
/// Returns the number of classes checked or the first counterexample.
pub fn theorem1_suite(bits: u32) -> Result<std::result::Result<usize, String>> {
    let pairs = [theorem1_queries(bits)?, theorem1_alternate_queries(bits)?];
    let half = 1u32 << (bits - 1);
    for k in 0..half {
        let kw = Word::new(k, bits)?;
        for queries in &pairs {
            let set = TripleSet::from_triples(
                bits,
                queries.iter().map(|&(a, b)| Triple::new(a, b, dea_eval(a, b, kw).expect("same width")).expect("same width")),
            )?;
            let brute = brute_force_solve(&set);
            if brute != [kw] {
                return Ok(Err(format!("k={k}: brute force left {} candidates", brute.len())));
            }
            let est = bit_plane_solve(&set);
            if est.determined != (half - 1) || est.value != kw {
                return Ok(Err(format!(
                    "k={k}: bit-plane gave value {} mask {:#x}",
                    est.value.value(),
                    est.determined
                )));
            }
        }
    }
    Ok(Ok(half as usize))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Theorem2Report {
    pub bits: u32,
    pub cases: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}

fn theorem2_case(report: &mut Theorem2Report, alpha: u32, beta: u32, k: u32) {
    let n = report.bits;
    let (a, b, kw) = (Word::new(alpha, n).unwrap(), Word::new(beta, n).unwrap(), Word::new(k, n).unwrap());
    let y = dea_eval(a, b, kw).expect("same width");
    let ones = y.value().trailing_ones().min(n - 1);
    let set = TripleSet::from_triples(n, [Triple::new(a, b, y).expect("same width")]).expect("valid width");
    let est = bit_plane_solve(&set);
    let m = low_mask(ones) as u32;
    report.cases += 1;
    if est.determined & m != m || (est.value.value() ^ k) & m != 0 {
        report.violations += 1;
        report.first_violation.get_or_insert_with(|| {
            format!("alpha={alpha} beta={beta} k={k} y={}: {ones} trailing ones, got value {} mask {:#x}", y.value(), est.value.value(), est.determined)
        });
    }
}

/// A single triple whose `y` ends in `i` ones fixes the `i` low key bits.
/// Exhaustive when `samples` is `None`, otherwise uniform samples.
pub fn theorem2_suite(bits: u32, samples: Option<u64>, seed: u64) -> Result<Theorem2Report> {
    Word::new(0, bits)?;
    let mut report = Theorem2Report { bits, ..Default::default() };
    match samples {
        None => {
            if bits > 10 {
                return Err(Error::InvalidArgument(format!("exhaustive check at {bits} bits is too large")));
            }
            let n = 1u32 << bits;
            for a in 0..n {
                for b in 0..n {
                    for k in 0..n {
                        theorem2_case(&mut report, a, b, k);
                    }
                }
            }
        }
        Some(count) => {
            let mut rng = ByteStream::new(seed);
            for _ in 0..count {
                let (a, b, k) = (word(&mut rng, bits), word(&mut rng, bits), word(&mut rng, bits));
                theorem2_case(&mut report, a.value(), b.value(), k.value());
            }
        }
    }
    Ok(report)
}

/// Random known images for the known-plaintext experiments.
pub fn known_pairs(seed: Seed, height: usize, width: usize, images: usize, image_seed: u64) -> Result<Vec<(Image, Image)>> {
    let km = key_schedule(seed, height, width)?;
    let mut rng = ByteStream::new(image_seed);
    (0..images)
        .map(|_| {
            let p = Image::new(height, width, rng.bytes(height * width))?;
            let c = encrypt(&p, &km)?;
            Ok((p, c))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryRow {
    pub trial: u64,
    pub images: usize,
    pub recovery_rate: f64,
    /// Fraction of positions 2..=L whose candidate set was a singleton.
    pub unique_fraction: f64,
}

/// Known-plaintext recovery on Norouzi for 1..=max_images random images per trial.
/// Images are nested: trial t uses the first `n` images of one stream.
pub fn norouzi_kp_experiment(height: usize, width: usize, max_images: usize, trials: u64, seed: u64) -> Result<Vec<RecoveryRow>> {
    let mut rows = Vec::new();
    for t in 0..trials {
        let key_seed = Seed::new(seed.wrapping_add(t), CipherKind::Norouzi);
        let truth = key_schedule(key_seed, height, width)?;
        let pairs = known_pairs(key_seed, height, width, max_images, !seed.wrapping_add(t))?;
        for n in 1..=max_images {
            let est = kp_attack_norouzi(&pairs[..n])?;
            let unique = est.keystream[2..].iter().filter(|e| e.determined == 0xff).count();
            rows.push(RecoveryRow {
                trial: t,
                images: n,
                recovery_rate: recovery_rate(&est, &truth)?,
                unique_fraction: unique as f64 / (est.keystream.len() - 2) as f64,
            });
        }
    }
    Ok(rows)
}

/// Per-bit determination fractions of the Parvin known-plaintext attack (identity shifts).
/// Entry `i` is the fraction of positions `2..=L` with bits `0..=i` confirmed.
pub fn parvin_kp_bit_stats(height: usize, width: usize, images: usize, seed: u64) -> Result<Vec<f64>> {
    let mut km = key_schedule(Seed::new(seed, CipherKind::Parvin), height, width)?;
    km.u = vec![width as u32; height];
    km.v = vec![height as u32; width];
    let mut rng = ByteStream::new(!seed);
    let pairs: Vec<(Image, Image)> = (0..images)
        .map(|_| {
            let p = Image::new(height, width, rng.bytes(height * width))?;
            let c = encrypt(&p, &km)?;
            Ok((p, c))
        })
        .collect::<Result<_>>()?;
    let est = kp_attack_parvin_diffusion(&pairs, None)?;
    let positions = &est.keystream[2..];
    Ok((0..7)
        .map(|i| positions.iter().filter(|e| e.prefix_determined(i)).count() as f64 / positions.len() as f64)
        .collect())
}

/// Outcome of one end-to-end attack against a local oracle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttackOutcome {
    pub key: RecoveredKey,
    pub recovery_rate: f64,
    pub queries: u64,
    pub exact_decryption: bool,
    pub diff_last_two: Option<usize>,
    pub diff_last_three: Option<usize>,
    pub permutation_queries: Option<u64>,
}

/// Dispatches the attack for `model` + `cipher` against any oracle.
///
/// Known-plaintext Parvin needs the shifts; pass `None` to assume identity.
pub fn attack_oracle<O: Oracle + ?Sized>(
    oracle: &mut O,
    cipher: CipherKind,
    attack_seed: u64,
    images: usize,
    shifts: Option<(&[u32], &[u32])>,
) -> Result<(RecoveredKey, Option<YangPermutation>)> {
    let key = match (oracle.model(), cipher) {
        (AttackModel::KnownPlaintext, CipherKind::Norouzi) => kp_attack_norouzi_oracle(oracle, images)?,
        (AttackModel::KnownPlaintext, CipherKind::Parvin) => {
            let start = oracle.query_count();
            let pairs = (0..images).map(|_| oracle.sample()).collect::<Result<Vec<_>>>()?;
            let mut key = kp_attack_parvin_diffusion(&pairs, shifts)?;
            key.queries = oracle.query_count() - start;
            key
        }
        (AttackModel::ChosenPlaintext, CipherKind::Parvin) => cp_attack_parvin_full(oracle)?,
        (AttackModel::ChosenPlaintext, CipherKind::Norouzi) => cp_attack_norouzi(oracle, attack_seed)?,
        (AttackModel::ChosenPlaintext, CipherKind::Yang) => {
            let (key, p) = cp_attack_yang_detailed(oracle, attack_seed)?;
            return Ok((key, Some(p)));
        }
        (AttackModel::KnownPlaintext, CipherKind::Yang) => {
            return Err(Error::InvalidArgument("known-plaintext attack on yang is not supported".into()))
        }
    };
    Ok((key, None))
}

/// Seed of the fresh plaintext used for the exact-decryption check.
pub fn challenge_seed(attack_seed: u64) -> u64 {
    attack_seed ^ 0xC0FFEE
}

/// Runs `model` + `cipher` against a fresh local oracle keyed by `key_seed`.
/// `images` is only used by known-plaintext attacks.
pub fn run_attack(
    model: AttackModel,
    cipher: CipherKind,
    height: usize,
    width: usize,
    key_seed: u64,
    attack_seed: u64,
    images: usize,
) -> Result<AttackOutcome> {
    let mut oracle = LocalOracle::new(Seed::new(key_seed, cipher), height, width, model)?;
    let truth = oracle.key_material().clone();
    let (key, perm) = attack_oracle(&mut oracle, cipher, attack_seed, images, Some((&truth.u, &truth.v)))?;
    let queries = key.queries;
    let exact_decryption = challenge(&mut oracle, &key, challenge_seed(attack_seed))?;
    Ok(AttackOutcome {
        recovery_rate: recovery_rate(&key, &truth)?,
        queries,
        exact_decryption,
        diff_last_two: perm.as_ref().map(|p| p.diff_last_two),
        diff_last_three: perm.as_ref().map(|p| p.diff_last_three),
        permutation_queries: perm.as_ref().map(|p| p.queries),
        key,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_suites_small() {
        assert_eq!(theorem1_suite(8).unwrap(), Ok(128));
        assert_eq!(theorem1_suite(4).unwrap(), Ok(8));
        let r = theorem2_suite(4, None, 0).unwrap();
        assert_eq!((r.cases, r.violations), (4096, 0));
    }

    #[test]
    fn curve_tracks_formula_roughly() {
        let pts = prob_curve(4000, &[2], 8, 1).unwrap();
        for p in pts {
            assert!((p.empirical - p.analytic).abs() < 0.05, "{p:?}");
            assert!(p.empirical_correct >= p.empirical - 0.05);
        }
    }
}
