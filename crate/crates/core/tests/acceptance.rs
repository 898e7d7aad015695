//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use dealab::attacks::{
    cp_attack_parvin_full, cp_attack_parvin_permutation, recovery_rate, AttackModel, LocalOracle, Oracle,
};
use dealab::ciphers::{decrypt, encrypt};
use dealab::experiments::{attack_oracle, prob_curve, run_attack, theorem1_suite, theorem2_suite};
use dealab::image::Image;
use dealab::keysched::{key_schedule, ByteStream, CipherKind, KeyMaterial, Seed};
use dealab::net::{serve, TcpOracle};
use dealab::tables::verify_tables;
use std::net::TcpListener;
use std::time::{Duration, Instant};

// tolerances
const CURVE_TOL: f64 = 0.02;
const CURVE_TRIALS: usize = 100_000;
const THEOREM2_SAMPLES: u64 = 100_000;
const ONE_IMAGE_TARGET: f64 = 66.66;
const ONE_IMAGE_TOL: f64 = 3.0;
const TWO_IMAGE_MIN: f64 = 99.0;
const NOROUZI_QUERY_FACTOR: u64 = 8;
const PARVIN_DIFFUSION_MAX: u64 = 12;

// seeds, fixed before any run
const TABLE3_KEY_SEEDS: std::ops::RangeInclusive<u64> = 1..=8;
const PARVIN_SEEDS: std::ops::Range<u64> = 0..5;
const NOROUZI_SEEDS: std::ops::Range<u64> = 0..5;
const YANG_SEED: u64 = 0;
const SUITE_SEED: u64 = 0;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn tables() -> Check {
    let r = verify_tables();
    ensure(r.is_consistent(), format!("{} mismatches, first {:?}", r.mismatches.len(), r.mismatches.first()))?;
    Ok(format!("{} cells match", r.cells_checked))
}

fn theorem1() -> Check {
    let n = theorem1_suite(8).map_err(e2s)??;
    ensure(n == 128, format!("{n} classes"))?;
    Ok("128 classes, both query pairs, both solvers".into())
}

fn theorem2() -> Check {
    let small = theorem2_suite(4, None, SUITE_SEED).map_err(e2s)?;
    let big = theorem2_suite(8, Some(THEOREM2_SAMPLES), SUITE_SEED).map_err(e2s)?;
    for r in [&small, &big] {
        ensure(r.violations == 0, format!("n={}: {:?}", r.bits, r.first_violation))?;
    }
    Ok(format!("n=4 {} cases, n=8 {} samples, 0 violations", small.cases, big.cases))
}

fn curve() -> Check {
    let gs: Vec<u32> = (1..=8).collect();
    let pts = prob_curve(CURVE_TRIALS, &gs, 8, SUITE_SEED).map_err(e2s)?;
    let worst = pts
        .iter()
        .max_by(|a, b| (a.empirical - a.analytic).abs().total_cmp(&(b.empirical - b.analytic).abs()))
        .expect("non-empty");
    let err = (worst.empirical - worst.analytic).abs();
    ensure(pts.len() == 56 && err <= CURVE_TOL, format!("g={} i={} off by {err:.4}", worst.g, worst.i))?;
    Ok(format!("56 points, max error {err:.4} at g={} i={}", worst.g, worst.i))
}

fn table3() -> Check {
    let mut means = [0.0f64; 3];
    let mut exact3 = 0;
    let mut worst3 = 100.0f64;
    let trials = TABLE3_KEY_SEEDS.count() as f64;
    for seed in TABLE3_KEY_SEEDS {
        for images in 1..=3 {
            let o = run_attack(AttackModel::KnownPlaintext, CipherKind::Norouzi, 64, 64, seed, seed, images).map_err(e2s)?;
            means[images - 1] += o.recovery_rate / trials;
            if images == 3 {
                exact3 += usize::from(o.exact_decryption);
                worst3 = worst3.min(o.recovery_rate);
            }
        }
    }
    let summary = format!(
        "1 img {:.4}%, 2 img {:.4}%, 3 img {:.4}% (worst trial {worst3:.4}%), exact {exact3}/{trials}",
        means[0], means[1], means[2]
    );
    ensure((means[0] - ONE_IMAGE_TARGET).abs() <= ONE_IMAGE_TOL, summary.clone())?;
    ensure(means[1] >= TWO_IMAGE_MIN, summary.clone())?;
    ensure(worst3 == 100.0 && exact3 as f64 == trials, summary.clone())?;
    Ok(summary)
}

fn parvin_cp() -> Check {
    let (h, w) = (32, 32);
    let mut worst = (0, 0);
    for seed in PARVIN_SEEDS {
        let key = Seed::new(seed, CipherKind::Parvin);
        let mut perm_only = LocalOracle::new(key, h, w, AttackModel::ChosenPlaintext).map_err(e2s)?;
        let truth = perm_only.key_material().clone();
        let (u, v) = cp_attack_parvin_permutation(&mut perm_only).map_err(e2s)?;
        ensure(u == truth.u && v == truth.v, format!("seed {seed}: shifts differ"))?;
        let perm_q = perm_only.query_count();

        let mut o = LocalOracle::new(key, h, w, AttackModel::ChosenPlaintext).map_err(e2s)?;
        let rec = cp_attack_parvin_full(&mut o).map_err(e2s)?;
        let diff_q = rec.queries - perm_q;
        ensure(recovery_rate(&rec, &truth).map_err(e2s)? == 100.0, format!("seed {seed}: keystream incomplete"))?;
        ensure(perm_q <= (h + w + 2) as u64, format!("seed {seed}: {perm_q} permutation queries"))?;
        ensure(diff_q <= PARVIN_DIFFUSION_MAX, format!("seed {seed}: {diff_q} diffusion images"))?;
        ensure(fresh_decrypts(&mut o, &rec.key_material(), seed)?, format!("seed {seed}: decryption differs"))?;
        worst = (worst.0.max(perm_q), worst.1.max(diff_q));
    }
    Ok(format!("{} keys, permutation <= {} queries (bound {}), diffusion <= {} images", PARVIN_SEEDS.count(), worst.0, h + w + 2, worst.1))
}

fn fresh_decrypts(o: &mut LocalOracle, key: &KeyMaterial, seed: u64) -> Result<bool, String> {
    let (h, w) = o.dims();
    let p = Image::new(h, w, ByteStream::new(seed ^ 0xF00D).bytes(h * w)).map_err(e2s)?;
    let c = o.encrypt(&p).map_err(e2s)?;
    Ok(decrypt(&c, key).map_err(e2s)? == p)
}

fn yang_cp() -> Check {
    let (h, w) = (16, 16);
    let o = run_attack(AttackModel::ChosenPlaintext, CipherKind::Yang, h, w, YANG_SEED, YANG_SEED, 0).map_err(e2s)?;
    let truth = key_schedule(Seed::new(YANG_SEED, CipherKind::Yang), h, w).map_err(e2s)?;
    let (d2, d3) = (o.diff_last_two.unwrap_or(0), o.diff_last_three.unwrap_or(0));
    let pq = o.permutation_queries.unwrap_or(u64::MAX);
    let summary = format!(
        "diff sets {d2}/{d3}, permutation queries {pq} (bound {}), total {}, recovery {:.1}%, exact {}",
        2 * (h + w),
        o.queries,
        o.recovery_rate,
        o.exact_decryption
    );
    ensure((d2, d3) == (2, 3), summary.clone())?;
    ensure(o.key.u.as_ref() == Some(&truth.u) && o.key.v.as_ref() == Some(&truth.v), summary.clone())?;
    ensure(pq <= 2 * (h + w) as u64 && o.exact_decryption && o.recovery_rate == 100.0, summary.clone())?;
    Ok(summary)
}

fn norouzi_cp() -> Check {
    let (h, w) = (16, 16);
    let bound = NOROUZI_QUERY_FACTOR * (h * w) as u64;
    let mut most = 0;
    for seed in NOROUZI_SEEDS {
        let o = run_attack(AttackModel::ChosenPlaintext, CipherKind::Norouzi, h, w, seed, seed, 0).map_err(e2s)?;
        ensure(o.recovery_rate == 100.0 && o.exact_decryption, format!("seed {seed}: recovery {:.2}%", o.recovery_rate))?;
        ensure(o.queries <= bound, format!("seed {seed}: {} queries", o.queries))?;
        most = most.max(o.queries);
    }
    Ok(format!("{} keys exact, at most {most} queries (bound {bound})", NOROUZI_SEEDS.count()))
}

fn round_trips() -> Check {
    let mut rng = ByteStream::new(SUITE_SEED);
    let mut cases = 0;
    for _ in 0..300 {
        let (h, w) = (2 + rng.below(15) as usize, 2 + rng.below(15) as usize);
        let seed = u64::from(rng.next_u32());
        let p = Image::new(h, w, rng.bytes(h * w)).map_err(e2s)?;
        for cipher in CipherKind::ALL {
            let km = key_schedule(Seed::new(seed, cipher), h, w).map_err(e2s)?;
            let c = encrypt(&p, &km).map_err(e2s)?;
            ensure(decrypt(&c, &km).map_err(e2s)? == p, format!("{cipher} {h}x{w} seed {seed}: round trip"))?;
            cases += 1;
        }
        let pk = key_schedule(Seed::new(seed, CipherKind::Parvin), h, w).map_err(e2s)?;
        let mut flipped = pk.clone();
        for k in flipped.keystream.iter_mut().skip(1) {
            *k ^= 0x80;
        }
        ensure(encrypt(&p, &pk).map_err(e2s)? == encrypt(&p, &flipped).map_err(e2s)?, format!("parvin msb {h}x{w} seed {seed}"))?;
        let nk = key_schedule(Seed::new(seed, CipherKind::Norouzi), h, w).map_err(e2s)?;
        let yk = KeyMaterial { cipher: CipherKind::Yang, u: (1..=w as u32).collect(), v: (1..=h as u32).collect(), ..nk.clone() };
        ensure(encrypt(&p, &nk).map_err(e2s)? == encrypt(&p, &yk).map_err(e2s)?, format!("yang identity {h}x{w} seed {seed}"))?;
        cases += 2;
    }
    Ok(format!("{cases} checks, 0 violations"))
}

fn remote() -> Check {
    let runs = [
        (CipherKind::Parvin, AttackModel::ChosenPlaintext, 16),
        (CipherKind::Norouzi, AttackModel::ChosenPlaintext, 16),
        (CipherKind::Yang, AttackModel::ChosenPlaintext, 16),
        (CipherKind::Norouzi, AttackModel::KnownPlaintext, 32),
    ];
    for (cipher, model, n) in runs {
        let key_seed = 40 + n as u64;
        let listener = TcpListener::bind("127.0.0.1:0").map_err(e2s)?;
        let addr = listener.local_addr().map_err(e2s)?;
        let server = std::thread::spawn(move || -> dealab::Result<u64> {
            let mut o = LocalOracle::new(Seed::new(key_seed, cipher), n, n, model)?;
            serve(&listener, &mut o, Some(1))?;
            Ok(o.query_count())
        });
        let mut tcp = TcpOracle::connect(addr).map_err(e2s)?;
        let (rk, _) = attack_oracle(&mut tcp, cipher, 7, 3, None).map_err(e2s)?;
        drop(tcp);
        let served = server.join().map_err(|_| "server panicked".to_string())?.map_err(e2s)?;

        let mut local = LocalOracle::new(Seed::new(key_seed, cipher), n, n, model).map_err(e2s)?;
        let (lk, _) = attack_oracle(&mut local, cipher, 7, 3, None).map_err(e2s)?;
        let (a, b) = (serde_json::to_vec(&rk).map_err(e2s)?, serde_json::to_vec(&lk).map_err(e2s)?);
        ensure(a == b, format!("{cipher} {model}: recovered keys differ"))?;
        ensure(served == local.query_count(), format!("{cipher} {model}: {served} vs {} queries", local.query_count()))?;
    }
    Ok("parvin/norouzi/yang cp and norouzi kp byte-identical".into())
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Check); 10] = [
        (1, "key and carry tables", Duration::from_secs(1), tables),
        (2, "two chosen queries pin k mod 128", Duration::from_secs(1), theorem1),
        (3, "trailing ones determine low bits", Duration::from_secs(30), theorem2),
        (4, "confirmation probability curve", Duration::from_secs(60), curve),
        (5, "norouzi known-plaintext recovery 64x64", Duration::from_secs(120), table3),
        (6, "parvin chosen-plaintext 32x32", Duration::from_secs(60), parvin_cp),
        (7, "yang chosen-plaintext 16x16", Duration::from_secs(60), yang_cp),
        (8, "norouzi chosen-plaintext 16x16", Duration::from_secs(60), norouzi_cp),
        (9, "round trips and key equivalences", Duration::from_secs(30), round_trips),
        (10, "remote oracle equivalence", Duration::from_secs(60), remote),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {took:?}, limit {limit:?}")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!("{} [{id:>2}] {name}: {detail} ({:.2?})", if ok { "PASS" } else { "FAIL" }, took);
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
