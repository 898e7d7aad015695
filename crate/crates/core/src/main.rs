use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use dealab::attacks::{challenge, AttackModel, LocalOracle, Oracle, RecoveredKey};
use dealab::ciphers::{decrypt, encrypt};
use dealab::experiments::{attack_oracle, challenge_seed, prob_curve, run_attack, theorem1_suite, theorem2_suite};
use dealab::imageio::{load_pgm, save_pgm};
use dealab::keysched::{key_schedule, CipherKind, KeyMaterial, Seed};
use dealab::net::{serve, TcpOracle};
use dealab::report::ExperimentReport;
use dealab::tables::verify_tables;
use serde_json::json;
use std::io::Write;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dealab", version, about = "Key recovery toolkit for modular-addition diffusion image ciphers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug)]
struct Size(usize, usize);

fn parse_size(s: &str) -> Result<Size, String> {
    let (h, w) = s.split_once(['x', 'X']).ok_or("expected HxW")?;
    let h: usize = h.parse().map_err(|_| format!("bad height {h:?}"))?;
    let w: usize = w.parse().map_err(|_| format!("bad width {w:?}"))?;
    Ok(Size(h, w))
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Tables,
    Theorem1,
    Theorem2,
    ProbCurve,
}

#[derive(Subcommand)]
enum Command {
    /// Print the key material for a seed as JSON.
    Keygen {
        #[arg(long, value_parser = parse_cipher)]
        cipher: CipherKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_size)]
        size: Size,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Encrypt(Transform),
    Decrypt(Transform),
    /// Run an invariant suite; exit 1 on the first counterexample.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Monte-Carlo trials (theorem2 samples, prob-curve trials per g).
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// prob-curve: write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Attack a locally instantiated oracle with a hidden key.
    Attack {
        #[arg(long, value_parser = parse_model)]
        model: AttackModel,
        #[arg(long, value_parser = parse_cipher)]
        cipher: CipherKind,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, value_parser = parse_size, default_value = "16x16")]
        size: Size,
        /// Known pairs per trial (known-plaintext only).
        #[arg(long, default_value_t = 3)]
        images: usize,
        /// Trial t uses key seed `seed + t`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Writes `<stem>.json` and `<stem>.csv`.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Serve an encryption oracle over TCP.
    OracleServe {
        #[arg(long, value_parser = parse_cipher)]
        cipher: CipherKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_model)]
        mode: AttackModel,
        #[arg(long, default_value = "127.0.0.1:7878")]
        listen: String,
        #[arg(long, value_parser = parse_size, default_value = "16x16")]
        size: Size,
        #[arg(long)]
        max_connections: Option<usize>,
    },
    /// Attack a remote oracle.
    OracleAttack {
        #[arg(long)]
        connect: String,
        #[arg(long, value_parser = parse_model)]
        model: AttackModel,
        #[arg(long, value_parser = parse_cipher)]
        cipher: CipherKind,
        #[arg(long, default_value_t = 3)]
        images: usize,
        /// Attacker randomness, same meaning as for `attack`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Recovered key as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct Transform {
    #[arg(long, value_parser = parse_cipher)]
    cipher: CipherKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Key material JSON from `keygen`; overrides `--seed`.
    #[arg(long)]
    key: Option<PathBuf>,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn parse_cipher(s: &str) -> Result<CipherKind, String> {
    s.parse().map_err(|e: dealab::Error| e.to_string())
}

fn parse_model(s: &str) -> Result<AttackModel, String> {
    s.parse().map_err(|e: dealab::Error| e.to_string())
}

/// Bad flag combinations; exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Usage(String);

enum Verdict {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) if e.is::<Usage>() => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> anyhow::Result<Verdict> {
    match cmd {
        Command::Keygen { cipher, seed, size, out } => {
            let km = key_schedule(Seed::new(seed, cipher), size.0, size.1)?;
            let text = serde_json::to_string_pretty(&km)?;
            match out {
                Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => println!("{text}"),
            }
        }
        Command::Encrypt(t) => transform(t, encrypt)?,
        Command::Decrypt(t) => transform(t, decrypt)?,
        Command::Verify { suite, trials, seed, csv } => return verify(suite, trials, seed, csv.as_deref()),
        Command::Attack { model, cipher, trials, size, images, seed, report } => {
            check_combination(model, cipher)?;
            attack(model, cipher, trials, size, images, seed, report.as_deref())?;
        }
        Command::OracleServe { cipher, seed, mode, listen, size, max_connections } => {
            let mut oracle = LocalOracle::new(Seed::new(seed, cipher), size.0, size.1, mode)?;
            let listener = TcpListener::bind(&listen).with_context(|| format!("binding {listen}"))?;
            println!("listening on {}", listener.local_addr()?);
            std::io::stdout().flush()?;
            serve(&listener, &mut oracle, max_connections)?;
        }
        Command::OracleAttack { connect, model, cipher, images, seed, out, report } => {
            check_combination(model, cipher)?;
            if model == AttackModel::KnownPlaintext && cipher == CipherKind::Parvin {
                bail!(Usage("the known-plaintext parvin attack needs the shifts; run it locally with `attack`".into()));
            }
            return remote_attack(&connect, model, cipher, images, seed, out.as_deref(), report.as_deref());
        }
    }
    Ok(Verdict::Pass)
}

fn check_combination(model: AttackModel, cipher: CipherKind) -> anyhow::Result<()> {
    if model == AttackModel::KnownPlaintext && cipher == CipherKind::Yang {
        bail!(Usage("no known-plaintext attack for yang; use --model cp".into()));
    }
    Ok(())
}

fn transform(t: Transform, f: fn(&dealab::image::Image, &KeyMaterial) -> dealab::Result<dealab::image::Image>) -> anyhow::Result<()> {
    let img = load_pgm(&t.input).with_context(|| format!("reading {}", t.input.display()))?;
    let km = match &t.key {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let km: KeyMaterial = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
            if km.cipher != t.cipher {
                bail!(Usage(format!("key file is for {}, not {}", km.cipher, t.cipher)));
            }
            km
        }
        None => key_schedule(Seed::new(t.seed, t.cipher), img.height(), img.width())?,
    };
    let res = f(&img, &km)?;
    save_pgm(&t.out, &res).with_context(|| format!("writing {}", t.out.display()))?;
    Ok(())
}

fn verify(suite: Suite, trials: u64, seed: u64, csv: Option<&Path>) -> anyhow::Result<Verdict> {
    let ok = match suite {
        Suite::Tables => {
            let r = verify_tables();
            match r.mismatches.first() {
                None => {
                    println!("tables: {} cells match", r.cells_checked);
                    true
                }
                Some(m) => {
                    println!("tables: {} mismatches, first {m:?}", r.mismatches.len());
                    false
                }
            }
        }
        Suite::Theorem1 => match theorem1_suite(8)? {
            Ok(n) => {
                println!("theorem1: {n} classes pinned by both query pairs");
                true
            }
            Err(e) => {
                println!("theorem1: {e}");
                false
            }
        },
        Suite::Theorem2 => {
            let mut ok = true;
            for r in [theorem2_suite(4, None, seed)?, theorem2_suite(8, Some(trials), seed)?] {
                println!("theorem2: n={} cases={} violations={}", r.bits, r.cases, r.violations);
                if let Some(v) = &r.first_violation {
                    println!("  first: {v}");
                    ok = false;
                }
            }
            ok
        }
        Suite::ProbCurve => {
            let gs: Vec<u32> = (1..=8).collect();
            let pts = prob_curve(trials as usize, &gs, 8, seed)?;
            let mut report = ExperimentReport::new("prob-curve", &["g", "i", "analytic", "empirical"]);
            report.param("trials", trials).param("seed", seed).param("bits", 8);
            let mut worst = 0f64;
            for p in &pts {
                worst = worst.max((p.empirical - p.analytic).abs());
                report.row(vec![json!(p.g), json!(p.i), json!(p.analytic), json!(p.empirical)]);
            }
            report.metric("max_abs_error", worst);
            let text = report.to_csv()?;
            match csv {
                Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            eprintln!("prob-curve: max |empirical - analytic| = {worst:.4}");
            let ok = worst <= 0.02;
            if !ok {
                let p = pts.iter().find(|p| (p.empirical - p.analytic).abs() > 0.02).expect("worst exceeds");
                eprintln!("  first: g={} i={} analytic={:.4} empirical={:.4}", p.g, p.i, p.analytic, p.empirical);
            }
            ok
        }
    };
    Ok(if ok { Verdict::Pass } else { Verdict::Fail })
}

fn attack(
    model: AttackModel,
    cipher: CipherKind,
    trials: u64,
    size: Size,
    images: usize,
    seed: u64,
    report_path: Option<&Path>,
) -> anyhow::Result<()> {
    let mut report = ExperimentReport::new(
        "attack",
        &["trial", "key_seed", "recovery_rate", "queries", "exact_decryption", "diff_last_two", "diff_last_three"],
    );
    report
        .param("model", model)
        .param("cipher", cipher)
        .param("height", size.0)
        .param("width", size.1)
        .param("trials", trials)
        .param("seed", seed);
    if model == AttackModel::KnownPlaintext {
        report.param("images", images);
    }
    let (mut rate_sum, mut query_sum, mut exact) = (0.0, 0u64, 0u64);
    for t in 0..trials {
        let key_seed = seed.wrapping_add(t);
        let o = run_attack(model, cipher, size.0, size.1, key_seed, key_seed, images)?;
        println!(
            "trial {t}: recovery {:.4}%  queries {}  exact decryption {}",
            o.recovery_rate,
            o.queries,
            if o.exact_decryption { "yes" } else { "no" }
        );
        rate_sum += o.recovery_rate;
        query_sum += o.queries;
        exact += u64::from(o.exact_decryption);
        report.row(vec![
            json!(t),
            json!(key_seed),
            json!(o.recovery_rate),
            json!(o.queries),
            json!(o.exact_decryption),
            json!(o.diff_last_two),
            json!(o.diff_last_three),
        ]);
    }
    let n = trials.max(1) as f64;
    report
        .metric("mean_recovery_rate", rate_sum / n)
        .metric("mean_queries", query_sum as f64 / n)
        .metric("exact_decryptions", exact);
    println!("mean recovery {:.4}%  mean queries {:.1}  exact {exact}/{trials}", rate_sum / n, query_sum as f64 / n);
    if let Some(stem) = report_path {
        report.write(stem)?;
    }
    Ok(())
}

fn key_report(key: &RecoveredKey) -> ExperimentReport {
    let mut r = ExperimentReport::new("oracle-attack", &["position", "value", "determined"]);
    for (l, e) in key.keystream.iter().enumerate() {
        r.row(vec![json!(l), json!(e.value.value()), json!(e.determined)]);
    }
    r
}

fn remote_attack(
    addr: &str,
    model: AttackModel,
    cipher: CipherKind,
    images: usize,
    seed: u64,
    out: Option<&Path>,
    report_path: Option<&Path>,
) -> anyhow::Result<Verdict> {
    let mut oracle = TcpOracle::connect(addr).with_context(|| format!("connecting to {addr}"))?;
    if oracle.model() != model {
        bail!(Usage(format!("server runs a {} oracle, not {model}", oracle.model())));
    }
    let (h, w) = oracle.dims();
    let result = attack_oracle(&mut oracle, cipher, seed, images, None);
    let key = match result {
        Ok((key, _)) => key,
        Err(e) => {
            let mut partial = ExperimentReport::new("oracle-attack", &[]);
            partial
                .param("cipher", cipher)
                .param("model", model)
                .metric("status", "aborted")
                .metric("error", e.to_string())
                .metric("queries", oracle.query_count());
            eprintln!("attack aborted after {} queries: {e}", oracle.query_count());
            if let Some(stem) = report_path {
                partial.write(stem)?;
            }
            return Ok(Verdict::Fail);
        }
    };
    let exact = challenge(&mut oracle, &key, challenge_seed(seed))?;
    let remote = oracle.remote_count()?;
    println!(
        "{h}x{w} {cipher} {model}: confirmed {}/{}  queries {}  server count {remote}  exact decryption {}",
        key.confirmed_positions(),
        key.keystream.len(),
        key.queries,
        if exact { "yes" } else { "no" }
    );
    if let Some(p) = out {
        std::fs::write(p, serde_json::to_string_pretty(&key)?).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(stem) = report_path {
        let mut r = key_report(&key);
        r.param("cipher", cipher)
            .param("model", model)
            .param("height", h)
            .param("width", w)
            .param("seed", seed)
            .metric("status", "complete")
            .metric("queries", key.queries)
            .metric("exact_decryption", exact);
        r.write(stem)?;
    }
    Ok(Verdict::Pass)
}
