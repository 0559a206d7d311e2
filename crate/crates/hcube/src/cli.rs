//! Subcommands. Each returns the text destined for stdout; diagnostics
//! (progress, timings, warnings) go to stderr.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use hcube_core::integrity::{
    lemma_audit, naive_baseline, peel, rho, verify, IntegrityCertificate, PeelConfig,
    DEFAULT_SAMPLES,
};
use hcube_core::matching::{
    count_good, default_a_size, enumerate_induced_matchings, phi, reconstruct, GoodMatchingParams,
    InducedMatching,
};
use hcube_core::oracles::{
    bound_report, exact_conn, exact_exvc, exact_indmat, exact_m_sharded, OracleConfig,
    OracleOutcome, Shard, DEFAULT_BUDGET,
};
use hcube_core::{is_maximal, vc_dim, vc_report, ExactCount, Family, MAX_DIM};

use crate::error::CliError;
use crate::format::{parse_certificate, parse_family, parse_matchings, write_certificate};
use crate::report::{Report, Table};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "hcube",
    version,
    about = "VC-dimension families and integrity of the hypercube"
)]
pub struct Cli {
    /// Largest ambient dimension any command accepts.
    #[arg(long, global = true, default_value_t = MAX_DIM)]
    pub max_n: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// VC dimension, |Sh(F)|, extremality and maximality of a family file.
    Vc { file: PathBuf },
    /// Exact brute-force counts.
    Count {
        kind: CountKind,
        n: u32,
        /// `k` for m, exvc, indmat and good; the subgraph order for conn.
        k_or_m: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        csv: bool,
        /// Shards for the m oracle; totals do not depend on it.
        #[arg(long, default_value_t = 1)]
        threads: u64,
        /// epsilon as `p/q` for `good`.
        #[arg(long)]
        eps: Option<Ratio>,
    },
    /// Runs phi over induced matchings and checks injectivity, maximality
    /// and the round trip through reconstruct.
    Inject {
        n: Option<u32>,
        k: Option<u32>,
        /// Matching file to use instead of the full enumeration.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Greedy sphere peeling; writes a certificate with --out.
    Peel {
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audits a certificate file.
    Verify { file: PathBuf },
    /// Tables over a range of n: `A`, `A..B`, `A..B:STEP` or `A..B*FACTOR`.
    Sweep {
        kind: SweepKind,
        range: NRange,
        #[arg(long)]
        csv: bool,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        eps: Option<Ratio>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountKind {
    M,
    Exvc,
    Indmat,
    Conn,
    Good,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Lemma,
    Rho,
    Bounds,
}

/// `p/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl FromStr for Ratio {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (p, q) = s.split_once('/').ok_or("expected p/q")?;
        let num = p
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator {p:?}"))?;
        let den: u64 = q
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator {q:?}"))?;
        if den == 0 {
            return Err("zero denominator".into());
        }
        Ok(Ratio { num, den })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Add(u64),
    Mul(u64),
}

/// Inclusive range of `n` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    start: u64,
    end: u64,
    step: Step,
}

impl NRange {
    pub fn values(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut n = self.start;
        while n <= self.end {
            out.push(n);
            n = match self.step {
                Step::Add(s) => n + s,
                Step::Mul(f) => n * f,
            };
        }
        out
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad number {t:?}"))
        };
        let Some((a, rest)) = s.split_once("..") else {
            let v = num(s)?;
            return Ok(NRange {
                start: v,
                end: v,
                step: Step::Add(1),
            });
        };
        let (b, step) = if let Some((b, st)) = rest.split_once(':') {
            (b, Step::Add(num(st)?))
        } else if let Some((b, f)) = rest.split_once('*') {
            (b, Step::Mul(num(f)?))
        } else {
            (rest, Step::Add(1))
        };
        let (start, end) = (num(a)?, num(b)?);
        match step {
            Step::Add(0) => return Err("step must be positive".into()),
            Step::Mul(f) if f < 2 => return Err("factor must be at least 2".into()),
            Step::Mul(_) if start == 0 => return Err("geometric range cannot start at 0".into()),
            _ => {}
        }
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(NRange { start, end, step })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn guard_n(n: u64, max_n: u32) -> Result<(), CliError> {
    if max_n > MAX_DIM {
        return Err(CliError::Input(format!("--max-n cannot exceed {MAX_DIM}")));
    }
    if n > u64::from(max_n) {
        return Err(CliError::Resource(format!(
            "resource guard `max-n` exceeded: n={n}, limit {max_n}"
        )));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    let start = Instant::now();
    let out = match &cli.command {
        Command::Vc { file } => cmd_vc(file, cli.max_n),
        Command::Count {
            kind,
            n,
            k_or_m,
            budget,
            csv,
            threads,
            eps,
        } => cmd_count(*kind, *n, *k_or_m, *budget, *csv, *threads, *eps, cli.max_n),
        Command::Inject { n, k, file } => cmd_inject(*n, *k, file.as_deref(), cli.max_n),
        Command::Peel {
            n,
            seed,
            samples,
            out,
        } => cmd_peel(
            *n,
            &PeelConfig {
                samples: *samples,
                seed: *seed,
            },
            out.as_deref(),
            cli.max_n,
        ),
        Command::Verify { file } => cmd_verify(file),
        Command::Sweep {
            kind,
            range,
            csv,
            k,
            eps,
            seed,
            samples,
        } => cmd_sweep(
            *kind,
            range,
            *csv,
            *k,
            *eps,
            &PeelConfig {
                samples: *samples,
                seed: *seed,
            },
            cli.max_n,
        ),
    };
    eprintln!("elapsed_ms={}", start.elapsed().as_millis());
    out
}

pub fn cmd_vc(file: &Path, max_n: u32) -> Result<String, CliError> {
    let f = parse_family(&read(file)?)?;
    guard_n(f.n().into(), max_n)?;
    let r = vc_report(&f);
    let mut rep = Report::new("vc");
    rep.push("n", f.n())
        .push("size", f.len())
        .push("vc", r.vc)
        .push("shattered", r.shattered.len())
        .push("extremal", r.extremal)
        .push("maximal", r.maximal)
        .push("version", VERSION);
    Ok(rep.render())
}

/// `m(n,k)` split across `threads` shards.
pub fn count_m_parallel(
    n: u32,
    k: u32,
    cfg: &OracleConfig,
    threads: u64,
) -> Result<OracleOutcome, CliError> {
    if threads == 0 {
        return Err(CliError::Input("--threads must be positive".into()));
    }
    let parts: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|index| {
                s.spawn(move || {
                    let shard = Shard {
                        index,
                        count: threads,
                    };
                    exact_m_sharded(n, k, cfg, shard, &mut |done| {
                        eprintln!("progress shard={index} candidates={done}");
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("shard panicked"))
            .collect()
    });
    let mut count = ExactCount::zero();
    let mut candidates = 0;
    for p in parts {
        let p = p?;
        count += &p.count;
        candidates += p.candidates;
    }
    Ok(OracleOutcome { count, candidates })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_count(
    kind: CountKind,
    n: u32,
    k_or_m: u32,
    budget: u64,
    csv: bool,
    threads: u64,
    eps: Option<Ratio>,
    max_n: u32,
) -> Result<String, CliError> {
    guard_n(n.into(), max_n)?;
    let cfg = OracleConfig {
        budget,
        ..OracleConfig::default()
    };
    let start = Instant::now();
    let mut extra = None;
    let outcome = match kind {
        CountKind::M => count_m_parallel(n, k_or_m, &cfg, threads)?,
        CountKind::Exvc => exact_exvc(n, k_or_m, &cfg)?,
        CountKind::Indmat => exact_indmat(n, k_or_m, &cfg)?,
        CountKind::Conn => exact_conn(n, k_or_m, &cfg)?,
        CountKind::Good => {
            let p = match eps {
                Some(r) => {
                    let num = u32::try_from(r.num)
                        .map_err(|_| CliError::Input("epsilon too large".into()))?;
                    let den = u32::try_from(r.den)
                        .map_err(|_| CliError::Input("epsilon too large".into()))?;
                    GoodMatchingParams::new(n, k_or_m, num, den)?
                }
                None => GoodMatchingParams::with_a_size(n, k_or_m, default_a_size(n, k_or_m))?,
            };
            extra = Some(p.a_size());
            OracleOutcome {
                count: count_good(&p),
                candidates: 0,
            }
        }
    };
    let elapsed = start.elapsed().as_millis();
    if csv {
        let mut t = Table::new(&["n", "k_or_m", "count", "candidates_examined", "elapsed_ms"]);
        t.row(vec![
            n.to_string(),
            k_or_m.to_string(),
            outcome.count.to_string(),
            outcome.candidates.to_string(),
            elapsed.to_string(),
        ]);
        return Ok(t.to_csv());
    }
    let mut rep = Report::new("count");
    rep.push("kind", format!("{kind:?}").to_lowercase())
        .push("n", n)
        .push(if kind == CountKind::Conn { "m" } else { "k" }, k_or_m);
    if let Some(a) = extra {
        rep.push("eps_n", a);
    }
    rep.push("count", &outcome.count)
        .push("candidates_examined", outcome.candidates)
        .push("budget", budget)
        .push("version", VERSION);
    Ok(rep.render())
}

/// Injectivity, image and round-trip checks of phi over a matching set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InjectSummary {
    pub matchings: usize,
    pub distinct_images: usize,
    pub all_maximal: bool,
    pub all_vc_exact: bool,
    pub roundtrip: bool,
}

impl InjectSummary {
    pub fn injective(&self) -> bool {
        self.distinct_images == self.matchings
    }
}

pub fn inject_summary<I>(matchings: I) -> Result<InjectSummary, CliError>
where
    I: IntoIterator<Item = InducedMatching>,
{
    let mut images: HashSet<Family> = HashSet::new();
    let mut s = InjectSummary {
        matchings: 0,
        distinct_images: 0,
        all_maximal: true,
        all_vc_exact: true,
        roundtrip: true,
    };
    for (i, m) in matchings.into_iter().enumerate() {
        let f = phi(&m).map_err(|e| CliError::Input(format!("matching {i}: {e}")))?;
        s.matchings += 1;
        s.all_maximal &= is_maximal(&f)?;
        s.all_vc_exact &= vc_dim(&f) == m.k() as i32;
        s.roundtrip &= reconstruct(&f, m.k()).is_ok_and(|back| back == m);
        images.insert(f);
    }
    s.distinct_images = images.len();
    Ok(s)
}

pub fn cmd_inject(
    n: Option<u32>,
    k: Option<u32>,
    file: Option<&Path>,
    max_n: u32,
) -> Result<String, CliError> {
    let mut rep = Report::new("inject");
    let summary = match (file, n, k) {
        (Some(path), None, None) => {
            let ms = parse_matchings(&read(path)?)?;
            for m in &ms {
                guard_n(m.n().into(), max_n)?;
            }
            rep.push("source", "file");
            inject_summary(ms)?
        }
        (None, Some(n), Some(k)) => {
            guard_n(n.into(), max_n)?;
            rep.push("source", "enumerated").push("n", n).push("k", k);
            inject_summary(enumerate_induced_matchings(n, k)?)?
        }
        _ => return Err(CliError::Input("give either `n k` or --file".into())),
    };
    rep.push("matchings", summary.matchings)
        .push("distinct_images", summary.distinct_images)
        .push("injective", summary.injective())
        .push("all_maximal", summary.all_maximal)
        .push("all_vc_exact", summary.all_vc_exact)
        .push("roundtrip", summary.roundtrip)
        .push("version", VERSION);
    Ok(rep.render())
}

fn certificate_report(command: &str, c: &IntegrityCertificate, value: u64) -> Report {
    let mut rep = Report::new(command);
    rep.push("n", c.params.n)
        .push("alpha", format!("{:?}", c.params.alpha))
        .push("r0", c.params.r0)
        .push("seed", c.seed)
        .push("samples", c.samples)
        .push("steps", c.steps.len())
        .push("separator_size", c.separator_size)
        .push("max_component", c.max_component)
        .push("value", value)
        .push("rho", rho(c.n(), value));
    rep
}

pub fn cmd_peel(
    n: u32,
    cfg: &PeelConfig,
    out: Option<&Path>,
    max_n: u32,
) -> Result<String, CliError> {
    guard_n(n.into(), max_n)?;
    if n < 3 {
        return Err(CliError::Input(format!("peel needs n >= 3, got {n}")));
    }
    let cert = peel(n, cfg)?;
    if cert.small_radius() {
        eprintln!(
            "warning: r0={} < 2, peeling degrades to near-single-vertex cuts",
            cert.params.r0
        );
    }
    if let Some(path) = out {
        fs::write(path, write_certificate(&cert))?;
    }
    let mut rep = certificate_report("peel", &cert, cert.value);
    rep.push("version", VERSION);
    Ok(rep.render())
}

pub fn cmd_verify(file: &Path) -> Result<String, CliError> {
    let cert = parse_certificate(&read(file)?)?;
    let value = verify(&cert)?;
    let mut rep = certificate_report("verify", &cert, value);
    rep.push("verified", true).push("version", VERSION);
    Ok(rep.render())
}

fn band(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

/// One row per `n`: peel, verify, compare with the middle-layer cut.
pub fn rho_table(ns: &[u64], cfg: &PeelConfig, max_n: u32) -> Result<(Table, Vec<f64>), CliError> {
    let mut t = Table::new(&[
        "n",
        "r0",
        "steps",
        "separator",
        "max_component",
        "value",
        "rho",
        "naive_baseline",
    ]);
    let mut rhos = Vec::new();
    for &n in ns {
        guard_n(n, max_n)?;
        let n = n as u32;
        let cert = peel(n, cfg)?;
        let value = verify(&cert)?;
        let naive = naive_baseline(n)?;
        let r = rho(n, value);
        rhos.push(r);
        t.row(vec![
            n.to_string(),
            cert.params.r0.to_string(),
            cert.steps.len().to_string(),
            cert.separator_size.to_string(),
            cert.max_component.to_string(),
            value.to_string(),
            r.to_string(),
            naive.value.to_string(),
        ]);
    }
    Ok((t, rhos))
}

pub fn cmd_sweep(
    kind: SweepKind,
    range: &NRange,
    csv: bool,
    k: u64,
    eps: Option<Ratio>,
    cfg: &PeelConfig,
    max_n: u32,
) -> Result<String, CliError> {
    let ns = range.values();
    let mut summary = Report::new("sweep");
    let table = match kind {
        SweepKind::Lemma => {
            let rows = lemma_audit(&ns)?;
            let mut t = Table::new(&["n", "alpha", "r0", "r1", "r2", "r3"]);
            for r in &rows {
                t.row(vec![
                    r.n.to_string(),
                    r.alpha.to_string(),
                    r.r0.to_string(),
                    r.r1.to_string(),
                    r.r2.to_string(),
                    r.r3.to_string(),
                ]);
            }
            let col = |f: fn(&hcube_core::integrity::LemmaRow) -> f64| -> Vec<f64> {
                rows.iter().map(f).collect()
            };
            summary
                .push("kind", "lemma")
                .push("r1_band", band(&col(|r| r.r1)))
                .push("r2_band", band(&col(|r| r.r2)))
                .push("r3_band", band(&col(|r| r.r3)));
            t
        }
        SweepKind::Rho => {
            let (t, rhos) = rho_table(&ns, cfg, max_n)?;
            summary
                .push("kind", "rho")
                .push("seed", cfg.seed)
                .push("samples", cfg.samples)
                .push(
                    "rho_min",
                    rhos.iter().cloned().fold(f64::INFINITY, f64::min),
                )
                .push(
                    "rho_max",
                    rhos.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                )
                .push("rho_band", band(&rhos));
            t
        }
        SweepKind::Bounds => {
            let mut t = Table::new(&[
                "n",
                "k",
                "eps_n",
                "log_lower",
                "log_upper",
                "log_target",
                "lower_le_upper",
            ]);
            let mut all_ok = true;
            for &n in &ns {
                let (num, den) = match eps {
                    Some(r) => (r.num, r.den),
                    None => {
                        let n32 =
                            u32::try_from(n).map_err(|_| CliError::Input("n too large".into()))?;
                        let k32 =
                            u32::try_from(k).map_err(|_| CliError::Input("k too large".into()))?;
                        (u64::from(default_a_size(n32, k32)), n)
                    }
                };
                let b = bound_report(n, k, num, den)?;
                let ok = b.log_lower <= b.log_upper;
                all_ok &= ok;
                t.row(vec![
                    n.to_string(),
                    k.to_string(),
                    b.a_size.to_string(),
                    b.log_lower.to_string(),
                    b.log_upper.to_string(),
                    b.log_target.to_string(),
                    ok.to_string(),
                ]);
            }
            summary
                .push("kind", "bounds")
                .push("k", k)
                .push("all_lower_le_upper", all_ok);
            t
        }
    };
    if csv {
        return Ok(table.to_csv());
    }
    summary.push("rows", ns.len()).push("version", VERSION);
    Ok(format!("{}{}", table.to_lines(), summary.render()))
}
