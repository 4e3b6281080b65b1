use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use cycloperfect::divisor::{self, ClassificationRecord};
use cycloperfect::factorization::{factor as factor_element, FactorizationRecord};
use cycloperfect::mersenne::{self, MersenneRecord, ResidueFilter, ScanOptions};
use cycloperfect::search::{self, Parity, ScanConfig};
use cycloperfect::verify::{self, Suite, VerifyConfig};
use cycloperfect::{QuadInt, RingId};
use serde::Serialize;

use crate::output::Rendered;
use crate::{set_jobs, CliError, Outcome};

fn parse(ring: RingId, text: &str) -> Result<QuadInt, CliError> {
    Ok(QuadInt::parse(ring, text)?)
}

pub fn factor(ring: RingId, text: &str) -> Result<Rendered, CliError> {
    let x = parse(ring, text)?;
    let f = factor_element(&x)?;
    let record = FactorizationRecord::new(&x, &f);
    let mut pretty = format!("{x} = ({})", record.unit);
    for entry in &record.factors {
        match entry.exp {
            1 => write!(pretty, " ({})", entry.prime),
            e => write!(pretty, " ({})^{e}", entry.prime),
        }
        .unwrap();
    }
    Rendered::new(&record, pretty)
}

#[derive(Serialize)]
struct SigmaRecord {
    ring: RingId,
    element: String,
    sigma: String,
    norm: String,
    sigma_norm: String,
}

pub fn sigma(ring: RingId, text: &str) -> Result<Rendered, CliError> {
    let x = parse(ring, text)?;
    let s = divisor::sigma(&x)?;
    let record = SigmaRecord {
        ring,
        element: x.to_string(),
        sigma: s.to_string(),
        norm: x.norm().to_string(),
        sigma_norm: s.norm().to_string(),
    };
    let pretty = format!("sigma({}) = {}  (norms {} -> {})", record.element, record.sigma, record.norm, record.sigma_norm);
    Rendered::new(&record, pretty)
}

pub fn classify(ring: RingId, text: &str, primitive: bool, budget: u128) -> Result<Rendered, CliError> {
    let x = parse(ring, text)?;
    let c = divisor::classify_with_budget(&x, primitive, budget)?;
    let record = ClassificationRecord::from(&c);
    let mut pretty = format!(
        "{}: {}{}{}",
        record.element,
        record.status.as_str(),
        if record.perfect { ", perfect" } else { "" },
        if record.even { ", even" } else { ", odd" },
    );
    if let Some(p) = record.primitive {
        write!(pretty, ", {}", if p { "primitive" } else { "not primitive" }).unwrap();
    }
    Rendered::new(&record, pretty)
}

pub struct MersenneRequest<'a> {
    pub ring: RingId,
    pub max_k: u64,
    pub residue_filter: Option<&'a str>,
    pub cache: Option<&'a Path>,
    pub resume: bool,
    pub witness: bool,
    pub progress: bool,
}

#[derive(Serialize)]
struct WitnessRecord {
    k: u64,
    left: String,
    right: String,
}

#[derive(Serialize)]
struct MersenneReport {
    ring: RingId,
    max_k: u64,
    residue_filter: Option<String>,
    records: Vec<MersenneRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<Vec<WitnessRecord>>,
}

pub fn mersenne(req: MersenneRequest<'_>) -> Result<Rendered, CliError> {
    let filter = req.residue_filter.map(str::parse::<ResidueFilter>).transpose()?;
    let report_progress = |done: usize, total: usize| eprintln!("mersenne: {done}/{total} exponents");
    let opts = ScanOptions {
        filter: filter.clone(),
        cache: req.cache,
        resume: req.resume,
        progress: req.progress.then_some(&report_progress as &(dyn Fn(usize, usize) + Sync)),
    };
    let records = mersenne::scan_with(req.ring, req.max_k, &opts)?;
    let witnesses = req
        .witness
        .then(|| {
            (4..=req.max_k)
                .filter(|&k| mersenne::composite_exponent_witness(req.ring, k).is_ok())
                .map(|k| {
                    let (left, right) = mersenne::composite_exponent_witness(req.ring, k)?;
                    Ok(WitnessRecord {
                        k,
                        left: left.to_string(),
                        right: right.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, cycloperfect::Error>>()
        })
        .transpose()?;

    let mut pretty = format!("{:>6} {:>4} {:>6}  {}\n", "k", "res", "prime", "norm");
    for r in &records {
        writeln!(pretty, "{:>6} {:>4} {:>6}  {}", r.k, r.k_residue, r.is_prime, r.norm).unwrap();
    }
    for w in witnesses.iter().flatten() {
        writeln!(pretty, "k = {}: ({}) * ({})", w.k, w.left, w.right).unwrap();
    }
    let rows = records
        .iter()
        .map(|r| {
            vec![
                r.ring.name().to_string(),
                r.k.to_string(),
                r.element.to_string(),
                r.norm.to_string(),
                r.k_residue.to_string(),
                r.is_prime.to_string(),
                r.prime_exponent_ok.to_string(),
            ]
        })
        .collect();
    let report = MersenneReport {
        ring: req.ring,
        max_k: req.max_k,
        residue_filter: filter.map(|f| f.to_string()),
        records,
        witnesses,
    };
    Rendered::new(&report, pretty)?.with_table(
        &["ring", "k", "element", "norm", "k_residue", "is_prime", "prime_exponent_ok"],
        rows,
    )
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    ring: RingId,
    #[arg(long)]
    max_norm: u64,
    #[arg(long)]
    jobs: Option<usize>,
    /// JSON-lines file of completed batches; rerunning resumes from it.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Classify even elements whose exponent residue already forces abundance.
    #[arg(long)]
    no_prune: bool,
    /// Refuse norm bounds above this.
    #[arg(long, default_value_t = search::DEFAULT_SCAN_LIMIT)]
    limit: u64,
}

pub fn search(args: &SearchArgs, parity: Parity, progress: bool) -> Result<Outcome, CliError> {
    set_jobs(args.jobs)?;
    let report_progress = |done: u64, total: u64| eprintln!("search: a = {done}/{total}");
    let config = ScanConfig {
        prune: !args.no_prune,
        limit: args.limit,
        checkpoint: args.checkpoint.as_deref(),
        progress: progress.then_some(&report_progress as &(dyn Fn(u64, u64) + Sync)),
    };
    let report = search::sector_scan_with(args.ring, args.max_norm, parity, &config)?;
    let record = report.to_record();
    let mut pretty = format!(
        "{} {} elements up to norm {}: scanned {}, pruned {}, {} findings ({} norm-perfect)\n",
        record.ring, record.parity, record.norm_bound, record.scanned, record.pruned,
        record.findings.len(), record.norm_perfect_count,
    );
    for f in &record.findings {
        let c = &f.classification;
        write!(pretty, "  {:<24} {}", c.element, c.status.as_str()).unwrap();
        if c.perfect {
            pretty.push_str(" perfect");
        }
        pretty.push('\n');
    }
    for b in &record.breaches {
        writeln!(pretty, "  BREACH: {b}").unwrap();
    }
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    let rendered = Rendered::new(&record, pretty)?.with_csv(String::from_utf8(csv).expect("csv output is utf-8"));
    Ok(Outcome {
        rendered,
        code: if report.breaches.is_empty() { 0 } else { 2 },
    })
}

#[derive(Serialize)]
struct PrimeSearchReport {
    ring: RingId,
    max_norm: u64,
    primes: Vec<String>,
}

pub fn find_normperfect_primes(ring: RingId, max_norm: u64) -> Result<Rendered, CliError> {
    let primes: Vec<String> = search::find_normperfect_primes(ring, max_norm)?
        .iter()
        .map(ToString::to_string)
        .collect();
    let pretty = if primes.is_empty() {
        format!("no norm-perfect {ring} primes up to norm {max_norm}")
    } else {
        primes.join("\n")
    };
    let rows = primes.iter().map(|p| vec![ring.name().to_string(), p.clone()]).collect();
    Rendered::new(&PrimeSearchReport { ring, max_norm, primes }, pretty)?.with_table(&["ring", "prime"], rows)
}

#[derive(Serialize)]
struct RemarkRow {
    #[serde(flatten)]
    check: search::RemarkCheck,
    holds: bool,
}

pub fn check_remark(max_k: u64) -> Result<Outcome, CliError> {
    let ks: Vec<u64> = mersenne::scan_exponents(RingId::Eisenstein, max_k, None)
        .into_iter()
        .filter(|&k| k > 2)
        .collect();
    let rows: Vec<RemarkRow> = ks
        .into_iter()
        .map(|k| {
            let check = search::check_rational_perfect_remark(k)?;
            Ok(RemarkRow { holds: check.holds(), check })
        })
        .collect::<Result<_, cycloperfect::Error>>()?;
    let all_hold = rows.iter().all(|r| r.holds);
    let mut pretty = String::new();
    for r in &rows {
        writeln!(
            pretty,
            "k = {:>3}: norm-perfect {}, 2^k - 1 prime {}, splits {:?}, holds {}",
            r.check.k, r.check.norm_perfect, r.check.mersenne_prime, r.check.splits_into_conjugates, r.holds
        )
        .unwrap();
    }
    let table = rows
        .iter()
        .map(|r| {
            vec![
                r.check.k.to_string(),
                r.check.norm_perfect.to_string(),
                r.check.mersenne_prime.to_string(),
                r.check.splits_into_conjugates.map_or(String::new(), |s| s.to_string()),
                r.holds.to_string(),
            ]
        })
        .collect();
    let rendered = Rendered::new(&rows, pretty)?.with_table(
        &["k", "norm_perfect", "mersenne_prime", "splits_into_conjugates", "holds"],
        table,
    )?;
    Ok(Outcome {
        rendered,
        code: if all_hold { 0 } else { 1 },
    })
}

pub fn verify(suite: &str) -> Result<Outcome, CliError> {
    let suite: Suite = suite.parse()?;
    let report = verify::run(suite, &VerifyConfig::default());
    let mut pretty = format!("defaults: {:?}\n", report.defaults);
    for s in &report.suites {
        writeln!(
            pretty,
            "{:<9} {:>7} checks  {:>3} failures  {:.2}s",
            s.suite,
            s.checks_run,
            s.failures.len(),
            s.wall_time_secs
        )
        .unwrap();
        for f in &s.failures {
            writeln!(pretty, "  {} at {}: expected {}, got {}", f.check, f.inputs, f.expected, f.got).unwrap();
        }
    }
    pretty.push_str(if report.passed { "PASS\n" } else { "FAIL\n" });
    Ok(Outcome {
        code: if report.passed { 0 } else { 1 },
        rendered: Rendered::new(&report, pretty)?,
    })
}
