//! `qca`: build, mutate, verify and export quantum seeds.
//!
//! Exit codes: 0 success, 1 an invariant or check failed, 2 bad input,
//! I/O or engine error.

mod cache;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use log::debug;

use qcluster::cartan::CartanDatum;
use qcluster::cluster::{check_compatible, ClusterError, QuantumSeed};
use qcluster::gls::{build_initial_seed, parity_violation, weight_balance_violation};
use qcluster::serial::{parse_word, CartanDoc, SeedDoc};
use qcluster::verify::{parse_checks, plan_sequences, run_suite, Check, SequencePlan};

use cache::{write_atomic, Cache};

#[derive(Parser)]
#[command(name = "qca", version, about = "Exact quantum cluster algebra seeds from reduced words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the initial seed of a reduced word.
    Build {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Apply a mutation sequence.
    Mutate {
        #[command(flatten)]
        source: Source,
        /// Mutation directions, 1-based, applied left to right.
        #[arg(long, value_name = "CSV")]
        seq: String,
        #[command(flatten)]
        out: Output,
    },
    /// Run the verification suite and write a JSON report.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Check names, or `all`.
        #[arg(long, value_name = "CSV", default_value = "all")]
        checks: String,
        /// Enumerate every sequence up to this length.
        #[arg(long, value_name = "N", default_value_t = 4)]
        depth: usize,
        /// Seed for the additional random sequences.
        #[arg(long, value_name = "N", default_value_t = 0)]
        rng_seed: u64,
        /// Explicit sequence to check instead of the enumeration.
        #[arg(long, value_name = "CSV")]
        seq: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Write the seed document, optionally with global-basis normalization.
    Export {
        #[command(flatten)]
        source: Source,
        /// Multiply each variable by v^{-(d_i,d_i)/2}.
        #[arg(long)]
        global_basis_normalization: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Print a summary of a seed.
    Info {
        #[command(flatten)]
        source: Source,
    },
}

/// A seed file, or a Cartan matrix plus a word to build from.
#[derive(Args)]
struct Source {
    /// JSON file `{"cartan": [[...]]}`, optionally with `"word"`.
    #[arg(long, value_name = "PATH")]
    cartan: Option<PathBuf>,
    /// Reduced word, 1-based letters.
    #[arg(long, value_name = "CSV")]
    word: Option<String>,
    /// Seed document.
    #[arg(long, value_name = "PATH", conflicts_with = "word")]
    seed: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    /// Output file; standard output if omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// An error with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Self { code: 2, error: e.into() }
    }
}

fn invariant(error: anyhow::Error) -> Failure {
    Failure { code: 1, error }
}

type Result<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Build { source, out } => build(&source, &out),
        Command::Mutate { source, seq, out } => mutate(&source, &seq, &out),
        Command::Verify { source, checks, depth, rng_seed, seq, out } => {
            verify(&source, &checks, depth, rng_seed, seq.as_deref(), &out)
        }
        Command::Export { source, global_basis_normalization, out } => export(&source, global_basis_normalization, &out),
        Command::Info { source } => info(&source),
    }
}

fn parse_csv(field: &str, csv: &str) -> anyhow::Result<Vec<usize>> {
    csv.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| anyhow!("field `{field}`: `{s}` is not a positive integer")))
        .collect()
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: &Output, contents: &str) -> Result<()> {
    match &out.out {
        Some(path) => write_atomic(path, contents)?,
        None => print!("{contents}"),
    }
    Ok(())
}

/// A resolved input: the seed document, its Cartan datum and the cache identity.
struct Loaded {
    doc: SeedDoc,
    seed: QuantumSeed,
    cartan: Option<CartanDatum>,
    identity: serde_json::Value,
}

fn load_cartan(path: &Path) -> anyhow::Result<(CartanDatum, CartanDoc)> {
    let doc = CartanDoc::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok((doc.datum()?, doc))
}

fn load(source: &Source) -> Result<Loaded> {
    if let Some(path) = &source.seed {
        let doc = SeedDoc::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        let seed = doc.to_seed()?;
        let cartan = match &source.cartan {
            Some(p) => Some(load_cartan(p)?.0),
            None => doc.cartan_datum()?,
        };
        let identity = serde_json::json!({ "seed": serde_json::to_value(&doc).map_err(anyhow::Error::from)? });
        return Ok(Loaded { doc, seed, cartan, identity });
    }
    let path = source.cartan.as_ref().ok_or_else(|| anyhow!("either --seed or --cartan is required"))?;
    let (cartan, cdoc) = load_cartan(path)?;
    let letters = match (&source.word, &cdoc.word) {
        (Some(csv), _) => parse_csv("word", csv)?,
        (None, Some(w)) => w.clone(),
        (None, None) => return Err(anyhow!("field `word`: missing (pass --word or add it to the Cartan file)").into()),
    };
    let word = parse_word(&letters, &cartan)?;
    let g = build_initial_seed(&cartan, &word).map_err(|e| anyhow!("field `word`: {e}"))?;
    let doc = SeedDoc::from_gls(&cartan, &g);
    let identity = serde_json::json!({ "cartan": cartan.matrix(), "word": letters });
    Ok(Loaded { doc, seed: g.seed, cartan: Some(cartan), identity })
}

fn status(result: Option<String>) -> String {
    result.map_or_else(|| "ok".to_string(), |d| format!("FAIL ({d})"))
}

fn summary(loaded: &Loaded) -> String {
    let seed = &loaded.seed;
    let degree = match check_compatible(seed.l(), seed.b()) {
        Ok(Some(d)) => d.to_string(),
        Ok(None) => "-".to_string(),
        Err(e) => format!("FAIL ({e})"),
    };
    let mut lines = vec![
        format!("rank: {}", loaded.cartan.as_ref().map_or("-".to_string(), |c| c.rank().to_string())),
        format!("r: {}", seed.rank()),
        format!("|K_ex|: {}", seed.exchangeable().len()),
        format!("d: {degree}"),
    ];
    if let Some(c) = &loaded.cartan {
        lines.push(format!("parity: {}", status(parity_violation(c, seed))));
    }
    lines.push(format!("weight_balance: {}", status(weight_balance_violation(seed))));
    lines.push(format!("q_commuting: {}", status(seed.check_q_commuting().err().map(|e| e.to_string()))));
    lines.push(format!("homogeneity: {}", status(seed.check_homogeneity().err().map(|e| e.to_string()))));
    lines.join("\n") + "\n"
}

fn build(source: &Source, out: &Output) -> Result<u8> {
    if source.seed.is_some() {
        return Err(anyhow!("build takes --cartan and --word, not --seed").into());
    }
    let loaded = load(source)?;
    emit(out, &loaded.doc.to_json())?;
    eprint!("{}", summary(&loaded));
    Ok(0)
}

fn mutate(source: &Source, seq: &str, out: &Output) -> Result<u8> {
    let loaded = load(source)?;
    let seq1 = parse_csv("seq", seq)?;
    let k = loaded.seed.rank();
    if let Some(&bad) = seq1.iter().find(|&&s| s == 0 || s > k) {
        return Err(anyhow!("field `seq`: direction {bad} is outside 1..={k}").into());
    }
    let seq0: Vec<usize> = seq1.iter().map(|s| s - 1).collect();
    let key = Cache::key(&loaded.identity, &seq1);
    let cache = Cache::from_env();
    if let Some(hit) = cache.as_ref().and_then(|c| c.get(&key)) {
        if let Ok(doc) = SeedDoc::parse(&hit) {
            if doc.to_seed().is_ok() && doc.to_json() == hit {
                eprintln!("cache hit: {key}");
                emit(out, &hit)?;
                return Ok(0);
            }
        }
        debug!("ignoring unreadable cache entry {key}");
    }
    let mutated = loaded.seed.mutate_seq(&seq0).map_err(|e| match e {
        ClusterError::NotExchangeable { k } => Failure::from(anyhow!("field `seq`: direction {} is frozen", k + 1)),
        ClusterError::Shape(_) => Failure::from(anyhow::Error::from(e)),
        other => invariant(anyhow::Error::from(other).context("mutation failed")),
    })?;
    let doc = loaded.doc.with_seed(&mutated);
    let json = doc.to_json();
    if let Some(c) = &cache {
        if let Err(e) = c.put(&key, &json) {
            log::warn!("could not write cache entry: {e:#}");
        }
    }
    emit(out, &json)?;
    eprintln!("mutated along {seq}: {} variables, history length {}", mutated.rank(), mutated.history().len());
    Ok(0)
}

fn verify(source: &Source, checks: &str, depth: usize, rng_seed: u64, seq: Option<&str>, out: &Output) -> Result<u8> {
    let checks: BTreeSet<Check> = parse_checks(checks).map_err(|e| anyhow!("field `checks`: {e}"))?;
    let loaded = load(source)?;
    let cartan = loaded
        .cartan
        .clone()
        .ok_or_else(|| anyhow!("field `cartan`: the seed has no Cartan matrix; pass --cartan"))?;
    let seed = &loaded.seed;
    let (sequences, recorded_seed) = match seq {
        Some(csv) => {
            let seq1 = parse_csv("seq", csv)?;
            if let Some(&bad) = seq1.iter().find(|&&s| s == 0 || s > seed.rank()) {
                return Err(anyhow!("field `seq`: direction {bad} is outside 1..={}", seed.rank()).into());
            }
            (vec![seq1.iter().map(|s| s - 1).collect()], None)
        }
        None => (plan_sequences(seed, &SequencePlan { depth, rng_seed, ..SequencePlan::default() }), Some(rng_seed)),
    };
    let degree = if loaded.doc.gls.is_some() { Some(2) } else { check_compatible(seed.l(), seed.b()).unwrap_or(Some(2)) };
    let report = run_suite(&cartan, seed, degree, &sequences, &checks, recorded_seed);
    emit(out, &report.to_json())?;
    for (name, outcome) in &report.checks {
        let t = report.timings.get(name).map_or(0.0, |d| d.as_secs_f64() * 1e3);
        eprintln!("{name}: {:?} ({} evaluations, {t:.1} ms)", outcome.status, outcome.evaluations);
    }
    if report.all_pass() {
        eprintln!("all checks passed on {} sequences", report.sequences);
        Ok(0)
    } else {
        eprintln!("failing checks: {}", report.failing().join(", "));
        Ok(1)
    }
}

fn export(source: &Source, normalize: bool, out: &Output) -> Result<u8> {
    let loaded = load(source)?;
    let doc = loaded.doc.export(normalize)?;
    emit(out, &doc.to_json())?;
    Ok(0)
}

fn info(source: &Source) -> Result<u8> {
    let loaded = load(source)?;
    let seed = &loaded.seed;
    let mut text = summary(&loaded);
    text.push_str(&format!(
        "exchangeable: {:?}\nhistory: {:?}\n",
        seed.exchangeable().iter().map(|k| k + 1).collect::<Vec<_>>(),
        seed.history().iter().map(|k| k + 1).collect::<Vec<_>>()
    ));
    for (i, (x, d)) in seed.vars().iter().zip(seed.d()).enumerate() {
        text.push_str(&format!("x{}: {} terms, weight {d}\n", i + 1, x.num_terms()));
    }
    print!("{text}");
    if text.contains("FAIL") {
        return Err(invariant(anyhow!("the seed violates an invariant")));
    }
    Ok(0)
}
