use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};
use liegrowth::arith::{bigint_serde, PrimeField};
use liegrowth::extremal::{extremal_basis_pipeline, ExtremalError};
use liegrowth::forms::{Covering, FiniteForm};
use liegrowth::growth::{line_growth_experiment, towers, Ball, FiniteAmbient, GrowthError};
use liegrowth::lie::{algebra_to_json, LieAlgebra};
use liegrowth::numfields::{classify_prime, density_scan, gaussian_period_polynomial, independent_family};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::experiments::{
    algebra_for, identity_check_experiment, random_pair_experiment, trial_rng, witt_experiment, RandomPairConfig,
};
use crate::output::{csv_bytes, csv_table, emit, join, json_bytes, Format};
use crate::CliError;

const THREADS_VAR: &str = "LIEGROWTH_THREADS";

#[derive(Parser, Debug)]
#[command(name = "liegrowth", version, about = "Growth and generation experiments in finite simple Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the algebra and check antisymmetry, Jacobi and the twist.
    Construct(Plain),
    /// Exact diameter of a generating set by layer enumeration.
    Diameter(Generated),
    /// Line statistic of the balls until a full line appears.
    LineGrowth(LineGrowth),
    /// Spans of iterated bracket towers.
    Towers(Towers),
    /// Extremal-element basis certificate.
    Extremal(Plain),
    /// Generation rate and diameters of random pairs.
    RandomPairs(RandomPairs),
    /// Explicit expressions in the Witt algebra.
    Witt(Witt),
    /// Period polynomials and inert prime densities.
    Chebotarev(Chebotarev),
    /// Integral covering lattice and its reductions.
    Covering(Plain),
    /// The degree-11 two-variable identity in sl2 and sl3.
    Identity(Identity),
}

#[derive(Args, Debug)]
struct Plain {
    #[command(flatten)]
    common: ExperimentConfig,
    /// JSON config file with the same keys as the flags.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct Generated {
    #[command(flatten)]
    plain: Plain,
    /// Comma-separated elements such as `e,f` or `e1+2*h1`; two random
    /// elements drawn from `--seed` when absent.
    #[arg(long, value_delimiter = ',')]
    gens: Vec<String>,
}

#[derive(Args, Debug)]
struct LineGrowth {
    #[command(flatten)]
    gen: Generated,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
}

#[derive(Args, Debug)]
struct Towers {
    #[command(flatten)]
    gen: Generated,
    /// Pivot elements for the relative towers.
    #[arg(long, value_delimiter = ',')]
    pivot: Vec<String>,
    /// Number of levels; the algebra dimension by default.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
}

#[derive(Args, Debug)]
struct RandomPairs {
    #[command(flatten)]
    plain: Plain,
    /// Exact diameters for this many generating pairs per prime.
    #[arg(long, default_value_t = 10)]
    diameter_samples: usize,
    /// Balls are measured at radius `⌊c ln p⌋`.
    #[arg(long, default_value_t = 1.0)]
    ball_const: f64,
}

#[derive(Args, Debug)]
struct Witt {
    #[command(flatten)]
    plain: Plain,
    /// Random elements expressed for primes above the exhaustive limit.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Args, Debug)]
struct Chebotarev {
    #[command(flatten)]
    plain: Plain,
    /// Source primes of the period polynomials.
    #[arg(long, value_delimiter = ',')]
    q: Vec<u64>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Use the first this many admissible source primes instead of `--q`.
    #[arg(long)]
    family: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    bound: u64,
}

#[derive(Args, Debug)]
struct Identity {
    #[command(flatten)]
    plain: Plain,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

impl Plain {
    fn config(&self, name: &str) -> Result<ExperimentConfig, CliError> {
        let cfg = match &self.config {
            Some(path) => {
                let file = ExperimentConfig::load(path)?;
                if let Some(e) = file.experiment.as_deref().filter(|e| *e != name) {
                    return Err(CliError::Config(format!("config file is for {e}, not {name}")));
                }
                self.common.clone().merged(file)
            }
            None => self.common.clone(),
        };
        Ok(cfg)
    }
}

fn format_or(cfg: &ExperimentConfig, default: Format) -> Format {
    cfg.format.unwrap_or(default)
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_VAR).ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses and runs one command line, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Construct(a) => construct(a.config("construct")?),
        Command::Diameter(a) => diameter_cmd(a.plain.config("diameter")?, &a.gens),
        Command::LineGrowth(a) => line_growth(a.gen.plain.config("line-growth")?, &a.gen.gens, a.eps),
        Command::Towers(a) => towers_cmd(a.gen.plain.config("towers")?, &a),
        Command::Extremal(a) => extremal(a.config("extremal")?),
        Command::RandomPairs(a) => random_pairs(a.plain.config("random-pairs")?, &a),
        Command::Witt(a) => witt(a.plain.config("witt")?, a.samples),
        Command::Chebotarev(a) => chebotarev(a.plain.config("chebotarev")?, &a),
        Command::Covering(a) => covering(a.config("covering")?),
        Command::Identity(a) => identity(a.plain.config("identity")?, a.samples),
    }
}

fn construct(cfg: ExperimentConfig) -> Result<(), CliError> {
    let form = cfg.form()?;
    let p = cfg.single_prime()?;
    let g = algebra_for(&form, p)?;
    g.check_antisymmetry().map_err(|e| CliError::Verification(e.to_string()))?;
    g.check_jacobi().map_err(|e| CliError::Verification(e.to_string()))?;
    if !form.is_split() {
        let ff = FiniteForm::new(&form, p)?;
        ff.theta().verify(ff.ambient()).map_err(|e| CliError::Verification(e.to_string()))?;
    }
    let doc = json!({ "form": form.label(), "p": p, "algebra": algebra_to_json(&g) });
    emit(cfg.out.as_deref(), &json_bytes(&doc)?, &format!("{} over F_{p}: dimension {}, checks passed", form.label(), g.dim()))
}

fn generators(cfg: &ExperimentConfig, g: &LieAlgebra<PrimeField>, gens: &[String]) -> Result<Vec<Vec<u64>>, CliError> {
    if gens.is_empty() {
        let seed = cfg.seed.ok_or_else(|| CliError::Config("give --gens or --seed".into()))?;
        let mut rng = trial_rng(seed, g.ring().p(), 0);
        return Ok(vec![g.random_vector(&mut rng), g.random_vector(&mut rng)]);
    }
    gens.iter()
        .map(|s| g.parse_element(s).map_err(|e| CliError::Config(format!("{s}: {e}"))))
        .collect()
}

#[derive(Serialize)]
struct LayerRow {
    k: usize,
    ball_size: usize,
}

fn diameter_cmd(cfg: ExperimentConfig, gens: &[String]) -> Result<(), CliError> {
    let form = cfg.form()?;
    let p = cfg.single_prime()?;
    let g = algebra_for(&form, p)?;
    let a = generators(&cfg, &g, gens)?;
    if !g.generates(&a) {
        return Err(CliError::Config("the generators do not generate the algebra".into()));
    }
    let mut ball = Ball::new(FiniteAmbient::new(&g)?, &a, cfg.cutoff, false);
    while ball.grow()? {}
    let rows: Vec<LayerRow> =
        ball.layer_sizes().into_iter().enumerate().map(|(i, s)| LayerRow { k: i + 1, ball_size: s }).collect();
    let data = match format_or(&cfg, Format::Csv) {
        Format::Csv => csv_bytes(&rows)?,
        Format::Json => json_bytes(&json!({ "form": form.label(), "p": p, "diameter": ball.depth(), "layers": rows }))?,
    };
    emit(cfg.out.as_deref(), &data, &format!("diameter {}", ball.depth()))
}

#[derive(Serialize)]
struct LineRow {
    k: usize,
    ball_size: usize,
    ell: u64,
    direction: String,
    ell_ahead: u64,
    exponent: Option<f64>,
    meets_bound: Option<bool>,
}

fn line_growth(cfg: ExperimentConfig, gens: &[String], eps: f64) -> Result<(), CliError> {
    let form = cfg.form()?;
    let p = cfg.single_prime()?;
    let g = algebra_for(&form, p)?;
    let a = generators(&cfg, &g, gens)?;
    let rows = match line_growth_experiment(&g, &a, eps) {
        Err(GrowthError::NotGenerating) => return Err(CliError::Config("the generators do not generate the algebra".into())),
        r => r?,
    };
    let last = rows.last().map_or(0, |r| r.k);
    let data = match format_or(&cfg, Format::Csv) {
        Format::Csv => {
            let flat: Vec<LineRow> = rows
                .iter()
                .map(|r| LineRow {
                    k: r.k,
                    ball_size: r.ball_size,
                    ell: r.ell,
                    direction: join(&r.direction),
                    ell_ahead: r.ell_ahead,
                    exponent: r.exponent,
                    meets_bound: r.meets_bound,
                })
                .collect();
            csv_bytes(&flat)?
        }
        Format::Json => json_bytes(&rows)?,
    };
    emit(cfg.out.as_deref(), &data, &format!("full line at k = {last}"))
}

#[derive(Serialize)]
struct TowerRow {
    j: usize,
    level_size: usize,
    span_dim: usize,
    relative_size: Option<usize>,
    relative_span_dim: Option<usize>,
}

fn towers_cmd(cfg: ExperimentConfig, args: &Towers) -> Result<(), CliError> {
    let form = cfg.form()?;
    let p = cfg.single_prime()?;
    let g = algebra_for(&form, p)?;
    let a = generators(&cfg, &g, &args.gen.gens)?;
    let pivot = if args.pivot.is_empty() { None } else { Some(generators(&cfg, &g, &args.pivot)?) };
    let depth = args.depth.unwrap_or(g.dim());
    let t = towers(&g, &a, depth, pivot.as_deref(), args.budget)?;
    let rows: Vec<TowerRow> = (0..=depth)
        .map(|j| TowerRow {
            j,
            level_size: t.levels[j].len(),
            span_dim: t.spans[j],
            relative_size: t.relative.get(j).map(Vec::len),
            relative_span_dim: t.relative_spans.get(j).copied(),
        })
        .collect();
    let data = match format_or(&cfg, Format::Csv) {
        Format::Csv => csv_bytes(&rows)?,
        Format::Json => json_bytes(&json!({ "form": form.label(), "p": p, "levels": rows }))?,
    };
    emit(cfg.out.as_deref(), &data, &format!("span dimension {} of {}", t.spans[depth], g.dim()))
}

fn extremal(cfg: ExperimentConfig) -> Result<(), CliError> {
    let form = cfg.form()?;
    let p = cfg.single_prime()?;
    let cert = match extremal_basis_pipeline(&form, p) {
        Err(ExtremalError::Form(e)) => return Err(CliError::Config(e.to_string())),
        r => r?,
    };
    let ff = FiniteForm::new(&form, p)?;
    let ok = cert.verify(ff.algebra());
    emit(cfg.out.as_deref(), &json_bytes(&cert)?, &format!("{} at p = {p}: certificate {}", form.label(), if ok { "verified" } else { "FAILED" }))?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification("extremal certificate does not verify".into()))
    }
}

fn random_pairs(cfg: ExperimentConfig, args: &RandomPairs) -> Result<(), CliError> {
    let rp = RandomPairConfig {
        form: cfg.form()?,
        primes: cfg.primes()?,
        trials: cfg.trials(500)?,
        seed: cfg.seed()?,
        diameter_samples: args.diameter_samples,
        ball_constant: args.ball_const,
        ball_cutoff: cfg.cutoff.unwrap_or(1 << 20),
        timing: cfg.timing,
    };
    let (records, summary) = random_pair_experiment(&rp)?;
    let data = match format_or(&cfg, Format::Csv) {
        Format::Csv => csv_bytes(&records)?,
        Format::Json => json_bytes(&json!({ "records": records, "summary": summary }))?,
    };
    let text = String::from_utf8(json_bytes(&summary)?).expect("serde_json writes UTF-8");
    emit(cfg.out.as_deref(), &data, text.trim_end())
}

fn witt(cfg: ExperimentConfig, samples: usize) -> Result<(), CliError> {
    let primes = cfg.primes()?;
    let seed = cfg.seed.unwrap_or(0);
    let records = witt_experiment(&primes, samples, seed)?;
    for r in &records {
        if r.exhaustive && r.diameter.is_some_and(|d| r.max_atoms < d) {
            return Err(CliError::Verification(format!("W({}) expressions shorter than the diameter", r.p)));
        }
    }
    let data = match format_or(&cfg, Format::Csv) {
        Format::Csv => csv_bytes(&records)?,
        Format::Json => json_bytes(&records)?,
    };
    let max_ratio = records.iter().map(|r| r.ratio).fold(0.0, f64::max);
    emit(cfg.out.as_deref(), &data, &format!("max atoms / (p ln p) = {max_ratio:.3}"))
}

fn chebotarev(cfg: ExperimentConfig, args: &Chebotarev) -> Result<(), CliError> {
    let fields = match args.family {
        Some(n) => independent_family(args.d, n)?,
        None if args.q.is_empty() => return Err(CliError::Config("give --q or --family".into())),
        None => args.q.iter().map(|&q| gaussian_period_polynomial(q, args.d)).collect::<Result<_, _>>()?,
    };
    let polys: Vec<Vec<BigInt>> = fields.iter().map(|f| f.poly.clone()).collect();
    let data = match format_or(&cfg, Format::Json) {
        Format::Json => {
            let report = density_scan(&polys, args.bound);
            json_bytes(&json!({ "subfields": fields, "report": report }))?
        }
        Format::Csv => {
            let mut header = vec!["p".to_string()];
            header.extend(fields.iter().map(|f| format!("q{}", f.q)));
            let rows: Vec<Vec<String>> = liegrowth::arith::primes_up_to(args.bound)
                .into_iter()
                .map(|p| {
                    let mut row = vec![p.to_string()];
                    for f in &polys {
                        row.push(json!(classify_prime(f, p).status).as_str().unwrap_or_default().to_string());
                    }
                    row
                })
                .collect();
            csv_table(&header, &rows)?
        }
    };
    let qs: Vec<String> = fields.iter().map(|f| f.q.to_string()).collect();
    emit(cfg.out.as_deref(), &data, &format!("degree {} subfields for q = {}", args.d, qs.join(", ")))
}

#[derive(Serialize)]
struct CoveringSummary {
    form: String,
    #[serde(serialize_with = "bigint_serde::vec")]
    field: Vec<BigInt>,
    rank: usize,
    #[serde(serialize_with = "bigint_serde::serialize")]
    norm_constant: BigInt,
    #[serde(serialize_with = "bigint_serde::serialize")]
    steinberg_index: BigInt,
    reductions: Vec<serde_json::Value>,
}

fn covering(cfg: ExperimentConfig) -> Result<(), CliError> {
    let form = cfg.form()?;
    let cov = Covering::new(&form, Covering::default_field(form.order()))?;
    let lattice = cov.covering_lattice()?;
    let primes = if cfg.p.is_empty() && cfg.p_range.is_none() { Vec::new() } else { cfg.primes()? };
    let mut reductions = Vec::new();
    for p in primes {
        let red = cov.reduce(&lattice, p).map_err(|e| CliError::Config(format!("p = {p}: {e}")))?;
        reductions.push(json!({ "p": p, "rank": red.rank, "full": red.rank == form.dim() }));
    }
    let full = lattice.rank() == form.dim() && reductions.iter().all(|r| r["full"] == json!(true));
    let doc = CoveringSummary {
        form: form.label(),
        field: cov.field.poly().to_vec(),
        rank: lattice.rank(),
        norm_constant: lattice.norm_constant.clone(),
        steinberg_index: lattice.steinberg_index.clone(),
        reductions,
    };
    emit(cfg.out.as_deref(), &json_bytes(&doc)?, &format!("{} covering lattice of rank {}", form.label(), lattice.rank()))?;
    if full {
        Ok(())
    } else {
        Err(CliError::Verification("covering lattice does not reduce onto the finite form".into()))
    }
}

fn identity(cfg: ExperimentConfig, samples: usize) -> Result<(), CliError> {
    let p = cfg.single_prime()?;
    let report = identity_check_experiment(p, samples, cfg.seed()?)?;
    let summary = format!(
        "sl2: {} + {} violations; sl3 violation at sample {:?}",
        report.sl2_four_variable_violations, report.sl2_two_variable_violations, report.sl3_first_violation
    );
    let data = match format_or(&cfg, Format::Json) {
        Format::Json => json_bytes(&report)?,
        Format::Csv => csv_bytes(std::slice::from_ref(&report))?,
    };
    emit(cfg.out.as_deref(), &data, &summary)?;
    if report.sl2_four_variable_violations + report.sl2_two_variable_violations > 0 || !report.zero_input_vanishes {
        return Err(CliError::Verification("identity fails in sl2".into()));
    }
    Ok(())
}
