//! `pushtasep`: build, export and verify the exact objects of the core crate.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use pushtasep_core::combinatorics::{sector_basis, SectorBasis, SectorSpec};
use pushtasep_core::export::{
    basis_labels, export_matrix, export_poly_matrix, matrix_listing, ExportMeta,
};
use pushtasep_core::linalg::normalize_leading;
use pushtasep_core::processes::{asep_markov, pushtasep_markov, stationary_state, ModelParams};
use pushtasep_core::rmatrix::{s_k1_matrix, Construction, RIndex};
use pushtasep_core::scalar::{format_rational, parse_rational, Rational};
use pushtasep_core::transfer::{stationary_eigenvalue, transfer_matrix, transfer_poly, TransferKind, TransferSpec};
use pushtasep_core::verify::{run_all, run_suite, PointSampler, Suite, SuiteConfig, VerificationReport};

#[derive(Parser, Debug)]
#[command(name = "pushtasep", version, about = "Exact t-PushTASEP generators, transfer matrices and identity checks")]
struct Cli {
    /// JSON file whose keys mirror the flags; flags win over file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build and export a matrix.
    Build {
        #[command(subcommand)]
        what: BuildCommand,
    },
    /// Stationary vector and the eigenvalue table on each sector.
    Stationary(ModelArgs),
    /// Run verification suites and print JSON-lines reports.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum BuildCommand {
    Markov {
        #[arg(long, value_enum, default_value = "push")]
        kind: MarkovKind,
        /// Where to write the rate listing (default: next to --output, or stderr).
        #[arg(long)]
        listing: Option<PathBuf>,
        #[command(flatten)]
        model: ModelArgs,
    },
    Transfer {
        #[arg(long, value_enum, default_value = "antisym")]
        kind: KindArg,
        #[arg(long)]
        k: Option<usize>,
        /// Export polynomial entries instead of values at --z.
        #[arg(long, conflicts_with = "z")]
        poly: bool,
        #[command(flatten)]
        model: ModelArgs,
    },
    Rmatrix {
        #[arg(long, default_value = "closed")]
        construction: String,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum, PartialEq, Eq)]
enum MarkovKind {
    Push,
    Asep,
}

#[derive(Copy, Clone, Debug, ValueEnum, PartialEq, Eq)]
enum KindArg {
    Antisym,
    Sym,
}

#[derive(Args, Debug, Clone, Default)]
struct ModelArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "L")]
    l: Option<usize>,
    /// Rational "p/q"; default 1/2.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Comma-separated rationals; default all 1.
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<String>>,
    /// Sector multiplicities m_0..m_n; every sector when absent.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// all | main-theorem | commutativity | r-agreement | stationary | asep | proof-machinery | jacobi-trudi | cascade
    suite: String,
    /// Level for r-agreement (all levels when absent).
    #[arg(long)]
    k: Option<usize>,
    /// Inject one perturbation per suite (negative control).
    #[arg(long)]
    perturb: bool,
    /// Write wall_ms as 0 so that reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    model: ModelArgs,
}

/// Config file contents; every key is optional and mirrors a flag.
#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    n: Option<usize>,
    #[serde(rename = "L")]
    l: Option<usize>,
    t: Option<String>,
    x: Option<Vec<String>>,
    m: Option<Vec<usize>>,
    z: Option<String>,
    seed: Option<u64>,
    output: Option<PathBuf>,
    k: Option<usize>,
}

impl RunConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Flags merged over the config file, parsed and validated.
struct Resolved {
    n: usize,
    l: Option<usize>,
    t: Rational,
    t_text: String,
    x: Option<Vec<Rational>>,
    m: Option<Vec<usize>>,
    z: Option<Rational>,
    seed: u64,
    output: Option<PathBuf>,
}

fn parse_field(field: &str, value: &str) -> Result<Rational> {
    parse_rational(value).with_context(|| format!("--{field}"))
}

fn resolve(args: &ModelArgs, cfg: &RunConfig) -> Result<Resolved> {
    let n = args.n.or(cfg.n).context("--n is required")?;
    let l = args.l.or(cfg.l);
    let t_text = args.t.clone().or_else(|| cfg.t.clone()).unwrap_or_else(|| "1/2".into());
    let t = parse_field("t", &t_text)?;
    let x = match args.x.clone().or_else(|| cfg.x.clone()) {
        Some(xs) => Some(
            xs.iter()
                .enumerate()
                .map(|(i, v)| parse_rational(v).with_context(|| format!("--x entry {}", i + 1)))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let z = args.z.clone().or_else(|| cfg.z.clone()).map(|z| parse_field("z", &z)).transpose()?;
    Ok(Resolved {
        n,
        l,
        t,
        t_text,
        x,
        m: args.m.clone().or_else(|| cfg.m.clone()),
        z,
        seed: args.seed.or(cfg.seed).unwrap_or(0),
        output: args.output.clone().or_else(|| cfg.output.clone()),
    })
}

impl Resolved {
    fn l(&self) -> Result<usize> {
        self.l.context("--L is required")
    }

    fn params(&self) -> Result<ModelParams<Rational>> {
        let l = self.l()?;
        let x = self.x.clone().unwrap_or_else(|| vec![Rational::from_integer(1.into()); l]);
        ModelParams::new(self.n, l, self.t.clone(), x).context("model parameters")
    }

    fn sectors(&self) -> Result<Vec<SectorSpec>> {
        let l = self.l()?;
        match &self.m {
            Some(m) => Ok(vec![SectorSpec::new(self.n, l, m.clone()).context("--m")?]),
            None => Ok(SectorSpec::all(self.n, l)),
        }
    }

    fn z(&self) -> Result<Rational> {
        self.z.clone().context("--z is required")
    }

    fn meta(&self, object: &str, params: Option<&ModelParams<Rational>>) -> ExportMeta {
        ExportMeta {
            object: object.into(),
            n: self.n,
            l: self.l,
            m: None,
            k: None,
            t: format_rational(&self.t),
            z: self.z.as_ref().map(format_rational),
            x: params.map(|p| p.x.iter().map(format_rational).collect()),
        }
    }
}

/// Collects output lines and writes them to the file or stdout at the end.
struct Sink {
    path: Option<PathBuf>,
    buf: String,
}

impl Sink {
    fn new(path: Option<PathBuf>) -> Self {
        Self { path, buf: String::new() }
    }

    fn line(&mut self, s: &str) {
        self.buf.push_str(s);
        self.buf.push('\n');
    }

    fn json<T: Serialize>(&mut self, v: &T) -> Result<()> {
        self.line(&serde_json::to_string(v)?);
        Ok(())
    }

    fn finish(self) -> Result<()> {
        match self.path {
            Some(p) => fs::write(&p, self.buf).with_context(|| format!("writing {}", p.display())),
            None => {
                std::io::stdout().write_all(self.buf.as_bytes())?;
                Ok(())
            }
        }
    }
}

fn build_markov(kind: MarkovKind, listing: Option<PathBuf>, r: &Resolved) -> Result<()> {
    let params = r.params()?;
    let mut sink = Sink::new(r.output.clone());
    let mut rates = String::new();
    for spec in r.sectors()? {
        let basis = sector_basis(&spec)?;
        let (m, object) = match kind {
            MarkovKind::Push => (pushtasep_markov(&params, &spec)?, "markov-push"),
            MarkovKind::Asep => (asep_markov(params.n, params.l, &params.t, &spec)?, "markov-asep"),
        };
        let mut meta = r.meta(object, (kind == MarkovKind::Push).then_some(&params));
        meta.m = Some(spec.m.clone());
        sink.json(&export_matrix(meta, &m, basis_labels(&basis)))?;
        rates.push_str(&matrix_listing(&basis, &m));
    }
    let listing = listing.or_else(|| r.output.as_ref().map(|p| p.with_extension("rates.txt")));
    match listing {
        Some(p) => fs::write(&p, rates).with_context(|| format!("writing {}", p.display()))?,
        None => eprint!("{rates}"),
    }
    sink.finish()
}

fn build_transfer(kind: KindArg, k: Option<usize>, poly: bool, r: &Resolved) -> Result<()> {
    let params = r.params()?;
    let k = k.context("--k is required")?;
    let kind = match kind {
        KindArg::Antisym => TransferKind::Antisymmetric,
        KindArg::Sym => TransferKind::Symmetric,
    };
    let object = match kind {
        TransferKind::Antisymmetric => "transfer-antisym",
        TransferKind::Symmetric => "transfer-sym",
    };
    let sectors: Vec<Option<SectorSpec>> = match &r.m {
        Some(_) => r.sectors()?.into_iter().map(Some).collect(),
        None => vec![None],
    };
    let mut sink = Sink::new(r.output.clone());
    for sector in sectors {
        let spec = TransferSpec::new(kind, k, params.clone(), sector.clone())?;
        let basis = spec.basis()?;
        let mut meta = r.meta(object, Some(&params));
        meta.k = Some(k);
        meta.m = sector.map(|s| s.m);
        if poly {
            meta.z = None;
            sink.json(&export_poly_matrix(meta, &transfer_poly(&spec)?, basis_labels(&basis)))?;
        } else {
            let z = r.z().context("pass --z or --poly")?;
            sink.json(&export_matrix(meta, &transfer_matrix(&spec, &z)?, basis_labels(&basis)))?;
        }
    }
    sink.finish()
}

fn build_rmatrix(construction: &str, k: Option<usize>, r: &Resolved) -> Result<()> {
    let construction: Construction = construction.parse().context("--construction")?;
    let k = k.context("--k is required")?;
    let z = r.z()?;
    let m = s_k1_matrix(construction, r.n, k, &r.t, &z)?;
    let idx = RIndex::hardcore(r.n, k)?;
    let labels = (0..idx.dim())
        .map(|i| {
            let (a, b) = idx.label(i);
            format!("{a}|{b}")
        })
        .collect();
    let mut meta = r.meta(&format!("rmatrix-{}", construction_name(construction)), None);
    meta.k = Some(k);
    meta.l = None;
    let mut sink = Sink::new(r.output.clone());
    sink.json(&export_matrix(meta, &m, labels))?;
    sink.finish()
}

fn construction_name(c: Construction) -> &'static str {
    match c {
        Construction::Closed => "closed",
        Construction::Fused => "fused",
        Construction::ThreeD => "threed",
    }
}

#[derive(Serialize)]
struct EigenvalueRow {
    k: usize,
    z: String,
    value: String,
}

#[derive(Serialize)]
struct StationaryOutput {
    n: usize,
    #[serde(rename = "L")]
    l: usize,
    m: Vec<usize>,
    t: String,
    x: Vec<String>,
    labels: Vec<String>,
    /// Kernel vector with first coordinate 1.
    vector: Vec<String>,
    /// The same vector normalized to total mass one.
    distribution: Vec<String>,
    eigenvalues: Vec<EigenvalueRow>,
}

fn stationary(r: &Resolved) -> Result<()> {
    let params = r.params()?;
    let mut sampler = PointSampler::new(r.seed);
    let mut sink = Sink::new(r.output.clone());
    for spec in r.sectors()? {
        let basis: SectorBasis = sector_basis(&spec)?;
        let p = stationary_state(&params, &spec)?;
        let mut v = p.clone();
        normalize_leading(&mut v);
        let mut eigenvalues = Vec::new();
        let zs: Vec<Rational> = match &r.z {
            Some(z) => vec![z.clone()],
            None => sampler.distinct(params.l + 1, &[]),
        };
        for k in 0..=params.n + 1 {
            for z in &zs {
                eigenvalues.push(EigenvalueRow {
                    k,
                    z: format_rational(z),
                    value: format_rational(&stationary_eigenvalue(k, &params, &spec, z)?),
                });
            }
        }
        sink.json(&StationaryOutput {
            n: params.n,
            l: params.l,
            m: spec.m.clone(),
            t: r.t_text.clone(),
            x: params.x.iter().map(format_rational).collect(),
            labels: basis_labels(&basis),
            vector: v.iter().map(format_rational).collect(),
            distribution: p.iter().map(format_rational).collect(),
            eigenvalues,
        })?;
    }
    sink.finish()
}

fn verify(args: &VerifyArgs, cfg: &RunConfig) -> Result<bool> {
    let r = resolve(&args.model, cfg)?;
    let l = match r.l {
        Some(l) => l,
        // r-agreement does not need a ring
        None if args.suite == "r-agreement" => 0,
        None => bail!("--L is required"),
    };
    let suite_cfg = SuiteConfig {
        n: r.n,
        l,
        m: r.m.clone(),
        t: args.model.t.clone().or_else(|| cfg.t.clone()),
        x: r.x.as_ref().map(|x| x.iter().map(format_rational).collect()),
        k: args.k.or(cfg.k),
        seed: r.seed,
        perturb: args.perturb,
    };
    let mut reports: Vec<VerificationReport> = if args.suite == "all" {
        run_all(&suite_cfg)?
    } else {
        let suite: Suite = args.suite.parse()?;
        run_suite(suite, &suite_cfg)?
    };
    let mut sink = Sink::new(r.output.clone());
    let mut ok = true;
    for rep in &mut reports {
        if args.no_timing {
            rep.wall_ms = 0;
        }
        ok &= rep.passed();
        sink.line(&rep.to_json_line());
    }
    sink.finish()?;
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Build { what } => {
            match what {
                BuildCommand::Markov { kind, listing, model } => build_markov(kind, listing, &resolve(&model, &cfg)?)?,
                BuildCommand::Transfer { kind, k, poly, model } => {
                    build_transfer(kind, k.or(cfg.k), poly, &resolve(&model, &cfg)?)?
                }
                BuildCommand::Rmatrix { construction, k, model } => {
                    build_rmatrix(&construction, k.or(cfg.k), &resolve(&model, &cfg)?)?
                }
            }
            Ok(true)
        }
        Command::Stationary(model) => {
            stationary(&resolve(&model, &cfg)?)?;
            Ok(true)
        }
        Command::Verify(args) => verify(&args, &cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
