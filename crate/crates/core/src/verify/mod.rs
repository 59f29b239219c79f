//! Reproducible verification suites. Every suite returns one report per
//! instance (typically a sector); reports serialize as JSON lines and embed
//! the seed and every sampled point so a failure can be replayed.

mod checker;
pub mod known;
mod sampler;
mod suites;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use checker::Checker;
pub use sampler::PointSampler;
pub use suites::{
    verify_asep_baxter, verify_cascade, verify_commutativity, verify_jacobi_trudi, verify_main_theorem,
    verify_proof_machinery, verify_r_constructions, verify_stationary,
};

use crate::combinatorics::SectorSpec;
use crate::error::{Error, Result};
use crate::processes::ModelParams;
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Asep,
    Cascade,
    Commutativity,
    JacobiTrudi,
    MainTheorem,
    ProofMachinery,
    RAgreement,
    Stationary,
}

impl Suite {
    /// All suites, in name order.
    pub const ALL: [Suite; 8] = [
        Suite::Asep,
        Suite::Cascade,
        Suite::Commutativity,
        Suite::JacobiTrudi,
        Suite::MainTheorem,
        Suite::ProofMachinery,
        Suite::RAgreement,
        Suite::Stationary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Asep => "asep",
            Suite::Cascade => "cascade",
            Suite::Commutativity => "commutativity",
            Suite::JacobiTrudi => "jacobi-trudi",
            Suite::MainTheorem => "main-theorem",
            Suite::ProofMachinery => "proof-machinery",
            Suite::RAgreement => "r-agreement",
            Suite::Stationary => "stationary",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown suite {s:?}")))
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// The first failed comparison of a suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: String,
    pub location: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportParams {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<Vec<String>>,
}

impl ReportParams {
    pub fn model(params: &ModelParams<Rational>, spec: Option<&SectorSpec>) -> Self {
        Self {
            n: params.n,
            l: params.l,
            m: spec.map(|s| s.m.clone()),
            k: None,
            t: Some(params.t.to_string()),
            x: Some(params.x.iter().map(ToString::to_string).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: ReportParams,
    /// Sampled points by role, e.g. `"z"` or `"zeta"`.
    pub points: BTreeMap<String, Vec<String>>,
    pub seed: u64,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub checks: usize,
    pub wall_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

/// Shared bookkeeping for one suite instance.
pub(crate) struct Run {
    suite: Suite,
    params: ReportParams,
    seed: u64,
    started: Instant,
    pub checker: Checker,
    pub points: BTreeMap<String, Vec<String>>,
}

impl Run {
    pub fn new(suite: Suite, params: ReportParams, seed: u64) -> Self {
        Self { suite, params, seed, started: Instant::now(), checker: Checker::default(), points: BTreeMap::new() }
    }

    pub fn record(&mut self, role: &str, values: &[Rational]) {
        self.points.entry(role.to_string()).or_default().extend(values.iter().map(ToString::to_string));
    }

    pub fn finish(self) -> VerificationReport {
        let failure = self.checker.failure().cloned();
        VerificationReport {
            suite: self.suite.name().to_string(),
            params: self.params,
            points: self.points,
            seed: self.seed,
            status: if failure.is_some() { Status::Fail } else { Status::Pass },
            counterexample: failure,
            checks: self.checker.count(),
            wall_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

/// What to run a suite on. Missing `t` and `x` are drawn from `seed`; a
/// missing `m` means every sector with all `m_i >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(default)]
    pub m: Option<Vec<usize>>,
    #[serde(default)]
    pub t: Option<String>,
    #[serde(default)]
    pub x: Option<Vec<String>>,
    /// Level for `r-agreement`; all levels when absent.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Inject a single perturbation into the suite's input (negative control).
    #[serde(default)]
    pub perturb: bool,
}

impl SuiteConfig {
    pub fn new(n: usize, l: usize) -> Self {
        Self { n, l, m: None, t: None, x: None, k: None, seed: 0, perturb: false }
    }

    pub fn sectors(&self) -> Result<Vec<SectorSpec>> {
        match &self.m {
            Some(m) => Ok(vec![SectorSpec::new(self.n, self.l, m.clone())?]),
            None => Ok(SectorSpec::all(self.n, self.l)),
        }
    }

    /// Model parameters, sampling what the config leaves open.
    pub fn params(&self, sampler: &mut PointSampler) -> Result<ModelParams<Rational>> {
        let t = match &self.t {
            Some(t) => crate::scalar::parse_rational(t)?,
            None => sampler.unit_interval(),
        };
        let x = match &self.x {
            Some(x) => x.iter().map(|v| crate::scalar::parse_rational(v)).collect::<Result<Vec<_>>>()?,
            None => (0..self.l).map(|_| sampler.positive()).collect(),
        };
        ModelParams::new(self.n, self.l, t, x)
    }

    fn homogeneous_params(&self, sampler: &mut PointSampler) -> Result<ModelParams<Rational>> {
        let t = match &self.t {
            Some(t) => crate::scalar::parse_rational(t)?,
            None => sampler.unit_interval(),
        };
        ModelParams::homogeneous(self.n, self.l, t)
    }
}

/// Runs one suite; one report per instance, sectors smallest first.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut sampler = PointSampler::new(cfg.seed);
    let mut out = Vec::new();
    match suite {
        Suite::RAgreement => {
            let levels: Vec<usize> = match cfg.k {
                Some(k) => vec![k],
                None => (0..=cfg.n + 1).collect(),
            };
            for k in levels {
                out.push(verify_r_constructions(cfg.n, k, cfg.seed, cfg.perturb)?);
            }
        }
        Suite::Cascade => {
            let t = match &cfg.t {
                Some(t) => crate::scalar::parse_rational(t)?,
                None => sampler.unit_interval(),
            };
            out.push(verify_cascade(cfg.n, cfg.l, &t, cfg.perturb)?);
        }
        Suite::Asep => {
            let params = cfg.homogeneous_params(&mut sampler)?;
            for spec in cfg.sectors()? {
                out.push(verify_asep_baxter(&params, &spec, cfg.perturb)?);
            }
        }
        _ => {
            let params = cfg.params(&mut sampler)?;
            for spec in cfg.sectors()? {
                let seed = cfg.seed;
                let report = match suite {
                    Suite::MainTheorem => verify_main_theorem(&params, &spec, cfg.perturb)?,
                    Suite::Commutativity => verify_commutativity(&params, &spec, seed, cfg.perturb)?,
                    Suite::Stationary => verify_stationary(&params, &spec, seed, cfg.perturb)?,
                    Suite::ProofMachinery => verify_proof_machinery(&params, &spec, seed, cfg.perturb)?,
                    Suite::JacobiTrudi => verify_jacobi_trudi(&params, &spec, seed, cfg.perturb)?,
                    _ => unreachable!(),
                };
                out.push(report);
            }
        }
    }
    for r in &mut out {
        r.seed = cfg.seed;
    }
    Ok(out)
}

/// Every suite in name order.
pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for suite in Suite::ALL {
        out.extend(run_suite(suite, cfg)?);
    }
    Ok(out)
}
