//! Subcommand arguments and their execution.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use landau_core::asymptotics::{lambda_from_log, limit_fit, sandwich_report, weyl_sequence};
use landau_core::capacity::{asym_constant, capacity_estimate, encircles, known_capacity, AsymSource};
use landau_core::dirac::{level_counts, prop_inf_experiment, verify_diag_sandwich, PropInfBranch, TruncationSpec};
use landau_core::fock::{landau_dirac_level, MagneticParams};
use landau_core::index::{run_suite, Suite};
use landau_core::num::to_decimal;
use landau_core::symbol::appendix_bump;
use landau_core::toeplitz::{assemble_dirac_toeplitz, assemble_landau_toeplitz, hermitian_eigenvalues, Sign, Spectrum};
use rug::Float;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{merge, parse_json, region_from_value, resolve_bits, PotentialConfig};
use crate::output::{json_document, write_atomic, CsvTable};
use crate::CliError;

pub type Outcome = Result<(), (CliError, &'static str, Value)>;

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct Common {
    /// Magnetic field strength b > 0.
    #[arg(long)]
    pub b: Option<f64>,
    /// Mass m ≥ 0.
    #[arg(long)]
    pub m: Option<f64>,
    /// Working precision in bits (default from LANDAU_PRECISION_BITS, else 128).
    #[arg(long)]
    pub bits: Option<u32>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn fill(&mut self) -> Result<(), CliError> {
        self.b.get_or_insert(2.0);
        self.m.get_or_insert(0.0);
        self.bits = Some(resolve_bits(self.bits)?);
        Ok(())
    }

    fn params(&self) -> Result<MagneticParams, CliError> {
        Ok(MagneticParams::new(self.b.unwrap(), self.m.unwrap())?)
    }

    fn bits(&self) -> u32 {
        self.bits.unwrap()
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

fn drive<T: Serialize + DeserializeOwned>(
    name: &'static str,
    flags: T,
    file: Option<&Value>,
    fill: impl FnOnce(&mut T) -> Result<(), CliError>,
    body: impl FnOnce(&T, &Value) -> Result<(), CliError>,
) -> Outcome {
    let mut a = merge(&flags, file).map_err(|e| (e, name, Value::Null))?;
    fill(&mut a).map_err(|e| (e, name, Value::Null))?;
    let cfg = serde_json::to_value(&a).map_err(|e| (CliError::Config(e.to_string()), name, Value::Null))?;
    body(&a, &cfg).map_err(|e| (e, name, cfg.clone()))
}

/// Potential from `potential`, else a unit disk of radius `disk` in V₁.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct PotentialArgs {
    /// Potential JSON {v1, v2, w} (or @file).
    #[arg(long, value_parser = parse_json)]
    pub potential: Option<Value>,
    /// Shortcut for V₁ = χ_{|x| ≤ R}, V₂ = 0.
    #[arg(long)]
    pub disk: Option<f64>,
}

impl PotentialArgs {
    fn fill(&mut self) -> Result<(), CliError> {
        if self.potential.is_none() {
            let r = self.disk.ok_or_else(|| CliError::Config("need --potential or --disk".into()))?;
            self.potential = Some(serde_json::to_value(PotentialConfig::disk(r)).expect("serializable"));
        }
        PotentialConfig::from_value(self.potential.as_ref().unwrap())?;
        Ok(())
    }

    fn config(&self) -> Result<PotentialConfig, CliError> {
        PotentialConfig::from_value(self.potential.as_ref().unwrap())
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    /// p_q V₁ p_q for a scalar potential.
    Landau,
    /// 𝒫_q V 𝒫_q for the matrix potential.
    Dirac,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

/// Grid of λ = e^{−L} with L equally spaced.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct LambdaGrid {
    /// Smallest |ln λ|.
    #[arg(long)]
    pub log_min: Option<f64>,
    /// Largest |ln λ|.
    #[arg(long)]
    pub log_max: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub points: Option<usize>,
}

impl LambdaGrid {
    fn fill(&mut self, lo: f64, hi: f64, n: usize) -> Result<(), CliError> {
        let (lo, hi, n) = (*self.log_min.get_or_insert(lo), *self.log_max.get_or_insert(hi), *self.points.get_or_insert(n));
        if !(lo > 0.0 && hi >= lo) || n == 0 {
            return Err(CliError::Config(format!("need 0 < log_min ≤ log_max and points ≥ 1, got {lo}, {hi}, {n}")));
        }
        Ok(())
    }

    fn lambdas(&self, prec: u32) -> Vec<Float> {
        let (lo, hi, n) = (self.log_min.unwrap(), self.log_max.unwrap(), self.points.unwrap());
        (0..n)
            .map(|i| {
                let l = if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
                lambda_from_log(l, prec)
            })
            .collect()
    }
}

fn toeplitz_spectrum(
    op: Operator,
    q: i64,
    pot: &PotentialConfig,
    k_max: u32,
    p: &MagneticParams,
    prec: u32,
) -> Result<Spectrum, CliError> {
    let h = match op {
        Operator::Landau => {
            if q < 0 {
                return Err(CliError::Config(format!("Landau levels are indexed by q ≥ 0, got {q}")));
            }
            assemble_landau_toeplitz(q as u32, &pot.v1.build()?, k_max, p, prec)?
        }
        Operator::Dirac => assemble_dirac_toeplitz(q, &pot.build()?, k_max, p, prec)?,
    };
    Ok(hermitian_eigenvalues(&h, prec)?)
}

// ---------------------------------------------------------------- levels

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct LevelsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Levels −qmax..=qmax.
    #[arg(long)]
    pub qmax: Option<u32>,
}

pub fn levels(a: LevelsArgs, file: Option<&Value>) -> Outcome {
    drive(
        "levels",
        a,
        file,
        |a| {
            a.qmax.get_or_insert(3);
            a.common.fill()
        },
        |a, cfg| {
            let p = a.common.params()?;
            let qmax = a.qmax.unwrap() as i64;
            let mut t = CsvTable::new(&["q", "mu_q"]);
            for q in -qmax..=qmax {
                t.push(vec![q.to_string(), to_decimal(&landau_dirac_level(q, &p, a.common.bits()))]);
            }
            write_atomic(a.common.out(), &t.render("levels", cfg)?)
        },
    )
}

// ---------------------------------------------------------------- toeplitz-eig

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct ToeplitzArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
    /// Level index q.
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<i64>,
    /// Angular truncation K (basis k = 0..=K).
    #[arg(long = "K")]
    pub k_max: Option<u32>,
    #[arg(long, value_enum)]
    pub operator: Option<Operator>,
}

pub fn toeplitz_eig(a: ToeplitzArgs, file: Option<&Value>) -> Outcome {
    drive(
        "toeplitz-eig",
        a,
        file,
        |a| {
            a.level.get_or_insert(0);
            a.k_max.get_or_insert(40);
            a.operator.get_or_insert(Operator::Dirac);
            a.potential.fill()?;
            a.common.fill()
        },
        |a, cfg| {
            let p = a.common.params()?;
            let spec = toeplitz_spectrum(
                a.operator.unwrap(),
                a.level.unwrap(),
                &a.potential.config()?,
                a.k_max.unwrap(),
                &p,
                a.common.bits(),
            )?;
            let mut t = CsvTable::new(&["index", "eigenvalue"]);
            for (i, v) in spec.values.iter().enumerate() {
                t.push(vec![i.to_string(), to_decimal(v)]);
            }
            t.annotate("provenance", json!(spec.provenance));
            t.annotate("relative_off_norm", json!(spec.relative_off_norm));
            write_atomic(a.common.out(), &t.render("toeplitz-eig", cfg)?)
        },
    )
}

// ---------------------------------------------------------------- capacity

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct CapacityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Region JSON {kind, ...} (or @file).
    #[arg(long, value_parser = parse_json)]
    pub region: Option<Value>,
    /// Largest Fekete point count.
    #[arg(long)]
    pub nmax: Option<usize>,
}

pub fn capacity(a: CapacityArgs, file: Option<&Value>) -> Outcome {
    drive(
        "capacity",
        a,
        file,
        |a| {
            a.nmax.get_or_insert(60);
            let r = a.region.as_ref().ok_or_else(|| CliError::Config("need --region".into()))?;
            region_from_value(r)?;
            a.common.fill()
        },
        |a, cfg| {
            let region = region_from_value(a.region.as_ref().unwrap())?;
            let est = capacity_estimate(&region, a.nmax.unwrap())?;
            let b = a.common.b.unwrap();
            let result = json!({
                "estimate": est,
                "closed_form": known_capacity(&region),
                "asym_constant": landau_core::capacity::asym_constant_from_capacity(est.extrapolated, b).ok(),
            });
            write_atomic(a.common.out(), &json_document("capacity", cfg, result)?)
        },
    )
}

// ---------------------------------------------------------------- weyl

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct WeylArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<i64>,
    #[arg(long = "K")]
    pub k_max: Option<u32>,
    /// First sequence index (≥ 1).
    #[arg(long)]
    pub k_lo: Option<u32>,
    /// Last sequence index; defaults to K.
    #[arg(long)]
    pub k_hi: Option<u32>,
    #[arg(long, value_enum)]
    pub sign: Option<SignArg>,
    #[arg(long, value_enum)]
    pub operator: Option<Operator>,
}

pub fn weyl(a: WeylArgs, file: Option<&Value>) -> Outcome {
    drive(
        "weyl",
        a,
        file,
        |a| {
            a.level.get_or_insert(0);
            let k = *a.k_max.get_or_insert(60);
            a.k_lo.get_or_insert(20);
            a.k_hi.get_or_insert(k);
            a.sign.get_or_insert(SignArg::Plus);
            a.operator.get_or_insert(Operator::Dirac);
            a.potential.fill()?;
            a.common.fill()
        },
        |a, cfg| {
            let p = a.common.params()?;
            let spec = toeplitz_spectrum(
                a.operator.unwrap(),
                a.level.unwrap(),
                &a.potential.config()?,
                a.k_max.unwrap(),
                &p,
                a.common.bits(),
            )?;
            let ws = weyl_sequence(&spec, a.k_lo.unwrap(), a.k_hi.unwrap(), a.sign.unwrap().into())?;
            let fit = limit_fit(&ws)?;
            let mut t = CsvTable::new(&["k", "ln_k_factorial_nu_k", "s_k"]);
            for ((k, l), s) in ws.ks().zip(&ws.ln_scaled).zip(&ws.s) {
                t.push(vec![k.to_string(), l.to_string(), s.to_string()]);
            }
            t.annotate("fit", serde_json::to_value(&fit).map_err(|e| CliError::Config(e.to_string()))?);
            write_atomic(a.common.out(), &t.render("weyl", cfg)?)
        },
    )
}

// ---------------------------------------------------------------- counting

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct CountingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: LambdaGrid,
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<i64>,
    #[arg(long = "K")]
    pub k_max: Option<u32>,
    /// Constant of the three-term law; computed from the support of V₁ when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Half-width of the accepted residual band around c.
    #[arg(long)]
    pub slack: Option<f64>,
    /// Fekete point count for the capacity when c is computed.
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long, value_enum)]
    pub operator: Option<Operator>,
}

pub fn counting(a: CountingArgs, file: Option<&Value>) -> Outcome {
    drive(
        "counting",
        a,
        file,
        |a| {
            a.level.get_or_insert(0);
            a.k_max.get_or_insert(60);
            a.slack.get_or_insert(0.75);
            a.nmax.get_or_insert(60);
            a.operator.get_or_insert(Operator::Dirac);
            a.grid.fill(50.0, 130.0, 20)?;
            a.potential.fill()?;
            a.common.fill()
        },
        |a, cfg| {
            let p = a.common.params()?;
            let prec = a.common.bits();
            let pot = a.potential.config()?;
            let c = match a.c {
                Some(c) => c,
                None => asym_constant(&AsymSource::Potential(pot.v1.build()?), p.b, Sign::Plus, a.nmax.unwrap())?.value,
            };
            let spec = toeplitz_spectrum(a.operator.unwrap(), a.level.unwrap(), &pot, a.k_max.unwrap(), &p, prec)?;
            let rep = sandwich_report(&spec, c, c, &a.grid.lambdas(prec), a.slack.unwrap())?;
            let mut t = CsvTable::new(&["abs_ln_lambda", "n_plus", "lower", "upper", "residual", "within"]);
            for r in &rep.rows {
                t.push(vec![
                    r.abs_ln_lambda.to_string(),
                    r.n_plus.to_string(),
                    r.lower.to_string(),
                    r.upper.to_string(),
                    r.residual.to_string(),
                    r.within.to_string(),
                ]);
            }
            t.annotate("c", json!(c));
            t.annotate("applicable", json!(rep.applicable));
            write_atomic(a.common.out(), &t.render("counting", cfg)?)
        },
    )
}

// ---------------------------------------------------------------- dirac

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiracMode {
    /// Window counts at K and K + 10.
    Window,
    /// Toeplitz sandwich defects.
    Sandwich,
    /// Suppression/cancellation experiment at μ₀ and μ₁.
    PropInf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchArg {
    Suppressing,
    Cancelling,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct DiracArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: LambdaGrid,
    #[arg(long, value_enum)]
    pub mode: Option<DiracMode>,
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<i64>,
    #[arg(long = "K")]
    pub k_max: Option<u32>,
    /// Level truncation N (defaults to |q| + 2).
    #[arg(long = "N")]
    pub n_max: Option<u32>,
    /// Window half-width; defaults to a quarter of the local gap.
    #[arg(long)]
    pub delta: Option<f64>,
    /// ε of the potential bracket V ± ε|V|, or of the cancelling branch.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// Truncations for the prop-inf experiment.
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<u32>>,
}

pub fn dirac(a: DiracArgs, file: Option<&Value>) -> Outcome {
    drive(
        "dirac",
        a,
        file,
        |a| {
            let mode = *a.mode.get_or_insert(DiracMode::Window);
            let q = *a.level.get_or_insert(if mode == DiracMode::PropInf { 1 } else { 0 });
            a.k_max.get_or_insert(40);
            a.n_max.get_or_insert(q.unsigned_abs() as u32 + 2);
            a.eps.get_or_insert(0.1);
            a.branch.get_or_insert(BranchArg::Suppressing);
            a.ks.get_or_insert(vec![20, 30, 40]);
            a.grid.fill(2.0, 40.0, 20)?;
            a.potential.fill()?;
            a.common.fill()
        },
        |a, cfg| {
            let p = a.common.params()?;
            let prec = a.common.bits();
            let pot = a.potential.config()?;
            let mut t = TruncationSpec::new(a.k_max.unwrap(), a.n_max.unwrap());
            if let Some(d) = a.delta {
                t = t.with_delta(d);
            }
            let q = a.level.unwrap();
            let result = match a.mode.unwrap() {
                DiracMode::Window => {
                    serde_json::to_value(level_counts(&pot.build()?, q, &a.grid.lambdas(prec), &t, &p, prec)?)
                }
                DiracMode::Sandwich => serde_json::to_value(verify_diag_sandwich(
                    &pot.build()?,
                    q,
                    a.eps.unwrap(),
                    &a.grid.lambdas(prec),
                    &t,
                    &p,
                    prec,
                )?),
                DiracMode::PropInf => {
                    let branch = match a.branch.unwrap() {
                        BranchArg::Suppressing => PropInfBranch::Suppressing,
                        BranchArg::Cancelling => PropInfBranch::Cancelling { eps: a.eps.unwrap() },
                    };
                    let delta = t.window(1, &p);
                    serde_json::to_value(prop_inf_experiment(
                        &pot.v1.smooth()?,
                        branch,
                        delta,
                        a.ks.as_ref().unwrap(),
                        a.n_max.unwrap(),
                        &p,
                        prec,
                    )?)
                }
            }
            .map_err(|e| CliError::Config(e.to_string()))?;
            write_atomic(a.common.out(), &json_document("dirac", cfg, result)?)
        },
    )
}

// ---------------------------------------------------------------- index

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteArg {
    All,
    Le42,
    RankBounds,
    Monotonicity,
    Additivity,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct IndexArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub suite: Option<SuiteArg>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Largest matrix dimension.
    #[arg(long)]
    pub max_dim: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn index(a: IndexArgs, file: Option<&Value>) -> Outcome {
    drive(
        "index",
        a,
        file,
        |a| {
            a.suite.get_or_insert(SuiteArg::All);
            a.trials.get_or_insert(200);
            a.seed.get_or_insert(0);
            let d = *a.max_dim.get_or_insert(40);
            if d < 2 {
                return Err(CliError::Config("max_dim must be at least 2".into()));
            }
            a.common.fill()
        },
        |a, cfg| {
            let suites: Vec<Suite> = match a.suite.unwrap() {
                SuiteArg::All => vec![Suite::Le42, Suite::RankBounds, Suite::Monotonicity, Suite::Additivity],
                SuiteArg::Le42 => vec![Suite::Le42],
                SuiteArg::RankBounds => vec![Suite::RankBounds],
                SuiteArg::Monotonicity => vec![Suite::Monotonicity],
                SuiteArg::Additivity => vec![Suite::Additivity],
            };
            let reports: Vec<_> =
                suites.into_iter().map(|s| run_suite(s, a.seed.unwrap(), a.trials.unwrap(), a.max_dim.unwrap())).collect();
            write_atomic(a.common.out(), &json_document("index", cfg, &reports)?)?;
            let failures: usize = reports.iter().map(|r| r.failures).sum();
            if failures > 0 {
                return Err(CliError::Failed {
                    message: format!("{failures} index trials failed"),
                    report: serde_json::to_value(&reports).unwrap_or_default(),
                });
            }
            Ok(())
        },
    )
}

// ---------------------------------------------------------------- bump

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct BumpArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Scaling δ; the certified automatic value when absent.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Certificate grid resolution per axis.
    #[arg(long)]
    pub grid: Option<usize>,
}

pub fn bump(a: BumpArgs, file: Option<&Value>) -> Outcome {
    drive(
        "bump",
        a,
        file,
        |a| {
            a.grid.get_or_insert(2000);
            a.common.fill()
        },
        |a, cfg| {
            let (_, cert) = appendix_bump(a.delta, a.grid.unwrap())?;
            write_atomic(a.common.out(), &json_document("bump", cfg, &cert)?)?;
            if !cert.passed {
                return Err(CliError::Core(landau_core::Error::hypothesis(format!(
                    "grid check failed: min G = {:e}, min(G + ΔG) = {:e}",
                    cert.min_g, cert.min_g_plus_laplacian
                ))));
            }
            Ok(())
        },
    )
}

// ---------------------------------------------------------------- encircle

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct EncircleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Region JSON for Ω (or @file).
    #[arg(long, value_parser = parse_json)]
    pub omega: Option<Value>,
    /// Region JSON for the compact set K (or @file).
    #[arg(long = "compact", value_parser = parse_json)]
    pub k: Option<Value>,
    /// Raster cells per axis.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Optional PGM dump of the classified raster.
    #[arg(long)]
    pub raster: Option<PathBuf>,
}

pub fn encircle(a: EncircleArgs, file: Option<&Value>) -> Outcome {
    drive(
        "encircle",
        a,
        file,
        |a| {
            a.resolution.get_or_insert(512);
            region_from_value(a.omega.as_ref().ok_or_else(|| CliError::Config("need --omega".into()))?)?;
            region_from_value(a.k.as_ref().ok_or_else(|| CliError::Config("need --compact".into()))?)?;
            a.common.fill()
        },
        |a, cfg| {
            let omega = region_from_value(a.omega.as_ref().unwrap())?;
            let k = region_from_value(a.k.as_ref().unwrap())?;
            let rep = encircles(&omega, &k, a.resolution.unwrap())?;
            if let Some(path) = &a.raster {
                let mut buf = Vec::new();
                rep.raster.write_pgm(&mut buf)?;
                write_atomic(Some(path), &buf)?;
            }
            write_atomic(a.common.out(), &json_document("encircle", cfg, &rep)?)
        },
    )
}
