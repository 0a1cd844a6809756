use clap::{Args, ValueEnum};
use serde_json::Value;

use sinvar::model::{potential_intermediate, potential_v, potential_v_tilde, EnergyPoint, ModelParams};
use sinvar::oracle::{cross_validate, oracle_spectrum, BoundaryRule, GridSpec};
use sinvar::sge::sge_terms;
use sinvar::spectrum::{build_spectrum, ScanConfig, SpectrumResult};
use sinvar::verify::{run_suite, Suite, DEFAULT_SEED};
use sinvar::wavefunction::{normalized_wavefunction, DEFAULT_SAMPLES};

use crate::output::{int, num, Document};
use crate::{EtaArgs, Failure};

/// Levels above this index are not compared with the oracle.
const ORACLE_MAX_LEVELS: usize = 10;

#[derive(Args)]
pub struct PotentialArgs {
    /// Parameter a > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub x_max: f64,
    /// Number of rows.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
}

#[derive(Args)]
pub struct SgeScanArgs {
    #[command(flatten)]
    pub eta: EtaArgs,
    /// Defaults to η − 0.5.
    #[arg(long, allow_hyphen_values = true)]
    pub y_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_max: Option<f64>,
    /// Number of rows.
    #[arg(long, default_value_t = 501)]
    pub n: usize,
}

#[derive(Args)]
pub struct ScanArgs {
    /// Defaults to η − 0.5.
    #[arg(long, allow_hyphen_values = true)]
    pub y_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_max: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub refine_tol: Option<f64>,
    #[arg(long)]
    pub accept_tol: Option<f64>,
}

impl ScanArgs {
    fn config(&self, eta: f64) -> Result<ScanConfig, Failure> {
        let d = ScanConfig::default_for(eta);
        Ok(ScanConfig::new(
            self.y_min.unwrap_or(d.y_min),
            self.y_max.unwrap_or(d.y_max),
            self.step.unwrap_or(d.step),
            self.refine_tol.unwrap_or(d.refine_tol),
            self.accept_tol.unwrap_or(d.accept_tol),
        )?)
    }
}

#[derive(Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub eta: EtaArgs,
    #[command(flatten)]
    pub scan: ScanArgs,
    /// Emit only the lowest levels.
    #[arg(long)]
    pub n_levels: Option<usize>,
    /// Cross-validate against the finite-difference eigensolver.
    #[arg(long)]
    pub with_oracle: bool,
    /// Relative tolerance of the oracle comparison.
    #[arg(long, default_value_t = 1e-3)]
    pub oracle_tol: f64,
}

#[derive(Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub eta: EtaArgs,
    #[command(flatten)]
    pub scan: ScanArgs,
    /// Level index, starting at 1.
    #[arg(long)]
    pub level: usize,
    /// Samples on the half-line (odd).
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub n_points: usize,
    /// Largest x sampled; defaults to where the tail is resolved.
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Extend to x < 0 by parity.
    #[arg(long)]
    pub mirror: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Specfun,
    Model,
    Sge,
    All,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: SuiteArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

fn params(eta: f64) -> Result<ModelParams, Failure> {
    Ok(ModelParams::from_eta(eta)?)
}

fn scan_value(cfg: &ScanConfig) -> Value {
    serde_json::to_value(cfg).unwrap_or(Value::Null)
}

pub fn potential(args: &PotentialArgs) -> Result<Document, Failure> {
    let p = ModelParams::new(args.a)?;
    if args.n < 2 {
        return Err(Failure::Usage(format!("--n must be at least 2, got {}", args.n)));
    }
    if !(args.x_min < args.x_max) {
        return Err(Failure::Usage(format!("need x-min < x-max, got [{}, {}]", args.x_min, args.x_max)));
    }
    let h = (args.x_max - args.x_min) / (args.n - 1) as f64;
    let mut doc = Document::new("potential", Some(p.a), Some(p.eta), None, Value::Null);
    doc.columns = vec!["x", "v", "v_tilde", "v_int"];
    for i in 0..args.n {
        let x = if i + 1 == args.n { args.x_max } else { args.x_min + i as f64 * h };
        if x == 0.0 {
            return Err(Failure::Usage(
                "the x grid hits the singular point x = 0; shift the range or change --n".into(),
            ));
        }
        doc.rows.push(vec![
            num(x),
            num(potential_v(x, &p)?),
            num(potential_v_tilde(x, &p)?),
            if x > 0.0 { num(potential_intermediate(x, &p)?) } else { Value::Null },
        ]);
    }
    Ok(doc)
}

pub fn sge_scan(args: &SgeScanArgs) -> Result<Document, Failure> {
    let EtaArgs { eta, extension } = args.eta;
    let p = params(eta)?;
    if args.n < 2 {
        return Err(Failure::Usage(format!("--n must be at least 2, got {}", args.n)));
    }
    let d = ScanConfig::default_for(eta);
    let (lo, hi) = (args.y_min.unwrap_or(d.y_min), args.y_max.unwrap_or(d.y_max));
    let cfg = ScanConfig::new(lo, hi, (hi - lo) / (args.n - 1) as f64, d.refine_tol, d.accept_tol)?;
    let mut doc = Document::new("sge-scan", Some(p.a), Some(eta), Some(extension.as_str()), scan_value(&cfg));
    doc.columns = vec!["y", "value", "first", "second"];
    for i in 0..args.n {
        let y = if i + 1 == args.n { hi } else { lo + i as f64 * cfg.step };
        let t = sge_terms(extension, y, eta)?;
        doc.rows.push(vec![num(y), num(t.value), num(t.first), num(t.second)]);
    }
    Ok(doc)
}

fn level_warning(s: &SpectrumResult) {
    let off: Vec<usize> = s.levels.iter().filter(|l| l.nodes + 1 != l.n).map(|l| l.n).collect();
    if !off.is_empty() {
        eprintln!("warning: node counts disagree with level index at levels {off:?}");
    }
    if !s.flagged.is_empty() {
        eprintln!("warning: {} unresolved or degenerate roots flagged: {:?}", s.flagged.len(), s.flagged);
    }
}

pub fn spectrum(args: &SpectrumArgs) -> Result<(Document, bool), Failure> {
    let EtaArgs { eta, extension } = args.eta;
    let p = params(eta)?;
    let cfg = args.scan.config(eta)?;
    let s = build_spectrum(eta, extension, &cfg, &p)?;
    level_warning(&s);
    let n = args.n_levels.unwrap_or(s.levels.len()).min(s.levels.len());
    let levels = &s.levels[..n];

    let mut doc = Document::new("spectrum", Some(p.a), Some(eta), Some(extension.as_str()), scan_value(&cfg));
    doc.meta("flagged", s.flagged.iter().copied().map(num).collect());
    doc.columns = vec!["n", "y", "e", "nodes", "residual"];
    doc.rows = levels.iter().map(|l| vec![int(l.n), num(l.y), num(l.e), int(l.nodes), num(l.residual)]).collect();

    let mut ok = true;
    if args.with_oracle && n > 0 {
        let k = n.min(ORACLE_MAX_LEVELS);
        let grid = GridSpec::oracle_default();
        let oracle = oracle_spectrum(&p, BoundaryRule::for_extension(extension), &grid, k)?;
        let oy: Vec<f64> = oracle.iter().map(|l| l.y).collect();
        let sy: Vec<f64> = levels[..k].iter().map(|l| l.y).collect();
        let report = cross_validate(&sy, &oy, args.oracle_tol)?;
        ok = report.pass;
        doc.meta("oracle_grid", serde_json::to_value(grid).unwrap_or(Value::Null));
        doc.meta("oracle_levels", int(k));
        doc.meta("oracle_rel_tol", num(args.oracle_tol));
        doc.meta("oracle_max_rel_dev", num(report.max_rel_dev));
        doc.meta("oracle_pass", Value::Bool(report.pass));
        doc.columns.extend(["oracle_y", "oracle_nodes", "rel_dev"]);
        for (i, row) in doc.rows.iter_mut().enumerate() {
            match (oracle.get(i), report.levels.get(i)) {
                (Some(o), Some(c)) => row.extend([num(o.y), int(o.nodes), num(c.rel_dev)]),
                _ => row.extend([Value::Null, Value::Null, Value::Null]),
            }
        }
        if !ok {
            eprintln!(
                "oracle cross-validation FAIL: max relative deviation {:.3e} > {:.1e}",
                report.max_rel_dev, args.oracle_tol
            );
        }
    }
    Ok((doc, ok))
}

pub fn wavefunction(args: &WavefunctionArgs) -> Result<Document, Failure> {
    let EtaArgs { eta, extension } = args.eta;
    let p = params(eta)?;
    let cfg = args.scan.config(eta)?;
    let s = build_spectrum(eta, extension, &cfg, &p)?;
    let level = *s.level(args.level)?;
    let ep = EnergyPoint::from_y(level.y, &p);
    let t = normalized_wavefunction(&ep, extension, &p, args.n_points, args.x_max, args.mirror)?;
    let mut doc = Document::new("wavefunction", Some(p.a), Some(eta), Some(extension.as_str()), scan_value(&cfg));
    doc.meta("level", int(level.n));
    doc.meta("y", num(level.y));
    doc.meta("e", num(level.e));
    doc.meta("nodes", int(level.nodes));
    doc.meta("sign_changes", int(t.sign_changes()));
    doc.meta("parity", serde_json::to_value(t.parity).unwrap_or(Value::Null));
    doc.meta("mirrored", Value::Bool(args.mirror));
    doc.meta("x_cut", num(t.x_cut));
    doc.columns = vec!["x", "psi"];
    doc.rows = t.x.iter().zip(&t.psi).map(|(x, v)| vec![num(*x), num(*v)]).collect();
    Ok(doc)
}

pub fn verify(args: &VerifyArgs) -> Result<(Document, bool), Failure> {
    let suites: Vec<Suite> = match args.suite {
        SuiteArg::Specfun => vec![Suite::Specfun],
        SuiteArg::Model => vec![Suite::Model],
        SuiteArg::Sge => vec![Suite::Sge],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let checks: Vec<_> = suites.iter().flat_map(|s| run_suite(*s, args.seed)).collect();
    let ok = checks.iter().all(|c| c.pass);
    for c in &checks {
        eprintln!(
            "{} [{}] {}: {:.3e} (tol {:.1e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.suite.as_str(),
            c.name,
            c.measured,
            c.tolerance
        );
    }
    let mut doc = Document::new("verify", None, None, None, Value::Null);
    doc.meta("seed", Value::from(args.seed));
    doc.meta("pass", Value::Bool(ok));
    doc.columns = vec!["suite", "check", "measured", "tolerance", "pass"];
    doc.rows = checks
        .iter()
        .map(|c| vec![c.suite.as_str().into(), c.name.clone().into(), num(c.measured), num(c.tolerance), c.pass.into()])
        .collect();
    Ok((doc, ok))
}
