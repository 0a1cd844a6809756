//! Root scanning and refinement of the SGEs, node counting, and assembly of
//! the discrete spectrum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{outer_turning_point, BoundStateSampler, EnergyPoint, ExtensionChoice, ModelParams};
use crate::oracle::GridSpec;
use crate::sge::{sge_terms, SgeTerms};

/// Bracket width at which [`refine_root`] stops.
pub const ROOT_WIDTH: f64 = 1e-12;

/// Reliability below which a sampled Ψ is treated as rounding noise.
const NODE_RELIABILITY_FLOOR: f64 = 1e-6;

/// Largest ξ admitted on a node-counting grid.
const NODE_XI_CAP: f64 = 280.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub y_min: f64,
    pub y_max: f64,
    pub step: f64,
    pub refine_tol: f64,
    pub accept_tol: f64,
}

impl ScanConfig {
    pub fn new(y_min: f64, y_max: f64, step: f64, refine_tol: f64, accept_tol: f64) -> Result<Self> {
        if !(y_min < y_max && y_min.is_finite() && y_max.is_finite()) {
            return Err(Error::Domain(format!("scan needs y_min < y_max (got {y_min}, {y_max})")));
        }
        if !(step > 0.0 && refine_tol > 0.0 && accept_tol > 0.0) {
            return Err(Error::Domain("scan step and tolerances must be positive".into()));
        }
        Ok(Self { y_min, y_max, step, refine_tol, accept_tol })
    }

    /// y ∈ [η − 0.5, 10], step 0.02, refine_tol 1e−10, accept_tol 1e−8.
    pub fn default_for(eta: f64) -> Self {
        Self { y_min: eta - 0.5, y_max: 10.0, step: 0.02, refine_tol: 1e-10, accept_tol: 1e-8 }
    }

    /// Scan abscissae: y_min + i·step, closed by y_max.
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.y_max - self.y_min) / self.step).ceil() as usize;
        let mut ys: Vec<f64> = (0..n).map(|i| self.y_min + i as f64 * self.step).collect();
        if ys.last().is_none_or(|y| *y < self.y_max) {
            ys.push(self.y_max);
        }
        ys
    }
}

/// Sign-change brackets and flagged touch points of a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub brackets: Vec<(f64, f64)>,
    /// Local minima of |f| that reach zero without a sign change.
    pub flagged: Vec<f64>,
}

fn map_points<F: Fn(f64) -> f64 + Sync>(f: &F, ys: &[f64]) -> Vec<f64> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        ys.par_iter().map(|y| f(*y)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ys.iter().map(|y| f(*y)).collect()
    }
}

/// All sign-change intervals of `f` on the scan grid of `cfg`.
pub fn scan_roots<F: Fn(f64) -> f64 + Sync>(f: F, cfg: &ScanConfig) -> ScanOutcome {
    let ys = cfg.grid();
    let vs = map_points(&f, &ys);
    let n = ys.len();
    let mut brackets = Vec::new();
    let mut flagged = Vec::new();
    for i in 0..n {
        let v = vs[i];
        if !v.is_finite() {
            continue;
        }
        let prev = if i > 0 { Some(vs[i - 1]).filter(|x| x.is_finite()) } else { None };
        let next = if i + 1 < n { Some(vs[i + 1]).filter(|x| x.is_finite()) } else { None };
        if v == 0.0 {
            match (prev, next) {
                (Some(a), Some(b)) if a != 0.0 && b != 0.0 && (a > 0.0) == (b > 0.0) => flagged.push(ys[i]),
                _ => brackets.push((ys[i], ys[i])),
            }
            continue;
        }
        if let Some(b) = next {
            if b != 0.0 && (v > 0.0) != (b > 0.0) {
                brackets.push((ys[i], ys[i + 1]));
            }
        }
        if let (Some(a), Some(b)) = (prev, next) {
            let same_side = a != 0.0 && b != 0.0 && (a > 0.0) == (v > 0.0) && (b > 0.0) == (v > 0.0);
            if same_side && v.abs() < a.abs() && v.abs() <= b.abs() {
                let curv = 0.5 * (a - 2.0 * v + b);
                let slope = 0.5 * (b - a);
                let extreme = v - slope * slope / (4.0 * curv);
                if v.signum() * extreme <= 1e-9 * a.abs().max(b.abs()) {
                    let t = -slope / (2.0 * curv);
                    flagged.push(ys[i] + t * cfg.step);
                }
            }
        }
    }
    ScanOutcome { brackets, flagged }
}

/// Bisection to a bracket narrower than `width` (and never wider than [`ROOT_WIDTH`]),
/// finished by a secant step inside the final bracket.
pub fn refine_root<F: Fn(f64) -> f64>(f: F, bracket: (f64, f64), width: f64) -> Result<f64> {
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) || (flo > 0.0) == (fhi > 0.0) {
        return Err(Error::BracketInvalid { lo, hi });
    }
    let width = width.min(ROOT_WIDTH);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= width || mid <= lo || mid >= hi {
            let t = flo / (flo - fhi);
            return Ok(if t.is_finite() { (lo + t * (hi - lo)).clamp(lo, hi) } else { mid });
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if !fm.is_finite() {
            return Err(Error::Convergence { what: "refine_root (non-finite value)", iterations: 0 });
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    Err(Error::Convergence { what: "refine_root", iterations: 200 })
}

/// Refined roots of `f` over the scan grid, ascending, with flagged touch points.
pub fn find_roots<F: Fn(f64) -> f64 + Sync>(f: F, cfg: &ScanConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    let outcome = scan_roots(&f, cfg);
    let roots = outcome.brackets.iter().map(|b| refine_root(&f, *b, cfg.refine_tol)).collect::<Result<Vec<_>>>()?;
    Ok((roots, outcome.flagged))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub n: usize,
    pub y: f64,
    pub e: f64,
    pub nodes: usize,
    /// |SGE| / (|first term| + |second term|) at the root.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eta: f64,
    pub extension: ExtensionChoice,
    pub config: ScanConfig,
    pub levels: Vec<LevelRecord>,
    /// Touch points without sign change, reported and not accepted.
    pub flagged: Vec<f64>,
}

impl SpectrumResult {
    pub fn ys(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.y).collect()
    }

    pub fn level(&self, n: usize) -> Result<&LevelRecord> {
        self.levels.iter().find(|l| l.n == n).ok_or(Error::LevelNotFound { requested: n, available: self.levels.len() })
    }
}

/// Largest x at which ξ stays within the sampling cap.
pub fn max_sample_x(ep: &EnergyPoint) -> f64 {
    let s_cap = 0.5 * (ep.e + (NODE_XI_CAP * 8.0 / 3.0).sqrt());
    s_cap.max(1.0).powf(1.5)
}

/// Node-counting grid: eps = 1e−4, reaching past the outer turning point.
pub fn node_grid(ep: &EnergyPoint, p: &ModelParams) -> GridSpec {
    let base = GridSpec::node_default();
    let x_turn = outer_turning_point(ep.e, p);
    let x_max = (1.25 * x_turn + 1.0).max(base.x_max).min(max_sample_x(ep).max(base.x_max));
    GridSpec { x_max, ..base }
}

/// Sign changes of the decaying Ψ on the sample points of `grid`.
pub fn count_nodes(ep: &EnergyPoint, p: &ModelParams, grid: &GridSpec) -> Result<usize> {
    let mut psi = BoundStateSampler::new(ep, p)?;
    let x_turn = outer_turning_point(ep.e, p);
    let xs = grid.sample_points();
    let mut last_positive: Option<bool> = None;
    let mut last_change: Option<usize> = None;
    let mut count = 0;
    for (i, &x) in xs.iter().enumerate() {
        let c = psi.at(x)?;
        if x > x_turn && c.reliability() < NODE_RELIABILITY_FLOOR {
            break;
        }
        if c.value == 0.0 {
            continue;
        }
        let positive = c.value > 0.0;
        if let Some(prev) = last_positive {
            if prev != positive {
                if let Some(j) = last_change {
                    if i - j < 4 {
                        return Err(Error::GridTooCoarse { x0: xs[j], x1: x, points: i - j });
                    }
                }
                last_change = Some(i);
                count += 1;
            }
        }
        last_positive = Some(positive);
    }
    Ok(count)
}

/// The SGE swings by more than `accept_tol` of its term size across one scan
/// step around `y`; otherwise the sign change is rounding noise.
fn resolved(ext: ExtensionChoice, y: f64, eta: f64, terms: &SgeTerms, cfg: &ScanConfig) -> Result<bool> {
    let h = 0.5 * cfg.step;
    let swing = (sge_terms(ext, y + h, eta)?.value - sge_terms(ext, y - h, eta)?.value).abs();
    let scale = terms.first.abs() + terms.second.abs();
    Ok(scale == 0.0 || swing > cfg.accept_tol * scale)
}

/// Scans the SGE of `ext`, refines and screens its roots, and counts nodes.
pub fn build_spectrum(eta: f64, ext: ExtensionChoice, cfg: &ScanConfig, p: &ModelParams) -> Result<SpectrumResult> {
    if (eta - p.eta).abs() > 1e-12 * eta.abs() {
        return Err(Error::Domain(format!("eta = {eta} is inconsistent with a = {} (eta = {})", p.a, p.eta)));
    }
    let f = |y: f64| sge_terms(ext, y, eta).map(|t| t.value).unwrap_or(f64::NAN);
    let (roots, mut flagged) = find_roots(f, cfg)?;
    let mut accepted = Vec::new();
    for y in roots {
        let terms = sge_terms(ext, y, eta)?;
        if terms.is_artifact(cfg.accept_tol) {
            continue;
        }
        let residual = terms.relative_residual();
        if residual > cfg.accept_tol || !resolved(ext, y, eta, &terms, cfg)? {
            flagged.push(y);
            continue;
        }
        accepted.push((y, residual));
    }
    accepted.sort_by(|a, b| a.0.total_cmp(&b.0));
    accepted.dedup_by(|a, b| (a.0 - b.0).abs() <= ROOT_WIDTH);

    let count = |&(y, _): &(f64, f64)| -> Result<usize> {
        let ep = EnergyPoint::from_y(y, p);
        count_nodes(&ep, p, &node_grid(&ep, p))
    };
    #[cfg(feature = "parallel")]
    let nodes: Vec<Result<usize>> = {
        use rayon::prelude::*;
        accepted.par_iter().map(count).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let nodes: Vec<Result<usize>> = accepted.iter().map(count).collect();

    let levels = accepted
        .iter()
        .zip(nodes)
        .enumerate()
        .map(|(i, (&(y, residual), nodes))| {
            let ep = EnergyPoint::from_y(y, p);
            Ok(LevelRecord { n: i + 1, y, e: ep.e, nodes: nodes?, residual })
        })
        .collect::<Result<Vec<_>>>()?;

    if ext == ExtensionChoice::MinusIdentity && levels.is_empty() && cfg.y_min <= eta && eta <= cfg.y_max {
        return Err(Error::EmptySpectrum(format!("no U = -I level found in [{}, {}]", cfg.y_min, cfg.y_max)));
    }
    flagged.sort_by(f64::total_cmp);
    Ok(SpectrumResult { eta, extension: ext, config: *cfg, levels, flagged })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(lo: f64, hi: f64, step: f64) -> ScanConfig {
        ScanConfig::new(lo, hi, step, 1e-10, 1e-8).unwrap()
    }

    #[test]
    fn linear_function_one_bracket() {
        let out = scan_roots(|y| y - 1.0, &cfg(0.0, 2.0, 0.1));
        assert_eq!(out.brackets.len(), 1);
        let (a, b) = out.brackets[0];
        assert!(a <= 1.0 && 1.0 <= b && b - a <= 0.1 + 1e-12);
    }

    #[test]
    fn double_root_flagged_not_bracketed() {
        let out = scan_roots(|y| (y - 1.0) * (y - 1.0), &cfg(0.0, 2.0, 0.1));
        assert!(out.brackets.is_empty());
        assert_eq!(out.flagged.len(), 1);
        assert!((out.flagged[0] - 1.0).abs() < 1e-9);
        let off_grid = scan_roots(|y| (y - 1.03) * (y - 1.03), &cfg(0.0, 2.0, 0.1));
        assert!(off_grid.brackets.is_empty());
        assert!((off_grid.flagged[0] - 1.03).abs() < 1e-9);
    }

    #[test]
    fn refine_examples() {
        let r = refine_root(|y| y * y - 2.0, (1.0, 2.0), 1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
        let r = refine_root(f64::sin, (3.0, 4.0), 1e-12).unwrap();
        assert!((r - std::f64::consts::PI).abs() < 1e-12);
        assert!(matches!(refine_root(|y| y * y + 1.0, (0.0, 1.0), 1e-12), Err(Error::BracketInvalid { .. })));
    }

    #[test]
    fn grid_closes_at_y_max() {
        let g = cfg(0.0, 1.0, 0.3).grid();
        assert_eq!(g.len(), 5);
        assert_eq!(*g.last().unwrap(), 1.0);
    }
}
