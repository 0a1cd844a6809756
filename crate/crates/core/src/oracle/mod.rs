//! Independent finite-volume eigensolver for −Ψ″ + VΨ = EΨ on x > 0.
//!
//! Writing Ψ = Ψ₀ψ with s = x^{2/3} turns the equation into the regular
//! Sturm–Liouville problem
//!
//! −(p ψ′)′ = (E − λ) w ψ,  p = (2/3)e^{2Q},  w = (3/2) s e^{2Q},
//! Q(s) = −(3/4)s² + (3λ/4)s,
//!
//! on s ∈ [0, x_max^{2/3}]. Both local behaviours x^{1/6} and x^{5/6} of Ψ
//! become analytic in s, and the boundary conditions at the origin are
//!
//! * U = −I: W[Ψ, φ⁽¹⁾] = 0 ⇔ ψ′(0) = 0,
//! * U = +I: W[Ψ, φ⁽²⁾] = 0 ⇔ ψ′(0) = κψ(0), κ = χ′(0)/χ(0),
//!
//! with χ = φ⁽²⁾/Ψ₀ taken from [`crate::model::mode2_profile`]. The far end
//! is Dirichlet. The discretization is a 3-point finite-volume stencil with
//! lumped mass, symmetrized as M^{−1/2} A M^{−1/2}.

pub mod tridiagonal;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{mode2_log_derivative_at_origin, ExtensionChoice, ModelParams, Y_PER_E};
pub use tridiagonal::{lowest_eigenvalues, sign_changes, Eigenpair, TridiagonalSystem};

/// Half-line discretization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub eps: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(eps: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(eps > 0.0 && eps < x_max && x_max.is_finite()) {
            return Err(Error::Domain(format!("grid needs 0 < eps < x_max (eps = {eps}, x_max = {x_max})")));
        }
        if n_points < 100 {
            return Err(Error::GridTooSmall { needed: 100, got: n_points });
        }
        Ok(Self { eps, x_max, n_points })
    }

    /// Eigensolver default: x_max = 40, 16000 cells.
    pub fn oracle_default() -> Self {
        Self { eps: 1e-3, x_max: 40.0, n_points: 16_000 }
    }

    /// Node-counting default: eps = 1e−4, x_max = 6, 20000 points.
    pub fn node_default() -> Self {
        Self { eps: 1e-4, x_max: 6.0, n_points: 20_000 }
    }

    /// Sample points: log-spaced on [eps, x_switch], uniform beyond.
    pub fn sample_points(&self) -> Vec<f64> {
        let x_switch = (0.05_f64).min(0.1 * self.x_max).max(self.eps);
        let n_log = if x_switch > self.eps { self.n_points / 10 } else { 0 };
        let n_lin = self.n_points - n_log;
        let mut xs = Vec::with_capacity(self.n_points);
        let ratio = (x_switch / self.eps).ln();
        for i in 0..n_log {
            xs.push(self.eps * (ratio * i as f64 / n_log as f64).exp());
        }
        let h = (self.x_max - x_switch) / (n_lin - 1) as f64;
        for i in 0..n_lin {
            xs.push(x_switch + i as f64 * h);
        }
        xs
    }
}

/// Boundary condition at the origin, one per extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryRule {
    /// Ψ Wronskian-orthogonal to φ⁽¹⁾ (U = −I).
    MatchMode1,
    /// Ψ Wronskian-orthogonal to φ⁽²⁾ (U = +I).
    MatchMode2,
}

impl BoundaryRule {
    pub fn for_extension(ext: ExtensionChoice) -> Self {
        match ext {
            ExtensionChoice::MinusIdentity => Self::MatchMode1,
            ExtensionChoice::PlusIdentity => Self::MatchMode2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndCondition {
    Dirichlet,
    /// u′ = κu at the left end (κ = 0 is Neumann).
    Robin(f64),
}

/// −(p u′)′ + q u = μ w u.
pub struct SturmLiouville<'a> {
    pub p: &'a dyn Fn(f64) -> f64,
    pub q: &'a dyn Fn(f64) -> f64,
    pub w: &'a dyn Fn(f64) -> f64,
}

/// Symmetrized system with the data needed to map back to the problem.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteProblem {
    pub system: TridiagonalSystem,
    /// Coordinates of the unknowns.
    pub nodes: Vec<f64>,
    /// u = inv_sqrt_mass ∘ v for an eigenvector v of `system`.
    pub inv_sqrt_mass: Vec<f64>,
    /// Added to eigenvalues of `system` to give energies.
    pub energy_shift: f64,
}

/// Finite-volume assembly on [a, b] with `n` cells; the right end is Dirichlet.
pub fn assemble(sl: &SturmLiouville<'_>, a: f64, b: f64, n: usize, left: EndCondition) -> Result<DiscreteProblem> {
    if n < 4 {
        return Err(Error::GridTooSmall { needed: 4, got: n });
    }
    let h = (b - a) / n as f64;
    let s = |i: usize| a + i as f64 * h;
    let first = match left {
        EndCondition::Dirichlet => 1,
        EndCondition::Robin(_) => 0,
    };
    let mut diag = Vec::with_capacity(n - first);
    let mut off = Vec::with_capacity(n - first);
    let mut mass = Vec::with_capacity(n - first);
    let mut nodes = Vec::with_capacity(n - first);
    for i in first..n {
        let si = s(i);
        let p_right = (sl.p)(si + 0.5 * h);
        let (stiff, m) = if i == 0 {
            let kappa = match left {
                EndCondition::Robin(k) => k,
                EndCondition::Dirichlet => 0.0,
            };
            let q_half = (sl.q)(si) * 0.5 * h;
            let w_half = h / 12.0 * ((sl.w)(si) + 4.0 * (sl.w)(si + 0.25 * h) + (sl.w)(si + 0.5 * h));
            (p_right / h + q_half + (sl.p)(si) * kappa, w_half)
        } else {
            let p_left = (sl.p)(si - 0.5 * h);
            ((p_left + p_right) / h + (sl.q)(si) * h, (sl.w)(si) * h)
        };
        if !(m > 0.0) {
            return Err(Error::Domain(format!("non-positive mass {m} at node {si}")));
        }
        diag.push(stiff);
        mass.push(m);
        nodes.push(si);
        if i + 1 < n {
            off.push(-p_right / h);
        }
    }
    let inv_sqrt_mass: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    for (i, d) in diag.iter_mut().enumerate() {
        *d *= inv_sqrt_mass[i] * inv_sqrt_mass[i];
    }
    for (i, o) in off.iter_mut().enumerate() {
        *o *= inv_sqrt_mass[i] * inv_sqrt_mass[i + 1];
    }
    Ok(DiscreteProblem { system: TridiagonalSystem::new(diag, off)?, nodes, inv_sqrt_mass, energy_shift: 0.0 })
}

/// The model problem in s = x^{2/3} with the boundary row of `rule`.
pub fn discretize(p: &ModelParams, grid: &GridSpec, rule: BoundaryRule) -> Result<DiscreteProblem> {
    let lambda = p.lambda;
    let two_q = move |s: f64| -1.5 * s * s + 1.5 * lambda * s;
    let pf = move |s: f64| 2.0 / 3.0 * two_q(s).exp();
    let wf = move |s: f64| 1.5 * s * two_q(s).exp();
    let qf = |_: f64| 0.0;
    let sl = SturmLiouville { p: &pf, q: &qf, w: &wf };
    let left = match rule {
        BoundaryRule::MatchMode1 => EndCondition::Robin(0.0),
        BoundaryRule::MatchMode2 => EndCondition::Robin(mode2_log_derivative_at_origin(p)?),
    };
    let s_max = (grid.x_max * grid.x_max).cbrt();
    let mut problem = assemble(&sl, 0.0, s_max, grid.n_points, left)?;
    problem.energy_shift = lambda;
    Ok(problem)
}

/// An oracle level in the same units as the SGE spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleLevel {
    pub n: usize,
    pub y: f64,
    pub e: f64,
    pub nodes: usize,
    /// Energies on the n-cell and 2n-cell grids before extrapolation.
    pub e_coarse: f64,
    pub e_fine: f64,
}

impl DiscreteProblem {
    /// Values of the unknown function at `nodes` for an eigenvector of `system`.
    pub fn solution_values(&self, vector: &[f64]) -> Vec<f64> {
        vector.iter().zip(&self.inv_sqrt_mass).map(|(v, m)| v * m).collect()
    }
}

/// Energies of the discretized problem (no extrapolation), ascending, with
/// unit eigenvectors of the symmetrized system.
pub fn energies(problem: &DiscreteProblem, k: usize) -> Result<Vec<Eigenpair>> {
    let mut pairs = lowest_eigenvalues(&problem.system, k)?;
    for pair in pairs.iter_mut() {
        pair.value += problem.energy_shift;
    }
    Ok(pairs)
}

/// Lowest k levels from grids of n and 2n cells, Richardson-extrapolated.
pub fn oracle_spectrum(p: &ModelParams, rule: BoundaryRule, grid: &GridSpec, k: usize) -> Result<Vec<OracleLevel>> {
    let fine_grid = GridSpec { n_points: 2 * grid.n_points, ..*grid };
    let solve = |g: &GridSpec| -> Result<Vec<Eigenpair>> { energies(&discretize(p, g, rule)?, k) };
    #[cfg(feature = "parallel")]
    let (coarse, fine) = rayon::join(|| solve(grid), || solve(&fine_grid));
    #[cfg(not(feature = "parallel"))]
    let (coarse, fine) = (solve(grid), solve(&fine_grid));
    let (coarse, fine) = (coarse?, fine?);
    Ok(coarse
        .iter()
        .zip(fine.iter())
        .enumerate()
        .map(|(i, (c, f))| {
            let e = (4.0 * f.value - c.value) / 3.0;
            OracleLevel {
                n: i + 1,
                y: Y_PER_E * e,
                e,
                nodes: sign_changes(&f.vector, 1e-8),
                e_coarse: c.value,
                e_fine: f.value,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelComparison {
    pub n: usize,
    pub sge_y: f64,
    pub oracle_y: f64,
    pub rel_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidationReport {
    pub rel_tol: f64,
    pub levels: Vec<LevelComparison>,
    pub max_rel_dev: f64,
    pub pass: bool,
}

/// Pairs SGE and oracle levels (both ascending y) in order.
pub fn cross_validate(sge_y: &[f64], oracle_y: &[f64], rel_tol: f64) -> Result<CrossValidationReport> {
    if sge_y.is_empty() || oracle_y.is_empty() {
        return Err(Error::CountMismatch { sge: sge_y.len(), oracle: oracle_y.len() });
    }
    let top = sge_y[sge_y.len() - 1].min(oracle_y[oracle_y.len() - 1]);
    let limit = top + rel_tol * top.abs().max(1.0);
    let n_sge = sge_y.iter().filter(|y| **y <= limit).count();
    let n_oracle = oracle_y.iter().filter(|y| **y <= limit).count();
    if n_sge != n_oracle {
        return Err(Error::CountMismatch { sge: n_sge, oracle: n_oracle });
    }
    let levels: Vec<LevelComparison> = sge_y
        .iter()
        .zip(oracle_y)
        .take(n_sge)
        .enumerate()
        .map(|(i, (s, o))| LevelComparison { n: i + 1, sge_y: *s, oracle_y: *o, rel_dev: ((s - o) / o).abs() })
        .collect();
    let max_rel_dev = levels.iter().fold(0.0_f64, |m, l| m.max(l.rel_dev));
    Ok(CrossValidationReport { rel_tol, pass: max_rel_dev <= rel_tol, levels, max_rel_dev })
}
