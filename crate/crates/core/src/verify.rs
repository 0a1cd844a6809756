//! Invariant suites with measured values and pinned tolerances.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{
    bound_state, combination, decay_amplitudes, phi, potential_intermediate, potential_intermediate_from_f,
    potential_v, potential_v_tilde, psi0, superpotential_w, EnergyPoint, ModelParams, SolutionBranch,
};
use crate::numeric::{d1_central, d2_central};
use crate::sge::{
    connection_residual, reference_mode, sge_minus, sge_minus_terms, wronskian_limit_mode2, wronskian_limit_phi1,
    wronskian_limit_phi1_unsimplified, wronskian_limit_phi2, wronskian_limit_phi2_unsimplified, ReferenceMode,
};
use crate::specfun::{gamma, hyp1f1, hyp1f1_derivative, kummer_asymptotic, KummerArgs};

pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Specfun,
    Model,
    Sge,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Specfun, Suite::Model, Suite::Sge];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Specfun => "specfun",
            Self::Model => "model",
            Self::Sge => "sge",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(suite: Suite, name: &str, measured: Result<f64>, tolerance: f64) -> Self {
        let measured = measured.unwrap_or(f64::NAN);
        Self { suite, name: name.to_string(), measured, tolerance, pass: measured <= tolerance }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(value: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        value.abs()
    } else {
        value.abs() / scale
    }
}

/// Max relative residual of 2αM(α+1,3/2;z) − (2α−1)M(α,3/2;z) − M(α,1/2;z) over
/// α ∈ [−5, 5], z ∈ (0, 40].
pub fn recurrence_a_residual(samples: usize, seed: u64) -> Result<f64> {
    let mut r = rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let a: f64 = r.gen_range(-5.0..=5.0);
        let z: f64 = 40.0 * (1.0 - r.gen::<f64>());
        let t1 = 2.0 * a * hyp1f1(a + 1.0, 1.5, z)?;
        let t2 = (2.0 * a - 1.0) * hyp1f1(a, 1.5, z)?;
        let t3 = hyp1f1(a, 0.5, z)?;
        worst = worst.max(rel(t1 - t2 - t3, t1.abs() + t2.abs() + t3.abs()));
    }
    Ok(worst)
}

/// Max relative residual of E²M(α+3/2,5/2;3E²/8) − 4[M(α+3/2,3/2;3E²/8) − M(α+1/2,3/2;3E²/8)]
/// over α ∈ [−5, 5] and 3E²/8 ≤ 40.
pub fn recurrence_b_residual(samples: usize, seed: u64) -> Result<f64> {
    let mut r = rng(seed);
    let e_max = (40.0_f64 * 8.0 / 3.0).sqrt();
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let a: f64 = r.gen_range(-5.0..=5.0);
        let e: f64 = r.gen_range(-e_max..=e_max);
        let z = 3.0 * e * e / 8.0;
        let t1 = e * e * hyp1f1(a + 1.5, 2.5, z)?;
        let t2 = 4.0 * hyp1f1(a + 1.5, 1.5, z)?;
        let t3 = 4.0 * hyp1f1(a + 0.5, 1.5, z)?;
        worst = worst.max(rel(t1 - t2 + t3, t1.abs() + t2.abs() + t3.abs()));
    }
    Ok(worst)
}

/// |M − leading asymptotic| / M at (a, c, z) = (2, 3/2, 60).
pub fn asymptotic_deviation() -> Result<f64> {
    let args = KummerArgs::new(2.0, 1.5, 60.0)?;
    let m = hyp1f1(2.0, 1.5, 60.0)?;
    Ok(rel(m - kummer_asymptotic(args)?, m))
}

/// Max relative deviation of Γ(x)Γ(1−x) from π/sin(πx) on x ∈ (0, 1).
pub fn reflection_residual(samples: usize, seed: u64) -> Result<f64> {
    let mut r = rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let x: f64 = 1e-3 + (1.0 - 2e-3) * r.gen::<f64>();
        let exact = PI / (PI * x).sin();
        worst = worst.max(rel(gamma(x)? * gamma(1.0 - x)? - exact, exact));
    }
    Ok(worst)
}

/// Max |M(a, c; 0) − 1| over random valid (a, c).
pub fn kummer_origin_residual(samples: usize, seed: u64) -> Result<f64> {
    let mut r = rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let a: f64 = r.gen_range(-30.0..=30.0);
        let c: f64 = r.gen_range(0.1..=10.0);
        worst = worst.max((hyp1f1(a, c, 0.0)? - 1.0).abs());
    }
    Ok(worst)
}

/// Max relative deviation of (a/c)M(a+1,c+1;z) from a central difference of M.
pub fn derivative_identity_residual(samples: usize, seed: u64) -> Result<f64> {
    let mut r = rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let a: f64 = r.gen_range(-5.0..=5.0);
        let c = [0.5, 1.5, 2.5][r.gen_range(0..3)];
        let z: f64 = r.gen_range(0.5..=20.0);
        let exact = hyp1f1_derivative(a, c, z)?;
        let fd = d1_central(|t| hyp1f1(a, c, t).unwrap_or(f64::NAN), z, 1e-3);
        let scale = exact.abs().max(1e-3 * hyp1f1(a, c, z)?.abs());
        worst = worst.max(rel(fd - exact, scale));
    }
    Ok(worst)
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let r = (hi / lo).ln();
    (0..n).map(|i| lo * (r * i as f64 / (n - 1) as f64).exp()).collect()
}

/// max |V(x; a+1) − Ṽ(x; a)| over x ∈ [1e−3, 10] (500 log points), a ∈ {0.5, 1, 2, 3}.
pub fn shape_invariance_residual() -> Result<f64> {
    let mut worst = 0.0_f64;
    for a in [0.5, 1.0, 2.0, 3.0] {
        let p = ModelParams::new(a)?;
        let q = ModelParams::new(a + 1.0)?;
        for x in log_grid(1e-3, 10.0, 500) {
            worst = worst.max((potential_v(x, &q)? - potential_v_tilde(x, &p)?).abs());
        }
    }
    Ok(worst)
}

/// max |V(x) − V(−x)| over a log grid and several a.
pub fn evenness_residual() -> Result<f64> {
    let mut worst = 0.0_f64;
    for a in [0.5, 1.0, 2.0, 4.5] {
        let p = ModelParams::new(a)?;
        for x in log_grid(1e-3, 10.0, 200) {
            worst = worst.max((potential_v(x, &p)? - potential_v(-x, &p)?).abs());
        }
    }
    Ok(worst)
}

/// Max relative residual of −Φ″ + VΦ − EΦ for both branches on x ∈ [0.05, 3].
pub fn ode_residual(energies: usize, seed: u64) -> Result<f64> {
    let mut r = rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..energies {
        let eta: f64 = r.gen_range(-3.0..=-1.0);
        let e: f64 = r.gen_range(-10.0..=10.0);
        let p = ModelParams::from_eta(eta)?;
        let ep = EnergyPoint::from_energy(e, &p);
        for branch in [SolutionBranch::Phi1, SolutionBranch::Phi2] {
            for x in log_grid(0.05, 3.0, 60) {
                let f = |t: f64| phi(branch, t, &ep, &p).unwrap_or(f64::NAN);
                let v = f(x);
                let d2 = d2_central(f, x, 2e-3 * x);
                let pot = potential_v(x, &p)?;
                let scale = d2.abs() + (pot * v).abs() + (e * v).abs();
                worst = worst.max(rel(-d2 + pot * v - e * v, scale));
            }
        }
    }
    Ok(worst)
}

/// max |V − (W² − W′ + λ)| and |V_Int − (W² + W′ + λ)| relative, with V_Int in both written forms.
pub fn superpotential_residual() -> Result<f64> {
    let mut worst = 0.0_f64;
    for a in [0.5, 1.0, 2.0, 4.5] {
        let p = ModelParams::new(a)?;
        for x in log_grid(0.05, 10.0, 100) {
            let w = superpotential_w(x, &p)?;
            let w1 = d1_central(|t| superpotential_w(t, &p).unwrap_or(f64::NAN), x, 1e-3 * x);
            let v = potential_v(x, &p)?;
            let vi = potential_intermediate(x, &p)?;
            worst = worst.max(rel(v - (w * w - w1 + p.lambda), v.abs() + w * w + w1.abs()));
            worst = worst.max(rel(vi - (w * w + w1 + p.lambda), vi.abs() + w * w + w1.abs()));
            worst = worst.max(rel(vi - potential_intermediate_from_f(x, &p)?, vi.abs()));
        }
    }
    Ok(worst)
}

/// Ψ₀ solves −Ψ″ + VΨ = λΨ; max relative residual.
pub fn ground_state_residual() -> Result<f64> {
    let mut worst = 0.0_f64;
    for a in [0.5, 2.0, 4.5] {
        let p = ModelParams::new(a)?;
        for x in log_grid(0.05, 4.0, 60) {
            let f = |t: f64| psi0(t, &p).unwrap_or(f64::NAN);
            let v = f(x);
            let d2 = d2_central(f, x, 2e-3 * x);
            let pot = potential_v(x, &p)?;
            let scale = d2.abs() + (pot * v).abs() + (p.lambda * v).abs();
            worst = worst.max(rel(-d2 + pot * v - p.lambda * v, scale));
        }
    }
    Ok(worst)
}

// x^{4/3}-extrapolated Wronskian u′v − uv′ from x₁ = 1e−4 and x₂ = 2e−4.
fn extrapolated_wronskian(u: impl Fn(f64) -> f64, v: impl Fn(f64) -> f64) -> f64 {
    let w = |x: f64| {
        let h = 1e-3 * x;
        d1_central(&u, x, h) * v(x) - u(x) * d1_central(&v, x, h)
    };
    let (x1, x2) = (1e-4_f64, 2e-4_f64);
    let (k1, k2) = (x1.powf(4.0 / 3.0), x2.powf(4.0 / 3.0));
    (w(x1) * k2 - w(x2) * k1) / (k2 - k1)
}

/// Max relative deviation of the closed-form limits W[Φ⁽ⁱ⁾, φ⁽ʲ⁾](0⁺) from extrapolated
/// numerical Wronskians over random (y, η).
pub fn wronskian_limit_residual(samples: usize, seed: u64) -> Result<f64> {
    let mut r = rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let eta: f64 = r.gen_range(-3.0..=-1.0);
        let y: f64 = r.gen_range(-3.0..=6.0);
        let p = ModelParams::from_eta(eta)?;
        let ep = EnergyPoint::from_y(y, &p);
        for branch in [SolutionBranch::Phi1, SolutionBranch::Phi2] {
            let u = |t: f64| phi(branch, t, &ep, &p).unwrap_or(f64::NAN);
            for mode in [ReferenceMode::Mode1, ReferenceMode::Mode2] {
                let v = |t: f64| reference_mode(mode, t, &p).unwrap_or(f64::NAN);
                let closed = match (mode, branch) {
                    (ReferenceMode::Mode1, SolutionBranch::Phi1) => wronskian_limit_phi1(&ep, &p)?,
                    (ReferenceMode::Mode1, SolutionBranch::Phi2) => wronskian_limit_phi2(&ep, &p)?,
                    (ReferenceMode::Mode2, b) => wronskian_limit_mode2(b, &ep, &p)?,
                };
                worst = worst.max(rel(extrapolated_wronskian(u, v) - closed, closed.abs()));
            }
        }
    }
    Ok(worst)
}

/// Max relative difference between the simplified and unsimplified limit forms.
pub fn dual_form_residual(samples: usize, seed: u64) -> Result<f64> {
    let mut r = rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let eta: f64 = r.gen_range(-3.0..=-1.0);
        let y: f64 = r.gen_range(-3.0..=6.0);
        let p = ModelParams::from_eta(eta)?;
        let ep = EnergyPoint::from_y(y, &p);
        let (a, b) = (wronskian_limit_phi1(&ep, &p)?, wronskian_limit_phi1_unsimplified(&ep, &p)?);
        worst = worst.max(rel(a - b, a.abs().max(b.abs())));
        let (a, b) = (wronskian_limit_phi2(&ep, &p)?, wronskian_limit_phi2_unsimplified(&ep, &p)?);
        worst = worst.max(rel(a - b, a.abs().max(b.abs())));
    }
    Ok(worst)
}

/// max |W[φ⁽¹⁾, φ⁽²⁾](x) − 1| over x ∈ [0.05, 3] and several η.
pub fn mode_pairing_residual() -> Result<f64> {
    let mut worst = 0.0_f64;
    for eta in [-1.0, -2.0, -3.0] {
        let p = ModelParams::from_eta(eta)?;
        let u = |t: f64| reference_mode(ReferenceMode::Mode1, t, &p).unwrap_or(f64::NAN);
        let v = |t: f64| reference_mode(ReferenceMode::Mode2, t, &p).unwrap_or(f64::NAN);
        for x in log_grid(0.05, 3.0, 40) {
            let h = 1e-3 * x;
            let w = d1_central(u, x, h) * v(x) - u(x) * d1_central(v, x, h);
            worst = worst.max((w - 1.0).abs());
        }
    }
    Ok(worst)
}

/// |SGE₋(η; η)| for several η.
pub fn ground_root_residual() -> Result<f64> {
    let mut worst = 0.0_f64;
    for eta in [-1.0, -2.0, -3.0, -4.0] {
        worst = worst.max(sge_minus(eta, eta)?.abs());
    }
    Ok(worst)
}

/// Max relative deviation of the U = −I connection residual from √(3/2)·SGE₋.
pub fn residual_proportionality(samples: usize, seed: u64) -> Result<f64> {
    let mut r = rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let eta: f64 = r.gen_range(-3.0..=-1.0);
        let y: f64 = r.gen_range(-3.0..=6.0);
        let p = ModelParams::from_eta(eta)?;
        let ep = EnergyPoint::from_y(y, &p);
        let lhs = connection_residual(crate::model::ExtensionChoice::MinusIdentity, &ep, &p)?;
        let terms = sge_minus_terms(y, eta)?;
        let k = 1.5_f64.sqrt();
        worst = worst.max(rel(lhs - k * terms.value, k * (terms.first.abs() + terms.second.abs())));
    }
    Ok(worst)
}

/// Decay behaviour of Ψ at an accepted root beyond `x_from`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayProbe {
    pub y: f64,
    pub monotone: bool,
    /// |Ψ(x_from + 2)| / |Ψ(x_from)| with N₁ raised by 10%.
    pub perturbed_growth: f64,
}

impl DecayProbe {
    pub fn pass(&self) -> bool {
        self.monotone && self.perturbed_growth > 1.0
    }
}

/// |Ψ| on [x_from, x_from + 5] must decrease; with γ raised by 10% it must grow from x_from to x_from + 2.
pub fn decay_probe(y: f64, p: &ModelParams, x_from: f64) -> Result<DecayProbe> {
    let ep = EnergyPoint::from_y(y, p);
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for i in 0..=500 {
        let x = x_from + 5.0 * i as f64 / 500.0;
        let v = bound_state(x, &ep, p)?.value.abs();
        if v >= prev {
            monotone = false;
        }
        prev = v;
    }
    let (n1, n2) = decay_amplitudes(&ep);
    let near = combination(x_from, &ep, p, 1.1 * n1, n2)?.value.abs();
    let far = combination(x_from + 2.0, &ep, p, 1.1 * n1, n2)?.value.abs();
    Ok(DecayProbe { y, monotone, perturbed_growth: far / near })
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<Check> {
    match suite {
        Suite::Specfun => vec![
            Check::new(suite, "recurrence A (200 samples)", recurrence_a_residual(200, seed), 1e-9),
            Check::new(suite, "recurrence B (200 samples)", recurrence_b_residual(200, seed + 1), 1e-9),
            Check::new(suite, "reflection formula", reflection_residual(200, seed + 2), 1e-10),
            Check::new(suite, "M(a, c; 0) = 1", kummer_origin_residual(100, seed + 3), 0.0),
            Check::new(suite, "derivative identity", derivative_identity_residual(100, seed + 4), 1e-6),
            Check::new(suite, "asymptotic form at z = 60", asymptotic_deviation(), 0.01),
        ],
        Suite::Model => vec![
            Check::new(suite, "shape invariance", shape_invariance_residual(), 1e-12),
            Check::new(suite, "evenness of V", evenness_residual(), 0.0),
            Check::new(suite, "ODE residual of both branches", ode_residual(10, seed), 1e-6),
            Check::new(suite, "superpotential factorization", superpotential_residual(), 1e-8),
            Check::new(suite, "ground state residual", ground_state_residual(), 1e-8),
        ],
        Suite::Sge => vec![
            Check::new(suite, "Wronskian limits (20 samples)", wronskian_limit_residual(20, seed), 1e-5),
            Check::new(suite, "simplified vs unsimplified limits", dual_form_residual(100, seed + 1), 1e-9),
            Check::new(suite, "W[mode 1, mode 2] = 1", mode_pairing_residual(), 1e-8),
            Check::new(suite, "ground root at y = eta", ground_root_residual(), 1e-12),
            Check::new(suite, "connection residual proportional to SGE", residual_proportionality(50, seed + 2), 1e-12),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass() {
        for suite in Suite::ALL {
            for c in run_suite(suite, DEFAULT_SEED) {
                assert!(c.pass, "{} / {}: {:e} > {:e}", suite.as_str(), c.name, c.measured, c.tolerance);
            }
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        assert_eq!(recurrence_a_residual(20, 7).unwrap(), recurrence_a_residual(20, 7).unwrap());
    }
}
