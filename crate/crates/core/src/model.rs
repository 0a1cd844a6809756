//! The potential family V(x; a) = 2(2a − 1)/(3x^{2/3}) − 5/(36x²) + x^{2/3},
//! its partner and intermediate potentials, and the closed-form solutions of
//! −Ψ″ + VΨ = EΨ on x > 0.
//!
//! With f = x^{1/3}, λ = −4√a/√3 and the ground-state factor
//! Ψ₀ = x^{1/6} exp(−(3/4)x^{4/3} + (3λ/4)x^{2/3}), every solution is
//! Ψ₀ · ψ(s) with s = x^{2/3}. The two fundamental solutions are
//!
//! Φ⁽¹⁾ = Ψ₀ e^{(3/4)(E−λ)s} M(α, 1/2; ξ),
//! Φ⁽²⁾ = Ψ₀ e^{(3/4)(E−λ)s} (2s − E) M(α + 1/2, 3/2; ξ),
//!
//! with ξ = (3/8)(2s − E)² and α = (3/32)(λ² − E²). The factor (2s − E) in
//! Φ⁽²⁾ is the signed, analytic form of √ξ (up to √(8/3)).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::UniformSamples;
use crate::specfun::{hyp1f1, reciprocal_gamma, KummerWalker};

/// y / E = √3 / (2√2).
pub const Y_PER_E: f64 = 0.612_372_435_695_794_5;

/// The single physical parameter a > 0 with c = ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub a: f64,
    pub c: f64,
    pub hbar: f64,
    pub lambda: f64,
    pub eta: f64,
}

impl ModelParams {
    pub fn new(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Domain(format!("parameter a must be a finite number > 0, got {a}")));
        }
        let lambda = -4.0 * a.sqrt() / 3f64.sqrt();
        let eta = Y_PER_E * lambda;
        debug_assert!((eta + (2.0 * a).sqrt()).abs() <= 1e-14 * (2.0 * a).sqrt());
        Ok(Self { a, c: 1.0, hbar: 1.0, lambda, eta })
    }

    /// Rejects any c or ħ other than 1.
    pub fn with_units(a: f64, c: f64, hbar: f64) -> Result<Self> {
        if c != 1.0 || hbar != 1.0 {
            return Err(Error::Domain(format!("only c = 1 and hbar = 1 are supported (c = {c}, hbar = {hbar})")));
        }
        Self::new(a)
    }

    /// Parameters from η = −√(2a) < 0.
    pub fn from_eta(eta: f64) -> Result<Self> {
        if !(eta.is_finite() && eta < 0.0) {
            return Err(Error::Domain(format!("eta must be a finite number < 0, got {eta}")));
        }
        let mut p = Self::new(0.5 * eta * eta)?;
        p.eta = eta;
        p.lambda = eta / Y_PER_E;
        Ok(p)
    }

    /// Coefficient d(a) = −16a/3 of the 1/f² term in b(x).
    pub fn d(&self) -> f64 {
        -16.0 * self.a / 3.0
    }
}

/// Self-adjoint extension at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionChoice {
    #[serde(rename = "minus")]
    MinusIdentity,
    #[serde(rename = "plus")]
    PlusIdentity,
}

impl ExtensionChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::MinusIdentity => "minus",
            Self::PlusIdentity => "plus",
        }
    }
}

impl std::fmt::Display for ExtensionChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ExtensionChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" | "-I" | "minus-identity" => Ok(Self::MinusIdentity),
            "plus" | "+I" | "plus-identity" => Ok(Self::PlusIdentity),
            other => Err(Error::Domain(format!("unknown extension '{other}' (expected minus or plus)"))),
        }
    }
}

/// An energy with its scaled form y and Kummer parameter α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyPoint {
    pub e: f64,
    pub y: f64,
    pub alpha: f64,
}

impl EnergyPoint {
    pub fn from_energy(e: f64, p: &ModelParams) -> Self {
        let y = Y_PER_E * e;
        Self { e, y, alpha: 0.25 * (p.eta * p.eta - y * y) }
    }

    pub fn from_y(y: f64, p: &ModelParams) -> Self {
        Self { e: y / Y_PER_E, y, alpha: 0.25 * (p.eta * p.eta - y * y) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionBranch {
    Phi1,
    Phi2,
}

fn require_nonzero(function: &'static str, x: f64) -> Result<()> {
    if x == 0.0 {
        return Err(Error::SingularPoint { function, x });
    }
    Ok(())
}

fn require_positive(function: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0) {
        return Err(Error::SingularPoint { function, x });
    }
    Ok(())
}

/// f(x) = x^{1/3}, odd.
pub fn f_odd(x: f64) -> f64 {
    x.cbrt()
}

/// f²(x) = (x²)^{1/3}, even.
pub fn f_squared(x: f64) -> f64 {
    (x * x).cbrt()
}

pub fn potential_v(x: f64, p: &ModelParams) -> Result<f64> {
    require_nonzero("potential_v", x)?;
    let s = f_squared(x);
    Ok(2.0 * (2.0 * p.a - 1.0) / (3.0 * s) - 5.0 / (36.0 * x * x) + s)
}

pub fn potential_v_tilde(x: f64, p: &ModelParams) -> Result<f64> {
    require_nonzero("potential_v_tilde", x)?;
    let s = f_squared(x);
    Ok(2.0 * (2.0 * p.a + 1.0) / (3.0 * s) - 5.0 / (36.0 * x * x) + s)
}

/// V_Int = x^{2/3} + 7/(36x²) + λ/(3x^{4/3}) + 4a/(3x^{2/3}).
pub fn potential_intermediate(x: f64, p: &ModelParams) -> Result<f64> {
    require_positive("potential_intermediate", x)?;
    let s = f_squared(x);
    Ok(s + 7.0 / (36.0 * x * x) + p.lambda / (3.0 * s * s) + 4.0 * p.a / (3.0 * s))
}

/// V_Int written through f: f² − f″/(2f) + (3/4)(f′/f)² + λ²/(4f²) + λf′/f².
pub fn potential_intermediate_from_f(x: f64, p: &ModelParams) -> Result<f64> {
    require_positive("potential_intermediate_from_f", x)?;
    let (f, f1, f2) = f_derivatives(x);
    let l = p.lambda;
    Ok(f * f - f2 / (2.0 * f) + 0.75 * (f1 / f).powi(2) + l * l / (4.0 * f * f) + l * f1 / (f * f))
}

/// W = f − (f′ + r)/(2f) with r² = −d(a) and r = λ, so that W = −(ln Ψ₀)′.
pub fn superpotential_w(x: f64, p: &ModelParams) -> Result<f64> {
    require_positive("superpotential_w", x)?;
    let minus_d = -p.d();
    if minus_d < 0.0 {
        return Err(Error::Domain(format!("superpotential needs -d(a) >= 0, got {minus_d}")));
    }
    let r = -minus_d.sqrt();
    let (f, f1, _) = f_derivatives(x);
    Ok(f - (f1 + r) / (2.0 * f))
}

/// f, f′, f″ at x > 0.
pub fn f_derivatives(x: f64) -> (f64, f64, f64) {
    let f = x.cbrt();
    let s = f * f;
    (f, 1.0 / (3.0 * s), -2.0 / (9.0 * s * x))
}

/// b(x) = −f′ + f² − f″/(2f) + (f′/(2f))² + d/(4f²).
pub fn b_coefficient(x: f64, p: &ModelParams) -> Result<f64> {
    require_positive("b_coefficient", x)?;
    let (f, f1, f2) = f_derivatives(x);
    Ok(-f1 + f * f - f2 / (2.0 * f) + (f1 / (2.0 * f)).powi(2) + p.d() / (4.0 * f * f))
}

pub fn ln_psi0(x: f64, p: &ModelParams) -> Result<f64> {
    require_positive("psi0", x)?;
    let s = f_squared(x);
    Ok(x.ln() / 6.0 - 0.75 * s * s + 0.75 * p.lambda * s)
}

/// Ψ₀(x) = x^{1/6} exp(−(3/4)x^{4/3} + (3λ/4)x^{2/3}).
pub fn psi0(x: f64, p: &ModelParams) -> Result<f64> {
    Ok(ln_psi0(x, p)?.exp())
}

/// ξ = (3/8)(2f² − E)².
pub fn xi_of_x(x: f64, ep: &EnergyPoint) -> f64 {
    let u = 2.0 * f_squared(x) - ep.e;
    0.375 * u * u
}

/// Φ⁽¹⁾ or Φ⁽²⁾ at x > 0.
pub fn phi(branch: SolutionBranch, x: f64, ep: &EnergyPoint, p: &ModelParams) -> Result<f64> {
    require_positive("phi", x)?;
    let s = f_squared(x);
    let (y, _) = kummer_factor(branch, s, ep)?;
    let prefactor = (ln_psi0(x, p)? + 0.75 * (ep.e - p.lambda) * s).exp();
    Ok(prefactor * y)
}

// y_i as a function of s and its s-derivative.
fn kummer_factor(branch: SolutionBranch, s: f64, ep: &EnergyPoint) -> Result<(f64, f64)> {
    let u = 2.0 * s - ep.e;
    let xi = 0.375 * u * u;
    let xi_s = 1.5 * u;
    let a = ep.alpha;
    match branch {
        SolutionBranch::Phi1 => {
            let m = hyp1f1(a, 0.5, xi)?;
            let dm = if a == 0.0 { 0.0 } else { 2.0 * a * hyp1f1(a + 1.0, 1.5, xi)? };
            Ok((m, dm * xi_s))
        }
        SolutionBranch::Phi2 => {
            let m = hyp1f1(a + 0.5, 1.5, xi)?;
            let dm = (2.0 * a + 1.0) / 3.0 * hyp1f1(a + 1.5, 2.5, xi)?;
            Ok((u * m, 2.0 * m + u * dm * xi_s))
        }
    }
}

/// ψᵢ(s) = Φ⁽ⁱ⁾/Ψ₀ as a function of s = x^{2/3}, with dψᵢ/ds.
pub fn reduced_solution(branch: SolutionBranch, s: f64, ep: &EnergyPoint, p: &ModelParams) -> Result<(f64, f64)> {
    let k = 0.75 * (ep.e - p.lambda);
    let g = (k * s).exp();
    let (y, ys) = kummer_factor(branch, s, ep)?;
    Ok((g * y, g * (k * y + ys)))
}

/// N₁/N₂ = γ that removes the growing part of N₁Φ⁽¹⁾ + N₂Φ⁽²⁾.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DecayRatio {
    Finite(f64),
    /// α = 0, −1, −2, …: N₂ = 0 and Φ⁽¹⁾ alone decays.
    PureBranch1,
}

impl DecayRatio {
    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(v) => v,
            Self::PureBranch1 => f64::INFINITY,
        }
    }
}

/// γ = −√2 Γ(α) / (√3 Γ(α + 1/2)).
pub fn decay_ratio_gamma(ep: &EnergyPoint) -> Result<DecayRatio> {
    let a = ep.alpha;
    if a <= 0.0 && a == a.floor() {
        return Ok(DecayRatio::PureBranch1);
    }
    let g = crate::specfun::gamma(a)?;
    Ok(DecayRatio::Finite(-(2.0f64 / 3.0).sqrt() * g * reciprocal_gamma(a + 0.5)))
}

/// Entire amplitudes (N₁, N₂) = (1/Γ(α + 1/2), −√(3/2)/Γ(α)) with N₁/N₂ = γ.
pub fn decay_amplitudes(ep: &EnergyPoint) -> (f64, f64) {
    (reciprocal_gamma(ep.alpha + 0.5), -(1.5f64).sqrt() * reciprocal_gamma(ep.alpha))
}

/// N₁Φ⁽¹⁾ + N₂Φ⁽²⁾ and the magnitude scale N₁|Φ⁽¹⁾| + N₂|Φ⁽²⁾| it cancels from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Combination {
    pub value: f64,
    pub scale: f64,
}

impl Combination {
    /// |value| / scale; small values mean the sum is dominated by rounding.
    pub fn reliability(&self) -> f64 {
        if self.scale == 0.0 {
            1.0
        } else {
            self.value.abs() / self.scale
        }
    }
}

pub fn combination(x: f64, ep: &EnergyPoint, p: &ModelParams, n1: f64, n2: f64) -> Result<Combination> {
    require_positive("combination", x)?;
    let s = f_squared(x);
    let (y1, _) = kummer_factor(SolutionBranch::Phi1, s, ep)?;
    let y2 = if n2 == 0.0 { 0.0 } else { kummer_factor(SolutionBranch::Phi2, s, ep)?.0 };
    let prefactor = (ln_psi0(x, p)? + 0.75 * (ep.e - p.lambda) * s).exp();
    let t1 = n1 * y1;
    let t2 = n2 * y2;
    Ok(Combination { value: prefactor * (t1 + t2), scale: prefactor * (t1.abs() + t2.abs()) })
}

/// The decaying solution Ψ = N₁Φ⁽¹⁾ + N₂Φ⁽²⁾ with the amplitudes of [`decay_amplitudes`].
pub fn bound_state(x: f64, ep: &EnergyPoint, p: &ModelParams) -> Result<Combination> {
    let (n1, n2) = decay_amplitudes(ep);
    combination(x, ep, p, n1, n2)
}

/// The decaying Ψ at a sequence of nearby x, with the Kummer factors carried
/// from sample to sample.
#[derive(Debug, Clone)]
pub struct BoundStateSampler {
    ep: EnergyPoint,
    p: ModelParams,
    n1: f64,
    n2: f64,
    m1: KummerWalker,
    m2: Option<KummerWalker>,
}

impl BoundStateSampler {
    pub fn new(ep: &EnergyPoint, p: &ModelParams) -> Result<Self> {
        let (n1, n2) = decay_amplitudes(ep);
        let xi0 = 0.375 * ep.e * ep.e;
        let m1 = KummerWalker::new(ep.alpha, 0.5, xi0)?;
        let m2 = if n2 == 0.0 { None } else { Some(KummerWalker::new(ep.alpha + 0.5, 1.5, xi0)?) };
        Ok(Self { ep: *ep, p: *p, n1, n2, m1, m2 })
    }

    /// Same value as [`bound_state`] at `x`.
    pub fn at(&mut self, x: f64) -> Result<Combination> {
        require_positive("BoundStateSampler::at", x)?;
        let s = f_squared(x);
        let u = 2.0 * s - self.ep.e;
        let xi = 0.375 * u * u;
        let t1 = self.n1 * self.m1.value_at(xi)?;
        let t2 = match self.m2.as_mut() {
            Some(w) => self.n2 * u * w.value_at(xi)?,
            None => 0.0,
        };
        let prefactor = (ln_psi0(x, &self.p)? + 0.75 * (self.ep.e - self.p.lambda) * s).exp();
        Ok(Combination { value: prefactor * (t1 + t2), scale: prefactor * (t1.abs() + t2.abs()) })
    }
}

/// χ(s) = (2s − λ) M(1/2, 3/2; (3/8)(2s − λ)²) and dχ/ds; φ⁽²⁾ ∝ Ψ₀ χ.
pub fn mode2_profile(s: f64, p: &ModelParams) -> Result<(f64, f64)> {
    let u = 2.0 * s - p.lambda;
    let xi = 0.375 * u * u;
    let m = hyp1f1(0.5, 1.5, xi)?;
    let dm = hyp1f1(1.5, 2.5, xi)? / 3.0;
    Ok((u * m, 2.0 * m + 1.5 * u * u * dm))
}

/// χ′(0)/χ(0): the Robin coefficient of the φ⁽²⁾-orthogonal boundary condition.
pub fn mode2_log_derivative_at_origin(p: &ModelParams) -> Result<f64> {
    let (v, d) = mode2_profile(0.0, p)?;
    Ok(d / v)
}

/// Largest x > 0 with V(x) = E.
pub fn outer_turning_point(e: f64, p: &ModelParams) -> f64 {
    let g = |x: f64| potential_v(x, p).unwrap_or(f64::NEG_INFINITY) - e;
    let mut hi = 2.0 * (e.abs() + p.a + 2.0).powf(1.5);
    while g(hi) <= 0.0 {
        hi *= 2.0;
    }
    let mut lo = hi;
    while g(lo) > 0.0 && lo > 1e-8 {
        lo *= 0.9;
    }
    if g(lo) > 0.0 {
        return lo;
    }
    let mut hi_b = lo / 0.9;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi_b);
        if g(mid) > 0.0 {
            hi_b = mid;
        } else {
            lo = mid;
        }
        if hi_b - lo <= 1e-14 * hi_b {
            break;
        }
    }
    0.5 * (lo + hi_b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SuperchargeDirection {
    Plus,
    Minus,
}

/// Q⁺ψ = ψ″ − 2fψ′ + bψ, Q⁻ψ = ψ″ + 2fψ′ + (2f′ + b)ψ at one point.
pub fn supercharge_pointwise(
    direction: SuperchargeDirection,
    x: f64,
    value: f64,
    d1: f64,
    d2: f64,
    p: &ModelParams,
) -> Result<f64> {
    let b = b_coefficient(x, p)?;
    let (f, f1, _) = f_derivatives(x);
    Ok(match direction {
        SuperchargeDirection::Plus => d2 - 2.0 * f * d1 + b * value,
        SuperchargeDirection::Minus => d2 + 2.0 * f * d1 + (2.0 * f1 + b) * value,
    })
}

/// Q^± applied to samples with 4th-order stencils; returns the interior points.
pub fn apply_second_order_supercharge(
    samples: &UniformSamples,
    direction: SuperchargeDirection,
    p: &ModelParams,
) -> Result<UniformSamples> {
    samples.require_stencil()?;
    require_positive("apply_second_order_supercharge", samples.x0)?;
    let values = samples
        .interior()
        .map(|i| supercharge_pointwise(direction, samples.x(i), samples.values[i], samples.d1(i), samples.d2(i), p))
        .collect::<Result<Vec<_>>>()?;
    Ok(UniformSamples { x0: samples.x(2), h: samples.h, values })
}

/// −ψ″ + Vψ with 4th-order stencils; returns the interior points.
pub fn apply_hamiltonian(samples: &UniformSamples, potential: impl Fn(f64) -> Result<f64>) -> Result<UniformSamples> {
    samples.require_stencil()?;
    let values = samples
        .interior()
        .map(|i| Ok(-samples.d2(i) + potential(samples.x(i))? * samples.values[i]))
        .collect::<Result<Vec<_>>>()?;
    Ok(UniformSamples { x0: samples.x(2), h: samples.h, values })
}

/// e^{−2a}: normalization of φ⁽²⁾ that makes W[φ⁽¹⁾, φ⁽²⁾] = 1.
pub fn mode2_multiplier(p: &ModelParams) -> f64 {
    (-2.0 * p.a).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64) -> ModelParams {
        ModelParams::new(a).unwrap()
    }

    #[test]
    fn params_derived_quantities() {
        let m = p(2.0);
        assert!((m.eta + 2.0).abs() < 1e-15);
        assert!((m.lambda + 4.0 * 2f64.sqrt() / 3f64.sqrt()).abs() < 1e-15);
        assert!((m.lambda * m.lambda + m.d()).abs() < 1e-13);
        assert!(ModelParams::new(0.0).is_err());
        assert!(ModelParams::with_units(1.0, 2.0, 1.0).is_err());
        let q = ModelParams::from_eta(-3.0).unwrap();
        assert_eq!(q.eta, -3.0);
        assert!((q.a - 4.5).abs() < 1e-15);
    }

    #[test]
    fn potential_spot_values() {
        let m = p(1.0);
        assert!((potential_v(1.0, &m).unwrap() - 55.0 / 36.0).abs() < 1e-15);
        assert_eq!(potential_v(-1.0, &m).unwrap(), potential_v(1.0, &m).unwrap());
        assert!((potential_v_tilde(1.0, &m).unwrap() - 103.0 / 36.0).abs() < 1e-15);
        let v8 = potential_v_tilde(8.0, &p(2.0)).unwrap();
        assert!((v8 - (10.0 / 3.0 / 4.0 - 5.0 / (36.0 * 64.0) + 4.0)).abs() < 1e-14);
        assert!(matches!(potential_v(0.0, &m), Err(Error::SingularPoint { .. })));
        let x = 1e-6;
        assert!((potential_v(x, &m).unwrap() * x * x + 5.0 / 36.0).abs() < 1e-7);
    }

    #[test]
    fn intermediate_forms_agree() {
        for &a in &[0.5, 1.0, 2.0, 4.5] {
            let m = p(a);
            for &x in &[0.01, 0.3, 1.0, 2.5, 9.0] {
                let e = potential_intermediate(x, &m).unwrap();
                let f = potential_intermediate_from_f(x, &m).unwrap();
                assert!((e - f).abs() <= 1e-12 * e.abs().max(1.0), "a = {a}, x = {x}");
            }
        }
        let m = p(1.0);
        let v1 = potential_intermediate(1.0, &m).unwrap();
        assert!((v1 - (1.0 + 7.0 / 36.0 + m.lambda / 3.0 + 4.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn superpotential_spot_value() {
        let m = p(1.0);
        let w = superpotential_w(1.0, &m).unwrap();
        assert!((w - (1.0 - (1.0 / 3.0 + m.lambda) / 2.0)).abs() < 1e-15);
        let x = 1e9;
        assert!((superpotential_w(x, &m).unwrap() / x.cbrt() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn psi0_spot_values() {
        let m = p(1.5);
        assert!((psi0(1.0, &m).unwrap() - (-0.75 + 0.75 * m.lambda).exp()).abs() < 1e-15);
        let x: f64 = 1e-9;
        assert!((psi0(x, &m).unwrap() / x.powf(1.0 / 6.0) - 1.0).abs() < 1e-5);
        assert!(psi0(0.0, &m).is_err());
        assert!(psi0(50.0, &m).unwrap() < 1e-30);
    }

    #[test]
    fn xi_spot_values() {
        let m = p(1.0);
        let ep = EnergyPoint::from_energy(0.0, &m);
        assert!((xi_of_x(1.0, &ep) - 1.5).abs() < 1e-15);
        let ep = EnergyPoint::from_energy(2.0, &m);
        assert_eq!(xi_of_x(1.0, &ep), 0.0);
        assert!((xi_of_x(0.0, &ep) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn phi1_at_lambda_is_psi0() {
        let m = p(2.0);
        let ep = EnergyPoint::from_energy(m.lambda, &m);
        assert!(ep.alpha.abs() < 1e-15);
        for &x in &[0.1, 1.0, 3.0] {
            let a = phi(SolutionBranch::Phi1, x, &ep, &m).unwrap();
            let b = psi0(x, &m).unwrap();
            assert!((a / b - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn phi2_vanishes_where_xi_does() {
        let m = p(1.0);
        let ep = EnergyPoint::from_energy(2.0, &m);
        assert_eq!(phi(SolutionBranch::Phi2, 1.0, &ep, &m).unwrap(), 0.0);
    }

    #[test]
    fn decay_ratio_values() {
        let m = p(2.0);
        let ep = EnergyPoint::from_energy(m.lambda, &m);
        assert_eq!(decay_ratio_gamma(&ep).unwrap(), DecayRatio::PureBranch1);
        let ep = EnergyPoint { e: 0.0, y: 0.0, alpha: 1.0 };
        let expected = -(2f64).sqrt() / (3f64.sqrt() * std::f64::consts::PI.sqrt() / 2.0);
        match decay_ratio_gamma(&ep).unwrap() {
            DecayRatio::Finite(g) => assert!((g / expected - 1.0).abs() < 1e-14),
            other => panic!("unexpected {other:?}"),
        }
        let (n1, n2) = decay_amplitudes(&ep);
        assert!((n1 / n2 / expected - 1.0).abs() < 1e-14);
    }

    #[test]
    fn energy_point_constraint() {
        let m = p(2.0);
        for &e in &[-3.0, 0.0, 1.7, 9.5] {
            let ep = EnergyPoint::from_energy(e, &m);
            assert_eq!(4.0 * ep.alpha, m.eta * m.eta - ep.y * ep.y);
            let alt = 3.0 / 32.0 * (m.lambda * m.lambda - e * e);
            assert!((ep.alpha - alt).abs() < 1e-14 * (1.0 + alt.abs()));
        }
    }

    #[test]
    fn mode2_robin_closed_form() {
        for &a in &[0.5, 2.0, 4.5] {
            let m = p(a);
            let (v, d) = mode2_profile(0.0, &m).unwrap();
            let e2 = (m.eta * m.eta).exp();
            assert!((d / (2.0 * e2) - 1.0).abs() < 1e-12);
            let k = hyp1f1(1.0, 1.5, -m.eta * m.eta).unwrap();
            assert!((v / (-m.lambda * e2 * k) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn turning_point_solves_v_equals_e() {
        let m = p(2.0);
        for &e in &[-2.0, 1.0, 6.0, 15.0] {
            let xt = outer_turning_point(e, &m);
            assert!((potential_v(xt, &m).unwrap() - e).abs() < 1e-9);
            assert!(potential_v(xt * 1.01, &m).unwrap() > e);
        }
    }

    #[test]
    fn supercharge_of_zero_is_zero() {
        let m = p(1.0);
        let s = UniformSamples::from_fn(1.0, 1e-3, 50, |_| 0.0);
        let q = apply_second_order_supercharge(&s, SuperchargeDirection::Plus, &m).unwrap();
        assert_eq!(q.len(), 46);
        assert!(q.values.iter().all(|v| *v == 0.0));
        let tiny = UniformSamples::from_fn(1.0, 1e-3, 4, |_| 0.0);
        assert!(matches!(
            apply_second_order_supercharge(&tiny, SuperchargeDirection::Minus, &m),
            Err(Error::GridTooSmall { .. })
        ));
    }
}
