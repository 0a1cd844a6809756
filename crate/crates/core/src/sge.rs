//! Connection conditions at the singular origin and the spectrum generating
//! equations (SGEs) for the extensions U = −I and U = +I.
//!
//! Reference modes at the energy ε = λ:
//!
//! φ⁽¹⁾ = −(3/4) Ψ₀(x), odd,
//! φ⁽²⁾ = e^{−2a} Ψ₀(x) (2f² − λ) M(1/2, 3/2; (3/8)(2f² − λ)²), even,
//!
//! normalized so that W[φ⁽¹⁾, φ⁽²⁾] = 1 with W[u, v] = u′v − uv′.
//! For Φ = Ψ₀ψ and φ = cΨ₀χ, W[Φ, φ] → c (2/3)(ψ′(0)χ(0) − ψ(0)χ′(0))
//! as x → 0⁺, derivatives taken in s = x^{2/3}.
//!
//! Both SGEs are written in y = √3E/(2√2) and η = −√(2a), with
//! α = (η² − y²)/4, and divided by Γ(α)Γ(α + 1/2) so that they are entire in y.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::model::ExtensionChoice;
use crate::model::{
    decay_amplitudes, f_squared, mode2_multiplier, mode2_profile, psi0, EnergyPoint, ModelParams, SolutionBranch,
};
use crate::specfun::{hyp1f1, reciprocal_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReferenceMode {
    Mode1,
    Mode2,
}

impl ReferenceMode {
    pub fn parity(self) -> Parity {
        match self {
            Self::Mode1 => Parity::Odd,
            Self::Mode2 => Parity::Even,
        }
    }

    /// The mode whose Wronskian with Ψ vanishes at 0⁺ under `ext`.
    pub fn for_extension(ext: ExtensionChoice) -> Self {
        match ext {
            ExtensionChoice::MinusIdentity => Self::Mode1,
            ExtensionChoice::PlusIdentity => Self::Mode2,
        }
    }
}

/// Constant multiplier of φ⁽¹⁾ (−3/4).
pub const MODE1_MULTIPLIER: f64 = -0.75;

/// φ⁽¹⁾ or φ⁽²⁾ at x ≠ 0, extended to x < 0 by parity.
pub fn reference_mode(mode: ReferenceMode, x: f64, p: &ModelParams) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::SingularPoint { function: "reference_mode", x });
    }
    let xa = x.abs();
    match mode {
        ReferenceMode::Mode1 => {
            let v = MODE1_MULTIPLIER * psi0(xa, p)?;
            Ok(if x < 0.0 { -v } else { v })
        }
        ReferenceMode::Mode2 => {
            let (chi, _) = mode2_profile(f_squared(xa), p)?;
            Ok(mode2_multiplier(p) * psi0(xa, p)? * chi)
        }
    }
}

fn z_origin(ep: &EnergyPoint) -> f64 {
    0.375 * ep.e * ep.e
}

/// W[Φ⁽¹⁾, φ⁽¹⁾] at 0⁺: (3/4)[(E + λ)/2 M(α, 1/2; z) + (2α − 1)E M(α, 3/2; z)], z = 3E²/8.
pub fn wronskian_limit_phi1(ep: &EnergyPoint, p: &ModelParams) -> Result<f64> {
    let z = z_origin(ep);
    let a = ep.alpha;
    Ok(0.75 * (0.5 * (ep.e + p.lambda) * hyp1f1(a, 0.5, z)? + (2.0 * a - 1.0) * ep.e * hyp1f1(a, 1.5, z)?))
}

/// W[Φ⁽¹⁾, φ⁽¹⁾] at 0⁺ before the recurrence is applied:
/// −(3/8)[(E − λ)M(α, 1/2; z) − 4αE M(α + 1, 3/2; z)].
pub fn wronskian_limit_phi1_unsimplified(ep: &EnergyPoint, p: &ModelParams) -> Result<f64> {
    let z = z_origin(ep);
    let a = ep.alpha;
    Ok(-0.375 * ((ep.e - p.lambda) * hyp1f1(a, 0.5, z)? - 4.0 * a * ep.e * hyp1f1(a + 1.0, 1.5, z)?))
}

/// W[Φ⁽²⁾, φ⁽¹⁾] at 0⁺: (3E(E − λ)/8) M(α + 1/2, 3/2; z) − M(α + 1/2, 1/2; z).
pub fn wronskian_limit_phi2(ep: &EnergyPoint, p: &ModelParams) -> Result<f64> {
    let z = z_origin(ep);
    let a = ep.alpha;
    Ok(0.375 * ep.e * (ep.e - p.lambda) * hyp1f1(a + 0.5, 1.5, z)? - hyp1f1(a + 0.5, 0.5, z)?)
}

/// W[Φ⁽²⁾, φ⁽¹⁾] at 0⁺ before the recurrence is applied:
/// (3/8)E(E − λ)M(α + 1/2, 3/2; z) − M(α + 1/2, 3/2; z) − (E²(2α + 1)/4) M(α + 3/2, 5/2; z).
pub fn wronskian_limit_phi2_unsimplified(ep: &EnergyPoint, p: &ModelParams) -> Result<f64> {
    let z = z_origin(ep);
    let a = ep.alpha;
    let m = hyp1f1(a + 0.5, 1.5, z)?;
    Ok(0.375 * ep.e * (ep.e - p.lambda) * m - m - 0.25 * ep.e * ep.e * (2.0 * a + 1.0) * hyp1f1(a + 1.5, 2.5, z)?)
}

/// W[Φ⁽ⁱ⁾, φ⁽²⁾] at 0⁺.
pub fn wronskian_limit_mode2(branch: SolutionBranch, ep: &EnergyPoint, p: &ModelParams) -> Result<f64> {
    let z = z_origin(ep);
    let (psi, w1) = match branch {
        SolutionBranch::Phi1 => (hyp1f1(ep.alpha, 0.5, z)?, wronskian_limit_phi1(ep, p)?),
        SolutionBranch::Phi2 => (-ep.e * hyp1f1(ep.alpha + 0.5, 1.5, z)?, wronskian_limit_phi2(ep, p)?),
    };
    let psi_s = w1 / (MODE1_MULTIPLIER * 2.0 / 3.0);
    let (chi, chi_s) = mode2_profile(0.0, p)?;
    Ok(mode2_multiplier(p) * 2.0 / 3.0 * (psi_s * chi - psi * chi_s))
}

/// N₁W[Φ⁽¹⁾, φ] + N₂W[Φ⁽²⁾, φ] at 0⁺ with φ the reference mode of `ext`
/// and (N₁, N₂) the decaying amplitudes.
pub fn connection_residual(ext: ExtensionChoice, ep: &EnergyPoint, p: &ModelParams) -> Result<f64> {
    connection_residual_scaled(ext, ep, p, 1.0)
}

/// [`connection_residual`] with the reference mode multiplied by `mode_scale`.
pub fn connection_residual_scaled(
    ext: ExtensionChoice,
    ep: &EnergyPoint,
    p: &ModelParams,
    mode_scale: f64,
) -> Result<f64> {
    let (n1, n2) = decay_amplitudes(ep);
    let (w1, w2) = match ext {
        ExtensionChoice::MinusIdentity => (wronskian_limit_phi1(ep, p)?, wronskian_limit_phi2(ep, p)?),
        ExtensionChoice::PlusIdentity => {
            (wronskian_limit_mode2(SolutionBranch::Phi1, ep, p)?, wronskian_limit_mode2(SolutionBranch::Phi2, ep, p)?)
        }
    };
    let w2_term = if n2 == 0.0 { 0.0 } else { n2 * w2 };
    Ok(mode_scale * (n1 * w1 + w2_term))
}

/// The two terms of a regularized SGE and their Γ-free brackets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SgeTerms {
    pub value: f64,
    pub first: f64,
    pub second: f64,
    pub bracket1: f64,
    pub bracket2: f64,
}

impl SgeTerms {
    /// |value| / (|first| + |second|).
    pub fn relative_residual(&self) -> f64 {
        let scale = self.first.abs() + self.second.abs();
        if scale == 0.0 {
            0.0
        } else {
            self.value.abs() / scale
        }
    }

    /// Both Γ-free brackets vanish: a zero created only by the regularization.
    pub fn is_artifact(&self, tol: f64) -> bool {
        self.bracket1.abs() + self.bracket2.abs() <= tol
    }
}

fn alpha_of(y: f64, eta: f64) -> f64 {
    0.25 * (eta * eta - y * y)
}

/// Regularized U = −I equation with its terms.
pub fn sge_minus_terms(y: f64, eta: f64) -> Result<SgeTerms> {
    let a = alpha_of(y, eta);
    let z = y * y;
    let bracket1 = (2.0 * a - 1.0) * y * hyp1f1(a, 1.5, z)? + 0.5 * (y + eta) * hyp1f1(a, 0.5, z)?;
    let bracket2 = y * (y - eta) * hyp1f1(a + 0.5, 1.5, z)? - hyp1f1(a + 0.5, 0.5, z)?;
    let first = reciprocal_gamma(a + 0.5) * bracket1;
    let ra = reciprocal_gamma(a);
    let second = if ra == 0.0 { 0.0 } else { ra * bracket2 };
    Ok(SgeTerms { value: first - second, first, second, bracket1, bracket2 })
}

/// Regularized U = −I equation:
/// [(2α − 1)yM(α, 3/2; y²) + (y + η)/2 M(α, 1/2; y²)]/Γ(α + 1/2)
/// − [y(y − η)M(α + 1/2, 3/2; y²) − M(α + 1/2, 1/2; y²)]/Γ(α).
pub fn sge_minus(y: f64, eta: f64) -> Result<f64> {
    Ok(sge_minus_terms(y, eta)?.value)
}

/// Regularized U = +I equation with its terms.
pub fn sge_plus_terms(y: f64, eta: f64) -> Result<SgeTerms> {
    let a = alpha_of(y, eta);
    let z = y * y;
    let k = hyp1f1(1.0, 1.5, -eta * eta)?;
    let m1h = hyp1f1(a, 0.5, z)?;
    let m13 = hyp1f1(a, 1.5, z)?;
    let m2h = hyp1f1(a + 0.5, 0.5, z)?;
    let m23 = hyp1f1(a + 0.5, 1.5, z)?;
    let bracket1 = (eta * (eta + y) * m1h + 2.0 * y * eta * (2.0 * a - 1.0) * m13) * k - m1h;
    let bracket2 = (eta * y * (y - eta) * m23 - eta * m2h) * k + y * m23;
    let first = reciprocal_gamma(a + 0.5) * bracket1;
    let ra = reciprocal_gamma(a);
    let second = if ra == 0.0 { 0.0 } else { 2.0 * ra * bracket2 };
    Ok(SgeTerms { value: first - second, first, second, bracket1, bracket2 })
}

/// Regularized U = +I equation:
/// {[η(η + y)M(α, 1/2; y²) + 2yη(2α − 1)M(α, 3/2; y²)]K − M(α, 1/2; y²)}/Γ(α + 1/2)
/// − 2{[ηy(y − η)M(α + 1/2, 3/2; y²) − ηM(α + 1/2, 1/2; y²)]K + yM(α + 1/2, 3/2; y²)}/Γ(α),
/// with K = M(1, 3/2; −η²).
pub fn sge_plus(y: f64, eta: f64) -> Result<f64> {
    Ok(sge_plus_terms(y, eta)?.value)
}

/// The SGE of `ext` with its terms.
pub fn sge_terms(ext: ExtensionChoice, y: f64, eta: f64) -> Result<SgeTerms> {
    match ext {
        ExtensionChoice::MinusIdentity => sge_minus_terms(y, eta),
        ExtensionChoice::PlusIdentity => sge_plus_terms(y, eta),
    }
}

/// The SGE of `ext`.
pub fn sge(ext: ExtensionChoice, y: f64, eta: f64) -> Result<f64> {
    Ok(sge_terms(ext, y, eta)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> ModelParams {
        ModelParams::from_eta(-2.0).unwrap()
    }

    #[test]
    fn mode_parities() {
        let p = p2();
        for &x in &[0.05, 0.7, 2.0] {
            let a = reference_mode(ReferenceMode::Mode1, x, &p).unwrap();
            assert_eq!(reference_mode(ReferenceMode::Mode1, -x, &p).unwrap(), -a);
            let b = reference_mode(ReferenceMode::Mode2, x, &p).unwrap();
            assert_eq!(reference_mode(ReferenceMode::Mode2, -x, &p).unwrap(), b);
        }
        assert_eq!(ReferenceMode::Mode1.parity(), Parity::Odd);
        assert_eq!(ReferenceMode::Mode2.parity(), Parity::Even);
        assert!(reference_mode(ReferenceMode::Mode1, 0.0, &p).is_err());
        let x: f64 = 1e-10;
        let r = reference_mode(ReferenceMode::Mode1, x, &p).unwrap() / x.powf(1.0 / 6.0);
        assert!((r + 0.75).abs() < 1e-5);
    }

    #[test]
    fn limits_at_ground_energy() {
        let p = p2();
        let ep = EnergyPoint::from_y(-2.0, &p);
        assert!(wronskian_limit_phi1(&ep, &p).unwrap().abs() < 1e-14);
        let ep0 = EnergyPoint::from_energy(0.0, &p);
        assert!((wronskian_limit_phi2(&ep0, &p).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn sge_minus_ground_root() {
        assert_eq!(sge_minus(-2.0, -2.0).unwrap(), 0.0);
        let t = sge_minus_terms(-2.0, -2.0).unwrap();
        assert!(!t.is_artifact(1e-8));
    }

    #[test]
    fn sge_finite_at_half_integer_alpha() {
        let eta: f64 = -2.0;
        for k in 0..6 {
            let alpha = -(k as f64) / 2.0;
            let y = (eta * eta - 4.0 * alpha).sqrt();
            assert!(sge_minus(y, eta).unwrap().is_finite());
            assert!(sge_plus(y, eta).unwrap().is_finite());
        }
    }

    #[test]
    fn sge_plus_brace_vanishing_term_at_zero() {
        let t = sge_plus_terms(0.0, -2.0).unwrap();
        let k = hyp1f1(1.0, 1.5, -4.0).unwrap();
        let expected = 2.0 * hyp1f1(1.5, 0.5, 0.0).unwrap() * k;
        assert!((t.bracket2 - expected).abs() < 1e-14);
    }

    #[test]
    fn residual_is_scaled_sge_minus() {
        let p = p2();
        for &y in &[-1.0, 0.3, 1.7, 2.9] {
            let ep = EnergyPoint::from_y(y, &p);
            let r = connection_residual(ExtensionChoice::MinusIdentity, &ep, &p).unwrap();
            let s = sge_minus(y, -2.0).unwrap();
            assert!((r / s - 1.5f64.sqrt()).abs() < 1e-10, "y = {y}");
        }
    }
}
