//! Normalized bound-state wavefunctions sampled on a grid uniform in s = x^{2/3}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{outer_turning_point, BoundStateSampler, EnergyPoint, ExtensionChoice, ModelParams};
use crate::numeric::simpson;
use crate::sge::{Parity, ReferenceMode};
use crate::spectrum::max_sample_x;

/// Reliability below which sampling stops beyond the turning point.
const TAIL_RELIABILITY_FLOOR: f64 = 1e-10;

/// Fraction of the peak |Ψ| below which the tail is dropped.
const TAIL_AMPLITUDE_FLOOR: f64 = 1e-12;

pub const DEFAULT_SAMPLES: usize = 4001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionTable {
    pub y: f64,
    pub e: f64,
    pub extension: ExtensionChoice,
    pub parity: Parity,
    pub x: Vec<f64>,
    pub psi: Vec<f64>,
    /// Largest x kept on the half-line.
    pub x_cut: f64,
}

impl WavefunctionTable {
    /// Strict sign changes of the sampled Ψ on x > 0.
    pub fn sign_changes(&self) -> usize {
        let mut last = 0.0_f64;
        let mut count = 0;
        for (&x, &v) in self.x.iter().zip(&self.psi) {
            if x <= 0.0 || v == 0.0 {
                continue;
            }
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
        count
    }
}

/// Parity of Ψ under x → −x for the given extension.
pub fn parity_for(ext: ExtensionChoice) -> Parity {
    ReferenceMode::for_extension(ext).parity()
}

/// Ψ with ∫₀^∞ Ψ² dx = 1, sampled at `n_points` (odd) points uniform in s on
/// [0, x_max^{2/3}], truncated where Ψ is lost to cancellation, optionally
/// mirrored to x < 0 by parity.
pub fn normalized_wavefunction(
    ep: &EnergyPoint,
    ext: ExtensionChoice,
    p: &ModelParams,
    n_points: usize,
    x_max: Option<f64>,
    mirror: bool,
) -> Result<WavefunctionTable> {
    if n_points < 101 || n_points.is_multiple_of(2) {
        return Err(Error::Domain(format!("wavefunction needs an odd sample count ≥ 101, got {n_points}")));
    }
    let x_max = x_max.unwrap_or_else(|| max_sample_x(ep));
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::Domain(format!("x_max must be positive, got {x_max}")));
    }
    let x_turn = outer_turning_point(ep.e, p);
    let mut sampler = BoundStateSampler::new(ep, p)?;
    let s_max = x_max.powf(2.0 / 3.0);
    let h = s_max / (n_points - 1) as f64;
    let mut xs = vec![0.0];
    let mut psi = vec![0.0];
    let mut peak = 0.0_f64;
    for i in 1..n_points {
        let s = i as f64 * h;
        let x = s.powf(1.5);
        let c = sampler.at(x)?;
        if x > x_turn && (c.reliability() < TAIL_RELIABILITY_FLOOR || c.value.abs() < TAIL_AMPLITUDE_FLOOR * peak) {
            break;
        }
        peak = peak.max(c.value.abs());
        xs.push(x);
        psi.push(c.value);
    }
    if xs.len() % 2 == 0 {
        xs.pop();
        psi.pop();
    }
    if xs.len() < 3 {
        return Err(Error::GridTooSmall { needed: 3, got: xs.len() });
    }
    let density: Vec<f64> = psi.iter().enumerate().map(|(i, v)| 1.5 * (i as f64 * h).sqrt() * v * v).collect();
    let norm = simpson(&density, h)?.sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Domain(format!("wavefunction norm is {norm}")));
    }
    let lead = psi.iter().copied().find(|v| v.abs() > 1e-8 * peak).unwrap_or(1.0);
    let scale = lead.signum() / norm;
    psi.iter_mut().for_each(|v| *v *= scale);
    let x_cut = *xs.last().unwrap_or(&0.0);
    let parity = parity_for(ext);
    if mirror {
        let sign = match parity {
            Parity::Odd => -1.0,
            Parity::Even => 1.0,
        };
        let mut mx: Vec<f64> = xs.iter().skip(1).rev().map(|x| -x).collect();
        let mut mp: Vec<f64> = psi.iter().skip(1).rev().map(|v| sign * v).collect();
        mx.extend_from_slice(&xs);
        mp.extend_from_slice(&psi);
        xs = mx;
        psi = mp;
    }
    Ok(WavefunctionTable { y: ep.y, e: ep.e, extension: ext, parity, x: xs, psi, x_cut })
}
