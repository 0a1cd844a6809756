//! Gamma, reciprocal Gamma and Kummer's confluent hypergeometric function
//! M(a, c; z) = Σ (a)ₖ/(c)ₖ zᵏ/k!.
//!
//! `kummer_m` sums the Taylor series with Neumaier-compensated accumulation for
//! |z| ≤ [`KUMMER_Z_CEILING`]. Above the regime threshold the full large-z
//! asymptotic series is tried first and kept only when it reaches full double
//! precision with a negligible algebraic part; otherwise the Taylor series is
//! used. Negative arguments go through Kummer's transformation
//! M(a, c; z) = eᶻ M(c − a, c; −z).
//!
//! For negative `a` the Taylor terms alternate in sign before they settle.
//! The attainable relative accuracy is roughly `f64::EPSILON` times the
//! cancellation factor `max |term| / |M|`, reported in [`EvalRegime`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default switch point between the Taylor and asymptotic regimes.
pub const DEFAULT_Z_THRESHOLD: f64 = 30.0;

/// Largest |z| accepted by [`kummer_m`].
pub const KUMMER_Z_CEILING: f64 = 300.0;

/// Maximum number of terms summed in either regime.
pub const MAX_SERIES_TERMS: usize = 500;

/// Series cancellation (max |term| / |sum|) above which continuation is used.
pub const SERIES_CANCELLATION_LIMIT: f64 = 1e4;

/// Phase advance allowed per continuation step.
const CONTINUATION_PHASE: f64 = 4.0;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let mut r = x - 2.0 * (0.5 * x).round();
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

fn lanczos_sum(xm: f64) -> f64 {
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (xm + i as f64);
    }
    acc
}

// Γ(x) for x ≥ 1/2.
fn gamma_positive(x: f64) -> f64 {
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (xm + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(xm)
}

/// Γ(x).
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { function: "gamma", at: x });
    }
    if x >= 0.5 {
        Ok(factorial_of(x).unwrap_or_else(|| gamma_positive(x)))
    } else {
        Ok(PI / (sin_pi(x) * gamma_positive(1.0 - x)))
    }
}

// Exact Γ(n) = (n − 1)! for small positive integers.
fn factorial_of(x: f64) -> Option<f64> {
    if x == x.floor() && (1.0..=23.0).contains(&x) {
        Some((1..x as u32).fold(1.0, |acc, k| acc * k as f64))
    } else {
        None
    }
}

/// 1/Γ(x), exactly zero at x = 0, −1, −2, …
pub fn reciprocal_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x >= 0.5 {
        1.0 / factorial_of(x).unwrap_or_else(|| gamma_positive(x))
    } else {
        sin_pi(x) * gamma_positive(1.0 - x) / PI
    }
}

/// ln |Γ(x)|.
pub fn ln_gamma_abs(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { function: "ln_gamma_abs", at: x });
    }
    if x >= 0.5 {
        let xm = x - 1.0;
        let t = xm + LANCZOS_G + 0.5;
        Ok(LN_SQRT_2PI + (xm + 0.5) * t.ln() - t + lanczos_sum(xm).ln())
    } else {
        Ok((PI / sin_pi(x).abs()).ln() - ln_gamma_abs(1.0 - x)?)
    }
}

/// Parameters of M(a, c; z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KummerArgs {
    pub a: f64,
    pub c: f64,
    pub z: f64,
}

impl KummerArgs {
    pub fn new(a: f64, c: f64, z: f64) -> Result<Self> {
        if is_nonpositive_integer(c) {
            return Err(Error::Pole { function: "kummer_m", at: c });
        }
        if !(a.is_finite() && c.is_finite() && z.is_finite()) {
            return Err(Error::Domain(format!("kummer_m arguments must be finite (a = {a}, c = {c}, z = {z})")));
        }
        Ok(Self { a, c, z })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeKind {
    TaylorSeries,
    AsymptoticLargeZ,
    /// Taylor series at small z carried outward by local re-expansion of the ODE.
    Continuation,
}

/// How a value of M was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalRegime {
    pub kind: RegimeKind,
    pub term_count: usize,
    pub z_threshold: f64,
    /// max |term| / |result|; 1 for series without cancellation.
    pub cancellation: f64,
}

/// M(a, c; z) with the default regime threshold.
pub fn kummer_m(args: KummerArgs) -> Result<f64> {
    kummer_m_with_regime(args, DEFAULT_Z_THRESHOLD).map(|(v, _)| v)
}

/// Shorthand for `kummer_m(KummerArgs::new(a, c, z)?)`.
pub fn hyp1f1(a: f64, c: f64, z: f64) -> Result<f64> {
    kummer_m(KummerArgs::new(a, c, z)?)
}

/// d/dz M(a, c; z) = (a/c) M(a + 1, c + 1; z).
pub fn hyp1f1_derivative(a: f64, c: f64, z: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(0.0);
    }
    Ok(a / c * hyp1f1(a + 1.0, c + 1.0, z)?)
}

/// M(a, c; z) together with the regime used to evaluate it.
pub fn kummer_m_with_regime(args: KummerArgs, z_threshold: f64) -> Result<(f64, EvalRegime)> {
    if !(z_threshold > 0.0) {
        return Err(Error::Domain(format!("z_threshold must be positive, got {z_threshold}")));
    }
    let KummerArgs { a, c, z } = args;
    if z.abs() > KUMMER_Z_CEILING {
        return Err(Error::Domain(format!("|z| = {} exceeds the kummer_m ceiling {KUMMER_Z_CEILING}", z.abs())));
    }
    if z == 0.0 {
        let regime = EvalRegime { kind: RegimeKind::TaylorSeries, term_count: 1, z_threshold, cancellation: 1.0 };
        return Ok((1.0, regime));
    }
    if z < 0.0 {
        let (v, regime) = kummer_m_with_regime(KummerArgs { a: c - a, c, z: -z }, z_threshold)?;
        return Ok((z.exp() * v, regime));
    }
    if z > z_threshold {
        if let Some((v, n)) = asymptotic_series(a, c, z) {
            let regime =
                EvalRegime { kind: RegimeKind::AsymptoticLargeZ, term_count: n, z_threshold, cancellation: 1.0 };
            return Ok((v, regime));
        }
    }
    let (v, n, cancellation) = taylor_series(a, c, z)?;
    if cancellation <= SERIES_CANCELLATION_LIMIT {
        let regime = EvalRegime { kind: RegimeKind::TaylorSeries, term_count: n, z_threshold, cancellation };
        return Ok((v, regime));
    }
    let (v, steps) = continuation(a, c, z)?;
    let regime = EvalRegime { kind: RegimeKind::Continuation, term_count: steps, z_threshold, cancellation: 1.0 };
    Ok((v, regime))
}

fn taylor_series(a: f64, c: f64, z: f64) -> Result<(f64, usize, f64)> {
    let mut sum = 1.0_f64;
    let mut comp = 0.0_f64;
    let mut term = 1.0_f64;
    let mut max_term = 1.0_f64;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= (a + kf) / (c + kf) * z / (kf + 1.0);
        if term == 0.0 {
            let s = sum + comp;
            return Ok((s, k + 1, max_term / s.abs()));
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        max_term = max_term.max(term.abs());

        let s = sum + comp;
        let j = kf + 1.0;
        if a + j > 0.0 && c + j > 0.0 {
            let ratio = z.abs() * ((a + j) / (c + j)).max(1.0) / (j + 1.0);
            if ratio < 1.0 {
                let tail = term.abs() * ratio / (1.0 - ratio);
                if tail <= 1e-16 * s.abs() || tail <= 1e-18 * max_term {
                    return Ok((s, k + 2, max_term / s.abs()));
                }
            }
        }
    }
    Err(Error::Convergence { what: "kummer_m Taylor series", iterations: MAX_SERIES_TERMS })
}

// M and M′ carried from a small z outward by local Taylor expansions of
// z M″ + (c − z) M′ − a M = 0.
fn continuation(a: f64, c: f64, z: f64) -> Result<(f64, usize)> {
    let mut z0 = z.min(1.0 / (1.0 + a.abs()));
    let mut m = taylor_series(a, c, z0)?.0;
    let mut dm = if a == 0.0 { 0.0 } else { a / c * taylor_series(a + 1.0, c + 1.0, z0)?.0 };
    let mut steps = 0;
    while z0 < z {
        let h = (z - z0).min(max_step(a, c, z0));
        (m, dm) = taylor_step(a, c, z0, m, dm, h)?;
        z0 += h;
        steps += 1;
    }
    Ok((m, steps))
}

// Step length that keeps a local expansion at z0 well inside its radius and
// within a bounded phase advance.
fn max_step(a: f64, c: f64, z0: f64) -> f64 {
    let omega = ((a.abs() + c.abs()) / z0).sqrt() + 1.0;
    (0.5 * z0).min(CONTINUATION_PHASE / omega)
}

// (M, M′) at z0 + h from (M, M′) at z0, summing dₖ = cₖhᵏ of the local expansion.
fn taylor_step(a: f64, c: f64, z0: f64, m: f64, dm: f64, h: f64) -> Result<(f64, f64)> {
    if h == 0.0 {
        return Ok((m, dm));
    }
    let (mut d0, mut d1) = (m, dm * h);
    let mut value = d0 + d1;
    let mut slope = d1;
    let mut value_scale = d0.abs() + d1.abs();
    let mut slope_scale = d1.abs();
    let mut quiet = 0;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        let d2 = ((kf + a) * d0 * h - (kf + 1.0) * (kf + c - z0) * d1) * h / (z0 * (kf + 2.0) * (kf + 1.0));
        let ts = (kf + 2.0) * d2;
        value += d2;
        slope += ts;
        value_scale += d2.abs();
        slope_scale += ts.abs();
        if d2.abs() <= 1e-17 * value_scale && ts.abs() <= 1e-17 * slope_scale {
            quiet += 1;
            if quiet >= 2 {
                return Ok((value, slope / h));
            }
        } else {
            quiet = 0;
        }
        d0 = d1;
        d1 = d2;
    }
    Err(Error::Convergence { what: "kummer_m continuation", iterations: MAX_SERIES_TERMS })
}

/// M(a, c; z) at a sequence of nearby arguments, each value carried from the
/// previous one by local re-expansion and re-seeded on large jumps.
#[derive(Debug, Clone)]
pub struct KummerWalker {
    a: f64,
    c: f64,
    z: f64,
    m: f64,
    dm: f64,
    steps: usize,
}

impl KummerWalker {
    /// Steps taken before a fresh direct evaluation.
    const RESEED_AFTER: usize = 2000;
    /// Most steps taken for a single move.
    const MAX_STEPS_PER_MOVE: usize = 8;

    pub fn new(a: f64, c: f64, z: f64) -> Result<Self> {
        KummerArgs::new(a, c, z)?;
        let mut w = Self { a, c, z, m: 0.0, dm: 0.0, steps: 0 };
        w.seed(z)?;
        Ok(w)
    }

    fn seed(&mut self, z: f64) -> Result<()> {
        self.z = z;
        self.m = hyp1f1(self.a, self.c, z)?;
        self.dm = hyp1f1_derivative(self.a, self.c, z)?;
        self.steps = 0;
        Ok(())
    }

    /// M(a, c; z).
    pub fn value_at(&mut self, z: f64) -> Result<f64> {
        if z == self.z {
            return Ok(self.m);
        }
        KummerArgs::new(self.a, self.c, z)?;
        let (a, c) = (self.a, self.c);
        let mut z0 = self.z;
        let (mut m, mut dm) = (self.m, self.dm);
        let mut taken = 0;
        while z0 != z {
            if z0 <= 0.0 || taken == Self::MAX_STEPS_PER_MOVE || self.steps + taken >= Self::RESEED_AFTER {
                self.seed(z)?;
                return Ok(self.m);
            }
            let h = (z - z0).clamp(-max_step(a, c, z0), max_step(a, c, z0));
            (m, dm) = taylor_step(a, c, z0, m, dm, h)?;
            z0 = if (z - z0).abs() <= h.abs() { z } else { z0 + h };
            taken += 1;
        }
        self.z = z;
        self.m = m;
        self.dm = dm;
        self.steps += taken;
        Ok(m)
    }
}

// Γ(c)/Γ(a) eᶻ z^{a−c} Σ (c−a)ₖ(1−a)ₖ/(k! zᵏ), accepted only when the series
// converges to double precision and the algebraic part is negligible.
fn asymptotic_series(a: f64, c: f64, z: f64) -> Option<(f64, usize)> {
    let ra = reciprocal_gamma(a);
    if ra == 0.0 {
        return None;
    }
    let rca = reciprocal_gamma(c - a);
    if rca != 0.0 {
        let ln_ratio = rca.abs().ln() - ra.abs().ln() + (c - 2.0 * a) * z.ln() - z;
        if ln_ratio > (1e-17_f64).ln() {
            return None;
        }
    }
    let mut sum = 1.0_f64;
    let mut term = 1.0_f64;
    let mut n = 1;
    for k in 1..=MAX_SERIES_TERMS {
        let kf = k as f64;
        let next = term * (c - a + kf - 1.0) * (1.0 - a + kf - 1.0) / (kf * z);
        n = k + 1;
        if next == 0.0 {
            break;
        }
        if next.abs() > term.abs() {
            return None;
        }
        sum += next;
        term = next;
        if term.abs() < 1e-16 * sum.abs() {
            break;
        }
        if k == MAX_SERIES_TERMS {
            return None;
        }
    }
    let gc = gamma(c).ok()?;
    let v = gc * ra * (z + (a - c) * z.ln()).exp() * sum;
    v.is_finite().then_some((v, n))
}

/// Leading large-z term Γ(c)/Γ(a) eᶻ z^{a−c}; zero when a is a non-positive integer.
pub fn kummer_asymptotic(args: KummerArgs) -> Result<f64> {
    let KummerArgs { a, c, z } = args;
    if !(z > 0.0) {
        return Err(Error::Domain(format!("kummer_asymptotic needs z > 0, got {z}")));
    }
    let ra = reciprocal_gamma(a);
    if ra == 0.0 {
        return Ok(0.0);
    }
    Ok(gamma(c)? * ra * (z + (a - c) * z.ln()).exp())
}
