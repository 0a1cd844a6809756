//! Symmetric tridiagonal eigenpairs by Sturm-sequence bisection and inverse
//! iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BISECTION_LIMIT: usize = 400;
const INVERSE_ITERATIONS: usize = 4;

/// Symmetric tridiagonal matrix: `diag` of length n, `off` of length n − 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalSystem {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Domain(format!(
                "tridiagonal shape mismatch: {} diagonal and {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE * self.off.iter().fold(1.0_f64, |m, e| m.max(e * e));
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            let e = self.off[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// y = T x.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// The j-th smallest eigenvalue (0-based).
    pub fn eigenvalue(&self, j: usize) -> Result<f64> {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * lo.abs().max(hi.abs()) + f64::MIN_POSITIVE;
        lo -= pad;
        hi += pad;
        for _ in 0..BISECTION_LIMIT {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                return Ok(mid);
            }
            if self.sturm_count(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::Convergence { what: "Sturm bisection", iterations: BISECTION_LIMIT })
    }

    // Solves (T − shift) x = rhs by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let scale = self.diag.iter().chain(self.off.iter()).fold(0.0_f64, |m, v| m.max(v.abs()));
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - shift).collect();
        let mut dl = self.off.clone();
        let mut du = self.off.clone();
        let mut b = rhs.to_vec();
        if n == 1 {
            let piv = if d[0] == 0.0 { tiny } else { d[0] };
            return vec![b[0] / piv];
        }
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                d[i + 1] -= fact * du[i];
                b[i + 1] -= fact * b[i];
                dl[i] = 0.0;
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                let temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                if i + 2 < n {
                    dl[i] = du[i + 1];
                    du[i + 1] = -fact * dl[i];
                } else {
                    dl[i] = 0.0;
                }
                du[i] = temp;
                let tb = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tb - fact * b[i + 1];
            }
        }
        for v in d.iter_mut() {
            if *v == 0.0 {
                *v = tiny;
            }
        }
        b[n - 1] /= d[n - 1];
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
        }
        b
    }

    /// Unit eigenvector for the eigenvalue `value`.
    pub fn eigenvector(&self, value: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.25 * ((i as f64) * 0.618_033_988_749_895).sin()).collect();
        normalize(&mut v);
        for _ in 0..INVERSE_ITERATIONS {
            let mut w = self.solve_shifted(value, &v);
            if !w.iter().all(|x| x.is_finite()) {
                return Err(Error::Convergence { what: "inverse iteration", iterations: INVERSE_ITERATIONS });
            }
            normalize(&mut w);
            v = w;
        }
        let i_max = v
            .iter()
            .enumerate()
            .fold((0, 0.0_f64), |(im, m), (i, x)| if x.abs() > m { (i, x.abs()) } else { (im, m) })
            .0;
        let first = v.iter().position(|x| x.abs() > 1e-8 * v[i_max].abs()).unwrap_or(i_max);
        if v[first] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        Ok(v)
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// The k smallest eigenpairs, ascending.
pub fn lowest_eigenvalues(system: &TridiagonalSystem, k: usize) -> Result<Vec<Eigenpair>> {
    if k == 0 || k > system.len().max(10) / 10 {
        return Err(Error::Domain(format!(
            "requested {k} eigenpairs of a {}-dimensional system (at most n/10 allowed)",
            system.len()
        )));
    }
    (0..k)
        .map(|j| {
            let value = system.eigenvalue(j)?;
            let vector = system.eigenvector(value)?;
            Ok(Eigenpair { value, vector })
        })
        .collect()
}

/// Sign changes in `v`, ignoring entries below `rel_floor · max |v|`.
pub fn sign_changes(v: &[f64], rel_floor: f64) -> usize {
    let floor = rel_floor * v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let mut last = 0.0_f64;
    let mut changes = 0;
    for &x in v {
        if x.abs() <= floor {
            continue;
        }
        if last != 0.0 && (x > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = x;
    }
    changes
}
