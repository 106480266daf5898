//! Graph Hilbert transform, analytic graph signal, instantaneous
//! amplitude/phase/frequency, and the overlap identities for cycle-supported
//! decompositions.
//!
//! The spectral filter multiplies GFT coefficients by `-j` on eigenvalues
//! with positive imaginary part, `+j` on negative, and `0` on the
//! (thresholded) real axis. On a directed cycle this reproduces the
//! classical discrete Hilbert transform exactly; `classical_hilbert_dft`
//! is the independent DFT oracle used to verify that.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use ndarray::Array1;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::GraphSignal;
use crate::spectral::{gft, Pairing, SpectralDecomposition};

/// Spectral-domain Hilbert filter bound to a decomposition.
#[derive(Debug, Clone)]
pub struct GhtOperator {
    dec: Arc<SpectralDecomposition>,
    filter: Vec<Complex64>,
}

impl GhtOperator {
    pub fn n(&self) -> usize {
        self.dec.n()
    }

    /// Diagonal of the spectral filter, entries in `{-j, +j, 0}`.
    pub fn filter_diag(&self) -> &[Complex64] {
        &self.filter
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.dec
    }
}

/// Builds the Hilbert filter from a decomposition that passes diagnostics.
pub fn build_ght(dec: Arc<SpectralDecomposition>) -> Result<GhtOperator> {
    if !dec.is_diagonalizable() {
        return Err(Error::Defective(
            "the Hilbert filter needs a diagonalizable adjacency".into(),
        ));
    }
    let threshold = dec.tolerances().imag * dec.scale();
    let mut filter: Vec<Complex64> = dec
        .eigenvalues()
        .iter()
        .map(|v| {
            if v.im > threshold {
                Complex64::new(0.0, -1.0)
            } else if v.im < -threshold {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    // conjugate consistency across pairs
    for &p in dec.pairing() {
        if let Pairing::ConjugatePair(k1, k2) = p {
            filter[k2] = filter[k1].conj();
        }
    }
    Ok(GhtOperator { dec, filter })
}

fn apply_filtered(op: &GhtOperator, x: &GraphSignal, filter: &[Complex64]) -> Result<Vec<Complex64>> {
    let xhat = gft(&op.dec, x)?;
    let scaled: Vec<Complex64> = xhat.iter().zip(filter).map(|(c, h)| c * h).collect();
    let v = Array1::from_vec(scaled);
    Ok(op.dec.basis().dot(&v).to_vec())
}

fn truncate_real(y: &[Complex64], x: &GraphSignal) -> Result<GraphSignal> {
    let xnorm = x.values().iter().map(|v| v * v).sum::<f64>().sqrt();
    let residue = y.iter().map(|z| z.im.abs()).fold(0.0f64, f64::max);
    if residue > 1e-10 * xnorm.max(f64::MIN_POSITIVE) {
        return Err(Error::Numerical(format!(
            "imaginary residue {residue:.3e} exceeds 1e-10 * ||x|| = {:.3e}",
            1e-10 * xnorm
        )));
    }
    GraphSignal::new(y.iter().map(|z| z.re).collect())
}

/// Graph Hilbert transform `H(x) = U H_hat U^{-1} x`, real for real input.
pub fn ght(op: &GhtOperator, x: &GraphSignal) -> Result<GraphSignal> {
    let y = apply_filtered(op, x, &op.filter)?;
    truncate_real(&y, x)
}

/// Projection of `x` onto the real-eigenvalue spectral components.
pub fn project_real_modes(op: &GhtOperator, x: &GraphSignal) -> Result<GraphSignal> {
    let mask: Vec<Complex64> = op
        .filter
        .iter()
        .map(|h| {
            if *h == Complex64::new(0.0, 0.0) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let y = apply_filtered(op, x, &mask)?;
    truncate_real(&y, x)
}

/// Analytic graph signal `x + j H(x)` with amplitude and phase accessors.
#[derive(Debug, Clone)]
pub struct AnalyticGraphSignal {
    values: Vec<Complex64>,
    source: GraphSignal,
    hilbert: GraphSignal,
}

impl AnalyticGraphSignal {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn source(&self) -> &GraphSignal {
        &self.source
    }

    pub fn hilbert(&self) -> &GraphSignal {
        &self.hilbert
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Builds the analytic graph signal by direct sum; the real part equals the
/// input exactly.
pub fn analytic(op: &GhtOperator, x: &GraphSignal) -> Result<AnalyticGraphSignal> {
    let hx = ght(op, x)?;
    let values = x
        .values()
        .iter()
        .zip(hx.values())
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    Ok(AnalyticGraphSignal {
        values,
        source: x.clone(),
        hilbert: hx,
    })
}

/// Instantaneous amplitude `|x_tilde[k]|`.
pub fn amplitude(a: &AnalyticGraphSignal) -> Vec<f64> {
    a.values.iter().map(|z| z.norm()).collect()
}

/// Instantaneous phase in `]-pi, pi]`, with `+pi` at the branch boundary and
/// phase 0 for an exact zero.
pub fn phase(a: &AnalyticGraphSignal) -> Vec<f64> {
    a.values.iter().map(|z| phase_of(*z)).collect()
}

fn phase_of(z: Complex64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        return 0.0;
    }
    let p = z.im.atan2(z.re);
    if p == -PI {
        PI
    } else {
        p
    }
}

/// Whether a node path is an open chain or wraps around a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    Open,
    Closed,
}

/// Instantaneous frequency along a path: `omega[k] = (phi[k] - phi[k+1]) + 2 l pi`
/// with `l` placing the value in `]-pi, pi]` (Itoh's rule). Output length is
/// `path.len() - 1` for an open chain, `path.len()` for a cycle.
pub fn instantaneous_frequency(phi: &[f64], path: &[usize], kind: PathKind) -> Result<Vec<f64>> {
    if path.len() < 2 {
        return Err(Error::PathTooShort);
    }
    for &node in path {
        if node >= phi.len() {
            return Err(Error::NodeOutOfRange {
                node,
                n: phi.len(),
            });
        }
    }
    let mut out = Vec::with_capacity(path.len());
    for w in path.windows(2) {
        out.push(wrap_to_half_open(phi[w[0]] - phi[w[1]]));
    }
    if kind == PathKind::Closed {
        out.push(wrap_to_half_open(
            phi[*path.last().unwrap()] - phi[path[0]],
        ));
    }
    Ok(out)
}

/// Wraps into `]-pi, pi]`.
fn wrap_to_half_open(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Classical discrete Hilbert transform through the DFT: positive
/// frequencies scaled by `-j`, negative by `+j`, DC and Nyquist zeroed.
/// Quadratic-time on purpose; this is the independent oracle.
pub fn classical_hilbert_dft(x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "classical Hilbert transform needs length >= 2".into(),
        ));
    }
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
    for (k, s) in spectrum.iter_mut().enumerate() {
        for (t, &v) in x.iter().enumerate() {
            let angle = -TAU * (k * t % n) as f64 / n as f64;
            *s += v * Complex64::from_polar(1.0, angle);
        }
    }
    for (k, s) in spectrum.iter_mut().enumerate() {
        let sign = if k == 0 || (n % 2 == 0 && k == n / 2) {
            Complex64::new(0.0, 0.0)
        } else if k < n.div_ceil(2) {
            Complex64::new(0.0, -1.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        *s *= sign;
    }
    let mut out = vec![0.0; n];
    for (t, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, s) in spectrum.iter().enumerate() {
            let angle = TAU * (k * t % n) as f64 / n as f64;
            acc += s * Complex64::from_polar(1.0, angle);
        }
        *o = acc.re / n as f64;
    }
    Ok(out)
}

/// Verification report for the overlap identities of cycle-supported
/// decompositions.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OverlapReport {
    /// Max absolute violation of
    /// `A(x)^2 = sum_m A(x_m)^2 + sum_{m != n} (x_m x_n + H(x_m) H(x_n))`.
    pub amplitude_violation: f64,
    /// Max absolute wrapped difference between `phi(x)` and
    /// `atan2(sum_m H(x_m), sum_m x_m)`.
    pub phase_violation: f64,
}

/// Checks the amplitude and phase identities for components `x_m` supported
/// on node sets `supports[m]`. Every component must vanish off its support.
pub fn verify_overlap_identities(
    op: &GhtOperator,
    components: &[GraphSignal],
    supports: &[Vec<usize>],
) -> Result<OverlapReport> {
    let n = op.n();
    if components.len() != supports.len() {
        return Err(Error::LengthMismatch {
            expected: components.len(),
            got: supports.len(),
        });
    }
    if components.is_empty() {
        return Err(Error::InvalidArgument(
            "need at least one component".into(),
        ));
    }
    for (m, (c, sup)) in components.iter().zip(supports).enumerate() {
        if c.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: c.len(),
            });
        }
        let mut on_support = vec![false; n];
        for &node in sup {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, n });
            }
            on_support[node] = true;
        }
        for (node, &v) in c.values().iter().enumerate() {
            if !on_support[node] && v != 0.0 {
                return Err(Error::SupportViolation { component: m, node });
            }
        }
    }

    let transforms: Vec<GraphSignal> = components
        .iter()
        .map(|c| ght(op, c))
        .collect::<Result<_>>()?;
    let mut x_sum = vec![0.0; n];
    let mut h_sum = vec![0.0; n];
    for (c, h) in components.iter().zip(&transforms) {
        for k in 0..n {
            x_sum[k] += c[k];
            h_sum[k] += h[k];
        }
    }
    let aggregate = analytic(op, &GraphSignal::new(x_sum.clone())?)?;
    let amp = amplitude(&aggregate);
    let phi = phase(&aggregate);

    let mut amplitude_violation = 0.0f64;
    let mut phase_violation = 0.0f64;
    let m_count = components.len();
    for k in 0..n {
        let mut rhs = 0.0;
        for m in 0..m_count {
            rhs += components[m][k].powi(2) + transforms[m][k].powi(2);
        }
        for m in 0..m_count {
            for l in 0..m_count {
                if m != l {
                    rhs += components[m][k] * components[l][k]
                        + transforms[m][k] * transforms[l][k];
                }
            }
        }
        amplitude_violation = amplitude_violation.max((amp[k].powi(2) - rhs).abs());

        let expected_phase = phase_of(Complex64::new(x_sum[k], h_sum[k]));
        phase_violation = phase_violation.max(wrap_to_half_open(phi[k] - expected_phase).abs());
    }
    Ok(OverlapReport {
        amplitude_violation,
        phase_violation,
    })
}
