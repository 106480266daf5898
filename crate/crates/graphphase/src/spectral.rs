//! Eigendecomposition of the adjacency operator, conjugate-pair bookkeeping,
//! graph Fourier transform, and diagonalizability/invertibility diagnostics.

use ndarray::{Array1, Array2, OwnedRepr};
use ndarray_linalg::{Factorize, Solve, SVD};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, GraphSignal};
use crate::lapack;

/// Numerical tolerances shared across the pipeline. All thresholds are
/// relative to the spectral radius (a radius of zero is treated as one).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceSet {
    /// Invertibility threshold on the smallest eigenvalue magnitude.
    pub zero: f64,
    /// Imaginary parts at or below this are snapped to the real axis.
    pub imag: f64,
    /// Maximum distance for conjugate-pair matching.
    pub pair: f64,
    /// Maximum eigenvector-basis condition number for diagonalizability.
    pub kappa_max: f64,
    /// Eigenvalue clustering radius for Jordan-block detection.
    pub cluster: f64,
    /// Collinearity margin: eigenvectors with |<u_a,u_b>| >= 1 - collinear
    /// are grouped.
    pub collinear: f64,
    /// Minimum admissible |t[n]|*|q[m]| score for a candidate edge.
    pub score: f64,
    /// Maximum relative reconstruction residual for an accepted
    /// decomposition.
    pub residual: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        ToleranceSet {
            zero: 1e-8,
            imag: 1e-10,
            pair: 1e-8,
            kappa_max: 1e8,
            cluster: 1e-6,
            collinear: 1e-6,
            score: 1e-12,
            residual: 1e-8,
        }
    }
}

impl ToleranceSet {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("zero", self.zero),
            ("imag", self.imag),
            ("pair", self.pair),
            ("collinear", self.collinear),
            ("cluster", self.cluster),
            ("score", self.score),
            ("residual", self.residual),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "tolerance {name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.kappa_max >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "kappa_max must be >= 1, got {}",
                self.kappa_max
            )));
        }
        Ok(())
    }
}

/// Pairing role of each eigenvalue index after symmetrization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    Real(usize),
    /// `(k1, k2)`: `k1` has positive imaginary part, `k2` is its conjugate.
    ConjugatePair(usize, usize),
}

/// Diagnosability summary of a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralDiagnostics {
    pub condition_estimate: f64,
    /// Smallest singular value of the adjacency: a lower bound on every
    /// eigenvalue magnitude that stays exact for defective matrices, whose
    /// computed eigenvalues scatter.
    pub min_abs_eigenvalue: f64,
    pub is_diagonalizable: bool,
    pub is_invertible: bool,
    pub spectral_radius: f64,
    pub residual: f64,
}

/// Eigendecomposition of an adjacency operator with enforced conjugate
/// structure. Eigenvalues are sorted by (real, imaginary) lexicographically;
/// for every conjugate pair the second member's eigenvalue and eigenvectors
/// are exact conjugates of the first's.
pub struct SpectralDecomposition {
    eigenvalues: Vec<Complex64>,
    basis: Array2<Complex64>,
    left: Array2<Complex64>,
    /// LU factorization of the basis; absent when the basis is numerically
    /// singular (defective decompositions, which `gft` refuses anyway).
    dual: Option<ndarray_linalg::LUFactorized<OwnedRepr<Complex64>>>,
    pairing: Vec<Pairing>,
    tolerances: ToleranceSet,
    diagnostics: SpectralDiagnostics,
}

impl std::fmt::Debug for SpectralDecomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralDecomposition")
            .field("n", &self.eigenvalues.len())
            .field("diagnostics", &self.diagnostics)
            .finish_non_exhaustive()
    }
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Right eigenvectors as columns.
    pub fn basis(&self) -> &Array2<Complex64> {
        &self.basis
    }

    /// Left eigenvectors as columns, index-aligned with the right basis.
    pub fn left_basis(&self) -> &Array2<Complex64> {
        &self.left
    }

    pub fn pairing(&self) -> &[Pairing] {
        &self.pairing
    }

    pub fn tolerances(&self) -> &ToleranceSet {
        &self.tolerances
    }

    pub fn residual(&self) -> f64 {
        self.diagnostics.residual
    }

    pub fn spectral_radius(&self) -> f64 {
        self.diagnostics.spectral_radius
    }

    /// Scale used for relative thresholds.
    pub fn scale(&self) -> f64 {
        if self.diagnostics.spectral_radius > 0.0 {
            self.diagnostics.spectral_radius
        } else {
            1.0
        }
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.diagnostics.is_diagonalizable
    }

    pub fn is_invertible(&self) -> bool {
        self.diagnostics.is_invertible
    }

    /// Applies the dual basis: solves `U y = x`.
    pub fn solve_dual(&self, x: &Array1<Complex64>) -> Result<Array1<Complex64>> {
        let lu = self.dual.as_ref().ok_or_else(|| {
            Error::Defective("eigenbasis is numerically singular; perturb the graph first".into())
        })?;
        lu.solve(x)
            .map_err(|e| Error::Numerical(format!("dual solve failed: {e}")))
    }
}

/// Eigendecomposition report per the external interface.
#[derive(Debug, Serialize)]
pub struct SpectralReport {
    pub eigenvalues: Vec<[f64; 2]>,
    pub condition_estimate: f64,
    pub min_abs_eigenvalue: f64,
    pub is_diagonalizable: bool,
    pub is_invertible: bool,
    pub residual: f64,
}

impl From<&SpectralDecomposition> for SpectralReport {
    fn from(dec: &SpectralDecomposition) -> Self {
        let d = dec.diagnostics;
        SpectralReport {
            eigenvalues: dec.eigenvalues.iter().map(|z| [z.re, z.im]).collect(),
            condition_estimate: d.condition_estimate,
            min_abs_eigenvalue: d.min_abs_eigenvalue,
            is_diagonalizable: d.is_diagonalizable,
            is_invertible: d.is_invertible,
            residual: d.residual,
        }
    }
}

/// Decomposes the adjacency operator. Defectiveness is reported through the
/// diagnostics, not as an error.
pub fn decompose(g: &DiGraph, tolerances: ToleranceSet) -> Result<SpectralDecomposition> {
    tolerances.validate()?;
    let a = g.adjacency();
    let n = g.n();
    let raw = lapack::dgeev_full(a)?;

    let rho = raw
        .wr
        .iter()
        .zip(&raw.wi)
        .map(|(re, im)| re.hypot(*im))
        .fold(0.0f64, f64::max);
    let scale = if rho > 0.0 { rho } else { 1.0 };

    // Snap near-real eigenvalues to the axis before assembling complex
    // vectors: a pair whose imaginary part is below threshold becomes two
    // real eigenvalues whose eigenvectors are the stored real and imaginary
    // parts (they span the real eigenspace).
    let snap = tolerances.imag * scale;
    let mut wi = raw.wi.clone();
    for v in wi.iter_mut() {
        if v.abs() <= snap {
            *v = 0.0;
        }
    }

    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let mut right = Array2::<Complex64>::zeros((n, n));
    let mut left = Array2::<Complex64>::zeros((n, n));
    let mut j = 0;
    while j < n {
        if wi[j] == 0.0 {
            values[j] = Complex64::new(raw.wr[j], 0.0);
            for i in 0..n {
                right[[i, j]] = Complex64::new(raw.vr[j * n + i], 0.0);
                left[[i, j]] = Complex64::new(raw.vl[j * n + i], 0.0);
            }
            j += 1;
        } else {
            // LAPACK pair: v(j) = VR(:,j) + i VR(:,j+1), v(j+1) its conjugate
            values[j] = Complex64::new(raw.wr[j], wi[j]);
            values[j + 1] = Complex64::new(raw.wr[j + 1], wi[j + 1]);
            for i in 0..n {
                let re_r = raw.vr[j * n + i];
                let im_r = raw.vr[(j + 1) * n + i];
                right[[i, j]] = Complex64::new(re_r, im_r);
                right[[i, j + 1]] = Complex64::new(re_r, -im_r);
                let re_l = raw.vl[j * n + i];
                let im_l = raw.vl[(j + 1) * n + i];
                left[[i, j]] = Complex64::new(re_l, im_l);
                left[[i, j + 1]] = Complex64::new(re_l, -im_l);
            }
            j += 2;
        }
    }

    // deterministic sort: (re, im), original index as final tiebreak
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .re
            .total_cmp(&values[b].re)
            .then(values[a].im.total_cmp(&values[b].im))
            .then(a.cmp(&b))
    });
    let values: Vec<Complex64> = order.iter().map(|&k| values[k]).collect();
    let mut basis = Array2::<Complex64>::zeros((n, n));
    let mut left_sorted = Array2::<Complex64>::zeros((n, n));
    for (new, &old) in order.iter().enumerate() {
        basis.column_mut(new).assign(&right.column(old));
        left_sorted.column_mut(new).assign(&left.column(old));
    }
    let mut values = values;
    let mut left = left_sorted;

    // conjugate pairing: nearest-conjugate matching within pair tolerance
    let mut pairing = vec![None::<Pairing>; n];
    for k in 0..n {
        if values[k].im == 0.0 {
            pairing[k] = Some(Pairing::Real(k));
        }
    }
    for k1 in 0..n {
        if pairing[k1].is_some() || values[k1].im <= 0.0 {
            continue;
        }
        let target = values[k1].conj();
        let mut best: Option<(usize, f64)> = None;
        for (k2, v) in values.iter().enumerate() {
            if pairing[k2].is_some() || v.im >= 0.0 {
                continue;
            }
            let d = (v - target).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((k2, d));
            }
        }
        match best {
            Some((k2, d)) if d <= tolerances.pair * scale => {
                pairing[k1] = Some(Pairing::ConjugatePair(k1, k2));
                pairing[k2] = Some(Pairing::ConjugatePair(k1, k2));
            }
            _ => {
                return Err(Error::Numerical(format!(
                    "eigenvalue {} has no conjugate partner within tolerance",
                    values[k1]
                )))
            }
        }
    }
    if pairing.iter().any(Option::is_none) {
        return Err(Error::Numerical(
            "conjugate pairing left an index unassigned".into(),
        ));
    }
    let pairing: Vec<Pairing> = pairing.into_iter().map(Option::unwrap).collect();

    // symmetrize values and vectors; normalize representatives
    for k in 0..n {
        match pairing[k] {
            Pairing::Real(_) => {
                normalize_column(&mut basis, k);
                normalize_column(&mut left, k);
            }
            Pairing::ConjugatePair(k1, k2) if k == k1 => {
                let sym = 0.5 * (values[k1] + values[k2].conj());
                values[k1] = sym;
                values[k2] = sym.conj();
                normalize_column(&mut basis, k1);
                normalize_column(&mut left, k1);
                let conj_b: Vec<Complex64> = basis.column(k1).iter().map(|z| z.conj()).collect();
                basis
                    .column_mut(k2)
                    .assign(&Array1::from_vec(conj_b));
                let conj_l: Vec<Complex64> = left.column(k1).iter().map(|z| z.conj()).collect();
                left.column_mut(k2).assign(&Array1::from_vec(conj_l));
            }
            Pairing::ConjugatePair(..) => {}
        }
    }

    // residual ||A U - U Lambda||_F / ||A||_F; A is real, so A U splits into
    // two real products
    let u_re = basis.mapv(|z| z.re);
    let u_im = basis.mapv(|z| z.im);
    let au_re = a.dot(&u_re);
    let au_im = a.dot(&u_im);
    let mut num = 0.0f64;
    for k in 0..n {
        for i in 0..n {
            let au = Complex64::new(au_re[[i, k]], au_im[[i, k]]);
            num += (au - basis[[i, k]] * values[k]).norm_sqr();
        }
    }
    let a_fro = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let residual = num.sqrt() / if a_fro > 0.0 { a_fro } else { 1.0 };

    // condition of U and smallest singular value of A
    let (_, s_u, _) = basis
        .svd(false, false)
        .map_err(|e| Error::Numerical(format!("SVD of eigenbasis failed: {e}")))?;
    let condition = if s_u[n - 1] > 0.0 {
        s_u[0] / s_u[n - 1]
    } else {
        f64::INFINITY
    };
    let (_, s_a, _) = a
        .svd(false, false)
        .map_err(|e| Error::Numerical(format!("SVD of adjacency failed: {e}")))?;
    let sigma_min = s_a[n - 1];

    let diagnostics = SpectralDiagnostics {
        condition_estimate: condition,
        min_abs_eigenvalue: sigma_min,
        is_diagonalizable: condition <= tolerances.kappa_max && residual <= tolerances.residual,
        is_invertible: sigma_min > tolerances.zero * scale,
        spectral_radius: rho,
        residual,
    };

    let dual = if diagnostics.is_diagonalizable {
        Some(basis.factorize().map_err(|e| {
            Error::Numerical(format!("LU factorization of eigenbasis failed: {e}"))
        })?)
    } else {
        // singular pivots are expected here; keep the factorization only if
        // LAPACK accepts the matrix
        basis.factorize().ok()
    };

    Ok(SpectralDecomposition {
        eigenvalues: values,
        basis,
        left,
        dual,
        pairing,
        tolerances,
        diagnostics,
    })
}

/// Unit norm, first significant entry rotated to positive real phase.
fn normalize_column(m: &mut Array2<Complex64>, k: usize) {
    let norm = m.column(k).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let max_abs = m.column(k).iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let pivot = m
        .column(k)
        .iter()
        .find(|z| z.norm() > 1e-8 * max_abs)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = pivot / pivot.norm();
    let factor = phase.conj() / norm;
    for z in m.column_mut(k).iter_mut() {
        *z *= factor;
    }
}

/// Diagnostics of a decomposition (cached at construction).
pub fn diagnostics(dec: &SpectralDecomposition) -> SpectralDiagnostics {
    dec.diagnostics
}

/// Graph Fourier transform `x_hat = U^{-1} x`, computed through the stored
/// factorization. Requires a diagonalizable decomposition.
pub fn gft(dec: &SpectralDecomposition, x: &GraphSignal) -> Result<Vec<Complex64>> {
    if !dec.is_diagonalizable() {
        return Err(Error::Defective(format!(
            "condition estimate {:.3e} exceeds kappa_max {:.3e} or residual {:.3e} exceeds {:.3e}",
            dec.diagnostics.condition_estimate,
            dec.tolerances.kappa_max,
            dec.diagnostics.residual,
            dec.tolerances.residual,
        )));
    }
    if x.len() != dec.n() {
        return Err(Error::LengthMismatch {
            expected: dec.n(),
            got: x.len(),
        });
    }
    let b = Array1::from_iter(x.values().iter().map(|&v| Complex64::new(v, 0.0)));
    Ok(dec.solve_dual(&b)?.to_vec())
}

/// Inverse graph Fourier transform `U x_hat`.
pub fn igft(dec: &SpectralDecomposition, xhat: &[Complex64]) -> Result<Vec<Complex64>> {
    if xhat.len() != dec.n() {
        return Err(Error::LengthMismatch {
            expected: dec.n(),
            got: xhat.len(),
        });
    }
    let v = Array1::from_vec(xhat.to_vec());
    Ok(dec.basis.dot(&v).to_vec())
}

/// Inverse GFT truncated to a real signal. Errors if the imaginary residue
/// exceeds `1e-10 * ||xhat||`.
pub fn igft_real(dec: &SpectralDecomposition, xhat: &[Complex64]) -> Result<GraphSignal> {
    let y = igft(dec, xhat)?;
    let scale = xhat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let residue = y.iter().map(|z| z.im.abs()).fold(0.0f64, f64::max);
    if residue > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Numerical(format!(
            "imaginary residue {residue:.3e} exceeds 1e-10 * ||xhat|| = {:.3e}",
            1e-10 * scale
        )));
    }
    GraphSignal::new(y.iter().map(|z| z.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_cycle, gen_rosace, DiGraph, RosaceSpec};
    use ndarray::array;

    fn tol() -> ToleranceSet {
        ToleranceSet::default()
    }

    #[test]
    fn identity_adjacency() {
        let mut g = DiGraph::empty(3).unwrap();
        for i in 0..3 {
            g.add_edge(i, i, 1.0).unwrap();
        }
        let dec = decompose(&g, tol()).unwrap();
        for v in dec.eigenvalues() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let d = diagnostics(&dec);
        assert!(d.is_diagonalizable && d.is_invertible);
        assert!((d.condition_estimate - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cycle4_spectrum_is_fourth_roots_of_unity() {
        let dec = decompose(&gen_cycle(4).unwrap(), tol()).unwrap();
        // sorted by (re, im): -1, -i, +i, 1
        let expect = [
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 0.0),
        ];
        for (got, want) in dec.eigenvalues().iter().zip(expect) {
            assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        }
        let d = diagnostics(&dec);
        assert!(d.is_diagonalizable && d.is_invertible);
        assert!((d.min_abs_eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cycle16_spectrum_matches_dft_oracle() {
        let dec = decompose(&gen_cycle(16).unwrap(), tol()).unwrap();
        // oracle: 16th roots of unity, matched by nearest distance (the
        // lexicographic sort is unstable under 1-ulp ties across routes)
        let mut remaining: Vec<Complex64> = dec.eigenvalues().to_vec();
        for k in 0..16 {
            let want = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 16.0);
            let (idx, d) = remaining
                .iter()
                .enumerate()
                .map(|(i, z)| (i, (z - want).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(d < 1e-10, "no match for {want}: best {d}");
            remaining.swap_remove(idx);
        }
    }

    #[test]
    fn nilpotent_path_is_defective_and_singular() {
        let a = array![[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]];
        let g = DiGraph::from_adjacency(a).unwrap();
        let dec = decompose(&g, tol()).unwrap();
        for v in dec.eigenvalues() {
            assert_eq!(*v, Complex64::new(0.0, 0.0));
        }
        let d = diagnostics(&dec);
        assert!(d.condition_estimate > tol().kappa_max);
        assert!(!d.is_diagonalizable);
        assert!(!d.is_invertible);
        assert_eq!(d.min_abs_eigenvalue, 0.0);
    }

    #[test]
    fn unperturbed_rosace_fails_both_flags() {
        let g = gen_rosace(&RosaceSpec::new(20, 20).unwrap()).unwrap();
        let dec = decompose(&g, tol()).unwrap();
        let d = diagnostics(&dec);
        assert!(!d.is_diagonalizable);
        assert!(!d.is_invertible);
    }

    #[test]
    fn conjugate_structure_enforced() {
        let dec = decompose(&gen_cycle(5).unwrap(), tol()).unwrap();
        for &p in dec.pairing() {
            if let Pairing::ConjugatePair(k1, k2) = p {
                assert_eq!(dec.eigenvalues()[k1].conj(), dec.eigenvalues()[k2]);
                for i in 0..dec.n() {
                    assert_eq!(dec.basis()[[i, k1]].conj(), dec.basis()[[i, k2]]);
                    assert_eq!(dec.left_basis()[[i, k1]].conj(), dec.left_basis()[[i, k2]]);
                }
            }
        }
        // multiset closed under conjugation
        let mut vals = dec.eigenvalues().to_vec();
        let mut conj: Vec<Complex64> = vals.iter().map(|z| z.conj()).collect();
        let key = |z: &Complex64| (z.re, z.im);
        vals.sort_by(|a, b| key(a).0.total_cmp(&key(b).0).then(key(a).1.total_cmp(&key(b).1)));
        conj.sort_by(|a, b| key(a).0.total_cmp(&key(b).0).then(key(a).1.total_cmp(&key(b).1)));
        assert_eq!(vals, conj);
    }

    #[test]
    fn gft_igft_round_trip() {
        let g = gen_cycle(8).unwrap();
        let dec = decompose(&g, tol()).unwrap();
        let x = GraphSignal::new((0..8).map(|k| (k as f64 * 0.7).sin() + 0.3).collect()).unwrap();
        let xhat = gft(&dec, &x).unwrap();
        let back = igft_real(&dec, &xhat).unwrap();
        for (a, b) in x.values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_signal_projects_onto_unit_eigenvalue() {
        let dec = decompose(&gen_cycle(4).unwrap(), tol()).unwrap();
        let x = GraphSignal::new(vec![2.0; 4]).unwrap();
        let xhat = gft(&dec, &x).unwrap();
        for (k, v) in dec.eigenvalues().iter().enumerate() {
            if (v - Complex64::new(1.0, 0.0)).norm() < 1e-9 {
                assert!(xhat[k].norm() > 1.0);
            } else {
                assert!(xhat[k].norm() < 1e-10, "leak at {v}: {}", xhat[k]);
            }
        }
    }

    #[test]
    fn real_signal_has_conjugate_coefficients() {
        let dec = decompose(&gen_cycle(8).unwrap(), tol()).unwrap();
        let x = GraphSignal::new((0..8).map(|k| (k as f64).cos()).collect()).unwrap();
        let xhat = gft(&dec, &x).unwrap();
        for &p in dec.pairing() {
            if let Pairing::ConjugatePair(k1, k2) = p {
                assert!((xhat[k1].conj() - xhat[k2]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn gft_on_defective_graph_refuses() {
        let a = array![[0.0, 1.0], [0.0, 0.0]];
        let g = DiGraph::from_adjacency(a).unwrap();
        let dec = decompose(&g, tol()).unwrap();
        let x = GraphSignal::new(vec![1.0, 2.0]).unwrap();
        assert!(matches!(gft(&dec, &x), Err(Error::Defective(_))));
    }

    #[test]
    fn igft_of_basis_vector_returns_eigenvector() {
        let dec = decompose(&gen_cycle(4).unwrap(), tol()).unwrap();
        let k = dec
            .eigenvalues()
            .iter()
            .position(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-9)
            .unwrap();
        let mut e = vec![Complex64::new(0.0, 0.0); 4];
        e[k] = Complex64::new(1.0, 0.0);
        let y = igft(&dec, &e).unwrap();
        for i in 0..4 {
            assert!((y[i] - dec.basis()[[i, k]]).norm() < 1e-12);
        }
    }

    #[test]
    fn sorting_is_deterministic() {
        let g = gen_rosace(&RosaceSpec::new(4, 3).unwrap()).unwrap();
        let d1 = decompose(&g, tol()).unwrap();
        let d2 = decompose(&g, tol()).unwrap();
        assert_eq!(d1.eigenvalues(), d2.eigenvalues());
        assert_eq!(d1.basis(), d2.basis());
    }

    #[test]
    fn reconstruction_residual_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let n = rng.random_range(2..=24);
            let mut g = DiGraph::empty(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    if i != j && rng.random_bool(0.3) {
                        g.add_edge(i, j, rng.random_range(0.2..2.0)).unwrap();
                    }
                }
            }
            let dec = decompose(&g, tol()).unwrap();
            assert!(dec.residual() <= 1e-8, "residual {}", dec.residual());
        }
    }
}
