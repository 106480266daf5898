//! Iterative rank-1 edge addition that dismantles non-trivial Jordan blocks
//! and removes zero eigenvalues, producing a diagonalizable and invertible
//! adjacency.
//!
//! Each iteration locates the worst defective eigenvalue cluster (the
//! largest group of collinear eigenvectors), extracts one left/right vector
//! pair (t, q) for it, and inserts a single new edge. For clusters at zero
//! the edge closes the dangling chain that carries the left null vector:
//! the source is argmax |t[n]| and the target is found by walking unique
//! in-neighbors back to the chain's branch point, which turns the chain
//! into a cycle (on the rosace this is exactly the fan-end -> hub edge).
//! Everywhere else the candidate is the argmax of |t[n]| * |q[m]| over
//! empty entries, ties broken lexicographically.

use ndarray::Array2;
use ndarray_linalg::SVD;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DiGraph;
use crate::spectral::{decompose, SpectralDecomposition, SpectralDiagnostics, ToleranceSet};

/// Escalation ladder for (cluster, collinear) tolerances: tight first, then
/// progressively looser so that large Jordan blocks - whose computed
/// eigenvalues scatter at radius eps^(1/k) - are still grouped.
const DETECTION_LADDER: [(f64, f64); 4] =
    [(1e-6, 1e-6), (1e-4, 1e-4), (1e-2, 1e-2), (0.3, 0.1)];

/// A defective (or zero) eigenvalue cluster targeted for dismantling.
#[derive(Debug, Clone)]
pub struct DefectiveCluster {
    /// Cluster center.
    pub eigenvalue: Complex64,
    /// Sorted eigenvalue indices belonging to the cluster.
    pub member_indices: Vec<usize>,
    /// Algebraic minus geometric multiplicity within the cluster (0 for the
    /// invertibility-only zero cluster).
    pub geometric_deficiency: usize,
    /// Whether the cluster targets the zero eigenvalue.
    pub targets_zero: bool,
    left: Vec<Complex64>,
    right: Vec<Complex64>,
}

impl DefectiveCluster {
    /// Unit-norm left vector of the cluster.
    pub fn left_vector(&self) -> &[Complex64] {
        &self.left
    }

    /// Unit-norm right vector of the cluster.
    pub fn right_vector(&self) -> &[Complex64] {
        &self.right
    }
}

/// How a candidate edge was selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionRule {
    /// Closed the in-degree-1 chain carrying the left null vector.
    ChainClosure,
    /// Literal argmax of |t[n]| * |q[m]| over empty entries.
    ScoreArgmax,
}

/// Selected candidate edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateEdge {
    pub source: usize,
    pub target: usize,
    /// |t[source]| * |q[target]|.
    pub score: f64,
    pub rule: SelectionRule,
}

/// One perturbation iteration record.
#[derive(Debug, Clone, Serialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub cluster_eigenvalue: [f64; 2],
    pub cluster_size: usize,
    pub geometric_deficiency: usize,
    pub source: usize,
    pub target: usize,
    pub score: f64,
    pub rule: SelectionRule,
}

/// Outcome of the perturbation loop.
#[derive(Debug, Clone)]
pub struct PerturbationResult {
    pub perturbed: DiGraph,
    pub added_edges: Vec<(usize, usize, f64)>,
    pub iterations: usize,
    pub before: SpectralDiagnostics,
    pub after: SpectralDiagnostics,
    pub trace: Vec<TraceEntry>,
}

/// Perturbation report per the external interface.
#[derive(Debug, Serialize)]
pub struct PerturbationReport {
    pub added_edges: Vec<(usize, usize, f64)>,
    pub iterations: usize,
    pub before: SpectralDiagnostics,
    pub after: SpectralDiagnostics,
    pub trace: Vec<TraceEntry>,
}

impl From<&PerturbationResult> for PerturbationReport {
    fn from(r: &PerturbationResult) -> Self {
        PerturbationReport {
            added_edges: r.added_edges.clone(),
            iterations: r.iterations,
            before: r.before,
            after: r.after,
            trace: r.trace.clone(),
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Groups eigenvalue indices whose eigenvalues are within `cluster_tol *
/// scale` and whose normalized eigenvectors are collinear to within
/// `collinear_tol`. Returns groups of size >= 2.
fn collinear_groups(
    dec: &SpectralDecomposition,
    cluster_tol: f64,
    collinear_tol: f64,
) -> Vec<Vec<usize>> {
    let n = dec.n();
    let scale = dec.scale();
    let values = dec.eigenvalues();
    let basis = dec.basis();
    let mut uf = UnionFind::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if (values[a] - values[b]).norm() > cluster_tol * scale {
                continue;
            }
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..n {
                dot += basis[[i, a]].conj() * basis[[i, b]];
            }
            if dot.norm() >= 1.0 - collinear_tol {
                uf.union(a, b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for k in 0..n {
        let r = uf.find(k);
        match root_of[r] {
            Some(gi) => groups[gi].push(k),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![k]);
            }
        }
    }
    groups.retain(|g| g.len() >= 2);
    groups
}

/// Dominant left singular vector of the bundle of columns `indices` of `m`,
/// unit norm with deterministic phase.
fn bundle_direction(m: &Array2<Complex64>, indices: &[usize]) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    let mut bundle = Array2::<Complex64>::zeros((n, indices.len()));
    for (c, &k) in indices.iter().enumerate() {
        bundle.column_mut(c).assign(&m.column(k));
    }
    let (u, _s, _) = bundle
        .svd(true, false)
        .map_err(|e| Error::Numerical(format!("bundle SVD failed: {e}")))?;
    let u = u.expect("left singular vectors requested");
    let mut dir: Vec<Complex64> = u.column(0).to_vec();
    let max_abs = dir.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if let Some(pivot) = dir.iter().find(|z| z.norm() > 1e-8 * max_abs) {
        let phase = pivot / pivot.norm();
        let rot = phase.conj();
        for z in dir.iter_mut() {
            *z *= rot;
        }
    }
    Ok(dir)
}

/// Locates the worst defective cluster: eigenvalues clustered by distance,
/// eigenvector collinearity within the cluster, largest collinear group
/// wins. Falls back to the zero-eigenvalue cluster when nothing is
/// defective but zero eigenvalues block invertibility. Returns `None` when
/// the decomposition already passes diagnostics.
pub fn find_worst_cluster(
    dec: &SpectralDecomposition,
    tolerances: &ToleranceSet,
) -> Result<Option<DefectiveCluster>> {
    if dec.is_diagonalizable() && dec.is_invertible() {
        return Ok(None);
    }
    let scale = dec.scale();

    // configured tolerances first, then the escalation ladder
    let mut rungs = vec![(tolerances.cluster, tolerances.collinear)];
    for r in DETECTION_LADDER {
        if !rungs.contains(&r) {
            rungs.push(r);
        }
    }
    let mut groups = Vec::new();
    for (cluster_tol, collinear_tol) in rungs {
        groups = collinear_groups(dec, cluster_tol, collinear_tol);
        if !groups.is_empty() {
            break;
        }
    }

    if !groups.is_empty() {
        groups.sort_by_key(|g| (usize::MAX - g.len(), g[0]));
        let members = groups.into_iter().next().unwrap();
        let center = members
            .iter()
            .map(|&k| dec.eigenvalues()[k])
            .sum::<Complex64>()
            / members.len() as f64;
        let left = bundle_direction(dec.left_basis(), &members)?;
        let right = bundle_direction(dec.basis(), &members)?;
        return Ok(Some(DefectiveCluster {
            eigenvalue: center,
            geometric_deficiency: members.len() - 1,
            targets_zero: center.norm() <= tolerances.zero * scale,
            member_indices: members,
            left,
            right,
        }));
    }

    // zero-eigenvalue cluster for invertibility
    let zero_members: Vec<usize> = dec
        .eigenvalues()
        .iter()
        .enumerate()
        .filter_map(|(k, v)| (v.norm() <= tolerances.zero * scale).then_some(k))
        .collect();
    if zero_members.is_empty() {
        return Ok(None);
    }
    let left = bundle_direction(dec.left_basis(), &zero_members)?;
    let right = bundle_direction(dec.basis(), &zero_members)?;
    Ok(Some(DefectiveCluster {
        eigenvalue: Complex64::new(0.0, 0.0),
        geometric_deficiency: 0,
        targets_zero: true,
        member_indices: zero_members,
        left,
        right,
    }))
}

/// Walks unique in-neighbors backward from `start` through pass-through
/// nodes (in-degree 1), stopping at the first branch point (out-degree >= 2
/// or in-degree != 1) or on revisit. Returns the stop node.
fn chain_source(g: &DiGraph, start: usize) -> Option<usize> {
    let mut visited = vec![false; g.n()];
    visited[start] = true;
    let mut cur = start;
    let mut found = None;
    loop {
        let ins = g.in_neighbors(cur);
        if ins.len() != 1 {
            break;
        }
        let u = ins[0];
        if visited[u] {
            break;
        }
        visited[u] = true;
        found = Some(u);
        if g.out_degree(u) >= 2 || g.in_degree(u) != 1 {
            break;
        }
        cur = u;
    }
    found
}

/// Selects the edge to add for a cluster. Chain closure for zero-targeting
/// clusters when the walk succeeds; otherwise the score argmax.
pub fn candidate_edge(
    cluster: &DefectiveCluster,
    g: &DiGraph,
    tolerances: &ToleranceSet,
) -> Result<CandidateEdge> {
    let n = g.n();
    let t_abs: Vec<f64> = cluster.left.iter().map(|z| z.norm()).collect();
    let q_abs: Vec<f64> = cluster.right.iter().map(|z| z.norm()).collect();

    let source = t_abs
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| a.total_cmp(b).then(ib.cmp(ia)))
        .map(|(i, _)| i)
        .expect("non-empty vector");

    if cluster.targets_zero {
        if let Some(target) = chain_source(g, source) {
            if !g.has_edge(source, target) {
                return Ok(CandidateEdge {
                    source,
                    target,
                    score: t_abs[source] * q_abs[target],
                    rule: SelectionRule::ChainClosure,
                });
            }
        }
    }

    let mut best: Option<CandidateEdge> = None;
    for i in 0..n {
        for j in 0..n {
            if g.has_edge(i, j) {
                continue;
            }
            let score = t_abs[i] * q_abs[j];
            if score <= tolerances.score {
                continue;
            }
            if best.map_or(true, |b| score > b.score) {
                best = Some(CandidateEdge {
                    source: i,
                    target: j,
                    score,
                    rule: SelectionRule::ScoreArgmax,
                });
            }
        }
    }
    best.ok_or_else(|| Error::PerturbationStuck {
        reason: format!(
            "no admissible candidate edge for cluster at {} ({} members, deficiency {})",
            cluster.eigenvalue,
            cluster.member_indices.len(),
            cluster.geometric_deficiency
        ),
        trace: Vec::new(),
    })
}

/// Iteratively adds edges of the given weight until the adjacency is
/// diagonalizable and invertible.
pub fn perturb(
    g: &DiGraph,
    weight: f64,
    tolerances: ToleranceSet,
    max_iterations: Option<usize>,
) -> Result<PerturbationResult> {
    if !(weight > 0.0) || !weight.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "perturbation weight must be positive and finite, got {weight}"
        )));
    }
    let max_iterations = max_iterations.unwrap_or(2 * g.n());
    let mut work = g.clone();
    let mut added64: Vec<(usize, usize, f64)> = Vec::new();
    let mut trace: Vec<TraceEntry> = Vec::new();
    let mut before: Option<SpectralDiagnostics> = None;

    loop {
        let dec = decompose(&work, tolerances)?;
        let diag = crate::spectral::diagnostics(&dec);
        if before.is_none() {
            before = Some(diag);
        }
        if diag.is_diagonalizable && diag.is_invertible {
            return Ok(PerturbationResult {
                perturbed: work,
                iterations: added64.len(),
                added_edges: added64,
                before: before.unwrap(),
                after: diag,
                trace,
            });
        }
        if added64.len() >= max_iterations {
            return Err(Error::MaxIterations {
                max_iterations,
                trace,
            });
        }
        let cluster = match find_worst_cluster(&dec, &tolerances)? {
            Some(c) => c,
            None => {
                return Err(Error::PerturbationStuck {
                    reason: format!(
                        "diagnostics fail (condition {:.3e}, min |lambda| {:.3e}) \
                         but no defective or zero cluster was detected",
                        diag.condition_estimate, diag.min_abs_eigenvalue
                    ),
                    trace,
                })
            }
        };
        let cand = match candidate_edge(&cluster, &work, &tolerances) {
            Ok(c) => c,
            Err(Error::PerturbationStuck { reason, .. }) => {
                return Err(Error::PerturbationStuck { reason, trace })
            }
            Err(e) => return Err(e),
        };
        work.add_edge(cand.source, cand.target, weight)?;
        trace.push(TraceEntry {
            iteration: added64.len(),
            cluster_eigenvalue: [cluster.eigenvalue.re, cluster.eigenvalue.im],
            cluster_size: cluster.member_indices.len(),
            geometric_deficiency: cluster.geometric_deficiency,
            source: cand.source,
            target: cand.target,
            score: cand.score,
            rule: cand.rule,
        });
        added64.push((cand.source, cand.target, weight));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_cycle, gen_rosace, DiGraph, RosaceSpec};
    use ndarray::array;

    fn tol() -> ToleranceSet {
        ToleranceSet::default()
    }

    fn path3() -> DiGraph {
        DiGraph::from_adjacency(array![
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0]
        ])
        .unwrap()
    }

    #[test]
    fn healthy_cycle_has_no_cluster() {
        let dec = decompose(&gen_cycle(4).unwrap(), tol()).unwrap();
        assert!(find_worst_cluster(&dec, &tol()).unwrap().is_none());
    }

    #[test]
    fn nilpotent_path_cluster_at_zero() {
        let dec = decompose(&path3(), tol()).unwrap();
        let cluster = find_worst_cluster(&dec, &tol()).unwrap().unwrap();
        assert_eq!(cluster.member_indices.len(), 3);
        assert!(cluster.targets_zero);
        assert!(cluster.eigenvalue.norm() < 1e-12);
        // left vector concentrated on the dead end, right on the chain head
        let t: Vec<f64> = cluster.left_vector().iter().map(|z| z.norm()).collect();
        let q: Vec<f64> = cluster.right_vector().iter().map(|z| z.norm()).collect();
        assert!(t[2] > 0.99 && t[0] < 1e-8, "{t:?}");
        assert!(q[0] > 0.99 && q[2] < 1e-8, "{q:?}");
    }

    #[test]
    fn path_candidate_closes_the_chain() {
        let g = path3();
        let dec = decompose(&g, tol()).unwrap();
        let cluster = find_worst_cluster(&dec, &tol()).unwrap().unwrap();
        let cand = candidate_edge(&cluster, &g, &tol()).unwrap();
        assert_eq!((cand.source, cand.target), (2, 0));
        assert!(cand.score > 0.9);
    }

    #[test]
    fn path_perturbation_yields_three_cycle() {
        let result = perturb(&path3(), 1.0, tol(), None).unwrap();
        assert_eq!(result.added_edges, vec![(2, 0, 1.0)]);
        assert_eq!(result.iterations, 1);
        assert!(result.after.is_diagonalizable && result.after.is_invertible);
        // spectrum is now the cube roots of unity
        let dec = decompose(&result.perturbed, tol()).unwrap();
        for v in dec.eigenvalues() {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        // weight scaling: weight w gives |lambda| = w^(1/3)
        let result = perturb(&path3(), 8.0, tol(), None).unwrap();
        let dec = decompose(&result.perturbed, tol()).unwrap();
        for v in dec.eigenvalues() {
            assert!((v.norm() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cycle_needs_no_edges() {
        let result = perturb(&gen_cycle(8).unwrap(), 1.0, tol(), None).unwrap();
        assert!(result.added_edges.is_empty());
        assert_eq!(result.iterations, 0);
        assert_eq!(result.before, result.after);
    }

    #[test]
    fn zero_matrix_gets_self_loops() {
        let g = DiGraph::empty(3).unwrap();
        let result = perturb(&g, 1.0, tol(), None).unwrap();
        assert_eq!(result.added_edges.len(), 3);
        for (s, t, _) in &result.added_edges {
            assert_eq!(s, t);
        }
        assert!(result.after.is_invertible);
    }

    #[test]
    fn rosace_closes_every_fan_into_its_hub() {
        let spec = RosaceSpec::new(6, 5).unwrap();
        let g = gen_rosace(&spec).unwrap();
        let result = perturb(&g, 1.0, tol(), None).unwrap();
        assert_eq!(result.added_edges.len(), 6);
        let mut expected: Vec<(usize, usize)> = (1..=6)
            .map(|m| {
                let nodes = spec.fan_nodes(m);
                (*nodes.last().unwrap(), nodes[0])
            })
            .collect();
        expected.sort_unstable();
        let mut got: Vec<(usize, usize)> =
            result.added_edges.iter().map(|&(s, t, _)| (s, t)).collect();
        got.sort_unstable();
        assert_eq!(got, expected);
        assert!(result.trace.iter().all(|t| t.rule == SelectionRule::ChainClosure));
    }

    #[test]
    fn trace_never_repeats_an_edge() {
        let spec = RosaceSpec::new(4, 4).unwrap();
        let result = perturb(&gen_rosace(&spec).unwrap(), 1.0, tol(), None).unwrap();
        let mut seen = std::collections::HashSet::new();
        for e in &result.trace {
            assert!(seen.insert((e.source, e.target)), "repeat {e:?}");
        }
    }

    #[test]
    fn max_iterations_respected() {
        let spec = RosaceSpec::new(5, 4).unwrap();
        let err = perturb(&gen_rosace(&spec).unwrap(), 1.0, tol(), Some(2)).unwrap_err();
        assert!(matches!(err, Error::MaxIterations { max_iterations: 2, .. }));
    }

    #[test]
    fn frobenius_displacement_matches_edge_count() {
        let spec = RosaceSpec::new(4, 3).unwrap();
        let g = gen_rosace(&spec).unwrap();
        let result = perturb(&g, 1.0, tol(), None).unwrap();
        let diff = result.perturbed.adjacency() - g.adjacency();
        let fro = diff.iter().map(|x| x * x).sum::<f64>().sqrt();
        let expect = (result.added_edges.len() as f64).sqrt();
        assert!((fro - expect).abs() < 1e-12);
    }
}
