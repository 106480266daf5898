//! Directed-graph data model, deterministic generators, and node signals.
//!
//! The adjacency matrix is dense and oriented row-as-source: entry `(i, j)`
//! holds the weight of edge `i -> j`. Applying the matrix to a signal pulls
//! each node's value from its out-neighbors, so on a directed cycle the shift
//! acts like the one-step advance of a periodic time series and positive
//! frequencies carry eigenvalues with positive imaginary part, matching the
//! classical discrete Hilbert transform sign convention.

use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};

/// Weighted directed graph with a dense adjacency matrix.
///
/// Entry `(i, j)` is the weight of edge `i -> j`; the edge set is exactly the
/// nonzero entries. Immutable after construction except for
/// [`DiGraph::add_edge`], which inserts a brand-new edge (used by the
/// perturbation).
#[derive(Debug, Clone, PartialEq)]
pub struct DiGraph {
    n: usize,
    adjacency: Array2<f64>,
    node_labels: Option<Vec<String>>,
}

/// One directed edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

impl DiGraph {
    /// Graph on `n` nodes with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("node count must be >= 1".into()));
        }
        Ok(DiGraph {
            n,
            adjacency: Array2::zeros((n, n)),
            node_labels: None,
        })
    }

    /// Wraps a dense adjacency matrix. The matrix must be square with finite
    /// entries.
    pub fn from_adjacency(adjacency: Array2<f64>) -> Result<Self> {
        let n = adjacency.nrows();
        if n == 0 || adjacency.ncols() != n {
            return Err(Error::InvalidArgument(format!(
                "adjacency must be square and non-empty, got {}x{}",
                adjacency.nrows(),
                adjacency.ncols()
            )));
        }
        if let Some(bad) = adjacency.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "adjacency entries must be finite, found {bad}"
            )));
        }
        Ok(DiGraph {
            n,
            adjacency,
            node_labels: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &Array2<f64> {
        &self.adjacency
    }

    pub fn node_labels(&self) -> Option<&[String]> {
        self.node_labels.as_deref()
    }

    pub fn set_node_labels(&mut self, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: labels.len(),
            });
        }
        self.node_labels = Some(labels);
        Ok(())
    }

    pub fn weight(&self, src: usize, dst: usize) -> f64 {
        self.adjacency[[src, dst]]
    }

    pub fn has_edge(&self, src: usize, dst: usize) -> bool {
        self.adjacency[[src, dst]] != 0.0
    }

    /// Edges in row-major (source, target) order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency.indexed_iter().filter_map(|((i, j), w)| {
            (*w != 0.0).then_some(Edge {
                src: i,
                dst: j,
                weight: *w,
            })
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|w| **w != 0.0).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.adjacency.row(v).iter().filter(|w| **w != 0.0).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.adjacency
            .column(v)
            .iter()
            .filter(|w| **w != 0.0)
            .count()
    }

    pub fn out_neighbors(&self, v: usize) -> Vec<usize> {
        self.adjacency
            .row(v)
            .iter()
            .enumerate()
            .filter_map(|(j, w)| (*w != 0.0).then_some(j))
            .collect()
    }

    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        self.adjacency
            .column(v)
            .iter()
            .enumerate()
            .filter_map(|(i, w)| (*w != 0.0).then_some(i))
            .collect()
    }

    pub fn has_self_loops(&self) -> bool {
        (0..self.n).any(|i| self.adjacency[[i, i]] != 0.0)
    }

    /// Inserts a new edge. The entry must currently be zero; existing edges
    /// are never incremented.
    pub fn add_edge(&mut self, src: usize, dst: usize, weight: f64) -> Result<()> {
        for node in [src, dst] {
            if node >= self.n {
                return Err(Error::NodeOutOfRange { node, n: self.n });
            }
        }
        if !weight.is_finite() || weight == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "edge weight must be finite and nonzero, got {weight}"
            )));
        }
        if self.adjacency[[src, dst]] != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "edge {src}->{dst} already exists"
            )));
        }
        self.adjacency[[src, dst]] = weight;
        Ok(())
    }
}

/// Real node-indexed signal.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSignal {
    values: Vec<f64>,
}

impl GraphSignal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("signal must be non-empty".into()));
        }
        if let Some(bad) = values.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "signal entries must be finite, found {bad}"
            )));
        }
        Ok(GraphSignal { values })
    }

    pub fn zeros(n: usize) -> Self {
        GraphSignal {
            values: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

impl std::ops::Index<usize> for GraphSignal {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Rosace parameters: `n_hubs` hubs on a central cycle, each carrying a fan
/// of `n_fan` nodes (the hub counts as the fan's first node).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RosaceSpec {
    pub n_hubs: usize,
    pub n_fan: usize,
}

impl RosaceSpec {
    pub fn new(n_hubs: usize, n_fan: usize) -> Result<Self> {
        let spec = RosaceSpec { n_hubs, n_fan };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_hubs < 3 {
            return Err(Error::InvalidArgument(format!(
                "rosace needs at least 3 hubs, got {}",
                self.n_hubs
            )));
        }
        if self.n_fan < 2 {
            return Err(Error::InvalidArgument(format!(
                "rosace needs fan length >= 2, got {}",
                self.n_fan
            )));
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n_hubs * self.n_fan
    }

    /// Nodes of fan `m` (1-based, `m = 1..=n_hubs`) in chain order; position
    /// 0 is the hub.
    pub fn fan_nodes(&self, m: usize) -> Vec<usize> {
        assert!(m >= 1 && m <= self.n_hubs, "fan index out of range");
        let mut nodes = Vec::with_capacity(self.n_fan);
        nodes.push(m - 1);
        let base = self.n_hubs + (m - 1) * (self.n_fan - 1);
        nodes.extend(base..base + self.n_fan - 1);
        nodes
    }
}

/// Grid parameters. `twist` is the wrap offset applied at BOTH periodic
/// boundaries: the bottom wrap re-enters at row 0 shifted by `twist` columns
/// and the right wrap re-enters at column 0 shifted by `twist` rows.
/// `twist = 0` is the plain torus. Equal odd twists >= 3 make even-sized
/// grids diagonalizable and invertible; `twist = 1` is rejected because the
/// corner node's two wrap edges would collide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    pub twist: usize,
}

/// Default twist: the smallest value for which the 20x20 grid needs no
/// perturbation.
pub const DEFAULT_GRID_TWIST: usize = 3;

impl GridSpec {
    pub fn new(rows: usize, cols: usize, twist: usize) -> Result<Self> {
        let spec = GridSpec { rows, cols, twist };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows < 2 || self.cols < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs rows >= 2 and cols >= 2, got {}x{}",
                self.rows, self.cols
            )));
        }
        if self.twist >= self.cols {
            return Err(Error::InvalidArgument(format!(
                "twist must satisfy 0 <= twist < cols, got {}",
                self.twist
            )));
        }
        // corner collision: both wrap edges of (rows-1, cols-1) hit (0, 0)
        if self.twist != 0
            && (self.cols - 1 + self.twist) % self.cols == 0
            && (self.rows - 1 + self.twist) % self.rows == 0
        {
            return Err(Error::InvalidArgument(format!(
                "twist {} makes the corner wrap edges coincide; use 0 or an odd twist >= 3",
                self.twist
            )));
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn node(&self, i: usize, j: usize) -> usize {
        i * self.cols + j
    }
}

/// Axis of variation for a planar wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Axis {
    /// Wave varies along columns (constant over each column).
    Horizontal,
    /// Wave varies along rows (constant over each row).
    Vertical,
}

/// Directed cycle `0 -> 1 -> ... -> n-1 -> 0` with unit weights.
pub fn gen_cycle(n: usize) -> Result<DiGraph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "cycle needs at least 2 nodes, got {n}"
        )));
    }
    let mut g = DiGraph::empty(n)?;
    for k in 0..n {
        g.add_edge(k, (k + 1) % n, 1.0)?;
    }
    Ok(g)
}

/// Rosace graph: hub cycle `h_0 -> h_1 -> ... -> h_{N_C-1} -> h_0` plus, per
/// fan `m`, the open chain `h_{m-1} -> f_{m,1} -> ... -> f_{m,N_F-1}`. The
/// chain ends stay open; the perturbation closes each fan into a cycle
/// through its hub.
pub fn gen_rosace(spec: &RosaceSpec) -> Result<DiGraph> {
    spec.validate()?;
    let mut g = DiGraph::empty(spec.node_count())?;
    for h in 0..spec.n_hubs {
        g.add_edge(h, (h + 1) % spec.n_hubs, 1.0)?;
    }
    for m in 1..=spec.n_hubs {
        let nodes = spec.fan_nodes(m);
        for pair in nodes.windows(2) {
            g.add_edge(pair[0], pair[1], 1.0)?;
        }
    }
    Ok(g)
}

/// Two-dimensional grid with rightward and downward edges and twisted
/// periodic boundaries (see [`GridSpec`]).
pub fn gen_grid(spec: &GridSpec) -> Result<DiGraph> {
    spec.validate()?;
    let (rows, cols, tw) = (spec.rows, spec.cols, spec.twist);
    let mut g = DiGraph::empty(spec.node_count())?;
    for i in 0..rows {
        for j in 0..cols {
            let right = if j + 1 < cols {
                spec.node(i, j + 1)
            } else {
                spec.node((i + tw) % rows, 0)
            };
            let down = if i + 1 < rows {
                spec.node(i + 1, j)
            } else {
                spec.node(0, (j + tw) % cols)
            };
            g.add_edge(spec.node(i, j), right, 1.0)?;
            g.add_edge(spec.node(i, j), down, 1.0)?;
        }
    }
    Ok(g)
}

/// Synthetic rosace signal: on fan `m` at chain position `k` (hub is `k = 0`),
/// `x_m[k] = (2m+1) sin( (m+1)/(2 N_F) * 2 pi k + (5 N_C + 4)/(20 N_C) * 2 pi m )`.
pub fn signal_rosace(spec: &RosaceSpec) -> Result<GraphSignal> {
    spec.validate()?;
    let nf = spec.n_fan as f64;
    let nc = spec.n_hubs as f64;
    let mut values = vec![0.0; spec.node_count()];
    for m in 1..=spec.n_hubs {
        let mf = m as f64;
        let amplitude = 2.0 * mf + 1.0;
        let omega = (mf + 1.0) / (2.0 * nf) * std::f64::consts::TAU;
        let offset = (5.0 * nc + 4.0) / (20.0 * nc) * std::f64::consts::TAU * mf;
        for (k, &node) in spec.fan_nodes(m).iter().enumerate() {
            values[node] = amplitude * (omega * k as f64 + offset).sin();
        }
    }
    GraphSignal::new(values)
}

/// Planar sine wave `x[(i,j)] = sin(2 pi c / period)` where `c` is the
/// coordinate along `direction`.
pub fn signal_planar_wave(spec: &GridSpec, direction: Axis, period: f64) -> Result<GraphSignal> {
    spec.validate()?;
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "period must be positive and finite, got {period}"
        )));
    }
    let mut values = vec![0.0; spec.node_count()];
    for i in 0..spec.rows {
        for j in 0..spec.cols {
            let c = match direction {
                Axis::Horizontal => j as f64,
                Axis::Vertical => i as f64,
            };
            values[spec.node(i, j)] = (std::f64::consts::TAU * c / period).sin();
        }
    }
    GraphSignal::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_structure() {
        let g = gen_cycle(3).unwrap();
        assert_eq!(g.edge_count(), 3);
        for (src, dst) in [(0, 1), (1, 2), (2, 0)] {
            assert_eq!(g.weight(src, dst), 1.0);
        }
        let g2 = gen_cycle(2).unwrap();
        assert_eq!(g2.adjacency()[[0, 1]], 1.0);
        assert_eq!(g2.adjacency()[[1, 0]], 1.0);
        assert_eq!(g2.adjacency()[[0, 0]], 0.0);
        assert!(gen_cycle(1).is_err());
    }

    #[test]
    fn rosace_counts_and_hub_subgraph() {
        let spec = RosaceSpec::new(3, 2).unwrap();
        let g = gen_rosace(&spec).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.edge_count(), 6);

        let spec = RosaceSpec::new(5, 4).unwrap();
        let g = gen_rosace(&spec).unwrap();
        assert_eq!(g.n(), 20);
        assert_eq!(g.edge_count(), 20);
        // induced subgraph on hubs is the hub cycle
        let c = gen_cycle(5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(g.weight(i, j), c.weight(i, j));
            }
        }
        // fan ends are open
        for m in 1..=5 {
            let nodes = spec.fan_nodes(m);
            assert_eq!(g.out_degree(*nodes.last().unwrap()), 0);
        }
    }

    #[test]
    fn grid_counts_and_twist_validation() {
        let spec = GridSpec::new(2, 2, 0).unwrap();
        let g = gen_grid(&spec).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 8);

        let spec = GridSpec::new(4, 5, 0).unwrap();
        assert_eq!(gen_grid(&spec).unwrap().edge_count(), 40);

        // corner collision
        assert!(GridSpec::new(4, 4, 1).is_err());
        assert!(GridSpec::new(20, 20, 3).is_ok());
        assert!(GridSpec::new(4, 4, 4).is_err()); // twist >= cols
    }

    #[test]
    fn rosace_signal_pinned_value() {
        // m=1, k=0, N_C=N_F=20: 3 sin(0.52 pi) ~= 2.9941
        let spec = RosaceSpec::new(20, 20).unwrap();
        let x = signal_rosace(&spec).unwrap();
        let hub_of_fan_1 = spec.fan_nodes(1)[0];
        assert!(
            (x[hub_of_fan_1] - 2.994_080_185_284_814).abs() < 1e-12,
            "{}",
            x[hub_of_fan_1]
        );
    }

    #[test]
    fn rosace_signal_amplitude_envelope() {
        let spec = RosaceSpec::new(20, 20).unwrap();
        let x = signal_rosace(&spec).unwrap();
        // fan 1 values all within the +-3 envelope, and the envelope is attained
        let nodes = spec.fan_nodes(1);
        let vals: Vec<f64> = nodes.iter().map(|&v| x[v]).collect();
        assert!(vals.iter().all(|v| v.abs() <= 3.0 + 1e-12));
        assert!(vals.iter().any(|v| v.abs() > 2.9));
    }

    #[test]
    fn planar_wave_full_period_per_row() {
        let spec = GridSpec::new(3, 8, 0).unwrap();
        let x = signal_planar_wave(&spec, Axis::Horizontal, 8.0).unwrap();
        for i in 0..3 {
            for j in 0..8 {
                let expect = (std::f64::consts::TAU * j as f64 / 8.0).sin();
                assert!((x[spec.node(i, j)] - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn add_edge_rejects_duplicates_and_zero_weight() {
        let mut g = gen_cycle(3).unwrap();
        assert!(g.add_edge(0, 1, 1.0).is_err());
        assert!(g.add_edge(0, 2, 0.0).is_err());
        assert!(g.add_edge(0, 2, 0.5).is_ok());
        assert_eq!(g.weight(0, 2), 0.5);
    }
}
