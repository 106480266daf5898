//! Edge-list and signal CSV formats.
//!
//! Edge list: one `src,dst,weight` line per edge (0-based indices, real
//! weight), `#` starts a comment, an optional `src,dst,weight` header is
//! accepted. `save_edge_list` emits a `# nodes: N` directive so isolated
//! trailing nodes survive the round trip.
//!
//! Signal: `node,value` with every node present exactly once.

use std::io::{BufRead, BufReader, Read, Write};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, GraphSignal};

const NODES_DIRECTIVE: &str = "# nodes:";

pub fn load_edge_list<R: Read>(source: R) -> Result<DiGraph> {
    let reader = BufReader::new(source);
    let mut edges: Vec<(usize, usize, f64, usize)> = Vec::new();
    let mut declared_n: Option<usize> = None;
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix(NODES_DIRECTIVE) {
            declared_n = Some(rest.trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad node count directive {trimmed:?}"),
            })?);
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 3 comma-separated fields, got {}", fields.len()),
            });
        }
        if fields == ["src", "dst", "weight"] {
            continue; // header
        }
        let src: usize = fields[0].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad source index {:?}", fields[0]),
        })?;
        let dst: usize = fields[1].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad target index {:?}", fields[1]),
        })?;
        let weight: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("non-numeric weight {:?}", fields[2]),
        })?;
        if !weight.is_finite() || weight == 0.0 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("weight must be finite and nonzero, got {weight}"),
            });
        }
        edges.push((src, dst, weight, lineno));
    }
    let max_index = edges.iter().map(|e| e.0.max(e.1)).max();
    let n = match (declared_n, max_index) {
        (Some(n), Some(max)) if max >= n => {
            let (src, dst, _, line) = *edges.iter().find(|e| e.0.max(e.1) == max).unwrap();
            return Err(Error::Parse {
                line,
                message: format!("node index {} out of range for {n} nodes", src.max(dst)),
            });
        }
        (Some(n), _) => n,
        (None, Some(max)) => max + 1,
        (None, None) => {
            return Err(Error::Parse {
                line: 0,
                message: "empty edge list and no node count directive".into(),
            })
        }
    };
    let mut adjacency = Array2::zeros((n, n));
    for (src, dst, weight, line) in edges {
        if adjacency[[src, dst]] != 0.0 {
            return Err(Error::DuplicateEdge { line, src, dst });
        }
        adjacency[[src, dst]] = weight;
    }
    DiGraph::from_adjacency(adjacency)
}

pub fn save_edge_list<W: Write>(g: &DiGraph, mut sink: W) -> Result<()> {
    writeln!(sink, "{NODES_DIRECTIVE} {}", g.n())?;
    writeln!(sink, "src,dst,weight")?;
    for e in g.edges() {
        writeln!(sink, "{},{},{}", e.src, e.dst, e.weight)?;
    }
    Ok(())
}

pub fn load_signal<R: Read>(source: R) -> Result<GraphSignal> {
    let reader = BufReader::new(source);
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 2 comma-separated fields, got {}", fields.len()),
            });
        }
        if fields == ["node", "value"] {
            continue;
        }
        let node: usize = fields[0].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad node index {:?}", fields[0]),
        })?;
        let value: f64 = fields[1].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("non-numeric value {:?}", fields[1]),
        })?;
        rows.push((node, value));
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "empty signal file".into(),
        });
    }
    let n = rows.len();
    let mut values = vec![f64::NAN; n];
    let mut seen = vec![false; n];
    for (node, value) in rows {
        if node >= n {
            return Err(Error::Parse {
                line: 0,
                message: format!("node {node} out of range: {n} rows imply nodes 0..{}", n - 1),
            });
        }
        if seen[node] {
            return Err(Error::Parse {
                line: 0,
                message: format!("node {node} appears more than once"),
            });
        }
        seen[node] = true;
        values[node] = value;
    }
    GraphSignal::new(values)
}

pub fn save_signal<W: Write>(s: &GraphSignal, mut sink: W) -> Result<()> {
    writeln!(sink, "node,value")?;
    for (node, v) in s.values().iter().enumerate() {
        writeln!(sink, "{node},{v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_cycle;
    use proptest::prelude::*;

    #[test]
    fn parses_path_graph() {
        let g = load_edge_list("0,1,1.0\n1,2,1.0".as_bytes()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));
    }

    #[test]
    fn round_trip_cycle() {
        let g = gen_cycle(3).unwrap();
        let mut buf = Vec::new();
        save_edge_list(&g, &mut buf).unwrap();
        let g2 = load_edge_list(buf.as_slice()).unwrap();
        assert_eq!(g.adjacency(), g2.adjacency());
    }

    #[test]
    fn self_loop_accepted() {
        let g = load_edge_list("2,2,1.0".as_bytes()).unwrap();
        assert_eq!(g.n(), 3);
        assert!(g.has_self_loops());
    }

    #[test]
    fn duplicate_edge_rejected() {
        let err = load_edge_list("0,1,1.0\n0,1,2.0".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge { line: 2, src: 0, dst: 1 }));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = load_edge_list("0,1,1.0\n1,x,1.0".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = load_edge_list("# nodes: 2\n0,5,1.0".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn signal_round_trip_and_validation() {
        let s = GraphSignal::new(vec![1.5, -2.0, 0.0]).unwrap();
        let mut buf = Vec::new();
        save_signal(&s, &mut buf).unwrap();
        assert_eq!(load_signal(buf.as_slice()).unwrap(), s);
        assert!(load_signal("0,1.0\n0,2.0".as_bytes()).is_err());
        assert!(load_signal("0,1.0\n5,2.0".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn edge_list_round_trip_random(n in 1usize..12, seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut g = DiGraph::empty(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    if rng.random_bool(0.3) {
                        let w: f64 = rng.random_range(0.1..4.0);
                        g.add_edge(i, j, w).unwrap();
                    }
                }
            }
            let mut buf = Vec::new();
            save_edge_list(&g, &mut buf).unwrap();
            let g2 = load_edge_list(buf.as_slice()).unwrap();
            prop_assert_eq!(g.n(), g2.n());
            prop_assert_eq!(g.adjacency(), g2.adjacency());
        }
    }
}
