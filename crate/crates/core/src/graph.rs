//! Weighted undirected graphs, their Laplacians, and the fixed constructors
//! (hypercube, pyramid cube). Edge-list text I/O lives here as well.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::eigen::Matrix;
use crate::output::fmt17;
use crate::{Error, Result};

/// Largest hypercube dimension accepted in explicit mode.
pub const MAX_HYPERCUBE_DIM: u32 = 20;

/// Vertex order of [`build_pyramid_cube`].
pub mod pyramid {
    pub const APEX_TOP: usize = 0;
    pub const TOP: [usize; 4] = [1, 2, 3, 4];
    pub const BOTTOM: [usize; 4] = [5, 6, 7, 8];
    pub const APEX_BOTTOM: usize = 9;
}

/// Symmetric positive edge weights on the vertex set `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    adjacency: Vec<Vec<(usize, f64)>>,
    labels: Option<Vec<String>>,
    provenance: String,
}

impl WeightedGraph {
    pub fn new(n: usize, provenance: impl Into<String>) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            labels: None,
            provenance: provenance.into(),
        }
    }

    /// Builds a graph from an undirected edge list. Each edge must appear once.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let mut g = Self::new(n, provenance);
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::Validation(format!("edge ({u},{v}) outside 0..{n}")));
        }
        if u == v {
            return Err(Error::Validation(format!("self-loop at {u}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::Validation(format!("edge ({u},{v}) has weight {w}")));
        }
        if self.weight(u, v).is_some() {
            return Err(Error::Validation(format!("duplicate edge ({u},{v})")));
        }
        self.adjacency[u].push((v, w));
        self.adjacency[v].push((u, w));
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::Validation(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adjacency[u]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adjacency[u].iter().find(|&&(x, _)| x == v).map(|&(_, w)| w)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    /// Total jump rate out of `u`.
    pub fn weighted_degree(&self, u: usize) -> f64 {
        self.adjacency[u].iter().map(|&(_, w)| w).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Undirected edges with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out: Vec<_> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&(v, _)| u < v).map(move |&(v, w)| (u, v, w)))
            .collect();
        out.sort_by_key(|&(u, v, _)| (u, v));
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// Whether every vertex has the same weighted degree, to within `tol`.
    pub fn is_weight_regular(&self, tol: f64) -> bool {
        let Some(first) = (0..self.n()).map(|u| self.weighted_degree(u)).next() else {
            return true;
        };
        (0..self.n()).all(|u| (self.weighted_degree(u) - first).abs() <= tol)
    }

    /// Dense Laplacian, `L[u][v] = -w(u,v)`, `L[u][u] = sum_v w(u,v)`.
    pub fn laplacian(&self) -> Matrix {
        let n = self.n();
        let mut l = Matrix::zeros(n);
        for u in 0..n {
            let mut diag = 0.0;
            for &(v, w) in &self.adjacency[u] {
                l[(u, v)] = -w;
                diag += w;
            }
            l[(u, u)] = diag;
        }
        l
    }

    /// Unweighted breadth-first distances from `src`.
    pub fn hop_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &(v, _) in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Writes the `u v w` edge-list format with a `#` header carrying `n` and
    /// the construction provenance.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# n={}", self.n())?;
        writeln!(out, "# provenance: {}", self.provenance)?;
        for (u, v, w) in self.edges() {
            writeln!(out, "{u} {v} {}", fmt17(w))?;
        }
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Self> {
        let mut n = None;
        let mut provenance = String::from("edge list");
        let mut edges = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                let comment = comment.trim();
                if let Some(v) = comment.strip_prefix("n=") {
                    n = Some(v.trim().parse::<usize>().map_err(|e| Error::Parse {
                        line: lineno,
                        msg: format!("bad vertex count: {e}"),
                    })?);
                } else if let Some(p) = comment.strip_prefix("provenance:") {
                    provenance = p.trim().to_string();
                }
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected `u v w`, got {} fields", fields.len()),
                });
            }
            let parse_err = |what: &str| Error::Parse {
                line: lineno,
                msg: format!("bad {what}"),
            };
            let u: usize = fields[0].parse().map_err(|_| parse_err("vertex"))?;
            let v: usize = fields[1].parse().map_err(|_| parse_err("vertex"))?;
            let w: f64 = fields[2].parse().map_err(|_| parse_err("weight"))?;
            edges.push((u, v, w));
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing `# n=` header".into(),
        })?;
        Self::from_edges(n, edges, provenance)
    }
}

/// The `d`-dimensional hypercube with edge weight `1/d`. Vertex `x` is the
/// integer value of its bit string.
pub fn build_hypercube(d: u32) -> Result<WeightedGraph> {
    if !(1..=MAX_HYPERCUBE_DIM).contains(&d) {
        return Err(Error::Size(format!(
            "hypercube dimension {d} outside 1..={MAX_HYPERCUBE_DIM}"
        )));
    }
    let n = 1usize << d;
    let w = 1.0 / d as f64;
    let mut g = WeightedGraph::new(n, format!("hypercube d={d}"));
    for x in 0..n {
        for bit in 0..d {
            let y = x ^ (1 << bit);
            if x < y {
                g.add_edge(x, y, w)?;
            }
        }
    }
    Ok(g)
}

/// A cube with a square pyramid glued onto its top and bottom faces.
///
/// Ten vertices, ordered apex_top, t1..t4, b1..b4, apex_bottom; every vertex
/// has degree four and every edge weight `1/4`.
pub fn build_pyramid_cube() -> WeightedGraph {
    use pyramid::*;
    let w = 0.25;
    let mut edges = Vec::with_capacity(20);
    for i in 0..4 {
        let next = (i + 1) % 4;
        edges.push((APEX_TOP, TOP[i], w));
        edges.push((TOP[i], TOP[next], w));
        edges.push((TOP[i], BOTTOM[i], w));
        edges.push((BOTTOM[i], BOTTOM[next], w));
        edges.push((APEX_BOTTOM, BOTTOM[i], w));
    }
    let labels = ["apex_top", "t1", "t2", "t3", "t4", "b1", "b2", "b3", "b4", "apex_bottom"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    WeightedGraph::from_edges(10, edges, "pyramid cube")
        .and_then(|g| g.with_labels(labels))
        .expect("pyramid cube edges are valid")
}

/// Cycle on `n` vertices with unit weights.
pub fn build_cycle(n: usize) -> Result<WeightedGraph> {
    if n < 3 {
        return Err(Error::Size(format!("cycle needs at least 3 vertices, got {n}")));
    }
    WeightedGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)), format!("cycle n={n}"))
}

/// Complete graph on `n` vertices with weight `1/(n-1)`.
pub fn build_complete(n: usize) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(Error::Size(format!("complete graph needs at least 2 vertices, got {n}")));
    }
    let w = 1.0 / (n - 1) as f64;
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, w)));
    WeightedGraph::from_edges(n, edges, format!("complete n={n}"))
}
