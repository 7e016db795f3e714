//! Star graphs, complete graphs and the family of star graphs with extra
//! bonds between leaves.
//!
//! Nodes are labelled `1..=n`; node 1 is always the star center. Edges are
//! stored as ordered pairs `(i, j)` with `i < j`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from an arbitrary edge list. Pairs may be given in
    /// either orientation; self-loops and repeated pairs are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        check_size(n)?;
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let pair = normalize(a, b);
            if a == b {
                return Err(Error::InvalidBond(a, b, "self-loop"));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidBond(a, b, "node label out of range"));
            }
            if !set.insert(pair) {
                return Err(Error::InvalidBond(a, b, "duplicate bond"));
            }
        }
        Ok(Graph { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&normalize(a, b))
    }

    /// Degree of node `j` (1-based).
    pub fn degree(&self, j: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == j || b == j)
            .count()
    }

    /// Degrees of all nodes, index 0 holding node 1.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a - 1] += 1;
            deg[b - 1] += 1;
        }
        deg
    }

    /// Leaf-leaf bonds, i.e. every edge that does not touch the center.
    pub fn extra_bonds(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .filter(|&(a, _)| a != 1)
            .collect()
    }

    pub fn connectivity_matrix(&self) -> ConnectivityMatrix {
        let n = self.n;
        let mut entries = vec![0i64; n * n];
        for &(a, b) in &self.edges {
            let (i, j) = (a - 1, b - 1);
            entries[i * n + j] = -1;
            entries[j * n + i] = -1;
            entries[i * n + i] += 1;
            entries[j * n + j] += 1;
        }
        ConnectivityMatrix { n, entries }
    }

    /// Serializes to the edge-list text format: a `n=<N>` header followed by
    /// one `i j` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }

    /// Parses the edge-list text format. Blank lines and `#` comments are
    /// ignored.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if n.is_none() {
                let value = line.strip_prefix("n=").ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: "expected header `n=<N>`".into(),
                })?;
                n = Some(value.trim().parse::<usize>().map_err(|e| Error::Parse {
                    line: line_no,
                    msg: format!("bad node count: {e}"),
                })?);
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut next = || -> Result<usize> {
                parts
                    .next()
                    .ok_or_else(|| Error::Parse {
                        line: line_no,
                        msg: "expected two node labels".into(),
                    })?
                    .parse::<usize>()
                    .map_err(|e| Error::Parse {
                        line: line_no,
                        msg: format!("bad node label: {e}"),
                    })
            };
            let a = next()?;
            let b = next()?;
            if parts.next().is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "trailing tokens after edge".into(),
                });
            }
            edges.push((a, b));
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing `n=<N>` header".into(),
        })?;
        Graph::from_edges(n, edges)
    }
}

fn normalize(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidSize { n })
    } else {
        Ok(())
    }
}

/// Star graph: node 1 bonded to every other node.
pub fn build_star(n: usize) -> Result<Graph> {
    check_size(n)?;
    Ok(Graph {
        n,
        edges: (2..=n).map(|j| (1, j)).collect(),
    })
}

pub fn build_complete(n: usize) -> Result<Graph> {
    check_size(n)?;
    let edges = (1..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .collect();
    Ok(Graph { n, edges })
}

/// Star graph on `n` nodes plus the given leaf-leaf bonds. Bonds touching
/// the center, self-pairs and repeated pairs are rejected.
pub fn star_plus_bonds(n: usize, chosen: &[(usize, usize)]) -> Result<Graph> {
    check_size(n)?;
    let mut g = build_star(n)?;
    for &(a, b) in chosen {
        if a == b {
            return Err(Error::InvalidBond(a, b, "self-loop"));
        }
        if a == 1 || b == 1 {
            return Err(Error::InvalidBond(a, b, "bond touches the star center"));
        }
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::InvalidBond(a, b, "node label out of range"));
        }
        if !g.edges.insert(normalize(a, b)) {
            return Err(Error::InvalidBond(a, b, "duplicate bond"));
        }
    }
    Ok(g)
}

/// Number of leaf-leaf bonds that turn the star into the complete graph,
/// `(n-1)(n-2)/2`.
pub fn b_max(n: usize) -> usize {
    if n < 2 {
        0
    } else {
        (n - 1) * (n - 2) / 2
    }
}

/// All leaf pairs `(i, j)`, `2 <= i < j <= n`, in lexicographic order. The
/// position of a pair in this list is its bit index in bond masks.
pub fn leaf_pairs(n: usize) -> Vec<(usize, usize)> {
    (2..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .collect()
}

/// A validated `(n, b)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BondBudget {
    n: usize,
    b: usize,
}

impl BondBudget {
    pub fn new(n: usize, b: usize) -> Result<Self> {
        check_size(n)?;
        let b_max = b_max(n);
        if b > b_max {
            return Err(Error::BondCountOutOfRange { n, b, b_max });
        }
        Ok(BondBudget { n, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn b_max(&self) -> usize {
        b_max(self.n)
    }
}

/// Integer graph Laplacian: degrees on the diagonal, `-1` per bond.
/// Stored row-major with 0-based indices (row 0 is node 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConnectivityMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl ConnectivityMatrix {
    /// Star on `n` nodes plus the leaf pairs selected by the set bits of
    /// `mask` (bit `k` selects `pairs[k]`). Used by the enumeration hot
    /// loops, which never materialize a [`Graph`].
    pub fn star_with_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> Self {
        let mut entries = vec![0i64; n * n];
        entries[0] = (n - 1) as i64;
        for j in 1..n {
            entries[j] = -1;
            entries[j * n] = -1;
            entries[j * n + j] = 1;
        }
        let mut bits = mask;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (a, b) = pairs[k];
            let (i, j) = (a - 1, b - 1);
            entries[i * n + j] = -1;
            entries[j * n + i] = -1;
            entries[i * n + i] += 1;
            entries[j * n + j] += 1;
        }
        ConnectivityMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> i64 {
        self.entries.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|&v| v as f64).collect()
    }

    /// Reconstructs the graph. Any negative off-diagonal entry counts as a
    /// bond.
    pub fn to_graph(&self) -> Graph {
        let n = self.n;
        let edges = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j) < 0)
            .map(|(i, j)| (i + 1, j + 1))
            .collect();
        Graph { n, edges }
    }
}

/// Converts a bond mask into the list of leaf pairs it selects.
pub fn mask_to_bonds(pairs: &[(usize, usize)], mask: u64) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut bits = mask;
    while bits != 0 {
        let k = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        out.push(pairs[k]);
    }
    out
}
