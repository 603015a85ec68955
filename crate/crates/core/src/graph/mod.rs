//! Exclusivity graphs: data model, file formats, generators and exact
//! (weighted) independence numbers.

mod generate;
mod parse;
mod stable;

pub use generate::{generate_mermin, generate_qite, generate_standard, StandardFamily};
pub use parse::{parse_graph, parse_weight, parse_weights, GraphFormat};
pub use stable::{independence_number, independence_number_exhaustive, StableSet};

use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact vertex weight.
pub type Weight = Rational64;

/// Undirected simple graph with optional positive vertex weights.
///
/// Vertices are `0..n`. Edges are stored once as `(i, j)` with `i < j`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<bool>>,
    weights: Option<Vec<Weight>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph, deduplicating repeated edges (in either orientation).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::MalformedGraph(format!("self-loop on vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::MalformedGraph(format!(
                    "edge ({a}, {b}) has an endpoint outside 0..{n}"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adjacency = vec![vec![false; n]; n];
        for &(a, b) in &set {
            adjacency[a][b] = true;
            adjacency[b][a] = true;
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
            adjacency,
            weights: None,
            labels: None,
        })
    }

    pub fn with_weights(mut self, weights: Vec<Weight>) -> Result<Self> {
        if weights.len() != self.n {
            return Err(Error::MalformedGraph(format!(
                "expected {} weights, got {}",
                self.n,
                weights.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::MalformedGraph(format!(
                "weight of vertex {i} is not positive ({})",
                weights[i]
            )));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::MalformedGraph(format!(
                "expected {} labels, got {}",
                self.n,
                labels.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Same graph without weights.
    pub fn unweighted(&self) -> Self {
        Self {
            weights: None,
            ..self.clone()
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn weights(&self) -> Option<&[Weight]> {
        self.weights.as_deref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Weight of vertex `v` (1 when the graph is unweighted).
    pub fn weight(&self, v: usize) -> Weight {
        self.weights.as_ref().map_or_else(Weight::one, |w| w[v])
    }

    pub fn weight_f64(&self, v: usize) -> f64 {
        self.weight(v).to_f64().unwrap_or(f64::NAN)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v]
            .iter()
            .enumerate()
            .filter_map(|(u, &e)| e.then_some(u))
    }

    /// True when no two members of `set` are adjacent.
    pub fn is_stable(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &a)| set[k + 1..].iter().all(|&b| !self.adjacency[a][b]))
    }

    pub fn weight_sum(&self, set: &[usize]) -> Weight {
        set.iter()
            .fold(Weight::zero(), |acc, &v| acc + self.weight(v))
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n
            || perm
                .iter()
                .any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
        let mut g = Self::new(self.n, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))?;
        if let Some(w) = &self.weights {
            let mut nw = vec![Weight::one(); self.n];
            for (v, &p) in perm.iter().enumerate() {
                nw[p] = w[v];
            }
            g = g.with_weights(nw)?;
        }
        Ok(g)
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(a, b)| (a + shift, b + shift)));
        let g = Self::new(self.n + other.n, edges).expect("union of valid graphs is valid");
        if self.is_weighted() || other.is_weighted() {
            let w = (0..self.n)
                .map(|v| self.weight(v))
                .chain((0..other.n).map(|v| other.weight(v)))
                .collect();
            g.with_weights(w).expect("weights stay positive")
        } else {
            g
        }
    }

    /// Copy with the edge `(a, b)` removed (no-op when absent).
    pub fn without_edge(&self, a: usize, b: usize) -> Self {
        let key = (a.min(b), a.max(b));
        let mut g = Self::new(self.n, self.edges.iter().copied().filter(|&e| e != key))
            .expect("subgraph of a valid graph is valid");
        g.weights = self.weights.clone();
        g.labels = self.labels.clone();
        g
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            weights: self
                .weights
                .as_ref()
                .map(|w| w.iter().map(WeightRepr::from_weight).collect()),
            labels: self.labels.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph serializes")
    }
}

/// JSON representation: `{"n": .., "edges": [[i, j], ..], "weights": [..]?, "labels": [..]?}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A weight as it appears in JSON: an integer, a decimal number, or a `"p/q"` string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightRepr {
    Number(serde_json::Number),
    Text(String),
}

impl WeightRepr {
    fn from_weight(w: &Weight) -> Self {
        if w.is_integer() {
            Self::Number((*w.numer()).into())
        } else {
            Self::Text(w.to_string())
        }
    }

    pub fn to_weight(&self) -> Result<Weight> {
        match self {
            Self::Number(n) => parse_weight(&n.to_string()),
            Self::Text(s) => parse_weight(s),
        }
    }
}
