use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{Graph, Weight};
use crate::error::{Error, Result};

/// A set of pairwise non-adjacent vertices together with its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableSet {
    pub members: Vec<usize>,
    pub value: Weight,
}

impl StableSet {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

impl Serialize for StableSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("StableSet", 2)?;
        st.serialize_field("members", &self.members)?;
        st.serialize_field("value", &self.value.to_string())?;
        st.end()
    }
}

/// Exact (weighted) independence number by branch and bound.
///
/// The bound at each node is the weight of a greedy clique cover of the
/// remaining candidates: a stable set meets each clique at most once.
pub fn independence_number(g: &Graph) -> StableSet {
    let n = g.n();
    if n == 0 {
        return StableSet {
            members: Vec::new(),
            value: Weight::zero(),
        };
    }
    let (weights, scale) = integer_weights(g);
    let adj: Vec<BitSet> = (0..n)
        .map(|v| BitSet::from_iter(n, g.neighbors(v)))
        .collect();

    // Heavier, lower-degree vertices first gives a good initial incumbent.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        weights[b]
            .cmp(&weights[a])
            .then(adj[a].count().cmp(&adj[b].count()))
            .then(a.cmp(&b))
    });

    let mut search = Search {
        adj: &adj,
        weights: &weights,
        order: &order,
        best_value: 0,
        best: Vec::new(),
        current: Vec::new(),
    };
    search.greedy_incumbent();
    let all = BitSet::full(n);
    search.branch(all, 0);

    let mut members = search.best;
    members.sort_unstable();
    let value = Weight::new(
        i64::try_from(search.best_value).expect("weight sum fits in i64"),
        scale,
    );
    StableSet { members, value }
}

/// Exhaustive enumeration over all `2^n` vertex subsets; only for `n <= 24`.
pub fn independence_number_exhaustive(g: &Graph) -> Result<StableSet> {
    let n = g.n();
    if n > 24 {
        return Err(Error::InvalidParameter(format!(
            "exhaustive search limited to 24 vertices, got {n}"
        )));
    }
    let (weights, scale) = integer_weights(g);
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | 1 << u))
        .collect();
    // value[mask] is -1 when mask is not stable.
    let mut value = vec![0i128; 1 << n];
    let (mut best, mut best_mask) = (0i128, 0u32);
    for mask in 1u32..(1 << n) {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        value[mask as usize] = if value[rest as usize] < 0 || nbr[v] & rest != 0 {
            -1
        } else {
            value[rest as usize] + weights[v]
        };
        if value[mask as usize] > best {
            best = value[mask as usize];
            best_mask = mask;
        }
    }
    let members = (0..n).filter(|&v| best_mask >> v & 1 == 1).collect();
    Ok(StableSet {
        members,
        value: Weight::new(i64::try_from(best).expect("weight sum fits in i64"), scale),
    })
}

/// Scales the weights to integers by the lcm of their denominators.
fn integer_weights(g: &Graph) -> (Vec<i128>, i64) {
    let scale = (0..g.n()).fold(1i64, |l, v| l.lcm(g.weight(v).denom()));
    let weights = (0..g.n())
        .map(|v| {
            let w = g.weight(v);
            *w.numer() as i128 * (scale / *w.denom()) as i128
        })
        .collect();
    (weights, scale)
}

struct Search<'a> {
    adj: &'a [BitSet],
    weights: &'a [i128],
    order: &'a [usize],
    best_value: i128,
    best: Vec<usize>,
    current: Vec<usize>,
}

impl Search<'_> {
    fn greedy_incumbent(&mut self) {
        let mut free = BitSet::full(self.adj.len());
        let mut value = 0;
        let mut set = Vec::new();
        for &v in self.order {
            if free.contains(v) {
                set.push(v);
                value += self.weights[v];
                free.remove(v);
                free.difference_with(&self.adj[v]);
            }
        }
        self.best_value = value;
        self.best = set;
    }

    /// Weight of a greedy clique cover of `cand`, visiting vertices in `order`.
    fn clique_cover_bound(&self, cand: &BitSet) -> i128 {
        // Each clique: (members' common neighbourhood, max weight).
        let mut cliques: Vec<(BitSet, i128)> = Vec::new();
        for &v in self.order {
            if !cand.contains(v) {
                continue;
            }
            match cliques.iter_mut().find(|(common, _)| common.contains(v)) {
                Some((common, w)) => {
                    common.intersect_with(&self.adj[v]);
                    *w = (*w).max(self.weights[v]);
                }
                None => cliques.push((self.adj[v].clone(), self.weights[v])),
            }
        }
        cliques.iter().map(|(_, w)| w).sum()
    }

    fn branch(&mut self, mut cand: BitSet, value: i128) {
        if value > self.best_value {
            self.best_value = value;
            self.best = self.current.clone();
        }
        loop {
            if cand.is_empty() || value + self.clique_cover_bound(&cand) <= self.best_value {
                return;
            }
            let v = *self
                .order
                .iter()
                .find(|&&v| cand.contains(v))
                .expect("candidate set is non-empty");
            cand.remove(v);
            let mut with = cand.clone();
            with.difference_with(&self.adj[v]);
            self.current.push(v);
            self.branch(with, value + self.weights[v]);
            self.current.pop();
            // continue with v excluded
        }
    }
}

#[derive(Debug, Clone)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn empty(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    fn from_iter(n: usize, it: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    fn intersect_with(&mut self, other: &Self) {
        self.words
            .iter_mut()
            .zip(&other.words)
            .for_each(|(a, b)| *a &= b);
    }

    fn difference_with(&mut self, other: &Self) {
        self.words
            .iter_mut()
            .zip(&other.words)
            .for_each(|(a, b)| *a &= !b);
    }
}
