//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use dimwit::graph::{Graph, Weight};
use dimwit::numerics::SymMatrix;
use dimwit::sdp::{solve_sdp, SdpProblem, SdpStatus, Sense};
use num_traits::Zero;
use rand::Rng;

/// Maximum weight of a stable set by enumerating all `2^n` subsets.
pub fn brute_alpha(g: &Graph) -> Weight {
    let n = g.n();
    assert!(n <= 20, "brute force limited to n <= 20");
    let mut adj = vec![0u32; n];
    for &(a, b) in g.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let mut best = Weight::zero();
    for mask in 0u32..(1 << n) {
        let stable = (0..n).all(|v| mask >> v & 1 == 0 || adj[v] & mask == 0);
        if stable {
            let w = (0..n)
                .filter(|&v| mask >> v & 1 == 1)
                .fold(Weight::zero(), |s, v| s + g.weight(v));
            if w > best {
                best = w;
            }
        }
    }
    best
}

/// Theta through the other classical formulation:
/// `max ⟨√w √wᵀ, B⟩` over `B ⪰ 0`, `tr B = 1`, `B_ij = 0` on edges.
pub fn theta_alt(g: &Graph) -> f64 {
    let n = g.n();
    let s: Vec<f64> = (0..n).map(|v| g.weight_f64(v).sqrt()).collect();
    let c = SymMatrix::from_fn(n, |i, j| s[i] * s[j]);
    let mut p = SdpProblem::new(c, Sense::Maximize);
    p.push(SymMatrix::identity(n), 1.0);
    for &(i, j) in g.edges() {
        p.push_entry(i, j, 0.0);
    }
    let sol = solve_sdp(&p, 1e-9, 200).expect("well-formed problem");
    assert_eq!(sol.status, SdpStatus::Optimal);
    sol.primal_obj
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

pub fn path(n: usize) -> Graph {
    Graph::new(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::new(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)))).unwrap()
}

/// Counts exclusive pairs among the 16 Mermin events by direct enumeration.
pub fn mermin_exclusive_pairs() -> usize {
    let settings = ["ZXX", "XZX", "XXZ", "ZZZ"];
    let mut events: Vec<(&str, [i32; 3])> = Vec::new();
    for (k, s) in settings.iter().enumerate() {
        let want = if k == 3 { -1 } else { 1 };
        for a in [-1, 1] {
            for b in [-1, 1] {
                for c in [-1, 1] {
                    if a * b * c == want {
                        events.push((s, [a, b, c]));
                    }
                }
            }
        }
    }
    assert_eq!(events.len(), 16);
    let mut count = 0;
    let mut pairs = 0;
    for i in 0..16 {
        for j in i + 1..16 {
            pairs += 1;
            let (s, a) = events[i];
            let (t, b) = events[j];
            if (0..3).any(|p| s.as_bytes()[p] == t.as_bytes()[p] && a[p] != b[p]) {
                count += 1;
            }
        }
    }
    assert_eq!(pairs, 120);
    count
}
