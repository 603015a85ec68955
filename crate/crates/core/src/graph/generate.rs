use std::str::FromStr;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardFamily {
    Cycle,
    Complete,
    Empty,
}

impl FromStr for StandardFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(Self::Cycle),
            "complete" => Ok(Self::Complete),
            "empty" => Ok(Self::Empty),
            other => Err(Error::InvalidParameter(format!(
                "unknown graph family `{other}`"
            ))),
        }
    }
}

pub fn generate_standard(family: StandardFamily, n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "graph needs at least one vertex".into(),
        ));
    }
    match family {
        StandardFamily::Cycle => {
            if n < 3 {
                return Err(Error::InvalidParameter(format!(
                    "cycle needs n >= 3, got {n}"
                )));
            }
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        StandardFamily::Complete => {
            Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
        }
        StandardFamily::Empty => Graph::new(n, []),
    }
}

/// The k-Qite graph on `2k + 1` vertices.
///
/// Vertices `0..k` form a clique, spoke `i + k` hangs off clique vertex `i`,
/// and the hub `2k` is joined to every spoke.
pub fn generate_qite(k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "k-Qite needs k >= 2, got {k}"
        )));
    }
    let clique = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j)));
    let spokes = (0..k).map(|i| (i, i + k));
    let hub = (0..k).map(|i| (i + k, 2 * k));
    Graph::new(2 * k + 1, clique.chain(spokes).chain(hub))
}

const MERMIN_SETTINGS: [&str; 4] = ["ZXX", "XZX", "XXZ", "ZZZ"];

/// The 16-event exclusivity graph of the tripartite Mermin inequality.
///
/// One vertex per (setting, outcome) pair whose outcome product is `+1` for
/// ZXX, XZX, XXZ and `-1` for ZZZ. Two events are exclusive when some party
/// uses the same observable in both and reports different outcomes. Vertices
/// are ordered by setting index, then by outcome triple with `-1 < +1`.
pub fn generate_mermin() -> Graph {
    let events = mermin_events();
    let mut edges = Vec::new();
    for (i, (x, a)) in events.iter().enumerate() {
        for (j, (y, b)) in events.iter().enumerate().skip(i + 1) {
            let exclusive = (0..3).any(|p| x.as_bytes()[p] == y.as_bytes()[p] && a[p] != b[p]);
            if exclusive {
                edges.push((i, j));
            }
        }
    }
    let labels = events
        .iter()
        .map(|(x, a)| {
            let outs: String = a.iter().map(|&o| if o > 0 { '+' } else { '-' }).collect();
            format!("{x}:{outs}")
        })
        .collect();
    Graph::new(events.len(), edges)
        .and_then(|g| g.with_labels(labels))
        .expect("mermin graph is well formed")
}

fn mermin_events() -> Vec<(&'static str, [i8; 3])> {
    let mut events = Vec::with_capacity(16);
    for (s, setting) in MERMIN_SETTINGS.iter().enumerate() {
        let parity = if s == 3 { -1 } else { 1 };
        for bits in 0..8u8 {
            let a = [0, 1, 2].map(|p| if bits >> (2 - p) & 1 == 1 { 1i8 } else { -1 });
            if a.iter().map(|&o| o as i32).product::<i32>() == parity {
                events.push((*setting, a));
            }
        }
    }
    events
}
