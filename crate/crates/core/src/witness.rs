//! Closed-form representations, behaviour checks and dimension-witness reports.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{generate_mermin, generate_qite, independence_number, Graph, StableSet};
use crate::heuristic::{heuristic_theta_d, HeuristicConfig};
use crate::representation::{CVector, OrthonormalRepresentation, Realization};
use crate::theta::{barvinok_bound, lovasz_theta};

/// Report JSON schema version.
pub const REPORT_SCHEMA: u32 = 1;

/// Slack allowed on `p_i + p_j <= 1`.
const EDGE_AXIOM_TOL: f64 = 1e-9;

fn real_vector(entries: Vec<f64>) -> CVector {
    CVector::from_iterator(
        entries.len(),
        entries.into_iter().map(|x| Complex64::new(x, 0.0)),
    )
}

/// Entries `±s` over `positions`, first half `+`, second half `-`.
fn balanced(v: &mut [f64], positions: &[usize], s: f64) {
    let half = positions.len() / 2;
    for (k, &p) in positions.iter().enumerate() {
        v[p] = if k < half { s } else { -s };
    }
}

/// A `k`-dimensional orthonormal representation of the k-Qite graph.
///
/// Clique vertex `i` is `e_i`. For odd `k` spoke `k + i` is zero at `i` and
/// `±1/√(k−1)` elsewhere, and the hub is the normalised all-ones vector. For
/// even `k` the hub is `(0, 1, .., 1)/√(k−1)`, spoke `k` is
/// `(0, 1, .., 1, 2−k)/√((k−2)(k−1))` and the other spokes carry `+1/√(k−1)`
/// in coordinate 0.
pub fn qite_or(k: usize) -> Result<OrthonormalRepresentation> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "closed-form k-Qite representation needs k >= 3, got {k}"
        )));
    }
    let kf = k as f64;
    let s = 1.0 / (kf - 1.0).sqrt();
    let mut vectors: Vec<CVector> = (0..k)
        .map(|i| {
            let mut v = vec![0.0; k];
            v[i] = 1.0;
            real_vector(v)
        })
        .collect();

    if k % 2 == 1 {
        for i in 0..k {
            let mut v = vec![0.0; k];
            let rest: Vec<usize> = (0..k).filter(|&p| p != i).collect();
            balanced(&mut v, &rest, s);
            vectors.push(real_vector(v));
        }
        vectors.push(real_vector(vec![1.0 / kf.sqrt(); k]));
    } else {
        let mut first = vec![1.0; k];
        first[0] = 0.0;
        first[k - 1] = 2.0 - kf;
        let norm = ((kf - 2.0) * (kf - 1.0)).sqrt();
        vectors.push(real_vector(first.iter().map(|x| x / norm).collect()));
        for i in 1..k {
            let mut v = vec![0.0; k];
            v[0] = s;
            let rest: Vec<usize> = (1..k).filter(|&p| p != i).collect();
            balanced(&mut v, &rest, s);
            vectors.push(real_vector(v));
        }
        let mut hub = vec![s; k];
        hub[0] = 0.0;
        vectors.push(real_vector(hub));
    }
    Ok(OrthonormalRepresentation { d: k, vectors })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormViolation {
    pub vertex: usize,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeViolation {
    pub edge: (usize, usize),
    /// `|⟨v_i, v_j⟩|`.
    pub overlap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrVerification {
    pub passed: bool,
    pub norm_violations: Vec<NormViolation>,
    pub edge_violations: Vec<EdgeViolation>,
}

/// Checks unit norms and edge orthogonality of `or` on `g` to within `tol`.
pub fn verify_or(g: &Graph, or: &OrthonormalRepresentation, tol: f64) -> Result<OrVerification> {
    if or.vectors.len() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "{} vectors for {} vertices",
            or.vectors.len(),
            g.n()
        )));
    }
    if let Some(i) = or.vectors.iter().position(|v| v.len() != or.d) {
        return Err(Error::InvalidParameter(format!(
            "vector {i} has dimension {}, expected {}",
            or.vectors[i].len(),
            or.d
        )));
    }
    let norm_violations: Vec<_> = or
        .vectors
        .iter()
        .enumerate()
        .map(|(vertex, v)| NormViolation {
            vertex,
            norm: v.norm(),
        })
        .filter(|nv| nv.norm.is_nan() || (nv.norm - 1.0).abs() > tol)
        .collect();
    let edge_violations: Vec<_> = g
        .edges()
        .iter()
        .map(|&(i, j)| EdgeViolation {
            edge: (i, j),
            overlap: or.vectors[i].dotc(&or.vectors[j]).norm(),
        })
        .filter(|ev| ev.overlap.is_nan() || ev.overlap > tol)
        .collect();
    Ok(OrVerification {
        passed: norm_violations.is_empty() && edge_violations.is_empty(),
        norm_violations,
        edge_violations,
    })
}

/// Event probabilities `p_i = |⟨state, v_i⟩|²` of a realization on `g`.
pub fn behaviour_from_realization(g: &Graph, r: &Realization) -> Result<Vec<f64>> {
    if r.vectors.len() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "realization has {} events for {} vertices",
            r.vectors.len(),
            g.n()
        )));
    }
    let p = r.probabilities.clone();
    for &(i, j) in g.edges() {
        if p[i] + p[j] > 1.0 + EDGE_AXIOM_TOL {
            return Err(Error::InconsistentRealization(format!(
                "p[{i}] + p[{j}] = {} exceeds 1 on an edge",
                p[i] + p[j]
            )));
        }
    }
    Ok(p)
}

/// The three-dimensional umbrella realization of `C5` with `p_i = 1/√5`.
///
/// The handle is `e_3`; vertex `i` sits at azimuth `4πi/5` with
/// `cos² φ = 1/√5`.
pub fn c5_umbrella() -> Realization {
    let cos2 = 1.0 / 5f64.sqrt();
    let (c, s) = (cos2.sqrt(), (1.0 - cos2).sqrt());
    let vectors = (0..5)
        .map(|i| {
            let t = 4.0 * PI * i as f64 / 5.0;
            Some(real_vector(vec![s * t.cos(), s * t.sin(), c]))
        })
        .collect();
    Realization::new(real_vector(vec![0.0, 0.0, 1.0]), vectors)
        .expect("umbrella vectors are 3-dimensional")
}

/// Rounds to `digits` significant digits.
pub fn round_significant(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(digits - 1 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    pub weighted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalRankFact {
    pub value: usize,
    pub source: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProvenBound {
    pub value: f64,
    /// Exact form of the bound when it has one.
    pub exact: String,
    pub source: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionEntry {
    pub d: usize,
    pub heuristic_label: &'static str,
    pub heuristic_lower_bound: Option<f64>,
    pub converged: bool,
    pub achieved_rank: Option<usize>,
    pub failed_restarts: usize,
    pub heuristic_error: Option<String>,
    pub proven_upper_bound: Option<ProvenBound>,
    pub caveats: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessStatement {
    pub dimension_cap: usize,
    pub bound: f64,
    pub source: String,
    pub statement: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct HeuristicSettings {
    pub iters: usize,
    pub restarts: usize,
    pub seed: u64,
    pub stop_tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub schema: u32,
    pub graph: GraphSummary,
    pub alpha: StableSet,
    pub theta: f64,
    pub barvinok_bound: usize,
    pub orthogonal_rank: Option<OrthogonalRankFact>,
    pub annotations: Vec<String>,
    pub heuristic: HeuristicSettings,
    pub dimensions: Vec<DimensionEntry>,
    pub witnesses: Vec<WitnessStatement>,
}

/// `k` when `g` is the k-Qite graph in the generator's labelling.
pub fn detect_qite(g: &Graph) -> Option<usize> {
    if g.n() < 5 || g.n().is_multiple_of(2) {
        return None;
    }
    let k = (g.n() - 1) / 2;
    let q = generate_qite(k).ok()?;
    (q.edges() == g.edges()).then_some(k)
}

fn has_unit_weights(g: &Graph) -> bool {
    g.weights().is_none_or(|w| w.iter().all(|x| x.is_one()))
}

/// Assembles a dimension-witness report for `g` over the caps in `dims`.
///
/// Heuristic values are lower bounds only. Witness statements are emitted
/// solely from proven upper bounds: `α` for `d <= 2`, `k` for `d <= k` on
/// the unweighted k-Qite, and `ϑ` once `d` reaches the Barvinok bound.
pub fn witness_report(g: &Graph, dims: &[usize], cfg: &HeuristicConfig) -> Result<WitnessReport> {
    if dims.is_empty() {
        return Err(Error::InvalidParameter("no dimensions requested".into()));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidParameter(
            "dimensions must be at least 1".into(),
        ));
    }
    let alpha = independence_number(g);
    let theta = lovasz_theta(g)?.value;
    if alpha.value_f64() > theta + 1e-6 {
        return Err(Error::Numeric(format!(
            "alpha {} exceeds theta {theta}",
            alpha.value
        )));
    }
    let barvinok = barvinok_bound(g);
    let qite = detect_qite(g).filter(|_| has_unit_weights(g));

    let orthogonal_rank = match detect_qite(g) {
        Some(k) if k >= 3 => {
            let or = qite_or(k)?;
            verify_or(g, &or, 1e-10)?.passed.then(|| OrthogonalRankFact {
                value: k,
                source: format!("closed-form {k}-dimensional representation verified; {k}-clique forces at least {k}"),
            })
        }
        _ => None,
    };
    let mut annotations = Vec::new();
    if g.n() == 16 && g.edges() == generate_mermin().edges() {
        annotations.push(
            "claimed orthogonal rank 4; attaining it with three parties needs three qubits (d = 8); not verified here"
                .to_string(),
        );
    }

    let proven = |d: usize| -> Option<ProvenBound> {
        let mut options = Vec::new();
        if d <= 2 {
            options.push(ProvenBound {
                value: alpha.value_f64(),
                exact: alpha.value.to_string(),
                source: "rank-2 theta equals the independence number".into(),
            });
        }
        if let Some(k) = qite.filter(|&k| d <= k) {
            options.push(ProvenBound {
                value: k as f64,
                exact: k.to_string(),
                source: format!("rank-{k} theta of the {k}-Qite graph is at most {k}"),
            });
        }
        if d >= barvinok {
            options.push(ProvenBound {
                value: theta,
                exact: format!("{}", round_significant(theta, 6)),
                source: "dimension at or above the Barvinok rank bound".into(),
            });
        }
        options
            .into_iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
    };

    let order = g.n() + 1;
    let dimensions: Vec<DimensionEntry> = dims
        .par_iter()
        .map(|&d| {
            let mut c = cfg.clone();
            c.d = d;
            let mut caveats = vec!["heuristic_value_is_lower_bound".to_string()];
            if d > order {
                caveats.push("dimension_clamped_to_matrix_order".into());
            }
            let mut entry = DimensionEntry {
                d,
                heuristic_label: "lower bound (heuristic)",
                heuristic_lower_bound: None,
                converged: false,
                achieved_rank: None,
                failed_restarts: 0,
                heuristic_error: None,
                proven_upper_bound: proven(d),
                caveats,
            };
            match heuristic_theta_d(g, &c) {
                Ok(r) => {
                    if !r.converged {
                        entry.caveats.push("not_converged".into());
                    }
                    if r.failed_restarts > 0 {
                        entry.caveats.push("some_restarts_failed".into());
                    }
                    entry.heuristic_lower_bound = r.converged.then_some(r.bound);
                    entry.converged = r.converged;
                    entry.achieved_rank = Some(r.achieved_rank);
                    entry.failed_restarts = r.failed_restarts;
                }
                Err(e) => {
                    entry.caveats.push("heuristic_failed".into());
                    entry.heuristic_error = Some(e.to_string());
                }
            }
            entry
        })
        .collect();

    let witnesses = dimensions
        .iter()
        .filter_map(|e| {
            let b = e.proven_upper_bound.as_ref()?;
            (theta > b.value + 1e-6).then(|| WitnessStatement {
                dimension_cap: e.d,
                bound: b.value,
                source: b.source.clone(),
                statement: format!(
                    "observed Σ p_i > {} at dimension cap {} ⇒ quantum dimension ≥ {}",
                    b.exact,
                    e.d,
                    e.d + 1
                ),
            })
        })
        .collect();

    Ok(WitnessReport {
        schema: REPORT_SCHEMA,
        graph: GraphSummary {
            n: g.n(),
            edges: g.edge_count(),
            weighted: g.is_weighted(),
        },
        alpha,
        theta: round_significant(theta, 6),
        barvinok_bound: barvinok,
        orthogonal_rank,
        annotations,
        heuristic: HeuristicSettings {
            iters: cfg.iters,
            restarts: cfg.restarts,
            seed: cfg.seed,
            stop_tol: cfg.stop_tol,
        },
        dimensions,
        witnesses,
    })
}

impl WitnessReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Plain-text rendering for terminals.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let g = &self.graph;
        out.push_str(&format!(
            "graph       n = {}, |E| = {}{}\n",
            g.n,
            g.edges,
            if g.weighted { ", weighted" } else { "" }
        ));
        out.push_str(&format!(
            "alpha       {}  {:?}\n",
            self.alpha.value, self.alpha.members
        ));
        out.push_str(&format!("theta       {}\n", self.theta));
        out.push_str(&format!("barvinok    {}\n", self.barvinok_bound));
        if let Some(r) = &self.orthogonal_rank {
            out.push_str(&format!("R_o         {}  ({})\n", r.value, r.source));
        }
        for a in &self.annotations {
            out.push_str(&format!("note        {a}\n"));
        }
        out.push_str("\n   d  heuristic (lower bound)  proven upper bound  caveats\n");
        for e in &self.dimensions {
            let h = match (e.heuristic_lower_bound, &e.heuristic_error) {
                (Some(v), _) => format!("{v:.6}"),
                (None, Some(_)) => "failed".into(),
                (None, None) => "n/c".into(),
            };
            let p = e
                .proven_upper_bound
                .as_ref()
                .map_or("-".to_string(), |b| b.exact.clone());
            let caveats: Vec<&str> = e
                .caveats
                .iter()
                .map(String::as_str)
                .filter(|c| *c != "heuristic_value_is_lower_bound")
                .collect();
            let row = format!("{:>4}  {:>22}  {:>18}  {}", e.d, h, p, caveats.join(","));
            out.push_str(row.trim_end());
            out.push('\n');
        }
        if !self.witnesses.is_empty() {
            out.push_str("\nwitnesses\n");
            for w in &self.witnesses {
                out.push_str(&format!("  {}  [{}]\n", w.statement, w.source));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_standard, StandardFamily};

    #[test]
    fn three_qite_vectors() {
        let or = qite_or(3).unwrap();
        let spoke0: Vec<f64> = or.vectors[3].iter().map(|z| z.re * 2f64.sqrt()).collect();
        for (a, b) in spoke0.iter().zip([0.0, 1.0, -1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let g = generate_qite(3).unwrap();
        assert!(verify_or(&g, &or, 1e-12).unwrap().passed);
    }

    #[test]
    fn four_qite_special_vertex() {
        let or = qite_or(4).unwrap();
        let v: Vec<f64> = or.vectors[4].iter().map(|z| z.re * 6f64.sqrt()).collect();
        for (a, b) in v.iter().zip([0.0, 1.0, 1.0, -2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn qite_or_rejects_small_k() {
        assert!(matches!(qite_or(2), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn perturbed_vector_fails() {
        let g = generate_qite(5).unwrap();
        let mut or = qite_or(5).unwrap();
        assert!(verify_or(&g, &or, 1e-10).unwrap().passed);
        // spoke 5 is orthogonal to e_0; nudge its coordinate 0
        or.vectors[5][0] += Complex64::new(0.01, 0.0);
        let rep = verify_or(&g, &or, 1e-10).unwrap();
        assert!(!rep.passed);
        assert!(rep.edge_violations.iter().any(|e| e.edge == (0, 5)));
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let g = generate_standard(StandardFamily::Empty, 2).unwrap();
        let or = OrthonormalRepresentation {
            d: 2,
            vectors: vec![real_vector(vec![1.0, 0.0]), real_vector(vec![1.0])],
        };
        assert!(matches!(
            verify_or(&g, &or, 1e-9),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn umbrella_behaviour() {
        let c5 = generate_standard(StandardFamily::Cycle, 5).unwrap();
        let p = behaviour_from_realization(&c5, &c5_umbrella()).unwrap();
        for x in p {
            assert!((x - 1.0 / 5f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn broken_orthogonality_detected() {
        let k2 = generate_standard(StandardFamily::Complete, 2).unwrap();
        let e = real_vector(vec![1.0, 0.0]);
        let r = Realization::new(e.clone(), vec![Some(e.clone()), Some(e)]).unwrap();
        assert!(matches!(
            behaviour_from_realization(&k2, &r),
            Err(Error::InconsistentRealization(_))
        ));
    }

    #[test]
    fn significant_digits() {
        assert_eq!(round_significant(2.23606797, 6), 2.23607);
        assert_eq!(round_significant(3.0641777, 6), 3.06418);
        assert_eq!(round_significant(0.0, 6), 0.0);
    }

    #[test]
    fn qite_detection() {
        assert_eq!(detect_qite(&generate_qite(4).unwrap()), Some(4));
        assert_eq!(
            detect_qite(&generate_standard(StandardFamily::Cycle, 5).unwrap()),
            None
        );
    }

    #[test]
    fn complete_graph_has_no_witness() {
        let k4 = generate_standard(StandardFamily::Complete, 4).unwrap();
        let mut cfg = HeuristicConfig::new(2);
        cfg.restarts = 2;
        cfg.iters = 5;
        let rep = witness_report(&k4, &[2], &cfg).unwrap();
        assert!(rep.witnesses.is_empty());
        assert_eq!(
            rep.dimensions[0].proven_upper_bound.as_ref().unwrap().exact,
            "1"
        );
    }
}
