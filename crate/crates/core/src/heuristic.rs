//! Lower bounds on the rank-restricted theta `ϑ^d(G)` by alternating two SDPs.
//!
//! Each round first solves the theta SDP with the extra linear term
//! `⟨W, X⟩`, which pushes mass away from the directions selected by `W`,
//! then chooses the `W` in `{0 ⪯ W ⪯ I, tr W = N − d}` minimising `⟨X, W⟩`.
//! A round that ends with `⟨X, W⟩ ≈ 0` certifies `rank X ≤ d`, since `W`
//! has rank at least `N − d`. Restarts draw fresh random `W`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numerics::{
    complexify, gram_decompose, lambda_max_of_sum, numerical_rank, sym_eig, SymMatrix,
    DEFAULT_RANK_TOL,
};
use crate::representation::{CVector, Realization, VectorFamily};
use crate::sdp::{solve_sdp, SdpProblem, SdpStatus, Sense, DEFAULT_MAX_ITER};
use crate::theta::{push_theta_constraints, theta_objective, theta_objective_value};

type CMatrix = DMatrix<Complex64>;

/// Default accuracy for the inner SDPs.
pub const HEURISTIC_SDP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicConfig {
    /// Target dimension.
    pub d: usize,
    /// Cap on alternation rounds per restart.
    pub iters: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Threshold on `⟨X, W⟩` that counts as converged.
    pub stop_tol: f64,
    pub rank_tol: f64,
    pub sdp_tol: f64,
    pub sdp_max_iter: usize,
    /// Solve the second SDP with the generic solver instead of the eigen
    /// decomposition (for cross-validation).
    pub box_via_solver: bool,
    /// Stop a restart at the first round with `⟨X, W⟩ <= stop_tol`
    /// instead of running all `iters` rounds.
    pub early_stop: bool,
}

impl HeuristicConfig {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            iters: 50,
            restarts: 20,
            seed: 0,
            stop_tol: 1e-6,
            rank_tol: DEFAULT_RANK_TOL,
            sdp_tol: HEURISTIC_SDP_TOL,
            sdp_max_iter: DEFAULT_MAX_ITER,
            box_via_solver: false,
            early_stop: false,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.d < 1 {
            return bad("dimension must be at least 1");
        }
        if self.iters < 1 || self.restarts < 1 {
            return bad("iters and restarts must be at least 1");
        }
        if !(self.stop_tol > 0.0 && self.rank_tol > 0.0 && self.sdp_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        Ok(())
    }
}

/// One alternation round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub restart: usize,
    pub iter: usize,
    /// Theta objective `Σ w_i X_ii` of the round's `X`.
    pub obj: f64,
    /// `⟨X, W⟩` after the second SDP.
    pub inner_product: f64,
    pub rank: usize,
}

#[derive(Debug, Clone)]
pub struct HeuristicResult {
    /// Best `Σ w_i X_ii`; a lower bound on `ϑ^d` only when `converged`.
    pub bound: f64,
    pub x: SymMatrix,
    pub converged: bool,
    pub achieved_rank: usize,
    pub realization: Option<Realization>,
    pub trace_log: Vec<TraceEntry>,
    /// Restarts abandoned because the first SDP failed.
    pub failed_restarts: usize,
}

impl HeuristicResult {
    /// Trace as JSON lines.
    pub fn trace_jsonl(&self) -> String {
        self.trace_log
            .iter()
            .map(|e| serde_json::to_string(e).expect("trace entry serializes"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

struct RestartOutcome {
    x: SymMatrix,
    bound: f64,
    converged: bool,
    trace: Vec<TraceEntry>,
}

pub fn heuristic_theta_d(g: &Graph, cfg: &HeuristicConfig) -> Result<HeuristicResult> {
    cfg.validate()?;
    let order = g.n() + 1;
    let d = cfg.d.min(order);

    let outcomes: Vec<Option<RestartOutcome>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(g, cfg, d, r))
        .collect::<Result<_>>()?;

    let mut trace_log = Vec::new();
    let mut failed_restarts = 0;
    let mut best: Option<RestartOutcome> = None;
    for o in outcomes {
        let Some(o) = o else {
            failed_restarts += 1;
            continue;
        };
        trace_log.extend(o.trace.iter().cloned());
        let better = match &best {
            None => true,
            Some(b) => (o.converged, o.bound) > (b.converged, b.bound),
        };
        if better {
            best = Some(o);
        }
    }
    let Some(best) = best else {
        return Err(Error::HeuristicFailed(format!(
            "all {} restarts failed in the first SDP",
            cfg.restarts
        )));
    };

    let achieved_rank = numerical_rank(&best.x, cfg.rank_tol)?;
    let realization = if best.converged {
        Some(polish_realization(
            g,
            extract_realization(&best.x, d, cfg.rank_tol)?,
        )?)
    } else {
        None
    };
    Ok(HeuristicResult {
        bound: best.bound,
        x: best.x,
        converged: best.converged,
        achieved_rank,
        realization,
        trace_log,
        failed_restarts,
    })
}

fn run_restart(
    g: &Graph,
    cfg: &HeuristicConfig,
    d: usize,
    restart: usize,
) -> Result<Option<RestartOutcome>> {
    let order = g.n() + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let gauss = DMatrix::<f64>::from_fn(order, order, |_, _| StandardNormal.sample(&mut rng));
    let mut w = project_onto_box(&SymMatrix::symmetrize(&gauss), order - d)?;

    let mut base = SdpProblem::new(SymMatrix::zeros(order), Sense::Minimize);
    push_theta_constraints(&mut base, g);
    let theta_c = theta_objective(g);
    // X00 = 1 is fixed, so its objective coefficient only shifts the value.
    let mut minus_i = theta_c.scaled(-1.0);
    minus_i.set(0, 0, -1.0);

    let mut trace = Vec::new();
    let mut last: Option<(SymMatrix, f64)> = None;
    for iter in 0..cfg.iters {
        base.objective = w.add(&minus_i);
        let sol = solve_sdp(&base, cfg.sdp_tol, cfg.sdp_max_iter)?;
        if sol.status != SdpStatus::Optimal {
            return Ok(None);
        }
        let x = sol.x;
        let (w_next, inner) = if cfg.box_via_solver {
            min_box_trace_sdp(&x, d, cfg.sdp_tol)?
        } else {
            min_box_trace(&x, d)?
        };
        let obj = theta_objective_value(g, &x);
        trace.push(TraceEntry {
            restart,
            iter,
            obj,
            inner_product: inner,
            rank: numerical_rank(&x, cfg.rank_tol)?,
        });
        w = w_next;
        let done = inner <= cfg.stop_tol;
        last = Some((x, obj));
        // At full dimension W = 0 and every round repeats the first.
        if done && (cfg.early_stop || d == order) {
            break;
        }
    }
    let (x, bound) = last.expect("at least one round ran");
    let converged = trace
        .last()
        .is_some_and(|t| t.inner_product <= cfg.stop_tol);
    Ok(Some(RestartOutcome {
        x,
        bound,
        converged,
        trace,
    }))
}

/// Frobenius projection onto `{0 ⪯ W ⪯ I, tr W = target}`.
fn project_onto_box(a: &SymMatrix, target: usize) -> Result<SymMatrix> {
    let eig = sym_eig(a)?;
    let n = a.order();
    let target = target as f64;
    let clipped = |tau: f64| -> Vec<f64> {
        eig.values
            .iter()
            .map(|&l| (l - tau).clamp(0.0, 1.0))
            .collect()
    };
    // Σ clamp(λ - τ, 0, 1) is non-increasing in τ.
    let (mut lo, mut hi) = (eig.min() - 1.0, eig.max());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if clipped(mid).iter().sum::<f64>() > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lam = clipped(0.5 * (lo + hi));
    let v = &eig.vectors;
    let w = v * DMatrix::from_diagonal(&DVector::from_vec(lam)) * v.transpose();
    debug_assert_eq!(w.nrows(), n);
    Ok(SymMatrix::symmetrize(&w))
}

/// Closed-form minimiser of `⟨X, W⟩` over `{0 ⪯ W ⪯ I, tr W = N − d}`: the
/// projector onto the eigenvectors of the `N − d` smallest eigenvalues.
/// Returns `(W, value)`.
pub fn min_box_trace(x: &SymMatrix, d: usize) -> Result<(SymMatrix, f64)> {
    let n = x.order();
    if d < 1 || d > n {
        return Err(Error::InvalidParameter(format!(
            "dimension {d} outside 1..={n}"
        )));
    }
    let eig = sym_eig(x)?;
    let tail = eig.vectors.columns(d, n - d);
    let w = SymMatrix::symmetrize(&(tail * tail.transpose()));
    let value = eig.values[d..].iter().sum();
    Ok((w, value))
}

/// The same problem handed to the generic SDP solver with the spectral box.
pub fn min_box_trace_sdp(x: &SymMatrix, d: usize, tol: f64) -> Result<(SymMatrix, f64)> {
    let n = x.order();
    if d < 1 || d > n {
        return Err(Error::InvalidParameter(format!(
            "dimension {d} outside 1..={n}"
        )));
    }
    let mut p = SdpProblem::new(x.clone(), Sense::Minimize);
    p.push(SymMatrix::identity(n), (n - d) as f64);
    p.extra_box = true;
    let sol = solve_sdp(&p, tol, DEFAULT_MAX_ITER)?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::Numeric(format!(
            "boxed SDP ended with status {}",
            sol.status
        )));
    }
    Ok((sol.x, sol.primal_obj))
}

/// Absolute tolerance on the theta equalities accepted by [`extract_realization`].
const FEASIBILITY_TOL: f64 = 1e-6;

/// Reads a `d`-dimensional realization off a theta-feasible matrix of rank `≤ d`.
///
/// Row 0 of the Gram factor is the handle state; vertex `i` gets the
/// normalised row `i`. Rows whose squared norm (the event probability) is at
/// most `rank_tol` are reported as absent.
pub fn extract_realization(x: &SymMatrix, d: usize, rank_tol: f64) -> Result<Realization> {
    let order = x.order();
    if order == 0 {
        return Err(Error::NotThetaFeasible(f64::INFINITY));
    }
    let mut worst = (x.get(0, 0) - 1.0).abs();
    for i in 1..order {
        worst = worst.max((x.get(i, i) - x.get(0, i)).abs());
    }
    if worst > FEASIBILITY_TOL {
        return Err(Error::NotThetaFeasible(worst));
    }
    let v = match gram_decompose(x, rank_tol) {
        Ok(v) => v,
        Err(Error::NotPsd { min_eig, .. }) => return Err(Error::NotThetaFeasible(-min_eig)),
        Err(e) => return Err(e),
    };
    let rank = v.ncols();
    if rank > d {
        return Err(Error::RankTooHigh { rank, dim: d });
    }
    let row = |i: usize| DVector::from_fn(d, |k, _| if k < rank { v[(i, k)] } else { 0.0 });

    let state = row(0);
    let state = &state / state.norm();
    let vectors = (1..order)
        .map(|i| {
            let r = row(i);
            let norm2 = r.norm_squared();
            (norm2 > rank_tol).then(|| complexify(&(r / norm2.sqrt())))
        })
        .collect();
    Realization::new(complexify(&state), vectors)
}

/// Restores exact edge orthogonality lost when a nearly low-rank matrix is
/// truncated: each present vector is projected off the span of its present
/// neighbours and renormalised, sweeping until the worst edge overlap is at
/// round-off level.
pub fn polish_realization(g: &Graph, r: Realization) -> Result<Realization> {
    if r.vectors.len() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "realization has {} events for {} vertices",
            r.vectors.len(),
            g.n()
        )));
    }
    let mut vectors = r.vectors;
    let worst = |vs: &[Option<CVector>]| {
        g.edges()
            .iter()
            .filter_map(|&(i, j)| Some(vs[i].as_ref()?.dotc(vs[j].as_ref()?).norm()))
            .fold(0.0, f64::max)
    };
    for _ in 0..50 {
        if worst(&vectors) <= 1e-14 {
            break;
        }
        for i in 0..vectors.len() {
            let Some(v) = vectors[i].clone() else {
                continue;
            };
            let nbrs: Vec<CVector> = g.neighbors(i).filter_map(|j| vectors[j].clone()).collect();
            if nbrs.is_empty() {
                continue;
            }
            let m = CMatrix::from_columns(&nbrs);
            let svd = m.svd(true, false);
            let u = svd.u.expect("left singular vectors requested");
            let top = svd.singular_values.max();
            let mut p = v;
            for (k, &sv) in svd.singular_values.iter().enumerate() {
                if sv > 1e-6 * top {
                    let col = u.column(k);
                    let c = col.dotc(&p);
                    p -= col * c;
                }
            }
            let norm = p.norm();
            if norm > 0.5 {
                vectors[i] = Some(p / Complex64::from(norm));
            }
        }
    }
    Realization::new(r.state, vectors)
}

/// `λ_max` of the sum of the family's projectors.
pub fn realization_cost<F: VectorFamily + ?Sized>(family: &F) -> Result<f64> {
    let vecs: Vec<_> = family.present_vectors().into_iter().cloned().collect();
    lambda_max_of_sum(&vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_standard, StandardFamily};
    use rand::Rng;

    #[test]
    fn box_trace_examples() {
        let (w, v) = min_box_trace(&SymMatrix::identity(3), 1).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        assert!((w.trace() - 2.0).abs() < 1e-12);

        let (w, v) = min_box_trace(&SymMatrix::from_diagonal(&[3.0, 2.0, 1.0]), 1).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
        let expect = SymMatrix::from_diagonal(&[0.0, 1.0, 1.0]);
        assert!((w.matrix() - expect.matrix()).norm() < 1e-12);

        let (w, v) = min_box_trace(&SymMatrix::identity(4), 4).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(w.frobenius_norm(), 0.0);

        assert!(matches!(
            min_box_trace(&SymMatrix::identity(2), 3),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn box_trace_is_a_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = SymMatrix::from_fn(7, |_, _| rng.random_range(-1.0..1.0));
        let (w, _) = min_box_trace(&x, 3).unwrap();
        let eig = sym_eig(&w).unwrap();
        assert!(eig.max() <= 1.0 + 1e-10 && eig.min() >= -1e-10);
        assert!((w.trace() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn projection_lands_in_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = SymMatrix::from_fn(6, |_, _| rng.random_range(-3.0..3.0));
        let w = project_onto_box(&a, 4).unwrap();
        let eig = sym_eig(&w).unwrap();
        assert!(eig.max() <= 1.0 + 1e-9 && eig.min() >= -1e-9);
        assert!((w.trace() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn deterministic_realization_from_stable_set() {
        // C5, stable set {0, 2}: X = u uᵀ with u = (1, 1, 0, 1, 0, 0).
        let u = [1.0, 1.0, 0.0, 1.0, 0.0, 0.0];
        let x = SymMatrix::from_fn(6, |i, j| u[i] * u[j]);
        let r = extract_realization(&x, 1, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(r.d, 1);
        assert_eq!(r.absent(), vec![1, 3, 4]);
        let p: Vec<f64> = r.probabilities.iter().map(|p| p.round()).collect();
        assert_eq!(p, vec![1.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn extraction_errors() {
        let x = SymMatrix::from_diagonal(&[1.0, 0.0]);
        assert!(extract_realization(&x, 1, 1e-6).is_ok());
        // X11 != X01
        let bad = SymMatrix::from_diagonal(&[1.0, 0.5]);
        assert!(matches!(
            extract_realization(&bad, 2, 1e-6),
            Err(Error::NotThetaFeasible(_))
        ));
        // rank 2 matrix at d = 1
        let x = SymMatrix::from_rows(&[
            vec![1.0, 0.5, 0.5],
            vec![0.5, 0.5, 0.0],
            vec![0.5, 0.0, 0.5],
        ])
        .unwrap();
        assert!(matches!(
            extract_realization(&x, 1, 1e-6),
            Err(Error::RankTooHigh { rank: 2, dim: 1 })
        ));
        assert!(extract_realization(&x, 2, 1e-6).is_ok());
    }

    #[test]
    fn config_validation() {
        let g = generate_standard(StandardFamily::Cycle, 5).unwrap();
        let mut cfg = HeuristicConfig::new(0);
        assert!(heuristic_theta_d(&g, &cfg).is_err());
        cfg.d = 2;
        cfg.restarts = 0;
        assert!(heuristic_theta_d(&g, &cfg).is_err());
    }

    #[test]
    fn full_dimension_converges_at_once() {
        let g = generate_standard(StandardFamily::Cycle, 5).unwrap();
        let mut cfg = HeuristicConfig::new(6);
        cfg.restarts = 2;
        let r = heuristic_theta_d(&g, &cfg).unwrap();
        assert!(r.converged);
        assert!((r.bound - 5f64.sqrt()).abs() < 1e-5);
        assert!(r.trace_log.iter().all(|t| t.iter == 0));
    }

    #[test]
    fn polish_restores_orthogonality() {
        let g = generate_standard(StandardFamily::Cycle, 5).unwrap();
        let mut r = crate::witness::c5_umbrella();
        for v in r.vectors.iter_mut().flatten() {
            v[0] += Complex64::new(1e-6, 0.0);
            *v /= Complex64::from(v.norm());
        }
        let before = r.vectors[0]
            .as_ref()
            .unwrap()
            .dotc(r.vectors[1].as_ref().unwrap())
            .norm();
        assert!(before > 1e-8);
        let p = polish_realization(&g, r).unwrap();
        for &(i, j) in g.edges() {
            let o = p.vectors[i]
                .as_ref()
                .unwrap()
                .dotc(p.vectors[j].as_ref().unwrap())
                .norm();
            assert!(o < 1e-13, "{o}");
        }
        let sum: f64 = p.probabilities.iter().sum();
        assert!((sum - 5f64.sqrt()).abs() < 1e-5);
    }
}
