//! Dense primal-dual interior-point solver for small standard-form SDPs.
//!
//! Problems have the form
//!
//! ```text
//! min / max  tr(C X)   s.t.  tr(A_i X) = b_i,  X ⪰ 0   [and X ⪯ I]
//! ```
//!
//! The solver runs an infeasible-start path-following method with the HKM
//! search direction and a Mehrotra predictor-corrector step. Constraint
//! matrices are stored as sparse entry lists, so the Schur complement costs
//! `O(nnz_i * nnz_j)` per entry rather than `O(N^3)`. The spectral box is
//! handled natively by a second block `S = I - X`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{sym_eigenvalues, SymMatrix};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub a: SymMatrix,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub order: usize,
    pub objective: SymMatrix,
    pub constraints: Vec<Constraint>,
    pub sense: Sense,
    /// Adds `X ⪯ I` on top of `X ⪰ 0`.
    pub extra_box: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIter,
}

impl std::fmt::Display for SdpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Optimal => "optimal",
            Self::Infeasible => "infeasible",
            Self::Unbounded => "unbounded",
            Self::MaxIter => "max_iter",
        };
        f.write_str(s)
    }
}

/// Relative residuals of the returned iterate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Residuals {
    /// `‖A(X) − b‖ / (1 + ‖b‖)`
    pub primal_feas: f64,
    /// `‖C − Aᵀy − Z‖_F / (1 + ‖C‖_F)`
    pub dual_feas: f64,
    /// `|primal_obj − dual_obj| / (1 + |primal_obj|)`
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x: SymMatrix,
    pub y: Vec<f64>,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub status: SdpStatus,
    pub residuals: Residuals,
    pub iterations: usize,
}

impl SdpProblem {
    pub fn new(objective: SymMatrix, sense: Sense) -> Self {
        Self {
            order: objective.order(),
            objective,
            constraints: Vec::new(),
            sense,
            extra_box: false,
        }
    }

    pub fn push(&mut self, a: SymMatrix, b: f64) {
        self.constraints.push(Constraint { a, b });
    }

    /// Constraint `X[i][j] = b` (the matrix carries 1/2 on both off-diagonal slots).
    pub fn push_entry(&mut self, i: usize, j: usize, b: f64) {
        let mut a = SymMatrix::zeros(self.order);
        if i == j {
            a.set(i, i, 1.0);
        } else {
            a.set(i, j, 0.5);
        }
        self.push(a, b);
    }

    fn validate(&self) -> Result<()> {
        if self.objective.order() != self.order {
            return Err(Error::InvalidParameter(format!(
                "objective has order {}, problem order is {}",
                self.objective.order(),
                self.order
            )));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.a.order() != self.order {
                return Err(Error::InvalidParameter(format!(
                    "constraint {k} has order {}, problem order is {}",
                    c.a.order(),
                    self.order
                )));
            }
            if !c.a.is_finite() || !c.b.is_finite() {
                return Err(Error::Numeric(format!(
                    "constraint {k} has non-finite data"
                )));
            }
        }
        if !self.objective.is_finite() {
            return Err(Error::Numeric("objective has non-finite entries".into()));
        }
        Ok(())
    }

    /// JSON dump of `(C, A_i, b)` for reproducing solver issues.
    ///
    /// Schema: `{"order", "sense", "extra_box", "objective": [[..]],
    /// "constraints": [{"a": [[..]], "b"}]}`.
    pub fn to_debug_json(&self) -> String {
        serde_json::to_string(&DebugDump::from(self)).expect("dump serializes")
    }

    pub fn from_debug_json(text: &str) -> Result<Self> {
        let d: DebugDump = serde_json::from_str(text)?;
        let mut p = Self::new(SymMatrix::from_rows(&d.objective)?, d.sense);
        p.extra_box = d.extra_box;
        if p.order != d.order {
            return Err(Error::InvalidParameter(
                "order does not match objective".into(),
            ));
        }
        for c in d.constraints {
            p.push(SymMatrix::from_rows(&c.a)?, c.b);
        }
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct DebugDump {
    order: usize,
    sense: Sense,
    extra_box: bool,
    objective: Vec<Vec<f64>>,
    constraints: Vec<DebugConstraint>,
}

#[derive(Serialize, Deserialize)]
struct DebugConstraint {
    a: Vec<Vec<f64>>,
    b: f64,
}

impl From<&SdpProblem> for DebugDump {
    fn from(p: &SdpProblem) -> Self {
        Self {
            order: p.order,
            sense: p.sense,
            extra_box: p.extra_box,
            objective: p.objective.to_rows(),
            constraints: p
                .constraints
                .iter()
                .map(|c| DebugConstraint {
                    a: c.a.to_rows(),
                    b: c.b,
                })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Internal block-diagonal form

type Blocks = Vec<DMatrix<f64>>;

#[derive(Debug, Clone, Copy)]
struct Entry {
    block: usize,
    r: usize,
    c: usize,
    v: f64,
}

struct Standard {
    sizes: Vec<usize>,
    c: Blocks,
    a: Vec<Vec<Entry>>,
    b: DVector<f64>,
    /// Cholesky factor of `[⟨A_i, A_j⟩]`, used to restore `A(ΔX) = r_p`.
    gram: Option<Cholesky<f64, Dyn>>,
}

impl Standard {
    fn from_problem(p: &SdpProblem) -> Self {
        let n = p.order;
        let sign = match p.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut sizes = vec![n];
        let mut c = vec![p.objective.matrix() * sign];
        let mut a: Vec<Vec<Entry>> = p
            .constraints
            .iter()
            .map(|con| {
                let m = con.a.matrix();
                let mut e = Vec::new();
                for col in 0..n {
                    for row in 0..n {
                        let v = m[(row, col)];
                        if v != 0.0 {
                            e.push(Entry {
                                block: 0,
                                r: row,
                                c: col,
                                v,
                            });
                        }
                    }
                }
                e
            })
            .collect();
        let mut b: Vec<f64> = p.constraints.iter().map(|con| con.b).collect();
        if p.extra_box {
            sizes.push(n);
            c.push(DMatrix::zeros(n, n));
            for i in 0..n {
                for j in i..n {
                    let entries = if i == j {
                        vec![
                            Entry {
                                block: 0,
                                r: i,
                                c: i,
                                v: 1.0,
                            },
                            Entry {
                                block: 1,
                                r: i,
                                c: i,
                                v: 1.0,
                            },
                        ]
                    } else {
                        vec![
                            Entry {
                                block: 0,
                                r: i,
                                c: j,
                                v: 0.5,
                            },
                            Entry {
                                block: 0,
                                r: j,
                                c: i,
                                v: 0.5,
                            },
                            Entry {
                                block: 1,
                                r: i,
                                c: j,
                                v: 0.5,
                            },
                            Entry {
                                block: 1,
                                r: j,
                                c: i,
                                v: 0.5,
                            },
                        ]
                    };
                    a.push(entries);
                    b.push(if i == j { 1.0 } else { 0.0 });
                }
            }
        }
        Self {
            sizes,
            c,
            a,
            b: DVector::from_vec(b),
            gram: None,
        }
    }

    fn total_order(&self) -> usize {
        self.sizes.iter().sum()
    }

    fn zeros(&self) -> Blocks {
        self.sizes.iter().map(|&n| DMatrix::zeros(n, n)).collect()
    }

    fn scaled_identity(&self, s: f64) -> Blocks {
        self.sizes
            .iter()
            .map(|&n| DMatrix::identity(n, n) * s)
            .collect()
    }

    /// `tr(A_i M)` for every constraint; `M` need not be symmetric.
    fn apply(&self, m: &Blocks) -> DVector<f64> {
        DVector::from_iterator(
            self.a.len(),
            self.a
                .iter()
                .map(|row| row.iter().map(|e| e.v * m[e.block][(e.c, e.r)]).sum()),
        )
    }

    /// `Σ y_i A_i`.
    fn adjoint(&self, y: &DVector<f64>) -> Blocks {
        let mut out = self.zeros();
        for (row, &yi) in self.a.iter().zip(y.iter()) {
            for e in row {
                out[e.block][(e.r, e.c)] += yi * e.v;
            }
        }
        out
    }

    /// Schur complement `M_ij = tr(A_i X A_j Z⁻¹)`.
    fn schur(&self, x: &Blocks, zinv: &Blocks) -> DMatrix<f64> {
        let m = self.a.len();
        let mut out = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let mut s = 0.0;
                for e in &self.a[i] {
                    let xb = &x[e.block];
                    let zb = &zinv[e.block];
                    for f in &self.a[j] {
                        if f.block == e.block {
                            s += e.v * f.v * xb[(e.c, f.r)] * zb[(f.c, e.r)];
                        }
                    }
                }
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }

    /// `[⟨A_i, A_j⟩]`.
    fn gram_matrix(&self) -> DMatrix<f64> {
        let m = self.a.len();
        let offsets: Vec<usize> = self
            .sizes
            .iter()
            .scan(0, |acc, &n| {
                let o = *acc;
                *acc += n * n;
                Some(o)
            })
            .collect();
        let width: usize = self.sizes.iter().map(|n| n * n).sum();
        let mut dense = DMatrix::<f64>::zeros(m, width);
        for (i, row) in self.a.iter().enumerate() {
            for e in row {
                dense[(i, offsets[e.block] + e.r * self.sizes[e.block] + e.c)] += e.v;
            }
        }
        &dense * dense.transpose()
    }

    /// Indices of a maximal linearly independent subset of the constraints,
    /// or `None` when a dependent row contradicts the independent ones.
    fn independent_rows(&self, tol: f64) -> Option<Vec<usize>> {
        let m = self.a.len();
        if m == 0 {
            return Some(Vec::new());
        }
        let gram = self.gram_matrix();

        // pivoted Cholesky on the Gram matrix
        let maxdiag = gram.diagonal().max();
        if maxdiag <= 0.0 {
            // all constraint matrices are zero
            return self.b.iter().all(|b| b.abs() <= tol).then(Vec::new);
        }
        let mut l = DMatrix::<f64>::zeros(m, m);
        let mut resid: Vec<f64> = gram.diagonal().iter().copied().collect();
        let mut chosen: Vec<usize> = Vec::new();
        let mut remaining: Vec<usize> = (0..m).collect();
        while let Some((pos, &piv)) = remaining
            .iter()
            .enumerate()
            .max_by(|a, b| resid[*a.1].total_cmp(&resid[*b.1]))
        {
            if resid[piv] <= 1e-12 * maxdiag {
                break;
            }
            let k = chosen.len();
            let d = resid[piv].sqrt();
            remaining.swap_remove(pos);
            l[(piv, k)] = d;
            for &r in &remaining {
                let mut s = gram[(r, piv)];
                for t in 0..k {
                    s -= l[(r, t)] * l[(piv, t)];
                }
                l[(r, k)] = s / d;
                resid[r] -= l[(r, k)] * l[(r, k)];
            }
            chosen.push(piv);
        }
        if remaining.is_empty() {
            return Some((0..m).collect());
        }
        // Dependent rows must be consistent: b_k = cᵀ b_I where A_k = Σ c_i A_i.
        let k = chosen.len();
        let g_ii = DMatrix::from_fn(k, k, |i, j| gram[(chosen[i], chosen[j])]);
        let chol = Cholesky::new(g_ii)?;
        let b_i = DVector::from_fn(k, |i, _| self.b[chosen[i]]);
        for &r in &remaining {
            let g_ik = DVector::from_fn(k, |i, _| gram[(chosen[i], r)]);
            let coef = chol.solve(&g_ik);
            let predicted = coef.dot(&b_i);
            let scale = 1.0 + self.b[r].abs() + b_i.amax();
            if (predicted - self.b[r]).abs() > tol.max(1e-9) * scale {
                return None;
            }
        }
        chosen.sort_unstable();
        Some(chosen)
    }

    fn restricted(&self, rows: &[usize]) -> Self {
        let mut s = Self {
            sizes: self.sizes.clone(),
            c: self.c.clone(),
            a: rows.iter().map(|&i| self.a[i].clone()).collect(),
            b: DVector::from_fn(rows.len(), |k, _| self.b[rows[k]]),
            gram: None,
        };
        if !rows.is_empty() {
            s.gram = Cholesky::new(s.gram_matrix());
        }
        s
    }

    /// Least-norm correction making `A(ΔX) = target` hold to rounding error.
    fn restore_primal(&self, dx: Blocks, target: &DVector<f64>) -> Blocks {
        let Some(chol) = &self.gram else {
            return dx;
        };
        let miss = target - self.apply(&dx);
        let fix = self.adjoint(&chol.solve(&miss));
        dx.iter().zip(&fix).map(|(a, b)| a + b).collect()
    }
}

fn inner(a: &Blocks, b: &Blocks) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn fro(a: &Blocks) -> f64 {
    a.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
}

fn sub(a: &Blocks, b: &Blocks) -> Blocks {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn axpy(a: &Blocks, s: f64, d: &Blocks) -> Blocks {
    a.iter().zip(d).map(|(x, y)| x + y * s).collect()
}

fn mul3(a: &Blocks, b: &Blocks, c: &Blocks) -> Blocks {
    a.iter()
        .zip(b)
        .zip(c)
        .map(|((x, y), z)| x * y * z)
        .collect()
}

fn symmetrized(a: Blocks) -> Blocks {
    a.into_iter().map(|m| (&m + m.transpose()) * 0.5).collect()
}

fn inverse_pd(a: &Blocks) -> Option<Blocks> {
    a.iter()
        .map(|m| Cholesky::new(m.clone()).map(|c| c.inverse()))
        .collect()
}

/// Largest `α` keeping `X + α ΔX ⪰ 0` (infinite when `ΔX ⪰ 0`).
fn max_step(x: &Blocks, dx: &Blocks) -> f64 {
    let mut alpha = f64::INFINITY;
    for (xb, db) in x.iter().zip(dx) {
        if xb.nrows() == 0 {
            continue;
        }
        let Some(chol) = Cholesky::new(xb.clone()) else {
            return 0.0;
        };
        let l = chol.l();
        // L⁻¹ ΔX L⁻ᵀ
        let Some(t) = l.solve_lower_triangular(db) else {
            return 0.0;
        };
        let Some(s) = l.solve_lower_triangular(&t.transpose()) else {
            return 0.0;
        };
        let s = SymMatrix::symmetrize(&s);
        let lmin = match sym_eigenvalues(&s) {
            Ok(v) => v.last().copied().unwrap_or(0.0),
            Err(_) => return 0.0,
        };
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    alpha
}

fn solve_spd(m: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    if m.nrows() == 0 {
        return Some(DVector::zeros(0));
    }
    let scale = m.diagonal().amax().max(1e-300);
    let mut reg = 0.0;
    for _ in 0..6 {
        let mut mm = m.clone();
        if reg > 0.0 {
            for i in 0..mm.nrows() {
                mm[(i, i)] += reg * scale;
            }
        }
        if let Some(c) = Cholesky::<f64, Dyn>::new(mm) {
            let sol = c.solve(rhs);
            if sol.iter().all(|v| v.is_finite()) {
                return Some(sol);
            }
        }
        reg = if reg == 0.0 { 1e-14 } else { reg * 100.0 };
    }
    m.clone().lu().solve(rhs)
}

struct Iterate {
    x: Blocks,
    y: DVector<f64>,
    z: Blocks,
}

struct Measures {
    pobj: f64,
    dobj: f64,
    res: Residuals,
}

fn measure(s: &Standard, it: &Iterate, norm_b: f64, norm_c: f64) -> Measures {
    let rp = &s.b - s.apply(&it.x);
    let rd = sub(&sub(&s.c, &s.adjoint(&it.y)), &it.z);
    let pobj = inner(&s.c, &it.x);
    let dobj = s.b.dot(&it.y);
    Measures {
        pobj,
        dobj,
        res: Residuals {
            primal_feas: rp.norm() / (1.0 + norm_b),
            dual_feas: fro(&rd) / (1.0 + norm_c),
            gap: (pobj - dobj).abs() / (1.0 + pobj.abs()),
        },
    }
}

/// Solves `p` to relative tolerance `tol` within `max_iter` interior-point steps.
///
/// Problem-shape errors (mismatched orders, non-finite data) are returned as
/// `Err`; infeasibility, unboundedness and the iteration cap are reported
/// through [`SdpSolution::status`].
pub fn solve_sdp(p: &SdpProblem, tol: f64, max_iter: usize) -> Result<SdpSolution> {
    p.validate()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let full = Standard::from_problem(p);
    let n = p.order;
    let sign = match p.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };

    let Some(rows) = full.independent_rows(tol) else {
        return Ok(SdpSolution {
            x: SymMatrix::zeros(n),
            y: vec![0.0; p.constraints.len()],
            primal_obj: f64::NAN,
            dual_obj: f64::NAN,
            status: SdpStatus::Infeasible,
            residuals: Residuals {
                primal_feas: f64::INFINITY,
                ..Default::default()
            },
            iterations: 0,
        });
    };
    let s = full.restricted(&rows);
    let (it, status, iterations) = interior_point(&s, tol, max_iter);

    let norm_b = s.b.norm();
    let norm_c = fro(&s.c);
    let meas = measure(&s, &it, norm_b, norm_c);
    let mut y = vec![0.0; p.constraints.len()];
    for (k, &r) in rows.iter().enumerate() {
        if r < p.constraints.len() {
            y[r] = it.y[k];
        }
    }
    Ok(SdpSolution {
        x: SymMatrix::symmetrize(&it.x[0]),
        y,
        primal_obj: sign * meas.pobj,
        dual_obj: sign * meas.dobj,
        status,
        residuals: meas.res,
        iterations,
    })
}

fn interior_point(s: &Standard, tol: f64, max_iter: usize) -> (Iterate, SdpStatus, usize) {
    let ntot = s.total_order() as f64;
    let norm_b = s.b.norm();
    let norm_c = fro(&s.c);

    // Infeasible start, scaled to the data.
    let mut xi: f64 = 10f64.max(ntot.sqrt());
    let mut eta: f64 = 10f64.max(ntot.sqrt()).max(norm_c);
    for (row, &b) in s.a.iter().zip(s.b.iter()) {
        let an = row.iter().map(|e| e.v * e.v).sum::<f64>().sqrt();
        xi = xi.max(ntot * (1.0 + b.abs()) / (1.0 + an));
        eta = eta.max(an);
    }
    let mut it = Iterate {
        x: s.scaled_identity(xi),
        y: DVector::zeros(s.a.len()),
        z: s.scaled_identity(eta),
    };

    let mut stalls = 0;
    for iter in 0..max_iter {
        let meas = measure(s, &it, norm_b, norm_c);
        let r = meas.res;
        if r.primal_feas <= tol && r.dual_feas <= tol && r.gap <= tol {
            return (it, SdpStatus::Optimal, iter);
        }

        // Farkas-type certificates on divergent iterates.
        let rd = sub(&sub(&s.c, &s.adjoint(&it.y)), &it.z);
        if meas.dobj > 1e8 * (1.0 + norm_c) && (fro(&rd) + norm_c) / meas.dobj < tol {
            return (it, SdpStatus::Infeasible, iter);
        }
        let rp = &s.b - s.apply(&it.x);
        if meas.pobj < -1e8 * (1.0 + norm_b) && (rp.norm() + norm_b) / -meas.pobj < tol {
            return (it, SdpStatus::Unbounded, iter);
        }

        let Some(zinv) = inverse_pd(&it.z) else {
            return (it, SdpStatus::MaxIter, iter);
        };
        let mu = inner(&it.x, &it.z) / ntot;
        let schur = s.schur(&it.x, &zinv);
        let x_rd_zinv = mul3(&it.x, &rd, &zinv);
        let base_rhs = &rp + s.apply(&x_rd_zinv);

        // Direction for a given `R_c Z⁻¹` term.
        let direction = |rc_zinv: &Blocks| -> Option<(Blocks, DVector<f64>, Blocks)> {
            let rhs = &base_rhs - s.apply(rc_zinv);
            let dy = solve_spd(&schur, &rhs)?;
            let dz = sub(&rd, &s.adjoint(&dy));
            let x_dz_zinv = mul3(&it.x, &dz, &zinv);
            let dx = symmetrized(sub(rc_zinv, &x_dz_zinv));
            let dx = s.restore_primal(dx, &rp);
            Some((dx, dy, dz))
        };

        // predictor
        let neg_x: Blocks = it.x.iter().map(|m| -m).collect();
        let Some((dxp, _, dzp)) = direction(&neg_x) else {
            return (it, SdpStatus::MaxIter, iter);
        };
        let ap = (0.98 * max_step(&it.x, &dxp)).min(1.0);
        let ad = (0.98 * max_step(&it.z, &dzp)).min(1.0);
        let mu_aff = inner(&axpy(&it.x, ap, &dxp), &axpy(&it.z, ad, &dzp)) / ntot;
        let ratio = (mu_aff / mu).clamp(0.0, 1.0);
        let sigma = ratio.powi(3);

        // corrector
        let second: Blocks = mul3(&dxp, &dzp, &zinv);
        let rc_zinv: Blocks = zinv
            .iter()
            .zip(&it.x)
            .zip(&second)
            .map(|((zi, x), sc)| zi * (sigma * mu) - x - sc)
            .collect();
        let Some((mut dx, mut dy, mut dz)) = direction(&rc_zinv) else {
            return (it, SdpStatus::MaxIter, iter);
        };
        let gamma = if mu < 1e-6 { 0.99 } else { 0.95 };
        let mut ap = (gamma * max_step(&it.x, &dx)).min(1.0);
        let mut ad = (gamma * max_step(&it.z, &dz)).min(1.0);

        // Short step: fall back to plain centering directions.
        for sc in [sigma.max(0.3), 0.7, 1.0] {
            if ap.min(ad) >= 0.2 {
                break;
            }
            let rc: Blocks = zinv
                .iter()
                .zip(&it.x)
                .map(|(zi, x)| zi * (sc * mu) - x)
                .collect();
            if let Some((cx, cy, cz)) = direction(&rc) {
                let cp = (gamma * max_step(&it.x, &cx)).min(1.0);
                let cd = (gamma * max_step(&it.z, &cz)).min(1.0);
                if cp.min(cd) > ap.min(ad) {
                    (dx, dy, dz, ap, ad) = (cx, cy, cz, cp, cd);
                }
            }
        }
        if ap < 1e-10 && ad < 1e-10 {
            stalls += 1;
            if stalls >= 3 {
                return (it, SdpStatus::MaxIter, iter);
            }
        } else {
            stalls = 0;
        }
        it = Iterate {
            x: symmetrized(axpy(&it.x, ap, &dx)),
            y: &it.y + &dy * ad,
            z: symmetrized(axpy(&it.z, ad, &dz)),
        };
    }
    let meas = measure(s, &it, norm_b, norm_c);
    let r = meas.res;
    let status = if r.primal_feas <= tol && r.dual_feas <= tol && r.gap <= tol {
        SdpStatus::Optimal
    } else {
        SdpStatus::MaxIter
    };
    (it, status, max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one() {
        let mut p = SdpProblem::new(SymMatrix::identity(1), Sense::Minimize);
        p.push(SymMatrix::identity(1), 3.0);
        let sol = solve_sdp(&p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.x.get(0, 0) - 3.0).abs() < 1e-7);
        assert!((sol.primal_obj - 3.0).abs() < 1e-7);
    }

    #[test]
    fn contradictory_equalities_are_infeasible() {
        let mut p = SdpProblem::new(SymMatrix::zeros(2), Sense::Minimize);
        p.push_entry(0, 0, 1.0);
        p.push_entry(0, 0, 2.0);
        let sol = solve_sdp(&p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(sol.status, SdpStatus::Infeasible);
    }

    #[test]
    fn duplicated_constraint_is_harmless() {
        let mut p = SdpProblem::new(SymMatrix::identity(2), Sense::Minimize);
        p.push_entry(0, 0, 1.0);
        p.push_entry(0, 0, 1.0);
        p.push_entry(1, 1, 2.0);
        let sol = solve_sdp(&p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.primal_obj - 3.0).abs() < 1e-7);
    }

    #[test]
    fn psd_cone_infeasibility_detected() {
        // X00 = -1 is linearly consistent but excluded by X ⪰ 0.
        let mut p = SdpProblem::new(SymMatrix::zeros(2), Sense::Minimize);
        p.push_entry(0, 0, -1.0);
        let sol = solve_sdp(&p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(sol.status, SdpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        // min -X11 with only X00 = 1 fixed.
        let mut p = SdpProblem::new(SymMatrix::from_diagonal(&[0.0, -1.0]), Sense::Minimize);
        p.push_entry(0, 0, 1.0);
        let sol = solve_sdp(&p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(sol.status, SdpStatus::Unbounded);
    }

    #[test]
    fn max_eigenvalue_as_sdp() {
        // max tr(CX) s.t. tr X = 1 equals λ_max(C).
        let c = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let mut p = SdpProblem::new(c, Sense::Maximize);
        p.push(SymMatrix::identity(2), 1.0);
        let sol = solve_sdp(&p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.primal_obj - 3.0).abs() < 1e-7);
        assert!((sol.dual_obj - 3.0).abs() < 1e-7);
    }

    #[test]
    fn iteration_cap_reports_max_iter() {
        let c = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let mut p = SdpProblem::new(c, Sense::Maximize);
        p.push(SymMatrix::identity(2), 1.0);
        let sol = solve_sdp(&p, DEFAULT_TOL, 2).unwrap();
        assert_eq!(sol.status, SdpStatus::MaxIter);
        assert_eq!(sol.x.order(), 2);
    }

    #[test]
    fn boxed_problem() {
        // min tr(diag(3,2,1) W) over 0 ⪯ W ⪯ I, tr W = 2 → 3.
        let mut p = SdpProblem::new(SymMatrix::from_diagonal(&[3.0, 2.0, 1.0]), Sense::Minimize);
        p.push(SymMatrix::identity(3), 2.0);
        p.extra_box = true;
        let sol = solve_sdp(&p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.primal_obj - 3.0).abs() < 1e-6);
        assert!((sol.x.get(0, 0)).abs() < 1e-6);
        assert!((sol.x.get(2, 2) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn shape_errors() {
        let mut p = SdpProblem::new(SymMatrix::identity(2), Sense::Minimize);
        p.push(SymMatrix::identity(3), 1.0);
        assert!(matches!(
            solve_sdp(&p, DEFAULT_TOL, DEFAULT_MAX_ITER),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn debug_dump_round_trip() {
        let mut p = SdpProblem::new(SymMatrix::from_diagonal(&[1.0, 2.0]), Sense::Maximize);
        p.push_entry(0, 1, 0.25);
        p.extra_box = true;
        let back = SdpProblem::from_debug_json(&p.to_debug_json()).unwrap();
        assert_eq!(back, p);
    }
}
