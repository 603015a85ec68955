//! The (weighted) Lovász theta SDP, theta-body membership and the
//! Barvinok rank bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numerics::SymMatrix;
use crate::sdp::{
    solve_sdp, Residuals, SdpProblem, SdpStatus, Sense, DEFAULT_MAX_ITER, DEFAULT_TOL,
};

/// Default feasibility tolerance for theta-body membership.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct ThetaResult {
    /// `ϑ(G)`, or `ϑ(G, w)` for weighted graphs.
    pub value: f64,
    /// Optimal `(n+1) x (n+1)` matrix; row/column 0 is the handle.
    pub x: SymMatrix,
    /// Number of equality constraints, `1 + n + |E|`.
    pub m: usize,
    pub residuals: Residuals,
}

/// Adds the theta constraints to a problem of order `n + 1`:
/// `X00 = 1`, `X_ii = X_0i`, and `X_ij = 0` on edges.
pub(crate) fn push_theta_constraints(p: &mut SdpProblem, g: &Graph) {
    let order = g.n() + 1;
    p.push_entry(0, 0, 1.0);
    for i in 1..order {
        let mut a = SymMatrix::zeros(order);
        a.set(i, i, 1.0);
        a.set(0, i, -0.5);
        p.push(a, 0.0);
    }
    for &(i, j) in g.edges() {
        p.push_entry(i + 1, j + 1, 0.0);
    }
}

/// Theta objective `diag(0, w_1, .., w_n)`.
pub(crate) fn theta_objective(g: &Graph) -> SymMatrix {
    let mut d = vec![0.0];
    d.extend((0..g.n()).map(|v| g.weight_f64(v)));
    SymMatrix::from_diagonal(&d)
}

pub fn build_theta_sdp(g: &Graph) -> SdpProblem {
    let mut p = SdpProblem::new(theta_objective(g), Sense::Maximize);
    push_theta_constraints(&mut p, g);
    p
}

/// `Σ w_i X_ii` over the vertex rows of a theta matrix.
pub fn theta_objective_value(g: &Graph, x: &SymMatrix) -> f64 {
    (0..g.n())
        .map(|v| g.weight_f64(v) * x.get(v + 1, v + 1))
        .sum()
}

pub fn lovasz_theta(g: &Graph) -> Result<ThetaResult> {
    lovasz_theta_with(g, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

pub fn lovasz_theta_with(g: &Graph, tol: f64, max_iter: usize) -> Result<ThetaResult> {
    let p = build_theta_sdp(g);
    let m = p.constraints.len();
    let sol = solve_sdp(&p, tol, max_iter)?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::ThetaFailed(sol.status.to_string()));
    }
    Ok(ThetaResult {
        value: theta_objective_value(g, &sol.x),
        x: sol.x,
        m,
        residuals: sol.residuals,
    })
}

/// Largest `r` with `r(r+1)/2 <= 1 + n + |E|`.
pub fn barvinok_bound(g: &Graph) -> usize {
    let m = 1 + g.n() + g.edge_count();
    // floor((sqrt(8m + 1) - 1) / 2), corrected for rounding
    let mut r = ((((8 * m + 1) as f64).sqrt() - 1.0) / 2.0).floor() as usize;
    while r * (r + 1) / 2 > m {
        r -= 1;
    }
    while (r + 1) * (r + 2) / 2 <= m {
        r += 1;
    }
    r
}

#[derive(Debug, Clone)]
pub enum Membership {
    /// `certificate` is the PSD matrix `Y` with `Y00 = 1`, `Y_ii = Y_0i = p_i`.
    Member {
        certificate: SymMatrix,
    },
    NonMember {
        reason: NonMemberReason,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonMemberReason {
    /// `p_i + p_j > 1` on an edge.
    EdgeAxiom { edge: (usize, usize) },
    /// Smallest eigenvalue shift needed to complete `Y`.
    Infeasible { shift: f64 },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Self::Member { .. })
    }
}

/// Decides whether the behaviour `p` lies in the theta body of `g`.
///
/// Solves `min t` over `Y + t I ⪰ 0`, `t ≥ 0`, with the entries of `Y` fixed
/// by `p` and the edges; `p` is a member when the optimal shift is at most
/// `tol`.
pub fn theta_body_membership(g: &Graph, p: &[f64], tol: f64) -> Result<Membership> {
    let n = g.n();
    if p.len() != n {
        return Err(Error::InvalidParameter(format!(
            "behaviour has {} entries for {n} vertices",
            p.len()
        )));
    }
    if let Some(i) = p.iter().position(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::InvalidParameter(format!(
            "p[{i}] = {} is outside [0, 1]",
            p[i]
        )));
    }
    if let Some(&(i, j)) = g.edges().iter().find(|&&(i, j)| p[i] + p[j] > 1.0 + 1e-12) {
        return Ok(Membership::NonMember {
            reason: NonMemberReason::EdgeAxiom { edge: (i, j) },
        });
    }

    // Variable Q = diag-extension of Y + tI with Q[t][t] = t.
    let order = n + 2;
    let t = n + 1;
    let mut obj = SymMatrix::zeros(order);
    obj.set(t, t, 1.0);
    let mut prob = SdpProblem::new(obj, Sense::Minimize);
    let shifted = |i: usize, b: f64, prob: &mut SdpProblem| {
        let mut a = SymMatrix::zeros(order);
        a.set(i, i, 1.0);
        a.set(t, t, -1.0);
        prob.push(a, b);
    };
    shifted(0, 1.0, &mut prob);
    for (i, &pi) in p.iter().enumerate() {
        shifted(i + 1, pi, &mut prob);
        prob.push_entry(0, i + 1, pi);
    }
    for &(i, j) in g.edges() {
        prob.push_entry(i + 1, j + 1, 0.0);
    }
    for k in 0..t {
        prob.push_entry(k, t, 0.0);
    }

    let sol = solve_sdp(&prob, (tol * 1e-2).min(DEFAULT_TOL), DEFAULT_MAX_ITER)?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::Numeric(format!(
            "membership SDP ended with status {}",
            sol.status
        )));
    }
    let shift = sol.x.get(t, t);
    if shift <= tol {
        let certificate = SymMatrix::from_fn(n + 1, |i, j| {
            if i == j {
                sol.x.get(i, j) - shift
            } else {
                sol.x.get(i, j)
            }
        });
        Ok(Membership::Member { certificate })
    } else {
        Ok(Membership::NonMember {
            reason: NonMemberReason::Infeasible { shift },
        })
    }
}
