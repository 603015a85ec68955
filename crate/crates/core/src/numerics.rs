//! Dense symmetric and Hermitian linear algebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default relative cutoff separating numerically zero eigenvalues.
pub const DEFAULT_RANK_TOL: f64 = 1e-6;

/// Dense real symmetric matrix; `m[(i, j)] == m[(j, i)]` holds bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    /// Builds from the upper triangle of `f(i, j)`, `i <= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self(m)
    }

    /// Takes `(m + mᵀ) / 2`.
    pub fn symmetrize(m: &DMatrix<f64>) -> Self {
        assert!(m.is_square(), "symmetrize needs a square matrix");
        Self::from_fn(m.nrows(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
    }

    /// Accepts `m` only when it is square and exactly symmetric.
    pub fn try_from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidParameter(format!(
                "matrix is {}x{}, not square",
                m.nrows(),
                m.ncols()
            )));
        }
        let n = m.nrows();
        for i in 0..n {
            for j in i + 1..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::InvalidParameter(format!(
                        "matrix not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter(
                "rows have inconsistent length".into(),
            ));
        }
        Self::try_from_matrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.0[(i, j)] = v;
        self.0[(j, i)] = v;
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// `tr(self * other)`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(&self.0 * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.0
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

/// Eigendecomposition with eigenvalues sorted in descending order.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: DMatrix<f64>,
}

impl SymEigen {
    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

pub fn sym_eig(a: &SymMatrix) -> Result<SymEigen> {
    if !a.is_finite() {
        return Err(Error::Numeric("matrix has non-finite entries".into()));
    }
    let n = a.order();
    if n == 0 {
        return Ok(SymEigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::new(a.0.clone());
    let mut idx: Vec<usize> = (0..n).collect();
    // Stable sort keeps index order among equal eigenvalues.
    idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    Ok(SymEigen { values, vectors })
}

/// Eigenvalues only, descending.
pub fn sym_eigenvalues(a: &SymMatrix) -> Result<Vec<f64>> {
    if !a.is_finite() {
        return Err(Error::Numeric("matrix has non-finite entries".into()));
    }
    let mut v: Vec<f64> = a.0.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

/// Factors a PSD matrix as `V Vᵀ` with `V` of shape `N x r`.
///
/// `r` counts eigenvalues above `rank_tol * λ_max`; the remaining ones are
/// dropped, provided none is below `-rank_tol * λ_max`.
pub fn gram_decompose(x: &SymMatrix, rank_tol: f64) -> Result<DMatrix<f64>> {
    let eig = sym_eig(x)?;
    let n = x.order();
    let lmax = eig.max().max(0.0);
    let cut = rank_tol * lmax;
    if eig.min() < -cut {
        return Err(Error::NotPsd {
            min_eig: eig.min(),
            max_eig: eig.max(),
        });
    }
    let r = eig.values.iter().take_while(|&&l| l > cut).count();
    Ok(DMatrix::from_fn(n, r, |i, k| {
        eig.vectors[(i, k)] * eig.values[k].sqrt()
    }))
}

/// Number of eigenvalues above `rank_tol * λ_max`.
pub fn numerical_rank(x: &SymMatrix, rank_tol: f64) -> Result<usize> {
    let values = sym_eigenvalues(x)?;
    let cut = rank_tol * values.first().copied().unwrap_or(0.0).max(0.0);
    Ok(values.iter().filter(|&&l| l > cut).count())
}

/// Largest eigenvalue of `Σ v vᴴ` over the given vectors.
pub fn lambda_max_of_sum(vectors: &[DVector<Complex64>]) -> Result<f64> {
    let Some(first) = vectors.first() else {
        return Ok(0.0);
    };
    let d = first.len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != d) {
        return Err(Error::InvalidParameter(format!(
            "vectors of dimension {d} and {} mixed",
            bad.len()
        )));
    }
    if vectors
        .iter()
        .any(|v| v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()))
    {
        return Err(Error::Numeric("vector has non-finite entries".into()));
    }
    let mut sum = DMatrix::<Complex64>::zeros(d, d);
    for v in vectors {
        sum += v * v.adjoint();
    }
    // enforce exact Hermitian symmetry before the solver sees it
    let herm = DMatrix::from_fn(d, d, |i, j| 0.5 * (sum[(i, j)] + sum[(j, i)].conj()));
    Ok(herm
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Real vector lifted to complex.
pub fn complexify(v: &DVector<f64>) -> DVector<Complex64> {
    v.map(|x| Complex64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, rng: &mut impl Rng) -> SymMatrix {
        SymMatrix::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn diag_and_swap() {
        let e = sym_eig(&SymMatrix::from_diagonal(&[1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![2.0, 1.0]);
        let e = sym_eig(&SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 6, 15] {
            let a = random_sym(n, &mut rng);
            let e = sym_eig(&a).unwrap();
            let lam = DMatrix::from_diagonal(&DVector::from_vec(e.values.clone()));
            let rec = &e.vectors * lam * e.vectors.transpose();
            let scale = a.frobenius_norm().max(1.0);
            assert!((a.matrix() - rec).norm() <= 1e-10 * scale);
            let gram = e.vectors.transpose() * &e.vectors;
            assert!((gram - DMatrix::identity(n, n)).norm() <= 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            assert!((e.values.iter().sum::<f64>() - a.trace()).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn non_finite_rejected() {
        let mut a = SymMatrix::zeros(2);
        a.set(0, 1, f64::NAN);
        assert!(matches!(sym_eig(&a), Err(Error::Numeric(_))));
    }

    #[test]
    fn gram_of_rank_one() {
        let x = SymMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let v = gram_decompose(&x, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(v.ncols(), 1);
        assert!((v[(0, 0)].abs() - 1.0).abs() < 1e-12);
        assert!((v[(0, 0)] - v[(1, 0)]).abs() < 1e-12);
        assert!((&v * v.transpose() - x.matrix()).norm() < 1e-12);
    }

    #[test]
    fn gram_identity_and_not_psd() {
        assert_eq!(
            gram_decompose(&SymMatrix::identity(3), 1e-6)
                .unwrap()
                .ncols(),
            3
        );
        let bad = SymMatrix::from_diagonal(&[1.0, -0.1]);
        assert!(matches!(
            gram_decompose(&bad, 1e-6),
            Err(Error::NotPsd { .. })
        ));
        // tiny negative eigenvalue is clamped
        let ok = SymMatrix::from_diagonal(&[1.0, -1e-9]);
        assert_eq!(gram_decompose(&ok, 1e-6).unwrap().ncols(), 1);
    }

    #[test]
    fn lambda_max_basics() {
        let d = 4;
        let basis: Vec<_> = (0..d)
            .map(|i| complexify(&DVector::from_fn(d, |j, _| if i == j { 1.0 } else { 0.0 })))
            .collect();
        assert!((lambda_max_of_sum(&basis).unwrap() - 1.0).abs() < 1e-12);
        let u = complexify(&DVector::from_vec(vec![0.6, 0.8, 0.0]));
        let copies = vec![u; 5];
        assert!((lambda_max_of_sum(&copies).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(lambda_max_of_sum(&[]).unwrap(), 0.0);
        let mixed = vec![DVector::zeros(2), DVector::zeros(3)];
        assert!(matches!(
            lambda_max_of_sum(&mixed),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn lambda_max_handles_complex_entries() {
        let i = Complex64::new(0.0, 1.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = DVector::from_vec(vec![Complex64::new(s, 0.0), i * s]);
        let b = DVector::from_vec(vec![Complex64::new(s, 0.0), -i * s]);
        // orthogonal pair: sum is the identity
        assert!((lambda_max_of_sum(&[a.clone(), b]).unwrap() - 1.0).abs() < 1e-12);
        assert!((lambda_max_of_sum(&[a.clone(), a]).unwrap() - 2.0).abs() < 1e-12);
    }
}
