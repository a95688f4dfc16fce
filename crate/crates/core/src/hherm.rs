//! Hyperhermitian quaternionic matrices and their Moore spectral data.
//!
//! Moore eigenvalues are obtained from the complex adjoint: writing each
//! entry as `q = a + b j` with `a, b ∈ C`, the matrix `Q = A + B j` maps to
//! the `2k × 2k` hermitian matrix `[[A, B], [-B̄, Ā]]`, whose spectrum is the
//! Moore spectrum with every eigenvalue doubled. A quaternionic vector
//! `u = x + y j` corresponds to the complex vector `(x, -ȳ)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::quat::Quaternion;

/// Largest size accepted for a hyperhermitian matrix.
pub const MAX_DIM: usize = 8;
/// Tolerance for the hyperhermitian symmetry check, relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Relative gap (to the spectral radius) above which Moore pairing fails.
pub const PAIRING_TOL: f64 = 1e-6;
/// Reconstruction residual accepted from [`sp_diagonalize`].
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
/// Slack allowed beyond `|λ| <= 1` before a tuple is rejected; entries are then clamped.
pub const LAMBDA_RANGE_TOL: f64 = 1e-9;
/// Relative default threshold for [`moore_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Dense quaternionic matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::ONE;
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Quaternion,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "quaternionic matmul shape mismatch");
        QMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut s = Quaternion::ZERO;
            for l in 0..self.cols {
                s += self[(i, l)] * other[(l, j)];
            }
            s
        })
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &QMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Conjugates every entry by a unit quaternion: `ξ Q ξ̄`.
    pub fn conjugate_entries(&self, xi: Quaternion) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |i, j| xi * self[(i, j)] * xi.conj())
    }

    /// Real `4r × 4c` matrix of left multiplication on `H^c = R^{4c}`.
    pub fn real_representation(&self) -> Vec<Vec<f64>> {
        let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
        let mut out = vec![vec![0.0; 4 * self.cols]; 4 * self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (col, e) in basis.iter().enumerate() {
                    let image = (self[(i, j)] * *e).to_array();
                    for (row, x) in image.iter().enumerate() {
                        out[4 * i + row][4 * j + col] = *x;
                    }
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.data[i * self.cols + j]
    }
}

/// `k × k` quaternionic matrix with `Q* = Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct HHMatrix {
    inner: QMatrix,
}

impl HHMatrix {
    /// Validates hyperhermitian symmetry and real diagonal, then symmetrises exactly.
    pub fn new(m: QMatrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::Structural(format!(
                "hyperhermitian matrix must be square, got {}x{}",
                m.rows, m.cols
            )));
        }
        let k = m.rows;
        if k == 0 || k > MAX_DIM {
            return Err(Error::UnsupportedDimension {
                k,
                hint: format!("hyperhermitian matrices are supported for 1 <= k <= {MAX_DIM}"),
            });
        }
        let tol = HERMITIAN_TOL * m.max_abs().max(1.0);
        for i in 0..k {
            for j in 0..k {
                let defect = (m[(j, i)] - m[(i, j)].conj()).norm();
                if defect > tol {
                    return Err(Error::Structural(format!(
                        "entry ({i},{j}) violates q_ji = conj(q_ij) by {defect:e}"
                    )));
                }
            }
        }
        let sym = QMatrix::from_fn(k, k, |i, j| {
            if i == j {
                Quaternion::real(m[(i, i)].a)
            } else {
                (m[(i, j)] + m[(j, i)].conj()).scale(0.5)
            }
        });
        Ok(Self { inner: sym })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            inner: QMatrix::identity(k),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.rows
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.inner[(i, j)]
    }

    /// `A* Q A` for an arbitrary `k × m` quaternionic matrix `A`.
    pub fn congruence(&self, a: &QMatrix) -> HHMatrix {
        let m = a.adjoint().matmul(&self.inner).matmul(a);
        HHMatrix::new(m).expect("congruence preserves hyperhermitian symmetry")
    }

    pub fn conjugate_entries(&self, xi: Quaternion) -> HHMatrix {
        HHMatrix {
            inner: self.inner.conjugate_entries(xi),
        }
    }
}

/// Moore eigenvalues together with a diagonalizing `A ∈ Sp(k)`, `Q = A* D A`.
#[derive(Debug, Clone)]
pub struct MooreSpectrum {
    pub eigenvalues: Vec<f64>,
    pub unitary: QMatrix,
}

impl MooreSpectrum {
    pub fn reconstruct(&self) -> QMatrix {
        let k = self.eigenvalues.len();
        let d = QMatrix::from_fn(k, k, |i, j| {
            if i == j {
                Quaternion::real(self.eigenvalues[i])
            } else {
                Quaternion::ZERO
            }
        });
        self.unitary.adjoint().matmul(&d).matmul(&self.unitary)
    }
}

fn split(q: Quaternion) -> (Complex64, Complex64) {
    // q = (a + b i) + (c + d i) j
    (Complex64::new(q.a, q.b), Complex64::new(q.c, q.d))
}

/// `2k × 2k` complex hermitian matrix `[[A, B], [-B̄, Ā]]` for `Q = A + B j`.
pub fn complex_adjoint(q: &HHMatrix) -> Vec<Vec<Complex64>> {
    let k = q.dim();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); 2 * k]; 2 * k];
    for i in 0..k {
        for j in 0..k {
            let (a, b) = split(q.get(i, j));
            out[i][j] = a;
            out[i][k + j] = b;
            out[k + i][j] = -b.conj();
            out[k + i][k + j] = a.conj();
        }
    }
    out
}

/// Complex vector `(x, -ȳ)` representing the quaternionic vector `u = x + y j`.
fn embed(u: &[Quaternion]) -> Vec<Complex64> {
    let k = u.len();
    let mut v = vec![Complex64::new(0.0, 0.0); 2 * k];
    for (i, q) in u.iter().enumerate() {
        let (x, y) = split(*q);
        v[i] = x;
        v[k + i] = -y.conj();
    }
    v
}

fn unembed(v: &[Complex64]) -> Vec<Quaternion> {
    let k = v.len() / 2;
    (0..k)
        .map(|i| {
            let x = v[i];
            let y = -v[k + i].conj();
            Quaternion::new(x.re, x.im, y.re, y.im)
        })
        .collect()
}

fn cdot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn pair_eigenvalues(doubled: &[f64]) -> Result<Vec<f64>> {
    let radius = doubled.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut out = Vec::with_capacity(doubled.len() / 2);
    for pair in doubled.chunks(2) {
        let gap = (pair[0] - pair[1]).abs();
        if gap > PAIRING_TOL * radius {
            return Err(Error::NumericalDegeneracy(format!(
                "complex adjoint eigenvalues {} and {} do not pair (gap {gap:e})",
                pair[0], pair[1]
            )));
        }
        out.push(0.5 * (pair[0] + pair[1]));
    }
    Ok(out)
}

/// Moore eigenvalues, sorted in descending order.
pub fn moore_eigenvalues(q: &HHMatrix) -> Result<Vec<f64>> {
    let (vals, _) = linalg::hermitian_eigen(&complex_adjoint(q));
    pair_eigenvalues(&vals)
}

/// Moore determinant, the product of the Moore eigenvalues.
pub fn moore_det(q: &HHMatrix) -> Result<f64> {
    Ok(moore_eigenvalues(q)?.iter().product())
}

/// Number of Moore eigenvalues with absolute value above `tol`.
pub fn moore_rank(q: &HHMatrix, tol: f64) -> Result<usize> {
    Ok(moore_eigenvalues(q)?
        .iter()
        .filter(|e| e.abs() > tol)
        .count())
}

/// Diagonalizes `Q = A* D A` with `A ∈ Sp(k)`.
///
/// Complex eigenvectors are taken in order of decreasing eigenvalue; each is
/// made quaternionic-orthogonal to the vectors already chosen (their complex
/// span together with the `j`-partners) and accepted if enough of it remains.
/// Within a degenerate eigenspace this picks one representative per
/// quaternionic dimension.
pub fn sp_diagonalize(q: &HHMatrix) -> Result<MooreSpectrum> {
    let k = q.dim();
    let (vals, vecs) = linalg::hermitian_eigen(&complex_adjoint(q));
    let moore = pair_eigenvalues(&vals)?;
    let mut columns: Vec<Vec<Quaternion>> = Vec::with_capacity(k);
    let mut eigen: Vec<f64> = Vec::with_capacity(k);
    // complex orthonormal basis of the span of accepted u and u·j
    let mut span: Vec<Vec<Complex64>> = Vec::new();
    for (idx, &val) in vals.iter().enumerate() {
        if columns.len() == k {
            break;
        }
        let mut v: Vec<Complex64> = (0..2 * k).map(|r| vecs[r][idx]).collect();
        for _ in 0..2 {
            for b in &span {
                let c = cdot(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let n = cdot(&v, &v).re.sqrt();
        if n < 0.5 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= n);
        let u = unembed(&v);
        let partner = embed(&u.iter().map(|x| *x * Quaternion::J).collect::<Vec<_>>());
        span.push(v);
        span.push(partner);
        columns.push(u);
        eigen.push(val);
    }
    if columns.len() != k {
        return Err(Error::NumericalDegeneracy(format!(
            "assembled only {} of {k} quaternionic eigenvectors",
            columns.len()
        )));
    }
    // U has the eigenvectors as columns; Q = U D U*, so A = U*.
    let u = QMatrix::from_fn(k, k, |i, j| columns[j][i]);
    let spectrum = MooreSpectrum {
        eigenvalues: eigen,
        unitary: u.adjoint(),
    };
    let residual = spectrum.reconstruct().distance(q.matrix());
    if residual > RECONSTRUCTION_TOL * q.matrix().max_abs().max(1.0) {
        return Err(Error::NumericalDegeneracy(format!(
            "Sp(k) diagonalization residual {residual:e}"
        )));
    }
    debug_assert!(spectrum
        .eigenvalues
        .iter()
        .zip(&moore)
        .all(|(a, b)| (a - b).abs() <= 1e-6 * (1.0 + b.abs())));
    Ok(spectrum)
}

/// Pair `(p, q)` with `p < q`, 0-based, listed in the order `12, 13, 14, 23, 24, 34, …`.
pub fn pair_list(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for p in 0..k {
        for q in p + 1..k {
            out.push((p, q));
        }
    }
    out
}

/// Real tuple `λ_{pq}` (`p < q`) defining the matrix `M_λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaTuple {
    k: usize,
    values: Vec<f64>,
}

impl LambdaTuple {
    /// Builds a tuple for `0 <= k <= 4` from its `k(k-1)/2` entries in pair order.
    pub fn new(k: usize, values: Vec<f64>) -> Result<Self> {
        if k > 4 {
            return Err(Error::UnsupportedDimension {
                k,
                hint: "lambda tuples exist for k <= 4; use the orthogonal complement".into(),
            });
        }
        let expected = k * k.saturating_sub(1) / 2;
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: values.len(),
            });
        }
        if let Some(bad) = values
            .iter()
            .find(|x| !x.is_finite() || x.abs() > 1.0 + LAMBDA_RANGE_TOL)
        {
            return Err(Error::InadmissibleTuple(format!(
                "entry {bad} lies outside [-1, 1]"
            )));
        }
        let values = values.into_iter().map(|x| x.clamp(-1.0, 1.0)).collect();
        Ok(Self { k, values })
    }

    /// Tuple `λ_{pq} = cos(θ_p - θ_q)`.
    pub fn from_angles(theta: &[f64]) -> Result<Self> {
        let k = theta.len();
        let values = pair_list(k)
            .into_iter()
            .map(|(p, q)| (theta[p] - theta[q]).cos())
            .collect();
        Self::new(k, values)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `λ_{pq}` for 0-based `p != q`; symmetric.
    pub fn get(&self, p: usize, q: usize) -> f64 {
        let (a, b) = if p < q { (p, q) } else { (q, p) };
        self.values[pair_index(self.k, a, b)]
    }

    pub fn max_abs_diff(&self, other: &LambdaTuple) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Position of pair `(p, q)`, `p < q`, inside [`pair_list`].
pub fn pair_index(k: usize, p: usize, q: usize) -> usize {
    debug_assert!(p < q && q < k);
    p * k - p * (p + 1) / 2 + (q - p - 1)
}

/// Letter of `M_λ` at 0-based pair `(p, q)`: `(axis, sign)` with axis 0, 1, 2 for i, j, k.
pub fn pattern(p: usize, q: usize) -> (usize, f64) {
    match (p, q) {
        (0, 1) => (0, 1.0),
        (0, 2) => (1, 1.0),
        (0, 3) => (2, 1.0),
        (1, 2) => (2, -1.0),
        (1, 3) => (1, 1.0),
        (2, 3) => (0, -1.0),
        _ => panic!("M_lambda pattern only defined for k <= 4"),
    }
}

fn check_mlambda_dim(k: usize) -> Result<()> {
    if (2..=4).contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension {
            k,
            hint: "M_lambda is defined for k in {2, 3, 4}".into(),
        })
    }
}

/// The canonical matrix `M_λ`: unit diagonal, `q12 = λ12 i`, `q13 = λ13 j`,
/// `q14 = λ14 k`, `q23 = -λ23 k`, `q24 = λ24 j`, `q34 = -λ34 i`.
pub fn mlambda(lam: &LambdaTuple) -> Result<HHMatrix> {
    let k = lam.k();
    check_mlambda_dim(k)?;
    let axes = [Quaternion::I, Quaternion::J, Quaternion::K];
    let mut m = QMatrix::identity(k);
    for (p, q) in pair_list(k) {
        let (axis, sign) = pattern(p, q);
        let entry = axes[axis].scale(sign * lam.get(p, q));
        m[(p, q)] = entry;
        m[(q, p)] = entry.conj();
    }
    HHMatrix::new(m)
}

/// Closed-form polynomial for `det M_λ`, `k ∈ {2, 3, 4}`.
pub fn mlambda_det_closed(lam: &LambdaTuple) -> Result<f64> {
    let k = lam.k();
    check_mlambda_dim(k)?;
    let l = |p: usize, q: usize| lam.get(p - 1, q - 1);
    Ok(match k {
        2 => 1.0 - l(1, 2).powi(2),
        3 => {
            let (a, b, c) = (l(1, 2), l(1, 3), l(2, 3));
            1.0 - a * a - b * b - c * c + 2.0 * a * b * c
        }
        _ => {
            let (l12, l13, l14, l23, l24, l34) =
                (l(1, 2), l(1, 3), l(1, 4), l(2, 3), l(2, 4), l(3, 4));
            1.0 - l12 * l12 - l13 * l13 - l14 * l14 - l23 * l23 - l24 * l24 - l34 * l34
                + 2.0 * l23 * l34 * l24
                + 2.0 * l12 * l23 * l13
                + 2.0 * l12 * l24 * l14
                + 2.0 * l13 * l34 * l14
                + l12 * l12 * l34 * l34
                + l23 * l23 * l14 * l14
                + l13 * l13 * l24 * l24
                - 2.0 * l12 * l23 * l34 * l14
                - 2.0 * l12 * l24 * l13 * l34
                - 2.0 * l13 * l24 * l23 * l14
        }
    })
}

/// Size of the Moore spectrum of `M_λ` beyond its two largest eigenvalues.
///
/// Returns the largest absolute value among the eigenvalues after the top two
/// (zero for `k = 2`); this vanishes exactly when `M_λ` has Moore rank at most 2.
pub fn rank2_residual(lam: &LambdaTuple) -> Result<f64> {
    let m = mlambda(lam)?;
    let ev = moore_eigenvalues(&m)?;
    Ok(ev.iter().skip(2).fold(0.0, |acc: f64, e| acc.max(e.abs())))
}
