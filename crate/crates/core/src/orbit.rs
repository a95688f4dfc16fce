//! Orbits of `Sp(2)Sp(1)` on the real Grassmannians `Gr_k(H^2)`, `k = 2, 3, 4`.
//!
//! A `k`-plane is classified by rotating an orthonormal frame into the
//! eigenbasis of `ψ_V = Re Q²`, where `Q` is the quaternionic Gram matrix,
//! and then conjugating all entries by a unit quaternion so that `Q` takes
//! the shape `M_λ`. The tuple `λ` is defined up to `Z₂ᵏ × S_k`; we return
//! the lexicographically greatest representative.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hherm::{self, pair_list, pattern, HHMatrix, LambdaTuple, QMatrix};
use crate::linalg;
use crate::quat::{kform, rotation_aligning, HVector, ImQuaternion, Quaternion};

/// Orthonormality tolerance for frames.
pub const FRAME_TOL: f64 = 1e-10;
/// Default bound on the off-pattern residual accepted by [`classify`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;
/// Two ψ eigenvalues closer than this fraction of the trace are treated as equal.
pub const PSI_GAP_TOL: f64 = 1e-6;
/// Alignment targets shorter than this are ignored.
const TARGET_NOISE: f64 = 1e-9;
const FALLBACK_RESTARTS: usize = 8;
const FALLBACK_SWEEPS: usize = 40;
const LINE_GRID: usize = 24;
const GOLDEN_STEPS: usize = 64;

/// Orthonormal `k`-frame in `H^2 = R^8`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    columns: Vec<[f64; 8]>,
}

#[derive(Serialize, Deserialize)]
struct FrameJson {
    k: usize,
    columns: Vec<Vec<f64>>,
}

impl Frame {
    /// Accepts `0 <= k <= 8` columns orthonormal within [`FRAME_TOL`].
    pub fn new(columns: Vec<[f64; 8]>) -> Result<Self> {
        let k = columns.len();
        if k > 8 {
            return Err(Error::UnsupportedDimension {
                k,
                hint: "a frame in R^8 has at most 8 columns".into(),
            });
        }
        let mut worst = (0.0, 0, 0);
        for i in 0..k {
            for j in 0..k {
                let d = linalg::dot(&columns[i], &columns[j]);
                let defect = (d - if i == j { 1.0 } else { 0.0 }).abs();
                if defect.is_nan() || defect > worst.0 {
                    worst = (defect, i, j);
                }
            }
        }
        let (defect, i, j) = worst;
        if defect.is_nan() || defect > FRAME_TOL {
            return Err(Error::Precondition(format!(
                "frame is not orthonormal: Gram defect max |U^T U - I| = {defect:e} at entry ({}, {})",
                i + 1,
                j + 1
            )));
        }
        Ok(Self { columns })
    }

    /// The first `k` coordinate vectors.
    pub fn standard(k: usize) -> Result<Self> {
        Self::new(
            (0..k)
                .map(|i| {
                    let mut e = [0.0; 8];
                    e[i] = 1.0;
                    e
                })
                .collect(),
        )
    }

    /// Gram-Schmidt orthonormalization of arbitrary columns.
    pub fn orthonormalize(columns: &[[f64; 8]]) -> Result<Self> {
        let vecs: Vec<Vec<f64>> = columns.iter().map(|c| c.to_vec()).collect();
        let ortho = linalg::gram_schmidt(&vecs)
            .ok_or_else(|| Error::NumericalDegeneracy("columns are linearly dependent".into()))?;
        Self::new(ortho.into_iter().map(to_arr8).collect())
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[[f64; 8]] {
        &self.columns
    }

    pub fn hvector(&self, i: usize) -> HVector {
        HVector::from_real(&self.columns[i])
    }

    /// Orthonormal basis of the orthogonal complement, as a frame of `8 - k` columns.
    pub fn complement(&self) -> Result<Frame> {
        let mut basis: Vec<Vec<f64>> = self.columns.iter().map(|c| c.to_vec()).collect();
        let project_out = |basis: &[Vec<f64>], mut v: Vec<f64>| {
            for _ in 0..2 {
                for b in basis {
                    let c = linalg::dot(b, &v);
                    v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            v
        };
        while basis.len() < 8 {
            // the standard axis farthest from the current span (norm at least 1/sqrt(8))
            let v = (0..8)
                .map(|e| {
                    let mut v = vec![0.0; 8];
                    v[e] = 1.0;
                    project_out(&basis, v)
                })
                .max_by(|a, b| linalg::norm(a).total_cmp(&linalg::norm(b)))
                .expect("eight axes");
            let n = linalg::norm(&v);
            basis.push(v.into_iter().map(|x| x / n).collect());
        }
        Frame::new(basis.into_iter().skip(self.k()).map(to_arr8).collect())
    }

    /// Frame whose columns are `Σ_j u_j P_{ji}` for a real `k × k` orthogonal `P`.
    pub fn rotate(&self, p: &[Vec<f64>]) -> Frame {
        let k = self.k();
        let columns = (0..k)
            .map(|i| {
                let mut c = [0.0; 8];
                for j in 0..k {
                    for (x, y) in c.iter_mut().zip(&self.columns[j]) {
                        *x += p[j][i] * y;
                    }
                }
                c
            })
            .collect();
        Frame { columns }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FrameJson {
            k: self.k(),
            columns: self.columns.iter().map(|c| c.to_vec()).collect(),
        })
        .expect("frame serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: FrameJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::Precondition(format!("malformed frame JSON: {e}")))?;
        if raw.columns.len() != raw.k {
            return Err(Error::DimensionMismatch {
                expected: raw.k,
                got: raw.columns.len(),
            });
        }
        let mut cols = Vec::with_capacity(raw.k);
        for c in raw.columns {
            if c.len() != 8 {
                return Err(Error::DimensionMismatch {
                    expected: 8,
                    got: c.len(),
                });
            }
            cols.push(to_arr8(c));
        }
        Frame::new(cols)
    }
}

fn to_arr8(v: Vec<f64>) -> [f64; 8] {
    let mut a = [0.0; 8];
    a.copy_from_slice(&v);
    a
}

/// Quaternionic Gram matrix `Q = (K(u_i, u_j))`.
pub fn gram(f: &Frame) -> HHMatrix {
    let k = f.k();
    let cols: Vec<HVector> = (0..k).map(|i| f.hvector(i)).collect();
    let m = QMatrix::from_fn(k, k, |i, j| kform(cols[i], cols[j]));
    HHMatrix::new(m).expect("Gram matrices are hyperhermitian")
}

/// Matrix of `ψ_V` in the frame's basis, `Re Q²`.
pub fn psi_matrix(f: &Frame) -> Vec<Vec<f64>> {
    let q = gram(f);
    let k = f.k();
    let q2 = q.matrix().matmul(q.matrix());
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| 0.5 * (q2[(i, j)].a + q2[(j, i)].a))
                .collect()
        })
        .collect()
}

/// Orbit invariant of a `k`-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaClass {
    pub lam: LambdaTuple,
    pub residual: f64,
    pub degenerate: bool,
}

#[derive(Serialize, Deserialize)]
struct LambdaClassJson {
    k: usize,
    lambda: BTreeMap<String, f64>,
    residual: f64,
    degenerate: bool,
}

/// `"12"`, `"13"`, ... labels of the pairs, 1-based.
pub fn pair_labels(k: usize) -> Vec<String> {
    pair_list(k)
        .into_iter()
        .map(|(p, q)| format!("{}{}", p + 1, q + 1))
        .collect()
}

pub fn lambda_to_map(lam: &LambdaTuple) -> BTreeMap<String, f64> {
    pair_labels(lam.k())
        .into_iter()
        .zip(lam.values().iter().copied())
        .collect()
}

/// Parses `{"12": x, "13": y, ...}` into a tuple for the given `k`.
pub fn lambda_from_map(k: usize, map: &BTreeMap<String, f64>) -> Result<LambdaTuple> {
    let labels = pair_labels(k);
    if map.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            got: map.len(),
        });
    }
    let values = labels
        .iter()
        .map(|l| {
            map.get(l)
                .copied()
                .ok_or_else(|| Error::Precondition(format!("missing lambda entry \"{l}\"")))
        })
        .collect::<Result<Vec<f64>>>()?;
    LambdaTuple::new(k, values)
}

impl LambdaClass {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(LambdaClassJson {
            k: self.lam.k(),
            lambda: lambda_to_map(&self.lam),
            residual: self.residual,
            degenerate: self.degenerate,
        })
        .expect("class serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: LambdaClassJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::Precondition(format!("malformed class JSON: {e}")))?;
        Ok(Self {
            lam: lambda_from_map(raw.k, &raw.lambda)?,
            residual: raw.residual,
            degenerate: raw.degenerate,
        })
    }
}

fn check_classify_dim(k: usize) -> Result<()> {
    if (2..=4).contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension {
            k,
            hint: if k > 4 {
                format!(
                    "classify the orthogonal complement (a {}-plane) instead",
                    8 - k
                )
            } else {
                "orbit classification needs k in {2, 3, 4}".into()
            },
        })
    }
}

/// Entries grouped by the imaginary axis they occupy in `M_λ`.
fn axis_groups(k: usize) -> [Vec<(usize, usize)>; 3] {
    let mut groups: [Vec<(usize, usize)>; 3] = Default::default();
    for (p, q) in pair_list(k) {
        groups[pattern(p, q).0].push((p, q));
    }
    groups
}

/// Sp(1) rotation bringing the Gram matrix closest to the `M_λ` shape.
fn alignment(q: &HHMatrix) -> Quaternion {
    let k = q.dim();
    // sources of rotation_aligning are (i, j, -k)
    let source_sign = [1.0, 1.0, -1.0];
    let mut targets = [ImQuaternion::ZERO; 3];
    for (axis, group) in axis_groups(k).iter().enumerate() {
        let best = group
            .iter()
            .map(|&(p, r)| {
                let sign = pattern(p, r).1 * source_sign[axis];
                q.get(p, r).im().scale(sign)
            })
            .max_by(|a, b| a.norm().total_cmp(&b.norm()));
        if let Some(t) = best {
            targets[axis] = t;
        }
    }
    let scale = targets.iter().map(|t| t.norm()).fold(0.0, f64::max);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| targets[b].norm().total_cmp(&targets[a].norm()));
    // keep the two longest targets, made exactly orthogonal; orientation fixes the third
    let mut clean = [ImQuaternion::ZERO; 3];
    let first = targets[order[0]];
    if first.norm() <= TARGET_NOISE * scale.max(1.0) {
        return Quaternion::ONE;
    }
    clean[order[0]] = first;
    let u = first.normalized();
    let second = targets[order[1]] - u.scale(u.dot(targets[order[1]]));
    if second.norm() > TARGET_NOISE * scale.max(1.0) {
        clean[order[1]] = second;
    }
    rotation_aligning(clean).expect("orthogonalized targets are admissible")
}

/// Reads `λ` off a Gram matrix after conjugation by `ξ`; returns the off-pattern residual.
fn read_off(q: &HHMatrix, xi: Quaternion) -> (Vec<f64>, f64) {
    let axes = [Quaternion::I, Quaternion::J, Quaternion::K].map(|e| (xi * e * xi.conj()).im());
    let mut values = Vec::new();
    let mut residual = 0.0;
    for (p, r) in pair_list(q.dim()) {
        let (axis, sign) = pattern(p, r);
        let entry = q.get(p, r);
        let lam = sign * entry.im().dot(axes[axis]);
        let fit = axes[axis].scale(sign * lam).to_quaternion();
        residual += (entry - fit).norm_sqr();
        values.push(lam);
    }
    (values, residual)
}

/// Smooth measure of how far the Gram entries are from lying on three orthogonal axes.
fn structure_defect(q: &HHMatrix) -> f64 {
    let groups = axis_groups(q.dim());
    let im = |(p, r): (usize, usize)| q.get(p, r).im();
    let mut f = 0.0;
    for a in 0..3 {
        for (x, &e) in groups[a].iter().enumerate() {
            f += q.get(e.0, e.1).a.powi(2);
            for &e2 in &groups[a][x + 1..] {
                let c = crate::quat::im_cross(im(e), im(e2));
                f += c.dot(c);
            }
            for b in a + 1..3 {
                for &e2 in &groups[b] {
                    f += im(e).dot(im(e2)).powi(2);
                }
            }
        }
    }
    f
}

fn givens(k: usize, p: usize, q: usize, theta: f64) -> Vec<Vec<f64>> {
    let mut g = linalg::identity(k);
    let (s, c) = theta.sin_cos();
    g[p][p] = c;
    g[q][q] = c;
    g[p][q] = s;
    g[q][p] = -s;
    g
}

/// Minimizes a π-periodic function of one angle: coarse grid, then golden section.
fn minimize_angle(f: impl Fn(f64) -> f64) -> (f64, f64) {
    use std::f64::consts::PI;
    let step = PI / LINE_GRID as f64;
    let (mut best_t, mut best_v) = (0.0, f(0.0));
    for n in 1..LINE_GRID {
        let t = -PI / 2.0 + n as f64 * step;
        let v = f(t);
        if v < best_v {
            best_t = t;
            best_v = v;
        }
    }
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best_t - step, best_t + step);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    let (t, v) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    if v < best_v {
        (t, v)
    } else {
        (best_t, best_v)
    }
}

/// Index blocks of (numerically) repeated eigenvalues, each of size at least 2.
fn repeated_blocks(eigenvalues: &[f64]) -> Vec<Vec<usize>> {
    let trace: f64 = eigenvalues.iter().map(|x| x.abs()).sum();
    let mut blocks: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..eigenvalues.len() {
        if (eigenvalues[i - 1] - eigenvalues[i]).abs() < PSI_GAP_TOL * trace.max(1e-300) {
            blocks.last_mut().unwrap().push(i);
        } else {
            blocks.push(vec![i]);
        }
    }
    blocks.retain(|b| b.len() > 1);
    blocks
}

/// Searches rotations mixing the given basis indices for a frame in `M_λ` shape.
fn rotation_search(frame: &Frame, blocks: &[Vec<usize>], rng: &mut ChaCha8Rng) -> Frame {
    let k = frame.k();
    let planes: Vec<(usize, usize)> = blocks
        .iter()
        .flat_map(|b| {
            b.iter()
                .enumerate()
                .flat_map(move |(x, &p)| b[x + 1..].iter().map(move |&q| (p, q)))
        })
        .collect();
    let mut best = frame.clone();
    let mut best_v = structure_defect(&gram(frame));
    for restart in 0..=FALLBACK_RESTARTS {
        let mut current = frame.clone();
        if restart > 0 {
            for &(p, q) in &planes {
                let t = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                current = current.rotate(&givens(k, p, q, t));
            }
        }
        let mut value = structure_defect(&gram(&current));
        for _ in 0..FALLBACK_SWEEPS {
            let before = value;
            for &(p, q) in &planes {
                let (t, v) = minimize_angle(|t| {
                    structure_defect(&gram(&current.rotate(&givens(k, p, q, t))))
                });
                if v < value {
                    current = current.rotate(&givens(k, p, q, t));
                    value = v;
                }
            }
            if value < 1e-28 || before - value <= 1e-20 * before.max(1e-300) {
                break;
            }
        }
        if value < best_v {
            best = current;
            best_v = value;
        }
        if best_v < 1e-24 {
            break;
        }
    }
    best
}

/// Classifies the span of `f` into its canonical orbit invariant `[λ]`.
pub fn classify(f: &Frame, tol: f64) -> Result<LambdaClass> {
    let k = f.k();
    check_classify_dim(k)?;
    let (psi_vals, psi_vecs) = linalg::symmetric_eigen(&psi_matrix(f));
    let eigen_frame = f.rotate(&psi_vecs);
    let q = gram(&eigen_frame);
    let (values, residual) = read_off(&q, alignment(&q));
    if residual <= tol {
        let lam = LambdaTuple::new(k, values)?;
        return Ok(LambdaClass {
            lam: canonicalize(&lam),
            residual,
            degenerate: false,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut blocks = repeated_blocks(&psi_vals);
    if blocks.is_empty() {
        blocks = vec![(0..k).collect()];
    }
    let mut attempts = vec![blocks];
    attempts.push(vec![(0..k).collect()]);
    let mut last = residual;
    for blocks in attempts {
        let candidate = rotation_search(&eigen_frame, &blocks, &mut rng);
        let q = gram(&candidate);
        let (values, residual) = read_off(&q, alignment(&q));
        if residual <= tol {
            let lam = LambdaTuple::new(k, values)?;
            return Ok(LambdaClass {
                lam: canonicalize(&lam),
                residual,
                degenerate: true,
            });
        }
        last = last.min(residual);
    }
    Err(Error::ClassificationFailure { residual: last })
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for perm in permutations(k - 1) {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, k - 1);
            out.push(p);
        }
    }
    out
}

/// All images `ε·σ·λ` under `Z₂ᵏ × S_k`.
pub fn group_orbit(lam: &LambdaTuple) -> Vec<LambdaTuple> {
    let k = lam.k();
    let pairs = pair_list(k);
    let mut out = Vec::with_capacity((1 << k) * (1..=k).product::<usize>());
    for sigma in permutations(k) {
        for mask in 0u32..(1 << k) {
            let eps = |p: usize| if mask >> p & 1 == 1 { -1.0 } else { 1.0 };
            let values = pairs
                .iter()
                .map(|&(p, q)| eps(p) * eps(q) * lam.get(sigma[p], sigma[q]))
                .collect();
            out.push(LambdaTuple::new(k, values).expect("group action preserves the range"));
        }
    }
    out
}

fn lex_cmp(a: &LambdaTuple, b: &LambdaTuple) -> std::cmp::Ordering {
    for (x, y) in a.values().iter().zip(b.values()) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// Lexicographically greatest element of the `Z₂ᵏ × S_k` orbit, in pair order.
pub fn canonicalize(lam: &LambdaTuple) -> LambdaTuple {
    group_orbit(lam)
        .into_iter()
        .map(|t| {
            // `x + 0.0` turns -0.0 into +0.0 so signed zeros compare equal
            LambdaTuple::new(t.k(), t.values().iter().map(|x| x + 0.0).collect())
                .expect("same range")
        })
        .max_by(lex_cmp)
        .expect("the group is nonempty")
}

/// Smallest max-norm distance between `a` and the group images of `b`.
pub fn class_distance(a: &LambdaTuple, b: &LambdaTuple) -> Result<f64> {
    if a.k() != b.k() {
        return Err(Error::DimensionMismatch {
            expected: a.k(),
            got: b.k(),
        });
    }
    Ok(group_orbit(b)
        .iter()
        .map(|t| a.max_abs_diff(t))
        .fold(f64::INFINITY, f64::min))
}

/// A frame whose Gram matrix is `M_λ`.
pub fn reconstruct(lam: &LambdaTuple, tol: f64) -> Result<Frame> {
    let k = lam.k();
    check_classify_dim(k)?;
    let m = hherm::mlambda(lam)?;
    let spectrum = hherm::sp_diagonalize(&m)?;
    let ev = &spectrum.eigenvalues;
    if let Some(neg) = ev.iter().find(|e| **e < -tol) {
        return Err(Error::InadmissibleTuple(format!(
            "M_lambda has negative Moore eigenvalue {neg:e}"
        )));
    }
    if let Some(extra) = ev.iter().skip(2).find(|e| e.abs() > tol) {
        return Err(Error::InadmissibleTuple(format!(
            "M_lambda has Moore rank above 2 (third eigenvalue {extra:e})"
        )));
    }
    let a = &spectrum.unitary;
    let d1 = ev[0].max(0.0).sqrt();
    let d2 = ev[1].max(0.0).sqrt();
    let columns: Vec<[f64; 8]> = (0..k)
        .map(|i| HVector::new(a[(0, i)].scale(d1), a[(1, i)].scale(d2)).to_real())
        .collect();
    let raw = Frame { columns };
    let err = gram(&raw).matrix().distance(m.matrix());
    if err > 1e-7 {
        return Err(Error::NumericalDegeneracy(format!(
            "reconstructed Gram matrix misses M_lambda by {err:e}"
        )));
    }
    Frame::orthonormalize(raw.columns())
}

/// The frame with columns `(cos θ_p, sin θ_p) · e_p`, `e = (1, i, j, k)`.
pub fn frame_from_angles(theta: &[f64]) -> Result<Frame> {
    let k = theta.len();
    check_classify_dim(k)?;
    let units = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let columns = theta
        .iter()
        .zip(units)
        .map(|(t, e)| HVector::new(e.scale(t.cos()), e.scale(t.sin())).to_real())
        .collect();
    Frame::new(columns)
}

/// Element `(g, ξ)` of `Sp(2) × Sp(1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub g: QMatrix,
    pub xi: Quaternion,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self {
            g: QMatrix::identity(2),
            xi: Quaternion::ONE,
        }
    }

    /// Validates `g*g = Id` and `|ξ| = 1` within `1e-10`.
    pub fn new(g: QMatrix, xi: Quaternion) -> Result<Self> {
        if g.rows() != 2 || g.cols() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: g.rows(),
            });
        }
        let defect = g.adjoint().matmul(&g).distance(&QMatrix::identity(2));
        if defect > 1e-10 || (xi.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::Precondition(format!(
                "not an element of Sp(2) x Sp(1) (defect {defect:e}, |xi| = {})",
                xi.norm()
            )));
        }
        Ok(Self { g, xi })
    }
}

impl GroupElement {
    /// `v ↦ g v ξ̄` on a single vector of `R^8 = H^2`.
    pub fn apply_vector(&self, x: &[f64; 8]) -> [f64; 8] {
        let g = &self.g;
        let v = HVector::from_real(x);
        HVector::new(
            g[(0, 0)] * v.v1 + g[(0, 1)] * v.v2,
            g[(1, 0)] * v.v1 + g[(1, 1)] * v.v2,
        )
        .right_mul(self.xi.conj())
        .to_real()
    }
}

/// `v ↦ g v ξ̄` applied to every column.
pub fn apply_group(f: &Frame, el: &GroupElement) -> Frame {
    Frame {
        columns: f.columns.iter().map(|c| el.apply_vector(c)).collect(),
    }
}

fn gaussian_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    Quaternion::new(
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    )
}

/// Haar-distributed `k`-frame: Gram-Schmidt of a Gaussian `8 × k` matrix.
pub fn random_frame<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Frame {
    loop {
        let cols: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..8).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        if let Some(o) = linalg::gram_schmidt(&cols) {
            return Frame::new(o.into_iter().map(to_arr8).collect()).expect("orthonormal");
        }
    }
}

/// Haar-distributed `k × k` orthogonal matrix, for random changes of basis within a plane.
pub fn random_rotation<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    loop {
        let cols: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..k).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        if let Some(o) = linalg::gram_schmidt(&cols) {
            return o;
        }
    }
}

/// Haar-distributed element of `Sp(2) × Sp(1)`.
pub fn random_group_element<R: Rng + ?Sized>(rng: &mut R) -> GroupElement {
    loop {
        let c1 = HVector::new(gaussian_quaternion(rng), gaussian_quaternion(rng));
        let c2 = HVector::new(gaussian_quaternion(rng), gaussian_quaternion(rng));
        let n1 = c1.norm();
        if n1 < 1e-8 {
            continue;
        }
        let c1 = c1.scale(1.0 / n1);
        let c2 = c2 - c1.right_mul(kform(c1, c2));
        let n2 = c2.norm();
        if n2 < 1e-8 {
            continue;
        }
        let c2 = c2.scale(1.0 / n2);
        let g = QMatrix::from_fn(2, 2, |i, j| {
            let c = if j == 0 { c1 } else { c2 };
            if i == 0 {
                c.v1
            } else {
                c.v2
            }
        });
        let xi = gaussian_quaternion(rng);
        let n = xi.norm();
        if n < 1e-8 {
            continue;
        }
        return GroupElement::new(g, xi.scale(1.0 / n)).expect("orthonormalized");
    }
}

/// [`random_frame`] from a fixed seed.
pub fn random_frame_seeded(k: usize, seed: u64) -> Frame {
    random_frame(k, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// [`random_group_element`] from a fixed seed.
pub fn random_group_element_seeded(seed: u64) -> GroupElement {
    random_group_element(&mut ChaCha8Rng::seed_from_u64(seed))
}
