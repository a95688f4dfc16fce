//! Laplacian of invariant functions on `Gr_k(H^2)` restricted to the maximal torus.
//!
//! The torus point `θ` is the plane spanned by `(cos θ_p, sin θ_p) · e_p` with
//! `e = (1, i, j, k)`. For an invariant `f`,
//! `Δf = Δ_T f − ⟨∇f, ∇ log vol⟩` where `vol` is the volume of the orbit through
//! `θ`, `Δ = −div ∇`, and the `θ` coordinates are orthonormal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hherm::LambdaTuple;
use crate::invariants::{eigen_table, f_eval, EigenRow, InvariantFunctionId, Weight, DIMS};
use crate::linalg;
use crate::orbit::{frame_from_angles, Frame};
use crate::quat::Quaternion;

/// Smallest orbit volume at which [`laplacian_invariant`] is evaluated.
pub const MIN_LAPLACIAN_VOLUME: f64 = 1e-4;
/// Torus points with smaller volume are skipped by the identity checks.
pub const SAMPLE_MIN_VOLUME: f64 = 1e-3;
/// [`orbit_volume_numeric`] refuses points whose closed-form volume is below this.
pub const MIN_NUMERIC_VOLUME: f64 = 1e-6;
/// Default finite-difference step.
pub const DEFAULT_H: f64 = 1e-3;
/// Admissible finite-difference steps.
pub const H_RANGE: (f64, f64) = (1e-4, 1e-2);

/// Point `θ` of the maximal torus in `Gr_k`, `k ∈ {2, 3, 4}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusPoint {
    theta: Vec<f64>,
}

impl TorusPoint {
    /// Angles are reduced to `[0, 2π)`.
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        check_k(theta.len())?;
        let tau = std::f64::consts::TAU;
        Ok(Self {
            theta: theta.into_iter().map(|t| t.rem_euclid(tau)).collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn frame(&self) -> Frame {
        frame_from_angles(&self.theta).expect("k checked")
    }

    pub fn lambda(&self) -> LambdaTuple {
        LambdaTuple::from_angles(&self.theta).expect("k checked")
    }
}

fn check_k(k: usize) -> Result<()> {
    if (2..=4).contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension {
            k,
            hint: "the torus computations cover k in {2, 3, 4}".into(),
        })
    }
}

/// A factor `|sin⟨c, θ⟩|^power` (or `|cos⟨c, θ⟩|^power`) of the orbit volume.
struct VolumeFactor {
    coeffs: [f64; 4],
    power: f64,
    cosine: bool,
}

fn volume_factors(k: usize) -> Vec<VolumeFactor> {
    let diff = |p: usize, q: usize| {
        let mut c = [0.0; 4];
        c[p] = 1.0;
        c[q] = -1.0;
        c
    };
    let sin = |coeffs, power| VolumeFactor {
        coeffs,
        power,
        cosine: false,
    };
    match k {
        2 => vec![
            sin(diff(0, 1), 3.0),
            VolumeFactor {
                coeffs: diff(0, 1),
                power: 2.0,
                cosine: true,
            },
        ],
        3 => {
            let mut f: Vec<VolumeFactor> = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(p, q)| sin(diff(p, q), 1.0))
                .collect();
            for m in 0..3 {
                let mut c = [0.0; 4];
                c[(m + 1) % 3] += 1.0;
                c[(m + 2) % 3] += 1.0;
                c[m] -= 2.0;
                f.push(sin(c, 1.0));
            }
            f
        }
        _ => {
            let mut f: Vec<VolumeFactor> = crate::hherm::pair_list(4)
                .into_iter()
                .map(|(p, q)| sin(diff(p, q), 1.0))
                .collect();
            for (h, l, m, n) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
                let mut c = [0.0; 4];
                c[h] = 1.0;
                c[l] = 1.0;
                c[m] = -1.0;
                c[n] = -1.0;
                f.push(sin(c, 1.0));
            }
            f
        }
    }
}

fn phase(c: &[f64; 4], theta: &[f64]) -> f64 {
    theta.iter().zip(c).map(|(t, x)| t * x).sum()
}

/// Orbit volume through a torus point, with the normalizing constant set to 1.
pub fn orbit_volume(p: &TorusPoint) -> f64 {
    volume_factors(p.k())
        .iter()
        .map(|f| {
            let x = phase(&f.coeffs, p.theta());
            let base = if f.cosine { x.cos() } else { x.sin() };
            base.abs().powf(f.power)
        })
        .product()
}

/// Analytic gradient of `log vol` in the `θ` coordinates.
pub fn grad_log_volume(p: &TorusPoint) -> Vec<f64> {
    let k = p.k();
    let mut g = vec![0.0; k];
    for f in volume_factors(k) {
        let x = phase(&f.coeffs, p.theta());
        let d = if f.cosine {
            -f.power * x.tan()
        } else {
            f.power / x.tan()
        };
        for (gi, c) in g.iter_mut().zip(f.coeffs) {
            *gi += d * c;
        }
    }
    g
}

fn left_right(q: Quaternion, left: bool) -> [[f64; 4]; 4] {
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let mut m = [[0.0; 4]; 4];
    for (col, e) in basis.iter().enumerate() {
        let img = if left { q * *e } else { *e * q }.to_array();
        for row in 0..4 {
            m[row][col] = img[row];
        }
    }
    m
}

/// Orthonormal basis (Frobenius) of the Lie algebra of `Sp(2)Sp(1)` inside `so(8)`.
pub fn lie_algebra_basis() -> Vec<Vec<Vec<f64>>> {
    let block = |tl: Option<[[f64; 4]; 4]>,
                 tr: Option<[[f64; 4]; 4]>,
                 bl: Option<[[f64; 4]; 4]>,
                 br: Option<[[f64; 4]; 4]>| {
        let mut m = vec![vec![0.0; 8]; 8];
        for (blk, (r0, c0)) in [(tl, (0, 0)), (tr, (0, 4)), (bl, (4, 0)), (br, (4, 4))] {
            if let Some(b) = blk {
                for r in 0..4 {
                    for c in 0..4 {
                        m[r0 + r][c0 + c] = b[r][c];
                    }
                }
            }
        }
        let n = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
        m.iter_mut().flatten().for_each(|x| *x /= n);
        m
    };
    let id = left_right(Quaternion::ONE, true);
    let minus_id = left_right(-Quaternion::ONE, true);
    let mut out = vec![block(None, Some(minus_id), Some(id), None)];
    for q in [Quaternion::I, Quaternion::J, Quaternion::K] {
        let l = left_right(q, true);
        let r = left_right(q, false);
        out.push(block(Some(l), None, None, None));
        out.push(block(None, None, None, Some(l)));
        out.push(block(None, Some(l), Some(l), None));
        out.push(block(Some(r), None, None, Some(r)));
    }
    out
}

/// Dimension of a generic orbit in `Gr_k`.
pub fn generic_orbit_dim(k: usize) -> usize {
    match k {
        2 => 11,
        _ => 13,
    }
}

/// Product of the `generic_orbit_dim(k)` largest singular values of the orbit map at `θ`.
///
/// The tangent of `t ↦ exp(tX)·V` at the plane `V` with frame `U` is `(I − UUᵀ) X U`.
pub fn orbit_jacobian(p: &TorusPoint) -> f64 {
    let f = p.frame();
    let k = f.k();
    let u = f.columns();
    let tangents: Vec<Vec<f64>> = lie_algebra_basis()
        .iter()
        .map(|x| {
            let mut t = Vec::with_capacity(8 * k);
            for col in u {
                let xu: Vec<f64> = (0..8).map(|r| linalg::dot(&x[r], col)).collect();
                let mut v = xu.clone();
                for c in u {
                    let d = linalg::dot(c, &xu);
                    v.iter_mut().zip(c).for_each(|(a, b)| *a -= d * b);
                }
                t.extend(v);
            }
            t
        })
        .collect();
    let n = tangents.len();
    let gram: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| linalg::dot(&tangents[i], &tangents[j]))
                .collect()
        })
        .collect();
    let (vals, _) = linalg::symmetric_eigen(&gram);
    vals.iter()
        .take(generic_orbit_dim(k))
        .map(|v| v.max(0.0).sqrt())
        .product()
}

/// Orbit volume from the Lie algebra action; proportional to [`orbit_volume`].
pub fn orbit_volume_numeric(p: &TorusPoint) -> Result<f64> {
    let closed = orbit_volume(p);
    if closed <= MIN_NUMERIC_VOLUME {
        return Err(Error::Precondition(format!(
            "orbit through {:?} is degenerate (volume {closed:e})",
            p.theta()
        )));
    }
    Ok(orbit_jacobian(p))
}

fn shifted(theta: &[f64], i: usize, d: f64) -> Vec<f64> {
    let mut t = theta.to_vec();
    t[i] += d;
    t
}

/// Central-difference gradient.
pub fn gradient(f: &dyn Fn(&[f64]) -> f64, theta: &[f64], h: f64) -> Vec<f64> {
    (0..theta.len())
        .map(|i| (f(&shifted(theta, i, h)) - f(&shifted(theta, i, -h))) / (2.0 * h))
        .collect()
}

/// Flat torus Laplacian `Δ_T f = −Σ ∂²f/∂θ_i²` by central second differences.
pub fn torus_laplacian(f: &dyn Fn(&[f64]) -> f64, theta: &[f64], h: f64) -> f64 {
    let f0 = f(theta);
    -(0..theta.len())
        .map(|i| (f(&shifted(theta, i, h)) - 2.0 * f0 + f(&shifted(theta, i, -h))) / (h * h))
        .sum::<f64>()
}

/// `Δf` at a torus point for an invariant `f` given as a function of `θ`.
pub fn laplacian_invariant(f: &dyn Fn(&[f64]) -> f64, p: &TorusPoint, h: f64) -> Result<f64> {
    if !(H_RANGE.0..=H_RANGE.1).contains(&h) {
        return Err(Error::Precondition(format!(
            "step h = {h:e} outside [{:e}, {:e}]",
            H_RANGE.0, H_RANGE.1
        )));
    }
    let vol = orbit_volume(p);
    if vol <= MIN_LAPLACIAN_VOLUME {
        return Err(Error::Precondition(format!(
            "orbit volume {vol:e} too small for the Laplacian formula"
        )));
    }
    let grad = gradient(f, p.theta(), h);
    let glv = grad_log_volume(p);
    Ok(torus_laplacian(f, p.theta(), h) - linalg::dot(&grad, &glv))
}

/// `f_{k,i}` as a function of the torus angles.
pub fn torus_function(id: InvariantFunctionId) -> impl Fn(&[f64]) -> f64 {
    move |theta: &[f64]| {
        let lam = LambdaTuple::from_angles(theta).expect("torus angles");
        f_eval(id, &lam).expect("degree matches")
    }
}

/// Rows `i` of the Laplacian action: `Δ f_{k,i} = Σ_j L[i][j] f_{k,j}`.
pub fn laplacian_matrix(k: usize) -> Result<Vec<Vec<i64>>> {
    Ok(match k {
        0 | 1 => vec![vec![0]],
        2 => vec![vec![0, 0], vec![-12, 28]],
        3 => vec![vec![0, 0, 0], vec![-36, 28, 0], vec![18, -34, 60]],
        4 => vec![
            vec![0, 0, 0, 0, 0],
            vec![-72, 28, 0, 0, 0],
            vec![-12, -2, 40, 0, 0],
            vec![48, -68, 8, 60, 0],
            vec![24, 64, -152, -92, 96],
        ],
        _ => {
            return Err(Error::UnsupportedDimension {
                k,
                hint: "Laplacian identities are stated for k <= 4".into(),
            })
        }
    })
}

/// Human-readable form of row `i` of [`laplacian_matrix`].
pub fn identity_name(k: usize, i: usize, row: &[i64]) -> String {
    let mut rhs = String::new();
    // highest index first, as the identities are usually written
    for (j, c) in row.iter().enumerate().rev().filter(|(_, c)| **c != 0) {
        let mag = c.abs();
        let term = match (j, mag) {
            (0, _) => mag.to_string(),
            (_, 1) => format!("f_{{{k},{j}}}"),
            _ => format!("{mag}f_{{{k},{j}}}"),
        };
        let sign = match (rhs.is_empty(), *c < 0) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        };
        rhs.push_str(sign);
        rhs.push_str(&term);
    }
    if rhs.is_empty() {
        rhs.push('0');
    }
    format!("Delta(f_{{{k},{i}}}) = {rhs}")
}

/// Outcome of one numerically checked identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity_name: String,
    pub max_rel_error: f64,
    pub n_points: usize,
    pub h: f64,
    pub pass: bool,
}

/// `|a − b| / max(|b|, 1)`.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Uniform torus points with orbit volume at least [`SAMPLE_MIN_VOLUME`].
pub fn sample_torus_points(k: usize, n: usize, seed: u64) -> Result<Vec<TorusPoint>> {
    check_k(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let theta: Vec<f64> = (0..k)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        let p = TorusPoint::new(theta)?;
        if orbit_volume(&p) >= SAMPLE_MIN_VOLUME {
            out.push(p);
        }
    }
    Ok(out)
}

/// Checks every `Δ f_{k,i}` identity at random torus points.
pub fn check_laplacian_identities(
    k: usize,
    n_points: usize,
    seed: u64,
    h: f64,
    tol: f64,
) -> Result<Vec<IdentityReport>> {
    let matrix = laplacian_matrix(k)?;
    let points = sample_torus_points(k, n_points, seed)?;
    let mut reports = Vec::new();
    for (i, row) in matrix.iter().enumerate() {
        let f = torus_function(InvariantFunctionId::new(k, i)?);
        let mut worst: f64 = 0.0;
        for p in &points {
            let lhs = laplacian_invariant(&f, p, h)?;
            let lam = p.lambda();
            let mut rhs = 0.0;
            for (j, c) in row.iter().enumerate() {
                rhs += *c as f64 * f_eval(InvariantFunctionId::new(k, j)?, &lam)?;
            }
            worst = worst.max(relative_error(lhs, rhs));
        }
        reports.push(IdentityReport {
            identity_name: identity_name(k, i, row),
            max_rel_error: worst,
            n_points,
            h,
            pass: worst <= tol,
        });
    }
    Ok(reports)
}

/// The eigenfunction of a table row as a function of the torus angles.
pub fn torus_eigenfunction(row: &EigenRow) -> impl Fn(&[f64]) -> f64 {
    let k = row.k;
    let coeffs = row.coeffs.clone();
    move |theta: &[f64]| {
        let lam = LambdaTuple::from_angles(theta).expect("torus angles");
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| *c as f64 * f_eval(InvariantFunctionId { k, i }, &lam).expect("degree"))
            .sum()
    }
}

/// Checks `Δg = μ g` for every row of the eigenfunction table of degree `k`.
///
/// Degrees 0 and 1 carry only constants, for which `Δ1 = 0` holds trivially.
pub fn check_eigenfunctions(
    k: usize,
    n_points: usize,
    seed: u64,
    h: f64,
    tol: f64,
) -> Result<Vec<IdentityReport>> {
    let rows = eigen_table(k)?;
    if k < 2 {
        return Ok(rows
            .iter()
            .map(|r| IdentityReport {
                identity_name: format!("Delta(f_{{{k},0}}) = 0"),
                max_rel_error: 0.0,
                n_points: 0,
                h,
                pass: r.eigenvalue == 0,
            })
            .collect());
    }
    let points = sample_torus_points(k, n_points, seed)?;
    let mut reports = Vec::new();
    for row in &rows {
        let g = torus_eigenfunction(row);
        let mut worst: f64 = 0.0;
        for p in &points {
            let lhs = laplacian_invariant(&g, p, h)?;
            let rhs = row.eigenvalue as f64 * g(p.theta());
            worst = worst.max(relative_error(lhs, rhs));
        }
        reports.push(IdentityReport {
            identity_name: format!(
                "Delta(g_{{{k},{}}}) = {} g_{{{k},{}}}",
                row.j, row.eigenvalue, row.j
            ),
            max_rel_error: worst,
            n_points,
            h,
            pass: worst <= tol,
        });
    }
    Ok(reports)
}

/// Dominant weight `λ₁ ≥ λ₂ ≥ λ₃ ≥ |λ₄|` of `SO(8)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HighestWeight(Weight);

impl HighestWeight {
    pub fn new(w: Weight) -> Result<Self> {
        if w[0] >= w[1] && w[1] >= w[2] && w[2] >= w[3].abs() {
            Ok(Self(w))
        } else {
            Err(Error::Precondition(format!("{w:?} is not dominant")))
        }
    }

    pub fn parts(&self) -> Weight {
        self.0
    }
}

/// Casimir eigenvalue `Σ λ_i (λ_i − 2i + n)` on the representation with highest weight `w`.
pub fn casimir_eigenvalue(w: HighestWeight, n: i64) -> i64 {
    w.0.iter()
        .enumerate()
        .map(|(i, l)| l * (l - 2 * (i as i64 + 1) + n))
        .sum()
}

/// Number of invariant functions of degree `k`.
pub fn dim(k: usize) -> usize {
    DIMS[k]
}
