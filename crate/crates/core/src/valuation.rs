//! Crofton construction of the `Sp(2)Sp(1)`-invariant even valuations on `H^2`.
//!
//! A valuation of degree `1 <= k <= 7` is `μ(K) = ∫ g(E) vol(π_E K) dE` over
//! `Gr_k(R^8)` with Haar probability measure. Its Klain function is the cosine
//! transform of `g`, so the density of a valuation with Klain function `Σ a_j e_j`
//! (with `e_j` the invariant Laplace eigenfunctions) is `Σ a_j c_j⁻¹ e_j`, where
//! `c_j` is the cosine-transform multiplier of `e_j`. Degrees `0` and `8` are
//! multiples of the Euler characteristic and of the volume.

use num_rational::Ratio;
use serde_json::{json, Value};

use crate::cosine::{self, multiplier_cosine, MultiplierQuery};
use crate::error::{Error, Result};
use crate::invariants::{
    eigen_table, f_eval, plane_lambda, reduced_degree, InvariantFunctionId, DIMS,
};
use crate::linalg;
use crate::mc::{self, Estimate};
use crate::orbit::{random_frame, Frame, GroupElement, DEFAULT_CLASSIFY_TOL};

/// Largest number of zonotope generators accepted.
pub const MAX_GENERATORS: usize = 32;

/// Convex bodies whose projection volumes are known exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    /// Minkowski sum of the segments `[0, g]`.
    Zonotope { generators: Vec<[f64; 8]> },
    /// The cube with edges `side · f_i` spanned by the columns of `frame`.
    Cube { frame: Frame, side: f64 },
    /// Centered ball.
    Ball { radius: f64 },
}

fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{what} must be finite and non-negative, got {x}"
        )))
    }
}

impl ConvexBody {
    pub fn zonotope(generators: Vec<[f64; 8]>) -> Result<Self> {
        if generators.len() > MAX_GENERATORS {
            return Err(Error::TooManyGenerators(generators.len()));
        }
        if generators.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Precondition(
                "zonotope generators must be finite".into(),
            ));
        }
        Ok(Self::Zonotope { generators })
    }

    pub fn cube(frame: Frame, side: f64) -> Result<Self> {
        check_finite(side, "cube side")?;
        Ok(Self::Cube { frame, side })
    }

    /// Unit cube in the plane spanned by `frame`.
    pub fn unit_cube(frame: &Frame) -> Self {
        Self::Cube {
            frame: frame.clone(),
            side: 1.0,
        }
    }

    pub fn ball(radius: f64) -> Result<Self> {
        check_finite(radius, "ball radius")?;
        Ok(Self::Ball { radius })
    }

    /// Edge generators of a zonotope or cube; `None` for a ball.
    pub fn generators(&self) -> Option<Vec<[f64; 8]>> {
        match self {
            Self::Zonotope { generators } => Some(generators.clone()),
            Self::Cube { frame, side } => Some(
                frame
                    .columns()
                    .iter()
                    .map(|c| c.map(|x| side * x))
                    .collect(),
            ),
            Self::Ball { .. } => None,
        }
    }

    /// The image under `v ↦ g v ξ̄`.
    pub fn transform(&self, el: &GroupElement) -> Self {
        match self {
            Self::Zonotope { generators } => Self::Zonotope {
                generators: generators.iter().map(|g| el.apply_vector(g)).collect(),
            },
            Self::Cube { frame, side } => Self::Cube {
                frame: crate::orbit::apply_group(frame, el),
                side: *side,
            },
            Self::Ball { radius } => Self::Ball { radius: *radius },
        }
    }

    /// The reflected body `−K`, written with negated generators.
    pub fn reflect(&self) -> Self {
        match self.generators() {
            Some(g) => Self::Zonotope {
                generators: g.iter().map(|v| v.map(|x| -x)).collect(),
            },
            None => self.clone(),
        }
    }

    /// `{"type": "zonotope", "generators": [...]}`, `{"type": "cube", "frame": {...}, "side": s}`
    /// or `{"type": "ball", "radius": r}`.
    pub fn to_json(&self) -> Value {
        match self {
            Self::Zonotope { generators } => json!({"type": "zonotope", "generators": generators}),
            Self::Cube { frame, side } => {
                json!({"type": "cube", "frame": frame.to_json(), "side": side})
            }
            Self::Ball { radius } => json!({"type": "ball", "radius": radius}),
        }
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Precondition(format!("body JSON: {msg}"));
        let number = |key: &str| {
            value
                .get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| bad(&format!("missing number \"{key}\"")))
        };
        match value.get("type").and_then(Value::as_str) {
            Some("zonotope") => {
                let gens = value
                    .get("generators")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("missing \"generators\""))?;
                let generators = gens
                    .iter()
                    .map(|g| {
                        let v: Vec<f64> = serde_json::from_value(g.clone())
                            .map_err(|e| bad(&format!("generator: {e}")))?;
                        <[f64; 8]>::try_from(v.as_slice())
                            .map_err(|_| bad("generators must have 8 entries"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::zonotope(generators)
            }
            Some("cube") => {
                let frame = match value.get("frame") {
                    Some(f) => Frame::from_json(f)?,
                    None => Frame::standard(8)?,
                };
                Self::cube(frame, number("side")?)
            }
            Some("ball") => Self::ball(number("radius")?),
            Some(other) => Err(bad(&format!("unknown body type \"{other}\""))),
            None => Err(bad("missing \"type\"")),
        }
    }
}

/// Volume `π^{k/2} / Γ(k/2 + 1)` of the unit `k`-ball.
pub fn unit_ball_volume(k: usize) -> f64 {
    let half = k as f64 / 2.0;
    std::f64::consts::PI.powf(half) / cosine::gamma(half + 1.0).expect("positive argument")
}

/// Calls `visit` with every increasing `k`-subset of `0..m`.
fn for_each_subset(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + m - k) else {
            return;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Volume of the zonotope `Σ [0, p_i]` in `R^k`: `Σ_{|S| = k} |det p_S|`.
fn zonotope_volume(projected: &[Vec<f64>], k: usize) -> f64 {
    let mut total = 0.0;
    for_each_subset(projected.len(), k, |s| {
        let m: Vec<Vec<f64>> = (0..k)
            .map(|r| s.iter().map(|&c| projected[c][r]).collect())
            .collect();
        total += linalg::det(&m).abs();
    });
    total
}

/// `k`-volume of the orthogonal projection of `body` onto the span of `e`, `k = e.k()`.
pub fn projection_volume(body: &ConvexBody, e: &Frame) -> Result<f64> {
    let k = e.k();
    match body {
        ConvexBody::Ball { radius } => Ok(unit_ball_volume(k) * radius.powi(k as i32)),
        _ => {
            let gens = body.generators().expect("polytope");
            if gens.len() > MAX_GENERATORS {
                return Err(Error::TooManyGenerators(gens.len()));
            }
            let projected: Vec<Vec<f64>> = gens
                .iter()
                .map(|g| e.columns().iter().map(|u| linalg::dot(u, g)).collect())
                .collect();
            Ok(zonotope_volume(&projected, k))
        }
    }
}

/// Volume of a body in `R^8`.
pub fn volume(body: &ConvexBody) -> Result<f64> {
    let mut axes = [[0.0; 8]; 8];
    for (i, a) in axes.iter_mut().enumerate() {
        a[i] = 1.0;
    }
    projection_volume(body, &Frame::new(axes.to_vec())?)
}

/// How a valuation is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValuationKind {
    EulerCharacteristic,
    Crofton,
    Volume,
}

/// An invariant valuation of degree `k` given by its Klain function
/// `Σ klain[i] f_{k,i}` and, for `1 <= k <= 7`, its Crofton density
/// `Σ density[i] f_{k,i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CroftonValuation {
    k: usize,
    klain: Vec<f64>,
    eigen: Vec<f64>,
    density: Vec<f64>,
}

/// Inverse of the lower-triangular eigenfunction table of reduced degree `r`:
/// row `i` expresses `f_{r,i}` through the eigenfunctions.
fn inverse_table(r: usize) -> Result<Vec<Vec<Ratio<i64>>>> {
    let rows = eigen_table(r)?;
    let n = rows.len();
    let c = |j: usize, i: usize| Ratio::from_integer(rows[j].coeffs[i]);
    let zero = Ratio::from_integer(0);
    if (0..n).any(|j| c(j, j) == zero || (j + 1..n).any(|i| c(j, i) != zero)) {
        return Err(Error::Structural(format!(
            "eigenfunction table of degree {r} is not invertible lower triangular"
        )));
    }
    // solve B C = I row by row, B lower triangular
    let mut b = vec![vec![zero; n]; n];
    for i in 0..n {
        for j in (0..=i).rev() {
            let target = if i == j { Ratio::from_integer(1) } else { zero };
            let acc = (j + 1..=i).fold(zero, |acc, l| acc + b[i][l] * c(l, j));
            b[i][j] = (target - acc) / c(j, j);
        }
    }
    Ok(b)
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Cosine-transform multipliers of the eigenfunction rows of reduced degree `r` in `R^8`.
pub fn row_multipliers(r: usize) -> Result<Vec<f64>> {
    eigen_table(r)?
        .iter()
        .map(|row| {
            let c = multiplier_cosine(&MultiplierQuery::classical(8, r, &row.weight)?)?;
            if c == 0.0 {
                Err(Error::Structural(format!(
                    "zero multiplier for weight {:?}",
                    row.weight
                )))
            } else {
                Ok(c)
            }
        })
        .collect()
}

impl CroftonValuation {
    /// The valuation of degree `k` with Klain function `Σ klain[i] f_{k,i}`.
    pub fn from_klain(k: usize, klain: &[f64]) -> Result<Self> {
        if k > 8 {
            return Err(Error::UnsupportedDimension {
                k,
                hint: "degrees run from 0 to 8".into(),
            });
        }
        if klain.len() != DIMS[k] {
            return Err(Error::DimensionMismatch {
                expected: DIMS[k],
                got: klain.len(),
            });
        }
        if k == 0 || k == 8 {
            return Ok(Self {
                k,
                klain: klain.to_vec(),
                eigen: klain.to_vec(),
                density: Vec::new(),
            });
        }
        let r = reduced_degree(k);
        let inv = inverse_table(r)?;
        let table = eigen_table(r)?;
        let mult = row_multipliers(r)?;
        let n = klain.len();
        let eigen: Vec<f64> = (0..n)
            .map(|j| (0..n).map(|i| klain[i] * ratio_f64(inv[i][j])).sum())
            .collect();
        let density = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| eigen[j] / mult[j] * table[j].coeffs[i] as f64)
                    .sum()
            })
            .collect();
        Ok(Self {
            k,
            klain: klain.to_vec(),
            eigen,
            density,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> ValuationKind {
        match self.k {
            0 => ValuationKind::EulerCharacteristic,
            8 => ValuationKind::Volume,
            _ => ValuationKind::Crofton,
        }
    }

    /// Klain function coefficients over `f_{k,0}, f_{k,1}, …`.
    pub fn klain(&self) -> &[f64] {
        &self.klain
    }

    /// Klain function coefficients over the eigenfunction rows of the table.
    pub fn eigen_coefficients(&self) -> &[f64] {
        &self.eigen
    }

    /// Crofton density coefficients over `f_{k,0}, f_{k,1}, …` (empty for degrees 0 and 8).
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// The closed-form Klain function at `span(e)`.
    pub fn klain_value(&self, e: &Frame) -> Result<f64> {
        check_degree(self.k, e)?;
        combine(&self.klain, &f_values(self.k, e)?)
    }

    /// The Crofton density at `span(e)`.
    pub fn density_value(&self, e: &Frame) -> Result<f64> {
        check_degree(self.k, e)?;
        combine(&self.density, &f_values(self.k, e)?)
    }
}

fn check_degree(k: usize, e: &Frame) -> Result<()> {
    if e.k() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: e.k(),
        });
    }
    Ok(())
}

fn combine(coeffs: &[f64], values: &[f64]) -> Result<f64> {
    Ok(coeffs.iter().zip(values).map(|(a, b)| a * b).sum())
}

/// `(f_{k,0}(E), f_{k,1}(E), …)` for the plane spanned by `e`.
fn f_values(k: usize, e: &Frame) -> Result<Vec<f64>> {
    if k == 0 || k == 8 {
        return Ok(vec![1.0]);
    }
    let lam = plane_lambda(e, DEFAULT_CLASSIFY_TOL)?;
    InvariantFunctionId::all(k)
        .into_iter()
        .map(|id| f_eval(id, &lam))
        .collect()
}

/// The valuation whose Klain function is the eigenfunction row `j` of reduced degree `min(k, 8 − k)`.
pub fn make_eigen_valuation(k: usize, j: usize) -> Result<CroftonValuation> {
    if !(1..=7).contains(&k) {
        return Err(Error::UnsupportedDimension {
            k,
            hint: "Crofton valuations have degree 1..=7".into(),
        });
    }
    let rows = eigen_table(reduced_degree(k))?;
    let row = rows.get(j).ok_or(Error::DimensionMismatch {
        expected: rows.len(),
        got: j + 1,
    })?;
    let klain: Vec<f64> = row.coeffs.iter().map(|&c| c as f64).collect();
    CroftonValuation::from_klain(k, &klain)
}

/// The valuation with Klain function `f_{k,i}`.
pub fn make_basis_valuation(id: InvariantFunctionId) -> Result<CroftonValuation> {
    let mut klain = vec![0.0; DIMS[id.k]];
    klain[id.i] = 1.0;
    CroftonValuation::from_klain(id.k, &klain)
}

/// The basis valuations of degree `k`.
pub fn basis(k: usize) -> Result<Vec<CroftonValuation>> {
    InvariantFunctionId::all(k)
        .into_iter()
        .map(make_basis_valuation)
        .collect()
}

/// Number of basis valuations constructed in each degree `0..=8`.
pub fn basis_census() -> Result<Vec<usize>> {
    (0..=8).map(|k| Ok(basis(k)?.len())).collect()
}

fn exact(value: f64) -> Estimate {
    Estimate {
        mean: value,
        std_error: 0.0,
        samples: 0,
    }
}

/// Monte Carlo evaluation of valuations of one common degree on `body`.
///
/// All valuations share the same random planes. Degrees `0` and `8` are
/// evaluated exactly and report zero samples.
pub fn evaluate_many(
    vals: &[CroftonValuation],
    body: &ConvexBody,
    n: usize,
    seed: u64,
) -> Result<Vec<Estimate>> {
    let Some(first) = vals.first() else {
        return Ok(Vec::new());
    };
    let k = first.k;
    if vals.iter().any(|v| v.k != k) {
        return Err(Error::Precondition(
            "valuations must share one degree".into(),
        ));
    }
    if n < cosine::MIN_SAMPLES {
        return Err(Error::Precondition(format!(
            "need at least {} samples, got {n}",
            cosine::MIN_SAMPLES
        )));
    }
    match first.kind() {
        ValuationKind::EulerCharacteristic => Ok(vals.iter().map(|v| exact(v.klain[0])).collect()),
        ValuationKind::Volume => {
            let vol = volume(body)?;
            Ok(vals.iter().map(|v| exact(v.klain[0] * vol)).collect())
        }
        ValuationKind::Crofton => mc::estimate_vec(n, seed, vals.len(), |rng, out| {
            let e = random_frame(k, rng);
            let proj = projection_volume(body, &e)?;
            if proj == 0.0 {
                return Ok(());
            }
            let f = f_values(k, &e)?;
            for (o, v) in out.iter_mut().zip(vals) {
                *o = combine(&v.density, &f)? * proj;
            }
            Ok(())
        }),
    }
}

/// Monte Carlo evaluation of `v` on `body` with `n` random planes.
pub fn evaluate(v: &CroftonValuation, body: &ConvexBody, n: usize, seed: u64) -> Result<Estimate> {
    Ok(evaluate_many(std::slice::from_ref(v), body, n, seed)?[0])
}

/// Klain functions at `span(e)` of valuations of degree `e.k()`, as their values on the unit cube in `e`.
pub fn klain_extract_many(
    vals: &[CroftonValuation],
    e: &Frame,
    n: usize,
    seed: u64,
) -> Result<Vec<Estimate>> {
    for v in vals {
        check_degree(v.k, e)?;
    }
    evaluate_many(vals, &ConvexBody::unit_cube(e), n, seed)
}

/// Klain function of `v` at `span(e)`, estimated as `v(unit cube in e)`.
pub fn klain_extract(v: &CroftonValuation, e: &Frame, n: usize, seed: u64) -> Result<Estimate> {
    Ok(klain_extract_many(std::slice::from_ref(v), e, n, seed)?[0])
}
