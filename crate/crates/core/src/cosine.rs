//! The Siegel Γ-function, multipliers of the α-cosine transform on
//! `Gr_k(R^n)`, the classical cosine-transform scalars on `Gr_k(R^8)` and
//! Monte Carlo evaluation of these transforms.
//!
//! Haar measure on the Grassmannian is the probability measure throughout.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, ExactValue};
use crate::invariants::eigen_table;
use crate::linalg;
use crate::mc::{self, Estimate};
use crate::orbit::{random_frame, Frame};

/// Γ arguments closer than this to a non-positive integer count as poles.
pub const POLE_TOL: f64 = 1e-6;

/// Smallest sample count accepted by the Monte Carlo transforms.
pub const MIN_SAMPLES: usize = 1000;

/// Largest ambient dimension handled by the exact evaluation.
pub const MAX_EXACT_N: usize = 16;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(πx)` with the argument reduced to `[-1/2, 1/2]` first.
fn sin_pi(x: f64) -> f64 {
    let m = x.round();
    let s = (PI * (x - m)).sin();
    if m.rem_euclid(2.0) == 0.0 {
        s
    } else {
        -s
    }
}

/// Γ(x) by the Lanczos approximation, with reflection for `x < 1/2`.
pub fn gamma(x: f64) -> Result<f64> {
    if x <= 0.0 && (x - x.round()).abs() < POLE_TOL {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        return Ok(PI / (sin_pi(x) * gamma(1.0 - x)?));
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let series = LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + i as f64 + 1.0));
    Ok((2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * series)
}

/// `Γ_m(z) = Π_j Γ(z_j − (j−1)/2)`.
pub fn siegel_gamma(z: &[f64]) -> Result<f64> {
    z.iter()
        .enumerate()
        .try_fold(1.0, |acc, (j, zj)| Ok(acc * gamma(zj - j as f64 / 2.0)?))
}

/// A multiplier request: the `SO(n)` type `weight` inside `L²(Gr_k(R^n))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierQuery {
    n: usize,
    k: usize,
    weight: Vec<i64>,
    alpha: Option<f64>,
}

impl MultiplierQuery {
    /// Validates `1 <= k <= n/2` and that `weight` is even and dominant with
    /// at most `k` nonzero entries. A negative last entry requires `k = n/2`.
    pub fn new(n: usize, k: usize, weight: &[i64], alpha: Option<f64>) -> Result<Self> {
        if k == 0 || 2 * k > n {
            return Err(Error::Precondition(format!(
                "need 1 <= k <= n/2, got n = {n}, k = {k}"
            )));
        }
        if let Some(a) = alpha {
            if !a.is_finite() {
                return Err(Error::Precondition(format!("alpha = {a} is not finite")));
            }
        }
        let bad = || Error::InadmissibleWeight(weight.to_vec());
        if weight.iter().skip(k).any(|&w| w != 0) {
            return Err(bad());
        }
        let mut w: Vec<i64> = weight.iter().take(k).copied().collect();
        w.resize(k, 0);
        if w.iter().any(|x| x % 2 != 0) {
            return Err(bad());
        }
        if w[k - 1] < 0 && 2 * k != n {
            return Err(bad());
        }
        let dominant = w.windows(2).all(|p| p[0] >= p[1].abs()) && (k > 1 || w[0] >= 0);
        if !dominant {
            return Err(bad());
        }
        Ok(Self {
            n,
            k,
            weight: w,
            alpha,
        })
    }

    /// Classical cosine transform query, `α = n/2 + 1`.
    pub fn classical(n: usize, k: usize, weight: &[i64]) -> Result<Self> {
        Self::new(n, k, weight, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weight(&self) -> &[i64] {
        &self.weight
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.n as f64 / 2.0
    }

    /// Number of nonzero weight entries.
    pub fn depth(&self) -> usize {
        self.weight.iter().take_while(|&&w| w != 0).count()
    }

    /// Checks that the weight occurs in the valuation space: `|λ_j| <= 2` for `j >= 2`.
    fn check_valuation_weight(&self) -> Result<()> {
        if self.weight.iter().skip(1).any(|w| w.abs() > 2) {
            return Err(Error::InadmissibleWeight(self.weight.clone()));
        }
        Ok(())
    }

    fn check_classical(&self) -> Result<()> {
        match self.alpha {
            Some(a) if (a - self.rho() - 1.0).abs() > 1e-12 => Err(Error::Precondition(format!(
                "alpha = {a} is not the classical value {}",
                self.rho() + 1.0
            ))),
            _ => Ok(()),
        }
    }
}

/// Scalar by which the α-cosine transform with kernel `|cos(E,F)|^{α−ρ}` acts
/// on the isotypic component of `q.weight`.
pub fn multiplier_alpha(q: &MultiplierQuery) -> Result<f64> {
    let alpha = q
        .alpha
        .ok_or_else(|| Error::Precondition("multiplier_alpha needs alpha".into()))?;
    let k = q.k;
    let rho = q.rho();
    let lam: Vec<f64> = q.weight.iter().map(|&w| w as f64).collect();
    let constant = |z: f64| vec![z; k];
    let shifted = |z: f64| lam.iter().map(|l| (z + l) / 2.0).collect::<Vec<_>>();
    let eval = || -> Result<f64> {
        let num = siegel_gamma(&constant(rho))?
            * siegel_gamma(&constant((alpha - rho + k as f64) / 2.0))?
            * siegel_gamma(&shifted(-alpha + rho))?;
        let den = siegel_gamma(&constant(k as f64 / 2.0))?
            * siegel_gamma(&constant((-alpha + rho) / 2.0))?
            * siegel_gamma(&shifted(alpha + rho))?;
        Ok(num / den)
    };
    let value = eval().map_err(|e| match e {
        Error::Pole(x) => Error::Precondition(format!(
            "alpha = {alpha} puts a gamma argument at the pole {x:.3}; \
             use multiplier_cosine for the classical limit alpha = {}",
            rho + 1.0
        )),
        e => e,
    })?;
    let half: i64 = q.weight.iter().map(|w| w.abs()).sum::<i64>() / 2;
    Ok(if half % 2 == 0 { value } else { -value })
}

/// Offset from `ρ + 1` of the first sample used by [`classical_limit`].
pub const LIMIT_STEP: f64 = 1e-4;

/// The limit of [`multiplier_alpha`] as `α → ρ + 1`, by Richardson extrapolation
/// from `α = ρ + 1 ± t`, `t = h, h/2, h/4`, averaged over both sides.
pub fn classical_limit(q: &MultiplierQuery) -> Result<f64> {
    let side = |h: f64| -> Result<f64> {
        let at = |t: f64| {
            let mut shifted = q.clone();
            shifted.alpha = Some(q.rho() + 1.0 + t);
            multiplier_alpha(&shifted)
        };
        let (a, b, c) = (at(h)?, at(h / 2.0)?, at(h / 4.0)?);
        let (r1, r2) = (2.0 * b - a, 2.0 * c - b);
        Ok((4.0 * r2 - r1) / 3.0)
    };
    Ok((side(LIMIT_STEP)? + side(-LIMIT_STEP)?) / 2.0)
}

fn cosine_parts(q: &MultiplierQuery) -> Result<(i64, usize, bool)> {
    q.check_classical()?;
    q.check_valuation_weight()?;
    let a = q.weight[0];
    let b_prime = q.depth().max(1);
    let negative = (a / 2 - 1).rem_euclid(2) == 1;
    Ok((a, b_prime, negative))
}

/// Scalar by which the classical cosine transform (`α = ρ + 1`) acts on the
/// isotypic component of `q.weight`, from the closed form
/// `(−1)^{a/2−1} b'!(n−b'+1)! Γ((k+1)/2)Γ((n−k+1)/2)Γ((a−1)/2) / (2π n! Γ((n+1+a)/2))`.
pub fn multiplier_cosine(q: &MultiplierQuery) -> Result<f64> {
    let (a, b, negative) = cosine_parts(q)?;
    let (n, k) = (q.n as f64, q.k as f64);
    let fact = |m: usize| (1..=m).map(|i| i as f64).product::<f64>();
    let num = fact(b)
        * fact(q.n - b + 1)
        * gamma((k + 1.0) / 2.0)?
        * gamma((n - k + 1.0) / 2.0)?
        * gamma((a as f64 - 1.0) / 2.0)?;
    let den = 2.0 * PI * fact(q.n) * gamma((n + 1.0 + a as f64) / 2.0)?;
    Ok(if negative { -num / den } else { num / den })
}

/// [`multiplier_cosine`] in exact arithmetic, as `r · π^{e/2}`.
pub fn multiplier_cosine_exact(q: &MultiplierQuery) -> Result<ExactValue> {
    if q.n > MAX_EXACT_N {
        return Err(Error::Precondition(format!(
            "exact evaluation supports n <= {MAX_EXACT_N}, got {}",
            q.n
        )));
    }
    let (a, b, negative) = cosine_parts(q)?;
    let (n, k) = (q.n as i64, q.k as i64);
    let int = |m: i128| ExactValue::integer(m);
    let num = int(exact::factorial(b as u32))
        * int(exact::factorial((q.n - b + 1) as u32))
        * exact::gamma_half(k + 1)?
        * exact::gamma_half(n - k + 1)?
        * exact::gamma_half(a - 1)?;
    let den = int(2)
        * ExactValue::pi()
        * int(exact::factorial(q.n as u32))
        * exact::gamma_half(n + 1 + a)?;
    let value = num / den;
    Ok(if negative { -value } else { value })
}

/// One row of the cosine-transform scalar table on `Gr_k(R^8)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub k: usize,
    pub weight: Vec<i64>,
    pub value: f64,
    /// Exact value, e.g. `32/105π`.
    pub exact: String,
    /// The float value recognized as a rational multiple of `1` or `1/π`.
    pub reconstructed: String,
}

/// Cosine-transform scalars for every invariant eigenfunction on `Gr_k(R^8)`, `k = 2, 3, 4`.
pub fn table_scalars() -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for k in 2..=4 {
        for row in eigen_table(k)? {
            let q = MultiplierQuery::classical(8, k, &row.weight)?;
            let value = multiplier_cosine(&q)?;
            let reconstructed = exact::reconstruct_string(value).ok_or_else(|| {
                Error::NumericalDegeneracy(format!("no rational form found for {value}"))
            })?;
            rows.push(TableRow {
                k,
                weight: q.weight().to_vec(),
                value,
                exact: multiplier_cosine_exact(&q)?.to_string(),
                reconstructed,
            });
        }
    }
    Ok(rows)
}

/// `|cos(E, F)| = |det(Eᵀ F)|`, the product of the cosines of the principal angles.
pub fn cos_angle(e: &Frame, f: &Frame) -> Result<f64> {
    if e.k() != f.k() {
        return Err(Error::DimensionMismatch {
            expected: e.k(),
            got: f.k(),
        });
    }
    let m: Vec<Vec<f64>> = e
        .columns()
        .iter()
        .map(|u| f.columns().iter().map(|v| linalg::dot(u, v)).collect())
        .collect();
    Ok(linalg::det(&m).abs().min(1.0))
}

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::Precondition(format!(
            "need at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    Ok(())
}

/// Monte Carlo estimate of `∫ f(F) |cos(E,F)|^{α−ρ} dF` over Haar-random `F ∈ Gr_k(R^8)`.
pub fn mc_alpha_transform<F>(f: F, e: &Frame, alpha: f64, n: usize, seed: u64) -> Result<Estimate>
where
    F: Fn(&Frame) -> Result<f64> + Sync,
{
    check_samples(n)?;
    let exponent = alpha - 4.0;
    mc::estimate(n, seed, |rng| {
        let g = random_frame(e.k(), rng);
        let c = cos_angle(e, &g)?;
        Ok(f(&g)? * c.powf(exponent))
    })
}

/// Monte Carlo estimate of the cosine transform `∫ f(F) |cos(E,F)| dF` on `Gr_k(R^8)`.
pub fn mc_cosine_transform<F>(f: F, e: &Frame, n: usize, seed: u64) -> Result<Estimate>
where
    F: Fn(&Frame) -> Result<f64> + Sync,
{
    mc_alpha_transform(f, e, 5.0, n, seed)
}

/// Monte Carlo estimate of `∫ |cos(E,F)|^{α−n/2} dF` on `Gr_k(R^n)`, the
/// multiplier on constants. `E` is the span of the first `k` coordinate axes.
pub fn mc_constant_multiplier(
    n_dim: usize,
    k: usize,
    alpha: f64,
    n: usize,
    seed: u64,
) -> Result<Estimate> {
    check_samples(n)?;
    if k == 0 || k > n_dim {
        return Err(Error::Precondition(format!(
            "need 1 <= k <= n, got n = {n_dim}, k = {k}"
        )));
    }
    let exponent = alpha - n_dim as f64 / 2.0;
    mc::estimate(n, seed, |rng| {
        let f = random_stiefel(n_dim, k, rng);
        // Eᵀ F is the top k × k block of F
        let top: Vec<Vec<f64>> = (0..k).map(|i| f.iter().map(|c| c[i]).collect()).collect();
        Ok(linalg::det(&top).abs().min(1.0).powf(exponent))
    })
}

fn random_stiefel<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    loop {
        let cols: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        if let Some(o) = linalg::gram_schmidt(&cols) {
            return o;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{eigenfunction_eval, plane_lambda, EigenfunctionId};
    use crate::orbit::{
        apply_group, frame_from_angles, random_frame_seeded, random_group_element_seeded,
        DEFAULT_CLASSIFY_TOL,
    };

    fn q8(k: usize, w: &[i64]) -> MultiplierQuery {
        MultiplierQuery::classical(8, k, w).unwrap()
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma(-1.5).unwrap() - 4.0 * PI.sqrt() / 3.0).abs() < 1e-13);
        // Γ(x+1) = xΓ(x) across the reflection boundary
        for x in [0.3, 0.7, -0.2, -2.6, 3.3, 10.1] {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!((lhs / rhs - 1.0).abs() < 1e-13, "x = {x}");
        }
        assert!(matches!(gamma(0.0), Err(Error::Pole(_))));
        assert!(matches!(gamma(-3.0 + 1e-8), Err(Error::Pole(_))));
        assert!(gamma(-3.0 + 1e-5).is_ok());
    }

    #[test]
    fn siegel_gamma_values() {
        assert!((siegel_gamma(&[1.0]).unwrap() - 1.0).abs() < 1e-14);
        assert!((siegel_gamma(&[2.0, 2.0]).unwrap() - PI.sqrt() / 2.0).abs() < 1e-14);
        assert!((siegel_gamma(&[0.5]).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!(siegel_gamma(&[1.0, 0.5]).is_err());
    }

    #[test]
    fn query_validation() {
        assert!(MultiplierQuery::classical(8, 5, &[0]).is_err());
        assert!(MultiplierQuery::classical(8, 2, &[3, 1]).is_err());
        assert!(MultiplierQuery::classical(8, 2, &[2, 4]).is_err());
        assert!(MultiplierQuery::classical(8, 2, &[2, 2, 2]).is_err());
        assert!(MultiplierQuery::classical(8, 3, &[2, 2, -2]).is_err());
        assert!(MultiplierQuery::classical(8, 4, &[2, 2, 2, -2]).is_ok());
        let q = q8(4, &[4, 2, 0, 0]);
        assert_eq!(q.weight(), &[4, 2, 0, 0]);
        assert_eq!(q.depth(), 2);
        assert!(multiplier_cosine(&q8(2, &[4, 4])).is_err());
        let q = MultiplierQuery::new(8, 2, &[0], Some(6.5)).unwrap();
        assert!(multiplier_cosine(&q).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert!((multiplier_cosine(&q8(2, &[2, 2])).unwrap() - 1.0 / 252.0).abs() < 1e-15);
        let c = multiplier_cosine(&q8(3, &[0])).unwrap();
        assert!((c - 32.0 / (105.0 * PI)).abs() < 1e-15);
        let q = MultiplierQuery::classical(2, 1, &[0]).unwrap();
        assert!((multiplier_cosine(&q).unwrap() - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn exact_matches_float() {
        for n in 2..=12 {
            for k in 1..=n / 2 {
                for w in [vec![0], vec![2], vec![2, 2], vec![4, 2], vec![6, 2, 2]] {
                    let Ok(q) = MultiplierQuery::classical(n, k, &w) else {
                        continue;
                    };
                    let x = multiplier_cosine_exact(&q).unwrap().to_f64();
                    let y = multiplier_cosine(&q).unwrap();
                    assert!((x - y).abs() <= 1e-13 * y.abs(), "n={n} k={k} {w:?}");
                }
            }
        }
    }

    #[test]
    fn table_rows() {
        let rows = table_scalars().unwrap();
        let exact: Vec<&str> = rows.iter().map(|r| r.exact.as_str()).collect();
        let want = [
            "1/7",
            "1/252",
            "32/105π",
            "8/945π",
            "\u{2212}8/24255π",
            "3/35",
            "1/420",
            "1/1470",
            "\u{2212}1/10780",
            "1/70070",
        ];
        assert_eq!(exact, want);
        for r in &rows {
            assert_eq!(r.reconstructed, r.exact);
        }
        assert_eq!(rows[9].weight, vec![6, 2, 2, 2]);
        assert_eq!(rows[4].k, 3);
        assert!(rows[4].value < 0.0);
    }

    fn alpha_limit(n: usize, k: usize, w: &[i64]) -> f64 {
        classical_limit(&MultiplierQuery::classical(n, k, w).unwrap()).unwrap()
    }

    #[test]
    fn closed_form_is_the_alpha_limit() {
        for row in table_scalars().unwrap() {
            let limit = alpha_limit(8, row.k, &row.weight);
            let rel = (limit - row.value).abs() / row.value.abs();
            assert!(rel < 1e-8, "{row:?}: limit {limit}, rel {rel:e}");
        }
    }

    #[test]
    fn sign_of_last_entry_does_not_matter() {
        for w in [[2, 2, 2, 2], [4, 2, 2, 2], [6, 2, 2, 2]] {
            let mut neg = w;
            neg[3] = -2;
            let a = alpha_limit(8, 4, &w);
            let b = alpha_limit(8, 4, &neg);
            assert!((a - b).abs() < 1e-9 * a.abs(), "{w:?}: {a} vs {b}");
            let c = multiplier_cosine(&q8(4, &neg)).unwrap();
            assert!((c - a).abs() < 1e-9 * a.abs());
        }
    }

    #[test]
    fn alpha_multiplier_at_poles_points_to_the_classical_limit() {
        let q = MultiplierQuery::new(8, 2, &[2, 2], Some(5.0)).unwrap();
        let err = multiplier_alpha(&q).unwrap_err().to_string();
        assert!(err.contains("multiplier_cosine"), "{err}");
        assert!(multiplier_alpha(&MultiplierQuery::classical(8, 2, &[0]).unwrap()).is_err());
    }

    #[test]
    fn alpha_multiplier_structure() {
        // λ = 0: the λ-dependent Γ factors cancel
        let (n, k, alpha) = (8usize, 2usize, 6.5);
        let rho = 4.0;
        let q = MultiplierQuery::new(n, k, &[0, 0], Some(alpha)).unwrap();
        let direct = siegel_gamma(&[rho; 2]).unwrap()
            * siegel_gamma(&[(alpha - rho + k as f64) / 2.0; 2]).unwrap()
            / (siegel_gamma(&[k as f64 / 2.0; 2]).unwrap()
                * siegel_gamma(&[(alpha + rho) / 2.0; 2]).unwrap());
        assert!((multiplier_alpha(&q).unwrap() - direct).abs() < 1e-13);
        // k = 1 has no pole at the classical α
        let q = MultiplierQuery::new(2, 1, &[0], Some(2.0)).unwrap();
        assert!((multiplier_alpha(&q).unwrap() - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn alpha_multiplier_is_continuous() {
        let at = |a: f64| {
            multiplier_alpha(&MultiplierQuery::new(8, 3, &[4, 2, 2], Some(a)).unwrap()).unwrap()
        };
        let (a0, d) = (6.3, 1e-7);
        let slope = (at(a0 + d) - at(a0 - d)) / (2.0 * d);
        for h in [1e-4, 1e-5, 1e-6] {
            let diff = (at(a0 + h) - at(a0)).abs();
            assert!(diff <= 2.0 * slope.abs() * h + 1e-12);
        }
    }

    #[test]
    fn cos_angle_basics() {
        let e = random_frame_seeded(3, 1);
        assert!((cos_angle(&e, &e).unwrap() - 1.0).abs() < 1e-12);
        let c = e.complement().unwrap();
        let c3 = Frame::new(c.columns()[..3].to_vec()).unwrap();
        assert!(cos_angle(&e, &c3).unwrap() < 1e-12);
        let theta: f64 = 0.7;
        let mut a = [0.0; 8];
        a[0] = 1.0;
        let mut b = [0.0; 8];
        b[0] = theta.cos();
        b[3] = theta.sin();
        let l1 = Frame::new(vec![a]).unwrap();
        let l2 = Frame::new(vec![b]).unwrap();
        assert!((cos_angle(&l1, &l2).unwrap() - theta.cos()).abs() < 1e-14);
        assert!(cos_angle(&l1, &e).is_err());
        let f = random_frame_seeded(3, 2);
        let x = cos_angle(&e, &f).unwrap();
        assert!((x - cos_angle(&f, &e).unwrap()).abs() < 1e-14);
        let rot = vec![
            vec![0.6, -0.8, 0.0],
            vec![0.8, 0.6, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        assert!((x - cos_angle(&e.rotate(&rot), &f).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn cos_angle_is_group_invariant() {
        for s in 0..20 {
            let k = 1 + s % 4;
            let e = random_frame_seeded(k, 100 + s as u64);
            let f = random_frame_seeded(k, 200 + s as u64);
            let g = random_group_element_seeded(300 + s as u64);
            let a = cos_angle(&e, &f).unwrap();
            let b = cos_angle(&apply_group(&e, &g), &apply_group(&f, &g)).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn mc_line_in_the_plane() {
        let est = mc_constant_multiplier(2, 1, 2.0, 100_000, 7).unwrap();
        assert!(est.within(2.0 / PI, 3.0), "{est:?}");
    }

    #[test]
    fn mc_alpha_kernel_matches_multiplier() {
        let q = MultiplierQuery::new(8, 2, &[0, 0], Some(6.5)).unwrap();
        let c = multiplier_alpha(&q).unwrap();
        let e = random_frame_seeded(2, 3);
        let est = mc_alpha_transform(|_| Ok(1.0), &e, 6.5, 200_000, 11).unwrap();
        assert!(est.within(c, 3.0), "{est:?} vs {c}");
        let est = mc_constant_multiplier(8, 2, 6.5, 200_000, 12).unwrap();
        assert!(est.within(c, 3.0), "{est:?} vs {c}");
    }

    #[test]
    fn mc_eigenfunction_is_proportional() {
        let id = EigenfunctionId::new(2, 1).unwrap();
        let f = |g: &Frame| eigenfunction_eval(id, &plane_lambda(g, DEFAULT_CLASSIFY_TOL)?);
        let c = multiplier_cosine(&q8(2, &[2, 2])).unwrap();
        let mut ratios = Vec::new();
        for (s, theta) in [[0.0, 0.0], [0.0, PI / 2.0]].iter().enumerate() {
            let e = frame_from_angles(theta).unwrap();
            let fe = f(&e).unwrap();
            assert!(fe.abs() > 2.0);
            let est = mc_cosine_transform(f, &e, 100_000, 40 + s as u64).unwrap();
            assert!(est.within(c * fe, 3.0), "{est:?} vs {}", c * fe);
            ratios.push((est.mean / fe, est.std_error / fe.abs()));
        }
        let (r1, s1) = ratios[0];
        let (r2, s2) = ratios[1];
        assert!((r1 - r2).abs() <= 3.0 * (s1 * s1 + s2 * s2).sqrt());
    }

    #[test]
    fn mc_needs_enough_samples() {
        let e = random_frame_seeded(2, 1);
        assert!(mc_cosine_transform(|_| Ok(1.0), &e, 10, 1).is_err());
    }
}
