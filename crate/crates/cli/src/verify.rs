//! Verification suites behind `quatgeom verify`.

use std::f64::consts::{PI, TAU};

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use quatgeom::cosine::{
    classical_limit, mc_constant_multiplier, mc_cosine_transform, multiplier_cosine, table_scalars,
    MultiplierQuery,
};
use quatgeom::hherm::{self, moore_det, moore_eigenvalues, LambdaTuple};
use quatgeom::invariants::{eigen_table, eigenfunction_eval, plane_lambda, EigenfunctionId, DIMS};
use quatgeom::mc::Estimate;
use quatgeom::orbit::{
    apply_group, canonicalize, class_distance, classify, frame_from_angles, gram, random_frame,
    random_group_element, random_rotation, reconstruct, Frame, DEFAULT_CLASSIFY_TOL,
};
use quatgeom::spectral::{
    casimir_eigenvalue, check_eigenfunctions, check_laplacian_identities, laplacian_matrix,
    orbit_volume, orbit_volume_numeric, sample_torus_points, HighestWeight,
};
use quatgeom::valuation::{basis, basis_census, klain_extract_many, CroftonValuation};

use crate::{Output, RunConfig, Suite};

const MOORE_TOL: f64 = 1e-9;
const CLASS_TOL: f64 = 1e-6;
const RANK_TOL: f64 = 1e-8;
const LAPLACIAN_TOL: f64 = 1e-3;
const CONVERGENCE_RATIO: (f64, f64) = (3.0, 5.0);
const LIMIT_TOL: f64 = 1e-8;
const VOLUME_SPREAD_TOL: f64 = 1e-6;
const SIGMAS: f64 = 3.0;
/// Random planes per degree in the Crofton suite.
const CROFTON_PLANES: usize = 2;

#[derive(Debug, Clone, Serialize)]
struct Check {
    suite: &'static str,
    name: String,
    pass: bool,
    value: f64,
    tolerance: f64,
}

struct Checks {
    suite: &'static str,
    list: Vec<Check>,
}

impl Checks {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            list: Vec::new(),
        }
    }

    /// Passes when `value <= tolerance`.
    fn at_most(&mut self, name: impl Into<String>, value: f64, tolerance: f64) {
        self.list.push(Check {
            suite: self.suite,
            name: name.into(),
            pass: value <= tolerance,
            value,
            tolerance,
        });
    }

    fn holds(&mut self, name: impl Into<String>, pass: bool) {
        self.list.push(Check {
            suite: self.suite,
            name: name.into(),
            pass,
            value: f64::from(u8::from(pass)),
            tolerance: 1.0,
        });
    }

    /// Passes when the estimate is within [`SIGMAS`] standard errors of `target`; reports the z-score.
    fn within_sigma(&mut self, name: impl Into<String>, est: &Estimate, target: f64) {
        self.at_most(name, est.z_score(target), SIGMAS);
    }
}

pub fn run(suite: Suite, config: &RunConfig) -> Result<Output> {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Orbit {
        checks.extend(orbit(config)?);
    }
    if all || suite == Suite::Laplacian {
        checks.extend(laplacian(config)?);
    }
    if all || suite == Suite::Cosine {
        checks.extend(cosine(config)?);
    }
    if all || suite == Suite::Crofton {
        checks.extend(crofton(config)?);
    }
    let success = checks.iter().all(|c| c.pass);
    let mut tsv = String::from("suite\tcheck\tpass\tvalue\ttolerance\n");
    for c in &checks {
        tsv.push_str(&format!(
            "{}\t{}\t{}\t{:e}\t{:e}\n",
            c.suite, c.name, c.pass, c.value, c.tolerance
        ));
    }
    let json = json!({
        "seed": config.seed,
        "samples": config.samples,
        "h": config.h,
        "pass": success,
        "checks": checks,
    });
    Ok(Output { json, tsv, success })
}

fn rng(config: &RunConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(config.seed);
    r.set_stream(stream);
    r
}

/// Planes with repeated `ψ` eigenvalues, in a random orthonormal basis.
fn degenerate_frame(rng: &mut ChaCha8Rng, k: usize, which: usize) -> Result<Frame> {
    let theta: Vec<f64> = match which % 3 {
        0 => vec![0.0; k],
        1 => (0..k)
            .map(|p| if p % 2 == 0 { 0.0 } else { PI / 2.0 })
            .collect(),
        _ => vec![rng.random_range(0.0..TAU); k],
    };
    Ok(frame_from_angles(&theta)?.rotate(&random_rotation(k, rng)))
}

fn orbit(config: &RunConfig) -> Result<Vec<Check>> {
    let mut c = Checks::new("orbit");
    let tol = config.tol_or(CLASS_TOL);
    let mut r = rng(config, 1);
    for k in 2..=4 {
        let n = k * (k - 1) / 2;
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let values = (0..n).map(|_| r.random_range(-1.0..=1.0)).collect();
            let lam = LambdaTuple::new(k, values)?;
            let numeric = moore_det(&hherm::mlambda(&lam)?)?;
            worst = worst.max((numeric - hherm::mlambda_det_closed(&lam)?).abs());
        }
        c.at_most(
            format!("moore determinant closed form k={k}"),
            worst,
            MOORE_TOL,
        );
    }
    for k in 2..=4 {
        let mut worst: f64 = 0.0;
        for s in 0..200 {
            let f = if s < 170 {
                random_frame(k, &mut r)
            } else {
                degenerate_frame(&mut r, k, s)?
            };
            let g = random_group_element(&mut r);
            let a = classify(&f, DEFAULT_CLASSIFY_TOL)?;
            let b = classify(&apply_group(&f, &g), DEFAULT_CLASSIFY_TOL)?;
            worst = worst.max(class_distance(&a.lam, &b.lam)?);
        }
        c.at_most(format!("orbit invariance k={k}"), worst, tol);
    }
    for k in 2..=4 {
        let mut worst: f64 = 0.0;
        for s in 0..200 {
            let lam = if s % 2 == 0 {
                let theta: Vec<f64> = (0..k).map(|_| r.random_range(0.0..TAU)).collect();
                LambdaTuple::from_angles(&theta)?
            } else {
                classify(&random_frame(k, &mut r), DEFAULT_CLASSIFY_TOL)?.lam
            };
            let back = classify(
                &reconstruct(&lam, DEFAULT_CLASSIFY_TOL)?,
                DEFAULT_CLASSIFY_TOL,
            )?;
            worst = worst.max(class_distance(&back.lam, &canonicalize(&lam))?);
        }
        c.at_most(format!("reconstruct round trip k={k}"), worst, tol);
    }
    for k in 3..=4 {
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let ev = moore_eigenvalues(&gram(&random_frame(k, &mut r)))?;
            worst = worst.max(ev[2].abs());
        }
        c.at_most(format!("gram Moore rank <= 2 k={k}"), worst, RANK_TOL);
    }
    Ok(c.list)
}

fn laplacian(config: &RunConfig) -> Result<Vec<Check>> {
    let mut c = Checks::new("laplacian");
    let tol = config.tol_or(LAPLACIAN_TOL);
    for k in 2..=4 {
        let at_h = check_laplacian_identities(k, 100, config.seed, config.h, tol)?;
        let at_half = check_laplacian_identities(k, 100, config.seed, config.h / 2.0, tol)?;
        for (a, b) in at_h.iter().zip(&at_half) {
            c.at_most(a.identity_name.clone(), a.max_rel_error, tol);
            if a.max_rel_error > 0.0 {
                let ratio = a.max_rel_error / b.max_rel_error;
                c.holds(
                    format!("{} error ratio h : h/2 = {ratio:.3}", a.identity_name),
                    (CONVERGENCE_RATIO.0..=CONVERGENCE_RATIO.1).contains(&ratio),
                );
            }
        }
        for r in check_eigenfunctions(k, 100, config.seed, config.h, tol)? {
            c.at_most(r.identity_name, r.max_rel_error, tol);
        }
        let l = laplacian_matrix(k)?;
        for row in eigen_table(k)? {
            let n = row.coeffs.len();
            let exact = (0..n).all(|j| {
                (0..n).map(|i| row.coeffs[i] * l[i][j]).sum::<i64>()
                    == row.eigenvalue * row.coeffs[j]
            });
            c.holds(format!("eigenfunction k={k} row {} is exact", row.j), exact);
        }
        let ratios: Vec<f64> = sample_torus_points(k, 20, config.seed)?
            .iter()
            .map(|p| Ok(orbit_volume_numeric(p)? / orbit_volume(p)))
            .collect::<Result<_>>()?;
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let spread = ratios.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max) / mean;
        c.at_most(
            format!("orbit volume ratio spread k={k}"),
            spread,
            VOLUME_SPREAD_TOL,
        );
    }
    for row in eigen_table(4)? {
        let cas = casimir_eigenvalue(HighestWeight::new(row.weight)?, 8);
        c.holds(
            format!("casimir {:?} = {}", row.weight, row.eigenvalue),
            cas == row.eigenvalue,
        );
    }
    Ok(c.list)
}

fn cosine(config: &RunConfig) -> Result<Vec<Check>> {
    let mut c = Checks::new("cosine");
    for row in table_scalars()? {
        c.holds(
            format!(
                "k={} {:?} exact {} = reconstructed {}",
                row.k, row.weight, row.exact, row.reconstructed
            ),
            row.exact == row.reconstructed,
        );
        let limit = classical_limit(&MultiplierQuery::classical(8, row.k, &row.weight)?)?;
        c.at_most(
            format!("k={} {:?} alpha limit", row.k, row.weight),
            (limit - row.value).abs() / row.value.abs(),
            LIMIT_TOL,
        );
    }
    let mut r = rng(config, 3);
    for k in 2..=4 {
        let e = random_frame(k, &mut r);
        let want = multiplier_cosine(&MultiplierQuery::classical(8, k, &[0])?)?;
        let est = mc_cosine_transform(|_| Ok(1.0), &e, config.samples, config.seed + k as u64)?;
        c.within_sigma(format!("monte carlo constant k={k} (z-score)"), &est, want);
    }
    let id = EigenfunctionId::new(2, 1)?;
    let f = |g: &Frame| eigenfunction_eval(id, &plane_lambda(g, DEFAULT_CLASSIFY_TOL)?);
    let e = random_frame(2, &mut r);
    let want = multiplier_cosine(&MultiplierQuery::classical(8, 2, &[2, 2])?)? * f(&e)?;
    let est = mc_cosine_transform(f, &e, config.samples, config.seed + 5)?;
    c.within_sigma("monte carlo eigenfunction k=2 (z-score)", &est, want);
    let want = multiplier_cosine(&MultiplierQuery::classical(2, 1, &[0])?)?;
    let est = mc_constant_multiplier(2, 1, 2.0, config.samples, config.seed + 6)?;
    c.within_sigma("monte carlo lines in R^2 (z-score)", &est, want);
    Ok(c.list)
}

fn crofton(config: &RunConfig) -> Result<Vec<Check>> {
    let mut c = Checks::new("crofton");
    let census = basis_census()?;
    c.holds(format!("basis census {census:?}"), census == DIMS);
    let mut r = rng(config, 4);
    for k in 0..=8 {
        let vals = basis(k)?;
        for p in 0..CROFTON_PLANES {
            let e = random_frame(k, &mut r);
            let seed = config.seed.wrapping_add((10 * k + p) as u64);
            let est = klain_extract_many(&vals, &e, config.samples, seed)?;
            for (i, (v, x)) in vals.iter().zip(&est).enumerate() {
                let want = v.klain_value(&e)?;
                if x.std_error == 0.0 {
                    c.at_most(
                        format!("klain f_{{{k},{i}}} plane {p} (exact)"),
                        (x.mean - want).abs(),
                        1e-12,
                    );
                } else {
                    c.within_sigma(format!("klain f_{{{k},{i}}} plane {p} (z-score)"), x, want);
                }
            }
        }
    }
    let alesker = CroftonValuation::from_klain(2, &[1.0, -1.0])?;
    let mut a = [0.0; 8];
    a[0] = 1.0;
    let mut b = [0.0; 8];
    b[2] = 1.0;
    let plane = Frame::new(vec![a, b])?;
    let est = klain_extract_many(
        std::slice::from_ref(&alesker),
        &plane,
        config.samples,
        config.seed,
    )?[0];
    c.within_sigma(
        "f_{2,0} - f_{2,1} on a quaternionic line (z-score)",
        &est,
        0.0,
    );
    Ok(c.list)
}
