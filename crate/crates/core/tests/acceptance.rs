//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use quatgeom::cosine::{
    self, mc_constant_multiplier, mc_cosine_transform, multiplier_cosine, MultiplierQuery,
};
use quatgeom::hherm::{self, moore_det, moore_eigenvalues, LambdaTuple};
use quatgeom::invariants::{eigen_table, eigenfunction_eval, plane_lambda, EigenfunctionId, DIMS};
use quatgeom::linalg;
use quatgeom::orbit::{
    apply_group, canonicalize, class_distance, classify, frame_from_angles, gram, random_frame,
    random_group_element, reconstruct, Frame, DEFAULT_CLASSIFY_TOL,
};
use quatgeom::spectral::{
    casimir_eigenvalue, check_eigenfunctions, check_laplacian_identities, laplacian_matrix,
    orbit_volume, orbit_volume_numeric, sample_torus_points, HighestWeight,
};
use quatgeom::valuation::{basis, basis_census, klain_extract_many, CroftonValuation};
use quatgeom::Result;

const MOORE_TOL: f64 = 1e-9;
const CLASS_TOL: f64 = 1e-6;
const RANK_TOL: f64 = 1e-8;
const LAPLACIAN_H: f64 = 1e-3;
const LAPLACIAN_TOL: f64 = 1e-3;
/// Accepted range for the error ratio between step `h` and `h/2`.
const CONVERGENCE_RATIO: (f64, f64) = (3.0, 5.0);
const SIGMAS: f64 = 3.0;
const VOLUME_SPREAD_TOL: f64 = 1e-6;
const TABLE: [&str; 10] = [
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

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { pass, detail })
}

fn run(id: u32, limit: Option<Duration>, check: impl FnOnce() -> Result<Verdict>) -> bool {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let (pass, detail) = match outcome {
        Ok(v) => (v.pass && in_time, v.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let budget = limit.map_or(String::new(), |l| format!(" / limit {} s", l.as_secs()));
    println!(
        "criterion {id:>2}: {}  {detail} [{:.1} s{budget}]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

fn random_lambda(rng: &mut ChaCha8Rng, k: usize) -> LambdaTuple {
    let n = k * (k - 1) / 2;
    LambdaTuple::new(k, (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()).unwrap()
}

fn random_rotation(rng: &mut ChaCha8Rng, k: usize) -> Vec<Vec<f64>> {
    let cols: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..k).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    linalg::gram_schmidt(&cols).unwrap()
}

/// Planes with repeated `ψ` eigenvalues, in a random orthonormal basis.
fn degenerate_frame(rng: &mut ChaCha8Rng, k: usize, which: usize) -> Frame {
    let theta: Vec<f64> = match which % 3 {
        0 => vec![0.0; k],
        1 => (0..k)
            .map(|p| if p % 2 == 0 { 0.0 } else { PI / 2.0 })
            .collect(),
        _ => vec![rng.random_range(0.0..TAU); k],
    };
    frame_from_angles(&theta)
        .unwrap()
        .rotate(&random_rotation(rng, k))
}

fn moore_closed_forms() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for k in 2..=4 {
        for _ in 0..1000 {
            let lam = random_lambda(&mut rng, k);
            let numeric = moore_det(&hherm::mlambda(&lam)?)?;
            worst = worst.max((numeric - hherm::mlambda_det_closed(&lam)?).abs());
        }
    }
    verdict(
        worst <= MOORE_TOL,
        format!("Moore determinant vs closed form, 3000 tuples, max diff {worst:.2e}"),
    )
}

fn orbit_invariance() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst: f64 = 0.0;
    let mut fallbacks = 0;
    for k in 2..=4 {
        for s in 0..200 {
            let f = if s < 170 {
                random_frame(k, &mut rng)
            } else {
                degenerate_frame(&mut rng, k, s)
            };
            let g = random_group_element(&mut rng);
            let a = classify(&f, DEFAULT_CLASSIFY_TOL)?;
            let b = classify(&apply_group(&f, &g), DEFAULT_CLASSIFY_TOL)?;
            fallbacks += usize::from(a.degenerate) + usize::from(b.degenerate);
            worst = worst.max(class_distance(&a.lam, &b.lam)?);
        }
    }
    verdict(
        worst <= CLASS_TOL && fallbacks > 0,
        format!("600 pairs, {fallbacks} fallback classifications, max class distance {worst:.2e}"),
    )
}

fn round_trip() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst: f64 = 0.0;
    for k in 2..=4 {
        for s in 0..200 {
            let lam = if s % 2 == 0 {
                let theta: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..TAU)).collect();
                LambdaTuple::from_angles(&theta)?
            } else {
                classify(&random_frame(k, &mut rng), DEFAULT_CLASSIFY_TOL)?.lam
            };
            let back = classify(
                &reconstruct(&lam, DEFAULT_CLASSIFY_TOL)?,
                DEFAULT_CLASSIFY_TOL,
            )?;
            worst = worst.max(class_distance(&back.lam, &canonicalize(&lam))?);
        }
    }
    verdict(
        worst <= CLASS_TOL,
        format!("600 admissible tuples, max class distance {worst:.2e}"),
    )
}

fn gram_rank() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst: f64 = 0.0;
    for k in 3..=4 {
        for _ in 0..1000 {
            let ev = moore_eigenvalues(&gram(&random_frame(k, &mut rng)))?;
            worst = worst.max(ev[2].abs());
        }
    }
    verdict(
        worst <= RANK_TOL,
        format!("2000 frames, max third Moore eigenvalue {worst:.2e}"),
    )
}

fn laplacian_identities() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    let mut ratios = Vec::new();
    let mut identities = 1; // Δ(f_{k,0}) = 0, checked for every k below
    for k in 2..=4 {
        let at_h = check_laplacian_identities(k, 100, 105, LAPLACIAN_H, LAPLACIAN_TOL)?;
        let at_half = check_laplacian_identities(k, 100, 105, LAPLACIAN_H / 2.0, LAPLACIAN_TOL)?;
        for (a, b) in at_h.iter().zip(&at_half) {
            worst = worst.max(a.max_rel_error);
            if a.max_rel_error > 0.0 {
                identities += 1;
                ratios.push(a.max_rel_error / b.max_rel_error);
            } else if !a.identity_name.ends_with("= 0") {
                return verdict(false, format!("{} has no error signal", a.identity_name));
            }
        }
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), r| (l.min(*r), h.max(*r)));
    let converging = lo >= CONVERGENCE_RATIO.0 && hi <= CONVERGENCE_RATIO.1;
    verdict(
        worst <= LAPLACIAN_TOL && converging && identities == 8,
        format!(
            "{identities} identities at 100 points per k, max rel error {worst:.2e} at h = {LAPLACIAN_H}, \
             error ratio h : h/2 in [{lo:.2}, {hi:.2}]"
        ),
    )
}

fn eigen_table_check() -> Result<Verdict> {
    let mut algebraic = true;
    let mut worst: f64 = 0.0;
    let mut rows = 0;
    for k in 2..=4 {
        let l = laplacian_matrix(k)?;
        for row in eigen_table(k)? {
            rows += 1;
            // Δ(Σ c_i f_i) = Σ_i c_i Σ_j L_ij f_j must equal μ Σ_j c_j f_j
            for j in 0..row.coeffs.len() {
                let image: i64 = (0..row.coeffs.len()).map(|i| row.coeffs[i] * l[i][j]).sum();
                algebraic &= image == row.eigenvalue * row.coeffs[j];
            }
            algebraic &= [0, 28, 40, 60, 96].contains(&row.eigenvalue);
        }
        for r in check_eigenfunctions(k, 100, 106, LAPLACIAN_H, LAPLACIAN_TOL)? {
            worst = worst.max(r.max_rel_error);
        }
    }
    verdict(
        algebraic && worst <= LAPLACIAN_TOL,
        format!("{rows} rows, algebraic check {algebraic}, FD max rel error {worst:.2e}"),
    )
}

fn casimir() -> Result<Verdict> {
    let mut pairs = Vec::new();
    for row in eigen_table(4)? {
        let c = casimir_eigenvalue(HighestWeight::new(row.weight)?, 8);
        pairs.push((row.weight, row.eigenvalue, c));
    }
    let pass = pairs.len() == 5 && pairs.iter().all(|(_, e, c)| e == c);
    let text: Vec<String> = pairs
        .iter()
        .map(|(w, e, c)| format!("{w:?}:{c}/{e}"))
        .collect();
    verdict(pass, format!("Casimir vs table: {}", text.join(" ")))
}

fn multiplier_table() -> Result<Verdict> {
    let rows = cosine::table_scalars()?;
    let exact: Vec<&str> = rows.iter().map(|r| r.exact.as_str()).collect();
    let printed: Vec<&str> = rows.iter().map(|r| r.reconstructed.as_str()).collect();
    let pass = exact == TABLE && printed == TABLE;
    verdict(pass, format!("scalars {}", printed.join(", ")))
}

fn mc_spot_checks() -> Result<Verdict> {
    let n = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut parts = Vec::new();
    let mut pass = true;
    for (k, seed) in [(2, 1091), (3, 1092), (4, 1093)] {
        let e = random_frame(k, &mut rng);
        let want = multiplier_cosine(&MultiplierQuery::classical(8, k, &[0])?)?;
        let est = mc_cosine_transform(|_| Ok(1.0), &e, n, seed)?;
        pass &= est.within(want, SIGMAS);
        parts.push(format!("k={k} const z={:.2}", est.z_score(want)));
    }
    let id = EigenfunctionId::new(2, 1)?;
    let f = |g: &Frame| eigenfunction_eval(id, &plane_lambda(g, DEFAULT_CLASSIFY_TOL)?);
    let e = random_frame(2, &mut rng);
    let want = multiplier_cosine(&MultiplierQuery::classical(8, 2, &[2, 2])?)? * f(&e)?;
    let est = mc_cosine_transform(f, &e, n, 1094)?;
    pass &= est.within(want, SIGMAS);
    parts.push(format!("k=2 eigenfunction z={:.2}", est.z_score(want)));
    let est = mc_constant_multiplier(2, 1, 2.0, 100_000, 1095)?;
    pass &= est.within(2.0 / PI, SIGMAS);
    parts.push(format!("(n,k)=(2,1) z={:.2}", est.z_score(2.0 / PI)));
    verdict(pass, parts.join(", "))
}

fn crofton_klain() -> Result<Verdict> {
    let n = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let mut count = 0;
    let mut misses = Vec::new();
    let mut worst_z: f64 = 0.0;
    for k in 0..=8 {
        let vals = basis(k)?;
        for p in 0..10 {
            let e = random_frame(k, &mut rng);
            let est = klain_extract_many(&vals, &e, n, 1100 + 10 * k as u64 + p)?;
            for (i, (v, x)) in vals.iter().zip(&est).enumerate() {
                count += 1;
                let want = v.klain_value(&e)?;
                let ok = if x.std_error == 0.0 {
                    (x.mean - want).abs() <= 1e-12
                } else {
                    worst_z = worst_z.max(x.z_score(want));
                    x.within(want, SIGMAS)
                };
                if !ok {
                    misses.push(format!("f_{{{k},{i}}} plane {p} z={:.2}", x.z_score(want)));
                }
            }
        }
    }
    let alesker = CroftonValuation::from_klain(2, &[1.0, -1.0])?;
    let mut a = [0.0; 8];
    a[0] = 1.0;
    let mut b = [0.0; 8];
    b[2] = 1.0; // e·j, so span(e, e·j) lies in the quaternionic line H × {0}
    let line_plane = Frame::new(vec![a, b])?;
    let est = klain_extract_many(std::slice::from_ref(&alesker), &line_plane, n, 1199)?[0];
    let alesker_ok = est.within(0.0, SIGMAS);
    let census_ok = count == 190 && DIMS.iter().sum::<usize>() == 19;
    verdict(
        misses.is_empty() && alesker_ok && census_ok,
        format!(
            "{count} extractions, worst z {worst_z:.2}, outside 3σ: [{}]; \
             Alesker direction on quaternionic line {:.3e} ± {:.1e}",
            misses.join("; "),
            est.mean,
            est.std_error
        ),
    )
}

fn volume_ratio() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    for k in 2..=4 {
        let ratios: Vec<f64> = sample_torus_points(k, 20, 111)?
            .iter()
            .map(|p| Ok(orbit_volume_numeric(p)? / orbit_volume(p)))
            .collect::<Result<_>>()?;
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let spread = ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max) / mean;
        worst = worst.max(spread);
    }
    verdict(
        worst <= VOLUME_SPREAD_TOL,
        format!("20 points per k, max relative spread {worst:.2e}"),
    )
}

fn census() -> Result<Verdict> {
    let c = basis_census()?;
    let total: usize = c.iter().sum();
    verdict(
        c == [1, 1, 2, 3, 5, 3, 2, 1, 1] && total == 19,
        format!("census {c:?}, total {total}"),
    )
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let results = [
        run(1, secs(10), moore_closed_forms),
        run(2, secs(60), orbit_invariance),
        run(3, secs(60), round_trip),
        run(4, None, gram_rank),
        run(5, secs(120), laplacian_identities),
        run(6, None, eigen_table_check),
        run(7, None, casimir),
        run(8, None, multiplier_table),
        run(9, secs(120), mc_spot_checks),
        run(10, secs(600), crofton_klain),
        run(11, None, volume_ratio),
        run(12, None, census),
    ];
    let passed = results.iter().filter(|p| **p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
