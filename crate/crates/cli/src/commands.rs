use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use quatgeom::cosine::table_scalars;
use quatgeom::hherm::{
    moore_det, moore_eigenvalues, moore_rank, HHMatrix, LambdaTuple, QMatrix, DEFAULT_RANK_TOL,
};
use quatgeom::invariants::{eigen_table, InvariantFunctionId};
use quatgeom::orbit::{
    self, canonicalize, frame_from_angles, lambda_from_map, lambda_to_map, Frame, LambdaClass,
    DEFAULT_CLASSIFY_TOL,
};
use quatgeom::quat::Quaternion;
use quatgeom::spectral::{casimir_eigenvalue, identity_name, laplacian_matrix, HighestWeight};
use quatgeom::valuation::{basis_census, evaluate, make_basis_valuation, ConvexBody};

use crate::{Output, RunConfig, Table};

/// Reads a JSON file; parse errors carry line and column.
pub fn read_json(path: &Path) -> Result<Value> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn ok(json: Value, tsv: String) -> Result<Output> {
    Ok(Output {
        json,
        tsv,
        success: true,
    })
}

fn lambda_tsv(lam: &LambdaTuple) -> String {
    lambda_to_map(lam)
        .iter()
        .map(|(pair, v)| format!("lambda_{pair}\t{v}\n"))
        .collect()
}

fn frame_tsv(frame: &Frame) -> String {
    frame
        .columns()
        .iter()
        .map(|c| c.iter().map(f64::to_string).collect::<Vec<_>>().join("\t") + "\n")
        .collect()
}

pub fn format_weight(w: &[i64]) -> String {
    let parts: Vec<String> = w.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn classify(path: &Path, config: &RunConfig) -> Result<Output> {
    let frame = Frame::from_json(&read_json(path)?)?;
    let mut class = classify_frame(&frame, config)?;
    class.lam = canonicalize(&class.lam);
    let tsv = format!(
        "{}residual\t{}\ndegenerate\t{}\n",
        lambda_tsv(&class.lam),
        class.residual,
        class.degenerate
    );
    ok(class.to_json(), tsv)
}

fn classify_frame(frame: &Frame, config: &RunConfig) -> Result<LambdaClass> {
    Ok(orbit::classify(frame, config.tol_or(DEFAULT_CLASSIFY_TOL))?)
}

pub fn reconstruct(path: &Path, config: &RunConfig) -> Result<Output> {
    let v = read_json(path)?;
    let k = v
        .get("k")
        .and_then(Value::as_u64)
        .ok_or_else(|| anyhow!("{}: missing integer \"k\"", path.display()))? as usize;
    let map: BTreeMap<String, f64> = serde_json::from_value(
        v.get("lambda").cloned().unwrap_or(Value::Null),
    )
    .with_context(|| {
        format!(
            "{}: \"lambda\" must map pair labels to numbers",
            path.display()
        )
    })?;
    let lam = lambda_from_map(k, &map)?;
    let frame = orbit::reconstruct(&lam, config.tol_or(DEFAULT_CLASSIFY_TOL))?;
    ok(frame.to_json(), frame_tsv(&frame))
}

pub fn angles(theta: &[f64]) -> Result<Output> {
    let frame = frame_from_angles(theta)?;
    let lam = LambdaTuple::from_angles(theta)?;
    let json = json!({
        "theta": theta,
        "frame": frame.to_json(),
        "lambda": lambda_to_map(&lam),
    });
    ok(json, lambda_tsv(&lam) + &frame_tsv(&frame))
}

pub fn moore(path: &Path, config: &RunConfig) -> Result<Output> {
    let v = read_json(path)?;
    let rows: Vec<Vec<[f64; 4]>> = serde_json::from_value(
        v.get("matrix").cloned().unwrap_or(Value::Null),
    )
    .with_context(|| {
        format!(
            "{}: \"matrix\" must be rows of quaternions [a, b, c, d]",
            path.display()
        )
    })?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        bail!("{}: matrix must be square", path.display());
    }
    let q = HHMatrix::new(QMatrix::from_fn(n, n, |i, j| {
        Quaternion::from_array(rows[i][j])
    }))?;
    let eigenvalues = moore_eigenvalues(&q)?;
    let det = moore_det(&q)?;
    let rank = moore_rank(&q, config.tol_or(DEFAULT_RANK_TOL))?;
    let json = json!({"dim": n, "eigenvalues": eigenvalues, "det": det, "rank": rank});
    let ev: Vec<String> = eigenvalues.iter().map(f64::to_string).collect();
    ok(
        json,
        format!("eigenvalues\t{}\ndet\t{det}\nrank\t{rank}\n", ev.join("\t")),
    )
}

fn combination(k: usize, coeffs: &[i64]) -> String {
    let mut out = String::new();
    for (i, &c) in coeffs.iter().enumerate().filter(|(_, c)| **c != 0) {
        let sign = match (out.is_empty(), c < 0) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        };
        let mag = if c.abs() == 1 {
            String::new()
        } else {
            c.abs().to_string()
        };
        out.push_str(&format!("{sign}{mag}f_{{{k},{i}}}"));
    }
    out
}

pub fn tables(which: Table) -> Result<Output> {
    match which {
        Table::Dims => {
            let dims = basis_census()?;
            let total: usize = dims.iter().sum();
            let row: Vec<String> = dims.iter().map(usize::to_string).collect();
            let degrees: Vec<String> = (0..dims.len()).map(|k| k.to_string()).collect();
            ok(
                json!({"dims": dims, "total": total}),
                format!(
                    "k\t{}\ndim\t{}\ntotal\t{total}\n",
                    degrees.join("\t"),
                    row.join("\t")
                ),
            )
        }
        Table::Multipliers => {
            let rows = table_scalars()?;
            let mut tsv = String::from("k\tweight\texact\tvalue\n");
            let mut json_rows = Vec::new();
            for r in rows {
                let mut w = r.weight.clone();
                w.resize(4, 0);
                tsv.push_str(&format!(
                    "{}\t{}\t{}\t{:e}\n",
                    r.k,
                    format_weight(&w),
                    r.exact,
                    r.value
                ));
                json_rows.push(json!({"k": r.k, "weight": w, "exact": r.exact, "value": r.value}));
            }
            ok(Value::Array(json_rows), tsv)
        }
        Table::Eigenvalues => {
            let mut tsv = String::from("k\tweight\teigenvalue\tcasimir\teigenfunction\n");
            let mut json_rows = Vec::new();
            for k in 2..=4 {
                for row in eigen_table(k)? {
                    let casimir = casimir_eigenvalue(HighestWeight::new(row.weight)?, 8);
                    let f = combination(k, &row.coeffs);
                    tsv.push_str(&format!(
                        "{k}\t{}\t{}\t{casimir}\t{f}\n",
                        format_weight(&row.weight),
                        row.eigenvalue
                    ));
                    json_rows.push(json!({
                        "k": k,
                        "weight": format_weight(&row.weight),
                        "eigenvalue": row.eigenvalue,
                        "casimir": casimir,
                        "eigenfunction": f,
                    }));
                }
            }
            ok(Value::Array(json_rows), tsv)
        }
        Table::Laplacian => {
            let mut names = Vec::new();
            for k in 2..=4 {
                for (i, row) in laplacian_matrix(k)?.iter().enumerate() {
                    names.push(identity_name(k, i, row));
                }
            }
            let tsv = names.iter().map(|n| format!("{n}\n")).collect();
            ok(json!(names), tsv)
        }
    }
}

pub fn crofton_eval(
    path: &Path,
    degree: usize,
    index: usize,
    config: &RunConfig,
) -> Result<Output> {
    let body = ConvexBody::from_json(&read_json(path)?)?;
    let valuation = make_basis_valuation(InvariantFunctionId::new(degree, index)?)?;
    let est = evaluate(&valuation, &body, config.samples, config.seed)?;
    let json = json!({
        "degree": degree,
        "index": index,
        "estimate": est.mean,
        "std_error": est.std_error,
        "N": config.samples,
        "seed": config.seed,
    });
    let tsv = format!(
        "degree\t{degree}\nindex\t{index}\nestimate\t{}\nstd_error\t{}\nN\t{}\nseed\t{}\n",
        est.mean, est.std_error, config.samples, config.seed
    );
    ok(json, tsv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_strings() {
        assert_eq!(combination(2, &[-3, 7]), "-3f_{2,0} + 7f_{2,1}");
        assert_eq!(combination(4, &[0, -1, 6, 0, 0]), "-f_{4,1} + 6f_{4,2}");
        assert_eq!(combination(2, &[1, 0]), "f_{2,0}");
    }

    #[test]
    fn weights_render_like_the_table() {
        assert_eq!(format_weight(&[4, 2, 2, 0]), "(4,2,2,0)");
    }
}
