//! The invariant functions `f_{k,i}` on `Gr_k(H^2)`, their Laplace
//! eigenfunction combinations, and Klain-function evaluation on frames.
//!
//! For `5 <= k <= 8` the functions are pulled back along `Gr_k ≅ Gr_{8-k}`,
//! i.e. evaluated on the orthogonal complement.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hherm::{pair_index, LambdaTuple};
use crate::orbit::{classify, Frame};

/// `dim Val_k` of the invariant valuations, `k = 0..=8`.
pub const DIMS: [usize; 9] = [1, 1, 2, 3, 5, 3, 2, 1, 1];

/// Degree used for evaluation: `k` itself for `k <= 4`, otherwise `8 - k`.
pub fn reduced_degree(k: usize) -> usize {
    k.min(8 - k)
}

/// One monomial `coef · Π λ_{pq}^{e}`, with pairs written as two-digit labels such as `12`.
type Monomial = (i64, &'static [(u8, u32)]);

const ONE: &[Monomial] = &[(1, &[])];
const F21: &[Monomial] = &[(1, &[(12, 2)])];
const F31: &[Monomial] = &[(1, &[(12, 2)]), (1, &[(13, 2)]), (1, &[(23, 2)])];
const F32: &[Monomial] = &[
    (1, &[(12, 2), (23, 2)]),
    (1, &[(13, 2), (23, 2)]),
    (1, &[(12, 2), (13, 2)]),
];
const F41: &[Monomial] = &[
    (1, &[(12, 2)]),
    (1, &[(13, 2)]),
    (1, &[(14, 2)]),
    (1, &[(23, 2)]),
    (1, &[(24, 2)]),
    (1, &[(34, 2)]),
];
const F42: &[Monomial] = &[
    (1, &[(12, 2), (34, 2)]),
    (1, &[(13, 2), (24, 2)]),
    (1, &[(14, 2), (23, 2)]),
];
const F43: &[Monomial] = &[
    (1, &[(12, 2), (13, 2)]),
    (1, &[(12, 2), (14, 2)]),
    (1, &[(13, 2), (14, 2)]),
    (1, &[(12, 2), (23, 2)]),
    (1, &[(12, 2), (24, 2)]),
    (1, &[(23, 2), (24, 2)]),
    (1, &[(13, 2), (23, 2)]),
    (1, &[(13, 2), (34, 2)]),
    (1, &[(23, 2), (34, 2)]),
    (1, &[(14, 2), (24, 2)]),
    (1, &[(14, 2), (34, 2)]),
    (1, &[(24, 2), (34, 2)]),
];
const F44: &[Monomial] = &[
    (2, &[(12, 1), (13, 1), (23, 2), (24, 1), (34, 1)]),
    (2, &[(12, 1), (13, 1), (14, 2), (24, 1), (34, 1)]),
    (2, &[(12, 1), (23, 1), (13, 2), (14, 1), (34, 1)]),
    (2, &[(12, 1), (23, 1), (24, 2), (14, 1), (34, 1)]),
    (2, &[(24, 1), (23, 1), (12, 2), (14, 1), (13, 1)]),
    (2, &[(24, 1), (23, 1), (34, 2), (14, 1), (13, 1)]),
    (3, &[(12, 2), (13, 2), (14, 2)]),
    (3, &[(12, 2), (23, 2), (24, 2)]),
    (3, &[(13, 2), (23, 2), (34, 2)]),
    (3, &[(14, 2), (24, 2), (34, 2)]),
];

fn monomials(k: usize, i: usize) -> &'static [Monomial] {
    match (reduced_degree(k), i) {
        (_, 0) => ONE,
        (2, 1) => F21,
        (3, 1) => F31,
        (3, 2) => F32,
        (4, 1) => F41,
        (4, 2) => F42,
        (4, 3) => F43,
        (4, 4) => F44,
        _ => unreachable!("InvariantFunctionId validates (k, i)"),
    }
}

/// Identifies `f_{k,i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct InvariantFunctionId {
    pub k: usize,
    pub i: usize,
}

impl InvariantFunctionId {
    pub fn new(k: usize, i: usize) -> Result<Self> {
        if k > 8 {
            return Err(Error::UnsupportedDimension {
                k,
                hint: "degrees range over 0..=8".into(),
            });
        }
        if i >= DIMS[k] {
            return Err(Error::DimensionMismatch {
                expected: DIMS[k],
                got: i + 1,
            });
        }
        Ok(Self { k, i })
    }

    /// All ids of degree `k`, in index order.
    pub fn all(k: usize) -> Vec<Self> {
        (0..DIMS[k.min(8)]).map(|i| Self { k, i }).collect()
    }
}

impl std::fmt::Display for InvariantFunctionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "f_{{{},{}}}", self.k, self.i)
    }
}

/// Evaluates `f_{k,i}(λ)`; `λ` must belong to degree `min(k, 8 - k)`.
pub fn f_eval(id: InvariantFunctionId, lam: &LambdaTuple) -> Result<f64> {
    let k = reduced_degree(id.k);
    if lam.k() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: lam.k(),
        });
    }
    let value = |label: u8| {
        let (p, q) = ((label / 10 - 1) as usize, (label % 10 - 1) as usize);
        lam.values()[pair_index(k, p, q)]
    };
    Ok(monomials(id.k, id.i)
        .iter()
        .map(|(coef, factors)| {
            *coef as f64
                * factors
                    .iter()
                    .map(|&(l, e)| value(l).powi(e as i32))
                    .product::<f64>()
        })
        .sum())
}

/// Highest weight `(λ₁, λ₂, λ₃, λ₄)` of an `SO(8)` representation.
pub type Weight = [i64; 4];

/// One row of the eigenfunction table: `Σ coeffs[i] f_{k,i}` has Laplace eigenvalue `eigenvalue`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenRow {
    pub k: usize,
    pub j: usize,
    pub coeffs: Vec<i64>,
    pub eigenvalue: i64,
    pub weight: Weight,
}

/// Invariant Laplace eigenfunctions on `Gr_k`, `0 <= k <= 4`, lowest eigenvalue first.
pub fn eigen_table(k: usize) -> Result<Vec<EigenRow>> {
    let rows: Vec<(Vec<i64>, i64, Weight)> = match k {
        0 | 1 => vec![(vec![1], 0, [0, 0, 0, 0])],
        2 => vec![
            (vec![1, 0], 0, [0, 0, 0, 0]),
            (vec![-3, 7], 28, [2, 2, 0, 0]),
        ],
        3 => vec![
            (vec![1, 0, 0], 0, [0, 0, 0, 0]),
            (vec![-9, 7, 0], 28, [2, 2, 0, 0]),
            (vec![15, -17, 16], 60, [4, 2, 2, 0]),
        ],
        4 => vec![
            (vec![1, 0, 0, 0, 0], 0, [0, 0, 0, 0]),
            (vec![-18, 7, 0, 0, 0], 28, [2, 2, 0, 0]),
            (vec![0, -1, 6, 0, 0], 40, [2, 2, 2, 2]),
            (vec![66, -43, 8, 20, 0], 60, [4, 2, 2, 0]),
            (vec![-210, 226, -194, -161, 63], 96, [6, 2, 2, 2]),
        ],
        _ => {
            return Err(Error::UnsupportedDimension {
                k,
                hint: format!("use the complement, degree {}", 8 - k.min(8)),
            })
        }
    };
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(j, (coeffs, eigenvalue, weight))| EigenRow {
            k,
            j,
            coeffs,
            eigenvalue,
            weight,
        })
        .collect())
}

/// Identifies a row of [`eigen_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EigenfunctionId {
    pub k: usize,
    pub j: usize,
}

impl EigenfunctionId {
    pub fn new(k: usize, j: usize) -> Result<Self> {
        let rows = eigen_table(k)?;
        if j >= rows.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                got: j + 1,
            });
        }
        Ok(Self { k, j })
    }

    pub fn row(&self) -> EigenRow {
        eigen_table(self.k).expect("validated")[self.j].clone()
    }

    pub fn eigenvalue(&self) -> i64 {
        self.row().eigenvalue
    }
}

/// Evaluates the eigenfunction `Σ c_i f_{k,i}` at `λ`.
pub fn eigenfunction_eval(id: EigenfunctionId, lam: &LambdaTuple) -> Result<f64> {
    let row = id.row();
    let mut total = 0.0;
    for (i, c) in row.coeffs.iter().enumerate() {
        if *c != 0 {
            total += *c as f64 * f_eval(InvariantFunctionId { k: id.k, i }, lam)?;
        }
    }
    Ok(total)
}

/// Orthogonal complement of the span of `f`.
pub fn complement(f: &Frame) -> Result<Frame> {
    f.complement()
}

/// The orbit coordinates used to evaluate Klain functions on `span(f)`.
///
/// Degrees `k >= 5` are classified through the complement; degrees with
/// `min(k, 8 - k) <= 1` have no coordinates.
pub fn plane_lambda(f: &Frame, tol: f64) -> Result<LambdaTuple> {
    let k = f.k();
    let r = reduced_degree(k);
    if r <= 1 {
        return LambdaTuple::new(r, Vec::new());
    }
    let class = if k <= 4 {
        classify(f, tol)?
    } else {
        classify(&f.complement()?, tol)?
    };
    Ok(class.lam)
}

/// `f_{k,i}` evaluated on the plane spanned by `f`, with `k = f.k()`.
pub fn klain_eval(id: InvariantFunctionId, f: &Frame, tol: f64) -> Result<f64> {
    if id.k != f.k() {
        return Err(Error::DimensionMismatch {
            expected: id.k,
            got: f.k(),
        });
    }
    f_eval(id, &plane_lambda(f, tol)?)
}
