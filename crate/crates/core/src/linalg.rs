//! Small dense linear algebra: cyclic Jacobi eigensolvers for real symmetric
//! and complex hermitian matrices, LU determinants and Gram-Schmidt.
//!
//! Matrices here are at most 16×16, so everything is stored as `Vec<Vec<_>>`.

use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric matrix.
///
/// Returns eigenvalues sorted in descending order and the matrix whose
/// columns are the corresponding orthonormal eigenvectors.
pub fn symmetric_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v = identity(n);
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off.sqrt() <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = c * xp - s * xq;
                    row[q] = s * xp + c * xq;
                }
                for col in 0..n {
                    let (xp, xq) = (a[p][col], a[q][col]);
                    a[p][col] = c * xp - s * xq;
                    a[q][col] = s * xp + c * xq;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = c * xp - s * xq;
                    row[q] = s * xp + c * xq;
                }
            }
        }
    }
    let vals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    sort_desc(vals, v)
}

fn sort_desc<T: Copy>(vals: Vec<f64>, vecs: Vec<Vec<T>>) -> (Vec<f64>, Vec<Vec<T>>) {
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| vals[y].total_cmp(&vals[x]));
    let sorted_vals = order.iter().map(|&i| vals[i]).collect();
    let sorted_vecs = vecs
        .iter()
        .map(|row| order.iter().map(|&i| row[i]).collect())
        .collect();
    (sorted_vals, sorted_vecs)
}

/// Eigen-decomposition of a complex hermitian matrix by complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot entry and then applies
/// a real plane rotation. Eigenvalues are returned in descending order with
/// eigenvectors as columns.
pub fn hermitian_eigen(a: &[Vec<Complex64>]) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let n = a.len();
    let mut a: Vec<Vec<Complex64>> = a.to_vec();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { one } else { zero }).collect())
        .collect();
    let scale: f64 = a.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    off += a[p][q].norm_sqr();
                }
            }
        }
        if off.sqrt() <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let r = a[p][q].norm();
                if r == 0.0 {
                    continue;
                }
                let phase = a[p][q] / r;
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let conj_phase = phase.conj();
                // columns: A <- A G with G = diag(.., e^{-iφ} at q, ..) * R
                for row in a.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * c - xq * conj_phase * s;
                    row[q] = xp * s + xq * conj_phase * c;
                }
                // rows: A <- G* A
                for col in 0..n {
                    let (xp, xq) = (a[p][col], a[q][col]);
                    a[p][col] = xp * c - xq * phase * s;
                    a[q][col] = xp * s + xq * phase * c;
                }
                a[p][q] = zero;
                a[q][p] = zero;
                a[p][p] = Complex64::new(a[p][p].re, 0.0);
                a[q][q] = Complex64::new(a[q][q].re, 0.0);
                for row in v.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * c - xq * conj_phase * s;
                    row[q] = xp * s + xq * conj_phase * c;
                }
            }
        }
    }
    let vals: Vec<f64> = (0..n).map(|i| a[i][i].re).collect();
    sort_desc(vals, v)
}

pub fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Determinant by LU decomposition with partial pivoting.
pub fn det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for row in col + 1..n {
            let f = m[row][col] / p;
            if f != 0.0 {
                for c in col..n {
                    m[row][c] -= f * m[col][c];
                }
            }
        }
    }
    det
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Orthonormalizes `vectors` in order (modified Gram-Schmidt, two passes).
///
/// Returns `None` if a vector loses more than `1 - 1e-8` of its norm.
pub fn gram_schmidt(vectors: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let n0 = norm(v);
        let mut w = v.clone();
        for _ in 0..2 {
            for u in &out {
                let c = dot(u, &w);
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= c * ui;
                }
            }
        }
        let n = norm(&w);
        if n0 == 0.0 || n <= 1e-8 * n0 {
            return None;
        }
        w.iter_mut().for_each(|x| *x /= n);
        out.push(w);
    }
    Some(out)
}

pub fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|l| row[l] * b[l][j]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symmetric_eigen_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=13 {
            let mut a = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..=i {
                    let x: f64 = rng.random_range(-1.0..1.0);
                    a[i][j] = x;
                    a[j][i] = x;
                }
            }
            let (vals, vecs) = symmetric_eigen(&a);
            assert!(vals.windows(2).all(|w| w[0] >= w[1]));
            for i in 0..n {
                for j in 0..n {
                    let r: f64 = (0..n).map(|m| vecs[i][m] * vals[m] * vecs[j][m]).sum();
                    assert!((r - a[i][j]).abs() < 1e-12);
                    let o: f64 = (0..n).map(|m| vecs[m][i] * vecs[m][j]).sum();
                    assert!((o - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 1..=16 {
            let mut a = vec![vec![Complex64::new(0.0, 0.0); n]; n];
            for i in 0..n {
                a[i][i] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
                for j in 0..i {
                    let z =
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    a[i][j] = z;
                    a[j][i] = z.conj();
                }
            }
            let (vals, vecs) = hermitian_eigen(&a);
            for i in 0..n {
                for j in 0..n {
                    let r: Complex64 = (0..n)
                        .map(|m| vecs[i][m] * vals[m] * vecs[j][m].conj())
                        .sum();
                    assert!((r - a[i][j]).norm() < 1e-12, "n={n}");
                }
            }
        }
    }

    #[test]
    fn det_matches_known_values() {
        assert_eq!(det(&identity(5)), 1.0);
        let a = vec![vec![2.0, 1.0], vec![7.0, 4.0]];
        assert!((det(&a) - 1.0).abs() < 1e-14);
        let p = vec![
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ];
        assert!((det(&p) + 3.0).abs() < 1e-14);
        let singular = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(det(&singular).abs() < 1e-14);
    }

    #[test]
    fn gram_schmidt_orthonormal() {
        let v = vec![
            vec![1.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ];
        let q = gram_schmidt(&v).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let d = dot(&q[i], &q[j]);
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        assert!(gram_schmidt(&[vec![1.0, 0.0], vec![2.0, 0.0]]).is_none());
    }
}
