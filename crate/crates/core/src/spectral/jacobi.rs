//! Cyclic Jacobi eigensolver for dense real symmetric matrices.
//!
//! Sweeps visit the upper triangle in row order, so a given input always
//! produces the same rotations and bit-identical output.

pub(crate) const MAX_SWEEPS: usize = 64;

pub(crate) struct JacobiOutput {
    /// Unsorted eigenvalues (the final diagonal).
    pub values: Vec<f64>,
    /// Row-major accumulated rotations; column k is eigenvector k.
    pub vectors: Option<Vec<f64>>,
    pub sweeps: usize,
    pub converged: bool,
    /// Off-diagonal Frobenius norm at exit.
    pub off_norm: f64,
}

/// Diagonalizes the row-major symmetric matrix `a` in place.
pub(crate) fn jacobi(a: &mut [f64], n: usize, want_vectors: bool) -> JacobiOutput {
    debug_assert_eq!(a.len(), n * n);
    let mut v = want_vectors.then(|| {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        id
    });

    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = f64::EPSILON * frob;
    let mut sweeps = 0;
    let mut off = off_diagonal_norm(a, n);

    while off > target && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Rotation would be lost in rounding of both diagonal entries.
                if sweeps > 3
                    && (100.0 * apq).abs() + app.abs() == app.abs()
                    && (100.0 * apq).abs() + aqq.abs() == aqq.abs()
                {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let vrp = v[r * n + p];
                        let vrq = v[r * n + q];
                        v[r * n + p] = c * vrp - s * vrq;
                        v[r * n + q] = s * vrp + c * vrq;
                    }
                }
            }
        }
        off = off_diagonal_norm(a, n);
    }

    JacobiOutput {
        values: (0..n).map(|i| a[i * n + i]).collect(),
        vectors: v,
        sweeps,
        converged: off <= target,
        off_norm: off,
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            let x = a[p * n + q];
            sum += 2.0 * x * x;
        }
    }
    sum.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let mut a = vec![2.0, 1.0, 1.0, 2.0];
        let out = jacobi(&mut a, 2, true);
        assert!(out.converged);
        let mut vals = out.values.clone();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-15);
        assert!((vals[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_input_needs_no_sweeps() {
        let mut a = vec![3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0];
        let out = jacobi(&mut a, 3, false);
        assert_eq!(out.sweeps, 0);
        assert_eq!(out.values, vec![3.0, 1.0, 2.0]);
    }

    #[test]
    fn tridiagonal_known_spectrum() {
        // Path Laplacian-like tridiag(−1, 2, −1) of size 6: eigenvalues 2 − 2cos(kπ/7).
        let n = 6;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 2.0;
            if i + 1 < n {
                a[i * n + i + 1] = -1.0;
                a[(i + 1) * n + i] = -1.0;
            }
        }
        let out = jacobi(&mut a, n, false);
        let mut vals = out.values;
        vals.sort_by(f64::total_cmp);
        for (k, v) in vals.iter().enumerate() {
            let expect = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / 7.0).cos();
            assert!((v - expect).abs() < 1e-13, "{v} vs {expect}");
        }
    }
}
