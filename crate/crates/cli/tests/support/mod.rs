//! Test-only oracles, independent of the spectral code paths they check.

/// `exp(M)` for a dense row-major matrix by scaling and squaring with a
/// truncated Taylor series.
pub fn expm(m: &[f64], n: usize) -> Vec<f64> {
    let norm = (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let a: Vec<f64> = m.iter().map(|x| x * scale).collect();

    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=24 {
        term = matmul(&term, &a, n);
        for x in term.iter_mut() {
            *x /= k as f64;
        }
        for (r, t) in result.iter_mut().zip(&term) {
            *r += t;
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result, n);
    }
    result
}

pub fn identity(n: usize) -> Vec<f64> {
    let mut id = vec![0.0; n * n];
    for i in 0..n {
        id[i * n + i] = 1.0;
    }
    id
}

pub fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for l in 0..n {
            let x = a[i * n + l];
            for j in 0..n {
                c[i * n + j] += x * b[l * n + j];
            }
        }
    }
    c
}

/// Prints one verdict line and panics on failure.
pub fn report(id: &str, title: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("[PASS] {id} {title}: {detail}"),
        Err(detail) => {
            println!("[FAIL] {id} {title}: {detail}");
            panic!("{id} failed: {detail}");
        }
    }
}

#[test]
fn expm_of_diagonal_and_rotation() {
    let d = expm(&[1.0, 0.0, 0.0, -2.0], 2);
    assert!((d[0] - 1f64.exp()).abs() < 1e-13);
    assert!((d[3] - (-2f64).exp()).abs() < 1e-15);
    // exp([[0, t], [-t, 0]]) is a rotation by t.
    let t = 3.0;
    let r = expm(&[0.0, t, -t, 0.0], 2);
    assert!((r[0] - t.cos()).abs() < 1e-13);
    assert!((r[1] - t.sin()).abs() < 1e-13);
}
