//! Exact characteristic polynomials of integer matrices.

use crate::error::{Error, Result};

/// Coefficients of `det(xI - A)`, highest degree first, computed with the
/// Faddeev-LeVerrier recurrence
///
/// ```text
/// M_1 = I,            c_{n-1} = -tr(A)
/// M_k = A M_{k-1} + c_{n-k+1} I,   c_{n-k} = -tr(A M_k) / k
/// ```
///
/// Every `M_k` of an integer matrix is integral and each division by `k` is
/// exact, so the whole computation stays in `i128`. Overflow is reported,
/// never wrapped.
pub(crate) fn char_poly(a: &[i64], n: usize) -> Result<Vec<i128>> {
    debug_assert_eq!(a.len(), n * n);
    let overflow = || Error::FingerprintOverflow { n };
    let a: Vec<i128> = a.iter().map(|&x| x as i128).collect();

    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1i128);
    if n == 0 {
        return Ok(coeffs);
    }

    // m holds M_k; am holds A·M_k.
    let mut m = vec![0i128; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    let mut am = a.clone();
    let mut c = -(0..n).map(|i| am[i * n + i]).sum::<i128>();
    coeffs.push(c);

    for k in 2..=n {
        // M_k = A M_{k-1} + c I
        std::mem::swap(&mut m, &mut am);
        for i in 0..n {
            m[i * n + i] = m[i * n + i].checked_add(c).ok_or_else(overflow)?;
        }
        // am = A M_k
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for l in 0..n {
                    let x = a[i * n + l];
                    if x == 0 {
                        continue;
                    }
                    let term = x.checked_mul(m[l * n + j]).ok_or_else(overflow)?;
                    acc = acc.checked_add(term).ok_or_else(overflow)?;
                }
                am[i * n + j] = acc;
            }
        }
        let trace = (0..n)
            .try_fold(0i128, |s, i| s.checked_add(am[i * n + i]))
            .ok_or_else(overflow)?;
        debug_assert_eq!(trace % k as i128, 0);
        c = -(trace / k as i128);
        coeffs.push(c);
    }
    Ok(coeffs)
}
