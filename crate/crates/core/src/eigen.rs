//! Eigenvalues of dense real nonsymmetric matrices: Householder reduction
//! to upper Hessenberg form, then Francis double-shift QR with deflation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Iterations allowed per eigenvalue before giving up.
pub const MAX_ITER_PER_EIGENVALUE: usize = 60;

/// Orthogonally similar upper Hessenberg form, stored densely.
pub fn hessenberg(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::Domain(format!("matrix is {}x{}, not square", m.rows(), m.cols())));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix has non-finite entries".into()));
    }
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    for k in 0..n.saturating_sub(2) {
        let alpha: f64 = (k + 1..n).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[i][k]).collect();
        v[0] += alpha.copysign(v[0]);
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        // A <- (I - 2vv'/v'v) A (I - 2vv'/v'v)
        for j in 0..n {
            let s: f64 = (0..v.len()).map(|p| v[p] * a[k + 1 + p][j]).sum::<f64>() * 2.0 / vv;
            for p in 0..v.len() {
                a[k + 1 + p][j] -= s * v[p];
            }
        }
        for row in a.iter_mut() {
            let s: f64 = (0..v.len()).map(|p| v[p] * row[k + 1 + p]).sum::<f64>() * 2.0 / vv;
            for p in 0..v.len() {
                row[k + 1 + p] -= s * v[p];
            }
        }
        for row in a.iter_mut().skip(k + 2) {
            row[k] = 0.0;
        }
    }
    Ok(Matrix::from_fn(n, n, |i, j| a[i][j]))
}

/// All eigenvalues of `m`, in the order they deflate.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>> {
    let h = hessenberg(m)?;
    let n = h.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| h.row(i).to_vec()).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let norm: f64 = a.iter().flatten().map(|x| x.abs()).sum();
    if n == 0 {
        return Ok(out);
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let mut total = 0usize;
    while nn >= 0 {
        let mut its = 0;
        loop {
            // look for a single small subdiagonal element
            let mut l = nn;
            while l >= 1 {
                let (lu, lm) = (l as usize, l as usize - 1);
                let s = a[lm][lm].abs() + a[lu][lu].abs();
                let s = if s == 0.0 { norm } else { s };
                if a[lu][lm].abs() + s == s {
                    a[lu][lm] = 0.0;
                    break;
                }
                l -= 1;
            }
            let nu = nn as usize;
            let x = a[nu][nu];
            if l == nn {
                out[nu] = Complex64::new(x + t, 0.0);
                nn -= 1;
                break;
            }
            let y = a[nu - 1][nu - 1];
            let w = a[nu][nu - 1] * a[nu - 1][nu];
            if l == nn - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                let x = x + t;
                if q >= 0.0 {
                    let z = p + z.copysign(p);
                    let hi = x + z;
                    let lo = if z != 0.0 { x - w / z } else { hi };
                    out[nu - 1] = Complex64::new(hi, 0.0);
                    out[nu] = Complex64::new(lo, 0.0);
                } else {
                    out[nu - 1] = Complex64::new(x + p, z);
                    out[nu] = Complex64::new(x + p, -z);
                }
                nn -= 2;
                break;
            }
            if its == MAX_ITER_PER_EIGENVALUE {
                return Err(Error::ConvergenceFailure { iterations: total });
            }
            let (mut x, mut y, mut w) = (x, y, w);
            if its == 10 || its == 20 {
                // exceptional shift
                t += x;
                for (i, row) in a.iter_mut().enumerate().take(nu + 1) {
                    row[i] -= x;
                }
                let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            total += 1;
            // look for two consecutive small subdiagonal elements
            let lu = l as usize;
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == lu {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }
            // double QR step on rows l..nn, columns m..nn
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = if k != nu - 1 { a[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if lu != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k != nu - 1 {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * z;
                        }
                        a[k + 1][j] -= pp * y;
                        a[k][j] -= pp * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for row in a.iter_mut().take(mmin + 1).skip(lu) {
                        let mut pp = x * row[k] + y * row[k + 1];
                        if k != nu - 1 {
                            pp += z * row[k + 2];
                            row[k + 2] -= pp * r;
                        }
                        row[k + 1] -= pp * q;
                        row[k] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(out)
}
