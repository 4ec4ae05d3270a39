//! Symmetric tridiagonal eigensolver (implicit QL with Wilkinson-style shifts).
//!
//! Only the requested rows of the eigenvector matrix are accumulated, which is
//! all the Lanczos residual estimates need (the last row).

/// Eigen-decomposition result. `values` is ascending; `rows[r][i]` is the
/// component at row `rows_idx[r]` of the eigenvector for `values[i]`.
pub(crate) struct TridiagEigen {
    pub values: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

/// Eigenvalues of the tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples `i` and `i + 1`). Accumulates the
/// eigenvector rows listed in `rows`.
pub(crate) fn tridiag_eigen(diag: &[f64], off: &[f64], rows: &[usize]) -> TridiagEigen {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1));
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(off);
    // v[r][i]: row rows[r] of the accumulated rotation matrix
    let mut v: Vec<Vec<f64>> = rows
        .iter()
        .map(|&r| {
            let mut row = vec![0.0; n];
            row[r] = 1.0;
            row
        })
        .collect();

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut() {
                        let hv = row[i + 1];
                        row[i + 1] = s * row[i] + c * hv;
                        row[i] = c * row[i] - s * hv;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 || iter >= 64 || !e[l].is_finite() {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    TridiagEigen {
        values: order.iter().map(|&i| d[i]).collect(),
        rows: v
            .into_iter()
            .map(|row| order.iter().map(|&i| row[i]).collect())
            .collect(),
    }
}
