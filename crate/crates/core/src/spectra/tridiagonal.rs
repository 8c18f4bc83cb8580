//! Eigen-decomposition of the small symmetric tridiagonal matrices produced
//! by the Lanczos recurrence.

/// Implicit-shift QL on the tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off.len() == diag.len() - 1`).
///
/// Only the rows of the eigenvector matrix listed in `rows` are accumulated,
/// since each row of the rotation product evolves independently. Returns the
/// ascending eigenvalues and, for each requested row, the components of every
/// eigenvector on that row (`out[r][j]` = component `rows[r]` of eigenvector
/// `j`).
pub(crate) fn ql_implicit(diag: &[f64], off: &[f64], rows: &[usize]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = diag.len();
    assert!(n > 0 && off.len() + 1 == n);
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z: Vec<Vec<f64>> = rows
        .iter()
        .map(|&r| (0..n).map(|j| if j == r { 1.0 } else { 0.0 }).collect())
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
                assert!(iter < 200, "tridiagonal QL failed to converge");
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
                    for zr in z.iter_mut() {
                        let t = zr[i + 1];
                        zr[i + 1] = s * zr[i] + c * t;
                        zr[i] = c * zr[i] - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let vals = order.iter().map(|&i| d[i]).collect();
    let z = z
        .into_iter()
        .map(|row| order.iter().map(|&i| row[i]).collect())
        .collect();
    (vals, z)
}

/// Full eigenvectors of the tridiagonal matrix for the `count` lowest
/// eigenvalues, each unit-normalized. Columns are returned as separate vectors.
pub(crate) fn lowest_vectors(diag: &[f64], off: &[f64], count: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = diag.len();
    let rows: Vec<usize> = (0..n).collect();
    let (vals, z) = ql_implicit(diag, off, &rows);
    let count = count.min(n);
    let vecs = (0..count)
        .map(|j| z.iter().map(|row| row[j]).collect())
        .collect();
    (vals, vecs)
}
