//! Hermitian eigensolver: Householder tridiagonalization followed by the
//! implicit-shift QL iteration on the resulting real symmetric tridiagonal
//! matrix. Eigenvector accumulation is optional so that positivity checks on
//! larger operators only pay for eigenvalues.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const MAX_QL_ITERATIONS: usize = 60;

/// Returns eigenvalues in descending order and, when `want_vectors`, the
/// matching orthonormal eigenvectors as the columns of a row-major `n x n`
/// matrix.
pub fn eig_hermitian(
    a: &[C64],
    n: usize,
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<Vec<C64>>)> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(Vec::new)));
    }
    let mut work = a.to_vec();
    let mut q = want_vectors.then(|| identity(n));
    let (mut d, mut e) = tridiagonalize(&mut work, n, q.as_deref_mut());
    ql_implicit(&mut d, &mut e, n, q.as_deref_mut())?;

    // Sort descending, permuting eigenvector columns alongside.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let vecs = q.map(|z| {
        let mut sorted = vec![C64::new(0.0, 0.0); n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for row in 0..n {
                sorted[row * n + new_col] = z[row * n + old_col];
            }
        }
        sorted
    });
    Ok((vals, vecs))
}

fn identity(n: usize) -> Vec<C64> {
    let mut q = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        q[i * n + i] = C64::new(1.0, 0.0);
    }
    q
}

/// Reduces a Hermitian matrix to real symmetric tridiagonal form by unitary
/// Householder reflections; accumulates the transform into `q` when given.
/// Returns the diagonal `d` and subdiagonal `e` (where `e[k]` couples
/// positions `k` and `k + 1`; `e[n - 1]` is unused).
fn tridiagonalize(a: &mut [C64], n: usize, mut q: Option<&mut [C64]>) -> (Vec<f64>, Vec<f64>) {
    let at = |a: &[C64], i: usize, j: usize| a[i * n + j];

    for k in 0..n.saturating_sub(2) {
        // Column below the diagonal.
        let m = n - k - 1;
        let mut x = vec![C64::new(0.0, 0.0); m];
        for r in 0..m {
            x[r] = at(a, k + 1 + r, k);
        }
        let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = x[0];
        let phase = if alpha.norm() > 0.0 {
            alpha / alpha.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let beta = -phase * norm;
        // Householder vector v = x - beta * e1; chosen sign avoids cancellation.
        let mut v = x;
        v[0] -= beta;
        let vnorm_sq: f64 = v.iter().map(|w| w.norm_sqr()).sum();
        if vnorm_sq < f64::MIN_POSITIVE {
            continue;
        }
        let tau = 2.0 / vnorm_sq;

        // Rank-2 update of the trailing block B <- B - q v^H - v q^H with
        // p = tau B v and q = p - (tau/2)(v^H p) v.
        let mut p = vec![C64::new(0.0, 0.0); m];
        for r in 0..m {
            let mut acc = C64::new(0.0, 0.0);
            for s in 0..m {
                acc += at(a, k + 1 + r, k + 1 + s) * v[s];
            }
            p[r] = acc * tau;
        }
        let vhp: C64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let coeff = vhp * (tau / 2.0);
        let w: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - coeff * vi).collect();
        for r in 0..m {
            for s in 0..m {
                let delta = w[r] * v[s].conj() + v[r] * w[s].conj();
                a[(k + 1 + r) * n + (k + 1 + s)] -= delta;
            }
        }

        // Zero the eliminated column, keeping the new subdiagonal entry.
        a[(k + 1) * n + k] = beta;
        a[k * n + (k + 1)] = beta.conj();
        for r in 1..m {
            a[(k + 1 + r) * n + k] = C64::new(0.0, 0.0);
            a[k * n + (k + 1 + r)] = C64::new(0.0, 0.0);
        }

        // Accumulate Q <- Q (I - tau v v^H) on coordinates k+1 .. n.
        if let Some(q) = q.as_deref_mut() {
            for row in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for s in 0..m {
                    acc += q[row * n + (k + 1 + s)] * v[s];
                }
                acc *= tau;
                for s in 0..m {
                    q[row * n + (k + 1 + s)] -= acc * v[s].conj();
                }
            }
        }
    }

    // Make the subdiagonal real and nonnegative with a diagonal phase unitary.
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut scale = vec![C64::new(1.0, 0.0); n];
    for k in 0..n - 1 {
        let b = at(a, k + 1, k) * scale[k];
        let mag = b.norm();
        e[k] = mag;
        scale[k + 1] = if mag > 0.0 { b / mag } else { scale[k] };
    }
    for k in 0..n {
        d[k] = at(a, k, k).re;
    }
    if let Some(q) = q {
        for col in 0..n {
            let s = scale[col];
            for row in 0..n {
                q[row * n + col] *= s;
            }
        }
    }
    (d, e)
}

/// Implicit-shift QL iteration on a real symmetric tridiagonal matrix.
/// Eigenvalues land in `d`; plane rotations are accumulated into the complex
/// columns of `z` when given.
fn ql_implicit(d: &mut [f64], e: &mut [f64], n: usize, mut z: Option<&mut [C64]>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    // Absolute negligibility floor: without it, subdiagonals between
    // near-zero diagonal entries (rank-deficient inputs) never split.
    let scale = (0..n)
        .map(|i| d[i].abs() + e[i].abs())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let floor = f64::EPSILON * scale;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            // Look for a negligible subdiagonal element to split the problem.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::EigenFailure);
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let zi1 = z[k * n + i + 1];
                        let zi = z[k * n + i];
                        z[k * n + i + 1] = zi * s + zi1 * c;
                        z[k * n + i] = zi * c - zi1 * s;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
