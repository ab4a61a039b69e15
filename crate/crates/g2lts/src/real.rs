//! Small real linear-algebra helpers on coordinate vectors.

use nalgebra::{DMatrix, SymmetricEigen};

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Modified Gram-Schmidt with re-orthogonalization; vectors whose residual
/// drops to `tol` times the largest input norm are skipped.
pub(crate) fn orthonormalize(vs: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let scale = vs.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let mut out: Vec<Vec<f64>> = Vec::new();
    if scale == 0.0 {
        return out;
    }
    for v in vs {
        let mut r = v.clone();
        for _ in 0..2 {
            for u in &out {
                let c = dot(u, &r);
                axpy(&mut r, -c, u);
            }
        }
        let nr = norm(&r);
        if nr > tol * scale {
            r.iter_mut().for_each(|x| *x /= nr);
            out.push(r);
        }
    }
    out
}

/// Norm of the component of `v` orthogonal to the orthonormal family `basis`.
pub(crate) fn residual(v: &[f64], basis: &[Vec<f64>]) -> f64 {
    let mut r = v.to_vec();
    for u in basis {
        let c = dot(u, &r);
        axpy(&mut r, -c, u);
    }
    norm(&r)
}

pub(crate) fn project(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut p = vec![0.0; v.len()];
    for u in basis {
        axpy(&mut p, dot(u, v), u);
    }
    p
}

/// Eigenvalues of a symmetric matrix, ascending, with eigenvectors as columns.
pub(crate) fn sym_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let sym = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(a.nrows(), idx.len());
    for (k, &i) in idx.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Merge sorted values that lie within `tol` of the running cluster mean.
pub(crate) fn cluster(vals: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in vals {
        match out.last_mut() {
            Some((mean, count)) if (v - *mean).abs() <= tol => {
                *mean = (*mean * *count as f64 + v) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Orthonormal basis of the null space of `m` (columns index the domain).
/// Singular values at most `tol` times the largest one (or `tol` when all are
/// below one) count as zero.
pub(crate) fn null_space(m: &DMatrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let d = m.ncols();
    if d == 0 {
        return Vec::new();
    }
    // pad so that the thin SVD returns a full set of right singular vectors
    let padded;
    let a = if m.nrows() < d {
        let mut p = DMatrix::zeros(d, d);
        p.view_mut((0, 0), (m.nrows(), d)).copy_from(m);
        padded = p;
        &padded
    } else {
        m
    };
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    (0..d)
        .filter(|&k| svd.singular_values[k] <= tol * top)
        .map(|k| vt.row(k).iter().cloned().collect())
        .collect()
}
