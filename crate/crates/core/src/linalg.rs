//! Dense complex linear algebra behind the physics modules.
//!
//! Matrix data lives in `ndarray` arrays; factorizations (Hermitian
//! eigendecomposition, LU solves, singular values) and big matrix products
//! are delegated to `faer`. Eigendecompositions are post-processed into a
//! deterministic form: ascending eigenvalues and a fixed phase gauge.

use crate::{C64, CMat, CVec, LabError, Result};
use faer::linalg::solvers::Solve;
use faer::Mat;

fn to_faer(a: &CMat) -> Mat<C64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(m: &Mat<C64>) -> CMat {
    CMat::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

/// Matrix product via faer's gemm.
pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.nrows(), "matmul dimension mismatch");
    let fa = to_faer(a);
    let fb = to_faer(b);
    from_faer(&(&fa * &fb))
}

/// Conjugate transpose.
pub fn adjoint(a: &CMat) -> CMat {
    let (r, c) = (a.nrows(), a.ncols());
    CMat::from_shape_fn((c, r), |(i, j)| a[(j, i)].conj())
}

/// A ← (A + A*)/2, exact Hermitian symmetrization.
pub fn hermitize(a: &CMat) -> CMat {
    let n = a.nrows();
    let mut out = a.clone();
    for i in 0..n {
        out[(i, i)] = C64::new(out[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            out[(i, j)] = v;
            out[(j, i)] = v.conj();
        }
    }
    out
}

pub fn max_abs_entry(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn fro_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Operator 2-norm (largest singular value).
pub fn op_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let f = to_faer(a);
    let sv = f.singular_values().expect("svd failed");
    sv.first().copied().unwrap_or(0.0)
}

/// Hermiticity defect max |A − A*|.
pub fn herm_defect(a: &CMat) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Hermitian eigendecomposition with deterministic ordering and gauge.
///
/// Returns eigenvalues ascending and the unitary of eigenvectors as columns.
/// Gauge: in each column the first component exceeding 1e−8 of the column
/// max-abs is rotated to the positive real axis.
pub fn eigh(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = a.nrows();
    if n == 0 {
        return Ok((vec![], CMat::zeros((0, 0))));
    }
    if herm_defect(a) > 1e-10 * (1.0 + max_abs_entry(a)) {
        return Err(LabError::Domain(format!(
            "eigh requires a Hermitian matrix (defect {:.3e})",
            herm_defect(a)
        )));
    }
    let f = to_faer(a);
    let evd = f
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| LabError::Conditioning(format!("eigendecomposition failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].re.partial_cmp(&s[j].re).unwrap());
    let mut vals = Vec::with_capacity(n);
    let mut vecs = CMat::zeros((n, n));
    for (k, &src) in order.iter().enumerate() {
        vals.push(s[src].re);
        // column max and first significant component
        let mut maxabs = 0.0_f64;
        for i in 0..n {
            maxabs = maxabs.max(u[(i, src)].norm());
        }
        let mut phase = C64::new(1.0, 0.0);
        for i in 0..n {
            let v = u[(i, src)];
            if v.norm() > 1e-8 * maxabs {
                phase = v.conj() / v.norm();
                break;
            }
        }
        for i in 0..n {
            vecs[(i, k)] = u[(i, src)] * phase;
        }
    }
    Ok((vals, vecs))
}

/// Solve A·X = B by partial-pivot LU.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    let fa = to_faer(a);
    let fb = to_faer(b);
    let lu = fa.partial_piv_lu();
    let x = lu.solve(&fb);
    let out = from_faer(&x);
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LabError::Conditioning("singular linear system".into()));
    }
    Ok(out)
}

pub fn solve_vec(a: &CMat, b: &CVec) -> Result<CVec> {
    let bm = CMat::from_shape_fn((b.len(), 1), |(i, _)| b[i]);
    let x = solve(a, &bm)?;
    Ok(CVec::from_iter(x.column(0).iter().copied()))
}

/// ⟨x, A y⟩-style application A·v.
pub fn matvec(a: &CMat, v: &CVec) -> CVec {
    let n = a.nrows();
    let m = a.ncols();
    assert_eq!(m, v.len());
    let mut out = CVec::zeros(n);
    for i in 0..n {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..m {
            acc += a[(i, j)] * v[j];
        }
        out[i] = acc;
    }
    out
}

pub fn vec_norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(x: &CVec, y: &CVec) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}
