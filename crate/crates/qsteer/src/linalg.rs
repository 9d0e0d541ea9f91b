//! Small dense linear-algebra helpers shared across the crate.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Hermitian eigendecomposition. Returns `(eigenvalues, eigenvectors)` with
/// matching column order; no ordering is imposed here.
pub(crate) fn eigh(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = m.clone().symmetric_eigen();
    (eig.eigenvalues.as_slice().to_vec(), eig.eigenvectors)
}

/// Max-norm of `U^dagger U - I`.
pub(crate) fn unitarity_residual(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    let gram = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - C64::new(expect, 0.0)).norm());
        }
    }
    worst
}

/// Entrywise max-norm of `a - b`.
pub(crate) fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Haar-distributed unitary: complex Gaussian matrix, QR, then the column
/// phases fixed so the R diagonal is real positive.
pub(crate) fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 1e-300 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase.conj();
        }
    }
    q
}
