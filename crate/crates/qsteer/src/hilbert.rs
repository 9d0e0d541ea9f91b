//! Windowed finite-support representation of vectors and density operators on
//! the doubly infinite sequence space l2(Z).
//!
//! A value stores only the contiguous block of absolute indices that can carry
//! nonzero entries; everything outside the window is exactly zero by
//! convention. Shifting is therefore an O(1) change of the window offset, and
//! binary operations zero-pad both operands to the smallest common window.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg;

/// Default cap on the length of any window.
pub const DEFAULT_WINDOW_CAP: usize = 4096;
/// Default cap on the length of any generator sequence or channel program.
pub const DEFAULT_PROGRAM_CAP: usize = 1_000_000;

/// Tolerance for structural validation (normalization, Hermiticity, trace).
pub const VALIDATION_TOL: f64 = 1e-10;
/// Tolerance for identities that hold exactly up to rounding.
pub const EXACT_TOL: f64 = 1e-12;
/// Norm below which a vector is considered unrenormalizable.
pub const ZERO_NORM_TOL: f64 = 1e-14;

/// Resource caps threaded through every operation that can grow a window or a
/// program. `Limits::default()` matches the library-wide defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub window_cap: usize,
    pub program_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            window_cap: DEFAULT_WINDOW_CAP,
            program_cap: DEFAULT_PROGRAM_CAP,
        }
    }
}

impl Limits {
    pub fn with_window_cap(window_cap: usize) -> Self {
        Limits {
            window_cap,
            ..Limits::default()
        }
    }

    pub(crate) fn check_window(&self, len: usize) -> Result<()> {
        if len > self.window_cap {
            Err(Error::WindowOverflow {
                needed: len,
                cap: self.window_cap,
            })
        } else {
            Ok(())
        }
    }
}

/// A contiguous block of absolute l2(Z) indices `offset .. offset + len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub offset: i64,
    pub len: usize,
}

impl Window {
    pub fn new(offset: i64, len: usize) -> Self {
        Window { offset, len }
    }

    /// One past the last absolute index.
    pub fn end(&self) -> i64 {
        self.offset + self.len as i64
    }

    pub fn contains_index(&self, k: i64) -> bool {
        k >= self.offset && k < self.end()
    }

    pub fn contains(&self, other: &Window) -> bool {
        self.offset <= other.offset && self.end() >= other.end()
    }

    /// Smallest window containing both operands.
    pub fn union(&self, other: &Window) -> Window {
        let offset = self.offset.min(other.offset);
        let end = self.end().max(other.end());
        Window {
            offset,
            len: (end - offset) as usize,
        }
    }

    /// Position of absolute index `k` inside this window, if any.
    pub fn local(&self, k: i64) -> Option<usize> {
        if self.contains_index(k) {
            Some((k - self.offset) as usize)
        } else {
            None
        }
    }
}

/// Objects carrying a window of absolute indices that can be re-embedded in a
/// larger window by zero padding.
pub trait Windowed: Sized + Clone {
    fn window(&self) -> Window;

    /// Re-embed into `target`, which must contain the current window.
    fn embed(&self, target: Window) -> Self;
}

/// Zero-pad both operands onto their smallest common window.
///
/// Inputs already sharing a window are returned unchanged.
pub fn align_windows<T: Windowed>(x: &T, y: &T, limits: &Limits) -> Result<(T, T)> {
    let wx = x.window();
    let wy = y.window();
    if wx == wy {
        return Ok((x.clone(), y.clone()));
    }
    let w = wx.union(&wy);
    limits.check_window(w.len)?;
    Ok((x.embed(w), y.embed(w)))
}

fn check_finite_slice(amps: &[C64], context: &'static str) -> Result<()> {
    if amps.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { context })
    }
}

/// A finite-support unit vector on l2(Z): a window offset plus the amplitudes
/// stored on that window.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    offset: i64,
    amps: Vec<C64>,
}

impl StateVector {
    /// Build a state from amplitudes that are already normalized.
    pub fn new(amps: Vec<C64>, offset: i64, limits: &Limits) -> Result<Self> {
        Self::validate_shape(&amps, limits)?;
        let sumsq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        let residual = (sumsq - 1.0).abs();
        if residual > VALIDATION_TOL {
            return Err(Error::NotNormalized {
                residual,
                tol: VALIDATION_TOL,
            });
        }
        Ok(StateVector { offset, amps })
    }

    /// Build a state by dividing the amplitudes by their Euclidean norm.
    pub fn normalized(amps: Vec<C64>, offset: i64, limits: &Limits) -> Result<Self> {
        Self::validate_shape(&amps, limits)?;
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < ZERO_NORM_TOL {
            return Err(Error::ZeroVector { norm });
        }
        let amps = amps.into_iter().map(|z| z / norm).collect();
        Ok(StateVector { offset, amps })
    }

    fn validate_shape(amps: &[C64], limits: &Limits) -> Result<()> {
        if amps.is_empty() {
            return Err(Error::EmptyInput {
                context: "state amplitudes",
            });
        }
        check_finite_slice(amps, "state amplitudes")?;
        limits.check_window(amps.len())
    }

    /// The basis vector e_k.
    pub fn basis(k: i64) -> Self {
        StateVector {
            offset: k,
            amps: vec![C64::new(1.0, 0.0)],
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Amplitude at absolute index `k`; zero outside the window.
    pub fn amp(&self, k: i64) -> C64 {
        self.window()
            .local(k)
            .map_or(C64::new(0.0, 0.0), |i| self.amps[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Construct without the normalization check. Window shape is still
    /// enforced; used by generator application, which preserves the norm.
    pub(crate) fn from_parts_unchecked(amps: Vec<C64>, offset: i64) -> Self {
        debug_assert!(!amps.is_empty());
        StateVector { offset, amps }
    }

    pub(crate) fn shifted(&self, k: i64) -> Self {
        StateVector {
            offset: self.offset + k,
            amps: self.amps.clone(),
        }
    }
}

impl Windowed for StateVector {
    fn window(&self) -> Window {
        Window::new(self.offset, self.amps.len())
    }

    fn embed(&self, target: Window) -> Self {
        debug_assert!(target.contains(&self.window()));
        let mut amps = vec![C64::new(0.0, 0.0); target.len];
        let base = (self.offset - target.offset) as usize;
        amps[base..base + self.amps.len()].copy_from_slice(&self.amps);
        StateVector {
            offset: target.offset,
            amps,
        }
    }
}

/// Inner product `<a|b>`, conjugate-linear in the first argument.
///
/// Windows may differ; amplitudes outside a window are zero, so only the
/// overlap contributes.
pub fn inner(a: &StateVector, b: &StateVector) -> C64 {
    let lo = a.offset.max(b.offset);
    let hi = a.window().end().min(b.window().end());
    let mut acc = C64::new(0.0, 0.0);
    let mut k = lo;
    while k < hi {
        acc += a.amp(k).conj() * b.amp(k);
        k += 1;
    }
    acc
}

/// Fidelity `|<a|b>|` between pure states; 1 iff equal up to a global phase.
pub fn state_fidelity(a: &StateVector, b: &StateVector) -> f64 {
    inner(a, b).norm()
}

/// Hermitian, positive semidefinite, unit-trace matrix on a window of l2(Z).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    offset: i64,
    dim: usize,
    /// Row-major `dim * dim` entries.
    data: Vec<C64>,
}

impl DensityMatrix {
    /// Validate and wrap a raw matrix. All three invariants (Hermitian,
    /// positive semidefinite, unit trace) are checked at `tol`.
    pub fn new(matrix: Vec<Vec<C64>>, offset: i64, tol: f64, limits: &Limits) -> Result<Self> {
        let dim = matrix.len();
        if dim == 0 {
            return Err(Error::EmptyInput {
                context: "density matrix",
            });
        }
        if matrix.iter().any(|row| row.len() != dim) {
            return Err(Error::BadArgument {
                detail: format!("density matrix must be square, got {} rows", dim),
            });
        }
        limits.check_window(dim)?;
        let mut data = Vec::with_capacity(dim * dim);
        for row in &matrix {
            check_finite_slice(row, "density matrix entries")?;
            data.extend_from_slice(row);
        }
        let rho = DensityMatrix { offset, dim, data };
        rho.validate(tol)?;
        Ok(rho)
    }

    /// Re-check the three density invariants at `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let herm = self.hermiticity_residual();
        if herm > tol {
            return Err(Error::NotHermitian {
                residual: herm,
                tol,
            });
        }
        let tr = self.trace();
        let tr_residual = (tr.re - 1.0).hypot(tr.im);
        if tr_residual > tol {
            return Err(Error::TraceNotOne {
                residual: tr_residual,
                tol,
            });
        }
        let min_eig = linalg::eigh(&self.to_dense())
            .0
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue: min_eig,
                tol,
            });
        }
        Ok(())
    }

    /// Pure-state projector |psi><psi|.
    pub fn pure(psi: &StateVector) -> Self {
        let n = psi.len();
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = psi.amps()[i] * psi.amps()[j].conj();
            }
        }
        DensityMatrix {
            offset: psi.offset(),
            dim: n,
            data,
        }
    }

    /// The projector |e_k><e_k| on a length-1 window.
    pub fn basis_projector(k: i64) -> Self {
        DensityMatrix {
            offset: k,
            dim: 1,
            data: vec![C64::new(1.0, 0.0)],
        }
    }

    /// Diagonal density diag(weights) at `offset`. Weights are trusted; used
    /// by tests and by exact stage constructions.
    pub fn diagonal(weights: &[f64], offset: i64) -> Self {
        let dim = weights.len();
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for (i, w) in weights.iter().enumerate() {
            data[i * dim + i] = C64::new(*w, 0.0);
        }
        DensityMatrix { offset, dim, data }
    }

    pub(crate) fn from_dense_unchecked(m: &DMatrix<C64>, offset: i64) -> Self {
        let dim = m.nrows();
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(m[(i, j)]);
            }
        }
        DensityMatrix { offset, dim, data }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at absolute indices `(i, j)`; zero outside the window.
    pub fn entry(&self, i: i64, j: i64) -> C64 {
        match (self.window().local(i), self.window().local(j)) {
            (Some(r), Some(c)) => self.data[r * self.dim + c],
            _ => C64::new(0.0, 0.0),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = self.data[i * self.dim + j] - self.data[j * self.dim + i].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Largest off-diagonal modulus; a diagonal form has this below 1e-12.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    worst = worst.max(self.data[i * self.dim + j].norm());
                }
            }
        }
        worst
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.data[i * self.dim + j])
    }

    pub(crate) fn shifted(&self, k: i64) -> Self {
        DensityMatrix {
            offset: self.offset + k,
            dim: self.dim,
            data: self.data.clone(),
        }
    }
}

impl Windowed for DensityMatrix {
    fn window(&self) -> Window {
        Window::new(self.offset, self.dim)
    }

    fn embed(&self, target: Window) -> Self {
        debug_assert!(target.contains(&self.window()));
        let n = target.len;
        let base = (self.offset - target.offset) as usize;
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                data[(base + i) * n + (base + j)] = self.data[i * self.dim + j];
            }
        }
        DensityMatrix {
            offset: target.offset,
            dim: n,
            data,
        }
    }
}

/// Trace distance (1/2) sum |eig(rho - sigma)|, computed by a Hermitian
/// eigendecomposition of the difference on the common window.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let wr = rho.window();
    let ws = sigma.window();
    let eig_abs_sum = |m: &DMatrix<C64>| -> f64 { linalg::eigh(m).0.iter().map(|l| l.abs()).sum() };
    if wr.end() <= ws.offset || ws.end() <= wr.offset {
        // Disjoint windows: the difference is block diagonal.
        return 0.5 * (eig_abs_sum(&rho.to_dense()) + eig_abs_sum(&sigma.to_dense()));
    }
    let w = wr.union(&ws);
    let diff = DMatrix::from_fn(w.len, w.len, |i, j| {
        let (a, b) = (w.offset + i as i64, w.offset + j as i64);
        rho.entry(a, b) - sigma.entry(a, b)
    });
    0.5 * eig_abs_sum(&diff)
}
