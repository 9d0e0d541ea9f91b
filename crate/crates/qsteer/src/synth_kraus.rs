//! Steering of density operators, following the constructive recipe: rotate
//! the source into its eigenbasis, collapse onto |e0><e0| with projected
//! swaps, rebuild the target spectrum with weighted swaps, then rotate into
//! the target eigenbasis.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::generators::{ChannelProgram, KrausElement, KrausStage, UnitaryOp};
use crate::hilbert::{trace_distance, DensityMatrix, Limits, Window, Windowed};
use crate::linalg;
use crate::synth_unitary::{compile_unitary, SynthesisReport};

/// Eigenvalues at or below this contribute nothing to the collapse support.
const RANK_TOL: f64 = 1e-12;

/// Spectral decomposition of a density operator with deterministic
/// conventions: eigenvalues descending, and each eigenvector's
/// largest-modulus component made real positive (ties broken by lowest
/// index).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub basis: DMatrix<C64>,
    pub window: Window,
}

impl EigenDecomposition {
    /// Number of eigenvalues above the rank cutoff, at least 1.
    pub fn rank(&self) -> usize {
        self.values.iter().filter(|v| **v > RANK_TOL).count().max(1)
    }
}

/// Diagonalize `rho = V diag(values) V^dagger` with the deterministic
/// ordering and phase conventions above.
pub fn diagonalize(rho: &DensityMatrix) -> EigenDecomposition {
    let n = rho.dim();
    let (vals, vecs) = linalg::eigh(&rho.to_dense());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));

    let mut values = Vec::with_capacity(n);
    let mut basis = DMatrix::<C64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(vals[src]);
        let col = vecs.column(src);
        let mut anchor = 0usize;
        for i in 1..n {
            if col[i].norm() > col[anchor].norm() {
                anchor = i;
            }
        }
        let a = col[anchor];
        let phase = if a.norm() > 0.0 {
            a.conj() / a.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            basis[(i, dst)] = col[i] * phase;
        }
    }
    EigenDecomposition {
        values,
        basis,
        window: rho.window(),
    }
}

/// The collapse stage of the steering construction: Kraus operators
/// `K_i = P0 Pi_{0,i}` for `i = 0..n-1` plus the complement projector, which
/// sends any density supported on `[0, n-1]` to |e0><e0|.
pub fn collapse_stage(n: usize) -> Result<KrausStage> {
    if n == 0 {
        return Err(Error::BadArgument {
            detail: "collapse stage needs n >= 1".into(),
        });
    }
    let elements = (0..n)
        .map(|i| KrausElement {
            weight: 1.0,
            swap_index: i,
            project: true,
        })
        .collect();
    KrausStage::new(elements, true)
}

/// The build stage: Kraus operators `K_i = sqrt(w_i) Pi_{0,i}`, which send
/// |e0><e0| to diag(w). Globally trace preserving on its own, so no
/// complement.
pub fn build_stage(weights: &[f64]) -> Result<KrausStage> {
    if weights.is_empty() {
        return Err(Error::EmptyInput {
            context: "build stage weights",
        });
    }
    let mut total = 0.0f64;
    for (i, w) in weights.iter().enumerate() {
        if !w.is_finite() {
            return Err(Error::NonFinite {
                context: "build stage weights",
            });
        }
        if *w < -1e-12 {
            return Err(Error::BadWeights {
                detail: format!("weight {i} is negative ({w})"),
            });
        }
        total += w;
    }
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::BadWeights {
            detail: format!("weights sum to {total}, expected 1"),
        });
    }
    let elements = weights
        .iter()
        .enumerate()
        .map(|(i, w)| KrausElement {
            weight: w.clamp(0.0, 1.0),
            swap_index: i,
            project: false,
        })
        .collect();
    KrausStage::new(elements, false)
}

/// Emit the channel program steering `rho` to `sigma`:
/// shift to the origin, rotate into the source eigenbasis, collapse onto
/// |e0><e0|, rebuild the target spectrum, rotate into the target eigenbasis,
/// shift back. Every unitary is compiled down to the generator vocabulary,
/// so the program uses nothing beyond shifts, U(2) blocks and P0.
pub fn steer_density(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    eps: f64,
    limits: &Limits,
) -> Result<(ChannelProgram, SynthesisReport)> {
    let started = Instant::now();
    if !(eps.is_finite() && 0.0 < eps && eps < 1.0) {
        return Err(Error::BadArgument {
            detail: format!("eps must lie in (0, 1), got {eps}"),
        });
    }
    let source = diagonalize(rho);
    let target = diagonalize(sigma);

    let mut prog = ChannelProgram::empty();
    prog.push_unitary_fused(UnitaryOp::Shift(-rho.offset()));

    let (to_diag, _) = compile_unitary(
        &source.basis.adjoint(),
        Window::new(0, rho.dim()),
        eps / 2.0,
        limits,
    )?;
    prog.push_sequence_fused(&to_diag);

    prog.push_stage(collapse_stage(source.rank())?);

    let total: f64 = target.values.iter().map(|v| v.max(0.0)).sum();
    let weights: Vec<f64> = target
        .values
        .iter()
        .map(|v| v.max(0.0) / total)
        .collect();
    prog.push_stage(build_stage(&weights)?);

    let (from_diag, _) = compile_unitary(
        &target.basis,
        Window::new(0, sigma.dim()),
        eps / 2.0,
        limits,
    )?;
    prog.push_sequence_fused(&from_diag);

    prog.push_unitary_fused(UnitaryOp::Shift(sigma.offset()));

    let out = prog.apply_to_density(rho, limits)?;
    let final_error = trace_distance(&out, sigma);
    let report = SynthesisReport {
        final_error,
        op_count: prog.unitary_op_count() + prog.stage_count(),
        u2_count: prog.u2_count(),
        shift_count: prog.shift_count(),
        stage_count: prog.stage_count(),
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    Ok((prog, report))
}
