//! Constructive steering on the Hilbert sphere: fold any finite-support unit
//! vector onto e0 with shifts and U(2) blocks, steer arbitrary source to
//! target, and compile a dense unitary on a window into a generator word.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{
    materialize_sequence, u2_matrix, GeneratorSequence, U2Params, UnitaryOp,
};
use crate::hilbert::{state_fidelity, Limits, StateVector, Window};
use crate::linalg;

/// Unitarity tolerance required of `compile_unitary` inputs.
pub const COMPILE_UNITARITY_TOL: f64 = 1e-10;
/// Amplitudes below this are treated as zero when folding.
const MERGE_SKIP_TOL: f64 = 1e-14;
/// Diagonal phases this close to 1 are not worth an op.
const PHASE_SKIP_TOL: f64 = 1e-13;

/// Metrics of one synthesis run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SynthesisReport {
    pub final_error: f64,
    pub op_count: usize,
    pub u2_count: usize,
    pub shift_count: usize,
    pub stage_count: usize,
    pub wall_time_s: f64,
}

impl SynthesisReport {
    pub(crate) fn for_sequence(seq: &GeneratorSequence, final_error: f64, started: Instant) -> Self {
        SynthesisReport {
            final_error,
            op_count: seq.len(),
            u2_count: seq.u2_count(),
            shift_count: seq.shift_count(),
            stage_count: 0,
            wall_time_s: started.elapsed().as_secs_f64(),
        }
    }

    /// Timing is wall-clock noise; serialized artifacts zero it by default so
    /// identical runs stay byte-identical.
    pub fn zero_timings(&mut self) {
        self.wall_time_s = 0.0;
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && 0.0 < eps && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::BadArgument {
            detail: format!("eps must lie in (0, 1), got {eps}"),
        })
    }
}

/// The U(2) block sending `(x, y)` to `(0, r)` with `r = sqrt(|x|^2+|y|^2)`
/// real non-negative.
fn merge_params(x: C64, y: C64) -> U2Params {
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    let m = [
        [-y / r, x / r],
        [x.conj() / r, y.conj() / r],
    ];
    U2Params::from_matrix(&m, 1e-8).expect("merge rotation is unitary by construction")
}

/// Greedy edge trim: drop edge amplitudes whose total squared mass stays
/// within `budget`, keeping at least one amplitude. Returns the kept index
/// range `lo..=hi`.
fn trim_support(amps: &[C64], budget: f64) -> (usize, usize) {
    let mut lo = 0usize;
    let mut hi = amps.len() - 1;
    let mut dropped = 0.0f64;
    while lo < hi && dropped + amps[lo].norm_sqr() <= budget / 2.0 {
        dropped += amps[lo].norm_sqr();
        lo += 1;
    }
    while hi > lo && dropped + amps[hi].norm_sqr() <= budget {
        dropped += amps[hi].norm_sqr();
        hi -= 1;
    }
    (lo, hi)
}

/// Fold `a` onto e0: shift the kept support to `[0, m-1]`, then repeatedly
/// rotate the index-0 amplitude into index 1 and shift down. The final e0
/// amplitude comes out real and non-negative.
///
/// The kept support is chosen so that the trimmed tail mass keeps the final
/// fidelity at or above `1 - eps`; with finite-support inputs and eps around
/// 1e-9 nothing of consequence is ever dropped.
pub fn fold_to_e0(
    a: &StateVector,
    eps: f64,
    limits: &Limits,
) -> Result<(GeneratorSequence, SynthesisReport)> {
    let started = Instant::now();
    check_eps(eps)?;
    let budget = eps * (2.0 - eps) / 4.0;
    let (lo, hi) = trim_support(a.amps(), budget);
    let m = hi - lo + 1;

    let mut seq = GeneratorSequence::empty();
    seq.push_fused(UnitaryOp::Shift(-(a.offset() + lo as i64)));

    // Working copy of the kept stream; entry 0 is the current absolute
    // index 0.
    let mut cur: Vec<C64> = a.amps()[lo..=hi].to_vec();
    for _ in 0..m - 1 {
        let (x, y) = (cur[0], cur[1]);
        if x.norm() >= MERGE_SKIP_TOL || y.norm() >= MERGE_SKIP_TOL {
            let p = merge_params(x, y);
            let u = u2_matrix(&p);
            cur[0] = u[0][0] * x + u[0][1] * y;
            cur[1] = u[1][0] * x + u[1][1] * y;
            seq.push_fused(UnitaryOp::U2At01(p));
        }
        seq.push_fused(UnitaryOp::Shift(-1));
        cur.remove(0);
    }

    // Phase fix: make the surviving e0 amplitude real non-negative.
    let z = cur[0];
    if z.norm() > MERGE_SKIP_TOL && (z.im.abs() > PHASE_SKIP_TOL * z.norm() || z.re < 0.0) {
        let phase = z.conj() / z.norm();
        let diag = [
            [phase, C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ];
        let p = U2Params::from_matrix(&diag, 1e-8).expect("diagonal phase is unitary");
        seq.push_fused(UnitaryOp::U2At01(p));
    }

    let folded = seq.apply_to_state(a, limits)?;
    let final_error = 1.0 - state_fidelity(&folded, &StateVector::basis(0));
    let report = SynthesisReport::for_sequence(&seq, final_error.max(0.0), started);
    Ok((seq, report))
}

/// Invert a unitary word. Exposed as a free function to mirror the op
/// vocabulary; see also [`ChannelProgram::inverted`] for programs that may
/// contain Kraus stages (those return `NotInvertible`).
///
/// [`ChannelProgram::inverted`]: crate::generators::ChannelProgram::inverted
pub fn invert(seq: &GeneratorSequence) -> GeneratorSequence {
    seq.inverted()
}

/// Steer `source` to `target`: fold the source, then run the target fold
/// backwards. The fold's phase normalization makes the match phase-exact,
/// not merely up to a global phase.
pub fn steer_state(
    source: &StateVector,
    target: &StateVector,
    eps: f64,
    limits: &Limits,
) -> Result<(GeneratorSequence, SynthesisReport)> {
    let started = Instant::now();
    check_eps(eps)?;
    let (fold_src, _) = fold_to_e0(source, eps / 2.0, limits)?;
    let (fold_tgt, _) = fold_to_e0(target, eps / 2.0, limits)?;
    let mut seq = fold_src;
    seq.extend_fused(&fold_tgt.inverted());

    let steered = seq.apply_to_state(source, limits)?;
    let final_error = 1.0 - state_fidelity(&steered, target);
    let report = SynthesisReport::for_sequence(&seq, final_error.max(0.0), started);
    Ok((seq, report))
}

/// Compile a dense unitary on `window` into a generator word by eliminating
/// each column onto the diagonal with adjacent-pair rotations (only adjacent
/// pairs are reachable by a shift-conjugated U(2) block), then fixing the
/// remaining diagonal phases.
pub fn compile_unitary(
    u: &DMatrix<C64>,
    window: Window,
    eps: f64,
    limits: &Limits,
) -> Result<(GeneratorSequence, SynthesisReport)> {
    let started = Instant::now();
    check_eps(eps)?;
    let n = window.len;
    if u.nrows() != n || u.ncols() != n || n == 0 {
        return Err(Error::BadArgument {
            detail: format!(
                "unitary is {}x{} but the window has length {}",
                u.nrows(),
                u.ncols(),
                n
            ),
        });
    }
    limits.check_window(n)?;
    let residual = linalg::unitarity_residual(u);
    if residual > COMPILE_UNITARITY_TOL {
        return Err(Error::NotUnitary {
            residual,
            tol: COMPILE_UNITARITY_TOL,
        });
    }

    let mut seq = GeneratorSequence::empty();
    if n == 1 {
        push_phase_fix(&mut seq, window.offset, u[(0, 0)]);
    } else if n == 2 {
        // The window is exactly one U(2) block away from the generators.
        let block = [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]];
        let p = U2Params::from_matrix(&block, COMPILE_UNITARITY_TOL)?;
        seq.push_fused(UnitaryOp::Shift(-window.offset));
        seq.push_fused(UnitaryOp::U2At01(p));
        seq.push_fused(UnitaryOp::Shift(window.offset));
    } else {
        // a <- G a, recording each adjacent rotation G until a is diagonal.
        let mut a = u.clone();
        let mut rotations: Vec<(usize, U2Params)> = Vec::new();
        for col in 0..n - 1 {
            for row in (col + 1..n).rev() {
                let (x, y) = (a[(row - 1, col)], a[(row, col)]);
                if y.norm() <= MERGE_SKIP_TOL {
                    continue;
                }
                let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
                let g = [
                    [x.conj() / r, y.conj() / r],
                    [-y / r, x / r],
                ];
                let p = U2Params::from_matrix(&g, 1e-8)
                    .expect("elimination rotation is unitary by construction");
                let gm = u2_matrix(&p);
                for c in col..n {
                    let (top, bot) = (a[(row - 1, c)], a[(row, c)]);
                    a[(row - 1, c)] = gm[0][0] * top + gm[0][1] * bot;
                    a[(row, c)] = gm[1][0] * top + gm[1][1] * bot;
                }
                rotations.push((row - 1, p));
            }
        }
        // U = g_1^dagger .. g_L^dagger D: phases first, then the adjoints in
        // reverse creation order.
        for idx in 0..n {
            push_phase_fix(&mut seq, window.offset + idx as i64, a[(idx, idx)]);
        }
        for (row, p) in rotations.iter().rev() {
            let j = window.offset + *row as i64;
            seq.push_fused(UnitaryOp::Shift(-j));
            seq.push_fused(UnitaryOp::U2At01(p.adjoint()));
            seq.push_fused(UnitaryOp::Shift(j));
        }
    }

    let materialized = materialize_sequence(&seq, window, limits)?;
    let final_error = linalg::max_abs_diff(&materialized, u);
    let report = SynthesisReport::for_sequence(&seq, final_error, started);
    Ok((seq, report))
}

/// Emit `diag(d, 1)` acting at absolute index `j`, skipping phases that are
/// already 1.
fn push_phase_fix(seq: &mut GeneratorSequence, j: i64, d: C64) {
    if (d - C64::new(1.0, 0.0)).norm() <= PHASE_SKIP_TOL {
        return;
    }
    let diag = [
        [d / d.norm(), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ];
    let p = U2Params::from_matrix(&diag, 1e-8).expect("diagonal phase is unitary");
    seq.push_fused(UnitaryOp::Shift(-j));
    seq.push_fused(UnitaryOp::U2At01(p));
    seq.push_fused(UnitaryOp::Shift(j));
}
