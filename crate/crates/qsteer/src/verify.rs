//! Empirical certification: random-target universality sweeps, the
//! shift-free negative control, a brute-force covering-radius oracle at toy
//! scale, and sequence-length benchmarks.
//!
//! All randomness flows from explicit seeds; each trial derives its own
//! sub-seed, so trials are order-independent and reruns reproduce results
//! bit-for-bit at the serialization layer.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{u2_matrix, U2Params, UnitaryOp};
use crate::hilbert::{state_fidelity, DensityMatrix, Limits, StateVector};
use crate::linalg;
use crate::synth_kraus::steer_density;
use crate::synth_unitary::steer_state;

/// Largest state dimension a sweep will accept.
pub const MAX_SWEEP_STATE_DIM: usize = 64;
/// Largest density dimension a sweep will accept.
pub const MAX_SWEEP_DENSITY_DIM: usize = 16;

fn mix(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial sub-seed derived from the sweep seed, the dimension, the trial
/// index and a role salt.
fn sub_seed(seed: u64, dim: usize, trial: usize, salt: u64) -> u64 {
    let mut s = seed;
    for v in [dim as u64, trial as u64, salt] {
        s = mix(s ^ v);
    }
    s
}

/// Haar-uniform pure state on the span of indices `[0, n-1]`: a standard
/// complex Gaussian vector, normalized. Deterministic per seed.
pub fn random_state(n: usize, seed: u64) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::BadArgument {
            detail: "state dimension must be >= 1".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::normalized(amps, 0, &Limits::with_window_cap(n.max(2)))
}

/// Random density on `[0, n-1]`: flat-Dirichlet eigenvalues conjugated by a
/// Haar unitary. Deterministic per seed.
pub fn random_density(n: usize, seed: u64) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::BadArgument {
            detail: "density dimension must be >= 1".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Exponential samples normalize to a flat Dirichlet.
    let mut weights: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    if total < 1e-300 {
        weights = vec![1.0 / n as f64; n];
    } else {
        for w in &mut weights {
            *w /= total;
        }
    }
    let v = linalg::haar_unitary(n, &mut rng);
    let lam = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(weights[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let m = &v * lam * v.adjoint();
    let sym = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let rows: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| sym[(i, j)]).collect())
        .collect();
    DensityMatrix::new(rows, 0, crate::hilbert::VALIDATION_TOL, &Limits::with_window_cap(n))
}

/// What a universality sweep steers: pure states or density operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    State,
    Density,
}

/// One synthesis trial, as recorded in CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialRow {
    pub dim: usize,
    pub trial: usize,
    pub op_count: usize,
    pub u2_count: usize,
    pub shift_count: usize,
    pub final_error: f64,
    pub wall_time_s: f64,
}

/// Result of a universality sweep: per-trial rows plus aggregates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub eps: f64,
    pub seed: u64,
    pub max_final_error: f64,
    pub mean_op_count: f64,
    pub max_op_count: usize,
    pub wall_time_s: f64,
    pub passed: bool,
    /// Seed of the worst trial, if any trial exceeded eps.
    pub worst_seed: Option<u64>,
    pub rows: Vec<TrialRow>,
}

impl SweepResult {
    pub fn zero_timings(&mut self) {
        self.wall_time_s = 0.0;
        for row in &mut self.rows {
            row.wall_time_s = 0.0;
        }
    }
}

fn run_state_trial(
    dim: usize,
    trial: usize,
    eps: f64,
    seed: u64,
    limits: &Limits,
) -> Result<(TrialRow, u64)> {
    let s_seed = sub_seed(seed, dim, trial, 0);
    let t_seed = sub_seed(seed, dim, trial, 1);
    let source = random_state(dim, s_seed)?;
    let target = random_state(dim, t_seed)?;
    let (seq, rep) = steer_state(&source, &target, eps, limits)?;
    debug_assert_eq!(seq.len(), rep.op_count);
    Ok((
        TrialRow {
            dim,
            trial,
            op_count: rep.op_count,
            u2_count: rep.u2_count,
            shift_count: rep.shift_count,
            final_error: rep.final_error,
            wall_time_s: rep.wall_time_s,
        },
        s_seed,
    ))
}

fn run_density_trial(
    dim: usize,
    trial: usize,
    eps: f64,
    seed: u64,
    limits: &Limits,
) -> Result<(TrialRow, u64)> {
    let s_seed = sub_seed(seed, dim, trial, 2);
    let t_seed = sub_seed(seed, dim, trial, 3);
    let rho = random_density(dim, s_seed)?;
    let sigma = random_density(dim, t_seed)?;
    let (_prog, rep) = steer_density(&rho, &sigma, eps, limits)?;
    Ok((
        TrialRow {
            dim,
            trial,
            op_count: rep.op_count,
            u2_count: rep.u2_count,
            shift_count: rep.shift_count,
            final_error: rep.final_error,
            wall_time_s: rep.wall_time_s,
        },
        s_seed,
    ))
}

/// Steer `trials` random source/target pairs for every dimension and record
/// the final errors. The sweep passes iff every error is at most `eps`.
pub fn universality_sweep(
    kind: SweepKind,
    dims: &[usize],
    trials: usize,
    eps: f64,
    seed: u64,
    limits: &Limits,
) -> Result<SweepResult> {
    let started = Instant::now();
    if dims.is_empty() {
        return Err(Error::EmptyInput { context: "dims" });
    }
    if trials == 0 {
        return Err(Error::BadArgument {
            detail: "trials must be >= 1".into(),
        });
    }
    let cap = match kind {
        SweepKind::State => MAX_SWEEP_STATE_DIM,
        SweepKind::Density => MAX_SWEEP_DENSITY_DIM,
    };
    for &d in dims {
        if d == 0 || d > cap {
            return Err(Error::BadArgument {
                detail: format!("sweep dimension {d} outside 1..={cap}"),
            });
        }
    }

    let mut rows = Vec::with_capacity(dims.len() * trials);
    let mut max_final_error = 0.0f64;
    let mut worst_seed = None;
    let mut max_op_count = 0usize;
    let mut op_total = 0usize;
    for &dim in dims {
        for trial in 0..trials {
            let (row, trial_seed) = match kind {
                SweepKind::State => run_state_trial(dim, trial, eps, seed, limits)?,
                SweepKind::Density => run_density_trial(dim, trial, eps, seed, limits)?,
            };
            if row.final_error > max_final_error {
                max_final_error = row.final_error;
            }
            if row.final_error > eps {
                worst_seed.get_or_insert(trial_seed);
            }
            max_op_count = max_op_count.max(row.op_count);
            op_total += row.op_count;
            rows.push(row);
        }
    }
    let passed = max_final_error <= eps;
    Ok(SweepResult {
        kind,
        dims: dims.to_vec(),
        trials,
        eps,
        seed,
        max_final_error,
        mean_op_count: op_total as f64 / rows.len() as f64,
        max_op_count,
        wall_time_s: started.elapsed().as_secs_f64(),
        passed,
        worst_seed,
        rows,
    })
}

/// Report of the shift-free negative control.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativeControlReport {
    pub target_index: i64,
    pub word_length: usize,
    pub seed: u64,
    /// Fidelity from e0 to the target after the U2-only word; must be 0.
    pub fidelity_to_target: f64,
    /// Largest drift of any amplitude modulus outside {0, 1} along the word.
    pub max_modulus_drift: f64,
    /// Fidelity reached when the shift is allowed back in.
    pub full_family_fidelity: f64,
    pub passed: bool,
}

/// Apply a random word of U(2)-only ops and certify that it never moves
/// amplitude across the {0, 1} boundary, then show that adding the shift
/// reaches the target.
pub fn negative_control(
    target_index: i64,
    word_length: usize,
    seed: u64,
    limits: &Limits,
) -> Result<NegativeControlReport> {
    if target_index == 0 || target_index == 1 {
        return Err(Error::BadArgument {
            detail: "negative-control target index must lie outside {0, 1}".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut word = Vec::with_capacity(word_length);
    for _ in 0..word_length {
        word.push(UnitaryOp::U2At01(U2Params::canonicalized(
            TAU * rng.gen::<f64>(),
            TAU * rng.gen::<f64>(),
            TAU * rng.gen::<f64>(),
            TAU * rng.gen::<f64>(),
        )));
    }

    // Word applied to e0: the target amplitude never becomes nonzero.
    let mut cur = StateVector::basis(0);
    for op in &word {
        cur = op.apply_to_state(&cur, limits)?;
    }
    let fidelity_to_target = state_fidelity(&cur, &StateVector::basis(target_index));

    // Mixed start: the modulus at every index outside {0, 1} is conserved
    // op by op.
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let lo = target_index.min(0);
    let hi = target_index.max(0);
    let span = (hi - lo + 1) as usize;
    let mut amps = vec![C64::new(0.0, 0.0); span];
    amps[(0 - lo) as usize] = C64::new(half, 0.0);
    amps[(target_index - lo) as usize] = C64::new(half, 0.0);
    let mixed = StateVector::new(amps, lo, limits)?;
    let initial: Vec<(i64, f64)> = (lo..=hi)
        .filter(|k| *k != 0 && *k != 1)
        .map(|k| (k, mixed.amp(k).norm()))
        .collect();
    let mut max_modulus_drift = 0.0f64;
    let mut cur = mixed;
    for op in &word {
        cur = op.apply_to_state(&cur, limits)?;
        for (k, m0) in &initial {
            max_modulus_drift = max_modulus_drift.max((cur.amp(*k).norm() - m0).abs());
        }
    }

    // Control: with the shift available the target is reachable.
    let (_, rep) = steer_state(
        &StateVector::basis(0),
        &StateVector::basis(target_index),
        1e-9,
        limits,
    )?;
    let full_family_fidelity = 1.0 - rep.final_error;

    let passed = fidelity_to_target <= 1e-15
        && max_modulus_drift <= 1e-12
        && full_family_fidelity >= 1.0 - 1e-9;
    Ok(NegativeControlReport {
        target_index,
        word_length,
        seed,
        fidelity_to_target,
        max_modulus_drift,
        full_family_fidelity,
        passed,
    })
}

/// Covering radius of word orbits at one word length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageRow {
    pub word_length: usize,
    pub orbit_points: usize,
    pub covering_radius: f64,
}

/// Output of the brute-force coverage oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub grid_steps: usize,
    pub max_word_length: usize,
    pub node_cap: usize,
    pub sample_points: usize,
    pub alphabet_size: usize,
    pub rows: Vec<CoverageRow>,
    pub passed: bool,
}

/// Number of points in the fixed fibonacci-sphere sample.
const COVERAGE_SAMPLE: usize = 1000;
/// Dedup cell edge for visited Bloch points, in Euclidean coordinates.
const COVERAGE_CELL: f64 = 0.02;

/// Bloch-sphere rotation of a U(2) chart element. The global phase delta is
/// inert under the fidelity-angle metric, so the alphabet grids only
/// (theta, phi, lambda).
fn bloch_rotation(p: &U2Params) -> Matrix3<f64> {
    let u = u2_matrix(p);
    let sig = [
        [
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        ],
        [
            [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
            [C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        ],
        [
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
        ],
    ];
    let mul = |a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]| -> [[C64; 2]; 2] {
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    };
    let adj = |a: &[[C64; 2]; 2]| -> [[C64; 2]; 2] {
        [
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ]
    };
    Matrix3::from_fn(|a, b| {
        let m = mul(&mul(&u, &sig[b]), &adj(&u));
        0.5 * (mul(&sig[a], &m)[0][0] + mul(&sig[a], &m)[1][1]).re
    })
}

fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let az = golden * i as f64;
            Vector3::new(r * az.cos(), r * az.sin(), z)
        })
        .collect()
}

fn cell_index(v: &Vector3<f64>) -> usize {
    const HALF: i64 = 51;
    const DIM: usize = 103;
    let q = |x: f64| -> usize {
        let c = (x / COVERAGE_CELL).round() as i64;
        (c.clamp(-HALF, HALF) + HALF) as usize
    };
    (q(v.x) * DIM + q(v.y)) * DIM + q(v.z)
}

/// Brute-force density check at toy scale: enumerate all words over a
/// discretized U(2) grid acting on e0 inside the {e0, e1} plane, tracked on
/// the Bloch sphere with quantized dedup, and report the covering radius per
/// word length in the fidelity-angle metric arccos(fidelity).
pub fn net_coverage_oracle(
    grid_steps: usize,
    max_word_length: usize,
    node_cap: usize,
) -> Result<CoverageReport> {
    if grid_steps == 0 || grid_steps > 32 {
        return Err(Error::BadArgument {
            detail: format!("grid_steps {grid_steps} outside 1..=32"),
        });
    }
    if max_word_length > 6 {
        return Err(Error::BadArgument {
            detail: format!("max_word_length {max_word_length} exceeds 6"),
        });
    }

    // Alphabet: grid over (theta, phi, lambda), dedup'd as rotations.
    let mut alphabet: Vec<Matrix3<f64>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let step = TAU / grid_steps as f64;
    for ti in 0..grid_steps {
        for pi in 0..grid_steps {
            for li in 0..grid_steps {
                let p = U2Params::canonicalized(
                    step * ti as f64,
                    step * pi as f64,
                    step * li as f64,
                    0.0,
                );
                let r = bloch_rotation(&p);
                let key: [i64; 9] = {
                    let mut k = [0i64; 9];
                    for (i, v) in r.iter().enumerate() {
                        k[i] = (v / 1e-9).round() as i64;
                    }
                    k
                };
                if seen.insert(key) {
                    alphabet.push(r);
                }
            }
        }
    }

    let samples = fibonacci_sphere(COVERAGE_SAMPLE);
    let mut best_dot = vec![-1.0f64; samples.len()];
    let mut visited = vec![false; 103 * 103 * 103];
    let mut orbit: Vec<Vector3<f64>> = Vec::new();
    let mut rows = Vec::with_capacity(max_word_length + 1);
    let mut nodes = 0usize;

    let pole = Vector3::new(0.0, 0.0, 1.0);
    visited[cell_index(&pole)] = true;
    orbit.push(pole);
    let mut frontier: Vec<Vector3<f64>> = vec![pole];

    let radius_of = |best: &[f64]| -> f64 {
        best.iter()
            .map(|d| 0.5 * d.clamp(-1.0, 1.0).acos())
            .fold(0.0, f64::max)
    };
    for (i, s) in samples.iter().enumerate() {
        best_dot[i] = best_dot[i].max(s.dot(&pole));
    }
    rows.push(CoverageRow {
        word_length: 0,
        orbit_points: orbit.len(),
        covering_radius: radius_of(&best_dot),
    });

    for level in 1..=max_word_length {
        let mut new_points: Vec<Vector3<f64>> = Vec::new();
        for v in &frontier {
            nodes += alphabet.len();
            if nodes > node_cap {
                return Err(Error::BudgetExceeded {
                    nodes,
                    cap: node_cap,
                });
            }
            for r in &alphabet {
                let w = r * v;
                let idx = cell_index(&w);
                if !visited[idx] {
                    visited[idx] = true;
                    new_points.push(w);
                }
            }
        }
        for (i, s) in samples.iter().enumerate() {
            for w in &new_points {
                let d = s.dot(w);
                if d > best_dot[i] {
                    best_dot[i] = d;
                }
            }
        }
        orbit.extend_from_slice(&new_points);
        rows.push(CoverageRow {
            word_length: level,
            orbit_points: orbit.len(),
            covering_radius: radius_of(&best_dot),
        });
        frontier = new_points;
    }

    let mut passed = true;
    for pair in rows.windows(2) {
        if pair[1].covering_radius > pair[0].covering_radius {
            passed = false;
        }
    }
    if rows.len() > 1 && rows[1].covering_radius >= rows[0].covering_radius {
        passed = false;
    }
    Ok(CoverageReport {
        grid_steps,
        max_word_length,
        node_cap,
        sample_points: COVERAGE_SAMPLE,
        alphabet_size: alphabet.len(),
        rows,
        passed,
    })
}

/// Steering cost benchmark: state-steering trials across dimensions,
/// returning raw CSV rows. Counts are deterministic per seed.
pub fn bench(
    dims: &[usize],
    eps: f64,
    trials: usize,
    seed: u64,
    limits: &Limits,
) -> Result<Vec<TrialRow>> {
    if dims.is_empty() {
        return Err(Error::EmptyInput { context: "dims" });
    }
    let mut rows = Vec::with_capacity(dims.len() * trials);
    for &dim in dims {
        if dim == 0 {
            return Err(Error::BadArgument {
                detail: "bench dimension must be >= 1".into(),
            });
        }
        for trial in 0..trials {
            let (row, _) = run_state_trial(dim, trial, eps, seed, limits)?;
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Zero the wall-time column of benchmark rows before serialization.
pub fn zero_row_timings(rows: &mut [TrialRow]) {
    for row in rows {
        row.wall_time_s = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn random_state_dim1_is_phase_of_e0() {
        let s = random_state(1, 99).unwrap();
        assert!((s.amp(0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_state_is_deterministic() {
        let a = random_state(8, 42).unwrap();
        let b = random_state(8, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_state_haar_moment() {
        // Mean |a_0|^2 over the Haar sphere in dim 4 is 1/4.
        let mut acc = 0.0;
        for seed in 0..1000u64 {
            acc += random_state(4, seed).unwrap().amp(0).norm_sqr();
        }
        let mean = acc / 1000.0;
        assert!((mean - 0.25).abs() < 0.03, "mean={mean}");
    }

    #[test]
    fn random_density_dim1_is_projector() {
        let rho = random_density(1, 5).unwrap();
        assert!((rho.entry(0, 0) - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn random_density_validates_and_purity_moment() {
        let rho = random_density(4, 7).unwrap();
        rho.validate(1e-10).unwrap();

        // Flat Dirichlet + Haar in dim 2: E[tr rho^2] = 2/3.
        let mut acc = 0.0;
        for seed in 0..1000u64 {
            let rho = random_density(2, seed).unwrap();
            let m = rho.to_dense();
            let sq = &m * &m;
            acc += (sq[(0, 0)] + sq[(1, 1)]).re;
        }
        let mean = acc / 1000.0;
        assert!((mean - 2.0 / 3.0).abs() < 0.03, "mean={mean}");
    }

    #[test]
    fn state_sweep_small() {
        let res = universality_sweep(SweepKind::State, &[2], 10, 1e-9, 11, &lim()).unwrap();
        assert!(res.passed);
        assert!(res.max_final_error <= 1e-9);
        assert_eq!(res.rows.len(), 10);
    }

    #[test]
    fn density_sweep_small() {
        let res = universality_sweep(SweepKind::Density, &[2, 4], 10, 1e-8, 11, &lim()).unwrap();
        assert!(res.passed);
        assert!(res.max_final_error <= 1e-8);
        assert_eq!(res.rows.len(), 20);
    }

    #[test]
    fn sweep_rejects_oversize_dims() {
        let err = universality_sweep(SweepKind::Density, &[32], 1, 1e-8, 0, &lim()).unwrap_err();
        assert!(matches!(err, Error::BadArgument { .. }));
    }

    #[test]
    fn negative_control_exact() {
        let rep = negative_control(2, 100, 3, &lim()).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.fidelity_to_target, 0.0);
        assert!(rep.max_modulus_drift <= 1e-12);
        assert!(rep.full_family_fidelity >= 1.0 - 1e-9);

        let rep = negative_control(5, 1000, 17, &lim()).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.fidelity_to_target, 0.0);
    }

    #[test]
    fn negative_control_rejects_block_indices() {
        assert!(negative_control(0, 10, 1, &lim()).is_err());
        assert!(negative_control(1, 10, 1, &lim()).is_err());
    }

    #[test]
    fn bloch_rotation_matches_state_action() {
        let mut s = 5u64;
        let mut rnd = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            TAU * (((s >> 11) as f64) / ((1u64 << 53) as f64))
        };
        for _ in 0..50 {
            let p = U2Params::canonicalized(rnd(), rnd(), rnd(), 0.0);
            let u = u2_matrix(&p);
            let r = bloch_rotation(&p);
            // e0 has Bloch vector (0, 0, 1); U e0 = (u00, u10).
            let (a, b) = (u[0][0], u[1][0]);
            let expect = Vector3::new(
                2.0 * (a.conj() * b).re,
                2.0 * (a.conj() * b).im,
                a.norm_sqr() - b.norm_sqr(),
            );
            let got = r * Vector3::new(0.0, 0.0, 1.0);
            assert!((got - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn coverage_radius_shrinks_with_words() {
        let rep = net_coverage_oracle(8, 2, 100_000_000).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.rows.len(), 3);
        assert!(rep.rows[0].covering_radius > rep.rows[1].covering_radius);
        assert!(rep.rows[1].covering_radius >= rep.rows[2].covering_radius);
        // Word length 0: the orbit is e0 alone, radius = max distance from
        // the pole over the sample; the sample's most antipodal point sits
        // at z = -1 + 1/N, so allow that much slack below pi/2.
        assert!((rep.rows[0].covering_radius - PI / 2.0).abs() < 0.05);
    }

    #[test]
    fn coverage_budget_errors() {
        let err = net_coverage_oracle(16, 4, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn bench_row_counts_and_determinism() {
        let rows = bench(&[2, 3, 4], 1e-9, 2, 5, &lim()).unwrap();
        assert_eq!(rows.len(), 6);
        let rows2 = bench(&[2, 3, 4], 1e-9, 2, 5, &lim()).unwrap();
        for (a, b) in rows.iter().zip(rows2.iter()) {
            assert_eq!(a.dim, b.dim);
            assert_eq!(a.trial, b.trial);
            assert_eq!(a.op_count, b.op_count);
            assert_eq!(a.final_error, b.final_error);
        }
    }

    #[test]
    fn bench_op_count_grows_linearly() {
        let rows = bench(&[2, 3, 4, 5, 6], 1e-9, 4, 9, &lim()).unwrap();
        // Least-squares slope of op_count vs dim stays within the fold
        // bound of two stacked folds (about 4 ops per dimension).
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r.dim as f64, r.op_count as f64))
            .collect();
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(slope > 0.0 && slope <= 4.5, "slope={slope}");
    }
}
