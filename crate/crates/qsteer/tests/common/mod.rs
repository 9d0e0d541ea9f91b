//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's own numeric paths: the eigensolver is a hand-rolled
//! cyclic Jacobi iteration, and states evolve in a plain index->amplitude
//! dictionary.

#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use qsteer::{DensityMatrix, GeneratorSequence, StateVector, UnitaryOp, Window, Windowed};

/// Cyclic Jacobi eigensolver for complex Hermitian matrices. Returns
/// eigenvalues (unordered) and the accumulated unitary `v` with `a = v L v^H`.
pub fn jacobi_eigh(a: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let mut m = a.clone();
    let mut v = DMatrix::<C64>::identity(n, n);
    let scale = a.iter().map(|z| z.norm()).fold(1e-300, f64::max);

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = m[(p, q)];
                if b.norm() <= 1e-300 {
                    continue;
                }
                let alpha = b.arg();
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Annihilation condition: t^2 - 2 tau t - 1 = 0; take the
                // small-magnitude root for stability.
                let tau = (app - aqq) / (2.0 * b.norm());
                let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = -sign / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = C64::from_polar(t * c, alpha);

                // m <- J^H m J with J = [[c, s], [-conj(s), c]] on (p, q).
                for k in 0..n {
                    let (mp, mq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = mp * c - mq * s.conj();
                    m[(k, q)] = mp * s + mq * c;
                }
                for k in 0..n {
                    let (mp, mq) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = mp * c - mq * s;
                    m[(q, k)] = mp * s.conj() + mq * c;
                }
                for k in 0..n {
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vp * c - vq * s.conj();
                    v[(k, q)] = vp * s + vq * c;
                }
            }
        }
    }
    let vals = (0..n).map(|i| m[(i, i)].re).collect();
    (vals, v)
}

/// Brute-force minimum eigenvalue of a Hermitian matrix.
pub fn oracle_min_eig(a: &DMatrix<C64>) -> f64 {
    jacobi_eigh(a).0.into_iter().fold(f64::INFINITY, f64::min)
}

fn dense_on_union(rho: &DensityMatrix, w: Window) -> DMatrix<C64> {
    DMatrix::from_fn(w.len, w.len, |i, j| {
        rho.entry(w.offset + i as i64, w.offset + j as i64)
    })
}

/// Trace distance through the Jacobi oracle on the zero-padded union window.
pub fn oracle_trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let w = rho.window().union(&sigma.window());
    let diff = dense_on_union(rho, w) - dense_on_union(sigma, w);
    0.5 * jacobi_eigh(&diff).0.iter().map(|l| l.abs()).sum::<f64>()
}

/// Sparse dictionary state for the dense application oracle.
pub type DictState = BTreeMap<i64, C64>;

pub fn dict_from_state(s: &StateVector) -> DictState {
    s.amps()
        .iter()
        .enumerate()
        .map(|(i, z)| (s.offset() + i as i64, *z))
        .collect()
}

/// Apply a generator word to a dictionary state, entirely independently of
/// the windowed representation.
pub fn dict_apply(seq: &GeneratorSequence, start: &DictState) -> DictState {
    let mut cur = start.clone();
    for op in seq.ops() {
        match op {
            UnitaryOp::Shift(k) => {
                cur = cur.iter().map(|(idx, z)| (idx + k, *z)).collect();
            }
            UnitaryOp::U2At01(p) => {
                let u = qsteer::u2_matrix(p);
                let zero = C64::new(0.0, 0.0);
                let a0 = cur.get(&0).copied().unwrap_or(zero);
                let a1 = cur.get(&1).copied().unwrap_or(zero);
                cur.insert(0, u[0][0] * a0 + u[0][1] * a1);
                cur.insert(1, u[1][0] * a0 + u[1][1] * a1);
            }
        }
    }
    cur
}

pub fn dict_fidelity(a: &DictState, b: &DictState) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for (idx, z) in a {
        if let Some(w) = b.get(idx) {
            acc += z.conj() * w;
        }
    }
    acc.norm()
}

/// Dense Kraus matrices of a symbolic stage on a window, from first
/// principles: `sqrt(w) (P0)? T_{0,i}` plus the complement projector.
pub fn oracle_stage_matrices(stage: &qsteer::KrausStage, w: Window) -> Vec<DMatrix<C64>> {
    let n = w.len;
    let mut out = Vec::new();
    for el in &stage.elements {
        let mut k = DMatrix::<C64>::zeros(n, n);
        for col in 0..n {
            let src = w.offset + col as i64;
            let dst = if src == 0 {
                el.swap_index as i64
            } else if src == el.swap_index as i64 {
                0
            } else {
                src
            };
            if el.project && dst != 0 {
                continue;
            }
            let row = (dst - w.offset) as usize;
            k[(row, col)] = C64::new(el.weight.sqrt(), 0.0);
        }
        out.push(k);
    }
    if stage.complement {
        let keep = stage.elements.len() as i64;
        let mut k = DMatrix::<C64>::zeros(n, n);
        for col in 0..n {
            let idx = w.offset + col as i64;
            if !(0..keep).contains(&idx) {
                k[(col, col)] = C64::new(1.0, 0.0);
            }
        }
        out.push(k);
    }
    out
}

/// Dense channel oracle: run a whole program against a density matrix kept
/// on a fixed window, building every operator from first principles. Panics
/// if the window is too small to hold an intermediate state (the trace
/// would leak).
pub fn oracle_apply_program(
    prog: &qsteer::ChannelProgram,
    rho: &DensityMatrix,
    w: Window,
) -> DMatrix<C64> {
    let mut cur = dense_on_union(rho, w);
    for item in prog.items() {
        match item {
            qsteer::ProgramItem::Unitary(op) => {
                let u = oracle_unitary_matrix(op, w);
                cur = &u * cur * u.adjoint();
            }
            qsteer::ProgramItem::Kraus(stage) => {
                let ks = oracle_stage_matrices(stage, w);
                let mut acc = DMatrix::<C64>::zeros(w.len, w.len);
                for k in &ks {
                    acc += k * &cur * k.adjoint();
                }
                cur = acc;
            }
        }
        let trace: C64 = (0..w.len).map(|i| cur[(i, i)]).sum();
        assert!(
            (trace.re - 1.0).abs() < 1e-9 && trace.im.abs() < 1e-9,
            "oracle window too small: trace leaked to {trace}"
        );
    }
    cur
}

/// Dense matrix of a single unitary op on a window. Panics if a shift moves
/// support across the boundary; pick the window large enough.
pub fn oracle_unitary_matrix(op: &UnitaryOp, w: Window) -> DMatrix<C64> {
    let n = w.len;
    match op {
        UnitaryOp::Shift(k) => DMatrix::from_fn(n, n, |i, j| {
            let (src, dst) = (w.offset + j as i64, w.offset + i as i64);
            if dst == src + k {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }),
        UnitaryOp::U2At01(p) => {
            let u = qsteer::u2_matrix(p);
            let mut m = DMatrix::<C64>::identity(n, n);
            assert!(
                w.contains_index(0) && w.contains_index(1),
                "oracle window must contain indices 0 and 1"
            );
            let i0 = (0 - w.offset) as usize;
            let i1 = (1 - w.offset) as usize;
            m[(i0, i0)] = u[0][0];
            m[(i0, i1)] = u[0][1];
            m[(i1, i0)] = u[1][0];
            m[(i1, i1)] = u[1][1];
            m
        }
    }
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
