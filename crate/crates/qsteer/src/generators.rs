//! The generator set: the bilateral shift, a parametrized U(2) block acting on
//! absolute indices 0 and 1, the projector P0 = |e0><e0|, and everything
//! derived from them — adjacent swaps, swap chains, symbolic Kraus stages and
//! channel programs.
//!
//! Programs are symbolic: a program never stores a raw matrix, so it is
//! window-independent and serializes exactly. `materialize_*` bridges to dense
//! matrices on an explicit window.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, Limits, StateVector, Window, Windowed};

/// Tolerance for the trace-preservation certificate of a Kraus stage.
pub const KRAUS_TP_TOL: f64 = 1e-10;
/// Tolerance at which Kraus-stage outputs are re-validated as densities.
pub const KRAUS_OUT_TOL: f64 = 1e-9;
/// Support below this modulus is ignored when checking materialization leaks.
const LEAK_TOL: f64 = 1e-13;

fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Angles of the U(2) chart
/// `e^{i delta} [[cos(t/2), -e^{i lam} sin(t/2)], [e^{i phi} sin(t/2), e^{i(phi+lam)} cos(t/2)]]`,
/// all canonically in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U2Params {
    pub theta: f64,
    pub phi: f64,
    pub lam: f64,
    pub delta: f64,
}

impl U2Params {
    /// Strict constructor: angles must be finite and already canonical.
    pub fn new(theta: f64, phi: f64, lam: f64, delta: f64) -> Result<Self> {
        for (name, v) in [
            ("theta", theta),
            ("phi", phi),
            ("lambda", lam),
            ("delta", delta),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite { context: "u2 angle" });
            }
            if !(0.0..TAU).contains(&v) {
                return Err(Error::BadArgument {
                    detail: format!("u2 angle {name}={v} outside canonical range [0, 2pi)"),
                });
            }
        }
        Ok(U2Params {
            theta,
            phi,
            lam,
            delta,
        })
    }

    /// Wrap arbitrary finite angles into the canonical range.
    pub fn canonicalized(theta: f64, phi: f64, lam: f64, delta: f64) -> Self {
        U2Params {
            theta: wrap_angle(theta),
            phi: wrap_angle(phi),
            lam: wrap_angle(lam),
            delta: wrap_angle(delta),
        }
    }

    /// Chart angles of an arbitrary 2x2 unitary (checked at `tol`).
    pub fn from_matrix(u: &[[C64; 2]; 2], tol: f64) -> Result<Self> {
        let residual = unitarity_residual_2x2(u);
        if residual > tol {
            return Err(Error::NotUnitary { residual, tol });
        }
        let (u00, u01, u10) = (u[0][0], u[0][1], u[1][0]);
        let theta = 2.0 * u10.norm().atan2(u00.norm());
        let delta = if u00.norm() > 0.0 { u00.arg() } else { 0.0 };
        let (phi, lam) = if u10.norm() > 0.0 {
            // -u01 may vanish only together with u10 (unitarity).
            ((u10.arg() - delta), ((-u01).arg() - delta))
        } else {
            // Diagonal case: put the remaining phase on lambda.
            (0.0, u[1][1].arg() - delta)
        };
        Ok(U2Params::canonicalized(theta, phi, lam, delta))
    }

    /// Angles of the adjoint chart element, in closed form.
    pub fn adjoint(&self) -> Self {
        U2Params::canonicalized(self.theta, PI - self.lam, PI - self.phi, -self.delta)
    }
}

/// The swap Pi = U2(pi, 0, pi, 0) exchanging e0 and e1; a real involution.
pub fn pi_params() -> U2Params {
    U2Params {
        theta: PI,
        phi: 0.0,
        lam: PI,
        delta: 0.0,
    }
}

/// Dense 2x2 matrix of the chart element.
pub fn u2_matrix(p: &U2Params) -> [[C64; 2]; 2] {
    let (c, s) = ((p.theta / 2.0).cos(), (p.theta / 2.0).sin());
    let ph = |a: f64| C64::new(a.cos(), a.sin());
    let g = ph(p.delta);
    [
        [g * c, -g * ph(p.lam) * s],
        [g * ph(p.phi) * s, g * ph(p.phi + p.lam) * c],
    ]
}

fn unitarity_residual_2x2(u: &[[C64; 2]; 2]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            // (U^dagger U)_{ij}
            let g = u[0][i].conj() * u[0][j] + u[1][i].conj() * u[1][j];
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - C64::new(expect, 0.0)).norm());
        }
    }
    worst
}

/// One symbolic unitary instruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitaryOp {
    /// The bilateral shift by `k`: e_j -> e_{j+k}.
    Shift(i64),
    /// The U(2) block on absolute indices {0, 1}, identity elsewhere.
    U2At01(U2Params),
}

impl UnitaryOp {
    fn check(&self, limits: &Limits) -> Result<()> {
        match self {
            UnitaryOp::Shift(k) => {
                if k.unsigned_abs() as usize > limits.window_cap {
                    Err(Error::WindowOverflow {
                        needed: k.unsigned_abs() as usize,
                        cap: limits.window_cap,
                    })
                } else {
                    Ok(())
                }
            }
            UnitaryOp::U2At01(p) => {
                U2Params::new(p.theta, p.phi, p.lam, p.delta)?;
                Ok(())
            }
        }
    }

    pub fn apply_to_state(&self, psi: &StateVector, limits: &Limits) -> Result<StateVector> {
        self.check(limits)?;
        match self {
            UnitaryOp::Shift(k) => Ok(psi.shifted(*k)),
            UnitaryOp::U2At01(p) => {
                let w = psi.window().union(&Window::new(0, 2));
                limits.check_window(w.len)?;
                let mut out = psi.embed(w);
                let u = u2_matrix(p);
                let i0 = w.local(0).expect("window contains 0");
                let i1 = w.local(1).expect("window contains 1");
                let (a0, a1) = (out.amps()[i0], out.amps()[i1]);
                let mut amps = out.amps().to_vec();
                amps[i0] = u[0][0] * a0 + u[0][1] * a1;
                amps[i1] = u[1][0] * a0 + u[1][1] * a1;
                out = StateVector::from_parts_unchecked(amps, w.offset);
                Ok(out)
            }
        }
    }

    pub fn apply_to_density(&self, rho: &DensityMatrix, limits: &Limits) -> Result<DensityMatrix> {
        self.check(limits)?;
        match self {
            UnitaryOp::Shift(k) => Ok(rho.shifted(*k)),
            UnitaryOp::U2At01(p) => {
                let w = rho.window().union(&Window::new(0, 2));
                limits.check_window(w.len)?;
                let mut m = rho.embed(w).to_dense();
                let u = u2_matrix(p);
                let i0 = w.local(0).expect("window contains 0");
                let i1 = w.local(1).expect("window contains 1");
                let n = w.len;
                // rho -> U rho U^dagger, touching only rows/cols i0 and i1.
                for j in 0..n {
                    let (r0, r1) = (m[(i0, j)], m[(i1, j)]);
                    m[(i0, j)] = u[0][0] * r0 + u[0][1] * r1;
                    m[(i1, j)] = u[1][0] * r0 + u[1][1] * r1;
                }
                for i in 0..n {
                    let (c0, c1) = (m[(i, i0)], m[(i, i1)]);
                    m[(i, i0)] = c0 * u[0][0].conj() + c1 * u[0][1].conj();
                    m[(i, i1)] = c0 * u[1][0].conj() + c1 * u[1][1].conj();
                }
                Ok(DensityMatrix::from_dense_unchecked(&m, w.offset))
            }
        }
    }
}

/// An ordered list of unitary instructions, applied left to right.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GeneratorSequence {
    ops: Vec<UnitaryOp>,
}

impl GeneratorSequence {
    pub fn empty() -> Self {
        GeneratorSequence { ops: Vec::new() }
    }

    /// Wrap a verbatim op list (no fusion), validating each op and the cap.
    pub fn from_ops(ops: Vec<UnitaryOp>, limits: &Limits) -> Result<Self> {
        if ops.len() > limits.program_cap {
            return Err(Error::ProgramOverflow {
                needed: ops.len(),
                cap: limits.program_cap,
            });
        }
        for op in &ops {
            op.check(limits)?;
        }
        Ok(GeneratorSequence { ops })
    }

    pub fn ops(&self) -> &[UnitaryOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn u2_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, UnitaryOp::U2At01(_)))
            .count()
    }

    pub fn shift_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, UnitaryOp::Shift(_)))
            .count()
    }

    /// Append with the shift-fusion peephole: adjacent shifts merge and
    /// `Shift(0)` disappears.
    pub fn push_fused(&mut self, op: UnitaryOp) {
        match op {
            UnitaryOp::Shift(0) => {}
            UnitaryOp::Shift(k) => {
                if let Some(UnitaryOp::Shift(prev)) = self.ops.last().copied() {
                    self.ops.pop();
                    if prev + k != 0 {
                        self.ops.push(UnitaryOp::Shift(prev + k));
                    }
                } else {
                    self.ops.push(UnitaryOp::Shift(k));
                }
            }
            other => self.ops.push(other),
        }
    }

    pub fn extend_fused(&mut self, other: &GeneratorSequence) {
        for op in &other.ops {
            self.push_fused(*op);
        }
    }

    pub fn apply_to_state(&self, psi: &StateVector, limits: &Limits) -> Result<StateVector> {
        let mut cur = psi.clone();
        for op in &self.ops {
            cur = op.apply_to_state(&cur, limits)?;
        }
        Ok(cur)
    }

    pub fn apply_to_density(&self, rho: &DensityMatrix, limits: &Limits) -> Result<DensityMatrix> {
        let mut cur = rho.clone();
        for op in &self.ops {
            cur = op.apply_to_density(&cur, limits)?;
        }
        Ok(cur)
    }

    /// The inverse word: reversed order, `Shift(k) -> Shift(-k)`, each U(2)
    /// block replaced by its adjoint.
    pub fn inverted(&self) -> Self {
        let mut out = GeneratorSequence::empty();
        for op in self.ops.iter().rev() {
            out.push_fused(match op {
                UnitaryOp::Shift(k) => UnitaryOp::Shift(-k),
                UnitaryOp::U2At01(p) => UnitaryOp::U2At01(p.adjoint()),
            });
        }
        out
    }
}

/// `Pi_n = T^n Pi T^-n`, exchanging e_n and e_{n+1}: ops
/// `[Shift(-n), U2(pi), Shift(n)]` after fusion.
pub fn pi_n_sequence(n: i64, limits: &Limits) -> Result<GeneratorSequence> {
    UnitaryOp::Shift(n).check(limits)?;
    let mut seq = GeneratorSequence::empty();
    seq.push_fused(UnitaryOp::Shift(-n));
    seq.push_fused(UnitaryOp::U2At01(pi_params()));
    seq.push_fused(UnitaryOp::Shift(n));
    Ok(seq)
}

/// The palindromic chain `Pi_k Pi_{k+1} .. Pi_{k+p-1} .. Pi_{k+1} Pi_k`
/// exchanging e_k and e_{k+p} while fixing every other basis vector.
pub fn swap_chain_sequence(k: i64, p: u64, limits: &Limits) -> Result<GeneratorSequence> {
    if p == 0 {
        return Err(Error::BadArgument {
            detail: "swap chain distance p must be >= 1".into(),
        });
    }
    let top = k + p as i64 - 1;
    UnitaryOp::Shift(k).check(limits)?;
    UnitaryOp::Shift(top + 1).check(limits)?;
    let mut seq = GeneratorSequence::empty();
    for j in k..=top {
        seq.extend_fused(&pi_n_sequence(j, limits)?);
    }
    for j in (k..top).rev() {
        seq.extend_fused(&pi_n_sequence(j, limits)?);
    }
    Ok(seq)
}

/// One symbolic Kraus operator `sqrt(weight) * (P0 if project) * Pi_{0,i}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausElement {
    pub weight: f64,
    pub swap_index: usize,
    pub project: bool,
}

impl KrausElement {
    fn check(&self) -> Result<()> {
        if !self.weight.is_finite() {
            return Err(Error::NonFinite {
                context: "kraus weight",
            });
        }
        if !(0.0..=1.0).contains(&self.weight) {
            return Err(Error::BadWeights {
                detail: format!("weight {} outside [0, 1]", self.weight),
            });
        }
        Ok(())
    }

    /// Net permutation of the transposition (0 i) on absolute index `j`.
    fn permute(&self, j: i64) -> i64 {
        let i = self.swap_index as i64;
        if j == 0 {
            i
        } else if j == i {
            0
        } else {
            j
        }
    }
}

/// A trace-preserving stage `rho -> sum_i K_i rho K_i^dagger`.
///
/// With `complement` set, the projector onto the orthogonal complement of the
/// first `elements.len()` basis states is appended as a final Kraus operator;
/// the paper's trace-preservation identity holds only on that leading
/// subspace, so stages that project need the complement to be trace
/// preserving on any larger window.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausStage {
    pub elements: Vec<KrausElement>,
    pub complement: bool,
}

impl KrausStage {
    pub fn new(elements: Vec<KrausElement>, complement: bool) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyInput {
                context: "kraus stage elements",
            });
        }
        for el in &elements {
            el.check()?;
        }
        Ok(KrausStage {
            elements,
            complement,
        })
    }

    /// Smallest absolute window the stage acts on nontrivially.
    fn needed_span(&self) -> Window {
        let mut end: i64 = 1;
        for el in &self.elements {
            end = end.max(el.swap_index as i64 + 1);
        }
        if self.complement {
            end = end.max(self.elements.len() as i64);
        }
        Window::new(0, end as usize)
    }

    /// Dense Kraus operators on `window`, complement included when set.
    pub fn materialize_on(&self, window: Window) -> Result<Vec<DMatrix<C64>>> {
        let n = window.len;
        let mut out = Vec::with_capacity(self.elements.len() + 1);
        for el in &self.elements {
            let has0 = window.contains_index(0);
            let hasi = window.contains_index(el.swap_index as i64);
            if has0 != hasi {
                // The transposition crosses the window boundary.
                let leaked = if has0 { el.swap_index as i64 } else { 0 };
                return Err(Error::ShiftLeak { index: leaked });
            }
            let root = el.weight.sqrt();
            let mut m = DMatrix::<C64>::zeros(n, n);
            for j in 0..n {
                let src = window.offset + j as i64;
                let dst = el.permute(src);
                if el.project && dst != 0 {
                    continue;
                }
                // With 0 and i both inside or both outside, the transposition
                // maps the window into itself.
                let row = window.local(dst).expect("transposition stays in window");
                m[(row, j)] = C64::new(root, 0.0);
            }
            out.push(m);
        }
        if self.complement {
            let nkeep = self.elements.len() as i64;
            let m = DMatrix::from_fn(n, n, |i, j| {
                let k = window.offset + i as i64;
                if i == j && !(0..nkeep).contains(&k) {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            out.push(m);
        }
        Ok(out)
    }

    /// `max |sum K^dagger K - I|` on `window`.
    pub fn tp_residual_on(&self, window: Window) -> Result<f64> {
        let ks = self.materialize_on(window)?;
        let n = window.len;
        let mut acc = DMatrix::<C64>::zeros(n, n);
        for k in &ks {
            acc += k.adjoint() * k;
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc[(i, j)] - C64::new(expect, 0.0)).norm());
            }
        }
        Ok(worst)
    }

    /// Apply the operator sum to `rho` on the joint working window. The
    /// trace-preservation certificate is checked there first; the output is
    /// re-validated as a density matrix.
    pub fn apply(&self, rho: &DensityMatrix, limits: &Limits) -> Result<DensityMatrix> {
        let w = rho.window().union(&self.needed_span());
        limits.check_window(w.len)?;
        let residual = self.tp_residual_on(w)?;
        if residual > KRAUS_TP_TOL {
            return Err(Error::NotTracePreserving {
                residual,
                tol: KRAUS_TP_TOL,
            });
        }
        let ks = self.materialize_on(w)?;
        let dense = rho.embed(w).to_dense();
        let mut acc = DMatrix::<C64>::zeros(w.len, w.len);
        for k in &ks {
            acc += k * &dense * k.adjoint();
        }
        let out = DensityMatrix::from_dense_unchecked(&acc, w.offset);
        out.validate(KRAUS_OUT_TOL)?;
        Ok(out)
    }
}

/// One step of a channel program.
#[derive(Debug, Clone, PartialEq)]
pub enum ProgramItem {
    Unitary(UnitaryOp),
    Kraus(KrausStage),
}

/// An ordered mix of unitary instructions and Kraus stages, applied left to
/// right. Density operators accept every item; state vectors only unitaries.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChannelProgram {
    items: Vec<ProgramItem>,
}

impl ChannelProgram {
    pub fn empty() -> Self {
        ChannelProgram { items: Vec::new() }
    }

    pub fn from_items(items: Vec<ProgramItem>, limits: &Limits) -> Result<Self> {
        if items.len() > limits.program_cap {
            return Err(Error::ProgramOverflow {
                needed: items.len(),
                cap: limits.program_cap,
            });
        }
        for item in &items {
            match item {
                ProgramItem::Unitary(op) => op.check(limits)?,
                ProgramItem::Kraus(stage) => {
                    KrausStage::new(stage.elements.clone(), stage.complement)?;
                }
            }
        }
        Ok(ChannelProgram { items })
    }

    pub fn items(&self) -> &[ProgramItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn push_unitary_fused(&mut self, op: UnitaryOp) {
        match op {
            UnitaryOp::Shift(0) => {}
            UnitaryOp::Shift(k) => {
                if let Some(ProgramItem::Unitary(UnitaryOp::Shift(prev))) =
                    self.items.last().cloned()
                {
                    self.items.pop();
                    if prev + k != 0 {
                        self.items.push(ProgramItem::Unitary(UnitaryOp::Shift(prev + k)));
                    }
                } else {
                    self.items.push(ProgramItem::Unitary(UnitaryOp::Shift(k)));
                }
            }
            other => self.items.push(ProgramItem::Unitary(other)),
        }
    }

    pub fn push_sequence_fused(&mut self, seq: &GeneratorSequence) {
        for op in seq.ops() {
            self.push_unitary_fused(*op);
        }
    }

    pub fn push_stage(&mut self, stage: KrausStage) {
        self.items.push(ProgramItem::Kraus(stage));
    }

    pub fn unitary_op_count(&self) -> usize {
        self.items
            .iter()
            .filter(|i| matches!(i, ProgramItem::Unitary(_)))
            .count()
    }

    pub fn u2_count(&self) -> usize {
        self.items
            .iter()
            .filter(|i| matches!(i, ProgramItem::Unitary(UnitaryOp::U2At01(_))))
            .count()
    }

    pub fn shift_count(&self) -> usize {
        self.items
            .iter()
            .filter(|i| matches!(i, ProgramItem::Unitary(UnitaryOp::Shift(_))))
            .count()
    }

    pub fn stage_count(&self) -> usize {
        self.items
            .iter()
            .filter(|i| matches!(i, ProgramItem::Kraus(_)))
            .count()
    }

    /// The unitary word, if the program contains no Kraus stage.
    pub fn as_generator_sequence(&self) -> Option<GeneratorSequence> {
        let mut ops = Vec::with_capacity(self.items.len());
        for item in &self.items {
            match item {
                ProgramItem::Unitary(op) => ops.push(*op),
                ProgramItem::Kraus(_) => return None,
            }
        }
        Some(GeneratorSequence { ops })
    }

    pub fn inverted(&self) -> Result<ChannelProgram> {
        match self.as_generator_sequence() {
            Some(seq) => Ok(ChannelProgram::from(seq.inverted())),
            None => Err(Error::NotInvertible),
        }
    }

    pub fn apply_to_state(&self, psi: &StateVector, limits: &Limits) -> Result<StateVector> {
        let mut cur = psi.clone();
        for item in &self.items {
            match item {
                ProgramItem::Unitary(op) => cur = op.apply_to_state(&cur, limits)?,
                ProgramItem::Kraus(_) => return Err(Error::KrausOnState),
            }
        }
        Ok(cur)
    }

    pub fn apply_to_density(&self, rho: &DensityMatrix, limits: &Limits) -> Result<DensityMatrix> {
        let mut cur = rho.clone();
        for item in &self.items {
            cur = apply_item_to_density(item, &cur, limits)?;
        }
        Ok(cur)
    }
}

/// Apply one program item to a density; exposed so callers can walk a program
/// and inspect every intermediate state.
pub fn apply_item_to_density(
    item: &ProgramItem,
    rho: &DensityMatrix,
    limits: &Limits,
) -> Result<DensityMatrix> {
    match item {
        ProgramItem::Unitary(op) => op.apply_to_density(rho, limits),
        ProgramItem::Kraus(stage) => stage.apply(rho, limits),
    }
}

impl From<GeneratorSequence> for ChannelProgram {
    fn from(seq: GeneratorSequence) -> Self {
        ChannelProgram {
            items: seq.ops.into_iter().map(ProgramItem::Unitary).collect(),
        }
    }
}

/// Dense matrix of a generator sequence on `window`: column `j` is the word
/// applied to the basis vector at absolute index `window.offset + j`. Errors
/// with `ShiftLeak` if any final column has support outside the window (the
/// dense restriction would not be equivalent to the symbolic action).
pub fn materialize_sequence(
    seq: &GeneratorSequence,
    window: Window,
    limits: &Limits,
) -> Result<DMatrix<C64>> {
    if window.len == 0 {
        return Err(Error::EmptyInput {
            context: "materialization window",
        });
    }
    limits.check_window(window.len)?;
    let mut m = DMatrix::<C64>::zeros(window.len, window.len);
    for j in 0..window.len {
        let start = StateVector::basis(window.offset + j as i64);
        let end = seq.apply_to_state(&start, limits)?;
        for (i, amp) in end.amps().iter().enumerate() {
            let abs = end.offset() + i as i64;
            match window.local(abs) {
                Some(row) => m[(row, j)] = *amp,
                None => {
                    if amp.norm() > LEAK_TOL {
                        return Err(Error::ShiftLeak { index: abs });
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Dense matrix of a single symbolic Kraus operator on `window`.
pub fn materialize_kraus_element(el: &KrausElement, window: Window) -> Result<DMatrix<C64>> {
    el.check()?;
    let stage = KrausStage {
        elements: vec![*el],
        complement: false,
    };
    Ok(stage.materialize_on(window)?.remove(0))
}
