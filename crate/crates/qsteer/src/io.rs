//! JSON wire schemas and canonical serialization.
//!
//! Serialization is canonical: fixed key order (struct order) and shortest
//! round-trip float formatting, so equal values always produce identical
//! bytes and `parse(serialize(x)) == x`. Parsing reports schema violations
//! with a path to the offending field.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{
    ChannelProgram, KrausElement, KrausStage, ProgramItem, U2Params, UnitaryOp,
};
use crate::hilbert::{DensityMatrix, Limits, StateVector, Window, VALIDATION_TOL};
use crate::verify::TrialRow;

/// `{"offset": int, "amplitudes": [[re, im], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub offset: i64,
    pub amplitudes: Vec<[f64; 2]>,
}

/// `{"offset": int, "matrix": [[[re, im], ...], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub offset: i64,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// Same layout as [`DensityFile`], holding a unitary instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitaryFile {
    pub offset: i64,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub weight: f64,
    pub swap: usize,
    pub project: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
pub enum OpJson {
    Shift {
        k: i64,
    },
    U2 {
        theta: f64,
        phi: f64,
        lambda: f64,
        delta: f64,
    },
    Kraus {
        elements: Vec<ElementJson>,
        complement: bool,
    },
}

/// `{"ops": [...]}` — shifts, U(2) blocks and Kraus stages in program order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramFile {
    pub ops: Vec<OpJson>,
}

/// Parse a JSON document, reporting the path to any offending field.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Canonical serialization: pretty-printed with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("schema types serialize infallibly");
    s.push('\n');
    s
}

fn c(pair: [f64; 2]) -> C64 {
    C64::new(pair[0], pair[1])
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// Parse and validate a state file.
pub fn parse_state(text: &str, limits: &Limits) -> Result<StateVector> {
    let file: StateFile = parse_json(text)?;
    state_from_file(&file, limits)
}

pub fn state_from_file(file: &StateFile, limits: &Limits) -> Result<StateVector> {
    let amps = file.amplitudes.iter().copied().map(c).collect();
    StateVector::new(amps, file.offset, limits)
}

pub fn state_to_file(state: &StateVector) -> StateFile {
    StateFile {
        offset: state.offset(),
        amplitudes: state.amps().iter().copied().map(pair).collect(),
    }
}

/// Parse and validate a density file.
pub fn parse_density(text: &str, limits: &Limits) -> Result<DensityMatrix> {
    let file: DensityFile = parse_json(text)?;
    density_from_file(&file, limits)
}

/// A parsed input whose schema was sniffed from its fields: states carry
/// `"amplitudes"`, densities `"matrix"`.
#[derive(Debug, Clone, PartialEq)]
pub enum StateOrDensity {
    State(StateVector),
    Density(DensityMatrix),
}

pub fn parse_state_or_density(text: &str, limits: &Limits) -> Result<StateOrDensity> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Schema {
        path: ".".into(),
        message: e.to_string(),
    })?;
    if value.get("amplitudes").is_some() {
        Ok(StateOrDensity::State(parse_state(text, limits)?))
    } else {
        Ok(StateOrDensity::Density(parse_density(text, limits)?))
    }
}

pub fn density_from_file(file: &DensityFile, limits: &Limits) -> Result<DensityMatrix> {
    let matrix: Vec<Vec<C64>> = file
        .matrix
        .iter()
        .map(|row| row.iter().copied().map(c).collect())
        .collect();
    DensityMatrix::new(matrix, file.offset, VALIDATION_TOL, limits)
}

pub fn density_to_file(rho: &DensityMatrix) -> DensityFile {
    let n = rho.dim();
    DensityFile {
        offset: rho.offset(),
        matrix: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| pair(rho.entry(rho.offset() + i as i64, rho.offset() + j as i64)))
                    .collect()
            })
            .collect(),
    }
}

/// Parse a unitary file into its window and dense matrix. Squareness and
/// finiteness are checked here; unitarity is the consumer's contract.
pub fn parse_unitary(text: &str, limits: &Limits) -> Result<(Window, DMatrix<C64>)> {
    let file: UnitaryFile = parse_json(text)?;
    let n = file.matrix.len();
    if n == 0 {
        return Err(Error::EmptyInput {
            context: "unitary matrix",
        });
    }
    if file.matrix.iter().any(|row| row.len() != n) {
        return Err(Error::BadArgument {
            detail: format!("unitary matrix must be square, got {n} rows"),
        });
    }
    limits.check_window(n)?;
    if file
        .matrix
        .iter()
        .flatten()
        .any(|p| !(p[0].is_finite() && p[1].is_finite()))
    {
        return Err(Error::NonFinite {
            context: "unitary matrix entries",
        });
    }
    let m = DMatrix::from_fn(n, n, |i, j| c(file.matrix[i][j]));
    Ok((Window::new(file.offset, n), m))
}

/// Parse and validate a program file.
pub fn parse_program(text: &str, limits: &Limits) -> Result<ChannelProgram> {
    let file: ProgramFile = parse_json(text)?;
    program_from_file(&file, limits)
}

pub fn program_from_file(file: &ProgramFile, limits: &Limits) -> Result<ChannelProgram> {
    let mut items = Vec::with_capacity(file.ops.len());
    for op in &file.ops {
        items.push(match op {
            OpJson::Shift { k } => ProgramItem::Unitary(UnitaryOp::Shift(*k)),
            OpJson::U2 {
                theta,
                phi,
                lambda,
                delta,
            } => ProgramItem::Unitary(UnitaryOp::U2At01(U2Params::new(
                *theta, *phi, *lambda, *delta,
            )?)),
            OpJson::Kraus {
                elements,
                complement,
            } => {
                let els = elements
                    .iter()
                    .map(|e| KrausElement {
                        weight: e.weight,
                        swap_index: e.swap,
                        project: e.project,
                    })
                    .collect();
                ProgramItem::Kraus(KrausStage::new(els, *complement)?)
            }
        });
    }
    ChannelProgram::from_items(items, limits)
}

pub fn program_to_file(prog: &ChannelProgram) -> ProgramFile {
    let ops = prog
        .items()
        .iter()
        .map(|item| match item {
            ProgramItem::Unitary(UnitaryOp::Shift(k)) => OpJson::Shift { k: *k },
            ProgramItem::Unitary(UnitaryOp::U2At01(p)) => OpJson::U2 {
                theta: p.theta,
                phi: p.phi,
                lambda: p.lam,
                delta: p.delta,
            },
            ProgramItem::Kraus(stage) => OpJson::Kraus {
                elements: stage
                    .elements
                    .iter()
                    .map(|e| ElementJson {
                        weight: e.weight,
                        swap: e.swap_index,
                        project: e.project,
                    })
                    .collect(),
                complement: stage.complement,
            },
        })
        .collect();
    ProgramFile { ops }
}

/// Shortest round-trip float formatting, shared between JSON and CSV output.
fn fmt_f64(v: f64) -> String {
    serde_json::to_string(&v).expect("finite floats serialize infallibly")
}

/// RFC 4180 CSV for trial rows: header plus one line per row, CRLF line
/// endings, shortest round-trip float formatting.
pub fn rows_to_csv(rows: &[TrialRow]) -> String {
    let mut out = String::new();
    out.push_str("dim,trial,op_count,u2_count,shift_count,final_error,wall_time_s\r\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\r\n",
            r.dim,
            r.trial,
            r.op_count,
            r.u2_count,
            r.shift_count,
            fmt_f64(r.final_error),
            fmt_f64(r.wall_time_s)
        ));
    }
    out
}
