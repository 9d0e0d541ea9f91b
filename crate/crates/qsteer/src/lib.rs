//! Steering of pure states and density operators on the doubly infinite
//! sequence space l2(Z), driven by a deliberately small generator family:
//! the bilateral shift, one U(2) block on the span of {e0, e1}, and the
//! projector |e0><e0|.
//!
//! The crate provides
//! - windowed finite-support states and density operators with the metrics
//!   (fidelity, trace distance) used to certify steering ([`hilbert`]);
//! - the symbolic generator vocabulary, derived swap chains, Kraus stages
//!   and channel programs ([`generators`]);
//! - synthesis: fold-to-basis steering on the Hilbert sphere and compilation
//!   of dense unitaries into generator words ([`synth_unitary`]), and
//!   channel-program synthesis between arbitrary density operators
//!   ([`synth_kraus`]);
//! - a verification lab with seeded universality sweeps, a shift-free
//!   negative control and a brute-force coverage oracle ([`verify`]);
//! - canonical JSON/CSV serialization of every wire format ([`io`]).

pub mod error;
pub mod generators;
pub mod hilbert;
pub mod io;
mod linalg;
pub mod synth_kraus;
pub mod synth_unitary;
pub mod verify;

pub use error::{Error, Result};
pub use generators::{
    materialize_kraus_element, materialize_sequence, pi_n_sequence, pi_params,
    swap_chain_sequence, u2_matrix, ChannelProgram, GeneratorSequence, KrausElement, KrausStage,
    ProgramItem, U2Params, UnitaryOp,
};
pub use hilbert::{
    align_windows, inner, state_fidelity, trace_distance, DensityMatrix, Limits, StateVector,
    Window, Windowed,
};
pub use synth_kraus::{build_stage, collapse_stage, diagonalize, steer_density, EigenDecomposition};
pub use synth_unitary::{compile_unitary, fold_to_e0, invert, steer_state, SynthesisReport};
pub use verify::{
    bench, negative_control, net_coverage_oracle, random_density, random_state,
    universality_sweep, CoverageReport, NegativeControlReport, SweepKind, SweepResult, TrialRow,
};
