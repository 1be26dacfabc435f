//! Brute-force ground truth: exact evolution of a spin and a few truncated modes.
//!
//! Work is measured directly as the energy change across each pulse, and
//! Π-factor correlators are evaluated on the truncated Fock spaces.

mod correlator;
mod model;
mod state;
mod verify;

pub use correlator::{noise_factor, pi_correlator, pi_factor, pi_factor_trotter, CorrelatorItem};
pub use model::{
    annihilation, build_model, number, tail_rule_levels, FiniteBathModel, ModeSpace, ModelSpec,
    DEFAULT_DIMENSION_CAP, DISPLACEMENT_MARGIN, SPIN_SIGN, TAIL_MASS,
};
pub use state::{initial_state, run_sequence, DenseState, InitialCondition, SequenceOutcome, StateInvariants, Step};
pub use verify::{random_pulse, verify, AnalyticWork, CheckResult, ClosedForm, VerifyConfig, VerifyReport};
