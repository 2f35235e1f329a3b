//! Sequential sharing of EPR steering between one Alice and a chain of
//! observers who each perform projective measurements.
//!
//! The library builds the two-qubit states passed along the chain, the
//! conditional-state assemblages each link produces, and the two-setting
//! steering radius — both from closed forms and from a local-hidden-state
//! feasibility solver. Core types are generic over [`Real`] (`f64` or `f32`);
//! the `*F64` / `*F32` aliases below name the common instantiations.
//!
//! ```
//! use seqsteer::{assemblage_from_directions, state_family, steering_radius, Side, StateParamsF64};
//! use seqsteer::BlochVector;
//!
//! let rho = state_family(StateParamsF64::new(1.0, std::f64::consts::FRAC_PI_4).unwrap()).unwrap();
//! let asm = assemblage_from_directions(&rho, Side::A, &[BlochVector::unit_x(), BlochVector::unit_z()]).unwrap();
//! let r = steering_radius(&asm).unwrap();
//! assert!((r.radius - 2f64.sqrt()).abs() < 1e-8);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
mod linalg;
pub mod measurements;
pub mod qmath;
pub mod scalar;
pub mod scenario;
pub mod search;
pub mod states;
pub mod steering;

pub use error::{Error, Result};
pub use linalg::sym_eigen;
pub use measurements::{
    case_strategy, effect, luders_update, CaseId, DeterministicStrategy, Effect, EffectKind, Setting, StrategyMixture,
};
pub use qmath::{
    bloch_of, partial_trace, pauli, pauli_components, pauli_decomposition, qubit_of, sigma_x, sigma_y, sigma_z, tensor,
    BlochVector, Mat, Mat2, Mat4, PauliDecomposition, Subsystem,
};
pub use scalar::Real;
pub use scenario::{
    case3_chain_radii, four_party_radii, run_chain, ChainConfig, ChainReport, FourPartyRadii, LinkRecord,
};
pub use search::{
    chain_radii, four_party_region, sweep, threshold_scan, two_way_sharing_window, Method, MixturePair, RegionResult,
    RegionSlice, RowKind, StrategySpec, SweepRow, SweepSpec, SweepVar, Witness,
};
pub use states::{fidelity, state_family, validate, validate_matrix, StateParams, TwoQubitState, ValidationReport};
pub use steering::{
    analytic_radius, analytic_radius_for, assemblage_from_directions, assemblage_from_mixture,
    assemblage_from_mixture_on, classify, lhs_feasible, max_radius_over_directions, mixture_radius, steering_radius,
    symmetric_radius, Assemblage, Cell, DirectionScan, Feasibility, LhsEnsemble, LhsMember, LhsSolver, Link, Side,
    SteeringClass, SteeringRadiusResult,
};

pub type Mat2F64 = Mat2<f64>;
pub type Mat4F64 = Mat4<f64>;
pub type BlochVectorF64 = BlochVector<f64>;
pub type StateParamsF64 = StateParams<f64>;
pub type TwoQubitStateF64 = TwoQubitState<f64>;
pub type StrategyMixtureF64 = StrategyMixture<f64>;
pub type AssemblageF64 = Assemblage<f64>;
pub type ChainConfigF64 = ChainConfig<f64>;

pub type Mat2F32 = Mat2<f32>;
pub type Mat4F32 = Mat4<f32>;
pub type BlochVectorF32 = BlochVector<f32>;
pub type StateParamsF32 = StateParams<f32>;
pub type TwoQubitStateF32 = TwoQubitState<f32>;
pub type StrategyMixtureF32 = StrategyMixture<f32>;
pub type AssemblageF32 = Assemblage<f32>;
pub type ChainConfigF32 = ChainConfig<f32>;
