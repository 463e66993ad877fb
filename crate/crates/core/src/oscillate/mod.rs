//! Oscillation models and their solvers.

pub mod expm;
pub mod jordan;
pub mod modal;
pub mod model;
pub mod numeric;
pub mod residue;
pub mod stability;
pub mod trajectory;

pub use expm::{expm_projectors, projector_identities_hold, spectral_projectors, Projector};
pub use jordan::{finite_difference_residual, solve_jordan, JordanChain, JordanSolution};
pub use modal::{solve_modal, InitialConditions, ModalSolution, Mode};
pub use model::{build_model, params, MechModel, ModelKind};
pub use residue::{scalar_residue_solve, ResidueSolution, ResidueTerm};
pub use stability::{classify_stability, CorrectedVerdict, HistoricalVerdict, RootCensus, StabilityVerdict};
pub use trajectory::{sample_trajectory, TGrid, Table, Trajectory};
