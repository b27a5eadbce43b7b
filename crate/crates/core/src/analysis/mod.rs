//! Separability tests, angle optimization, verification campaigns and the
//! final-state checks built on top of the protocol.

mod final_state;
mod optimize;
mod ppt;
pub mod random;
mod verify;

pub use final_state::{
    check_final_state_form, final_state_ket, grid_angles, persistency_scan, PersistencyPoint,
    PersistencyReport,
};
pub use optimize::{optimize_angles, optimize_angles_with, OptimizationResult, OptimizerConfig};
pub use ppt::{ppt_separable, PptReport};
pub use verify::{verify_factorization, FactorizationReport};
