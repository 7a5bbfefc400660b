//! Affinely adjustable robust solutions of uncertain linear complementarity
//! problems over polyhedral uncertainty sets.
//!
//! Given `M`, `q`, `T` and `U = {u : Theta u >= zeta}`, the solver looks for
//! an affine policy `z(u) = Du + r` with
//! `0 <= z(u) _|_ M z(u) + q + Tu >= 0` for every `u` in `U`. The search
//! runs branch-and-bound over the support of `r`, with an LP at every node;
//! positive semidefinite `M` is handled by a single LP.
//!
//! ```
//! use aarlcp::{bnb_solve, compute_lin_hull, samples, BnbOptions};
//!
//! let inst = samples::one_dim();
//! let basis = compute_lin_hull(&inst, 1e-9).unwrap();
//! let report = bnb_solve(&inst, &basis, &BnbOptions::default()).unwrap();
//! let policy = report.policy.unwrap();
//! assert!((policy.r[0] - 2.0).abs() < 1e-9);
//! ```

pub mod error;
pub mod linhull;
pub mod lp;
pub mod matrix;
pub mod milp;
pub mod mixed;
pub mod model;
pub mod psd;
pub mod samples;
pub mod validate;
pub mod verify;

pub use error::{Error, Result};
pub use linhull::{compute_lin_hull, lin_hull_of, LinHullBasis};
pub use matrix::Matrix;
pub use milp::{
    bnb_solve, build_milp, default_big_m, export_milp, BnbOptions, Branching, ExportFormat,
    MilpModel, SolveReport, SolveStatus,
};
pub use mixed::{mixed_solve, verify_mixed};
pub use model::{Instance, MixedExtension, Policy, Polyhedron, Tolerances, YPart};
pub use psd::{check_psd, psd_solve, PsdReport, PsdStatus};
pub use validate::{validate, ValidationReport};
pub use verify::{oracle_enumerate, verify_policy, OracleOptions, OracleReport, Verdict, VerifyReport};
