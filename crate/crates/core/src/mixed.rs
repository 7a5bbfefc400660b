//! Mixed LCPs: `0 <= z _|_ Mz + Ny + q + Tu >= 0` together with
//! `Vz + Wy + p + Pu = 0` and a free `y(u) = Eu + s`.
//!
//! The mixed-integer model carries the extra rows already (see
//! [`crate::milp::build_milp`]); this module is the entry point that insists
//! on a mixed instance.

use crate::error::{Error, Result};
use crate::linhull::LinHullBasis;
use crate::lp::LpModel;
use crate::milp::{bnb_solve, build_milp, default_big_m, BnbOptions, NodeState, SolveReport};
use crate::model::{Instance, Policy, Tolerances};
use crate::verify::{verify_policy, VerifyReport};

fn require_mixed(inst: &Instance) -> Result<()> {
    if inst.mixed.is_none() {
        return Err(Error::Precondition("instance has no mixed extension".into()));
    }
    Ok(())
}

/// Exact-indicator LP of a branch-and-bound node for a mixed instance.
pub fn build_mixed_node_lp(inst: &Instance, basis: &LinHullBasis, node: &NodeState) -> Result<LpModel> {
    require_mixed(inst)?;
    if node.fixed.len() != inst.n() {
        return Err(Error::DimensionMismatch(format!(
            "node fixes {} indicators, instance has n = {}",
            node.fixed.len(),
            inst.n()
        )));
    }
    let model = build_milp(inst, basis, default_big_m(inst))?;
    Ok(model.node_lp(&node.fixed))
}

pub fn mixed_solve(inst: &Instance, basis: &LinHullBasis, opts: &BnbOptions) -> Result<SolveReport> {
    require_mixed(inst)?;
    bnb_solve(inst, basis, opts)
}

pub fn verify_mixed(
    inst: &Instance,
    basis: &LinHullBasis,
    pol: &Policy,
    tol: &Tolerances,
) -> Result<VerifyReport> {
    require_mixed(inst)?;
    verify_policy(inst, basis, pol, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhull::compute_lin_hull;
    use crate::lp::{lp_feasible, LpStatus};
    use crate::matrix::Matrix;
    use crate::milp::SolveStatus;
    use crate::model::{MixedExtension, Polyhedron, YPart};
    use crate::samples;
    use crate::verify::Violation;

    fn solve(inst: &Instance) -> SolveReport {
        let basis = compute_lin_hull(inst, 1e-9).unwrap();
        mixed_solve(inst, &basis, &BnbOptions::default()).unwrap()
    }

    #[test]
    fn decoupled_example() {
        let rep = solve(&samples::mixed_decoupled());
        assert_eq!(rep.status, SolveStatus::Feasible);
        let pol = rep.policy.unwrap();
        let y = pol.y_part.as_ref().unwrap();
        assert!((y.s[0] - 3.0).abs() < 1e-9);
        assert_eq!(y.e[(0, 0)], 0.0);
        assert!((pol.r[0] - 2.0).abs() < 1e-9);
        assert!((pol.d[(0, 0)] + 0.5).abs() < 1e-9);
        let v = rep.verification.unwrap();
        assert!(v.mixed_nominal_residual.unwrap() <= 1e-8);
    }

    #[test]
    fn coupled_example() {
        let rep = solve(&samples::mixed_coupled());
        let pol = rep.policy.unwrap();
        assert!((pol.r[0] - 0.5).abs() < 1e-9);
        assert!((pol.d[(0, 0)] + 0.5).abs() < 1e-9);
        assert!((pol.y_part.unwrap().s[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn adjustable_variant_has_zero_e() {
        let rep = solve(&samples::mixed_one_dim(0.0, true));
        assert_eq!(rep.status, SolveStatus::Feasible);
        assert!(rep.policy.unwrap().y_part.unwrap().e[(0, 0)].abs() < 1e-9);
    }

    #[test]
    fn adjustable_y_absorbs_p() {
        // W = I, V = 0, P = [1]: the directional row forces E v = -P v.
        let ext = MixedExtension {
            v: Matrix::zeros(1, 1),
            w: Matrix::identity(1),
            n: Matrix::zeros(1, 1),
            p: vec![0.0],
            p_mat: Matrix::identity(1),
            y_adjustable: true,
        };
        let inst = samples::one_dim().with_mixed(ext).unwrap();
        let rep = solve(&inst);
        assert_eq!(rep.status, SolveStatus::Feasible);
        assert!((rep.policy.unwrap().y_part.unwrap().e[(0, 0)] + 1.0).abs() < 1e-9);
        let mut fixed = inst.clone();
        fixed.mixed.as_mut().unwrap().y_adjustable = false;
        assert_eq!(solve(&fixed).status, SolveStatus::Infeasible);
    }

    #[test]
    fn unsatisfiable_equality() {
        let ext = MixedExtension {
            v: Matrix::zeros(1, 1),
            w: Matrix::zeros(1, 1),
            n: Matrix::zeros(1, 1),
            p: vec![1.0],
            p_mat: Matrix::zeros(1, 1),
            y_adjustable: false,
        };
        let inst = samples::one_dim().with_mixed(ext).unwrap();
        assert_eq!(solve(&inst).status, SolveStatus::Infeasible);
    }

    #[test]
    fn perturbed_s_is_a_violation() {
        let inst = samples::mixed_decoupled();
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let mut pol = Policy::new(Matrix::from_rows(1, &[vec![-0.5]]).unwrap(), vec![2.0]);
        pol.y_part = Some(YPart {
            e: Matrix::zeros(1, 1),
            s: vec![4.0],
        });
        let rep = verify_mixed(&inst, &basis, &pol, &Tolerances::default()).unwrap();
        assert_eq!(rep.mixed_nominal_residual, Some(1.0));
        assert!(rep
            .violations()
            .iter()
            .any(|v| matches!(v, Violation::MixedNominal { row: 0, .. })));
    }

    #[test]
    fn deterministic_mixed_instance() {
        // U = {0}: z = 1, y = 1 solves 0 <= z _|_ z + y - 2 >= 0, z - y = 0.
        let base = Instance::new(
            Matrix::identity(1),
            vec![-2.0],
            Matrix::identity(1),
            Polyhedron::origin(1),
            0,
        )
        .unwrap();
        let ext = MixedExtension {
            v: Matrix::identity(1),
            w: Matrix::identity(1).scale(-1.0),
            n: Matrix::identity(1),
            p: vec![0.0],
            p_mat: Matrix::zeros(1, 1),
            y_adjustable: false,
        };
        let inst = base.with_mixed(ext).unwrap();
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        assert_eq!(basis.dim(), 0);
        let mut pol = Policy::new(Matrix::zeros(1, 1), vec![1.0]);
        pol.y_part = Some(YPart {
            e: Matrix::zeros(1, 1),
            s: vec![1.0],
        });
        let rep = verify_mixed(&inst, &basis, &pol, &Tolerances::default()).unwrap();
        assert!(rep.is_verified(), "{rep}");
        assert_eq!(rep.mixed_direction_residual, Some(0.0));
    }

    #[test]
    fn node_lp_needs_mixed_data() {
        let pure = samples::one_dim();
        let basis = compute_lin_hull(&pure, 1e-9).unwrap();
        assert!(build_mixed_node_lp(&pure, &basis, &NodeState::root(1)).is_err());
        let inst = samples::mixed_coupled();
        let lp = build_mixed_node_lp(&inst, &basis, &NodeState::root(1).child(0, true)).unwrap();
        let res = lp_feasible(&lp, 1e-9).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
    }
}
