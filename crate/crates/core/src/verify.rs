//! Independent certification of affine policies, and an exhaustive
//! support-enumeration oracle.
//!
//! A policy `z(u) = Du + r` is accepted when, on its support `I = {i : r_i > 0}`,
//! the nominal rows `M_I r + q_I` vanish and `(M_I D + T_I) v = 0` for every
//! basis vector `v` of lin(U), and both `z(u)` and `Mz(u) + q + Tu` are
//! nonnegative on U. Nonnegativity is checked with `2n` primal LPs over U,
//! never through the dual multipliers the solver itself uses.

use std::fmt;

use crate::error::{Error, Result};
use crate::linhull::LinHullBasis;
use crate::lp::{lp_feasible, LpStatus};
use crate::matrix::{dot, Matrix};
use crate::milp::{build_milp, default_big_m, solve_leaf, LeafOutcome, SolveReport, SolveStatus};
use crate::model::{Instance, Policy, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `|M_i r + q_i|` too large for a support row.
    Nominal { row: usize, residual: f64 },
    /// `|(M_i D + T_i) v|` too large for a support row and basis vector.
    Direction { row: usize, basis: usize, residual: f64 },
    /// `min_u z_i(u)` below zero.
    NegativeZ { row: usize, min: f64 },
    /// `min_u (Mz(u) + q + Tu)_i` below zero.
    NegativeW { row: usize, min: f64 },
    /// A here-and-now row of `D` is nonzero.
    HereAndNow { row: usize, value: f64 },
    MixedNominal { row: usize, residual: f64 },
    MixedDirection { row: usize, basis: usize, residual: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Nominal { row, residual } => {
                write!(f, "nominal residual {residual:e} on row {}", row + 1)
            }
            Violation::Direction { row, basis, residual } => write!(
                f,
                "direction residual {residual:e} on row {} along basis vector {}",
                row + 1,
                basis + 1
            ),
            Violation::NegativeZ { row, min } => {
                write!(f, "z_{} reaches {min:e} on U", row + 1)
            }
            Violation::NegativeW { row, min } => {
                write!(f, "(Mz + q + Tu)_{} reaches {min:e} on U", row + 1)
            }
            Violation::HereAndNow { row, value } => {
                write!(f, "here-and-now row {} of D has entry {value:e}", row + 1)
            }
            Violation::MixedNominal { row, residual } => {
                write!(f, "mixed equality residual {residual:e} on row {}", row + 1)
            }
            Violation::MixedDirection { row, basis, residual } => write!(
                f,
                "mixed direction residual {residual:e} on row {} along basis vector {}",
                row + 1,
                basis + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Verified,
    Violations(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    /// Zero-based support `{i : r_i > zero}`.
    pub support: Vec<usize>,
    /// `max_{i in I} |M_i r + N_i s + q_i|`.
    pub nominal_residual: f64,
    /// `max_{i in I, j} |(M_i D + N_i E + T_i) v^j|`.
    pub direction_residual: f64,
    pub min_z: Vec<f64>,
    pub min_w: Vec<f64>,
    /// `||V r + W s + p||_inf` for mixed instances.
    pub mixed_nominal_residual: Option<f64>,
    /// `max_j ||(V D + W E + P) v^j||_inf` for mixed instances.
    pub mixed_direction_residual: Option<f64>,
    pub verdict: Verdict,
    pub lp_calls: usize,
}

impl VerifyReport {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    pub fn violations(&self) -> &[Violation] {
        match &self.verdict {
            Verdict::Verified => &[],
            Verdict::Violations(v) => v,
        }
    }
}

fn fmt_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(", "))
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support: Vec<String> = self.support.iter().map(|i| (i + 1).to_string()).collect();
        writeln!(f, "support I: {{{}}}", support.join(","))?;
        writeln!(f, "nominal residual: {:e}", self.nominal_residual)?;
        writeln!(f, "direction residual: {:e}", self.direction_residual)?;
        writeln!(f, "min z over U: {}", fmt_list(&self.min_z))?;
        writeln!(f, "min Mz+q+Tu over U: {}", fmt_list(&self.min_w))?;
        if let Some(r) = self.mixed_nominal_residual {
            writeln!(f, "mixed equality residual: {r:e}")?;
        }
        if let Some(r) = self.mixed_direction_residual {
            writeln!(f, "mixed direction residual: {r:e}")?;
        }
        match &self.verdict {
            Verdict::Verified => writeln!(f, "verdict: verified"),
            Verdict::Violations(list) => {
                writeln!(f, "verdict: {} violation(s)", list.len())?;
                for v in list {
                    writeln!(f, "  {v}")?;
                }
                Ok(())
            }
        }
    }
}

/// Certifies `pol` against `inst`. Shape errors and broken policy invariants
/// (negative `r`, inconsistent `x`) are errors, not violations.
pub fn verify_policy(
    inst: &Instance,
    basis: &LinHullBasis,
    pol: &Policy,
    tol: &Tolerances,
) -> Result<VerifyReport> {
    inst.check_dimensions()?;
    pol.check_against(inst, tol)?;
    let (n, k) = (inst.n(), inst.k());
    if basis.vectors.iter().any(|v| v.len() != k) {
        return Err(Error::DimensionMismatch("basis vectors must have length k".into()));
    }
    let mixed = inst.mixed.as_ref();
    let y = pol.y_part.as_ref();

    // w(u) = G u + c with G = M D + N E + T and c = M r + N s + q.
    let mut g = inst.m.mul(&pol.d)?.add(&inst.t)?;
    let mut c = inst.m.mul_vec(&pol.r)?;
    if let (Some(mx), Some(y)) = (mixed, y) {
        g = g.add(&mx.n.mul(&y.e)?)?;
        for (ci, ns) in c.iter_mut().zip(mx.n.mul_vec(&y.s)?) {
            *ci += ns;
        }
    }
    for (ci, qi) in c.iter_mut().zip(&inst.q) {
        *ci += qi;
    }

    let mut violations = Vec::new();
    let support: Vec<usize> = (0..n).filter(|&i| pol.r[i] > tol.zero).collect();
    let mut nominal_residual: f64 = 0.0;
    let mut direction_residual: f64 = 0.0;
    for &i in &support {
        let res = c[i].abs();
        nominal_residual = nominal_residual.max(res);
        if res > tol.feas {
            violations.push(Violation::Nominal { row: i, residual: res });
        }
        for (j, v) in basis.vectors.iter().enumerate() {
            let res = dot(g.row(i), v).abs();
            direction_residual = direction_residual.max(res);
            if res > tol.feas {
                violations.push(Violation::Direction {
                    row: i,
                    basis: j,
                    residual: res,
                });
            }
        }
    }

    for i in 0..inst.h {
        if let Some(&value) = pol.d.row(i).iter().find(|v| v.abs() > tol.feas) {
            violations.push(Violation::HereAndNow { row: i, value });
        }
    }

    let u = &inst.uncertainty;
    let lp_tol = tol.lp();
    let mut min_z = Vec::with_capacity(n);
    let mut min_w = Vec::with_capacity(n);
    for i in 0..n {
        let mz = u.minimize_affine(pol.d.row(i), pol.r[i], lp_tol)?;
        if mz < -tol.feas {
            violations.push(Violation::NegativeZ { row: i, min: mz });
        }
        min_z.push(mz);
        let mw = u.minimize_affine(g.row(i), c[i], lp_tol)?;
        if mw < -tol.feas {
            violations.push(Violation::NegativeW { row: i, min: mw });
        }
        min_w.push(mw);
    }

    let (mut mixed_nominal_residual, mut mixed_direction_residual) = (None, None);
    if let (Some(mx), Some(y)) = (mixed, y) {
        let mut eq = mx.v.mul_vec(&pol.r)?;
        for ((e, ws), p) in eq.iter_mut().zip(mx.w.mul_vec(&y.s)?).zip(&mx.p) {
            *e += ws + p;
        }
        let mut worst: f64 = 0.0;
        for (row, e) in eq.iter().enumerate() {
            worst = worst.max(e.abs());
            if e.abs() > tol.feas {
                violations.push(Violation::MixedNominal {
                    row,
                    residual: e.abs(),
                });
            }
        }
        mixed_nominal_residual = Some(worst);

        let h: Matrix = mx.v.mul(&pol.d)?.add(&mx.w.mul(&y.e)?)?.add(&mx.p_mat)?;
        let mut worst: f64 = 0.0;
        for row in 0..mx.m() {
            for (j, v) in basis.vectors.iter().enumerate() {
                let res = dot(h.row(row), v).abs();
                worst = worst.max(res);
                if res > tol.feas {
                    violations.push(Violation::MixedDirection {
                        row,
                        basis: j,
                        residual: res,
                    });
                }
            }
        }
        mixed_direction_residual = Some(worst);
    }

    let verdict = if violations.is_empty() {
        Verdict::Verified
    } else {
        Verdict::Violations(violations)
    };
    Ok(VerifyReport {
        support,
        nominal_residual,
        direction_residual,
        min_z,
        min_w,
        mixed_nominal_residual,
        mixed_direction_residual,
        verdict,
        lp_calls: 2 * n,
    })
}

/// Default largest `n` the oracle will enumerate.
pub const ORACLE_LIMIT: usize = 16;

#[derive(Debug, Clone)]
pub struct OracleOptions {
    pub tol: Tolerances,
    pub limit: usize,
    /// Spend one extra LP per infeasible support to tell complementarity
    /// failures from nonnegativity failures.
    pub classify: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            limit: ORACLE_LIMIT,
            classify: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportOutcome {
    Feasible,
    /// The support equalities and sign rows alone are infeasible.
    ComplementarityInfeasible,
    /// Only the robust nonnegativity rows cut the support off.
    NonnegativityInfeasible,
    /// Infeasible, not classified.
    Infeasible,
    /// LP-feasible but the recovered policy failed verification.
    Rejected,
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub report: SolveReport,
    /// Every support tried, in enumeration order.
    pub outcomes: Vec<(Vec<bool>, SupportOutcome)>,
}

impl OracleReport {
    pub fn count(&self, outcome: SupportOutcome) -> usize {
        self.outcomes.iter().filter(|(_, o)| *o == outcome).count()
    }

    /// Zero-based support of the first feasible indicator vector.
    pub fn first_feasible(&self) -> Option<Vec<usize>> {
        self.outcomes
            .iter()
            .find(|(_, o)| *o == SupportOutcome::Feasible)
            .map(|(x, _)| (0..x.len()).filter(|&i| x[i]).collect())
    }
}

/// All subsets of `0..n` by increasing size, lexicographic within a size.
pub fn supports_in_order(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..=n).flat_map(move |size| Combinations::new(n, size)).map(move |set| {
        let mut x = vec![false; n];
        for i in set {
            x[i] = true;
        }
        x
    })
}

struct Combinations {
    n: usize,
    idx: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, size: usize) -> Self {
        let idx = (size <= n).then(|| (0..size).collect());
        Self { n, idx }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.idx.take()?;
        let size = cur.len();
        let mut next = cur.clone();
        if let Some(p) = (0..size).rev().find(|&p| next[p] < self.n - size + p) {
            next[p] += 1;
            for q in p + 1..size {
                next[q] = next[q - 1] + 1;
            }
            self.idx = Some(next);
        }
        Some(cur)
    }
}

/// Tries every indicator vector with the same exact-indicator LP a fully
/// fixed branch-and-bound leaf uses, stopping at the first verified policy.
pub fn oracle_enumerate(
    inst: &Instance,
    basis: &LinHullBasis,
    opts: &OracleOptions,
) -> Result<OracleReport> {
    inst.check_dimensions()?;
    let n = inst.n();
    if n > opts.limit {
        return Err(Error::OracleLimitExceeded { n, limit: opts.limit });
    }
    let tol = &opts.tol;
    let model = build_milp(inst, basis, default_big_m(inst))?;
    let mut outcomes = Vec::new();
    let mut lp_calls = 0;
    let mut found = None;
    for x in supports_in_order(n) {
        let (leaf, calls) = solve_leaf(inst, basis, &model, &x, tol)?;
        lp_calls += calls;
        let outcome = match leaf {
            LeafOutcome::Verified(pol, rep) => {
                found = Some((pol, rep));
                SupportOutcome::Feasible
            }
            LeafOutcome::Rejected(_) => SupportOutcome::Rejected,
            LeafOutcome::Infeasible if opts.classify => {
                let fixed: Vec<Option<bool>> = x.iter().map(|&b| Some(b)).collect();
                let lp = model.node_lp_with(&fixed, |f| !f.is_dual());
                lp_calls += 1;
                if lp_feasible(&lp, tol.lp())?.status == LpStatus::Optimal {
                    SupportOutcome::NonnegativityInfeasible
                } else {
                    SupportOutcome::ComplementarityInfeasible
                }
            }
            LeafOutcome::Infeasible => SupportOutcome::Infeasible,
        };
        outcomes.push((x, outcome));
        if found.is_some() {
            break;
        }
    }
    let rejected = outcomes.iter().any(|(_, o)| *o == SupportOutcome::Rejected);
    let status = match (&found, rejected) {
        (Some(_), _) => SolveStatus::Feasible,
        (None, false) => SolveStatus::Infeasible,
        (None, true) => SolveStatus::NumericalFailure,
    };
    let (policy, verification) = match found {
        Some((p, v)) => (Some(p), Some(v)),
        None => (None, None),
    };
    Ok(OracleReport {
        report: SolveReport {
            status,
            policy,
            nodes_explored: outcomes.len(),
            lp_calls,
            verification,
            tolerances: *tol,
        },
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhull::compute_lin_hull;
    use crate::samples;

    fn check(inst: &Instance, pol: &Policy) -> VerifyReport {
        let basis = compute_lin_hull(inst, 1e-9).unwrap();
        verify_policy(inst, &basis, pol, &Tolerances::default()).unwrap()
    }

    #[test]
    fn coupled_example_policy_verifies() {
        let rep = check(&samples::coupled_singular(), &samples::coupled_policy());
        assert!(rep.is_verified(), "{rep}");
        assert_eq!(rep.support, vec![0, 1]);
        assert_eq!(rep.nominal_residual, 0.0);
        assert_eq!(rep.direction_residual, 0.0);
        assert_eq!(rep.min_z, vec![0.0, 1.0]);
        assert_eq!(rep.min_w, vec![0.0, 0.0]);
        assert_eq!(rep.lp_calls, 4);
    }

    #[test]
    fn zero_d_breaks_direction_rows() {
        let pol = Policy::new(Matrix::zeros(2, 2), vec![2.0, 1.0]);
        let rep = check(&samples::coupled_singular(), &pol);
        assert!(!rep.is_verified());
        // (M 0 + T)(1, 1) = (1, 1) for the unit basis vector (1, 1).
        assert_eq!(rep.direction_residual, 1.0);
        let rows: Vec<usize> = rep
            .violations()
            .iter()
            .filter_map(|v| match v {
                Violation::Direction { row, .. } => Some(*row),
                _ => None,
            })
            .collect();
        assert_eq!(rows, vec![0, 1]);
    }

    #[test]
    fn zero_policy_with_nonnegative_data() {
        let inst = samples::scenario(2.0, 1.0);
        let rep = check(&inst, &Policy::new(Matrix::zeros(2, 1), vec![0.0, 0.0]));
        assert!(rep.is_verified());
        assert!(rep.support.is_empty());
    }

    #[test]
    fn invariant_breaks_are_errors() {
        let inst = samples::coupled_singular();
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let tol = Tolerances::default();
        let neg = Policy::new(Matrix::zeros(2, 2), vec![-1.0, 0.0]);
        assert!(matches!(
            verify_policy(&inst, &basis, &neg, &tol),
            Err(Error::InvalidPolicy(_))
        ));
        let mut bad_x = samples::coupled_policy();
        bad_x.x = vec![false, true];
        assert!(verify_policy(&inst, &basis, &bad_x, &tol).is_err());
        let short = Policy::new(Matrix::zeros(1, 2), vec![1.0]);
        assert!(matches!(
            verify_policy(&inst, &basis, &short, &tol),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn enumeration_order() {
        let all: Vec<Vec<bool>> = supports_in_order(3).collect();
        assert_eq!(all.len(), 8);
        let sets: Vec<Vec<usize>> = all
            .iter()
            .map(|x| (0..3).filter(|&i| x[i]).collect())
            .collect();
        assert_eq!(
            sets,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
    }

    fn oracle(inst: &Instance) -> OracleReport {
        let basis = compute_lin_hull(inst, 1e-9).unwrap();
        oracle_enumerate(inst, &basis, &OracleOptions::default()).unwrap()
    }

    #[test]
    fn oracle_one_dim() {
        let rep = oracle(&samples::one_dim());
        assert_eq!(rep.report.status, SolveStatus::Feasible);
        assert_eq!(rep.first_feasible(), Some(vec![0]));
        assert_ne!(rep.outcomes[0].1, SupportOutcome::Feasible);
        let pol = rep.report.policy.unwrap();
        assert!((pol.r[0] - 2.0).abs() < 1e-9);
        assert!((pol.d[(0, 0)] + 0.5).abs() < 1e-9);
    }

    #[test]
    fn oracle_scenarios() {
        let rep = oracle(&samples::scenario(2.0, 1.0));
        assert_eq!(rep.first_feasible(), Some(vec![]));
        assert_eq!(rep.report.policy.unwrap().r, vec![0.0, 0.0]);

        let rep = oracle(&samples::scenario(0.0, -1.0));
        assert_eq!(rep.first_feasible(), Some(vec![0]));
        let pol = rep.report.policy.unwrap();
        assert!((pol.r[0] - 1.0).abs() < 1e-9 && pol.r[1] == 0.0);

        let rep = oracle(&samples::scenario(0.5, -0.5));
        assert_eq!(rep.report.status, SolveStatus::Infeasible);
        assert_eq!(rep.outcomes.len(), 4);
        assert_eq!(rep.count(SupportOutcome::ComplementarityInfeasible), 4);
    }

    #[test]
    fn oracle_limit() {
        let inst = samples::one_dim();
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let opts = OracleOptions {
            limit: 0,
            ..OracleOptions::default()
        };
        assert_eq!(
            oracle_enumerate(&inst, &basis, &opts).unwrap_err(),
            Error::OracleLimitExceeded { n: 1, limit: 0 }
        );
    }
}
