//! The mixed-integer feasibility model whose solutions are exactly the
//! affine robust policies over a polyhedral uncertainty set.
//!
//! Variables: binaries `x` (support indicator), continuous `D` (free), `r`,
//! and the dual multipliers `A`, `C` (all nonnegative); mixed instances add
//! `s` and, for adjustable `y`, `E` (both free).
//!
//! Rows that depend on `x_i` are stored in their *enforced* form together
//! with an [`Indicator`]. The export path relaxes them with a big-M term;
//! the branch-and-bound path keeps an indicator row only once its binary is
//! fixed to the enforcing value and drops it otherwise, so the internal
//! solver never depends on the size of `b`.

mod bnb;
mod export;

pub use bnb::{
    bnb_solve, default_node_limit, BnbOptions, Branching, NodeState, SolveReport, SolveStatus,
};
pub use export::{
    export_milp, parse_lp, parse_mps, solve_by_enumeration, write_lp, write_mps, ExportFormat,
    ParsedModel,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::linhull::LinHullBasis;
use crate::lp::{lp_feasible, LpModel, LpStatus, Relation};
use crate::matrix::{dot, Matrix};
use crate::model::{Instance, Policy, Tolerances, YPart};
use crate::verify::{verify_policy, VerifyReport};

/// Role of a constraint row in the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `r_i <= b x_i`
    SupportBound,
    /// `b(1 - x_i) >= M_i r + q_i >= 0`
    NominalSlack,
    /// `|(M_i D + T_i) v^j| <= b(1 - x_i)`
    DirectionalSlack,
    /// `zeta^T A_i + r_i >= 0`
    ZDualObjective,
    /// `Theta^T A_i = D_i^T`
    ZDualBalance,
    /// `zeta^T C_i + M_i r + q_i >= 0`
    WDualObjective,
    /// `Theta^T C_i = (M_i D + T_i)^T`
    WDualBalance,
    /// `D_i = 0` for here-and-now rows
    HereAndNow,
    /// `V r + W s + p = 0`
    MixedNominal,
    /// `(V D + W E + P) v^j = 0`
    MixedDirectional,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::SupportBound,
        Family::NominalSlack,
        Family::DirectionalSlack,
        Family::ZDualObjective,
        Family::ZDualBalance,
        Family::WDualObjective,
        Family::WDualBalance,
        Family::HereAndNow,
        Family::MixedNominal,
        Family::MixedDirectional,
    ];

    pub fn is_dual(self) -> bool {
        matches!(
            self,
            Family::ZDualObjective | Family::ZDualBalance | Family::WDualObjective | Family::WDualBalance
        )
    }

    fn prefix(self) -> &'static str {
        match self {
            Family::SupportBound => "sup",
            Family::NominalSlack => "nom",
            Family::DirectionalSlack => "dir",
            Family::ZDualObjective => "zobj",
            Family::ZDualBalance => "zbal",
            Family::WDualObjective => "wobj",
            Family::WDualBalance => "wbal",
            Family::HereAndNow => "fix",
            Family::MixedNominal => "meq",
            Family::MixedDirectional => "mdir",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    D { i: usize, c: usize },
    R { i: usize },
    A { j: usize, i: usize },
    C { j: usize, i: usize },
    S { i: usize },
    E { i: usize, c: usize },
}

impl VarKind {
    pub fn name(self) -> String {
        match self {
            VarKind::D { i, c } => format!("D{}_{}", i + 1, c + 1),
            VarKind::R { i } => format!("r{}", i + 1),
            VarKind::A { j, i } => format!("A{}_{}", j + 1, i + 1),
            VarKind::C { j, i } => format!("C{}_{}", j + 1, i + 1),
            VarKind::S { i } => format!("s{}", i + 1),
            VarKind::E { i, c } => format!("E{}_{}", i + 1, c + 1),
        }
    }

    fn is_free(self) -> bool {
        matches!(self, VarKind::D { .. } | VarKind::S { .. } | VarKind::E { .. })
    }
}

pub fn binary_name(i: usize) -> String {
    format!("x{}", i + 1)
}

/// Column layout of the continuous variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub k: usize,
    pub g: usize,
    pub m: usize,
    pub mixed: bool,
    pub adjustable_y: bool,
}

impl Layout {
    pub fn d(&self, i: usize, c: usize) -> usize {
        i * self.k + c
    }
    pub fn r(&self, i: usize) -> usize {
        self.n * self.k + i
    }
    pub fn a(&self, j: usize, i: usize) -> usize {
        self.n * self.k + self.n + j * self.n + i
    }
    pub fn c(&self, j: usize, i: usize) -> usize {
        self.n * self.k + self.n + self.g * self.n + j * self.n + i
    }
    pub fn s(&self, i: usize) -> usize {
        self.n * self.k + self.n + 2 * self.g * self.n + i
    }
    pub fn e(&self, i: usize, c: usize) -> usize {
        debug_assert!(self.adjustable_y);
        self.s(self.m) + i * self.k + c
    }
    pub fn num_continuous(&self) -> usize {
        let e = if self.adjustable_y { self.m * self.k } else { 0 };
        self.s(0) + self.m + e
    }

    fn kinds(&self) -> Vec<VarKind> {
        let mut v = Vec::with_capacity(self.num_continuous());
        for i in 0..self.n {
            for c in 0..self.k {
                v.push(VarKind::D { i, c });
            }
        }
        v.extend((0..self.n).map(|i| VarKind::R { i }));
        for j in 0..self.g {
            v.extend((0..self.n).map(|i| VarKind::A { j, i }));
        }
        for j in 0..self.g {
            v.extend((0..self.n).map(|i| VarKind::C { j, i }));
        }
        v.extend((0..self.m).map(|i| VarKind::S { i }));
        if self.adjustable_y {
            for i in 0..self.m {
                for c in 0..self.k {
                    v.push(VarKind::E { i, c });
                }
            }
        }
        v
    }
}

/// A row is enforced as written when `x[binary] == active_when` and relaxed
/// by the big-M term otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Indicator {
    pub binary: usize,
    pub active_when: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpRow {
    pub family: Family,
    pub name: String,
    /// Index of the `z` (or `y` for mixed rows) component the row belongs to.
    pub owner: usize,
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
    pub indicator: Option<Indicator>,
}

impl MilpRow {
    /// The row in big-M form: continuous terms, coefficient of the binary,
    /// relation and right-hand side.
    pub fn big_m_form(&self, b: f64) -> (Option<(usize, f64)>, f64) {
        let Some(ind) = self.indicator else {
            return (None, self.rhs);
        };
        let x = ind.binary;
        match (self.relation, ind.active_when) {
            // terms <= rhs + b x
            (Relation::Le, false) => (Some((x, -b)), self.rhs),
            // terms <= rhs + b (1 - x)
            (Relation::Le, true) => (Some((x, b)), self.rhs + b),
            // terms >= rhs - b (1 - x)
            (Relation::Ge, true) => (Some((x, -b)), self.rhs - b),
            // terms >= rhs - b x
            (Relation::Ge, false) => (Some((x, b)), self.rhs),
            (Relation::Eq, _) => unreachable!("indicator rows are inequalities"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel {
    pub layout: Layout,
    pub n_binaries: usize,
    pub vars: Vec<VarKind>,
    pub rows: Vec<MilpRow>,
    pub big_m: f64,
}

/// `10^4 * max(1, |M|, |q|, |T|, |zeta|)` in infinity norms.
pub fn default_big_m(inst: &Instance) -> f64 {
    1e4 * inst.data_scale()
}

struct RowSink {
    rows: Vec<MilpRow>,
}

impl RowSink {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        family: Family,
        name: String,
        owner: usize,
        terms: Vec<(usize, f64)>,
        relation: Relation,
        rhs: f64,
        indicator: Option<Indicator>,
    ) {
        let terms = compact_terms(terms);
        self.rows.push(MilpRow {
            family,
            name,
            owner,
            terms,
            relation,
            rhs,
            indicator,
        });
    }
}

fn compact_terms(mut terms: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    terms.sort_by_key(|t| t.0);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
    for (j, a) in terms {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += a,
            _ => out.push((j, a)),
        }
    }
    out.retain(|t| t.1 != 0.0);
    out
}

pub fn build_milp(inst: &Instance, basis: &LinHullBasis, big_m: f64) -> Result<MilpModel> {
    inst.check_dimensions()?;
    if !(big_m > 0.0 && big_m.is_finite()) {
        return Err(Error::Precondition(format!("big-M must be positive, got {big_m}")));
    }
    let (n, k, g) = (inst.n(), inst.k(), inst.g());
    if basis.vectors.iter().any(|v| v.len() != k) {
        return Err(Error::DimensionMismatch("basis vectors must have length k".into()));
    }
    let mixed = inst.mixed.as_ref();
    let lay = Layout {
        n,
        k,
        g,
        m: mixed.map_or(0, |mx| mx.m()),
        mixed: mixed.is_some(),
        adjustable_y: mixed.is_some_and(|mx| mx.y_adjustable),
    };
    let theta = &inst.uncertainty.theta;
    let zeta = &inst.uncertainty.zeta;
    let mut sink = RowSink { rows: Vec::new() };

    // M_i r + N_i s
    let nominal_terms = |i: usize| {
        let mut t: Vec<(usize, f64)> = (0..n).map(|l| (lay.r(l), inst.m[(i, l)])).collect();
        if let Some(mx) = mixed {
            t.extend((0..lay.m).map(|l| (lay.s(l), mx.n[(i, l)])));
        }
        t
    };
    // (M_i D + N_i E) applied to direction `v`
    let direction_terms = |i: usize, v: &[f64]| {
        let mut t = Vec::new();
        for l in 0..n {
            for c in 0..k {
                t.push((lay.d(l, c), inst.m[(i, l)] * v[c]));
            }
        }
        if let (Some(mx), true) = (mixed, lay.adjustable_y) {
            for l in 0..lay.m {
                for c in 0..k {
                    t.push((lay.e(l, c), mx.n[(i, l)] * v[c]));
                }
            }
        }
        t
    };

    for i in 0..n {
        sink.push(
            Family::SupportBound,
            format!("sup_{}", i + 1),
            i,
            vec![(lay.r(i), 1.0)],
            Relation::Le,
            0.0,
            Some(Indicator {
                binary: i,
                active_when: false,
            }),
        );
    }
    for i in 0..n {
        sink.push(
            Family::NominalSlack,
            format!("nomlo_{}", i + 1),
            i,
            nominal_terms(i),
            Relation::Ge,
            -inst.q[i],
            None,
        );
        sink.push(
            Family::NominalSlack,
            format!("nomup_{}", i + 1),
            i,
            nominal_terms(i),
            Relation::Le,
            -inst.q[i],
            Some(Indicator {
                binary: i,
                active_when: true,
            }),
        );
    }
    for i in 0..n {
        for (j, v) in basis.vectors.iter().enumerate() {
            let rhs = -dot(inst.t.row(i), v);
            for (tag, rel) in [("lo", Relation::Ge), ("up", Relation::Le)] {
                sink.push(
                    Family::DirectionalSlack,
                    format!("dir{tag}_{}_{}", i + 1, j + 1),
                    i,
                    direction_terms(i, v),
                    rel,
                    rhs,
                    Some(Indicator {
                        binary: i,
                        active_when: true,
                    }),
                );
            }
        }
    }
    for i in 0..n {
        let mut t: Vec<(usize, f64)> = (0..g).map(|j| (lay.a(j, i), zeta[j])).collect();
        t.push((lay.r(i), 1.0));
        sink.push(Family::ZDualObjective, format!("zobj_{}", i + 1), i, t, Relation::Ge, 0.0, None);
    }
    for i in 0..n {
        for c in 0..k {
            let mut t: Vec<(usize, f64)> = (0..g).map(|j| (lay.a(j, i), theta[(j, c)])).collect();
            t.push((lay.d(i, c), -1.0));
            sink.push(
                Family::ZDualBalance,
                format!("zbal_{}_{}", i + 1, c + 1),
                i,
                t,
                Relation::Eq,
                0.0,
                None,
            );
        }
    }
    for i in 0..n {
        let mut t: Vec<(usize, f64)> = (0..g).map(|j| (lay.c(j, i), zeta[j])).collect();
        t.extend(nominal_terms(i));
        sink.push(
            Family::WDualObjective,
            format!("wobj_{}", i + 1),
            i,
            t,
            Relation::Ge,
            -inst.q[i],
            None,
        );
    }
    for i in 0..n {
        for c in 0..k {
            let mut t: Vec<(usize, f64)> = (0..g).map(|j| (lay.c(j, i), theta[(j, c)])).collect();
            t.extend((0..n).map(|l| (lay.d(l, c), -inst.m[(i, l)])));
            if let (Some(mx), true) = (mixed, lay.adjustable_y) {
                t.extend((0..lay.m).map(|l| (lay.e(l, c), -mx.n[(i, l)])));
            }
            sink.push(
                Family::WDualBalance,
                format!("wbal_{}_{}", i + 1, c + 1),
                i,
                t,
                Relation::Eq,
                inst.t[(i, c)],
                None,
            );
        }
    }
    for i in 0..inst.h {
        for c in 0..k {
            sink.push(
                Family::HereAndNow,
                format!("fix_{}_{}", i + 1, c + 1),
                i,
                vec![(lay.d(i, c), 1.0)],
                Relation::Eq,
                0.0,
                None,
            );
        }
    }
    if let Some(mx) = mixed {
        for i in 0..lay.m {
            let mut t: Vec<(usize, f64)> = (0..n).map(|l| (lay.r(l), mx.v[(i, l)])).collect();
            t.extend((0..lay.m).map(|l| (lay.s(l), mx.w[(i, l)])));
            sink.push(
                Family::MixedNominal,
                format!("meq_{}", i + 1),
                i,
                t,
                Relation::Eq,
                -mx.p[i],
                None,
            );
        }
        for i in 0..lay.m {
            for (j, v) in basis.vectors.iter().enumerate() {
                let mut t = Vec::new();
                for l in 0..n {
                    for c in 0..k {
                        t.push((lay.d(l, c), mx.v[(i, l)] * v[c]));
                    }
                }
                if lay.adjustable_y {
                    for l in 0..lay.m {
                        for c in 0..k {
                            t.push((lay.e(l, c), mx.w[(i, l)] * v[c]));
                        }
                    }
                }
                sink.push(
                    Family::MixedDirectional,
                    format!("mdir_{}_{}", i + 1, j + 1),
                    i,
                    t,
                    Relation::Eq,
                    -dot(mx.p_mat.row(i), v),
                    None,
                );
            }
        }
    }

    Ok(MilpModel {
        layout: lay,
        n_binaries: n,
        vars: lay.kinds(),
        rows: sink.rows,
        big_m,
    })
}

impl MilpModel {
    pub fn num_continuous(&self) -> usize {
        self.vars.len()
    }

    pub fn count(&self, family: Family) -> usize {
        self.rows.iter().filter(|r| r.family == family).count()
    }

    fn base_lp(&self) -> LpModel {
        let mut lp = LpModel::new(self.vars.len());
        for (j, kind) in self.vars.iter().enumerate() {
            if !kind.is_free() {
                lp.set_bounds(j, 0.0, f64::INFINITY);
            }
        }
        lp
    }

    /// Exact-indicator relaxation at a node: all unconditional rows, plus
    /// each indicator row whose binary is fixed to its enforcing value.
    pub fn node_lp(&self, fixed: &[Option<bool>]) -> LpModel {
        self.node_lp_with(fixed, |_| true)
    }

    /// As [`MilpModel::node_lp`], restricted to the families `keep` accepts.
    pub fn node_lp_with(&self, fixed: &[Option<bool>], keep: impl Fn(Family) -> bool) -> LpModel {
        let mut lp = self.base_lp();
        for row in self.rows.iter().filter(|r| keep(r.family)) {
            let enforced = match row.indicator {
                None => true,
                Some(ind) => fixed[ind.binary] == Some(ind.active_when),
            };
            if enforced {
                lp.add_sparse_row(&row.terms, row.relation, row.rhs);
            }
        }
        lp
    }

    /// LP over the dual multipliers of a single robust row with `D`, `r`
    /// (and `s`, `E`) fixed to the policy. `w_side` selects the `C` system
    /// for `M z(u) + q + T u >= 0`; otherwise the `A` system for `z(u) >= 0`.
    /// It is feasible exactly when the row is nonnegative over U.
    pub fn dual_certificate_lp(&self, pol: &Policy, i: usize, w_side: bool) -> LpModel {
        let fams = if w_side {
            [Family::WDualObjective, Family::WDualBalance]
        } else {
            [Family::ZDualObjective, Family::ZDualBalance]
        };
        let mut lp = self.base_lp();
        for row in self.rows.iter().filter(|r| fams.contains(&r.family) && r.owner == i) {
            lp.add_sparse_row(&row.terms, row.relation, row.rhs);
        }
        for (idx, value) in self.policy_assignment(pol) {
            lp.set_bounds(idx, value, value);
        }
        lp
    }

    fn policy_assignment(&self, pol: &Policy) -> Vec<(usize, f64)> {
        let lay = self.layout;
        let mut out = Vec::new();
        for i in 0..lay.n {
            for c in 0..lay.k {
                out.push((lay.d(i, c), pol.d[(i, c)]));
            }
            out.push((lay.r(i), pol.r[i]));
        }
        if let Some(y) = &pol.y_part {
            for i in 0..lay.m {
                out.push((lay.s(i), y.s[i]));
                if lay.adjustable_y {
                    for c in 0..lay.k {
                        out.push((lay.e(i, c), y.e[(i, c)]));
                    }
                }
            }
        }
        out
    }

    /// Reads `(D, r, s, E)` off a continuous point.
    pub fn policy_from_point(&self, point: &[f64], x: Vec<bool>) -> Policy {
        let lay = self.layout;
        let mut d = Matrix::zeros(lay.n, lay.k);
        for i in 0..lay.n {
            for c in 0..lay.k {
                d[(i, c)] = point[lay.d(i, c)];
            }
        }
        let r = (0..lay.n).map(|i| point[lay.r(i)].max(0.0)).collect();
        let y_part = lay.mixed.then(|| {
            let s = (0..lay.m).map(|i| point[lay.s(i)]).collect();
            let mut e = Matrix::zeros(lay.m, lay.k);
            if lay.adjustable_y {
                for i in 0..lay.m {
                    for c in 0..lay.k {
                        e[(i, c)] = point[lay.e(i, c)];
                    }
                }
            }
            YPart { e, s }
        });
        Policy { d, r, x, y_part }
    }
}

/// Result of solving the exact-indicator LP with every binary fixed.
#[derive(Debug, Clone)]
pub(crate) enum LeafOutcome {
    Infeasible,
    Verified(Policy, VerifyReport),
    /// LP-feasible, but the recovered policy failed verification.
    Rejected(VerifyReport),
}

/// Solves a fully fixed node and certifies the recovered policy. Returns the
/// outcome and the number of LPs solved.
pub(crate) fn solve_leaf(
    inst: &Instance,
    basis: &LinHullBasis,
    model: &MilpModel,
    x: &[bool],
    tol: &Tolerances,
) -> Result<(LeafOutcome, usize)> {
    let fixed: Vec<Option<bool>> = x.iter().map(|&b| Some(b)).collect();
    let res = lp_feasible(&model.node_lp(&fixed), tol.lp())?;
    if res.status != LpStatus::Optimal {
        return Ok((LeafOutcome::Infeasible, 1));
    }
    leaf_from_point(inst, basis, model, &res.point, x.to_vec(), tol).map(|(o, c)| (o, c + 1))
}

pub(crate) fn leaf_from_point(
    inst: &Instance,
    basis: &LinHullBasis,
    model: &MilpModel,
    point: &[f64],
    x: Vec<bool>,
    tol: &Tolerances,
) -> Result<(LeafOutcome, usize)> {
    let mut pol = model.policy_from_point(point, x);
    pol.truncate_small(tol.zero);
    let rep = verify_policy(inst, basis, &pol, tol)?;
    let calls = rep.lp_calls;
    if rep.is_verified() {
        Ok((LeafOutcome::Verified(pol, rep), calls))
    } else {
        Ok((LeafOutcome::Rejected(rep), calls))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhull::compute_lin_hull;
    use crate::samples;

    fn counts(model: &MilpModel) -> Vec<usize> {
        Family::ALL[..8].iter().map(|&f| model.count(f)).collect()
    }

    #[test]
    fn one_dim_counts() {
        let inst = samples::one_dim();
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let model = build_milp(&inst, &basis, 10.0).unwrap();
        assert_eq!(model.n_binaries, 1);
        assert_eq!(model.num_continuous(), 6);
        assert_eq!(counts(&model), vec![1, 2, 2, 1, 1, 1, 1, 0]);
    }

    #[test]
    fn coupled_example_counts() {
        let inst = samples::coupled_singular();
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let model = build_milp(&inst, &basis, 100.0).unwrap();
        assert_eq!(model.n_binaries, 2);
        assert_eq!(model.num_continuous(), 22);
        // n, 2n, 2 n l, n, n k, n, n k, h k with n = k = 2, l = 1, h = 0
        assert_eq!(counts(&model), vec![2, 4, 4, 2, 4, 2, 4, 0]);
    }

    #[test]
    fn here_and_now_rows_pin_d() {
        let mut inst = samples::coupled_singular();
        inst.h = 1;
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let model = build_milp(&inst, &basis, 100.0).unwrap();
        let pinned: Vec<&MilpRow> = model
            .rows
            .iter()
            .filter(|r| r.family == Family::HereAndNow)
            .collect();
        assert_eq!(pinned.len(), 2);
        for (c, row) in pinned.iter().enumerate() {
            assert_eq!(row.terms, vec![(model.layout.d(0, c), 1.0)]);
            assert_eq!(row.relation, Relation::Eq);
        }
    }

    #[test]
    fn indicator_rows_follow_fixings() {
        let inst = samples::one_dim();
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let model = build_milp(&inst, &basis, 10.0).unwrap();
        // unconditional: nominal lower, z-dual (2), w-dual (2)
        assert_eq!(model.node_lp(&[None]).rows.len(), 5);
        assert_eq!(model.node_lp(&[Some(false)]).rows.len(), 6);
        assert_eq!(model.node_lp(&[Some(true)]).rows.len(), 8);
    }

    #[test]
    fn rejects_bad_big_m() {
        let inst = samples::one_dim();
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        assert!(build_milp(&inst, &basis, 0.0).is_err());
        assert!(build_milp(&inst, &basis, f64::INFINITY).is_err());
    }

    #[test]
    fn big_m_forms() {
        let row = |relation, active_when| MilpRow {
            family: Family::NominalSlack,
            name: String::new(),
            owner: 0,
            terms: vec![],
            relation,
            rhs: 2.0,
            indicator: Some(Indicator {
                binary: 0,
                active_when,
            }),
        };
        assert_eq!(row(Relation::Le, false).big_m_form(10.0), (Some((0, -10.0)), 2.0));
        assert_eq!(row(Relation::Le, true).big_m_form(10.0), (Some((0, 10.0)), 12.0));
        assert_eq!(row(Relation::Ge, true).big_m_form(10.0), (Some((0, -10.0)), -8.0));
        assert_eq!(row(Relation::Ge, false).big_m_form(10.0), (Some((0, 10.0)), 2.0));
    }
}
