//! Dense two-phase primal simplex.
//!
//! Every LP in the crate goes through [`lp_solve`]: uncertainty-set
//! maximizations, verifier minimizations, support computations and the
//! branch-and-bound node relaxations. Models are maximized. Variables carry
//! optional bounds; rows are `<=`, `=` or `>=`.
//!
//! The model is first brought into standard form: singleton rows become
//! bounds, fixed variables are substituted out, shifted/negated/split
//! columns replace bounded and free variables, and finite upper bounds turn
//! into extra rows. Phase I drives artificial variables out of the basis
//! (dropping redundant equality rows), Phase II optimizes the objective.
//! Pricing is Dantzig's rule, falling back to Bland's rule after a run of
//! degenerate pivots.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }

    fn flipped(self) -> Relation {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl LpRow {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }

    /// Signed violation of the row at `point` (zero when satisfied).
    pub fn violation(&self, point: &[f64]) -> f64 {
        let lhs: f64 = self.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// A linear program `max objective . x` subject to rows and variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub bounds: Vec<(f64, f64)>,
}

impl LpModel {
    /// A model with `num_vars` free variables, zero objective and no rows.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            rows: Vec::new(),
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); num_vars],
        }
    }

    pub fn nonnegative(num_vars: usize) -> Self {
        let mut m = Self::new(num_vars);
        m.bounds = vec![(0.0, f64::INFINITY); num_vars];
        m
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push(LpRow::new(coeffs, relation, rhs));
    }

    /// Adds a row from sparse `(index, coefficient)` terms.
    pub fn add_sparse_row(&mut self, terms: &[(usize, f64)], relation: Relation, rhs: f64) {
        let mut coeffs = vec![0.0; self.num_vars];
        for &(j, a) in terms {
            coeffs[j] += a;
        }
        self.rows.push(LpRow::new(coeffs, relation, rhs));
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.bounds[var] = (lower, upper);
    }

    /// Largest row or bound violation at `point`.
    pub fn max_violation(&self, point: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|r| r.violation(point));
        let bounds = self
            .bounds
            .iter()
            .zip(point)
            .map(|(&(l, u), &x)| (l - x).max(x - u).max(0.0));
        rows.chain(bounds).fold(0.0, f64::max)
    }

    fn check(&self) -> Result<()> {
        if self.objective.len() != self.num_vars || self.bounds.len() != self.num_vars {
            return Err(Error::DimensionMismatch(
                "LP objective/bounds length differs from num_vars".into(),
            ));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != self.num_vars {
                return Err(Error::DimensionMismatch(format!(
                    "LP row {i} has {} coefficients, expected {}",
                    row.coeffs.len(),
                    self.num_vars
                )));
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("LP row {i}")));
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("LP objective".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Objective value; meaningful only when `status` is `Optimal`.
    pub value: f64,
    /// Maximizer; empty unless `status` is `Optimal`.
    pub point: Vec<f64>,
}

impl LpResult {
    fn infeasible() -> Self {
        Self {
            status: LpStatus::Infeasible,
            value: f64::NAN,
            point: Vec::new(),
        }
    }

    fn unbounded() -> Self {
        Self {
            status: LpStatus::Unbounded,
            value: f64::INFINITY,
            point: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;

/// Solves `model` to optimality. `tol` is the Phase I infeasibility threshold
/// (relative to the largest right-hand side).
pub fn lp_solve(model: &LpModel, tol: f64) -> Result<LpResult> {
    solve(model, tol, true)
}

/// Finds any feasible point of `model`, ignoring its objective.
pub fn lp_feasible(model: &LpModel, tol: f64) -> Result<LpResult> {
    solve(model, tol, false)
}

fn solve(model: &LpModel, tol: f64, optimize: bool) -> Result<LpResult> {
    model.check()?;
    let Some(sf) = StandardForm::build(model, tol)? else {
        return Ok(LpResult::infeasible());
    };
    let mut tab = Tableau::new(&sf);
    if !tab.phase_one(tol)? {
        return Ok(LpResult::infeasible());
    }
    if optimize && sf.objective.iter().any(|&c| c != 0.0) {
        tab.set_objective(&sf.objective);
        if !tab.run(PivotBudget::for_tableau(&tab))? {
            return Ok(LpResult::unbounded());
        }
    }
    let columns = tab.primal_values();
    let point = sf.recover(&columns);
    let value = model
        .objective
        .iter()
        .zip(&point)
        .map(|(c, x)| c * x)
        .sum::<f64>();
    Ok(LpResult {
        status: LpStatus::Optimal,
        value: if optimize { value } else { 0.0 },
        point,
    })
}

/// How an original variable maps onto nonnegative standard-form columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    Fixed(f64),
    /// x = lower + col
    Shift { col: usize, lower: f64 },
    /// x = upper - col
    Negated { col: usize, upper: f64 },
    /// x = pos - neg
    Split { pos: usize, neg: usize },
}

struct StandardForm {
    maps: Vec<VarMap>,
    ncols: usize,
    /// Dense rows over standard columns, all with `rhs >= 0` after sign
    /// normalization.
    rows: Vec<(Vec<f64>, Relation, f64)>,
    objective: Vec<f64>,
}

impl StandardForm {
    /// Returns `None` when presolve already proves infeasibility.
    fn build(model: &LpModel, tol: f64) -> Result<Option<Self>> {
        let n = model.num_vars;
        let mut bounds = model.bounds.clone();
        let mut active = vec![true; model.rows.len()];
        let scale = model
            .rows
            .iter()
            .map(|r| r.rhs.abs())
            .fold(1.0, f64::max);
        let feas = tol * scale;

        // Singleton rows become bounds; repeat since fixing can expose more.
        loop {
            let mut changed = false;
            for (ri, row) in model.rows.iter().enumerate() {
                if !active[ri] {
                    continue;
                }
                let mut rhs = row.rhs;
                let mut live = None;
                let mut count = 0;
                for (j, &a) in row.coeffs.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    let (l, u) = bounds[j];
                    if l == u {
                        rhs -= a * l;
                    } else {
                        count += 1;
                        live = Some((j, a));
                    }
                }
                match (count, live) {
                    (0, _) => {
                        let ok = match row.relation {
                            Relation::Le => 0.0 <= rhs + feas,
                            Relation::Ge => 0.0 >= rhs - feas,
                            Relation::Eq => rhs.abs() <= feas,
                        };
                        if !ok {
                            return Ok(None);
                        }
                        active[ri] = false;
                        changed = true;
                    }
                    (1, Some((j, a))) => {
                        let bound = rhs / a;
                        let rel = if a > 0.0 { row.relation } else { row.relation.flipped() };
                        let (l, u) = &mut bounds[j];
                        match rel {
                            Relation::Le => *u = u.min(bound),
                            Relation::Ge => *l = l.max(bound),
                            Relation::Eq => {
                                *l = l.max(bound);
                                *u = u.min(bound);
                            }
                        }
                        if *l > *u {
                            if *l - *u > feas {
                                return Ok(None);
                            }
                            let mid = 0.5 * (*l + *u);
                            *l = mid;
                            *u = mid;
                        }
                        active[ri] = false;
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }

        let mut maps = Vec::with_capacity(n);
        let mut ncols = 0;
        let mut upper_rows: Vec<(usize, f64)> = Vec::new();
        for &(l, u) in &bounds {
            if l > u {
                return Ok(None);
            }
            let map = if l == u {
                VarMap::Fixed(l)
            } else if l.is_finite() {
                let col = ncols;
                ncols += 1;
                if u.is_finite() {
                    upper_rows.push((col, u - l));
                }
                VarMap::Shift { col, lower: l }
            } else if u.is_finite() {
                let col = ncols;
                ncols += 1;
                VarMap::Negated { col, upper: u }
            } else {
                let pos = ncols;
                ncols += 2;
                VarMap::Split { pos, neg: pos + 1 }
            };
            maps.push(map);
        }

        let mut rows = Vec::new();
        for (ri, row) in model.rows.iter().enumerate() {
            if !active[ri] {
                continue;
            }
            let mut dense = vec![0.0; ncols];
            let mut rhs = row.rhs;
            for (j, &a) in row.coeffs.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                match maps[j] {
                    VarMap::Fixed(v) => rhs -= a * v,
                    VarMap::Shift { col, lower } => {
                        dense[col] += a;
                        rhs -= a * lower;
                    }
                    VarMap::Negated { col, upper } => {
                        dense[col] -= a;
                        rhs -= a * upper;
                    }
                    VarMap::Split { pos, neg } => {
                        dense[pos] += a;
                        dense[neg] -= a;
                    }
                }
            }
            rows.push(normalized(dense, row.relation, rhs));
        }
        for (col, width) in upper_rows {
            let mut dense = vec![0.0; ncols];
            dense[col] = 1.0;
            rows.push(normalized(dense, Relation::Le, width));
        }

        let mut objective = vec![0.0; ncols];
        for (j, &c) in model.objective.iter().enumerate() {
            match maps[j] {
                VarMap::Fixed(_) => {}
                VarMap::Shift { col, .. } => objective[col] += c,
                VarMap::Negated { col, .. } => objective[col] -= c,
                VarMap::Split { pos, neg } => {
                    objective[pos] += c;
                    objective[neg] -= c;
                }
            }
        }
        Ok(Some(Self {
            maps,
            ncols,
            rows,
            objective,
        }))
    }

    fn recover(&self, cols: &[f64]) -> Vec<f64> {
        self.maps
            .iter()
            .map(|m| match *m {
                VarMap::Fixed(v) => v,
                VarMap::Shift { col, lower } => lower + cols[col],
                VarMap::Negated { col, upper } => upper - cols[col],
                VarMap::Split { pos, neg } => cols[pos] - cols[neg],
            })
            .collect()
    }
}

fn normalized(mut coeffs: Vec<f64>, relation: Relation, rhs: f64) -> (Vec<f64>, Relation, f64) {
    if rhs < 0.0 {
        for c in &mut coeffs {
            *c = -*c;
        }
        (coeffs, relation.flipped(), -rhs)
    } else {
        (coeffs, relation, rhs)
    }
}

#[derive(Debug, Clone, Copy)]
struct PivotBudget(usize);

impl PivotBudget {
    fn for_tableau(tab: &Tableau) -> Self {
        PivotBudget(50 * (tab.m + tab.ncols).max(1))
    }
}

/// Dense simplex tableau. Rows `0..m` hold `B^-1 [A | b]`; row `m` holds the
/// reduced costs `c_B B^-1 A - c` with the current objective value in the
/// last column. Maximization: a column with negative reduced cost improves.
struct Tableau {
    m: usize,
    ncols: usize,
    width: usize,
    a: Vec<f64>,
    basis: Vec<usize>,
    /// Columns at or past this index are artificial.
    artificial_start: usize,
    /// Columns that may no longer enter the basis.
    blocked: Vec<bool>,
}

impl Tableau {
    fn new(sf: &StandardForm) -> Self {
        let m = sf.rows.len();
        let n_slack = sf
            .rows
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Eq)
            .count();
        let n_art = sf
            .rows
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Le)
            .count();
        let ncols = sf.ncols + n_slack + n_art;
        let width = ncols + 1;
        let mut a = vec![0.0; (m + 1) * width];
        let mut basis = vec![0; m];
        let artificial_start = sf.ncols + n_slack;
        let mut slack = sf.ncols;
        let mut art = artificial_start;
        for (i, (coeffs, rel, rhs)) in sf.rows.iter().enumerate() {
            let row = &mut a[i * width..(i + 1) * width];
            row[..sf.ncols].copy_from_slice(coeffs);
            row[ncols] = *rhs;
            match rel {
                Relation::Le => {
                    row[slack] = 1.0;
                    basis[i] = slack;
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
            }
        }
        Self {
            m,
            ncols,
            width,
            a,
            basis,
            artificial_start,
            blocked: vec![false; ncols],
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.ncols)
    }

    fn objective_value(&self) -> f64 {
        self.at(self.m, self.ncols)
    }

    /// Installs cost vector `c` (over all columns, missing entries zero) and
    /// prices out the current basis.
    fn install_costs(&mut self, cost: impl Fn(usize) -> f64) {
        let (m, w) = (self.m, self.width);
        let mut obj = vec![0.0; w];
        for (j, o) in obj.iter_mut().enumerate().take(self.ncols) {
            *o = -cost(j);
        }
        for i in 0..m {
            let cb = cost(self.basis[i]);
            if cb != 0.0 {
                let row = &self.a[i * w..(i + 1) * w];
                for (o, v) in obj.iter_mut().zip(row) {
                    *o += cb * v;
                }
            }
        }
        self.a[m * w..(m + 1) * w].copy_from_slice(&obj);
    }

    /// Returns `false` when the rows are infeasible.
    fn phase_one(&mut self, tol: f64) -> Result<bool> {
        let start = self.artificial_start;
        if start == self.ncols {
            return Ok(true);
        }
        let scale = (0..self.m).map(|i| self.rhs(i)).fold(1.0, f64::max);
        self.install_costs(|j| if j >= start { -1.0 } else { 0.0 });
        let finished = self.run(PivotBudget::for_tableau(self))?;
        debug_assert!(finished, "phase I objective is bounded");
        if -self.objective_value() > tol * scale {
            return Ok(false);
        }
        self.drive_out_artificials();
        for j in start..self.ncols {
            self.blocked[j] = true;
        }
        Ok(true)
    }

    /// Pivots artificial columns out of the basis; rows where that is
    /// impossible are redundant and are deleted.
    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.m {
            if self.basis[i] < self.artificial_start {
                i += 1;
                continue;
            }
            let best = (0..self.artificial_start)
                .filter(|&j| self.at(i, j).abs() > PIVOT_TOL)
                .max_by(|&x, &y| self.at(i, x).abs().total_cmp(&self.at(i, y).abs()));
            match best {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => self.remove_row(i),
            }
        }
    }

    fn remove_row(&mut self, i: usize) {
        let w = self.width;
        self.a.drain(i * w..(i + 1) * w);
        self.basis.remove(i);
        self.m -= 1;
    }

    fn set_objective(&mut self, objective: &[f64]) {
        let n = objective.len();
        self.install_costs(|j| if j < n { objective[j] } else { 0.0 });
    }

    /// Runs simplex iterations on the current cost row. Returns `false` on an
    /// unbounded improving ray.
    fn run(&mut self, budget: PivotBudget) -> Result<bool> {
        let degenerate_limit = 10 * self.m.max(1);
        let mut degenerate_run = 0;
        let mut bland = false;
        for _ in 0..budget.0 {
            let Some(enter) = self.entering(bland) else {
                return Ok(true);
            };
            let Some(leave) = self.leaving(enter, bland) else {
                return Ok(false);
            };
            let step = self.rhs(leave) / self.at(leave, enter);
            if step.abs() <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run > degenerate_limit {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(leave, enter);
        }
        Err(Error::NumericalFailure(format!(
            "simplex pivot limit of {} reached",
            budget.0
        )))
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let cost = &self.a[self.m * self.width..];
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.ncols {
            if self.blocked[j] {
                continue;
            }
            let d = cost[j];
            if d < -COST_TOL {
                if bland {
                    return Some(j);
                }
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn leaving(&self, enter: usize, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64, f64)> = None;
        for i in 0..self.m {
            let a = self.at(i, enter);
            if a <= PIVOT_TOL {
                continue;
            }
            let ratio = self.rhs(i).max(0.0) / a;
            best = match best {
                None => Some((i, ratio, a)),
                Some((bi, br, ba)) => {
                    let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                    let better = if tie {
                        if bland {
                            self.basis[i] < self.basis[bi]
                        } else {
                            a > ba
                        }
                    } else {
                        ratio < br
                    };
                    if better {
                        Some((i, ratio, a))
                    } else {
                        Some((bi, br, ba))
                    }
                }
            };
        }
        best.map(|(i, _, _)| i)
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.width;
        let piv = self.a[r * w + e];
        {
            let row = &mut self.a[r * w..(r + 1) * w];
            for v in row.iter_mut() {
                *v /= piv;
            }
            row[e] = 1.0;
        }
        let pivot_row: Vec<(usize, f64)> = self.a[r * w..(r + 1) * w]
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(j, v)| (j, *v))
            .collect();
        for i in 0..=self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * w + e];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.a[i * w..(i + 1) * w];
            for &(j, pv) in &pivot_row {
                row[j] -= f * pv;
            }
            row[e] = 0.0;
            if i < self.m && row[self.ncols] < 0.0 && row[self.ncols] > -1e-11 {
                row[self.ncols] = 0.0;
            }
        }
        self.basis[r] = e;
    }

    fn primal_values(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.ncols];
        for i in 0..self.m {
            x[self.basis[i]] = self.rhs(i).max(0.0);
        }
        x
    }
}
