//! Problem data: the uncertain LCP `0 <= Du + r  _|_  M(Du + r) + q + Tu >= 0`
//! for all `u` in a polyhedral uncertainty set, and affine policies `(D, r)`.

use crate::error::{Error, Result};
use crate::lp::{lp_feasible, lp_solve, LpModel, LpResult, LpStatus, Relation};
use crate::matrix::{norm_inf, Matrix};

/// Numerical tolerances shared by every solver path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Entries of `r` at or below this value count as zero.
    pub zero: f64,
    /// Residual tolerance for constraints and verification.
    pub feas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero: 1e-9,
            feas: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn with_feas(feas: f64) -> Self {
        Self {
            feas,
            ..Self::default()
        }
    }

    /// Phase I threshold for LP subproblems.
    pub(crate) fn lp(&self) -> f64 {
        self.zero
    }
}

/// `U = { u in R^k : theta u >= zeta }`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    pub theta: Matrix,
    pub zeta: Vec<f64>,
}

impl Polyhedron {
    pub fn new(theta: Matrix, zeta: Vec<f64>) -> Result<Self> {
        if theta.rows() != zeta.len() {
            return Err(Error::DimensionMismatch(format!(
                "Theta has {} rows but zeta has {} entries",
                theta.rows(),
                zeta.len()
            )));
        }
        if zeta.iter().any(|v| !v.is_finite()) || !theta.is_finite() {
            return Err(Error::NonFinite("uncertainty set".into()));
        }
        Ok(Self { theta, zeta })
    }

    /// The box `[-radius, radius]^k`.
    pub fn cube(k: usize, radius: f64) -> Self {
        Self::boxed(&vec![(-radius, radius); k])
    }

    /// The box `prod [lo_j, hi_j]`, two rows per coordinate.
    pub fn boxed(ranges: &[(f64, f64)]) -> Self {
        let k = ranges.len();
        let mut theta = Matrix::zeros(2 * k, k);
        let mut zeta = Vec::with_capacity(2 * k);
        for (j, &(lo, hi)) in ranges.iter().enumerate() {
            theta[(2 * j, j)] = 1.0;
            zeta.push(lo);
            theta[(2 * j + 1, j)] = -1.0;
            zeta.push(-hi);
        }
        Self { theta, zeta }
    }

    /// The single point `{0}` in `R^k`.
    pub fn origin(k: usize) -> Self {
        Self::cube(k, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.theta.cols()
    }

    pub fn num_rows(&self) -> usize {
        self.theta.rows()
    }

    /// LP over `u in U` with the given objective (maximized).
    pub fn lp(&self, objective: &[f64]) -> LpModel {
        let mut lp = LpModel::new(self.dim());
        lp.objective = objective.to_vec();
        for (j, &z) in self.zeta.iter().enumerate() {
            lp.add_row(self.theta.row(j).to_vec(), Relation::Ge, z);
        }
        lp
    }

    pub fn maximize(&self, objective: &[f64], tol: f64) -> Result<LpResult> {
        lp_solve(&self.lp(objective), tol)
    }

    /// `min_{u in U} coeffs . u + constant`; `-inf` when unbounded below.
    pub fn minimize_affine(&self, coeffs: &[f64], constant: f64, tol: f64) -> Result<f64> {
        let neg: Vec<f64> = coeffs.iter().map(|c| -c).collect();
        let res = self.maximize(&neg, tol)?;
        match res.status {
            LpStatus::Optimal => Ok(constant - res.value),
            LpStatus::Unbounded => Ok(f64::NEG_INFINITY),
            LpStatus::Infeasible => Err(Error::EmptyUncertaintySet),
        }
    }

    pub fn is_empty(&self, tol: f64) -> Result<bool> {
        Ok(lp_feasible(&self.lp(&vec![0.0; self.dim()]), tol)?.status == LpStatus::Infeasible)
    }

    pub fn contains(&self, u: &[f64], tol: f64) -> bool {
        (0..self.num_rows()).all(|j| {
            let lhs: f64 = self.theta.row(j).iter().zip(u).map(|(a, x)| a * x).sum();
            lhs >= self.zeta[j] - tol
        })
    }
}

/// Extension to mixed LCPs: `V z + W y + p + P u = 0` and the complementarity
/// rows gain `N y`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedExtension {
    pub v: Matrix,
    pub w: Matrix,
    pub n: Matrix,
    pub p: Vec<f64>,
    pub p_mat: Matrix,
    /// `y(u) = E u + s` when set, otherwise `y = s` is here-and-now.
    pub y_adjustable: bool,
}

impl MixedExtension {
    pub fn m(&self) -> usize {
        self.p.len()
    }
}

/// Uncertain LCP instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub m: Matrix,
    pub q: Vec<f64>,
    pub t: Matrix,
    pub uncertainty: Polyhedron,
    /// Number of leading here-and-now components of `z` (rows of `D` pinned
    /// to zero).
    pub h: usize,
    pub mixed: Option<MixedExtension>,
}

impl Instance {
    /// Builds an instance and checks every shape invariant.
    pub fn new(m: Matrix, q: Vec<f64>, t: Matrix, uncertainty: Polyhedron, h: usize) -> Result<Self> {
        let inst = Self {
            m,
            q,
            t,
            uncertainty,
            h,
            mixed: None,
        };
        inst.check_dimensions()?;
        Ok(inst)
    }

    pub fn with_mixed(mut self, mixed: MixedExtension) -> Result<Self> {
        self.mixed = Some(mixed);
        self.check_dimensions()?;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn k(&self) -> usize {
        self.t.cols()
    }

    pub fn g(&self) -> usize {
        self.uncertainty.num_rows()
    }

    pub fn check_dimensions(&self) -> Result<()> {
        let n = self.n();
        let k = self.k();
        let dim = |what: &str, got: (usize, usize), want: (usize, usize)| {
            if got == want {
                Ok(())
            } else {
                Err(Error::DimensionMismatch(format!(
                    "{what} is {}x{}, expected {}x{}",
                    got.0, got.1, want.0, want.1
                )))
            }
        };
        if n == 0 {
            return Err(Error::InvalidInstance("n must be positive".into()));
        }
        dim("M", self.m.shape(), (n, n))?;
        dim("T", self.t.shape(), (n, k))?;
        dim("Theta", self.uncertainty.theta.shape(), (self.g(), k))?;
        if self.uncertainty.zeta.len() != self.g() {
            return Err(Error::DimensionMismatch("zeta length differs from Theta rows".into()));
        }
        if self.h >= n {
            return Err(Error::InvalidInstance(format!("h = {} must be below n = {n}", self.h)));
        }
        let finite = self.m.is_finite()
            && self.t.is_finite()
            && self.uncertainty.theta.is_finite()
            && self.q.iter().chain(&self.uncertainty.zeta).all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite("instance data".into()));
        }
        if let Some(mx) = &self.mixed {
            let m = mx.m();
            dim("V", mx.v.shape(), (m, n))?;
            dim("W", mx.w.shape(), (m, m))?;
            dim("N", mx.n.shape(), (n, m))?;
            dim("P", mx.p_mat.shape(), (m, k))?;
            let finite = mx.v.is_finite()
                && mx.w.is_finite()
                && mx.n.is_finite()
                && mx.p_mat.is_finite()
                && mx.p.iter().all(|v| v.is_finite());
            if !finite {
                return Err(Error::NonFinite("mixed extension".into()));
            }
        }
        Ok(())
    }

    /// Scale used for the default export big-M.
    pub fn data_scale(&self) -> f64 {
        [
            1.0,
            self.m.norm_inf(),
            norm_inf(&self.q),
            self.t.norm_inf(),
            norm_inf(&self.uncertainty.zeta),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Affine part `y(u) = E u + s` of a mixed policy.
#[derive(Debug, Clone, PartialEq)]
pub struct YPart {
    pub e: Matrix,
    pub s: Vec<f64>,
}

/// Affine decision rule `z(u) = D u + r` with its support indicator `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    pub d: Matrix,
    pub r: Vec<f64>,
    pub x: Vec<bool>,
    pub y_part: Option<YPart>,
}

impl Policy {
    pub fn new(d: Matrix, r: Vec<f64>) -> Self {
        let x = r.iter().map(|&v| v > 0.0).collect();
        Self {
            d,
            r,
            x,
            y_part: None,
        }
    }

    /// Checks shapes and the stored invariants against `inst`:
    /// `r >= 0`, here-and-now rows of `D` zero, and `x_i = 0 => r_i <= zero`.
    pub fn check_against(&self, inst: &Instance, tol: &Tolerances) -> Result<()> {
        let (n, k) = (inst.n(), inst.k());
        if self.d.shape() != (n, k) || self.r.len() != n || self.x.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "policy shapes D {:?}, r {}, x {} do not match n = {n}, k = {k}",
                self.d.shape(),
                self.r.len(),
                self.x.len()
            )));
        }
        if !self.d.is_finite() || self.r.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("policy".into()));
        }
        if let Some(i) = self.r.iter().position(|&v| v < 0.0) {
            return Err(Error::InvalidPolicy(format!("r_{} = {} is negative", i + 1, self.r[i])));
        }
        assert_support_consistent(self, tol.zero)?;
        match (&inst.mixed, &self.y_part) {
            (None, None) => {}
            (Some(mx), Some(y)) => {
                if y.e.shape() != (mx.m(), k) || y.s.len() != mx.m() {
                    return Err(Error::DimensionMismatch("policy E/s shapes".into()));
                }
                if !mx.y_adjustable && y.e.max_abs() != 0.0 {
                    return Err(Error::InvalidPolicy("E must vanish for here-and-now y".into()));
                }
            }
            (Some(_), None) => {
                return Err(Error::InvalidPolicy("mixed instance needs E and s".into()))
            }
            (None, Some(_)) => {
                return Err(Error::InvalidPolicy("E and s given for a pure LCP".into()))
            }
        }
        Ok(())
    }

    /// Sets `r_i` in `(-inf, zero]` to exactly zero.
    pub fn truncate_small(&mut self, zero: f64) {
        for v in &mut self.r {
            if *v <= zero {
                *v = 0.0;
            }
        }
    }
}

/// The policy invariant `x_i = 0 => r_i <= zero`.
pub fn assert_support_consistent(pol: &Policy, zero: f64) -> Result<()> {
    for (i, (&xi, &ri)) in pol.x.iter().zip(&pol.r).enumerate() {
        if !xi && ri > zero {
            return Err(Error::InvalidPolicy(format!(
                "x_{} = 0 but r_{} = {ri}",
                i + 1,
                i + 1
            )));
        }
    }
    Ok(())
}
