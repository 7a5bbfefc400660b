//! Binary-free path for positive semidefinite `M`.
//!
//! For PSD `M` the nominal solution set is the polyhedron
//! `SOL(q, M) = {z >= 0 : Mz + q >= 0, q'z = q'z0, (M + M')z = (M + M')z0}`
//! for any one solution `z0`. The indices that are positive somewhere on it
//! form the set `P`, and fixing the support indicator to `P` turns the
//! mixed-integer model into a single LP.

use crate::error::{Error, Result};
use crate::linhull::LinHullBasis;
use crate::lp::{lp_solve, LpModel, LpStatus, Relation};
use crate::matrix::{dot, Matrix};
use crate::milp::{build_milp, default_big_m, solve_leaf, LeafOutcome};
use crate::model::{Instance, Policy, Tolerances};
use crate::verify::VerifyReport;

/// Whether the symmetric part of `m` is positive semidefinite, by Cholesky
/// with diagonal pivoting. Pivots below `tol * max(1, max |diag|)` count as
/// zero.
pub fn check_psd(m: &Matrix, tol: f64) -> bool {
    let n = m.rows();
    if m.cols() != n {
        return false;
    }
    let mut s = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }
    let scale = (0..n).map(|i| s[(i, i)].abs()).fold(1.0, f64::max);
    let thr = tol * scale;
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let (pos, &p) = active
            .iter()
            .enumerate()
            .max_by(|a, b| s[(*a.1, *a.1)].total_cmp(&s[(*b.1, *b.1)]))
            .expect("nonempty");
        let d = s[(p, p)];
        if d <= thr {
            // What is left must be the zero matrix up to the threshold.
            let off = thr.sqrt() * scale.sqrt();
            return active.iter().all(|&i| {
                s[(i, i)] >= -thr && active.iter().all(|&j| i == j || s[(i, j)].abs() <= off)
            });
        }
        active.swap_remove(pos);
        for &i in &active {
            let f = s[(i, p)] / d;
            for &j in &active {
                s[(i, j)] -= f * s[(p, j)];
            }
        }
    }
    true
}

/// Largest complementarity-pivoting step count before giving up.
fn lemke_limit(n: usize) -> usize {
    100 * (n + 1) * (n + 1)
}

/// Solves `LCP(q, M)` by Lemke's method with covering vector `(1, ..., 1)`
/// and a lexicographic ratio test. `None` means ray termination, which for
/// PSD `M` proves the LCP has no solution.
pub fn lemke_nominal(m: &Matrix, q: &[f64], tol: f64) -> Result<Option<Vec<f64>>> {
    let n = q.len();
    if m.shape() != (n, n) {
        return Err(Error::DimensionMismatch("M must be n x n".into()));
    }
    if !check_psd(m, tol) {
        return Err(Error::NotPsd);
    }
    if q.iter().all(|&v| v >= 0.0) {
        return Ok(Some(vec![0.0; n]));
    }

    // Columns: w (0..n), z (n..2n), z0 (2n), rhs (2n+1).
    // Rows encode w - M z - z0 e = q.
    let cols = 2 * n + 2;
    let (z0, rhs) = (2 * n, 2 * n + 1);
    let mut tab = vec![vec![0.0; cols]; n];
    for i in 0..n {
        tab[i][i] = 1.0;
        for j in 0..n {
            tab[i][n + j] = -m[(i, j)];
        }
        tab[i][z0] = -1.0;
        tab[i][rhs] = q[i];
    }
    let mut basis: Vec<usize> = (0..n).collect();

    let pivot = |tab: &mut Vec<Vec<f64>>, r: usize, c: usize| {
        let pv = tab[r][c];
        for v in tab[r].iter_mut() {
            *v /= pv;
        }
        let prow = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != r && row[c] != 0.0 {
                let f = row[c];
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= f * p;
                }
            }
        }
    };

    let first = (0..n)
        .min_by(|&a, &b| q[a].total_cmp(&q[b]))
        .expect("n > 0");
    pivot(&mut tab, first, z0);
    let mut entering = n + first; // complement of the w that left
    basis[first] = z0;

    for _ in 0..lemke_limit(n) {
        let cands: Vec<usize> = (0..n).filter(|&i| tab[i][entering] > tol).collect();
        if cands.is_empty() {
            return Ok(None);
        }
        // Lexicographic minimum of (rhs, B^-1 columns) / pivot entry; the
        // w columns of the tableau hold B^-1.
        let key = |i: usize| -> Vec<f64> {
            let a = tab[i][entering];
            std::iter::once(tab[i][rhs] / a)
                .chain((0..n).map(|c| tab[i][c] / a))
                .collect()
        };
        let mut best = cands[0];
        let mut best_key = key(best);
        for &i in &cands[1..] {
            let k = key(i);
            let ord = k
                .iter()
                .zip(&best_key)
                .map(|(a, b)| {
                    if (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0) {
                        std::cmp::Ordering::Equal
                    } else {
                        a.total_cmp(b)
                    }
                })
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal);
            if ord.is_lt() {
                best = i;
                best_key = k;
            }
        }
        // Prefer letting z0 leave on a tie in the ratio.
        if let Some(i) = cands.iter().copied().find(|&i| basis[i] == z0) {
            let ratio = tab[i][rhs] / tab[i][entering];
            if (ratio - best_key[0]).abs() <= tol * ratio.abs().max(1.0) {
                best = i;
            }
        }
        let leaving = basis[best];
        pivot(&mut tab, best, entering);
        basis[best] = entering;
        if leaving == z0 {
            let mut z = vec![0.0; n];
            for (i, &b) in basis.iter().enumerate() {
                if (n..2 * n).contains(&b) {
                    z[b - n] = tab[i][rhs].max(0.0);
                }
            }
            check_solution(m, q, &z, tol)?;
            return Ok(Some(z));
        }
        entering = if leaving < n { leaving + n } else { leaving - n };
    }
    Err(Error::NumericalFailure("Lemke pivot limit reached".into()))
}

/// Residual scale used when checking `0 <= z _|_ Mz + q >= 0`.
fn lcp_scale(m: &Matrix, q: &[f64], z: &[f64]) -> f64 {
    1.0_f64
        .max(m.max_abs())
        .max(q.iter().fold(0.0, |a, v| a.max(v.abs())))
        .max(z.iter().fold(0.0, |a, v| a.max(v.abs())))
}

fn check_solution(m: &Matrix, q: &[f64], z: &[f64], tol: f64) -> Result<()> {
    let w = m.mul_vec(z)?;
    let scale = lcp_scale(m, q, z);
    let bound = 1e3 * tol * scale * scale;
    let mut comp = 0.0;
    for i in 0..q.len() {
        let wi = w[i] + q[i];
        if z[i] < -bound || wi < -bound {
            return Err(Error::NumericalFailure(format!("nominal solution violates row {}", i + 1)));
        }
        comp += z[i] * wi;
    }
    if comp.abs() > bound * q.len() as f64 {
        return Err(Error::NumericalFailure(format!(
            "nominal complementarity residual {comp:e}"
        )));
    }
    Ok(())
}

/// The solution set of `LCP(q, M)` around a known solution `zbar`, as an LP
/// over `z` (nonnegativity as bounds).
pub fn solution_set_rows(m: &Matrix, q: &[f64], zbar: &[f64], tol: f64) -> Result<LpModel> {
    let n = q.len();
    if m.shape() != (n, n) || zbar.len() != n {
        return Err(Error::DimensionMismatch("M, q and zbar sizes differ".into()));
    }
    check_solution(m, q, zbar, tol)
        .map_err(|e| Error::Precondition(format!("zbar is not a solution: {e}")))?;
    let mut lp = LpModel::nonnegative(n);
    for i in 0..n {
        lp.add_row(m.row(i).to_vec(), Relation::Ge, -q[i]);
    }
    lp.add_row(q.to_vec(), Relation::Eq, dot(q, zbar));
    let sym = m.add(&m.transpose())?;
    let target = sym.mul_vec(zbar)?;
    for i in 0..n {
        lp.add_row(sym.row(i).to_vec(), Relation::Eq, target[i]);
    }
    Ok(lp)
}

/// Indices `i` with `max z_i > zero` over `SOL(q, M)`; unbounded counts.
/// Also returns the number of LPs solved.
pub fn compute_support_p(
    m: &Matrix,
    q: &[f64],
    zbar: &[f64],
    tol: &Tolerances,
) -> Result<(Vec<usize>, usize)> {
    let mut lp = solution_set_rows(m, q, zbar, tol.zero)?;
    let n = q.len();
    let mut support = Vec::new();
    for i in 0..n {
        lp.objective = vec![0.0; n];
        lp.objective[i] = 1.0;
        let res = lp_solve(&lp, tol.lp())?;
        match res.status {
            LpStatus::Unbounded => support.push(i),
            LpStatus::Optimal if res.value > tol.zero => support.push(i),
            LpStatus::Optimal => {}
            LpStatus::Infeasible => {
                return Err(Error::NumericalFailure(
                    "solution set LP infeasible at a known solution".into(),
                ))
            }
        }
    }
    Ok((support, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdStatus {
    Feasible,
    Infeasible,
    NotPsd,
    /// The single LP was feasible but its policy failed verification.
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub struct PsdReport {
    pub is_psd: bool,
    pub nominal: Option<Vec<f64>>,
    /// Zero-based indices of `P`.
    pub support_p: Vec<usize>,
    pub policy: Option<Policy>,
    pub verification: Option<VerifyReport>,
    pub status: PsdStatus,
    pub lp_calls: usize,
}

/// Solves a pure instance with PSD `M` by one LP. Non-PSD `M` yields a
/// `NotPsd` report rather than an error.
pub fn psd_solve(inst: &Instance, basis: &LinHullBasis, tol: &Tolerances) -> Result<PsdReport> {
    inst.check_dimensions()?;
    if inst.mixed.is_some() {
        return Err(Error::Precondition("the PSD path handles pure LCPs only".into()));
    }
    let mut report = PsdReport {
        is_psd: check_psd(&inst.m, tol.zero),
        nominal: None,
        support_p: Vec::new(),
        policy: None,
        verification: None,
        status: PsdStatus::NotPsd,
        lp_calls: 0,
    };
    if !report.is_psd {
        return Ok(report);
    }
    let Some(zbar) = lemke_nominal(&inst.m, &inst.q, tol.zero)? else {
        report.status = PsdStatus::Infeasible;
        return Ok(report);
    };
    let (support, calls) = compute_support_p(&inst.m, &inst.q, &zbar, tol)?;
    report.nominal = Some(zbar);
    report.lp_calls += calls;
    let mut x = vec![false; inst.n()];
    for &i in &support {
        x[i] = true;
    }
    report.support_p = support;
    let model = build_milp(inst, basis, default_big_m(inst))?;
    let (outcome, calls) = solve_leaf(inst, basis, &model, &x, tol)?;
    report.lp_calls += calls;
    match outcome {
        LeafOutcome::Verified(pol, rep) => {
            report.status = PsdStatus::Feasible;
            report.policy = Some(pol);
            report.verification = Some(rep);
        }
        LeafOutcome::Infeasible => report.status = PsdStatus::Infeasible,
        LeafOutcome::Rejected(rep) => {
            report.status = PsdStatus::NumericalFailure;
            report.verification = Some(rep);
        }
    }
    Ok(report)
}
