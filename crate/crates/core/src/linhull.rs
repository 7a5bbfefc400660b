//! Basis of the linear hull of a polyhedral uncertainty set.
//!
//! Each row `Theta_j u >= zeta_j` is maximized over U. Rows whose maximum is
//! `zeta_j` hold with equality everywhere on U; they form `Phi`, and because
//! the origin lies in the relative interior, `lin(U) = ker(Phi)`.

use crate::error::{Error, Result};
use crate::lp::LpStatus;
use crate::matrix::{rref_kernel_basis, Matrix};
use crate::model::{Instance, Polyhedron};
use crate::validate::is_tight;

#[derive(Debug, Clone, PartialEq)]
pub struct LinHullBasis {
    /// Basis vectors of lin(U), unit infinity norm, ordered by RREF free column.
    pub vectors: Vec<Vec<f64>>,
    /// Implicit equality rows of `Theta`.
    pub phi: Matrix,
    pub equality_rows: Vec<usize>,
    pub inequality_rows: Vec<usize>,
}

impl LinHullBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Standard basis of `R^k`, used when U is full-dimensional.
    pub fn full(k: usize) -> Self {
        let vectors = (0..k)
            .map(|j| {
                let mut v = vec![0.0; k];
                v[j] = 1.0;
                v
            })
            .collect();
        Self {
            vectors,
            phi: Matrix::zeros(0, k),
            equality_rows: Vec::new(),
            inequality_rows: Vec::new(),
        }
    }
}

pub fn compute_lin_hull(inst: &Instance, tol: f64) -> Result<LinHullBasis> {
    inst.check_dimensions()?;
    lin_hull_of(&inst.uncertainty, tol)
}

pub fn lin_hull_of(u: &Polyhedron, tol: f64) -> Result<LinHullBasis> {
    let k = u.dim();
    if u.is_empty(tol)? {
        return Err(Error::EmptyUncertaintySet);
    }
    for j in 0..k {
        for sign in [1.0, -1.0] {
            let mut dir = vec![0.0; k];
            dir[j] = sign;
            if u.maximize(&dir, tol)?.status == LpStatus::Unbounded {
                return Err(Error::NotCompact(format!("u{} is unbounded", j + 1)));
            }
        }
    }
    let mut equality_rows = Vec::new();
    let mut inequality_rows = Vec::new();
    for (j, &zeta) in u.zeta.iter().enumerate() {
        let res = u.maximize(u.theta.row(j), tol)?;
        match res.status {
            LpStatus::Optimal if is_tight(res.value, zeta, tol) => {
                if zeta.abs() > tol {
                    return Err(Error::RelintViolation(format!(
                        "row {} holds with equality but zeta = {zeta}",
                        j + 1
                    )));
                }
                equality_rows.push(j);
            }
            LpStatus::Optimal => inequality_rows.push(j),
            LpStatus::Unbounded => {
                return Err(Error::NotCompact(format!("direction of row {} is unbounded", j + 1)))
            }
            LpStatus::Infeasible => return Err(Error::EmptyUncertaintySet),
        }
    }
    let rows: Vec<Vec<f64>> = equality_rows.iter().map(|&j| u.theta.row(j).to_vec()).collect();
    let phi = Matrix::from_rows(k, &rows)?;
    let vectors = rref_kernel_basis(&phi, tol);
    Ok(LinHullBasis {
        vectors,
        phi,
        equality_rows,
        inequality_rows,
    })
}
