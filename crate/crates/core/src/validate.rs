//! Checks an instance against the standing assumptions on the uncertainty
//! set: nonempty, compact, and containing the origin in its relative interior.

use std::fmt;

use crate::error::{Error, Result};
use crate::lp::LpStatus;
use crate::matrix::rank;
use crate::model::Instance;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub compact: bool,
    pub zero_in_relint: bool,
    pub t_full_column_rank: bool,
    /// Zero-based rows of `Theta u >= zeta` that hold with equality on all of U.
    pub implicit_equality_rows: Vec<usize>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    /// Whether the instance satisfies the assumptions the solvers rely on.
    /// Rank deficiency of `T` is only a warning.
    pub fn passed(&self) -> bool {
        self.compact && self.zero_in_relint
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "compact: {}", yn(self.compact))?;
        writeln!(f, "zero in relative interior: {}", yn(self.zero_in_relint))?;
        writeln!(f, "T full column rank: {}", yn(self.t_full_column_rank))?;
        let rows: Vec<String> = self
            .implicit_equality_rows
            .iter()
            .map(|r| (r + 1).to_string())
            .collect();
        writeln!(f, "implicit equality rows: {{{}}}", rows.join(","))?;
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Relative test for "row maximum equals zeta_j".
pub(crate) fn is_tight(max: f64, zeta: f64, tol: f64) -> bool {
    (max - zeta).abs() <= tol * zeta.abs().max(1.0)
}

pub fn validate(inst: &Instance, tol: f64) -> Result<ValidationReport> {
    inst.check_dimensions()?;
    let u = &inst.uncertainty;
    let k = inst.k();
    if u.is_empty(tol)? {
        return Err(Error::EmptyUncertaintySet);
    }
    let mut warnings = Vec::new();

    let mut compact = true;
    'coords: for j in 0..k {
        for sign in [1.0, -1.0] {
            let mut dir = vec![0.0; k];
            dir[j] = sign;
            if u.maximize(&dir, tol)?.status == LpStatus::Unbounded {
                compact = false;
                warnings.push(format!("not compact: u{} is unbounded", j + 1));
                break 'coords;
            }
        }
    }

    let mut implicit = Vec::new();
    let mut zero_in_relint = true;
    for (j, &zeta) in u.zeta.iter().enumerate() {
        let res = u.maximize(u.theta.row(j), tol)?;
        let tight = res.status == LpStatus::Optimal && is_tight(res.value, zeta, tol);
        if tight {
            implicit.push(j);
            if zeta.abs() > tol {
                zero_in_relint = false;
                warnings.push(format!(
                    "row {} is an implicit equality with zeta = {zeta} != 0",
                    j + 1
                ));
            }
        } else if zeta > -tol {
            zero_in_relint = false;
            let why = if zeta > tol { "0 violates" } else { "0 lies on" };
            warnings.push(format!("{why} row {} (zeta = {zeta})", j + 1));
        }
    }

    let t_full_column_rank = rank(&inst.t, tol) == k;
    if !t_full_column_rank {
        warnings.push("T rank-deficient".into());
    }

    Ok(ValidationReport {
        compact,
        zero_in_relint,
        t_full_column_rank,
        implicit_equality_rows: implicit,
        warnings,
    })
}
