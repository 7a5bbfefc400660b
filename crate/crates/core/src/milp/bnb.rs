//! Depth-first branch-and-bound over the support indicator `x`.
//!
//! Node LPs use exact indicator rows: fixing `x_i = 1` adds the nominal and
//! directional complementarity equalities for row `i`, fixing `x_i = 0` adds
//! `r_i = 0`, and unfixed indices contribute nothing. A node is pruned only
//! when its LP is infeasible, so reporting `Infeasible` requires exhausting
//! the tree.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use super::{build_milp, default_big_m, leaf_from_point, LeafOutcome, MilpModel};
use crate::error::{Error, Result};
use crate::linhull::LinHullBasis;
use crate::lp::{lp_feasible, LpStatus};
use crate::model::{Instance, Policy, Tolerances};
use crate::verify::VerifyReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Feasible,
    Infeasible,
    /// Leaves were LP-feasible but none survived verification, so neither
    /// feasibility nor infeasibility is certified.
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub policy: Option<Policy>,
    pub nodes_explored: usize,
    pub lp_calls: usize,
    pub verification: Option<VerifyReport>,
    pub tolerances: Tolerances,
}

impl SolveReport {
    pub fn is_feasible(&self) -> bool {
        self.status == SolveStatus::Feasible
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branching {
    /// Largest `r_i` in the node LP solution first.
    Heuristic,
    /// Smallest unfixed index first.
    IndexOrder,
}

#[derive(Debug, Clone)]
pub struct BnbOptions {
    pub tol: Tolerances,
    /// Defaults to [`default_node_limit`].
    pub node_limit: Option<usize>,
    pub branching: Branching,
    pub parallel: bool,
}

impl Default for BnbOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            node_limit: None,
            branching: Branching::Heuristic,
            parallel: false,
        }
    }
}

/// Room for the complete binary tree over `min(n, 20)` indicators.
pub fn default_node_limit(n: usize) -> usize {
    1 << (n.min(20) + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    pub fixed: Vec<Option<bool>>,
    pub depth: usize,
}

impl NodeState {
    pub fn root(n: usize) -> Self {
        Self {
            fixed: vec![None; n],
            depth: 0,
        }
    }

    pub fn child(&self, i: usize, value: bool) -> Self {
        debug_assert!(self.fixed[i].is_none());
        let mut fixed = self.fixed.clone();
        fixed[i] = Some(value);
        Self {
            fixed,
            depth: self.depth + 1,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.depth == self.fixed.len()
    }
}

enum Expansion {
    Pruned,
    Found(Box<(Policy, VerifyReport)>),
    Rejected,
    Children(NodeState, NodeState),
}

struct Search<'a> {
    inst: &'a Instance,
    basis: &'a LinHullBasis,
    model: MilpModel,
    opts: &'a BnbOptions,
    limit: usize,
    nodes: AtomicUsize,
    lp_calls: AtomicUsize,
    rejected: AtomicUsize,
    stop: AtomicBool,
}

impl Search<'_> {
    fn expand(&self, node: &NodeState) -> Result<Expansion> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.limit {
            return Err(Error::NodeLimit { limit: self.limit });
        }
        let tol = &self.opts.tol;
        let res = lp_feasible(&self.model.node_lp(&node.fixed), tol.lp())?;
        self.lp_calls.fetch_add(1, Ordering::Relaxed);
        if res.status != LpStatus::Optimal {
            return Ok(Expansion::Pruned);
        }
        if node.is_leaf() {
            let x = node.fixed.iter().map(|f| f.unwrap_or(false)).collect();
            let (outcome, calls) =
                leaf_from_point(self.inst, self.basis, &self.model, &res.point, x, tol)?;
            self.lp_calls.fetch_add(calls, Ordering::Relaxed);
            return Ok(match outcome {
                LeafOutcome::Verified(pol, rep) => Expansion::Found(Box::new((pol, rep))),
                _ => {
                    self.rejected.fetch_add(1, Ordering::Relaxed);
                    Expansion::Rejected
                }
            });
        }
        let lay = self.model.layout;
        let unfixed = (0..lay.n).filter(|&i| node.fixed[i].is_none());
        let r_hat = |i: usize| res.point[lay.r(i)];
        let pick = match self.opts.branching {
            Branching::IndexOrder => unfixed.min(),
            // max_by keeps the last maximum; iterate in reverse so ties go
            // to the smallest index.
            Branching::Heuristic => unfixed
                .rev()
                .max_by(|&a, &b| r_hat(a).total_cmp(&r_hat(b))),
        };
        let i = pick.expect("non-leaf node has an unfixed index");
        let first = r_hat(i) > tol.zero;
        Ok(Expansion::Children(node.child(i, first), node.child(i, !first)))
    }

    fn dfs(&self, start: NodeState) -> Result<Option<(Policy, VerifyReport)>> {
        let mut stack = vec![start];
        while let Some(node) = stack.pop() {
            if self.stop.load(Ordering::Relaxed) {
                return Ok(None);
            }
            match self.expand(&node)? {
                Expansion::Found(found) => {
                    self.stop.store(true, Ordering::Relaxed);
                    return Ok(Some(*found));
                }
                Expansion::Children(first, second) => {
                    stack.push(second);
                    stack.push(first);
                }
                Expansion::Pruned | Expansion::Rejected => {}
            }
        }
        Ok(None)
    }

    fn parallel(&self) -> Result<Option<(Policy, VerifyReport)>> {
        let target = 2 * rayon::current_num_threads().max(2);
        let mut frontier = std::collections::VecDeque::from([NodeState::root(self.inst.n())]);
        while frontier.len() < target {
            let Some(node) = frontier.pop_front() else { break };
            if node.is_leaf() {
                frontier.push_front(node);
                break;
            }
            match self.expand(&node)? {
                Expansion::Found(found) => return Ok(Some(*found)),
                Expansion::Children(a, b) => {
                    frontier.push_back(a);
                    frontier.push_back(b);
                }
                Expansion::Pruned | Expansion::Rejected => {}
            }
        }
        let results: Vec<Result<Option<(Policy, VerifyReport)>>> =
            frontier.into_par_iter().map(|node| self.dfs(node)).collect();
        let mut first_err = None;
        for res in results {
            match res {
                Ok(Some(found)) => return Ok(Some(found)),
                Ok(None) => {}
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        match first_err {
            Some(e) => Err(e),
            None => Ok(None),
        }
    }
}

/// Searches for an affine robust policy. `Feasible` reports carry a policy
/// that passed [`crate::verify::verify_policy`]; `Infeasible` certifies that
/// none exists.
pub fn bnb_solve(inst: &Instance, basis: &LinHullBasis, opts: &BnbOptions) -> Result<SolveReport> {
    let model = build_milp(inst, basis, default_big_m(inst))?;
    let search = Search {
        inst,
        basis,
        model,
        opts,
        limit: opts.node_limit.unwrap_or_else(|| default_node_limit(inst.n())),
        nodes: AtomicUsize::new(0),
        lp_calls: AtomicUsize::new(0),
        rejected: AtomicUsize::new(0),
        stop: AtomicBool::new(false),
    };
    let found = if opts.parallel {
        search.parallel()?
    } else {
        search.dfs(NodeState::root(inst.n()))?
    };
    let status = match (&found, search.rejected.load(Ordering::Relaxed)) {
        (Some(_), _) => SolveStatus::Feasible,
        (None, 0) => SolveStatus::Infeasible,
        (None, _) => SolveStatus::NumericalFailure,
    };
    let (policy, verification) = match found {
        Some((p, v)) => (Some(p), Some(v)),
        None => (None, None),
    };
    Ok(SolveReport {
        status,
        policy,
        nodes_explored: search.nodes.load(Ordering::Relaxed),
        lp_calls: search.lp_calls.load(Ordering::Relaxed),
        verification,
        tolerances: opts.tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhull::compute_lin_hull;
    use crate::samples;

    fn solve(inst: &Instance, opts: &BnbOptions) -> SolveReport {
        let basis = compute_lin_hull(inst, 1e-9).unwrap();
        bnb_solve(inst, &basis, opts).unwrap()
    }

    #[test]
    fn one_dim_policy() {
        let rep = solve(&samples::one_dim(), &BnbOptions::default());
        assert_eq!(rep.status, SolveStatus::Feasible);
        let pol = rep.policy.unwrap();
        assert_eq!(pol.x, vec![true]);
        assert!((pol.r[0] - 2.0).abs() < 1e-9);
        assert!((pol.d[(0, 0)] + 0.5).abs() < 1e-9);
    }

    #[test]
    fn coupled_singular_example_is_feasible() {
        let inst = samples::coupled_singular();
        assert_eq!(inst.m.determinant().unwrap(), 0.0);
        let rep = solve(&inst, &BnbOptions::default());
        assert_eq!(rep.status, SolveStatus::Feasible);
        assert!(rep.verification.unwrap().is_verified());
    }

    #[test]
    fn infeasible_scenario() {
        let rep = solve(&samples::scenario(0.5, -0.5), &BnbOptions::default());
        assert_eq!(rep.status, SolveStatus::Infeasible);
        assert!(rep.policy.is_none());
        assert!(rep.nodes_explored >= 3);
    }

    #[test]
    fn branching_rules_and_parallel_agree() {
        for inst in [
            samples::one_dim(),
            samples::coupled_singular(),
            samples::scenario(2.0, 1.0),
            samples::scenario(0.0, -1.0),
            samples::scenario(0.5, -0.5),
        ] {
            let base = solve(&inst, &BnbOptions::default()).status;
            let by_index = BnbOptions {
                branching: Branching::IndexOrder,
                ..BnbOptions::default()
            };
            assert_eq!(solve(&inst, &by_index).status, base);
            let par = BnbOptions {
                parallel: true,
                ..BnbOptions::default()
            };
            assert_eq!(solve(&inst, &par).status, base);
        }
    }

    #[test]
    fn node_limit_is_an_error() {
        let inst = samples::scenario(0.5, -0.5);
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let opts = BnbOptions {
            node_limit: Some(2),
            ..BnbOptions::default()
        };
        assert_eq!(
            bnb_solve(&inst, &basis, &opts).unwrap_err(),
            Error::NodeLimit { limit: 2 }
        );
    }

    #[test]
    fn node_state_depth_tracks_fixings() {
        let root = NodeState::root(3);
        let c = root.child(1, true).child(0, false);
        assert_eq!(c.depth, 2);
        assert_eq!(c.fixed, vec![Some(false), Some(true), None]);
        assert!(!c.is_leaf());
        assert!(c.child(2, true).is_leaf());
    }
}
