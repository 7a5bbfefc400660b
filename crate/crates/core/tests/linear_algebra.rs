use aarlcp::lp::{lp_solve, LpModel, LpStatus, Relation};
use aarlcp::matrix::{rank, rref_kernel_basis, Matrix};
use approx::assert_abs_diff_eq;
use proptest::prelude::*;

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3i32..=3, rows * cols).prop_map(move |v| {
        Matrix::from_row_major(rows, cols, v.into_iter().map(f64::from).collect()).unwrap()
    })
}

fn sized_matrix() -> impl Strategy<Value = Matrix> {
    (0usize..5, 1usize..6).prop_flat_map(|(r, c)| int_matrix(r, c))
}

/// Maximum of `c.x` over `{x in R^2 : A x >= b}` by enumerating all
/// intersections of two boundary lines. Assumes the region is bounded.
fn vertex_max(rows: &[(f64, f64, f64)], c: (f64, f64)) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (i, &(a1, b1, r1)) in rows.iter().enumerate() {
        for &(a2, b2, r2) in &rows[i + 1..] {
            let det = a1 * b2 - a2 * b1;
            if det.abs() < 1e-12 {
                continue;
            }
            let x = (r1 * b2 - r2 * b1) / det;
            let y = (a1 * r2 - a2 * r1) / det;
            if rows.iter().all(|&(a, b, r)| a * x + b * y >= r - 1e-9) {
                let v = c.0 * x + c.1 * y;
                best = Some(best.map_or(v, |w: f64| w.max(v)));
            }
        }
    }
    best
}

fn planar_lp(rows: &[(f64, f64, f64)], c: (f64, f64)) -> LpModel {
    let mut lp = LpModel::new(2);
    lp.objective = vec![c.0, c.1];
    for &(a, b, r) in rows {
        lp.add_row(vec![a, b], Relation::Ge, r);
    }
    lp
}

fn planar_rows() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((-3i32..=3, -3i32..=3, -6i32..=2), 0..6).prop_map(|extra| {
        // The box [-4, 4]^2 keeps every instance bounded.
        let mut rows = vec![
            (1.0, 0.0, -4.0),
            (-1.0, 0.0, -4.0),
            (0.0, 1.0, -4.0),
            (0.0, -1.0, -4.0),
        ];
        rows.extend(extra.into_iter().map(|(a, b, r)| (a as f64, b as f64, r as f64)));
        rows
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_vectors_are_annihilated(a in sized_matrix()) {
        let basis = rref_kernel_basis(&a, 1e-9);
        prop_assert_eq!(basis.len() + rank(&a, 1e-9), a.cols());
        let scale = a.max_abs().max(1.0);
        for v in &basis {
            let inf = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            assert_abs_diff_eq!(inf, 1.0, epsilon = 1e-12);
            for r in 0..a.rows() {
                let av: f64 = a.row(r).iter().zip(v).map(|(x, y)| x * y).sum();
                prop_assert!(av.abs() <= 1e-9 * scale * a.cols() as f64);
            }
        }
        // Basis vectors are independent.
        if !basis.is_empty() {
            let stacked = Matrix::from_rows(a.cols(), &basis).unwrap();
            prop_assert_eq!(rank(&stacked, 1e-9), basis.len());
        }
    }

    #[test]
    fn simplex_matches_vertex_enumeration(rows in planar_rows(), c in (-3i32..=3, -3i32..=3)) {
        let c = (c.0 as f64, c.1 as f64);
        let res = lp_solve(&planar_lp(&rows, c), 1e-9).unwrap();
        match vertex_max(&rows, c) {
            None => prop_assert_eq!(res.status, LpStatus::Infeasible),
            Some(best) => {
                prop_assert_eq!(res.status, LpStatus::Optimal);
                assert_abs_diff_eq!(res.value, best, epsilon = 1e-7);
                prop_assert!(planar_lp(&rows, c).max_violation(&res.point) <= 1e-7);
            }
        }
    }

    #[test]
    fn row_order_does_not_matter(rows in planar_rows(), c in (-3i32..=3, -3i32..=3), rot in 0usize..10) {
        let c = (c.0 as f64, c.1 as f64);
        let a = lp_solve(&planar_lp(&rows, c), 1e-9).unwrap();
        let mut rotated = rows.clone();
        let len = rotated.len();
        rotated.rotate_left(rot % len);
        rotated.reverse();
        let b = lp_solve(&planar_lp(&rotated, c), 1e-9).unwrap();
        prop_assert_eq!(a.status, b.status);
        if a.status == LpStatus::Optimal {
            assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-7);
        }
    }
}

#[test]
fn unbounded_direction_is_reported() {
    let lp = planar_lp(&[(1.0, 0.0, 0.0), (0.0, 1.0, 0.0)], (1.0, 1.0));
    assert_eq!(lp_solve(&lp, 1e-9).unwrap().status, LpStatus::Unbounded);
}
