//! Small named instances and seeded random generators used by the test
//! suites and the command-line demos.

use rand::Rng;

use crate::linhull::lin_hull_of;
use crate::matrix::Matrix;
use crate::model::{Instance, MixedExtension, Polyhedron, Policy};

fn mat(cols: usize, rows: &[&[f64]]) -> Matrix {
    let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    Matrix::from_rows(cols, &rows).expect("sample shapes are consistent")
}

fn instance(m: Matrix, q: Vec<f64>, t: Matrix, u: Polyhedron) -> Instance {
    Instance::new(m, q, t, u, 0).expect("sample instance is well formed")
}

/// `M = [[1,-1],[1,-1]]` (singular), `q = (-1,-1)`, `T = I`, and
/// `U = {-2 <= u1 = u2 <= 2}`.
pub fn coupled_singular() -> Instance {
    let theta = mat(2, &[&[1.0, -1.0], &[-1.0, 1.0], &[1.0, 0.0], &[-1.0, 0.0]]);
    let u = Polyhedron::new(theta, vec![0.0, 0.0, -2.0, -2.0]).unwrap();
    instance(
        mat(2, &[&[1.0, -1.0], &[1.0, -1.0]]),
        vec![-1.0, -1.0],
        Matrix::identity(2),
        u,
    )
}

/// A known robust policy for [`coupled_singular`].
pub fn coupled_policy() -> Policy {
    Policy::new(mat(2, &[&[-1.0, 0.0], &[0.0, 0.0]]), vec![2.0, 1.0])
}

/// `M = [2]`, `q = [-4]`, `T = [1]`, `U = [-1, 1]`; solved by `z(u) = 2 - u/2`.
pub fn one_dim() -> Instance {
    instance(
        Matrix::identity(1).scale(2.0),
        vec![-4.0],
        Matrix::identity(1),
        Polyhedron::cube(1, 1.0),
    )
}

/// `M = [[0,0],[1,0]]`, `T = (1,1)^T`, `U = {0}`: a single scenario folded
/// into the nominal data `q`.
pub fn scenario(q1: f64, q2: f64) -> Instance {
    instance(
        mat(2, &[&[0.0, 0.0], &[1.0, 0.0]]),
        vec![q1, q2],
        mat(1, &[&[1.0], &[1.0]]),
        Polyhedron::origin(1),
    )
}

/// Positive semidefinite `M = diag(2, 0)`, `q = (-2, 1)`, `T = I`,
/// `U = [-1/2, 1/2]^2`.
pub fn psd_desk() -> Instance {
    instance(
        mat(2, &[&[2.0, 0.0], &[0.0, 0.0]]),
        vec![-2.0, 1.0],
        Matrix::identity(2),
        Polyhedron::cube(2, 0.5),
    )
}

/// One-dimensional mixed instance on top of [`one_dim`] with `W = [1]`,
/// `p = [-3]`, `V = P = 0`; `N = [coupling]` feeds `y` into the LCP row.
pub fn mixed_one_dim(coupling: f64, y_adjustable: bool) -> Instance {
    let ext = MixedExtension {
        v: Matrix::zeros(1, 1),
        w: Matrix::identity(1),
        n: Matrix::identity(1).scale(coupling),
        p: vec![-3.0],
        p_mat: Matrix::zeros(1, 1),
        y_adjustable,
    };
    one_dim().with_mixed(ext).unwrap()
}

/// `mixed_one_dim` with `y` decoupled from `z`.
pub fn mixed_decoupled() -> Instance {
    mixed_one_dim(0.0, false)
}

/// `mixed_one_dim` with `N = [1]`.
pub fn mixed_coupled() -> Instance {
    mixed_one_dim(1.0, false)
}

fn int(rng: &mut impl Rng, lo: i32, hi: i32) -> f64 {
    rng.gen_range(lo..=hi) as f64
}

fn int_matrix(rng: &mut impl Rng, rows: usize, cols: usize, lo: i32, hi: i32) -> Matrix {
    let data = (0..rows * cols).map(|_| int(rng, lo, hi)).collect();
    Matrix::from_row_major(rows, cols, data).unwrap()
}

fn int_vec(rng: &mut impl Rng, len: usize, lo: i32, hi: i32) -> Vec<f64> {
    (0..len).map(|_| int(rng, lo, hi)).collect()
}

/// Box `prod [-a_j, b_j]` with half-widths drawn from `{1/2, 1, 3/2, 2}`.
pub fn random_box(rng: &mut impl Rng, k: usize) -> Polyhedron {
    let ranges: Vec<(f64, f64)> = (0..k)
        .map(|_| (-int(rng, 1, 4) / 2.0, int(rng, 1, 4) / 2.0))
        .collect();
    Polyhedron::boxed(&ranges)
}

/// Bounded polytope with at most `g_max` rows and the origin in its
/// interior. Small integer rows with `zeta < 0`; redrawn until compact.
pub fn random_polytope(rng: &mut impl Rng, k: usize, g_max: usize) -> Polyhedron {
    assert!(g_max > k, "a bounded polytope in R^k needs more than k rows");
    loop {
        let g = rng.gen_range(k + 1..=g_max);
        let theta = int_matrix(rng, g, k, -2, 2);
        let zeta = (0..g).map(|_| -int(rng, 1, 3)).collect();
        let u = Polyhedron::new(theta, zeta).unwrap();
        if lin_hull_of(&u, 1e-9).is_ok() {
            return u;
        }
    }
}

/// `{u : u_1 = u_2 = ... = u_k, |u_1| <= c}`, a line segment through the
/// origin written with coupling inequalities in both directions.
pub fn random_segment(rng: &mut impl Rng, k: usize) -> Polyhedron {
    let mut rows = Vec::new();
    let mut zeta = Vec::new();
    for j in 1..k {
        let mut e = vec![0.0; k];
        e[0] = 1.0;
        e[j] = -1.0;
        rows.push(e.clone());
        rows.push(e.iter().map(|v| -v).collect());
        zeta.extend([0.0, 0.0]);
    }
    let c = int(rng, 1, 4) / 2.0;
    let mut e = vec![0.0; k];
    e[0] = 1.0;
    rows.push(e.clone());
    e[0] = -1.0;
    rows.push(e);
    zeta.extend([-c, -c]);
    Polyhedron::new(Matrix::from_rows(k, &rows).unwrap(), zeta).unwrap()
}

/// An uncertainty set with `k` columns and at most `g_max` rows: a box, a
/// general polytope, or (for `k >= 2`, when rows allow) a segment.
pub fn random_uncertainty(rng: &mut impl Rng, k: usize, g_max: usize) -> Polyhedron {
    let seg_rows = 2 * k;
    match rng.gen_range(0..3) {
        0 if 2 * k <= g_max => random_box(rng, k),
        1 if k >= 2 && seg_rows <= g_max => random_segment(rng, k),
        _ => random_polytope(rng, k, g_max),
    }
}

/// Small uncertain LCP: `n <= n_max`, `k <= k_max`, `g <= g_max`, integer
/// data in `[-3, 3]`.
pub fn random_instance(rng: &mut impl Rng, n_max: usize, k_max: usize, g_max: usize) -> Instance {
    let n = rng.gen_range(1..=n_max);
    let k = rng.gen_range(1..=k_max);
    let u = random_uncertainty(rng, k, g_max);
    let h = if rng.gen_bool(0.2) { rng.gen_range(0..n) } else { 0 };
    Instance::new(
        int_matrix(rng, n, n, -3, 3),
        int_vec(rng, n, -3, 3),
        int_matrix(rng, n, k, -2, 2),
        u,
        h,
    )
    .unwrap()
}

/// Instance with `M = G^T G` for an integer `G`, so `M` is positive
/// semidefinite (and often singular).
pub fn random_psd_instance(rng: &mut impl Rng, n_max: usize, k_max: usize) -> Instance {
    let n = rng.gen_range(1..=n_max);
    let k = rng.gen_range(1..=k_max);
    let rank = rng.gen_range(1..=n);
    let g = int_matrix(rng, rank, n, -2, 2);
    let m = g.transpose().mul(&g).unwrap();
    let u = random_uncertainty(rng, k, 2 * k + 2);
    Instance::new(m, int_vec(rng, n, -3, 3), int_matrix(rng, n, k, -1, 1), u, 0).unwrap()
}

/// Mixed instance with `n, m <= 2`, `k <= 2` and non-adjustable `y`.
pub fn random_mixed_instance(rng: &mut impl Rng) -> Instance {
    let n = rng.gen_range(1..=2);
    let m = rng.gen_range(1..=2);
    let k = rng.gen_range(1..=2);
    let base = Instance::new(
        int_matrix(rng, n, n, -2, 2),
        int_vec(rng, n, -3, 3),
        int_matrix(rng, n, k, -1, 1),
        random_uncertainty(rng, k, 2 * k + 1),
        0,
    )
    .unwrap();
    let ext = MixedExtension {
        v: int_matrix(rng, m, n, -1, 1),
        w: int_matrix(rng, m, m, -1, 1),
        n: int_matrix(rng, n, m, -1, 1),
        p: int_vec(rng, m, -2, 2),
        p_mat: int_matrix(rng, m, k, -1, 1),
        y_adjustable: false,
    };
    base.with_mixed(ext).unwrap()
}

/// `n = 10`, `k = 4`, `g = 10` instance: a box on the first three
/// coordinates plus four cuts bounding the fourth and the diagonal.
pub fn random_scale_instance(rng: &mut impl Rng) -> Instance {
    let (n, k) = (10, 4);
    let mut rows = Vec::new();
    let mut zeta = Vec::new();
    for j in 0..3 {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; k];
            e[j] = s;
            rows.push(e);
            zeta.push(-1.0);
        }
    }
    for s in [1.0, -1.0] {
        let mut e = vec![0.0; k];
        e[3] = s;
        rows.push(e);
        zeta.push(-1.0);
        let mut e: Vec<f64> = (0..k).map(|_| s * int(rng, 0, 1)).collect();
        e[3] = s;
        rows.push(e);
        zeta.push(-2.0);
    }
    let u = Polyhedron::new(Matrix::from_rows(k, &rows).unwrap(), zeta).unwrap();
    Instance::new(
        int_matrix(rng, n, n, -3, 3),
        int_vec(rng, n, -5, 5),
        int_matrix(rng, n, k, -1, 1),
        u,
        0,
    )
    .unwrap()
}

/// Random `(D, r)` for an instance, with entries of `D` in `[-1, 1]` and
/// `r` in `[0, 2]` on a half-integer grid, so that both signs of the
/// robust nonnegativity test occur.
pub fn random_policy(rng: &mut impl Rng, inst: &Instance) -> Policy {
    let (n, k) = (inst.n(), inst.k());
    let d = Matrix::from_row_major(n, k, (0..n * k).map(|_| int(rng, -2, 2) / 2.0).collect())
        .unwrap();
    let r = (0..n).map(|_| int(rng, 0, 4) / 2.0).collect();
    Policy::new(d, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::validate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_sets_satisfy_assumptions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let inst = random_instance(&mut rng, 4, 2, 6);
            assert!(inst.g() <= 6);
            assert!(validate(&inst, 1e-9).unwrap().passed());
            let psd = random_psd_instance(&mut rng, 5, 2);
            assert!(validate(&psd, 1e-9).unwrap().passed());
            let mixed = random_mixed_instance(&mut rng);
            assert!(validate(&mixed, 1e-9).unwrap().passed());
        }
        let big = random_scale_instance(&mut rng);
        assert_eq!((big.n(), big.k(), big.g()), (10, 4, 10));
        assert!(validate(&big, 1e-9).unwrap().passed());
    }

    #[test]
    fn fixed_samples_are_well_formed() {
        for inst in [
            coupled_singular(),
            one_dim(),
            scenario(0.5, -0.5),
            psd_desk(),
            mixed_decoupled(),
            mixed_coupled(),
        ] {
            inst.check_dimensions().unwrap();
        }
        let seg = random_segment(&mut ChaCha8Rng::seed_from_u64(1), 3);
        assert_eq!(lin_hull_of(&seg, 1e-9).unwrap().dim(), 1);
    }
}
