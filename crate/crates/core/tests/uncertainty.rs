use aarlcp::matrix::{rank, Matrix};
use aarlcp::{lin_hull_of, samples, validate, Error, Instance, Polyhedron};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scaled(u: &Polyhedron, factor: f64) -> Polyhedron {
    Polyhedron::new(u.theta.clone(), u.zeta.iter().map(|z| z * factor).collect()).unwrap()
}

fn random_set(seed: u64) -> Polyhedron {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = 1 + (seed % 3) as usize;
    samples::random_uncertainty(&mut rng, k, 2 * k + 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn basis_directions_stay_inside(seed in any::<u64>()) {
        let u = random_set(seed);
        let b = lin_hull_of(&u, 1e-9).unwrap();
        prop_assert_eq!(b.dim() + rank(&b.phi, 1e-9), u.dim());
        // 0 in relint: a small step along every basis direction stays in U.
        for v in &b.vectors {
            for s in [1e-3, -1e-3] {
                let p: Vec<f64> = v.iter().map(|x| x * s).collect();
                prop_assert!(u.contains(&p, 1e-12));
            }
        }
    }

    #[test]
    fn basis_is_scale_invariant(seed in any::<u64>(), factor in 1u32..8) {
        let u = random_set(seed);
        let a = lin_hull_of(&u, 1e-9).unwrap();
        let b = lin_hull_of(&scaled(&u, f64::from(factor) / 2.0), 1e-9).unwrap();
        prop_assert_eq!(a.vectors, b.vectors);
        prop_assert_eq!(a.equality_rows, b.equality_rows);
    }
}

#[test]
fn segment_sets_have_dimension_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 2..5 {
        let u = samples::random_segment(&mut rng, k);
        let b = lin_hull_of(&u, 1e-9).unwrap();
        assert_eq!(b.vectors, vec![vec![1.0; k]]);
        assert_eq!(b.equality_rows.len(), 2 * (k - 1));
    }
}

#[test]
fn validation_reports_each_failure() {
    let inst = |u: Polyhedron| {
        Instance::new(Matrix::identity(1), vec![0.0], Matrix::identity(1), u, 0).unwrap()
    };
    let ray = inst(Polyhedron::new(Matrix::identity(1), vec![-1.0]).unwrap());
    let rep = validate(&ray, 1e-9).unwrap();
    assert!(!rep.compact);
    assert!(rep.to_string().contains("not compact"));

    let off = inst(Polyhedron::boxed(&[(1.0, 2.0)]));
    assert!(!validate(&off, 1e-9).unwrap().zero_in_relint);

    let empty = inst(Polyhedron::boxed(&[(2.0, 1.0)]));
    assert_eq!(validate(&empty, 1e-9), Err(Error::EmptyUncertaintySet));

    let rep = validate(&samples::coupled_singular(), 1e-9).unwrap();
    assert!(rep.to_string().contains("implicit equality rows: {1,2}"));
}
