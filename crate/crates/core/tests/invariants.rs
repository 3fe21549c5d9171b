use hlawka::ensemble::{loeliger_lhs_rhs, EnsembleMode, EnsembleSpec};
use hlawka::galois::sample_code;
use hlawka::{Caps, IntLattice, Reduction};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn pd_gram() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3)
        .prop_flat_map(|m| proptest::collection::vec(-3i64..=3, m * m).prop_map(move |e| (m, e)))
        .prop_map(|(m, e)| {
            // AᵀA + I is positive definite
            let mut g = vec![vec![0i64; m]; m];
            for i in 0..m {
                for j in 0..m {
                    g[i][j] = (0..m).map(|k| e[k * m + i] * e[k * m + j]).sum::<i64>() + (i == j) as i64;
                }
            }
            g
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lift_volume_is_p_to_the_codimension(gram in pd_gram(), seed in 0u64..1000, pi in 0usize..3, kf in 0.0f64..1.0) {
        let p = [2u64, 3, 5][pi];
        let base = IntLattice::new(gram, 1, 1).unwrap();
        let n = base.rank();
        let id = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        let red = Reduction::natural(base.clone().with_basis(id).unwrap(), p).unwrap();
        let k = (1 + (kf * n as f64) as usize).min(n);
        let code = sample_code(p, n, k, seed).unwrap();
        let lat = red.lift_code(&code).unwrap();
        let want = base.volume() * (p as f64).powi((n - k) as i32);
        prop_assert!((lat.volume() / want - 1.0).abs() < 1e-9);
        prop_assert_eq!(red.lift_index(&code).unwrap(), BigInt::from(p).pow((n - k) as u32));
        // every lifted basis vector reduces into the code
        for row in lat.basis().unwrap() {
            prop_assert!(code.contains(&red.apply(row)));
        }
    }

    #[test]
    fn loeliger_identity_for_arbitrary_weights(weights in proptest::collection::vec(0i64..50, 9), k in 1usize..=2) {
        let g = |v: &[u64]| BigRational::from_integer(BigInt::from(weights[(v[0] + 3 * v[1]) as usize]));
        let (lhs, rhs) = loeliger_lhs_rhs(3, 2, k, &g, &Caps::default()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ensemble_members_have_the_target_volume(p in prop::sample::select(vec![3u64, 5, 7]), v in 0.5f64..4.0, seed in 0u64..100) {
        let red = Reduction::natural(IntLattice::integer(3), p).unwrap();
        let spec = EnsembleSpec::new(red.clone(), 1, v, EnsembleMode::MonteCarlo { trials: 1, seed }).unwrap();
        let code = sample_code(p, 3, 1, seed).unwrap();
        let lat = red.lift_code(&code).unwrap().dilate(spec.beta()).unwrap();
        prop_assert!((lat.volume() / v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn point_counts_are_basis_invariant(gram in pd_gram(), r in 0.5f64..4.0) {
        let caps = Caps::default();
        let lat = IntLattice::new(gram, 1, 1).unwrap();
        let (red, _) = lat.lll_reduce(99, 100).unwrap();
        prop_assert_eq!(lat.count_points(r, false, &caps).unwrap(), red.count_points(r, false, &caps).unwrap());
        prop_assert_eq!(lat.count_points(r, true, &caps).unwrap(), red.count_points(r, true, &caps).unwrap());
    }
}

#[test]
fn kernel_of_natural_reduction_is_p_times_base() {
    let caps = Caps::default();
    let a2 = IntLattice::new(vec![vec![2, 1], vec![1, 2]], 1, 1).unwrap();
    let red = Reduction::natural(a2.clone().with_basis(vec![vec![1, 0], vec![0, 1]]).unwrap(), 7).unwrap();
    let (ker, cert) = red.kernel_lattice(&caps).unwrap();
    assert_eq!(cert.lambda1_sq, "98");
    assert!((ker.volume() / a2.volume() - 49.0).abs() < 1e-9);
}
