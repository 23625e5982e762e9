use kirby_core::invariants::{form_data, gram_matrix, signature};
use kirby_core::{IntMatrix, Parity, smith_normal_form};
use kirby_testkit::oracles::{self, Mat};
use kirby_testkit::random::{self, Params};
use proptest::prelude::*;

fn to_int(m: &Mat) -> IntMatrix {
    let rows: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|x| *x as i64).collect()).collect();
    if rows.is_empty() {
        IntMatrix::zeros(0, 0)
    } else {
        IntMatrix::from_rows(&rows)
    }
}

fn to_mat(m: &IntMatrix) -> Mat {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| i128::try_from(&m[(i, j)]).unwrap()).collect()).collect()
}

fn matrix() -> impl Strategy<Value = Mat> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-4i128..=4, c), r))
}

fn symmetric() -> impl Strategy<Value = Mat> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(-4i128..=4, n * n).prop_map(move |v| {
            (0..n).map(|i| (0..n).map(|j| v[i.min(j) * n + i.max(j)]).collect()).collect()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn snf_matches_determinantal_divisors(m in matrix()) {
        let a = to_int(&m);
        let snf = smith_normal_form(&a);
        let lib: Vec<i128> = snf.invariant_factors().iter().map(|b| i128::try_from(b).unwrap()).collect();
        prop_assert_eq!(lib, oracles::invariant_factors(&m));
        prop_assert_eq!(&(&snf.left * &a) * &snf.right, snf.diagonal.clone());
        prop_assert!(snf.diagonal.is_diagonal());
        prop_assert_eq!(oracles::det(&to_mat(&snf.left)).abs(), 1);
        prop_assert_eq!(oracles::det(&to_mat(&snf.right)).abs(), 1);
    }

    #[test]
    fn signature_matches_characteristic_polynomial(m in symmetric()) {
        prop_assert_eq!(signature(&to_int(&m)), oracles::signature(&m));
    }

    #[test]
    fn parity_and_rank_match_brute_force(m in symmetric()) {
        let f = form_data(&to_int(&m));
        prop_assert_eq!(f.parity == Parity::Odd, oracles::is_odd(&m));
        prop_assert_eq!(f.rank, oracles::rank(&m));
    }

    #[test]
    fn gram_matrix_of_random_diagrams(seed in any::<u64>()) {
        let d = random::random_diagram(&mut random::rng(seed), &Params { max_handles: 6, ..Params::default() });
        let g = to_mat(&gram_matrix(&d));
        let f = form_data(&gram_matrix(&d));
        prop_assert_eq!(f.signature, oracles::signature(&g));
        prop_assert_eq!(f.parity == Parity::Odd, oracles::is_odd(&g));
        // the basis spans the kernel of ∂₂
        let n = d.handles.len();
        let rank = oracles::rank(&random::boundary(&d));
        prop_assert_eq!(g.len(), n - rank);
    }
}

#[test]
fn spot_signatures() {
    let rows = |v: Vec<Vec<i64>>| IntMatrix::from_rows(&v);
    assert_eq!(signature(&rows(vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 2]])), 1);
    assert_eq!(signature(&rows(vec![vec![0, 1], vec![1, 0]])), 0);
    assert_eq!(signature(&kirby_core::corpus::e8()), 8);
    assert_eq!(to_mat(&kirby_core::corpus::e8()), oracles::e8());
}
