mod common;

use common::invariant_factors_by_minors;
use gmap_homology::homology::{invariant_factors, invariant_factors_dense, is_unimodular, smith_normal_form, IntMatrix, SparseMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-5i64..=5, c), r))
}

fn sparse(m: &[Vec<i64>]) -> SparseMatrix {
    let cols = m[0].len();
    let columns = (0..cols)
        .map(|c| (0..m.len()).filter(|&r| m[r][c] != 0).map(|r| (r, m[r][c])).collect())
        .collect();
    SparseMatrix::new(m.len(), columns)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, ..ProptestConfig::default() })]

    #[test]
    fn transforms_diagonalise(m in matrix()) {
        let a = IntMatrix::from_rows(&m);
        let f = smith_normal_form(&a);
        prop_assert_eq!(f.u.mul(&a).mul(&f.v), f.d.clone());
        prop_assert_eq!(f.u_inv.mul(&f.d).mul(&f.v_inv), a);
        prop_assert!(is_unimodular(&f.u) && is_unimodular(&f.v));
        prop_assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(m.len()));
        prop_assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(m[0].len()));
        for r in 0..f.d.rows() {
            for c in 0..f.d.cols() {
                let expect = if r == c && r < f.rank() { f.diagonal[r].clone() } else { BigInt::zero() };
                prop_assert_eq!(&f.d[(r, c)], &expect);
            }
        }
        for w in f.diagonal.windows(2) {
            prop_assert!(w[0] > BigInt::zero() && w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn factors_agree_with_minors(m in matrix()) {
        let expect: Vec<BigInt> = invariant_factors_by_minors(&m).into_iter().map(BigInt::from).collect();
        prop_assert_eq!(invariant_factors_dense(&IntMatrix::from_rows(&m)), expect.clone());
        prop_assert_eq!(invariant_factors(&sparse(&m)), expect);
    }
}

#[test]
fn known_forms() {
    let f = smith_normal_form(&IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
    assert_eq!(f.diagonal, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    let f = smith_normal_form(&IntMatrix::from_rows(&[vec![0i64, 0], vec![0, 0]]));
    assert!(f.diagonal.is_empty());
}

#[test]
fn large_entries_stay_exact() {
    let big = 3_000_000_000_000i64;
    let m = vec![vec![big, big + 1], vec![big - 1, big]];
    let f = smith_normal_form(&IntMatrix::from_rows(&m));
    assert_eq!(f.diagonal, vec![BigInt::from(1), BigInt::from(1)]);
    let m = vec![vec![big * 2, 0], vec![0, big * 3]];
    assert_eq!(
        invariant_factors(&sparse(&m)),
        vec![BigInt::from(big), BigInt::from(6 * big)]
    );
}
