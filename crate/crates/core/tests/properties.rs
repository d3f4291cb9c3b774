//! Randomized structural properties of the linear algebra and module layers.

use itcalc::algebra::fixtures;
use itcalc::exactlin::{IntMat, Mat};
use itcalc::relstruct::{omega_f, RelStructure};
use itcalc::rep::{direct_sum, hom_space, is_isomorphic, Rep};
use num_bigint::BigInt;
use proptest::prelude::*;

fn mat_from(p: u64, rows: usize, cols: usize, entries: &[u64]) -> Mat {
    let mut m = Mat::zero(p, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, entries[i * cols + j] % p);
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity_is_column_count(
        p in prop::sample::select(vec![2u64, 3, 5]),
        rows in 0usize..6,
        cols in 0usize..6,
        entries in prop::collection::vec(0u64..5, 36),
    ) {
        let m = mat_from(p, rows, cols, &entries);
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), cols);
    }

    #[test]
    fn integer_rank_survives_row_operations(
        rows in 1usize..5,
        cols in 1usize..5,
        entries in prop::collection::vec(-4i64..=4, 25),
        i in 0usize..5,
        j in 0usize..5,
        c in -3i64..=3,
    ) {
        let (i, j) = (i % rows, j % rows);
        let m = IntMat::from_rows(
            (0..rows)
                .map(|r| (0..cols).map(|s| BigInt::from(entries[r * cols + s])).collect())
                .collect(),
        );
        let mut rows_vec: Vec<Vec<BigInt>> = (0..rows)
            .map(|r| (0..cols).map(|s| m.get(r, s).clone()).collect())
            .collect();
        if i != j {
            // add c times row j to row i
            for s in 0..cols {
                let add = BigInt::from(c) * rows_vec[j][s].clone();
                rows_vec[i][s] += add;
            }
        }
        let m2 = IntMat::from_rows(rows_vec);
        prop_assert_eq!(m.rank(), m2.rank());
    }

    #[test]
    fn hom_dimension_is_additive(
        mults in prop::collection::vec(0usize..3, 3),
        target in 0usize..3,
    ) {
        let a = fixtures::n3(2);
        let pool = [
            Rep::simple(a.clone(), 1).unwrap(),
            Rep::simple(a.clone(), 2).unwrap(),
            Rep::projective(a.clone(), 1).unwrap(),
        ];
        let parts: Vec<Rep> = pool
            .iter()
            .zip(&mults)
            .flat_map(|(m, &k)| std::iter::repeat(m.clone()).take(k))
            .collect();
        let sum = direct_sum(&a, &parts).unwrap();
        let x = &pool[target];
        let lhs = hom_space(&sum, x).unwrap().dim();
        let rhs: usize =
            parts.iter().map(|m| hom_space(m, x).unwrap().dim()).sum();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn syzygy_is_additive(
        i in 0usize..3,
        j in 0usize..3,
        with_generator in any::<bool>(),
    ) {
        let a = fixtures::n3(2);
        let mut rng = itcalc::default_rng();
        let f = if with_generator {
            let s2 = Rep::simple(a.clone(), 2).unwrap();
            RelStructure::new(a.clone(), &[s2], &mut rng).unwrap()
        } else {
            RelStructure::trivial(a.clone()).unwrap()
        };
        let pool = [
            Rep::simple(a.clone(), 1).unwrap(),
            Rep::simple(a.clone(), 2).unwrap(),
            Rep::simple(a.clone(), 3).unwrap(),
        ];
        let (m, n) = (&pool[i], &pool[j]);
        let sum = direct_sum(&a, &[m.clone(), n.clone()]).unwrap();
        let lhs = omega_f(&f, &sum).unwrap();
        let rhs = direct_sum(
            &a,
            &[omega_f(&f, m).unwrap(), omega_f(&f, n).unwrap()],
        )
        .unwrap();
        prop_assert!(is_isomorphic(&lhs, &rhs, &mut rng).unwrap());
    }
}
