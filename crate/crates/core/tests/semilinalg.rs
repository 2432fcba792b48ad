use frobcrys_core::fparith::{Elem, Field};
use frobcrys_core::semilinalg::*;
use proptest::prelude::*;

fn field(p: u64, e: u32) -> Field {
    Field::new(p, e).unwrap()
}

/// Applies the operator e times to every basis vector; the iterate's
/// columns are the results.
fn brute_iterate(op: &SemilinearOperator, e: u32) -> Matrix {
    let n = op.dim();
    let cols: Vec<Vec<Elem>> = (0..n)
        .map(|j| {
            let mut v = vec![Elem::ZERO; n];
            v[j] = Elem::ONE;
            for _ in 0..e {
                v = op.apply(&v);
            }
            v
        })
        .collect();
    Matrix::from_columns(n, &cols)
}

/// Stable rank and nilpotence from iterates up to dim (ranks only drop dim times).
fn brute_verdict(op: &SemilinearOperator) -> (usize, Option<u32>) {
    let n = op.dim() as u32;
    let f = op.field();
    let ranks: Vec<usize> = (0..=n.max(1)).map(|e| brute_iterate(op, e).rank(f)).collect();
    let idx = (1..=n.max(1)).find(|&e| brute_iterate(op, e).is_zero());
    (ranks[n as usize], idx)
}

fn operator(p: u64, e: u32, dim: usize, raw: &[u64], cartier: bool) -> SemilinearOperator {
    let f = field(p, e);
    let data = raw.iter().take(dim * dim).map(|&x| f.element(x % f.order())).collect();
    let dir = if cartier { Direction::Cartier } else { Direction::Frobenius };
    SemilinearOperator::new(&f, Matrix::from_row_major(dim, dim, data), dir).unwrap()
}

fn sparse_raw() -> impl Strategy<Value = Vec<u64>> {
    // about half the entries zero so nilpotent cases are common
    prop::collection::vec(prop_oneof![Just(0u64), 0u64..25], 16)
}

#[test]
fn exhaustive_2x2_over_f4() {
    let f = field(2, 2);
    for code in 0..256u64 {
        let raw: Vec<u64> = (0..4).map(|k| (code >> (2 * k)) & 3).collect();
        for cartier in [false, true] {
            let op = operator(2, 2, 2, &raw, cartier);
            let (rank, idx) = brute_verdict(&op);
            assert_eq!(op.stable_rank().rank, rank);
            assert_eq!(op.is_nilpotent().index, idx);
            assert_eq!(op.is_nilpotent().nilpotent, rank == 0);
        }
    }
    assert_eq!(f.order(), 4);
}

#[test]
fn nonzero_scalar_is_not_nilpotent() {
    let f = field(2, 2);
    for c in f.elements().skip(1) {
        let op = SemilinearOperator::new(&f, Matrix::from_rows(vec![vec![c]]), Direction::Frobenius).unwrap();
        assert_eq!(op.is_nilpotent(), Nilpotence { nilpotent: false, index: None });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn iterate_matches_brute_force(p in prop::sample::select(vec![2u64, 3, 5]), e in 1u32..3, dim in 0usize..5, raw in sparse_raw(), cartier: bool, k in 0u32..5) {
        let op = operator(p, e, dim, &raw, cartier);
        // kappa^k(e_j) = (M_k e_j)^(1/p^k), so the Cartier columns come out twisted
        let shift = if cartier { -(k as i64) } else { 0 };
        prop_assert_eq!(op.twisted_iterate(k).twist(op.field(), shift), brute_iterate(&op, k));
        let (rank, idx) = brute_verdict(&op);
        prop_assert_eq!(op.stable_rank().rank, rank);
        prop_assert_eq!(op.is_nilpotent().index, idx);
        prop_assert!(op.stable_rank().index as usize <= dim.max(1));
    }

    #[test]
    fn ranks_are_monotone(p in prop::sample::select(vec![2u64, 3]), dim in 1usize..5, raw in sparse_raw()) {
        let op = operator(p, 1, dim, &raw, false);
        let r = op.iterate_ranks(dim as u32 + 2);
        prop_assert!(r.windows(2).all(|w| w[1] <= w[0]));
        if let Some(k) = r.windows(2).position(|w| w[0] == w[1]) {
            prop_assert!(r[k..].iter().all(|&x| x == r[k]));
        }
    }

    #[test]
    fn dualize_preserves_index(p in prop::sample::select(vec![2u64, 3, 5]), e in 1u32..3, dim in 0usize..4, raw in sparse_raw(), cartier: bool) {
        let op = operator(p, e, dim, &raw, cartier);
        let d = op.dualize();
        prop_assert_eq!(d.direction(), op.direction().flip());
        prop_assert_eq!(d.is_nilpotent(), op.is_nilpotent());
        prop_assert_eq!(d.dualize(), op);
    }

    #[test]
    fn change_basis_preserves_index(p in prop::sample::select(vec![2u64, 3]), e in 1u32..3, dim in 1usize..4, raw in sparse_raw(), praw in prop::collection::vec(0u64..25, 9), cartier: bool) {
        let op = operator(p, e, dim, &raw, cartier);
        let f = op.field().clone();
        let pm = Matrix::from_row_major(dim, dim, praw.iter().take(dim * dim).map(|&x| f.element(x % f.order())).collect());
        prop_assume!(pm.inverse(&f).is_some());
        let conj = op.change_basis(&pm).unwrap();
        prop_assert_eq!(conj.is_nilpotent(), op.is_nilpotent());
        prop_assert_eq!(conj.stable_rank().rank, op.stable_rank().rank);
    }

    #[test]
    fn direct_sum_index_is_max(raw1 in sparse_raw(), raw2 in sparse_raw(), d1 in 1usize..3, d2 in 1usize..3) {
        let a = operator(3, 1, d1, &raw1, false);
        let b = operator(3, 1, d2, &raw2, false);
        let s = a.direct_sum(&b).unwrap();
        let (na, nb) = (a.is_nilpotent(), b.is_nilpotent());
        prop_assert_eq!(s.is_nilpotent().nilpotent, na.nilpotent && nb.nilpotent);
        if let (Some(x), Some(y)) = (na.index, nb.index) {
            prop_assert_eq!(s.is_nilpotent().index, Some(x.max(y)));
        }
    }

    #[test]
    fn record_round_trip(p in prop::sample::select(vec![2u64, 3, 5]), e in 1u32..3, dim in 0usize..4, raw in sparse_raw(), cartier: bool) {
        let op = operator(p, e, dim, &raw, cartier);
        prop_assert_eq!(SemilinearOperator::from_record(&op.to_record()).unwrap(), op);
    }
}
