use bohrlab_core::*;

mod common;
use common::{brute_optimum, mask_solution_free};

#[test]
fn matches_exhaustive_enumeration_up_to_13() {
    for n in 1..=13u64 {
        let r = max_solution_free(n, 100_000_000).unwrap();
        let (best, lex_witness) = brute_optimum(n);
        assert_eq!(r.max_size, best, "size mismatch at N = {n}");
        assert_eq!(r.witness, lex_witness, "witness mismatch at N = {n}");
        assert!(r.exact);
        let mask = r.witness.iter().fold(0u64, |m, &v| m | 1 << (v - 1));
        assert!(mask_solution_free(mask, n));
    }
}

#[test]
fn table_is_monotone_and_certified() {
    let table = extremal_table(17, 1_000_000_000).unwrap();
    assert_eq!(table.len(), 17);
    for pair in table.windows(2) {
        assert!(pair[1].max_size >= pair[0].max_size);
        assert!(pair[1].max_size <= pair[0].max_size + 1);
    }
    for r in &table {
        assert!(r.exact);
        assert_eq!(r.witness.len() as u64, r.max_size);
        let oracle = count_solutions_interval(&r.witness, r.n).unwrap();
        assert_eq!(oracle.nontrivial, 0);
    }
}

#[test]
fn repeated_exact_runs_agree() {
    let a = max_solution_free(21, 1_000_000_000).unwrap();
    let b = max_solution_free(21, 1_000_000_000).unwrap();
    assert_eq!(a, b);
}

#[test]
fn behrend_construction_is_a_lower_bound() {
    for m in [10u64, 16, 20, 24] {
        let lower = behrend_construct(m).unwrap().size();
        let exact = max_solution_free(m, 2_000_000_000).unwrap().max_size;
        assert!(
            lower <= exact,
            "construction {lower} beats the optimum {exact} at M = {m}"
        );
    }
}
