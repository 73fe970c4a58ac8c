use bohrlab_core::*;

fn brute_interval_solutions(elems: &[u64]) -> u64 {
    let mut nontrivial = 0u64;
    for &x in elems {
        for &y in elems {
            for &z in elems {
                for &w in elems {
                    if x + y + z == 3 * w && !(x == y && y == z) {
                        nontrivial += 1;
                    }
                }
            }
        }
    }
    nontrivial
}

#[test]
fn frozen_sizes_at_powers_of_ten() {
    let expected = [
        (100u64, 6u64),
        (1_000, 12),
        (10_000, 35),
        (100_000, 126),
        (1_000_000, 252),
    ];
    for (m, size) in expected {
        let r = behrend_construct(m).unwrap();
        assert_eq!(r.size(), size, "M = {m}");
    }
}

#[test]
fn small_targets_are_solution_free_by_brute_force() {
    for m in 1..=120u64 {
        let r = behrend_construct(m).unwrap();
        assert!(!r.elems.is_empty());
        assert!(
            r.elems.windows(2).all(|w| w[0] < w[1]),
            "unsorted at M = {m}"
        );
        assert!(*r.elems.last().unwrap() <= m);
        assert!(r.elems[0] >= 1);
        assert_eq!(
            brute_interval_solutions(&r.elems),
            0,
            "solutions at M = {m}"
        );
    }
}

#[test]
fn params_describe_the_construction() {
    for m in [50u64, 500, 5_000, 50_000] {
        let r = behrend_construct(m).unwrap();
        r.params.validate(m).unwrap();
        assert_eq!(r.size(), r.elems.len() as u64);
        let oracle = count_solutions_interval(&r.elems, m).unwrap();
        assert_eq!(oracle.nontrivial, 0);
        assert!((r.density() - r.size() as f64 / m as f64).abs() < 1e-15);
    }
}

#[test]
fn density_curve_and_decay_fit() {
    let ms = [100u64, 1_000, 10_000, 100_000];
    let curve = behrend_density_curve(&ms).unwrap();
    assert_eq!(curve.len(), ms.len());
    for (point, m) in curve.iter().zip(ms) {
        assert_eq!(point.m, m);
        assert!(point.density > 0.0 && point.density <= 1.0);
    }
    let fit = density_decay_fit(&curve).unwrap();
    assert!(fit.slope > 0.0, "density must decay, slope {}", fit.slope);
    assert!(fit.r_squared > 0.9, "fit r^2 {}", fit.r_squared);
}

#[test]
fn digit_cap_prevents_carries() {
    for m in [30u64, 300, 3_000, 30_000] {
        let r = behrend_construct(m).unwrap();
        let p = r.params;
        assert!(3 * p.digit_cap < p.base);
        assert!(p.base >= 4);
        assert!(p.max_value() < m as u128);
    }
}

#[test]
fn capacity_and_degenerate_targets() {
    assert_eq!(behrend_construct(0).unwrap_err().name(), "Domain");
    assert_eq!(
        behrend_construct(2_000_001).unwrap_err().name(),
        "CapacityExceeded"
    );
    for m in 1..4u64 {
        assert_eq!(behrend_construct(m).unwrap().elems, vec![1]);
    }
}
