use super::*;
use super::oracle::{enumerate_subspaces, intersection_fraction};
use proptest::prelude::*;

fn row(q: u32, m: u32, n: u32, k: u32, w: u32) -> ParamSet {
    ParamSet::new(q, m, n, k, w).unwrap()
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

#[test]
fn gaussian_binomial_examples() {
    assert_eq!(gaussian_binomial(7, 0, 2), BigUint::one());
    assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
    assert_eq!(gaussian_binomial(3, 4, 2), BigUint::zero());
    assert_eq!(gaussian_binomial(5, 2, 3), BigUint::from(1210u32));
}

#[test]
fn count_rank_vectors_examples() {
    assert_eq!(count_rank_vectors(5, 3, 0, 2), BigUint::one());
    assert_eq!(count_rank_vectors(4, 2, 1, 2), BigUint::from(45u32));
    // exhaustive over F_{2^4}^2
    let t = crate::ffield::FieldTower::new(2, 4).unwrap();
    let mut by_rank = [0u32; 3];
    for a in 0..16 {
        for b in 0..16 {
            let v = [t.element(a).unwrap(), t.element(b).unwrap()];
            by_rank[crate::ffield::rank_qm(&t, &v)] += 1;
        }
    }
    assert_eq!(by_rank[1], 45);
    assert_eq!(BigUint::from(by_rank[2]), count_rank_vectors(4, 2, 2, 2));
}

#[test]
fn rank_partition_identity() {
    for q in [2u32, 3] {
        for m in 1..=8 {
            for n in 1..=8 {
                let total: BigUint = (0..=m.min(n)).map(|j| count_rank_vectors(m, n, j, q)).sum();
                assert_eq!(total, big_q_pow(q, m * n), "q={q} m={m} n={n}");
            }
        }
    }
}

#[test]
fn ball_and_candidates_examples() {
    assert_eq!(ball_probability(4, 4, 4, 2).into_value(), BigRational::one());
    assert_eq!(expected_candidates(8, 8, 3, 0, 2), BigRational::one());
    let log_n = log2_rational(&expected_candidates(24, 24, 16, 6, 2));
    assert!((log_n - 61.769).abs() < 1e-3, "{log_n}");
}

#[test]
fn lemma1_examples() {
    assert_eq!(lemma1_exact(5, 2, 3, 0, 2).into_value(), BigRational::one());
    assert_eq!(lemma1_exact(2, 1, 1, 1, 2).into_value(), rat(1, 3));
    assert!(lemma1_exact(4, 1, 2, 2, 3).is_zero());
}

#[test]
fn lemma1_terms_sum_to_one() {
    for q in [2u32, 3] {
        for l in 0..=8 {
            for u in 0..=l {
                for v in 0..=l {
                    assert_eq!(lemma1_exact(l, u, v, 0, q).into_value(), BigRational::one());
                }
            }
        }
    }
}

#[test]
fn lemma1_matches_grassmannian_enumeration() {
    for q in [2u32, 3] {
        for l in 1..=4usize {
            for u in 0..=l {
                let fixed = enumerate_subspaces(l, u, q).unwrap();
                let fixed = &fixed[fixed.len() / 2];
                for v in 0..=l {
                    for omega in 0..=u.min(v) {
                        assert_eq!(
                            lemma1_exact(l as u32, u as u32, v as u32, omega as u32, q).into_value(),
                            intersection_fraction(l, fixed, v, omega, q).unwrap(),
                            "q={q} l={l} u={u} v={v} omega={omega}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn lemma2_examples() {
    assert_eq!(lemma2_prob(24, 16, 4, 0, 2).into_value(), BigRational::one());
    assert_eq!(lemma2_prob(24, 16, 4, 2, 2).into_value(), BigRational::one());
    // guess of dimension 4 inside a 6-dimensional row space
    let p = lemma2_prob(24, 16, 4, 6, 2);
    let expected = ratio(gaussian_binomial(6, 4, 2), gaussian_binomial(24, 4, 2));
    assert_eq!(p.value(), &expected);
    assert!((p.to_f64() / 1.6565e-22 - 1.0).abs() < 1e-4);
}

#[test]
fn lemma3_examples() {
    let p = row(2, 24, 24, 16, 0);
    assert_eq!(lemma3_success_prob(&p, 0).into_value(), qpow(2, 24 * (16 - 24)));
    let p = row(2, 24, 24, 16, 6);
    let full = lemma3_success_prob(&p, 4);
    assert!(full >= lemma3_dominant_term(&p, 4));
    assert!((full.log2() - (2.0 * 24f64.log2() - 19.7549)).abs() < 1e-3);
}

#[test]
fn theorem1_rows() {
    let cases = [
        (row(2, 24, 24, 16, 6), 4, 19.7549),
        (row(2, 64, 64, 32, 19), 6, 257.208),
        (row(2, 80, 80, 40, 23), 6, 401.852),
        (row(2, 96, 96, 48, 27), 6, 578.378),
        (row(2, 82, 82, 48, 20), 6, 290.923),
    ];
    for (p, delta, log2) in cases {
        let t = theorem1_work_factor(&p).unwrap();
        assert_eq!(t.delta, delta, "{p}");
        assert!((t.log2() - log2).abs() < 1e-3, "{p}: {}", t.log2());
    }
    assert!(theorem1_work_factor(&row(2, 24, 24, 16, 4)).is_err());
    assert!(theorem1_work_factor(&row(2, 24, 24, 16, 9)).is_err());
}

#[test]
fn theorem1_scans_every_delta() {
    let p = row(2, 24, 24, 16, 6);
    let t = theorem1_work_factor(&p).unwrap();
    for delta in 4..=8 {
        let work = BigRational::from_integer(576.into()) / lemma3_success_prob(&p, delta).into_value();
        assert!(t.work <= work);
    }
}

#[test]
fn closed_form_bounds_differ_by_64n() {
    for p in [row(2, 24, 24, 16, 6), row(2, 64, 64, 32, 19), row(3, 10, 9, 3, 4)] {
        let lo = corollary1_lower_bound(&p).unwrap();
        let hi = remark_upper_bound(&p).unwrap();
        assert_eq!(hi.coeff.clone() / lo.coeff.clone(), BigRational::from_integer((64 * p.n).into()));
        assert!((hi.log2() - lo.log2() - (64.0 * p.n as f64).log2()).abs() < 1e-9);
    }
    let p = row(2, 24, 24, 16, 6);
    assert!(corollary1_lower_bound(&p).unwrap().log2() <= theorem1_work_factor(&p).unwrap().log2());
}

#[test]
fn lemma4_example_small() {
    let a = lemma4_joint_bound(24, 16, 24, 6, 4, 0, 2).to_f64();
    let b = lemma4_joint_bound(24, 16, 24, 6, 2, 2, 2).to_f64();
    assert!((a / 1.6565e-22 - 1.0).abs() < 1e-3, "{a}");
    assert!((b / 1.9257e-22 - 1.0).abs() < 1e-3, "{b}");
    // rows only coincides with the single-sided probability
    assert_eq!(
        lemma4_joint_bound(24, 16, 24, 6, 4, 0, 2),
        lemma2_prob(24, 16, 4, 6, 2)
    );
}

#[test]
fn lemma4_at_guess_six() {
    let a = lemma4_joint_bound(64, 32, 64, 19, 6, 0, 2).to_f64();
    let b = lemma4_joint_bound(64, 32, 64, 19, 3, 3, 2).to_f64();
    assert!((a / 5.27e-82 - 1.0).abs() < 0.01, "{a}");
    assert!((b / 5.27e-82 - 1.0).abs() < 0.01, "{b}");
}

#[test]
fn bound_dominance_grid() {
    let mut checked = 0;
    for q in [2u32, 3] {
        for l in 1..=7 {
            for u in 0..=l {
                for v in 0..=l {
                    for omega in 0..=u.min(v) {
                        assert!(lemma1_bound(l, u, v, omega, q).dominates(lemma1_exact(l, u, v, omega, q).value()));
                        checked += 1;
                    }
                }
            }
        }
        for n in 2..=10 {
            for k in 1..n {
                for j in 0..=n {
                    for delta in 0..=n - k {
                        if 2 * j + delta <= n - k {
                            continue;
                        }
                        assert!(lemma2_bound(n, k, delta, j, q).dominates(lemma2_prob(n, k, delta, j, q).value()));
                        checked += 1;
                    }
                }
            }
        }
        for m in 2..=7 {
            for n in 2..=m {
                for k in 1..n {
                    for w in 0..=n {
                        let p = row(q, m, n, k, w);
                        for delta in p.two_xi().max(0) as u32..=n - k {
                            assert!(lemma3_bound(&p, delta).dominates(lemma3_success_prob(&p, delta).value()));
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked >= 100);
}

#[test]
fn scaled_power_comparison_is_exact() {
    let s = ScaledPower {
        coeff: BigRational::one(),
        base: 2,
        exponent: rat(1, 2),
    };
    // sqrt(2) lies between 1.41421356 and 1.41421357
    assert!(s.dominates(&rat(141421356, 100000000)));
    assert!(!s.dominates(&rat(141421357, 100000000)));
}

#[test]
fn param_set_json_round_trip() {
    let p = row(3, 10, 9, 3, 4);
    let back: ParamSet = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(back, p);
    assert!(ParamSet::new(4, 8, 8, 2, 2).is_err());
    assert!(ParamSet::new(2, 8, 9, 2, 2).is_err());
    assert!(ParamSet::new(2, 8, 8, 0, 2).is_err());
    assert!(ParamSet::new(2, 8, 8, 2, 9).is_err());
}

proptest! {
    #[test]
    fn gaussian_binomial_symmetry(a in 0u32..30, b in 0u32..30, q in prop::sample::select(vec![2u32, 3, 5])) {
        prop_assume!(b <= a);
        prop_assert_eq!(gaussian_binomial(a, b, q), gaussian_binomial(a, a - b, q));
    }

    #[test]
    fn lemma2_is_a_probability(n in 2u32..20, k_raw in 0u32..100, j_raw in 0u32..100, d_raw in 0u32..100) {
        let k = 1 + k_raw % (n - 1);
        let j = j_raw % (n + 1);
        let delta = d_raw % (n - k + 1);
        let p = lemma2_prob(n, k, delta, j, 2).into_value();
        prop_assert!(p >= BigRational::zero() && p <= BigRational::one());
    }
}
