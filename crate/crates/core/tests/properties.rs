mod common;

use common::*;
use l2alpha::baker::{circle_runner_check, liminf_floor};
use l2alpha::nets::{best_approx_records, continued_fraction_records};
use l2alpha::precision::{to_f64, HighComplex, HighPrecision};
use l2alpha::quotients::{dft_block, SpectralModel};
use l2alpha::roots::FactoredPoly;
use l2alpha::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-3i64..=3, -2i64..=2, prop_oneof![4 => Just(1i64), 1 => 2i64..=3])
        .prop_map(|(re, im, den)| GaussianRational::from_fractions((re, den), (im, den)))
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::btree_map(-2i64..=3, coeff(), 0..=4).prop_map(LaurentPoly::from_terms)
}

fn nonzero_laurent() -> impl Strategy<Value = LaurentPoly> {
    laurent().prop_filter("nonzero", |p| !p.is_zero())
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = LaurentMatrix> {
    prop::collection::vec(prop::collection::btree_map(-1i64..=2, coeff(), 0..=3), rows * cols).prop_map(move |v| {
        let mut it = v.into_iter().map(LaurentPoly::from_terms);
        LaurentMatrix::from_rows((0..rows).map(|_| (0..cols).map(|_| it.next().unwrap()).collect()).collect()).unwrap()
    })
}

fn spec() -> impl Strategy<Value = VcGroupSpec> {
    prop_oneof![
        Just(VcGroupSpec::integers()),
        Just(VcGroupSpec::infinite_dihedral()),
        Just(VcGroupSpec::z_times_cyclic(2)),
        Just(VcGroupSpec::z_times_cyclic(3)),
        Just(VcGroupSpec::integers_over_even()),
    ]
}

fn group_matrix(spec: VcGroupSpec, rows: usize, cols: usize) -> impl Strategy<Value = (VcGroupSpec, GroupRingMatrix)> {
    let n = spec.n();
    prop::collection::vec(prop::collection::vec((-2i64..=2, 0..n, coeff()), 0..=3), rows * cols).prop_map(move |v| {
        let mut m = GroupRingMatrix::zeros(rows, cols).unwrap();
        for (idx, terms) in v.into_iter().enumerate() {
            for (k, q, c) in terms {
                m.add_term(idx / cols, idx % cols, GroupElement::new(k, q), c);
            }
        }
        (spec.clone(), m)
    })
}

fn spec_and_pair() -> impl Strategy<Value = (VcGroupSpec, GroupRingMatrix, GroupRingMatrix)> {
    spec().prop_flat_map(|s| (group_matrix(s.clone(), 2, 1), group_matrix(s, 2, 1)))
        .prop_map(|((s, a), (_, b))| (s, a, b))
}

/// Point `((m² − n²) + 2mn·i)/(m² + n²)` on the unit circle.
fn pythagorean() -> impl Strategy<Value = GaussianRational> {
    (1i64..=9, 1i64..=9, any::<bool>())
        .prop_filter("not a root of unity", |(m, n, _)| m != n && m * n != 0)
        .prop_map(|(m, n, flip)| {
            let d = m * m + n * n;
            let im = if flip { -2 * m * n } else { 2 * m * n };
            GaussianRational::from_fractions((m * m - n * n, d), (im, d))
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn involution_is_an_anti_homomorphism(p in laurent(), q in laurent()) {
        prop_assert_eq!((&p * &q).involution(), &q.involution() * &p.involution());
        prop_assert_eq!((&p + &q).involution(), &p.involution() + &q.involution());
        prop_assert_eq!(p.involution().involution(), p);
    }

    #[test]
    fn gcd_divides_both(p in nonzero_laurent(), q in nonzero_laurent(), r in nonzero_laurent()) {
        let a = &p * &r;
        let b = &q * &r;
        let d = a.gcd(&b).unwrap();
        prop_assert!(d.divides(&a) && d.divides(&b));
        prop_assert!(r.divides(&d));
    }

    #[test]
    fn squarefree_decomposition_reconstructs(p in nonzero_laurent(), q in nonzero_laurent()) {
        let a = &(&p * &q) * &q;
        let mut prod = LaurentPoly::one();
        for (f, m) in a.squarefree_decomposition().unwrap() {
            prop_assert!(m >= 1);
            prop_assert!(f.gcd(&f.derivative()).unwrap().is_unit());
            for _ in 0..m {
                prod = &prod * &f;
            }
        }
        prop_assert!(prod.associated(&a));
    }

    #[test]
    fn factored_evaluation_matches_horner(p in nonzero_laurent(), k in 0u64..97) {
        let hp = HighPrecision::new(128);
        let fp = FactoredPoly::new(&p, &hp).unwrap();
        let z = hp.cis_turns(k as i64, 97);
        let factored = to_f64(&fp.abs_on_circle(&z, &hp));
        let direct = p.eval_complex(z.to_c64()).unwrap().norm();
        prop_assert!((factored - direct).abs() <= 1e-9 * (1.0 + direct), "{} vs {}", factored, direct);
    }

    #[test]
    fn restriction_is_additive_and_respects_adjoints((s, a, b) in spec_and_pair()) {
        let ra = restrict_to_z(&a, &s).unwrap();
        let rb = restrict_to_z(&b, &s).unwrap();
        prop_assert_eq!(restrict_to_z(&a.add(&b).unwrap(), &s).unwrap(), ra.add(&rb).unwrap());
        prop_assert_eq!(restrict_to_z(&a.adjoint(&s), &s).unwrap(), ra.adjoint());
    }

    #[test]
    fn restriction_over_integers_is_the_identity(a in matrix(2, 3)) {
        let g = GroupRingMatrix::from_laurent(&a);
        prop_assert_eq!(restrict_to_z(&g, &VcGroupSpec::integers()).unwrap(), a);
    }

    #[test]
    fn restriction_commutes_with_quotients((s, a) in spec().prop_flat_map(|s| group_matrix(s, 1, 2)), i in 1u64..=6) {
        let direct = singular_values(&build_quotient_dense(&a, &s, i).unwrap());
        let restricted = restrict_to_z(&a, &s).unwrap();
        let via = singular_values(&l2alpha::quotients::dense_quotient(&restricted, i).unwrap());
        prop_assert!(multiset_gap(&direct, &via) < 1e-9);
    }

    #[test]
    fn blocks_are_multiplicative(a in matrix(2, 2), b in matrix(2, 2), k in 0u64..8) {
        let ab = a.mul(&b).unwrap();
        let (ba, bb, bab) = (dft_block(&a, k, 8), dft_block(&b, k, 8), dft_block(&ab, k, 8));
        prop_assert!((&ba * &bb - &bab).norm() < 1e-9 * (1.0 + bab.norm()));
        let top = |m: &nalgebra::DMatrix<Complex64>| singular_values(m).last().copied().unwrap_or(0.0);
        prop_assert!(top(&bab) <= top(&ba) * top(&bb) * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn sample_values_sit_between_block_extremes(a in matrix(2, 2), i in 1u64..=16) {
        prop_assume!(!a.is_zero());
        let s = SpectralModel::new(&a, Tolerances::default()).unwrap().sample(i, i).unwrap();
        prop_assume!(s.rank > 0);
        let all: Vec<f64> = dft_blocks(&a, i).unwrap().iter().flat_map(singular_values).collect();
        let max = all.iter().copied().fold(0.0, f64::max);
        prop_assert!(s.sigma_plus > 0.0 && s.sigma_plus <= max * (1.0 + 1e-12));
        prop_assert!(s.m_plus >= 1 && s.m_plus <= s.rank);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn smith_factors_ignore_unit_scaling(a in matrix(2, 2), k in -2i64..=2, c in coeff()) {
        prop_assume!(!a.is_zero() && !c.norm_sqr().eq(&rat(0, 1)));
        let unit = LaurentPoly::monomial(c, k);
        let d = LaurentMatrix::diagonal(2, 2, &[unit, LaurentPoly::z()]).unwrap();
        let f = smith_normal_form(&a).unwrap().factors;
        let g = smith_normal_form(&d.mul(&a).unwrap()).unwrap().factors;
        let h = smith_normal_form(&a.mul(&d).unwrap()).unwrap().factors;
        prop_assert_eq!(&f, &g);
        prop_assert_eq!(&f, &h);
    }

    #[test]
    fn singular_values_sandwich_under_smith_transforms(a in matrix(2, 2), i in 1u64..=16) {
        prop_assume!(!a.is_zero());
        let snf = smith_normal_form(&a).unwrap();
        let sat = snf.s.mul(&a).unwrap().mul(&snf.t).unwrap();
        let top = |m: &LaurentMatrix| {
            dft_blocks(m, i).unwrap().iter().flat_map(singular_values).fold(0.0f64, f64::max)
        };
        let c = (top(&snf.s) * top(&snf.t)).max(top(&snf.s_inv) * top(&snf.t_inv)).max(1.0);
        let sorted = |m: &LaurentMatrix| {
            let mut v: Vec<f64> = dft_blocks(m, i).unwrap().iter().flat_map(singular_values).collect();
            v.sort_by(f64::total_cmp);
            v
        };
        let slack = 1e-9 * (1.0 + top(&a));
        for (x, y) in sorted(&a).iter().zip(&sorted(&sat)) {
            prop_assert!(*x <= c * y + slack && *y <= c * x + slack, "σ(A) = {}, σ(SAT) = {}, C = {}", x, y, c);
        }
    }

    #[test]
    fn svd_products_inequality(m in prop::collection::vec(-3.0f64..3.0, 18), n in prop::collection::vec(-3.0f64..3.0, 18)) {
        let build = |v: &[f64]| nalgebra::DMatrix::from_fn(3, 3, |r, c| Complex64::new(v[2 * (3 * r + c)], v[2 * (3 * r + c) + 1]));
        let (mm, nn) = (build(&m), build(&n));
        let (sm, sn, smn) = (singular_values(&mm), singular_values(&nn), singular_values(&(&mm * &nn)));
        for t in 0..3 {
            prop_assert!(sm[0] * sn[t] <= smn[t] * (1.0 + 1e-10) + 1e-10);
            prop_assert!(smn[t] <= sm[2] * sn[t] * (1.0 + 1e-10) + 1e-10);
        }
    }

    #[test]
    fn exact_rank_agrees_with_numeric_rank(a in matrix(2, 2), i in 1u64..=64) {
        let t = Tolerances::default();
        let exact = SpectralModel::new(&a, t).unwrap().sample(i, i).unwrap().rank;
        let numeric = SpectralModel::numeric_only(&a, t).sample(i, i).unwrap().rank;
        prop_assert_eq!(exact, numeric);
        if !a.is_zero() {
            let factors = smith_normal_form(&a).unwrap().factors;
            prop_assert_eq!(exact_rank_level(&factors, i).unwrap(), exact);
        }
    }

    #[test]
    fn sdf_base_is_zero_count_over_level(p in nonzero_laurent(), i in 1u64..=48) {
        let f = sdf_step(&LaurentMatrix::scalar(p.clone()), i, i, Tolerances::default()).unwrap();
        prop_assert_eq!(f.kernel_dim, exact_zero_count(&p, i).unwrap());
        prop_assert_eq!(f.base, f.kernel_dim as f64 / i as f64);
    }

    #[test]
    fn sdf_scales_with_the_matrix(a in matrix(2, 2), i in 1u64..=12, s in 2i64..=5) {
        let t = Tolerances::default();
        let f = sdf_step(&a, i, i, t).unwrap();
        let g = sdf_step(&a.scale(&GaussianRational::from_integers(0, s)), i, i, t).unwrap();
        prop_assert_eq!(f.kernel_dim, g.kernel_dim);
        prop_assert_eq!(f.jumps.len(), g.jumps.len());
        for (x, y) in f.jumps.iter().zip(&g.jumps) {
            prop_assert!((y.0 - s as f64 * x.0).abs() <= 1e-9 * y.0 && (x.1 - y.1).abs() < 1e-12);
        }
    }

    #[test]
    fn ns_invariant_under_units_and_involution(p in nonzero_laurent(), k in -3i64..=3, c in coeff()) {
        prop_assume!(!c.norm_sqr().eq(&rat(0, 1)));
        let n = ns_number(&p).unwrap();
        prop_assert_eq!(ns_number(&p.scale(&c).shift(k)).unwrap(), n);
        prop_assert_eq!(ns_number(&p.involution()).unwrap(), n);
    }

    #[test]
    fn roots_off_the_circle_give_infinity(roots in prop::collection::vec((prop_oneof![Just((2i64, 1i64)), Just((1, 3))], 0usize..4), 1..=4)) {
        let units = [(1, 0), (0, 1), (-1, 0), (0, -1)];
        let rs: Vec<GaussianRational> = roots
            .iter()
            .map(|&((n, d), u)| GaussianRational::from_fractions((n * units[u].0, d), (n * units[u].1, d)))
            .collect();
        prop_assert_eq!(ns_number(&LaurentPoly::from_roots(&rs)).unwrap(), NsValue::InfinityPlus);
    }

    #[test]
    fn records_strictly_decrease_and_match_continued_fractions(a in pythagorean(), k in 1u64..=3) {
        let search = best_approx_records(&a, k, 5_000).unwrap();
        for w in search.records.windows(2) {
            prop_assert!(w[1].distance < w[0].distance && w[1].exponent > w[0].exponent);
        }
        let hp = HighPrecision::new(256);
        let turns = hp.turns(&HighComplex::from_gaussian(&a, &hp));
        let cf = continued_fraction_records(&turns, k, 5_000, &hp);
        let exact: Vec<u64> = search.records.iter().map(|r| r.exponent).collect();
        prop_assert_eq!(cf, exact);
    }

    #[test]
    fn floor_stays_below_target(num in 1u64..=4, den in 1u64..=4, d in 1.0f64..50.0) {
        let ns = NsValue::Finite { num, den };
        prop_assert!(liminf_floor(&ns, d).unwrap() < ns.as_f64().unwrap());
    }

    #[test]
    fn circle_runner_is_monotone_in_d(a in pythagorean(), d in 1.0f64..12.0, extra in 0.0f64..5.0) {
        let ns: Vec<u64> = best_approx_records(&a, 1, 2_000).unwrap().records.iter().map(|r| r.exponent).filter(|&n| n >= 2).collect();
        prop_assume!(!ns.is_empty());
        let lo = circle_runner_check(&a, d, &ns).unwrap();
        let hi = circle_runner_check(&a, d + extra, &ns).unwrap();
        for (x, y) in lo.entries.iter().zip(&hi.entries) {
            if x.passes == Some(true) {
                prop_assert_eq!(y.passes, Some(true));
            }
        }
    }
}
