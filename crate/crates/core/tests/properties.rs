use pmconv_core::ddf::{distance_to_eps0, levy_distance, tau_m_at};
use pmconv_core::ideals::{double_density, is_negligible, IdealModel, IndexSet2D, Verdict};
use pmconv_core::pmspace::{in_vicinity, EquilateralSpace, PmSpace, SimpleSpace};
use pmconv_core::seqlab::{
    averaged_levy_sum, pre_cauchy_indicator, subsequence_along, DoubleSequence, QuadOptions,
};
use pmconv_core::{Ddf, Point};
use proptest::prelude::*;

const TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
enum Part {
    Step(f64),
    Exp(f64),
}

fn part() -> impl Strategy<Value = Part> {
    prop_oneof![
        (0.0f64..3.0).prop_map(Part::Step),
        (0.05f64..3.0).prop_map(Part::Exp),
    ]
}

fn ddf() -> impl Strategy<Value = Ddf> {
    prop::collection::vec((0.05f64..1.0, part()), 1..4).prop_map(|parts| {
        let total: f64 = parts.iter().map(|p| p.0).sum();
        let comps = parts
            .into_iter()
            .map(|(w, p)| {
                let f = match p {
                    Part::Step(x) => Ddf::unit_step(x).unwrap(),
                    Part::Exp(c) => Ddf::exp_simple(c).unwrap(),
                };
                (w / total, f)
            })
            .collect();
        Ddf::mixture(comps).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ddf_is_a_distribution(f in ddf(), xs in prop::collection::vec(0.0f64..10.0, 2..20)) {
        let mut xs = xs;
        xs.sort_by(|a, b| a.total_cmp(b));
        prop_assert_eq!(f.eval(0.0), 0.0);
        prop_assert_eq!(f.eval(f64::INFINITY), 1.0);
        let vals: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
        prop_assert!(vals.iter().all(|v| (0.0..=1.0).contains(v)));
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for &x in &xs {
            prop_assert!(f.eval(x) <= f.eval_right(x));
        }
    }

    #[test]
    fn levy_is_a_metric(f in ddf(), g in ddf(), h in ddf()) {
        let fg = levy_distance(&f, &g, TOL).unwrap();
        let gf = levy_distance(&g, &f, TOL).unwrap();
        prop_assert_eq!(fg, gf);
        prop_assert!((0.0..=1.0).contains(&fg));
        prop_assert!(levy_distance(&f, &f, TOL).unwrap() <= TOL);
        let gh = levy_distance(&g, &h, TOL).unwrap();
        let fh = levy_distance(&f, &h, TOL).unwrap();
        prop_assert!(fh <= fg + gh + 3.0 * TOL, "{} > {} + {}", fh, fg, gh);
    }

    #[test]
    fn fast_path_agrees_with_levy(f in ddf()) {
        let fast = distance_to_eps0(&f, TOL).unwrap();
        let full = levy_distance(&f, &Ddf::eps0(), TOL).unwrap();
        prop_assert!((fast - full).abs() <= 2.0 * TOL, "{} vs {}", fast, full);
    }

    #[test]
    fn strong_neighbourhood_criterion(f in ddf()) {
        let d0 = distance_to_eps0(&f, TOL).unwrap();
        for i in 1..50 {
            let t = i as f64 / 50.0;
            if (d0 - t).abs() > 10.0 * TOL {
                prop_assert_eq!(f.eval(t) > 1.0 - t, d0 < t, "t = {}, d0 = {}", t, d0);
            }
        }
    }

    #[test]
    fn tau_is_monotone(f in ddf(), g in ddf(), s in 0.1f64..1.0) {
        // F(x/s) >= F(x) for s < 1
        let bigger = f.scaled(s).unwrap();
        for i in 1..40 {
            let x = i as f64 * 0.2;
            prop_assert!(tau_m_at(&f, &g, x) <= tau_m_at(&bigger, &g, x));
        }
    }

    #[test]
    fn tau_has_identity_and_commutes(f in ddf(), g in ddf(), x in 0.001f64..8.0) {
        prop_assert_eq!(tau_m_at(&Ddf::eps0(), &f, x), f.eval(x));
        prop_assert_eq!(tau_m_at(&f, &g, x), tau_m_at(&g, &f, x));
    }

    #[test]
    fn vicinity_is_monotone_symmetric_and_reflexive(
        a in -5.0f64..5.0,
        b in -5.0f64..5.0,
        t in 0.001f64..1.0,
        dt in 0.0f64..1.0,
    ) {
        let s = SimpleSpace::new(Ddf::exp_simple(1.0).unwrap()).unwrap();
        let (pa, pb) = (Point(a), Point(b));
        let here = in_vicinity(&s, pa, pb, t).unwrap();
        prop_assert_eq!(here, in_vicinity(&s, pb, pa, t).unwrap());
        if here {
            prop_assert!(in_vicinity(&s, pa, pb, t + dt).unwrap());
        }
        prop_assert!(in_vicinity(&s, pa, pa, t).unwrap());
        // the vicinity predicate is the d_L criterion away from equality
        let d0 = s.dl_to_eps0(pa, pb);
        if (d0 - t).abs() > 1e-6 {
            prop_assert_eq!(here, d0 < t);
        }
    }

    #[test]
    fn density_is_monotone_under_inclusion(
        cells in prop::collection::btree_set((1u64..30, 1u64..30), 0..80),
        keep in 1u64..5,
        m in 1u64..30,
        n in 1u64..30,
    ) {
        let big = IndexSet2D::Explicit(cells.clone());
        let small = IndexSet2D::explicit(cells.into_iter().filter(|c| (c.0 + c.1) % keep == 0));
        let (db, ds) = (double_density(&big, m, n), double_density(&small, m, n));
        prop_assert!((0.0..=1.0).contains(&db));
        prop_assert!(ds <= db);
    }

    #[test]
    fn verdicts_are_monotone_under_inclusion(
        r in 1u64..6,
        c in 1u64..6,
        band in 0u64..4,
        m in 8u64..80,
        n in 8u64..80,
    ) {
        // big: a sparse lattice plus a band around the diagonal; small keeps part of it
        let big = IndexSet2D::predicate("big", move |j, k| (j % r == 0 && k % c == 0) || j.abs_diff(k) <= band);
        let small = IndexSet2D::predicate("small", move |j, k| {
            ((j % r == 0 && k % c == 0) || j.abs_diff(k) <= band) && (j + k) % 3 == 0
        });
        for ideal in [IdealModel::Fin, IdealModel::DensityZero, IdealModel::RowColumn] {
            let vb = is_negligible(&ideal, &big, (m, n), 0.01).unwrap().verdict;
            let vs = is_negligible(&ideal, &small, (m, n), 0.01).unwrap().verdict;
            if vb == Verdict::Negligible {
                prop_assert_ne!(vs, Verdict::NotNegligible, "{:?}", ideal);
            }
        }
    }

    #[test]
    fn pre_cauchy_window_invariants(
        modulus in 1u64..5,
        t1 in 0.05f64..0.9,
        dt in 0.0f64..0.5,
        m in 1u64..12,
        n in 1u64..12,
    ) {
        let s = SimpleSpace::new(Ddf::exp_simple(1.0).unwrap()).unwrap();
        let x = DoubleSequence::new("mod", move |j, k| Point(((j * k) % (modulus + 1)) as f64 * 0.3));
        let ex = QuadOptions::exact();
        let a = pre_cauchy_indicator(&s, &x, t1, (m, n), &ex).unwrap();
        let b = pre_cauchy_indicator(&s, &x, t1 + dt, (m, n), &ex).unwrap();
        prop_assert!(b.value <= a.value);
        // diagonal quadruples are always close
        let mn = (m * n) as u128;
        prop_assert!(a.count.unwrap() <= mn * mn - mn);
        // averaged sum sandwich at every t
        let sum = averaged_levy_sum(&s, &x, (m, n), &ex).unwrap().value;
        let half = pre_cauchy_indicator(&s, &x, t1 / 2.0, (m, n), &ex).unwrap().value;
        prop_assert!(t1 * a.value <= sum + 1e-9);
        prop_assert!(sum <= t1 / 2.0 + half + 1e-9);
    }

    #[test]
    fn subsequence_along_everything_is_the_sequence(j in 1u64..500, k in 1u64..500) {
        let x = DoubleSequence::new("x", |j, k| (j as f64).sin() + (k as f64).sqrt());
        let y = subsequence_along(&x, &IndexSet2D::All).unwrap();
        prop_assert_eq!(x.at(j, k), y.at(j, k));
    }

    #[test]
    fn equilateral_pre_cauchy_counts_mixed_pairs(ones in 0u64..10, m in 1u64..10) {
        let s = EquilateralSpace::new(Ddf::unit_step(0.6).unwrap()).unwrap();
        let x = DoubleSequence::new("rows", move |j, _| Point(if j <= ones { 1.0 } else { 0.0 }));
        let r = pre_cauchy_indicator(&s, &x, 0.5, (m, 3), &QuadOptions::exact()).unwrap();
        let a = ones.min(m) as u128 * 3;
        let b = (m * 3) as u128 - a;
        prop_assert_eq!(r.count.unwrap(), 2 * a * b);
    }
}
