//! Property tests over the public API.

use bgg_core::bgg::{alternating_multiplicity, shifted_action, WeylElement};
use bgg_core::exec::Mode;
use bgg_core::gt::{
    enumerate_patterns, norm_sq, weight_multiplicities, weight_multiplicity, Generator, Irrep, IrrepCache, IrrepLabel,
    Weight,
};
use bgg_core::harmonic::{phase_of_root, s1_strings};
use bgg_core::overlaps::{legendre_b, overlaps_recurrence, overlaps_recurrence_table};
use bgg_core::principal::{umu_a_matrix, KType, SplitCartan, RHO_SCALE};
use bgg_core::rep::WeightedRep;
use bgg_core::report::{write_report, Format, OverlapRow, ReportHeader};
use bgg_core::tensor::decompose_with_coadjoint;
use proptest::prelude::*;

fn label(span: i64) -> impl Strategy<Value = IrrepLabel> {
    (0..=span, 0..=span, -2i64..=2).prop_filter_map("span", move |(a, b, t)| {
        (a + b <= span).then(|| IrrepLabel::new(a + b + t, b + t, t).unwrap())
    })
}

fn dominant(max: i64) -> impl Strategy<Value = Weight> {
    (0..=max, 0..=max).prop_map(|(a, b)| IrrepLabel::from_dynkin(a, b).unwrap().as_weight())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sl2_triples_exact(l in label(4)) {
        let r = Irrep::build(&l).unwrap();
        for i in 1..=2 {
            let x = r.generator(Generator::raising(i));
            let y = r.generator(Generator::lowering(i));
            prop_assert_eq!(&x.commutator(y).unwrap(), r.generator(Generator::cartan(i)));
        }
    }

    #[test]
    fn multiplicities_sum_to_dimension_and_dualize(l in label(6)) {
        let m = weight_multiplicities(&l).unwrap();
        prop_assert_eq!(m.values().sum::<usize>(), enumerate_patterns(&l).unwrap().len());
        let d = l.dual();
        for (w, k) in &m {
            prop_assert_eq!(weight_multiplicity(&d, &-*w), *k);
        }
    }

    #[test]
    fn norms_translate(l in label(5), t in -3i64..=3) {
        for p in enumerate_patterns(&l).unwrap().into_iter().take(20) {
            prop_assert_eq!(norm_sq(&p), norm_sq(&p.translated(t)));
        }
    }

    #[test]
    fn phase_is_partial_isometry(l in label(4), i in 1usize..=2, raise: bool) {
        let r = Irrep::build(&l).unwrap();
        let p = phase_of_root(&WeightedRep::from_irrep(&r), i, raise);
        prop_assert!(p.partial_isometry_defect() < 1e-10);
        if i == 1 {
            // one kernel vector per s1-string
            prop_assert_eq!(p.kernel_rank, s1_strings(&r).strings.len());
        }
    }

    #[test]
    fn coadjoint_tensor_has_eight_times_the_dimension(l in label(3)) {
        let cache = IrrepCache::new();
        let r = cache.get(&l).unwrap();
        let (t, d) = decompose_with_coadjoint(&r, &cache).unwrap();
        let total: usize = d.components.iter().map(|c| c.irrep.dim()).sum();
        prop_assert_eq!(total, 8 * r.dim());
        let c = d.check(&t);
        prop_assert!(c.gram < 1e-9 && c.intertwining < 1e-9);
    }

    #[test]
    fn shifted_action_is_an_involution_for_simple_reflections(a in -4i64..=4, b in -4i64..=4) {
        let w = Weight::new(a + b, b, 0);
        for s in [WeylElement::S1, WeylElement::S2] {
            let back = shifted_action(s, &shifted_action(s, &w));
            prop_assert!(back.sl3_equivalent(&w));
        }
    }

    #[test]
    fn index_identity(lam in dominant(3), pi in label(6)) {
        let want = (pi.dynkin() == (lam.h(1), lam.h(2))) as i64;
        prop_assert_eq!(alternating_multiplicity(&lam, &pi), want);
    }

    #[test]
    fn legendre_approximation_is_bounded(m in 1i64..400, j in 0i64..400, k in 0i64..6) {
        let j = j.min(m);
        prop_assert!(legendre_b(m, j, k).abs() <= 1.0 / (m + 1) as f64 + 1e-15);
    }

    #[test]
    fn double_recurrence_tracks_exact_for_small_k(m in 10i64..60) {
        let d = overlaps_recurrence(m, 8).unwrap();
        let e = overlaps_recurrence_table(m, 8, true).unwrap();
        for j in 0..=m {
            prop_assert!((d.get(j, 0) - 1.0 / (m + 1) as f64).abs() < 1e-15);
            for k in 0..=8 {
                prop_assert!((d.get(j, k) - e.get(j, k)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn principal_block_is_linear_in_a(l in label(3), c in -2.0f64..2.0, cp in -2.0f64..2.0, a in -2i64..=2, b in -2i64..=2) {
        let cache = IrrepCache::new();
        let k = KType::new(&l, &cache).unwrap();
        let mu = Weight::new(a + b, b, 0);
        let h = umu_a_matrix(&k, SplitCartan { c: 1.0, c_prime: 0.0 }, &mu, RHO_SCALE).unwrap();
        let hp = umu_a_matrix(&k, SplitCartan { c: 0.0, c_prime: 1.0 }, &mu, RHO_SCALE).unwrap();
        let mix = umu_a_matrix(&k, SplitCartan { c, c_prime: cp }, &mu, RHO_SCALE).unwrap();
        for ((x, y), z) in h.maps.iter().zip(&hp.maps).zip(&mix.maps) {
            let lhs = z.left.kronecker(&z.right);
            let rhs = x.left.kronecker(&x.right) * c + y.left.kronecker(&y.right) * cp;
            prop_assert!((lhs - rhs).amax() < 1e-10);
        }
        prop_assert!(mix.weight_leak < 1e-12);
    }
}

#[test]
fn csv_report_starts_with_json_header() {
    let rows = vec![OverlapRow { m: 1, j: 0, k: 0, a: 0.5, b: 0.5, abs_err: 0.0 }];
    let header = ReportHeader::new("overlap", "abc");
    let mut out = Vec::new();
    write_report(&mut out, Format::Csv, &header, &rows).unwrap();
    let text = String::from_utf8(out).unwrap();
    let first = text.lines().next().unwrap();
    let json: serde_json::Value = serde_json::from_str(first.strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(json["config_hash"], "abc");
    assert_eq!(text.lines().nth(1), Some("m,j,k,a,b,abs_err"));
}

#[test]
fn modes_agree() {
    let labels = IrrepLabel::all_up_to_span(5);
    let f = |l: &IrrepLabel| enumerate_patterns(l).unwrap().len();
    assert_eq!(bgg_core::exec::map(Mode::Sequential, &labels, f), bgg_core::exec::map(Mode::Parallel, &labels, f));
}
