use flopgw::algebra::rational::{int, rat, Rational};
use flopgw::algebra::RatFunc;
use flopgw::flop;
use flopgw::givental::genus_one::{genus_one_form, genus_one_table};
use flopgw::verify::{cohomology_checks, Report};
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn pipeline_quantum_part_is_the_flop_generating_function() {
    for r in 1..=3u32 {
        let form = genus_one_form(r, &Default::default()).unwrap();
        let g = flop::g_function(r).f;
        let kappa = rat(if r % 2 == 1 { 1 } else { -1 } * (r as i64 + 1), 24);
        assert_eq!(form.remainder, g.scale_rational(&kappa), "r={r}");
        // the one-point defect vanishes whichever source of F is used
        let (from_pipeline, _) = flop::genus1_onepoint_defect_with(r, &form.remainder, &Rational::zero()).unwrap();
        let (from_closed, _) = flop::genus1_onepoint_defect_with(r, &g.scale_rational(&kappa), &Rational::zero()).unwrap();
        assert!(from_pipeline.is_zero() && from_closed.is_zero());
    }
}

#[test]
fn table_is_series_of_g_over_degree() {
    // [q^d] kappa G = kappa s^{d-1}, so <>_{1,d} = kappa s^{d-1} / d
    for r in 1..=3u32 {
        let form = genus_one_form(r, &Default::default()).unwrap();
        let table = genus_one_table(&form, 6).unwrap();
        let series = flop::g_function(r).series(7);
        let kappa = rat(if r % 2 == 1 { 1 } else { -1 } * (r as i64 + 1), 24);
        for row in &table.rows {
            let d = row.degree as usize;
            assert_eq!(row.value, &kappa * &series[d] / int(d as i64), "r={r} d={d}");
        }
    }
}

#[test]
fn chern_shift_breaks_the_defect() {
    let form = genus_one_form(2, &Default::default()).unwrap();
    let (d, report) = flop::genus1_onepoint_defect_with(2, &form.remainder, &int(-1)).unwrap();
    assert_eq!(d, rat(1, 24));
    assert_eq!(report.total, "1/24");
}

#[test]
fn report_roundtrips_through_json() {
    let mut rep = Report::new("cohomology");
    rep.extend(cohomology_checks(1));
    assert!(rep.passed());
    let text = serde_json::to_string(&rep).unwrap();
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(rep, back);
    assert!(!text.contains("timing_ms"));
}

fn delta_via_library(r: u32, m: u32) -> RatFunc {
    flop::delta_g_polynomial(r, m).eval_in_q(r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn delta_polynomials_are_integral_with_reciprocal_parity(r in 1u32..=6, m in 1u32..=5) {
        let p = flop::delta_g_polynomial(r, m);
        prop_assert!(p.is_integral());
        let h = delta_via_library(r, m);
        prop_assert_eq!(&h, &flop::delta_g_direct(r, m));
        let parity = if m % 2 == 1 { 1 } else { -1 };
        prop_assert_eq!(h.invert_variable(), h.scale_rational(&int(parity)));
    }
}
