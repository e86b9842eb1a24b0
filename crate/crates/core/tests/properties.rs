use num_traits::Zero;
use proptest::prelude::*;

use omvals::config::Config;
use omvals::diffdisc::{p_discriminant, p_discriminant_report};
use omvals::montes::{montes_factorize, OMFactorization};
use omvals::oracle::{naive_discriminant, naive_resultant};
use omvals::polyz::{vp_int, PIntPoly, Val};
use omvals::presultant::p_resultant;

fn monic(max_deg: usize, bound: i64) -> impl Strategy<Value = PIntPoly> {
    prop::collection::vec(-bound..=bound, 1..=max_deg).prop_map(|mut c| {
        c.push(1);
        PIntPoly::from_i64s(&c)
    })
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 13, 101])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn disc_matches_oracle(g in monic(8, 200), p in prime()) {
        let d = naive_discriminant(&g);
        prop_assume!(!d.is_zero());
        let r = p_discriminant(&g, p).unwrap();
        prop_assert_eq!(r.v_disc, vp_int(p, &d));
        let (ind, v) = (r.ind.fin().unwrap(), r.v_disc.fin().unwrap());
        prop_assert_eq!(v, 2 * ind + r.sum_local_disc);
    }

    #[test]
    fn res_symmetric(f in monic(6, 100), g in monic(6, 100), p in prime()) {
        prop_assert_eq!(p_resultant(&f, &g, p).unwrap(), p_resultant(&g, &f, p).unwrap());
    }

    #[test]
    fn res_multiplicative(f in monic(4, 60), g in monic(4, 60), h in monic(3, 60), p in prime()) {
        let gh = &g * &h;
        let whole = p_resultant(&f, &gh, p).unwrap();
        let parts = p_resultant(&f, &g, p).unwrap() + p_resultant(&f, &h, p).unwrap();
        prop_assert_eq!(whole, parts);
        prop_assert_eq!(whole, vp_int(p, &naive_resultant(&f, &gh)));
    }

    #[test]
    fn linear_factor_resultant(f in monic(6, 1000), a in -1000i64..=1000, p in prime()) {
        // Res(f, x − a) = ±f(a)
        let g = PIntPoly::from_i64s(&[-a, 1]);
        let fa = f.eval(&a.into());
        prop_assert_eq!(p_resultant(&f, &g, p).unwrap(), vp_int(p, &fa));
    }

    #[test]
    fn factorization_invariants(g in monic(8, 500), p in prime()) {
        prop_assume!(!naive_discriminant(&g).is_zero());
        let fac = montes_factorize(&g, p, None).unwrap();
        let deg: u64 = fac.reps.iter().map(|r| r.degree).sum();
        prop_assert_eq!(deg, g.deg() as u64);
        for r in &fac.reps {
            prop_assert!(r.phi().is_monic());
            prop_assert_eq!(r.phi().deg() as u64, r.degree);
            prop_assert!(r.h_phi.lower().is_none_or(|h| h > 0));
        }
    }
}

#[test]
fn factorization_json_roundtrip() {
    let g = PIntPoly::from_i64s(&[6, 2, 0, 2, 1]);
    for p in [2, 3, 5] {
        let fac = montes_factorize(&g, p, None).unwrap();
        let text = serde_json::to_string(&fac).unwrap();
        let back: OMFactorization = serde_json::from_str(&text).unwrap();
        assert_eq!(back, fac);
    }
}

#[test]
fn report_json_roundtrip() {
    let g = omvals::clibench::ex2(7, 3).unwrap();
    let r = p_discriminant_report(&g, 7, &Config::default(), false).unwrap();
    let text = serde_json::to_string(&r.result).unwrap();
    assert_eq!(serde_json::from_str::<omvals::diffdisc::DiscResult>(&text).unwrap(), r.result);
    for d in &r.differents {
        let text = serde_json::to_string(d).unwrap();
        assert_eq!(&serde_json::from_str::<omvals::diffdisc::DifferentResult>(&text).unwrap(), d);
    }
    assert_eq!(serde_json::to_string(&Val::Inf).unwrap(), "\"infinity\"");
}

#[test]
fn deterministic_output() {
    let g = omvals::clibench::ex3(5, 4).unwrap();
    let a = montes_factorize(&g, 5, None).unwrap();
    let b = montes_factorize(&g, 5, None).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
