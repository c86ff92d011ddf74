use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use quadcf_core::arith::isqrt;
use quadcf_core::cf::{cf_expand, cf_states, cf_step, is_reduced};
use quadcf_core::forms::{
    class_cycles, enumerate_reduced_forms, form_root, is_reduced_form, is_valid_discriminant, pell4_fundamental,
    rho_step,
};
use quadcf_core::matrix::IntMatrix2;
use quadcf_core::surd::Surd;

fn reversal_partner(x: &Surd) -> Surd {
    // -1/x'
    IntMatrix2::from_i64(0, -1, 1, 0).unwrap().apply(&x.conjugate())
}

fn check_galois(x: &Surd) {
    let e = cf_expand(x);
    assert_eq!(e.preperiod.is_empty(), is_reduced(x), "{x}");
    if is_reduced(x) {
        let y = reversal_partner(x);
        assert!(is_reduced(&y), "partner of {x}");
        let mut rev = e.period.clone();
        rev.reverse();
        assert_eq!(cf_expand(&y).period, rev, "{x}");
        assert_eq!(e.period_matrix().apply(x), *x, "{x}");
    }
}

#[test]
fn galois_exhaustive_small_grid() {
    for d in 2i64..=40 {
        let dd = BigInt::from(d);
        if isqrt(&dd).pow(2) == dd {
            continue;
        }
        for q in -12i64..=12 {
            if q == 0 {
                continue;
            }
            for p in -15i64..=15 {
                check_galois(&Surd::from_i64(p, q, d).unwrap());
            }
        }
    }
}

fn surd_strategy() -> impl Strategy<Value = Surd> {
    (2i64..=10_000, -200i64..=200, -60i64..=60)
        .prop_filter("non-square radicand and nonzero q", |(d, _, q)| {
            let s = (*d as f64).sqrt() as i64;
            *q != 0 && (s - 1..=s + 1).all(|r| r * r != *d)
        })
        .prop_map(|(d, p, q)| Surd::from_i64(p, q, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn galois_random(x in surd_strategy()) {
        check_galois(&x);
    }

    #[test]
    fn step_soundness(x in surd_strategy()) {
        let (a, y) = cf_step(&x);
        prop_assert_eq!(IntMatrix2::digit(&a).apply(&y), x.clone());
        // next > 1
        prop_assert!(y.sign_vs(&BigInt::one(), &BigInt::one()) > 0);
    }

    #[test]
    fn tail_states_are_bounded(x in surd_strategy()) {
        let e = cf_expand(&x);
        let states: Vec<Surd> = cf_states(&x)
            .skip(e.preperiod.len())
            .take(2 * e.period.len())
            .map(|(_, s)| s)
            .collect();
        for s in states {
            prop_assert!(is_reduced(&s));
            let root = isqrt(s.d());
            prop_assert!(s.p().is_positive() && s.p() <= &root);
            // 0 < Q < 2 sqrt d  <=>  Q > 0 and Q^2 < 4d
            prop_assert!(s.q().is_positive());
            prop_assert!(s.q() * s.q() < BigInt::from(4) * s.d());
        }
    }

    #[test]
    fn automorph_fixes_any_surd(x in surd_strategy()) {
        let e = cf_expand(&x);
        let m = e.automorph();
        prop_assert_eq!(m.det(), BigInt::one());
        prop_assert_eq!(m.apply(&x), x.clone());
    }

    #[test]
    fn moebius_respects_real_value(x in surd_strategy(), a in -5i64..5, b in -5i64..5, c in -5i64..5) {
        // build a unimodular matrix (a, b; c, d) when solvable with small d
        let d = (1..=6i64).find(|d| a * d - b * c == 1);
        if let Some(d) = d {
            let g = IntMatrix2::from_i64(a, b, c, d).unwrap();
            let v = x.to_f64();
            let gx = g.apply(&x);
            prop_assert_eq!(gx.d(), x.d());
            let expect = (a as f64 * v + b as f64) / (c as f64 * v + d as f64);
            prop_assert!((gx.to_f64() - expect).abs() <= 1e-9 * expect.abs().max(1.0));
        }
    }
}

fn valid_discriminants(max: i64) -> impl Iterator<Item = BigInt> {
    (5..=max).map(BigInt::from).filter(is_valid_discriminant)
}

#[test]
fn cycle_closure_and_partition() {
    for d in valid_discriminants(1500) {
        let reduced = enumerate_reduced_forms(&d).unwrap();
        let cycles = class_cycles(&d).unwrap();
        let mut all: Vec<_> = cycles.iter().flat_map(|c| c.forms.iter().cloned()).collect();
        all.sort();
        assert_eq!(all, reduced, "d = {d}");
        for c in &cycles {
            assert!(!c.is_empty());
            for (i, f) in c.forms.iter().enumerate() {
                assert!(is_reduced_form(f));
                assert_eq!(f.discriminant(), d);
                let next = &c.forms[(i + 1) % c.len()];
                assert_eq!(&rho_step(f).unwrap(), next);
            }
        }
    }
}

#[test]
fn roots_of_reduced_forms() {
    for d in valid_discriminants(1500) {
        for c in class_cycles(&d).unwrap() {
            let f = &c.forms[0];
            assert!(f.a().is_positive());
            // root in (0, 1), reciprocal reduced
            assert_eq!(c.expansion.preperiod, vec![BigInt::zero()], "d = {d}");
            let inv = IntMatrix2::swap().apply(&c.root);
            assert!(is_reduced(&inv), "d = {d}");
            assert_eq!(cf_expand(&inv).period, c.expansion.period);
            // every form with a > 0 in the cycle has the same kind of root
            for g in c.forms.iter().filter(|g| g.a().is_positive()) {
                assert!(is_reduced(&IntMatrix2::swap().apply(&form_root(g))));
            }
        }
    }
}

// Measured over every valid d < 3000: the rho cycle has the CF period length
// when it is even and twice it when it is odd.
#[test]
fn cycle_length_versus_period_length() {
    for d in valid_discriminants(3000) {
        for c in class_cycles(&d).unwrap() {
            let l = c.period().len();
            let expect = if l % 2 == 0 { l } else { 2 * l };
            assert_eq!(c.len(), expect, "d = {d}, first form {}", c.forms[0]);
        }
    }
}

const BRUTE_Y_LIMIT: i64 = 2_000_000;

// smallest y <= BRUTE_Y_LIMIT with d y^2 + 4 a square
fn brute_pell(d: i64) -> Option<(i64, i64)> {
    (1..=BRUTE_Y_LIMIT).find_map(|y| {
        let t = d * y * y + 4;
        let x = (t as f64).sqrt().round() as i64;
        (x - 1..=x + 1).find(|x| x * x == t).map(|x| (x, y))
    })
}

#[test]
fn pell_matches_brute_force() {
    for d in valid_discriminants(200) {
        let sol = pell4_fundamental(&d).unwrap();
        assert_eq!(&sol.x * &sol.x - &d * &sol.y * &sol.y, BigInt::from(4));
        assert!(sol.ln_unit() > 0.0);
        match brute_pell(d.to_i64().unwrap()) {
            Some((bx, by)) => assert_eq!((sol.x.clone(), sol.y.clone()), (bx.into(), by.into()), "d = {d}"),
            None => assert!(sol.y > BigInt::from(BRUTE_Y_LIMIT), "d = {d}"),
        }
    }
}

#[test]
fn automorph_eigenvalue_is_the_pell_unit() {
    for d in valid_discriminants(600) {
        let sol = pell4_fundamental(&d).unwrap();
        for c in class_cycles(&d).unwrap() {
            let m = c.automorph();
            assert_eq!(m.apply(&c.root), c.root);
            assert_eq!(m.trace(), sol.x, "d = {d}");
            let rel = (m.ln_dominant_eigenvalue() - sol.ln_unit()).exp_m1().abs();
            assert!(rel < 1e-9, "d = {d}: {rel}");
        }
    }
}

#[test]
fn oracle_agrees_with_cycle_count() {
    use quadcf_core::oracle::oracle_components;
    for d in valid_discriminants(300) {
        let forms = enumerate_reduced_forms(&d).unwrap();
        let labels = oracle_components(&forms, &d).unwrap();
        let cycles = class_cycles(&d).unwrap();
        let cycle_of = |f| cycles.iter().position(|c| c.forms.contains(f)).unwrap();
        // same cycle <=> same oracle component
        for (i, f) in forms.iter().enumerate() {
            for (j, g) in forms.iter().enumerate() {
                assert_eq!(labels[i] == labels[j], cycle_of(f) == cycle_of(g), "d = {d}: {f} vs {g}");
            }
        }
    }
}
