#![allow(clippy::approx_constant)] // quoted seven-decimal radii

use seqsteer::*;
use std::f64::consts::{FRAC_PI_4, SQRT_2};

fn quarter() -> StateParamsF64 {
    StateParamsF64::new(1.0, FRAC_PI_4).unwrap()
}

fn assert_all_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (k, (g, w)) in got.iter().zip(want).enumerate() {
        assert!((g - w).abs() <= tol, "entry {k}: {g} vs {w}");
    }
}

#[test]
fn two_case3_bobs() {
    let report = run_chain(&ChainConfig::new(quarter(), vec![StrategyMixture::case(CaseId::Three); 2])).unwrap();
    let s17 = 17f64.sqrt() / 4.0;
    assert_all_close(&report.radii(), &[SQRT_2, 1.0, 5f64.sqrt() / 2.0, 1.0, s17, s17], 1e-8);
    let parties: Vec<_> = report.links.iter().map(|l| l.party.as_str()).collect();
    assert_eq!(parties, ["Bob1", "Bob2", "Charlie"]);
    assert_eq!(report.links[0].class, SteeringClass::OneWayForward);
    assert_eq!(report.links[2].class, SteeringClass::TwoWay);
    for l in &report.links {
        assert!(l.residual <= 1e-7);
        assert!(validate(&l.state).passed());
    }
}

#[test]
fn chain_agrees_with_closed_forms() {
    let cases = [(0.00097, 0.0625, false), (0.0009, 0.06, true), (0.3, 0.5, false), (0.3, 0.5, true)];
    for (p1, p2, d) in cases {
        let bobs = vec![StrategyMixture::from_pq(p1, 0.0).unwrap(), StrategyMixture::from_pq(p2, 0.0).unwrap()];
        let numeric = run_chain(&ChainConfig::new(quarter(), bobs).with_disclosure(d)).unwrap().radii();
        let closed = four_party_radii(p1, 0.0, p2, 0.0, d).unwrap().as_array();
        assert_all_close(&numeric, &closed, 1e-8);
    }
}

#[test]
fn four_party_degenerate_points() {
    let r = four_party_radii(0.0, 0.0, 0.0, 0.0, false).unwrap();
    let s17 = 17f64.sqrt() / 4.0;
    assert_all_close(&r.as_array(), &[SQRT_2, 1.0, 5f64.sqrt() / 2.0, 1.0, s17, s17], 1e-15);
    let r = four_party_radii(1.0, 0.0, 1.0, 0.0, false).unwrap();
    assert!((r.b1a - SQRT_2).abs() < 1e-15);
    assert!(four_party_radii(0.7, 0.4, 0.0, 0.0, false).is_err());
}

#[test]
fn four_party_reference_lists() {
    // seven-decimal lists reproduced from the closed forms
    let r = four_party_radii(0.00097, 0.0, 0.0625, 0.0, false).unwrap().as_array();
    assert_all_close(&r, &[1.4142135, 1.0000005, 1.1176002, 1.0000034, 1.0000332, 1.0000332], 5e-7);
    let r = four_party_radii(0.0009, 0.0, 0.06, 0.0, true).unwrap().as_array();
    assert_all_close(&r, &[1.4142136, 1.0003728, 1.1176315, 1.0066348, 1.0012759, 1.0012759], 5e-7);
}

#[test]
fn case3_chain_closed_form() {
    for i in 1..=6 {
        let (f, b) = case3_chain_radii(quarter(), i).unwrap();
        assert!((f - (1.0 + 0.25f64.powi(i as i32 - 1)).sqrt()).abs() < 1e-9, "i={i}: {f}");
        assert!((b - 1.0).abs() < 1e-15);
    }
    let (f, _) = case3_chain_radii(quarter(), 3).unwrap();
    assert!((f - 17f64.sqrt() / 4.0).abs() < 1e-9);
    let flat = StateParamsF64::new(1.0, 0.0).unwrap();
    for i in [1, 4] {
        let (f, b) = case3_chain_radii(flat, i).unwrap();
        assert!((f - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
    }
    assert!(case3_chain_radii(quarter(), 0).is_err());
}

#[test]
fn case3_chain_closed_form_off_quarter_pi() {
    // equal-length regime for the first Bobs; later the optimum sits on a
    // conditional state's Bloch length and the closed form overshoots
    let p = StateParamsF64::new(0.9, 0.5).unwrap();
    let report = run_chain(&ChainConfig::new(p, vec![StrategyMixture::case(CaseId::Three); 5])).unwrap();
    for i in 1..=5 {
        let (f, b) = case3_chain_radii(p, i).unwrap();
        let l = &report.links[i - 1];
        assert!(l.r_forward <= f + 1e-9, "Bob{i}: {} vs {f}", l.r_forward);
        assert!((l.r_backward - b).abs() < 1e-8);
        if i <= 3 {
            assert!((l.r_forward - f).abs() < 1e-8, "Bob{i}: {} vs {f}", l.r_forward);
        } else {
            let asm =
                assemblage_from_directions(&l.state, Side::A, &[BlochVector::unit_x(), BlochVector::unit_z()]).unwrap();
            assert!((l.r_forward - asm.max_cell_length()).abs() < 1e-8);
            assert!((l.r_forward - 0.96907039).abs() < 1e-6);
        }
    }
}

#[test]
fn long_case3_chain() {
    let report = run_chain(&ChainConfig::new(quarter(), vec![StrategyMixture::case(CaseId::Three); 20])).unwrap();
    assert_eq!(report.links.len(), 21);
    for (i, l) in report.links.iter().take(20).enumerate() {
        let want = (1.0 + 0.25f64.powi(i as i32)).sqrt();
        assert!((l.r_forward - want).abs() < 1e-9);
        assert!((l.r_backward - 1.0).abs() < 1e-9);
        // past Bob12, R − 1 < 1e-7 and the class is below solver resolution
        if i < 12 {
            assert_eq!(l.class, SteeringClass::OneWayForward);
        }
    }
}

#[test]
fn disclosure_does_not_change_pure_chains() {
    let bobs = vec![StrategyMixture::case(CaseId::One), StrategyMixture::case(CaseId::Three)];
    let a = run_chain(&ChainConfig::new(quarter(), bobs.clone())).unwrap().radii();
    let b = run_chain(&ChainConfig::new(quarter(), bobs).with_disclosure(true)).unwrap().radii();
    assert_all_close(&a, &b, 1e-12);
}
