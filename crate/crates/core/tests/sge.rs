use proptest::prelude::*;
use sinvar::model::{EnergyPoint, ExtensionChoice, ModelParams};
use sinvar::sge::*;
use sinvar::spectrum::{find_roots, refine_root, ScanConfig};
use sinvar::verify;

const MINUS_ROOTS: [f64; 6] =
    [-2.0, 2.0513955175017, 2.512123163986, 2.8946719739474, 3.2295735419782, 3.5313809952333];

#[test]
fn wronskian_limits_match_small_x_extrapolation() {
    assert!(verify::wronskian_limit_residual(20, verify::DEFAULT_SEED).unwrap() <= 1e-5);
}

#[test]
fn simplified_limits_match_unsimplified() {
    assert!(verify::dual_form_residual(100, verify::DEFAULT_SEED).unwrap() <= 1e-9);
}

#[test]
fn reference_modes_have_unit_wronskian() {
    assert!(verify::mode_pairing_residual().unwrap() <= 1e-8);
}

#[test]
fn reference_mode_parity() {
    let p = ModelParams::from_eta(-2.0).unwrap();
    for x in [0.3, 1.0, 2.5] {
        let m1 = reference_mode(ReferenceMode::Mode1, x, &p).unwrap();
        let m2 = reference_mode(ReferenceMode::Mode2, x, &p).unwrap();
        assert_eq!(reference_mode(ReferenceMode::Mode1, -x, &p).unwrap(), -m1);
        assert_eq!(reference_mode(ReferenceMode::Mode2, -x, &p).unwrap(), m2);
    }
    assert!(reference_mode(ReferenceMode::Mode1, 0.0, &p).is_err());
    assert_eq!(ReferenceMode::for_extension(ExtensionChoice::MinusIdentity).parity(), Parity::Odd);
    assert_eq!(ReferenceMode::for_extension(ExtensionChoice::PlusIdentity).parity(), Parity::Even);
}

#[test]
fn ground_root_sits_at_eta() {
    assert!(verify::ground_root_residual().unwrap() <= 1e-12);
    assert_eq!(sge_minus(-3.0, -3.0).unwrap(), 0.0);
}

#[test]
fn connection_residual_vanishes_at_sge_roots() {
    let p = ModelParams::from_eta(-2.0).unwrap();
    for y in MINUS_ROOTS {
        let ep = EnergyPoint::from_y(y, &p);
        let r = connection_residual(ExtensionChoice::MinusIdentity, &ep, &p).unwrap();
        let off = connection_residual(ExtensionChoice::MinusIdentity, &EnergyPoint::from_y(y + 0.05, &p), &p).unwrap();
        assert!(r.abs() <= 1e-8 * off.abs().max(1e-300), "y = {y}: {r} vs {off}");
    }
}

#[test]
fn residual_proportional_to_sge() {
    assert!(verify::residual_proportionality(50, verify::DEFAULT_SEED).unwrap() <= 1e-12);
}

#[test]
fn rescaled_reference_mode_leaves_roots_unchanged() {
    let p = ModelParams::from_eta(-2.0).unwrap();
    let cfg = ScanConfig::new(1.5, 4.0, 0.02, 1e-10, 1e-8).unwrap();
    let residual = |scale: f64| {
        move |y: f64| {
            let ep = EnergyPoint::from_y(y, &p);
            connection_residual_scaled(ExtensionChoice::MinusIdentity, &ep, &p, scale).unwrap()
        }
    };
    let (plain, _) = find_roots(residual(1.0), &cfg).unwrap();
    let (scaled, _) = find_roots(residual(7.0), &cfg).unwrap();
    assert_eq!(plain.len(), scaled.len());
    assert!(plain.len() >= 5);
    for (a, b) in plain.iter().zip(&scaled) {
        assert!((a - b).abs() <= cfg.refine_tol);
    }
    for (a, b) in plain.iter().zip(&MINUS_ROOTS[1..]) {
        assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }
}

#[test]
fn minus_sge_has_at_least_six_sign_changes() {
    let cfg = ScanConfig::new(-2.5, 8.0, 0.02, 1e-10, 1e-8).unwrap();
    let outcome = sinvar::spectrum::scan_roots(|y| sge_minus(y, -2.0).unwrap(), &cfg);
    assert!(outcome.brackets.len() >= 6);
}

#[test]
fn plus_roots_refine_to_frozen_values() {
    for (lo, hi, want) in [(1.95, 2.05, 1.9977917144470585), (2.4, 2.5, 2.446337711126923)] {
        let y = refine_root(|y| sge_plus(y, -2.0).unwrap(), (lo, hi), 1e-13).unwrap();
        assert!((y - want).abs() <= 1e-10, "{y} vs {want}");
    }
}

#[test]
fn plus_residual_proportional_to_sge() {
    let p = ModelParams::from_eta(-2.0).unwrap();
    let ratios: Vec<f64> = [0.7, 1.4, 2.2, 3.3]
        .iter()
        .map(|&y| {
            let ep = EnergyPoint::from_y(y, &p);
            let r = connection_residual(ExtensionChoice::PlusIdentity, &ep, &p).unwrap();
            let t = sge_plus_terms(y, p.eta).unwrap();
            r / t.value
        })
        .collect();
    for r in &ratios[1..] {
        assert!(((r - ratios[0]) / ratios[0]).abs() <= 1e-8, "{ratios:?}");
    }
}

proptest! {
    #[test]
    fn sge_terms_are_finite(y in -8.0f64..8.0, eta in -4.0f64..-0.5) {
        for ext in [ExtensionChoice::MinusIdentity, ExtensionChoice::PlusIdentity] {
            let t = sge_terms(ext, y, eta).unwrap();
            prop_assert!(t.value.is_finite() && t.first.is_finite() && t.second.is_finite());
            prop_assert!(t.relative_residual() <= 1.0 + 1e-12);
        }
    }
}
