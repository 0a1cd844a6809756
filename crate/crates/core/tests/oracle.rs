use sinvar::model::{ExtensionChoice, ModelParams};
use sinvar::oracle::*;
use sinvar::spectrum::{build_spectrum, ScanConfig};

const MINUS_ETA2: [f64; 7] =
    [-2.0000000014, 2.0513955205, 2.5121231679, 2.8946719761, 3.2295735406, 3.5313809937, 3.8084263545];

#[test]
fn harmonic_oscillator_levels() {
    let one = |_: f64| 1.0;
    let q = |x: f64| x * x;
    let sl = SturmLiouville { p: &one, q: &q, w: &one };
    let even = energies(&assemble(&sl, 0.0, 10.0, 4000, EndCondition::Robin(0.0)).unwrap(), 3).unwrap();
    let odd = energies(&assemble(&sl, 0.0, 10.0, 4000, EndCondition::Dirichlet).unwrap(), 3).unwrap();
    for k in 0..3 {
        assert!((even[k].value - (4 * k + 1) as f64).abs() < 1e-4);
        assert!((odd[k].value - (4 * k + 3) as f64).abs() < 1e-4);
        assert_eq!(sign_changes(&even[k].vector, 1e-8), k);
    }
}

#[test]
fn minus_levels_match_reference() {
    let p = ModelParams::from_eta(-2.0).unwrap();
    let levels = oracle_spectrum(&p, BoundaryRule::MatchMode1, &GridSpec::oracle_default(), 7).unwrap();
    for (l, want) in levels.iter().zip(MINUS_ETA2) {
        assert!((l.y - want).abs() <= 1e-8, "level {}: {} vs {want}", l.n, l.y);
        assert_eq!(l.nodes, l.n - 1);
    }
    assert!((levels[0].y - p.eta).abs() <= 1e-8);
}

#[test]
fn plus_levels_match_reference() {
    let p = ModelParams::from_eta(-2.0).unwrap();
    let levels = oracle_spectrum(&p, BoundaryRule::MatchMode2, &GridSpec::oracle_default(), 4).unwrap();
    for (l, want) in levels.iter().zip([1.9977917167, 2.4463377151, 2.8247684261, 3.1583149730]) {
        assert!((l.y - want).abs() <= 1e-8, "level {}: {} vs {want}", l.n, l.y);
    }
}

#[test]
fn second_order_convergence() {
    let p = ModelParams::from_eta(-2.0).unwrap();
    let exact = sinvar::model::EnergyPoint::from_y(2.0513955175017, &p).e;
    let g = GridSpec::new(1e-3, 40.0, 2000).unwrap();
    let l = oracle_spectrum(&p, BoundaryRule::MatchMode1, &g, 2).unwrap()[1];
    let ratio = (l.e_coarse - exact) / (l.e_fine - exact);
    assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
    assert!((l.e - exact).abs() < 0.1 * (l.e_fine - exact).abs());
}

#[test]
fn longer_box_only_lowers_levels() {
    let p = ModelParams::from_eta(-2.0).unwrap();
    let short = oracle_spectrum(&p, BoundaryRule::MatchMode1, &GridSpec::new(1e-3, 6.0, 4000).unwrap(), 4).unwrap();
    let long = oracle_spectrum(&p, BoundaryRule::MatchMode1, &GridSpec::new(1e-3, 12.0, 8000).unwrap(), 4).unwrap();
    for (s, l) in short.iter().zip(&long) {
        assert!(l.e_fine <= s.e_fine + 1e-9);
    }
}

#[test]
fn agrees_with_sge_spectrum() {
    for (eta, ext) in [
        (-2.0, ExtensionChoice::MinusIdentity),
        (-3.0, ExtensionChoice::MinusIdentity),
        (-2.0, ExtensionChoice::PlusIdentity),
    ] {
        let p = ModelParams::from_eta(eta).unwrap();
        let sge = build_spectrum(eta, ext, &ScanConfig::default_for(eta), &p).unwrap();
        let oracle = oracle_spectrum(&p, BoundaryRule::for_extension(ext), &GridSpec::oracle_default(), 6).unwrap();
        let oy: Vec<f64> = oracle.iter().map(|l| l.y).collect();
        let report = cross_validate(&sge.ys()[..6], &oy, 1e-6).unwrap();
        assert!(report.pass, "{report:?}");
        for (s, o) in sge.levels.iter().zip(&oracle) {
            assert_eq!(s.nodes, o.nodes);
        }
    }
}
