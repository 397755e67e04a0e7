mod common;

use common::oracle::{self, Params, Terms, DETECTOR_NAMES};
use proptest::prelude::*;
use swapsim::analysis::qm_prediction;
use swapsim::experiment::{
    detection_probabilities, double_pair_audit, exact_counts, BellClass, ClickPattern, DetectorId,
    ExperimentConfig, FourfoldClass, Setting, Sign,
};

const TOL: f64 = 1e-9;

fn config_of(p: &Params) -> ExperimentConfig {
    ExperimentConfig {
        phi_a: p.phi_a,
        phi_d: p.phi_d,
        overlap: p.overlap,
        efficiency: p.efficiency,
        misalignment_deg: p.misalignment_deg,
        ..ExperimentConfig::default()
    }
}

fn pattern_of(mask: u8) -> ClickPattern {
    let detectors: Vec<DetectorId> = DetectorId::ALL
        .into_iter()
        .filter(|d| {
            let i = DETECTOR_NAMES.iter().position(|n| *n == d.name()).unwrap();
            mask & (1 << i) != 0
        })
        .collect();
    ClickPattern::of(&detectors)
}

fn assert_classes_agree(p: &Params) {
    let table = exact_counts(&config_of(p), &[Setting::new(p.phi_a, p.phi_d)]).unwrap();
    let expected = oracle::class_probabilities(p);
    for class in FourfoldClass::ALL {
        let bell = match class.bell {
            BellClass::PsiMinus => 0,
            BellClass::PsiPlus => 1,
        };
        let a = usize::from(class.a_out == Sign::Minus);
        let d = usize::from(class.d_out == Sign::Minus);
        let got = table.rows[0].get(class);
        let want = expected[bell][a][d];
        assert!(
            (got - want).abs() < TOL,
            "{class:?} at {p:?}: engine {got}, oracle {want}"
        );
    }
}

#[test]
fn click_pattern_distribution_matches_oracle_ideal() {
    let p = Params::ideal(45.0, 45.0);
    let dist = detection_probabilities(&config_of(&p)).unwrap();
    let want = oracle::click_probabilities(&p, Terms::Full);
    for (&mask, &q) in &want {
        assert!(
            (dist.get(pattern_of(mask)) - q).abs() < TOL,
            "mask {mask:08b}"
        );
    }
    let listed: f64 = want.values().sum();
    assert!((listed - 1.0).abs() < TOL);
    assert!((dist.total() - 1.0).abs() < TOL);
}

#[test]
fn named_pattern_matches_oracle() {
    let p = Params::ideal(45.0, 45.0);
    let dist = detection_probabilities(&config_of(&p)).unwrap();
    let pattern = ClickPattern::of(&[
        DetectorId::APlus,
        DetectorId::DPlus,
        DetectorId::D1H,
        DetectorId::D2V,
    ]);
    let mask = 0b1001_0101;
    let want = oracle::click_probabilities(&p, Terms::Full)
        .get(&mask)
        .copied()
        .unwrap_or(0.0);
    assert!((dist.get(pattern) - want).abs() < TOL);
}

#[test]
fn imperfect_configs_match_oracle() {
    for (v, eta, m) in [
        (0.0, 1.0, 0.0),
        (0.6, 1.0, 0.0),
        (0.954, 0.7, 4.8),
        (1.0, 0.3, 10.0),
    ] {
        for (pa, pd) in [(0.0, 22.5), (45.0, 67.5), (13.0, -71.0)] {
            let p = Params {
                overlap: v,
                efficiency: eta,
                misalignment_deg: m,
                ..Params::ideal(pa, pd)
            };
            assert_classes_agree(&p);
        }
    }
}

#[test]
fn swapped_correlation_laws_from_oracle() {
    for pa in [0.0, 22.5, 45.0, 67.5, 90.0] {
        for pd in [0.0, 22.5, 45.0, 67.5, 90.0] {
            let p = Params::ideal(pa, pd);
            for (bell, class) in [(0, BellClass::PsiMinus), (1, BellClass::PsiPlus)] {
                let e = oracle::correlation(&p, bell);
                assert!(
                    (e - qm_prediction(pa, pd, class)).abs() < TOL,
                    "({pa}, {pd}) {bell}"
                );
            }
        }
    }
}

#[test]
fn ideal_bell_classes_have_equal_weight() {
    for (pa, pd) in [(0.0, 0.0), (10.0, 80.0), (45.0, 22.5)] {
        let c = oracle::class_probabilities(&Params::ideal(pa, pd));
        let minus: f64 = c[0].iter().flatten().sum();
        let plus: f64 = c[1].iter().flatten().sum();
        assert!((minus - plus).abs() < TOL);
    }
}

#[test]
fn double_pair_audit_matches_oracle() {
    let report = double_pair_audit(&ExperimentConfig::default()).unwrap();
    let pbs = Params::ideal(0.0, 0.0);
    let bare = Params { bare: true, ..pbs };
    for row in &report.rows {
        let terms = match row.term.name() {
            "double_ab" => Terms::DoubleAb,
            "double_cd" => Terms::DoubleCd,
            other => panic!("unexpected term {other}"),
        };
        let signature = match row.signature {
            "psi_minus" => 0,
            "psi_plus" => 1,
            _ => 2,
        };
        let want_pbs = oracle::bsa_acceptance(&pbs, terms, signature);
        let want_bare = oracle::bsa_acceptance(&bare, terms, 0);
        assert!((row.pbs_acceptance - want_pbs).abs() < TOL, "{row:?}");
        assert!((row.bare_acceptance - want_bare).abs() < TOL, "{row:?}");
    }
}

#[test]
fn oracle_source_weights() {
    // Normalization of (A + C)^2 |0> is sqrt(10) with singlet pairs.
    let n = oracle::source_norm_sqr(&oracle::source(Terms::Full));
    assert!((n - 10.0).abs() < 1e-12);
    assert!((oracle::source_norm_sqr(&oracle::source(Terms::DoubleAb)) - 3.0).abs() < 1e-12);
    assert!((oracle::source_norm_sqr(&oracle::source(Terms::Cross)) - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_configs_match_oracle(
        pa in -90.0f64..90.0,
        pd in -90.0f64..90.0,
        v in 0.0f64..=1.0,
        eta in 0.05f64..=1.0,
        m in -20.0f64..20.0,
    ) {
        assert_classes_agree(&Params {
            overlap: v,
            efficiency: eta,
            misalignment_deg: m,
            ..Params::ideal(pa, pd)
        });
    }
}
