mod common;

use common::{mat, one_based, printed};
use num_complex::Complex64;
use rga_core::pairing::{k_best_assignments_constrained, FlagKind};
use rga_core::{
    diag_scale, fixtures, numerical_rank, recommend, rga, score_matrix, tf, GainMatrix,
    InverseMethod, PairingRules,
};

fn sakai() -> GainMatrix {
    tf::steady_state(&tf::parse(fixtures::SAKAI_DSL).unwrap()).unwrap()
}

#[test]
fn minutes_matrix_first_column() {
    let g = diag_scale(&fixtures::tfg_seconds(), &[1.0; 3], &fixtures::SECONDS_TO_MINUTES).unwrap();
    for (i, want) in [0.2800, 0.1183, 0.0417].iter().enumerate() {
        assert!((g.get(i, 0) - want).abs() <= 5e-5);
    }
    assert_eq!(g.max_abs_diff(&fixtures::tfg_minutes()), 0.0);
}

#[test]
fn uc_minutes_reprints_uc_seconds() {
    let uc = rga(&fixtures::tfg_minutes(), InverseMethod::Uc).unwrap().lambda;
    assert!(uc.max_abs_diff(&mat(&printed::UC_SECONDS)) <= 5e-5);
}

#[test]
fn sakai_steady_state_has_full_row_rank() {
    assert_eq!(numerical_rank(&sakai().matrix, None).unwrap().numerical_rank, 4);
    let uc = rga(&sakai().matrix, InverseMethod::Uc).unwrap();
    assert!((uc.total_sum - 4.0).abs() <= 1e-10);
}

#[test]
fn sakai_fixture_carries_unit_tags() {
    let g = sakai();
    assert_eq!(g.row_units.as_deref().unwrap(), ["degC", "degC", "degC", "%"]);
    assert_eq!(g.col_units.as_deref().unwrap(), ["degC", "%", "%", "%", "degC"]);
}

#[test]
fn uc_sakai_pairing_has_no_flags() {
    let uc = rga(&sakai().matrix, InverseMethod::Uc).unwrap().lambda;
    let report = recommend(&uc, &PairingRules::default(), 3).unwrap();
    assert_eq!(report.pair_set(), one_based(&[(1, 1), (2, 2), (3, 3), (4, 4)]));
    assert!(report.flags.is_empty(), "{:?}", report.flags);
    assert!(report.unmatched_outputs.is_empty());
    assert_eq!(report.unmatched_inputs, vec![4]);
}

#[test]
fn mp_sakai_most_confident_gain_is_left_out() {
    let mp = rga(&sakai().matrix, InverseMethod::Mp).unwrap().lambda;
    let report = recommend(&mp, &PairingRules::default(), 2).unwrap();
    let unchosen = report.most_confident_unchosen.unwrap();
    assert_eq!((unchosen.output, unchosen.input), (3, 1));
    assert!((unchosen.lambda - 0.9423).abs() <= 5e-5);
    for alt in &report.alternatives {
        assert!(!alt.pairs.iter().any(|p| (p.output, p.input) == (3, 1)));
    }
    // first two diagonal loops are forced in every ranked option
    for alt in &report.alternatives {
        assert!(alt.pairs.iter().any(|p| (p.output, p.input) == (0, 0)));
        assert!(alt.pairs.iter().any(|p| (p.output, p.input) == (1, 1)));
    }
}

#[test]
fn mp_sakai_options_when_third_yield_is_required() {
    let mp = rga(&sakai().matrix, InverseMethod::Mp).unwrap().lambda;
    let cost = score_matrix(&mp, &PairingRules::default()).unwrap();
    let ranked = k_best_assignments_constrained(&cost, 2, &[2]).unwrap();
    assert_eq!(ranked[0].pairs, one_based(&printed::SAKAI_MP_OPTION_2));
    assert_eq!(ranked[1].pairs, one_based(&printed::SAKAI_MP_OPTION_1));
    // rows 3 and 4 carry the difference between the options
    let tail = |pairs: &[rga_core::Pair]| -> f64 {
        pairs
            .iter()
            .filter(|p| p.output >= 2)
            .map(|p| cost.get(p.output, p.input))
            .sum()
    };
    assert!((tail(&ranked[0].pairs) - 0.8406).abs() <= 5e-4);
    assert!((tail(&ranked[1].pairs) - 0.8573).abs() <= 5e-4);

    let rules = PairingRules {
        required_inputs: vec![2],
        ..Default::default()
    };
    let report = recommend(&mp, &rules, 2).unwrap();
    assert_eq!(report.pair_set(), one_based(&printed::SAKAI_MP_OPTION_2));
    assert!(report.near_tie);
    assert!(report
        .flags_for(rga_core::Pair::new(2, 2))
        .contains(&FlagKind::NearTie));
}

#[test]
fn mp_sakai_unconstrained_best_uses_heater_outlet() {
    let mp = rga(&sakai().matrix, InverseMethod::Mp).unwrap().lambda;
    let report = recommend(&mp, &PairingRules::default(), 2).unwrap();
    assert_eq!(
        report.pair_set(),
        one_based(&[(1, 1), (2, 2), (3, 5), (4, 4)])
    );
    assert!(!report.near_tie);
}

#[test]
fn score_of_uc_sakai_first_row() {
    let row = mat(&[[1.2586, -0.2889, 0.0, 0.0, 0.0303]]);
    let c = score_matrix(&row, &PairingRules::default()).unwrap();
    let want = [0.2586, 1e6, 1e6, 1e6, 0.9697];
    for (got, want) in c.entries().iter().zip(want) {
        assert!((got - want).abs() <= 1e-12);
    }
}

#[test]
fn printed_matrices_pair_as_boldfaced() {
    let rules = PairingRules::default();
    let cases: [(&[[f64; 5]; 4], &[(usize, usize)]); 2] = [
        (&printed::UC_SAKAI, &[(1, 1), (2, 2), (3, 3), (4, 4)]),
        (&printed::MP_SAKAI_DECIMATED, &printed::SAKAI_MP_DECIMATED),
    ];
    for (l, want) in cases {
        let report = recommend(&mat(l), &rules, 1).unwrap();
        assert_eq!(report.pair_set(), one_based(want));
    }
    let seconds = recommend(&mat(&printed::MP_SECONDS), &rules, 1).unwrap();
    assert_eq!(seconds.pair_set(), one_based(&[(1, 1), (2, 4), (3, 2)]));
    let minutes = recommend(&mat(&printed::MP_MINUTES), &rules, 1).unwrap();
    assert_eq!(minutes.pair_set(), one_based(&[(1, 3), (2, 4), (3, 2)]));
}

#[test]
fn literal_pure_s_numerators_vanish_at_steady_state() {
    let text = fixtures::SAKAI_DSL
        .replace("16e^{-2s}", "16se^{-2s}")
        .replace("22e^{-2s}", "22se^{-2s}");
    let g = tf::steady_state(&tf::parse(&text).unwrap()).unwrap();
    let want = mat(&[
        [3.8, 2.9, 0.0, 0.0, -0.73],
        [3.9, 6.3, 0.0, 0.0, 0.0],
        [3.8, 6.1, 3.4, 0.0, 0.0],
        [-1.62, -1.53, -1.3, -0.6, 0.32],
    ]);
    assert_eq!(g.matrix.max_abs_diff(&want), 0.0);
    // that reading does not reproduce the printed UC-RGA
    let uc = rga(&g.matrix, InverseMethod::Uc).unwrap().lambda;
    assert!(uc.max_abs_diff(&mat(&printed::UC_SAKAI)) > 1e-2);
}

#[test]
fn heater_outlet_entry_expands_consistently() {
    let factored = tf::parse_entry("16s*exp(-2s)/((5s+1)*(14s+1))").unwrap();
    let expanded = tf::parse_entry("16s*exp(-2s)/(70s^2+19s+1)").unwrap();
    assert_eq!(factored.numerator.coeffs(), &[0.0, 16.0]);
    assert_eq!(factored.denominator.coeffs(), &[1.0, 19.0, 70.0]);
    assert_eq!(factored.delay, 2.0);
    let s = Complex64::new(0.3, 0.0);
    let a = factored.evaluate(s).unwrap();
    let b = expanded.evaluate(s).unwrap();
    assert!((a - b).norm() <= 1e-12);
}

#[test]
fn every_fixture_loads() {
    assert_eq!(fixtures::all().len(), 9);
    for f in fixtures::all() {
        let g = f.gain().unwrap();
        g.validate().unwrap();
        assert!(rga(&g.matrix, InverseMethod::Uc).is_ok(), "{}", f.name);
    }
    assert!(fixtures::get("nope").is_err());
}
