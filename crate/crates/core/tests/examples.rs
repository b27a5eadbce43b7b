//! Worked examples exercised through the public API only.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use num_complex::Complex64;
use olt_core::analysis::final_state_ket;
use olt_core::protocol::evolve_reduced;
use olt_core::states::make_pure;
use olt_core::*;

fn z() -> Operator {
    pauli(3).unwrap()
}

fn diag(values: &[f64]) -> Operator {
    let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Operator::diag(&v)
}

#[test]
fn reduced_state_of_the_final_ket() {
    // Δ = π/2: equal weight on the correlated and anticorrelated parts
    let rho = make_pure(&final_state_ket(FRAC_PI_2, 0.0));
    let reduced = partial_trace(rho.matrix(), &[0, 1], 4).unwrap();
    assert!(reduced.max_abs_diff(&diag(&[0.25, 0.25, 0.25, 0.25])) < 1e-12);
    let at_zero = partial_trace(make_pure(&final_state_ket(0.0, 0.0)).matrix(), &[0, 1], 4).unwrap();
    assert!(at_zero.max_abs_diff(&diag(&[0.5, 0.0, 0.0, 0.5])) < 1e-12);
}

#[test]
fn ghz_marginal_and_bell_coincidence() {
    let ghz = make_ghz(3, Complex64::new(0.0, 1.0)).unwrap();
    let marginal = partial_trace(ghz.matrix(), &[0, 1], 3).unwrap();
    assert!(marginal.max_abs_diff(make_classical_correlated(2).unwrap().matrix()) < 1e-12);
    let ghz2 = make_ghz(2, Complex64::new(1.0, 0.0)).unwrap();
    assert!(ghz2.matrix().max_abs_diff(make_bell_state(BellKind::PhiPlus).matrix()) < 1e-12);
}

#[test]
fn parity_expectations() {
    let zz = kron(&z(), &z());
    assert_eq!(expectation(&zz, make_basis_state("00").unwrap().matrix()).unwrap(), 1.0);
    assert!((expectation(&zz, make_classical_correlated(2).unwrap().matrix()).unwrap() - 1.0).abs() < 1e-12);
    assert!((expectation(&zz, make_werner(0.7).unwrap().matrix()).unwrap() + 0.7).abs() < 1e-12);
}

#[test]
fn werner_partial_transpose_spectrum() {
    let pt = partial_transpose(make_werner(1.0).unwrap().matrix(), &[1], 2).unwrap();
    let ev = herm_eigenvalues(&pt).unwrap();
    // (1-3p)/4 once, (1+p)/4 three times
    for (got, want) in ev.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn assembled_register() {
    let pure = assemble(&make_basis_state("00").unwrap(), &make_bell_state(BellKind::PhiPlus)).unwrap();
    assert!((pure.full_state().purity() - 1.0).abs() < 1e-12);
    assert!(reduced_system(&pure).matrix().max_abs_diff(make_basis_state("00").unwrap().matrix()) < 1e-12);
    let mixed = assemble(&make_classical_correlated(2).unwrap(), &make_bell_state(BellKind::PhiPlus)).unwrap();
    assert!((mixed.full_state().purity() - 0.5).abs() < 1e-12);

    // all angles zero reproduces the GHZ-like ket
    let out = apply_olts(&pure, &vec![AngleSetting::so2(0.0); 2].into()).unwrap();
    let ket = final_state_ket(0.0, 0.0);
    assert!((ket.overlap_with(out.full_state().matrix()) - 1.0).abs() < 1e-12);
    assert!((ket.amplitudes()[0b1111].re - 1.0 / SQRT_2).abs() < 1e-12);
}

#[test]
fn skkvb_and_werner_reduced_forms() {
    let (ta, tb) = (0.7, -0.4);
    let settings: SettingsVector = vec![AngleSetting::so2(ta), AngleSetting::so2(tb)].into();
    let co = (ta - tb).cos();
    let skkvb = evolve_reduced(&make_classical_correlated(2).unwrap(), &make_bell_state(BellKind::PhiPlus), &settings).unwrap();
    let w = (1.0 + co) / 4.0;
    let a = (1.0 - co) / 4.0;
    assert!(skkvb.matrix().max_abs_diff(&diag(&[w, a, a, w])) < 1e-12);

    let p = 0.6;
    let werner = evolve_reduced(&make_basis_state("00").unwrap(), &make_werner(p).unwrap(), &settings).unwrap();
    let w = (1.0 - p * co) / 4.0;
    let a = (1.0 + p * co) / 4.0;
    assert!(werner.matrix().max_abs_diff(&diag(&[w, a, a, w])) < 1e-12);
}

#[test]
fn single_correlators() {
    let s = |a: f64, b: f64| -> SettingsVector { vec![AngleSetting::so2(a), AngleSetting::so2(b)].into() };
    let skkvb = correlation_direct(&make_classical_correlated(2).unwrap(), &make_bell_state(BellKind::PhiPlus), &s(0.0, FRAC_PI_4)).unwrap();
    assert!((skkvb - SQRT_2 / 2.0).abs() < 1e-12);
    let werner = correlation_direct(&make_basis_state("00").unwrap(), &make_werner(1.0).unwrap(), &s(0.0, 0.0)).unwrap();
    assert!((werner + 1.0).abs() < 1e-12);
}

#[test]
fn mermin_terms_sum_to_four() {
    let sx = AngleSetting::to_sigma_x();
    let sy = AngleSetting::to_sigma_y();
    let system = make_basis_state("000").unwrap();
    let ancilla = make_ghz(3, Complex64::new(0.0, 1.0)).unwrap();
    let term = |s: [AngleSetting; 3]| correlation_direct(&system, &ancilla, &s.to_vec().into()).unwrap();
    let terms = [term([sx, sx, sy]), term([sx, sy, sx]), term([sy, sx, sx]), term([sy, sy, sy])];
    for t in &terms[..3] {
        assert!((t - 1.0).abs() < 1e-12);
    }
    assert!((terms[3] + 1.0).abs() < 1e-12);
    assert!((terms[0] + terms[1] + terms[2] - terms[3] - 4.0).abs() < 1e-12);
}

#[test]
fn stabilizer_cases() {
    assert_eq!(stabilizer_eigenvalue(&make_classical_correlated(2).unwrap()).eigenvalue, Some(1));
    let anti = validate_density(diag(&[0.0, 0.5, 0.5, 0.0])).unwrap();
    assert_eq!(stabilizer_eigenvalue(&anti).eigenvalue, Some(-1));
    let mixed = stabilizer_eigenvalue(&make_maximally_mixed(2).unwrap());
    assert_eq!(mixed.eigenvalue, None);
    assert_eq!(mixed.expectation, 0.0);
}

#[test]
fn anticorrelated_system_flips_the_sign() {
    let anti = validate_density(diag(&[0.0, 0.5, 0.5, 0.0])).unwrap();
    let settings = vec![
        vec![AngleSetting::so2(0.0), AngleSetting::so2(FRAC_PI_2)],
        vec![AngleSetting::so2(FRAC_PI_4), AngleSetting::so2(-FRAC_PI_4)],
    ];
    let table = correlator_table(&anti, &make_bell_state(BellKind::PhiPlus), &settings, Route::Direct).unwrap();
    let report = violation_report(&make_chsh(), &table).unwrap();
    assert!((report.value + 2.0 * SQRT_2).abs() < 1e-12);
    assert!(report.violated);
}

#[test]
fn functional_values() {
    let chsh = make_chsh();
    let t = |v: Vec<f64>| CorrelatorTable::new(vec![2, 2], v).unwrap();
    assert_eq!(evaluate(&chsh, &t(vec![1.0; 4])).unwrap(), 2.0);
    let h = SQRT_2 / 2.0;
    let max = violation_report(&chsh, &t(vec![h, h, h, -h])).unwrap();
    assert!((max.value - 2.0 * SQRT_2).abs() < 1e-12);
    assert!(max.violated && (max.margin - (2.0 * SQRT_2 - 2.0)).abs() < 1e-12);
    let edge = violation_report(&chsh, &t(vec![1.0; 4])).unwrap();
    assert!(!edge.violated && edge.margin == 0.0);

    let single = BellFunctional::new("single", vec![2, 2], vec![1.0, 0.0, 0.0, 0.0]).unwrap();
    assert_eq!(classical_bound(&single).unwrap(), 1.0);
    let zero = CorrelatorTable::new(vec![2, 2, 2], vec![0.0; 8]).unwrap();
    assert_eq!(evaluate(&make_mermin3(), &zero).unwrap(), 0.0);
}

#[test]
fn ppt_examples() {
    let bell = ppt_separable(&make_bell_state(BellKind::PhiPlus), &[0]).unwrap();
    assert!((bell.min_eigenvalue + 0.5).abs() < 1e-12);
    assert_eq!(bell.verdict(), "entangled");
    assert_eq!(ppt_separable(&make_werner(0.3).unwrap(), &[1]).unwrap().separable(), Some(true));
    // Δ = 0 final ket is GHZ-like across a | b a' b'
    let ghz_like = make_pure(&final_state_ket(0.0, 0.0));
    assert_eq!(ppt_separable(&ghz_like, &[0]).unwrap().verdict(), "NPT");
    let quarter = make_pure(&final_state_ket(FRAC_PI_2, 0.0));
    assert!(!ppt_separable(&quarter, &[2, 3]).unwrap().ppt);
}

#[test]
fn final_state_special_angles() {
    assert!((check_final_state_form(1.1, 1.1).unwrap() - 1.0).abs() < 1e-12);
    let k = final_state_ket(PI, 0.0);
    assert!((k.amplitudes()[0b1010].re - 1.0 / SQRT_2).abs() < 1e-12);
    assert!((k.amplitudes()[0b0101].re + 1.0 / SQRT_2).abs() < 1e-12);
    assert!((check_final_state_form(PI, 0.0).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn zero_system_factor_in_verification_paths() {
    let mixed = make_maximally_mixed(2).unwrap();
    let anc = make_werner(0.4).unwrap();
    let s: SettingsVector = vec![AngleSetting::so2(0.3), AngleSetting::so2(1.9)].into();
    assert!(correlation_direct(&mixed, &anc, &s).unwrap().abs() < 1e-12);
    assert!(correlation_factorized(&mixed, &anc, &s).unwrap().abs() < 1e-12);
}

#[test]
fn scenario_text_drives_the_protocol() {
    let text = "label = SKKVB\nsystem = classical_correlated:2\nancilla = bell:phi+\nfunctional = chsh\n\
                settings.0 = so2:0; so2:pi/2\nsettings.1 = so2:pi/4; so2:-pi/4\n";
    let sc: Scenario = text.parse().unwrap();
    let table = correlator_table(
        &sc.system.build().unwrap(),
        &sc.ancilla.build().unwrap(),
        sc.settings.as_ref().unwrap(),
        Route::Factorized,
    )
    .unwrap();
    let value = evaluate(&sc.functional.build().unwrap(), &table).unwrap();
    assert!((value - 2.0 * SQRT_2).abs() < 1e-12);
}
