use bellzoo::bell::{chsh, classify, BOUNDS};
use bellzoo::hilbert::{
    born_probabilities, is_product_operator, is_product_vector, operator_from_measurement,
    schmidt_coefficients, Isomorphism, Measurement, StateVector, ENTANGLEMENT_TOL,
};
use bellzoo::linalg::{apply, c, expectation, inner, CMatrix, CVector, Complex};
use bellzoo::models::{basis_from_probabilities, vessels_data, vessels_model};
use bellzoo::tables::{
    expectation_value, factorization_test, marginal_law_report, marginals, normalize,
    Experiment, JointTable, SettingPair, SideLabels,
};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| c(re, im))
}

fn vector() -> impl Strategy<Value = CVector> {
    prop::array::uniform4(complex()).prop_map(|a| CVector::new(a).unwrap())
}

fn unit() -> impl Strategy<Value = CVector> {
    vector()
        .prop_filter("nonzero", |v| v.norm() > 1e-3)
        .prop_map(|v| v.normalized().unwrap())
}

fn qubit() -> impl Strategy<Value = [Complex; 2]> {
    prop::array::uniform2(complex()).prop_filter("nonzero", |q| q[0].norm() + q[1].norm() > 1e-3)
}

fn hermitian() -> impl Strategy<Value = CMatrix> {
    prop::array::uniform4(prop::array::uniform4(complex())).prop_map(|rows| {
        let m = CMatrix::new(rows).unwrap();
        (m + m.adjoint()).scale(c(0.5, 0.0))
    })
}

fn two_by_two() -> impl Strategy<Value = [[Complex; 2]; 2]> {
    prop::array::uniform2(prop::array::uniform2(complex()))
}

fn table() -> impl Strategy<Value = JointTable> {
    prop::array::uniform4(0.0..1.0f64)
        .prop_filter("nonzero", |p| p.iter().sum::<f64>() > 1e-3)
        .prop_map(|p| {
            let s: f64 = p.iter().sum();
            normalize(p.map(|x| x / s), 1e-9).unwrap()
        })
}

fn experiment() -> impl Strategy<Value = Experiment> {
    prop::array::uniform4(table()).prop_map(|t| Experiment::new(SideLabels::default(), t))
}

fn distribution() -> impl Strategy<Value = [f64; 2]> {
    (0.0..=1.0f64).prop_map(|p| [p, 1.0 - p])
}

fn target() -> impl Strategy<Value = [f64; 4]> {
    table().prop_map(|t| t.probabilities())
}

fn kron_vec(a: [Complex; 2], b: [Complex; 2]) -> CVector {
    CVector::new([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]).unwrap()
}

proptest! {
    #[test]
    fn inner_is_conjugate_symmetric(u in vector(), v in vector()) {
        prop_assert!((inner(&u, &v) - inner(&v, &u).conj()).norm() < 1e-12);
    }

    #[test]
    fn hermitian_expectations_are_real(m in hermitian(), v in unit()) {
        prop_assert!(expectation(&m, &v).imaginary.abs() <= 1e-9);
    }

    #[test]
    fn apply_is_linear(m in hermitian(), u in vector(), v in vector(), k in complex()) {
        let lhs = apply(&m, &(u + v.scale(k)));
        let rhs = apply(&m, &u) + apply(&m, &v).scale(k);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn expectation_values_are_bounded(t in table()) {
        let e = expectation_value(&t);
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&e));
    }

    #[test]
    fn marginals_are_distributions(t in table()) {
        let m = marginals(&t);
        prop_assert!((m.first.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!((m.second.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_is_idempotent(t in table()) {
        prop_assert_eq!(normalize(t.probabilities(), 1e-9).unwrap(), t);
    }

    #[test]
    fn products_factorize(first in distribution(), second in distribution()) {
        let t = JointTable::product(first, second).unwrap();
        let v = factorization_test(&t, 1e-12);
        prop_assert!(v.factorizable && v.residual <= 1e-12);
        let r = v.factors.unwrap().reconstruct();
        for (x, y) in r.iter().zip(t.probabilities()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn chsh_stays_below_the_algebraic_bound(e in experiment()) {
        let r = chsh(&e);
        prop_assert!(r.max_abs_over_variants <= BOUNDS.algebraic + 1e-12);
        prop_assert!(r.max_abs_over_variants >= r.paper_combination.abs() - 1e-12);
    }

    #[test]
    fn local_experiments_respect_the_classical_bound(
        first in prop::array::uniform2(distribution()),
        second in prop::array::uniform2(distribution()),
    ) {
        let e = Experiment::from_fn(SideLabels::default(), |pair| {
            JointTable::product(first[pair.first_setting()], second[pair.second_setting()]).unwrap()
        });
        prop_assert!(chsh(&e).max_abs_over_variants <= BOUNDS.classical + 1e-9);
        prop_assert!(marginal_law_report(&e, 1e-9).holds);
    }

    #[test]
    fn swapping_sides_preserves_the_analysis(e in experiment()) {
        let s = e.swap_sides();
        prop_assert!((chsh(&s).max_abs_over_variants - chsh(&e).max_abs_over_variants).abs() < 1e-12);
        prop_assert!(
            (marginal_law_report(&s, 1e-6).max_difference() - marginal_law_report(&e, 1e-6).max_difference()).abs()
                < 1e-12
        );
        match (classify(&e, 1e-6), classify(&s, 1e-6)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn synthesized_bases_reproduce_targets(s in unit(), t in target(), k in 0..4usize) {
        let s = StateVector::exact(s).unwrap();
        let m = basis_from_probabilities(&s, &t, SettingPair::ALL[k]).unwrap();
        let born = born_probabilities(&s, &m);
        for (p, q) in born.probabilities().iter().zip(t) {
            prop_assert!((p - q).abs() < 1e-9);
        }
        for o in m.outcomes() {
            prop_assert!(inner(&o.state, s.vector()).im.abs() < 1e-9);
            prop_assert!(inner(&o.state, s.vector()).re >= -1e-9);
        }
    }

    #[test]
    fn born_tables_sum_to_one(s in unit(), basis_state in unit(), t in target()) {
        let m = basis_from_probabilities(&StateVector::exact(basis_state).unwrap(), &t, SettingPair::AB).unwrap();
        let born = born_probabilities(&StateVector::exact(s).unwrap(), &m);
        prop_assert!((born.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn operator_expectation_is_the_spectral_average(
        s in unit(),
        basis_state in unit(),
        t in target(),
        values in prop::array::uniform4(-2.0..2.0f64),
    ) {
        let base = basis_from_probabilities(&StateVector::exact(basis_state).unwrap(), &t, SettingPair::AB).unwrap();
        let m = Measurement::labeled(SettingPair::AB, base.states(), values, &SideLabels::default()).unwrap();
        let s = StateVector::exact(s).unwrap();
        let born = born_probabilities(&s, &m).probabilities();
        let average: f64 = values.iter().zip(born).map(|(v, p)| v * p).sum();
        prop_assert!((expectation(&operator_from_measurement(&m), s.vector()).value - average).abs() < 1e-9);
    }

    #[test]
    fn schmidt_squares_sum_to_one(v in unit()) {
        for iso in [Isomorphism::CANONICAL, Isomorphism::SWAPPED] {
            let (s1, s2) = schmidt_coefficients(&v, &iso);
            prop_assert!(s1 >= s2 && s2 >= 0.0);
            prop_assert!((s1 * s1 + s2 * s2 - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn tensor_products_are_products(a in qubit(), b in qubit()) {
        let v = kron_vec(a, b).normalized().unwrap();
        prop_assert!(is_product_vector(&v, &Isomorphism::CANONICAL, ENTANGLEMENT_TOL));
        prop_assert!(is_product_vector(&v, &Isomorphism::SWAPPED, ENTANGLEMENT_TOL));
        let (_, s2) = schmidt_coefficients(&v, &Isomorphism::CANONICAL);
        prop_assert!(s2 < 1e-7);
    }

    #[test]
    fn kron_operators_are_products(a in two_by_two(), b in two_by_two()) {
        let m = CMatrix::kron(&a, &b);
        prop_assert!(is_product_operator(&m, &Isomorphism::CANONICAL, 1e-9));
        prop_assert!(is_product_operator(&m, &Isomorphism::SWAPPED, 1e-9));
    }

    #[test]
    fn bell_states_are_entangled(alpha in -3.0..3.0f64, beta in -3.0..3.0f64, sign in prop::bool::ANY) {
        let sign = if sign { 1.0 } else { -1.0 };
        for v in [
            bellzoo::models::middle_superposition(alpha, beta, sign),
            bellzoo::models::corner_superposition(alpha, beta, sign),
        ] {
            let (s1, s2) = schmidt_coefficients(&v, &Isomorphism::CANONICAL);
            // equal singular values: the closed form loses half the digits
            prop_assert!((s1 - 0.5f64.sqrt()).abs() < 1e-7 && (s2 - 0.5f64.sqrt()).abs() < 1e-7);
            prop_assert!(!is_product_vector(&v, &Isomorphism::CANONICAL, ENTANGLEMENT_TOL));
        }
    }

    #[test]
    fn vessels_model_is_phase_independent(alpha in -3.2..3.2f64, beta in -3.2..3.2f64) {
        let v = vessels_model(alpha, beta).verify(&vessels_data().experiment, &Isomorphism::CANONICAL);
        prop_assert!(v.max_probability_residual() <= 1e-12);
        prop_assert!((v.bell_expectation - 4.0).abs() <= 1e-12);
        prop_assert_eq!(v.measurement_entangled, [false, true, true, true]);
    }
}
