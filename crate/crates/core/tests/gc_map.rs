use gcfiber_core::linalg::*;
use gcfiber_core::triangle::*;
use gcfiber_core::{GcTriangle, Seed, TrianglePosition};
use proptest::prelude::*;

fn tri(rows: &[&[f64]]) -> GcTriangle {
    GcTriangle::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn random_hermitian(n: usize, seed: u64) -> Hermitian {
    let mut rng = Seed(seed).rng();
    Hermitian::new(&ComplexMatrix::from_fn(n, n, |_, _| {
        complex_gaussian(&mut rng)
    }))
    .unwrap()
}

/// Descending spectrum of size `n` with entries in `(0.5, 10)`.
fn random_positive_spectrum(n: usize, seed: u64) -> Spectrum {
    let mut rng = Seed(seed).rng();
    let v: Vec<f64> = (0..n)
        .map(|_| 5.25 + 4.5 * complex_gaussian(&mut rng).re.tanh())
        .collect();
    Spectrum::from_unsorted(v).unwrap()
}

#[test]
fn momentum_of_diagonal() {
    let a = Hermitian::from_real_diagonal(&[3.0, 2.0, 1.0]);
    assert_eq!(
        momentum_map(&a).unwrap(),
        tri(&[&[3.0], &[3.0, 2.0], &[3.0, 2.0, 1.0]])
    );
}

#[test]
fn momentum_of_two_by_two() {
    let c = |x| Complex64::new(x, 0.0);
    let m = ComplexMatrix::from_rows(&[vec![c(2.0), c(1.0)], vec![c(1.0), c(2.0)]]).unwrap();
    let t = momentum_map(&Hermitian::new(&m).unwrap()).unwrap();
    assert_eq!(t.row(1), &[2.0]);
    assert!((t.row(2)[0] - 3.0).abs() < 1e-14 && (t.row(2)[1] - 1.0).abs() < 1e-14);
}

#[test]
fn momentum_of_orbit_point() {
    let lam = Spectrum::new(vec![3.0, 2.0, 1.0]).unwrap();
    for seed in 0..20 {
        let a = random_orbit_point(&lam, &mut Seed(seed).rng()).unwrap();
        let t = momentum_map(&a).unwrap();
        for (x, y) in t.row(3).iter().zip([3.0, 2.0, 1.0]) {
            assert!((x - y).abs() < 1e-11);
        }
        assert!(validate_triangle(&t, 1e-9).is_valid());
    }
}

#[test]
fn validation_names_the_broken_pair() {
    let v = validate_triangle(&tri(&[&[4.0], &[3.0, 1.0]]), 0.0);
    assert!(!v.is_valid());
    assert_eq!(v.violations.len(), 1);
    assert_eq!(v.violations[0].lower, TrianglePosition::new(1, 1));
    assert_eq!(v.violations[0].upper, TrianglePosition::new(1, 2));
    assert_eq!(v.violations[0].amount, 1.0);
    assert!(v.into_result().is_err());
}

#[test]
fn perturbed_interior_entry_is_rejected() {
    let tol = 1e-9;
    let lam = Spectrum::new(vec![4.0, 3.0, 2.0, 1.0]).unwrap();
    for seed in 0..20 {
        let a = random_orbit_point(&lam, &mut Seed(seed).rng()).unwrap();
        let mut t = momentum_map(&a).unwrap();
        // Push (1,2) above its upper neighbour (1,3).
        let p = TrianglePosition::new(1, 2);
        let bound = t.get(TrianglePosition::new(1, 3));
        t.set(p, bound + 2.0 * tol);
        let v = validate_triangle(&t, tol);
        assert!(!v.is_valid());
        assert!(v.violations.iter().any(|x| x.lower == p));
    }
}

#[test]
fn leading_principal_examples() {
    let a = random_hermitian(5, 1);
    assert_eq!(leading_principal(&a, 5).unwrap(), a);
    let one = leading_principal(&a, 1).unwrap();
    assert_eq!(
        one.matrix()[(0, 0)],
        Complex64::new(a.matrix()[(0, 0)].re, 0.0)
    );
    for j in 1..=5 {
        for k in 1..=j {
            let nested = leading_principal(&leading_principal(&a, j).unwrap(), k).unwrap();
            assert_eq!(nested, leading_principal(&a, k).unwrap());
        }
    }
    assert!(leading_principal(&a, 0).is_err());
    assert!(leading_principal(&a, 6).is_err());
}

#[test]
fn gamma_of_identity_is_leading_segments() {
    let lam = Spectrum::new(vec![3.0, 2.0, 1.0]).unwrap();
    let t = gamma_lambda(&Unitary::identity(3), &lam).unwrap();
    assert_eq!(t, tri(&[&[3.0], &[3.0, 2.0], &[3.0, 2.0, 1.0]]));
}

#[test]
fn gamma_rejects_non_positive_spectrum() {
    let lam = Spectrum::new(vec![3.0, 2.0, 0.0]).unwrap();
    assert!(gamma_lambda(&Unitary::identity(3), &lam).is_err());
}

#[test]
fn gamma_last_row_is_lambda() {
    let lam = Spectrum::new(vec![5.0, 2.5, 2.5, 0.25]).unwrap();
    let c_star = haar_unitary(4, &mut Seed(4).rng());
    let t = gamma_lambda(&c_star, &lam).unwrap();
    for (x, y) in t.row(4).iter().zip(lam.values()) {
        assert!((x - y).abs() < 1e-11);
    }
}

#[test]
fn block_unitaries_fix_diagonal_momentum() {
    // U_λ for λ = (3,3,1,1): U(2) x U(2).
    let lam = [3.0, 3.0, 1.0, 1.0];
    let d = Hermitian::from_real_diagonal(&lam);
    let expected = momentum_map(&d).unwrap();
    for seed in 0..10 {
        let mut rng = Seed(seed).rng();
        let u1 = haar_unitary(2, &mut rng);
        let u2 = haar_unitary(2, &mut rng);
        let p = ComplexMatrix::from_fn(4, 4, |r, c| match (r < 2, c < 2) {
            (true, true) => u1.matrix()[(r, c)],
            (false, false) => u2.matrix()[(r - 2, c - 2)],
            _ => Complex64::new(0.0, 0.0),
        });
        let a = d.conjugate(&Unitary::new(p).unwrap()).unwrap();
        let t = momentum_map(&a).unwrap();
        assert!(t.max_abs_diff(&expected).unwrap() < 1e-12);
        assert_eq!(
            t.get(TrianglePosition::new(1, 1)),
            t.get(TrianglePosition::new(2, 2))
        );
    }
}

#[test]
fn snapping_makes_near_ties_exact() {
    let t = tri(&[
        &[2.0 + 1e-12],
        &[2.0 + 3e-13, 2.0],
        &[3.0, 2.0 - 1e-12, 1.0],
    ]);
    let s = snap_to_pattern(&t, 1e-8);
    let v = s.get(TrianglePosition::new(1, 1));
    assert_eq!(s.get(TrianglePosition::new(1, 2)), v);
    assert_eq!(s.get(TrianglePosition::new(2, 2)), v);
    assert_eq!(s.get(TrianglePosition::new(2, 3)), v);
    assert!(validate_triangle(&s, 0.0).is_valid());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn momentum_always_interlaces(n in 1usize..=8, seed in any::<u64>()) {
        let t = momentum_map(&random_hermitian(n, seed)).unwrap();
        prop_assert!(validate_triangle(&t, 1e-9).is_valid());
        let raw = momentum_map_raw(&random_hermitian(n, seed)).unwrap();
        prop_assert!(validate_triangle(&raw, 1e-9).is_valid());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn duality_diagram_commutes(n in 1usize..=7, seed in any::<u64>()) {
        let lam = random_positive_spectrum(n, seed);
        let c_star = haar_unitary(n, &mut Seed(seed ^ 0x5a5a).rng());
        let via_gamma = gamma_lambda(&c_star, &lam).unwrap();
        let c = Unitary::new(c_star.matrix().adjoint()).unwrap();
        let point = Hermitian::from_real_diagonal(lam.values()).conjugate(&c).unwrap();
        let via_f = momentum_map_raw(&point).unwrap();
        prop_assert!(via_gamma.max_abs_diff(&via_f).unwrap() <= 1e-11);
    }
}
