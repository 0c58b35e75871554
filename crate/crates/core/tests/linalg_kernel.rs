use gcfiber_core::linalg::*;
use gcfiber_core::Seed;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_hermitian(n: usize, seed: u64) -> Hermitian {
    let mut rng = Seed(seed).rng();
    let m = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng) * 3.0);
    Hermitian::new(&m).unwrap()
}

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |r, col| m[(r, col)])
}

fn reconstruct(s: &Spectrum, q: &Unitary) -> ComplexMatrix {
    q.matrix()
        .matmul(&ComplexMatrix::from_real_diagonal(s.values()))
        .matmul(&q.matrix().adjoint())
}

#[test]
fn eigenvalues_match_nalgebra() {
    for n in 1..=9 {
        for seed in 0..20 {
            let a = random_hermitian(n, 1000 * n as u64 + seed);
            let (s, _) = eig_hermitian(&a).unwrap();
            let mut oracle: Vec<f64> = SymmetricEigen::new(to_nalgebra(a.matrix()))
                .eigenvalues
                .iter()
                .copied()
                .collect();
            oracle.sort_by(|x, y| y.total_cmp(x));
            for (x, y) in s.values().iter().zip(&oracle) {
                assert!((x - y).abs() < 1e-11, "n={n} seed={seed}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn singular_values_match_nalgebra() {
    let mut rng = Seed(3).rng();
    for (rows, cols) in [(5, 3), (3, 5), (8, 8), (12, 20)] {
        let cols_data: Vec<Vec<f64>> = (0..cols)
            .map(|_| (0..rows).map(|_| complex_gaussian(&mut rng).re).collect())
            .collect();
        let m = RealMatrix::from_columns(rows, &cols_data).unwrap();
        let na = DMatrix::from_fn(rows, cols, |r, col| m[(r, col)]);
        let mut oracle: Vec<f64> = na.singular_values().iter().copied().collect();
        oracle.sort_by(|x, y| y.total_cmp(x));
        let ours = singular_values(&m);
        for (x, y) in ours.iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }
}

#[test]
fn diagonal_and_two_by_two() {
    let (s, q) = eig_hermitian(&Hermitian::from_real_diagonal(&[3.0, 2.0, 1.0])).unwrap();
    assert_eq!(s.values(), &[3.0, 2.0, 1.0]);
    assert_eq!(q.matrix(), &ComplexMatrix::identity(3));
    let m = ComplexMatrix::from_rows(&[
        vec![c(2.0, 0.0), c(1.0, 0.0)],
        vec![c(1.0, 0.0), c(2.0, 0.0)],
    ])
    .unwrap();
    let s = eigenvalues(&Hermitian::new(&m).unwrap()).unwrap();
    assert!((s.values()[0] - 3.0).abs() < 1e-15 && (s.values()[1] - 1.0).abs() < 1e-15);
}

#[test]
fn orbit_point_round_trip() {
    let lam = Spectrum::new(vec![5.0, 4.0, 3.0, 2.0, 1.0]).unwrap();
    let a = random_orbit_point(&lam, &mut Seed(8).rng()).unwrap();
    let s = eigenvalues(&a).unwrap();
    for (x, y) in s.values().iter().zip(lam.values()) {
        assert!((x - y).abs() < 1e-11);
    }
    let trace = a.matrix().trace().re;
    assert!((trace - 15.0).abs() < 1e-12);
}

#[test]
fn scalar_orbit_is_a_point() {
    let lam = Spectrum::new(vec![1.75; 4]).unwrap();
    for seed in 0..5 {
        let a = random_orbit_point(&lam, &mut Seed(seed).rng()).unwrap();
        assert!(
            a.matrix()
                .sub(&ComplexMatrix::from_real_diagonal(&[1.75; 4]))
                .max_abs()
                < 1e-14
        );
    }
}

#[test]
fn haar_one_by_one_is_a_phase() {
    let u = haar_unitary(1, &mut Seed(1).rng());
    assert!((u.matrix()[(0, 0)].norm() - 1.0).abs() < 1e-15);
}

#[test]
fn haar_is_reproducible() {
    let a = haar_unitary(4, &mut Seed(42).rng());
    let b = haar_unitary(4, &mut Seed(42).rng());
    assert_eq!(a, b);
    let c = haar_unitary(4, &mut Seed(43).rng());
    assert_ne!(a, c);
}

#[test]
fn haar_columns_have_uniform_mass() {
    // E|U_ij|^2 = 1/n for Haar U.
    let mut rng = Seed(2024).rng();
    let samples = 10_000;
    let mut acc = [[0.0f64; 3]; 3];
    for _ in 0..samples {
        let u = haar_unitary(3, &mut rng);
        for (r, row) in acc.iter_mut().enumerate() {
            for (col, cell) in row.iter_mut().enumerate() {
                *cell += u.matrix()[(r, col)].norm_sqr();
            }
        }
    }
    for row in acc {
        for cell in row {
            assert!((cell / samples as f64 - 1.0 / 3.0).abs() < 0.02);
        }
    }
}

#[test]
fn commutator_closed_forms() {
    let x = random_hermitian(3, 5).into_matrix();
    assert_eq!(commutator(&x, &x).unwrap().max_abs(), 0.0);
    let d = ComplexMatrix::from_real_diagonal(&[2.5, -1.0]);
    let mut e12 = ComplexMatrix::zeros(2, 2);
    e12[(0, 1)] = c(1.0, 0.0);
    let z = commutator(&d, &e12).unwrap();
    assert_eq!(z, e12.scale(c(3.5, 0.0)));
}

#[test]
fn embed_block_examples() {
    let mut m = ComplexMatrix::zeros(1, 1);
    m[(0, 0)] = c(0.0, 1.0);
    let s = SkewHermitian::new(&m).unwrap();
    let e = s.embed(2).unwrap();
    let mut expected = ComplexMatrix::zeros(2, 2);
    expected[(0, 0)] = c(0.0, 1.0);
    assert_eq!(e.matrix(), &expected);
    assert_eq!(e.embed(2).unwrap(), e);
    assert_eq!(e.matrix().leading_block(1), m);
    assert!(e.embed(1).is_err());
}

#[test]
fn exp_skew_is_unitary() {
    let mut rng = Seed(77).rng();
    for n in 1..7 {
        let m = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng) * 4.0);
        let u = exp_skew(&SkewHermitian::new(&m).unwrap()).unwrap();
        assert!(unitarity_defect(u.matrix()) < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eig_reconstructs(n in 1usize..=8, seed in any::<u64>()) {
        let a = random_hermitian(n, seed);
        let (s, q) = eig_hermitian(&a).unwrap();
        let err = reconstruct(&s, &q).sub(a.matrix()).max_abs();
        prop_assert!(err <= 1e-11 * (1.0 + a.matrix().max_abs()));
        prop_assert!(unitarity_defect(q.matrix()) <= 1e-12);
        prop_assert!(s.values().windows(2).all(|w| w[0] >= w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hermitian_commutator_with_skew_is_hermitian(n in 1usize..=6, seed in any::<u64>()) {
        let a = random_hermitian(n, seed);
        let mut rng = Seed(seed ^ 0xabc).rng();
        let y = SkewHermitian::new(&ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng))).unwrap();
        let z = commutator(y.matrix(), a.matrix()).unwrap();
        prop_assert!(z.sub(&z.adjoint()).max_abs() <= 1e-14 * (1.0 + z.max_abs()));
    }

    #[test]
    fn haar_bit_identical(n in 1usize..=6, seed in any::<u64>()) {
        prop_assert_eq!(haar_unitary(n, &mut Seed(seed).rng()), haar_unitary(n, &mut Seed(seed).rng()));
    }
}
