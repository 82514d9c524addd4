mod common;

use std::collections::BTreeMap;

use detrep::linalg::{identity, matmul};
use detrep::matpoly::{lift, MatrixPoly};
use detrep::oracle::paired_distance;
use detrep::scalar::{int, ratio};
use detrep::symmetry::{coeff_action, substitute_poly, AffineMap};
use detrep::twopareig::{kron, random_poly, rotate_with, solve, CMat, SolveOptions};
use detrep::{enumerate_fd, Complex64, Mat, Method, MultiPoly, QPoly, QRep, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_affine, rep};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn affine_map(n: usize) -> impl Strategy<Value = AffineMap<Rational>> {
    any::<u64>().prop_map(move |seed| random_affine(n, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn matrix_poly(d: usize, k: usize) -> impl Strategy<Value = MatrixPoly<Rational>> {
    let count = enumerate_fd(2, d).len();
    prop::collection::vec(small_rational(), count * k * k).prop_map(move |vals| {
        let mut terms = BTreeMap::new();
        for (t, e) in enumerate_fd(2, d).into_iter().enumerate() {
            terms.insert(e, Mat::from_fn(k, k, |i, j| vals[t * k * k + i * k + j].clone()));
        }
        MatrixPoly::new(2, d, k, terms).unwrap()
    })
}

fn bivariate_poly(d: usize) -> impl Strategy<Value = QPoly> {
    prop::collection::vec(small_rational(), enumerate_fd(2, d).len()).prop_map(move |cs| {
        let mut p = MultiPoly::zero(2);
        for (e, c) in enumerate_fd(2, d).into_iter().zip(cs) {
            p.add_term(e, c);
        }
        p
    })
}

fn sum(a: &MatrixPoly<Rational>, b: &MatrixPoly<Rational>) -> MatrixPoly<Rational> {
    let mut terms = BTreeMap::new();
    for (e, m) in a.terms() {
        let other = b.coeff(e).unwrap();
        terms.insert(e.clone(), Mat::from_fn(m.rows(), m.cols(), |i, j| &m[(i, j)] + &other[(i, j)]));
    }
    MatrixPoly::new(2, a.degree(), a.block_size(), terms).unwrap()
}

fn cmat(seed: u64, r: usize, c: usize) -> CMat {
    let p = random_poly(4, true, &mut ChaCha8Rng::seed_from_u64(seed));
    let coeffs: Vec<Complex64> = p.terms().map(|(_, c)| *c).collect();
    CMat::from_fn(r, c, |i, j| coeffs[(i * c + j) % coeffs.len()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lift_is_affine_in_the_coefficients(a in matrix_poly(2, 2), b in matrix_poly(2, 2)) {
        let r: QRep = rep(2, 2, Method::Repjan);
        let la = lift(&r, &a).unwrap().matrix;
        let lb = lift(&r, &b).unwrap().matrix;
        let lab = lift(&r, &sum(&a, &b)).unwrap().matrix;
        // M₀ ⊗ I appears once on the left and twice on the right.
        let zero = lift(&r, &MatrixPoly::new(2, 2, 2, BTreeMap::new()).unwrap()).unwrap().matrix;
        for i in 0..lab.rows() {
            for j in 0..lab.cols() {
                prop_assert_eq!(lab[(i, j)].add(&zero[(i, j)]), la[(i, j)].add(&lb[(i, j)]));
            }
        }
    }

    #[test]
    fn coefficient_action_is_a_homomorphism(g in affine_map(2), h in affine_map(2), d in 1usize..=3) {
        let gh = g.compose(&h);
        prop_assert_eq!(coeff_action(&gh, d), matmul(&coeff_action(&g, d), &coeff_action(&h, d)));
        prop_assert_eq!(coeff_action(&AffineMap::<Rational>::identity(2), d), identity(enumerate_fd(2, d).len()));
    }

    #[test]
    fn coefficient_action_moves_polynomials(g in affine_map(2), p in bivariate_poly(2)) {
        // p(g⁻¹x) has coefficient vector ρ(g)·c.
        let basis = enumerate_fd(2, 2);
        let rho = coeff_action(&g, 2);
        let moved = substitute_poly(&p, &g.inverse());
        for (i, beta) in basis.iter().enumerate() {
            let mut want = int(0);
            for (j, alpha) in basis.iter().enumerate() {
                want += &rho[(i, j)] * &p.coeff(alpha);
            }
            prop_assert_eq!(moved.coeff(beta), want);
        }
    }

    #[test]
    fn kronecker_mixed_product(s in 0u64..1000) {
        let (a, b, c, d) = (cmat(s, 2, 3), cmat(s + 1, 3, 2), cmat(s + 2, 3, 2), cmat(s + 3, 2, 3));
        let lhs = &kron(&a, &c) * &kron(&b, &d);
        let rhs = kron(&(&a * &b), &(&c * &d));
        let diff = (&lhs - &rhs).norm_l2();
        prop_assert!(diff < 1e-12 * (1.0 + rhs.norm_l2()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rotation_keeps_the_roots(seed in any::<u64>(), theta in 0.0f64..std::f64::consts::TAU, d in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(d, true, &mut rng);
        let q = random_poly(d, true, &mut rng);
        let (pr, qr) = rotate_with(&p, &q, theta);
        let a = solve(&p, &q, &SolveOptions::default()).unwrap();
        let b = solve(&pr, &qr, &SolveOptions::default()).unwrap();
        prop_assert_eq!(a.roots.len(), d * d);
        let dist = paired_distance(&a.roots, &b.roots).unwrap();
        prop_assert!(dist < 1e-8, "distance {}", dist);
    }
}
