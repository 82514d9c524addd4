#![allow(dead_code)]

use detrep::constructions::{binary_quadric, construct};
use detrep::scalar::int;
use detrep::symmetry::AffineMap;
use detrep::{Mat, Method, QRep, Rational};
use rand::Rng;

/// Filled cells of the table of smallest known sizes: `(n, [size at d = 2, 3, ...])`.
pub const SMALLEST_KNOWN: &[(usize, &[usize])] = &[
    (2, &[3, 5, 7, 9, 11, 13, 15, 17]),
    (3, &[4, 7, 10, 14, 18, 22, 27, 34]),
    (4, &[5, 9, 14, 19, 26, 34, 44]),
    (5, &[6, 11, 18, 26]),
    (6, &[7, 13, 22, 33]),
    (7, &[8, 15, 27, 39]),
    (8, &[9, 17, 32]),
];

pub fn smallest_known_cells() -> Vec<(usize, usize, usize)> {
    SMALLEST_KNOWN
        .iter()
        .flat_map(|&(n, row)| row.iter().enumerate().map(move |(i, &size)| (n, i + 2, size)))
        .collect()
}

pub fn rep(n: usize, d: usize, method: Method) -> QRep {
    construct::<Rational>(n, d, method).unwrap_or_else(|e| panic!("{method} n={n} d={d}: {e}"))
}

/// Every representation the suite exercises, labelled.
pub fn corpus() -> Vec<(String, QRep)> {
    let mut out = vec![("binary-quadric".to_string(), binary_quadric::<Rational>())];
    let mut push = |n: usize, d: usize, m: Method| out.push((format!("{m} n={n} d={d}"), rep(n, d, m)));
    for d in 1..=6 {
        push(2, d, Method::Repjan);
    }
    for d in 1..=12 {
        push(2, d, Method::Minunif);
    }
    for d in 2..=8 {
        push(2, d, Method::Cons1Tree);
    }
    for (n, d) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2)] {
        push(n, d, Method::Cons1Lattice);
    }
    for d in 2..=12 {
        push(2, d, Method::Cons2Split);
    }
    for d in 2..=6 {
        push(4, d, Method::Cons2Split);
    }
    for (n, d, _) in smallest_known_cells().into_iter().filter(|c| c.0 > 2) {
        push(n, d, Method::Cons2Table);
    }
    for n in 4..=8 {
        push(n, 4, Method::Cons2Turan);
    }
    for (n, d) in [(3, 2), (3, 3), (3, 4), (4, 3)] {
        push(n, d, Method::Cons2Binary);
    }
    out
}

/// One small representative of each construction family.
pub fn family_representatives() -> Vec<(String, QRep)> {
    let mut out = vec![("binary-quadric".to_string(), binary_quadric::<Rational>())];
    for (n, d, m) in [
        (2, 3, Method::Repjan),
        (2, 3, Method::Minunif),
        (2, 3, Method::Cons1Tree),
        (3, 2, Method::Cons1Lattice),
        (2, 3, Method::Cons2Split),
        (3, 3, Method::Cons2Table),
        (4, 4, Method::Cons2Turan),
        (3, 2, Method::Cons2Binary),
    ] {
        out.push((format!("{m} n={n} d={d}"), rep(n, d, m)));
    }
    out
}

/// Random invertible affine map with small integer entries.
pub fn random_affine(n: usize, rng: &mut impl Rng) -> AffineMap<Rational> {
    loop {
        let a = Mat::from_fn(n, n, |_, _| int(rng.gen_range(-3..=3)));
        let b = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
        if let Ok(g) = AffineMap::new(a, b) {
            return g;
        }
    }
}
