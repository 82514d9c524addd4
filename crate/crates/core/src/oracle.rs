//! Independent bivariate root finder by elimination.
//!
//! `Res_y(p, q)(x)` is sampled at roots of unity through the Sylvester
//! determinant and interpolated; its companion eigenvalues are the
//! `x`-coordinates. For each, `y` is the root of `p(x, ·)` on which `q`
//! is smallest, and the pair is polished by Newton's method. Nothing is
//! shared with the eigenvalue pipeline beyond dense LU and Schur.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::polycore::MultiPoly;
use crate::symmetry::{substitute_poly, AffineMap};
use crate::twopareig::{Root, RootSet, SolveStatus};

type C = Complex64;
type CPoly = MultiPoly<C>;

/// Settings for [`oracle_roots`].
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Roots closer than this (relative) are merged.
    pub dedup: f64,
    /// Roots with a larger normalized residual are dropped.
    pub accept: f64,
    pub newton_iters: usize,
    pub seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            dedup: 1e-8,
            accept: 1e-8,
            newton_iters: 20,
            seed: 0,
        }
    }
}

/// Coefficients of `p` as a polynomial in `y`: entry `j` holds the
/// `x`-coefficients (ascending) of `y^j`.
fn by_y_power(p: &CPoly) -> Vec<Vec<C>> {
    let mut out: Vec<Vec<C>> = Vec::new();
    for (e, c) in p.terms() {
        let (a, b) = (e.get(0) as usize, e.get(1) as usize);
        if out.len() <= b {
            out.resize(b + 1, Vec::new());
        }
        if out[b].len() <= a {
            out[b].resize(a + 1, C::new(0.0, 0.0));
        }
        out[b][a] += *c;
    }
    out
}

fn horner(c: &[C], x: C) -> C {
    c.iter().rev().fold(C::new(0.0, 0.0), |acc, &v| acc * x + v)
}

/// Sylvester determinant and its Hadamard bound.
fn sylvester_det(a: &[C], b: &[C]) -> (C, f64) {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return (C::new(1.0, 0.0), 1.0);
    }
    let mut s = DMatrix::from_element(size, size, C::new(0.0, 0.0));
    for r in 0..n {
        for (k, &v) in a.iter().rev().enumerate() {
            s[(r, r + k)] = v;
        }
    }
    for r in 0..m {
        for (k, &v) in b.iter().rev().enumerate() {
            s[(n + r, r + k)] = v;
        }
    }
    let bound = (0..size).map(|i| s.row(i).norm()).product();
    (s.lu().determinant(), bound)
}

/// Roots of `Σ c_k t^k` from the companion matrix; leading coefficients
/// below `1e-13` of the largest are treated as zero (roots at infinity).
pub fn univariate_roots(c: &[C]) -> Vec<C> {
    let big = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if big == 0.0 {
        return Vec::new();
    }
    let mut deg = c.len() - 1;
    while deg > 0 && c[deg].norm() <= 1e-13 * big {
        deg -= 1;
    }
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let mut comp = DMatrix::from_element(deg, deg, C::new(0.0, 0.0));
    for i in 1..deg {
        comp[(i, i - 1)] = C::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / lead;
    }
    let (_, t) = comp.schur().unpack();
    (0..deg).map(|i| t[(i, i)]).collect()
}

fn residual(p: &CPoly, x: C, y: C) -> f64 {
    let (mut num, mut den) = (C::new(0.0, 0.0), 0.0);
    for (e, c) in p.terms() {
        let t = *c * x.powu(e.get(0)) * y.powu(e.get(1));
        num += t;
        den += t.norm();
    }
    if den == 0.0 {
        num.norm()
    } else {
        num.norm() / den
    }
}

fn value_and_gradient(p: &CPoly, x: C, y: C) -> (C, C, C) {
    let zero = C::new(0.0, 0.0);
    let (mut v, mut dx, mut dy) = (zero, zero, zero);
    for (e, c) in p.terms() {
        let (a, b) = (e.get(0), e.get(1));
        v += *c * x.powu(a) * y.powu(b);
        if a > 0 {
            dx += *c * (a as f64) * x.powu(a - 1) * y.powu(b);
        }
        if b > 0 {
            dy += *c * (b as f64) * x.powu(a) * y.powu(b - 1);
        }
    }
    (v, dx, dy)
}

fn newton(p: &CPoly, q: &CPoly, mut x: C, mut y: C, iters: usize) -> (C, C, f64) {
    let res = |x, y| residual(p, x, y).max(residual(q, x, y));
    let mut cur = res(x, y);
    for _ in 0..iters {
        let (f, fx, fy) = value_and_gradient(p, x, y);
        let (g, gx, gy) = value_and_gradient(q, x, y);
        let det = fx * gy - fy * gx;
        if det.norm() == 0.0 {
            break;
        }
        let nx = x - (gy * f - fy * g) / det;
        let ny = y - (fx * g - gx * f) / det;
        let next = res(nx, ny);
        // Stop unless the residual did not grow; NaN compares as growth.
        if !matches!(next.partial_cmp(&cur), Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal)) {
            break;
        }
        let stalled = next == cur;
        (x, y, cur) = (nx, ny, next);
        if stalled || cur == 0.0 {
            break;
        }
    }
    (x, y, cur)
}

fn leading_is_regular(p: &CPoly) -> bool {
    let d = p.degree().finite().unwrap_or(0);
    let cols = by_y_power(p);
    let norm: f64 = p.terms().map(|(_, c)| c.norm()).sum();
    cols.len() == d + 1 && cols[d].len() == 1 && cols[d][0].norm() > 1e-8 * norm
}

/// Common roots of `p` and `q` by resultant elimination. If eliminating
/// `y` misses roots, `x` is eliminated as well and the results merged.
pub fn oracle_roots(p: &CPoly, q: &CPoly, opts: &OracleOptions) -> Result<RootSet> {
    for f in [p, q] {
        if f.nvars() != 2 {
            return Err(Error::VariableCountMismatch {
                left: f.nvars(),
                right: 2,
            });
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
    }
    let expected = p.degree().finite().unwrap_or(0) * q.degree().finite().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut found = eliminate(p, q, opts, &mut rng)?;
    if found.roots.len() < expected {
        let (zero, one) = (C::new(0.0, 0.0), C::new(1.0, 0.0));
        let swap = AffineMap::new(
            Mat::from_rows(vec![vec![zero, one], vec![one, zero]]).expect("2x2"),
            vec![zero; 2],
        )?;
        let other = eliminate(&substitute_poly(p, &swap), &substitute_poly(q, &swap), opts, &mut rng)?;
        found.rotations += other.rotations;
        for r in other.roots {
            push_distinct(&mut found.roots, Root::new(r.y, r.x, r.residual), opts.dedup);
        }
    }
    let roots = found.roots;
    let status = if roots.len() == expected {
        SolveStatus::Ok
    } else if roots.is_empty() {
        SolveStatus::Failed
    } else {
        SolveStatus::Partial
    };
    Ok(RootSet {
        reduced_size: found.degree,
        retries: found.rotations,
        status,
        rank_log: Vec::new(),
        rejected: found.rejected,
        failure: (status != SolveStatus::Ok)
            .then(|| format!("recovered {} of {expected} roots", roots.len())),
        roots,
    })
}

struct Elimination {
    roots: Vec<Root>,
    rejected: usize,
    rotations: usize,
    /// Degree of the interpolated resultant.
    degree: usize,
}

fn push_distinct(roots: &mut Vec<Root>, r: Root, tol: f64) -> bool {
    let scale = 1f64.max(r.x.norm().max(r.y.norm()));
    if roots
        .iter()
        .any(|s| ((s.x - r.x).norm_sqr() + (s.y - r.y).norm_sqr()).sqrt() <= tol * scale)
    {
        return false;
    }
    roots.push(r);
    true
}

fn eliminate(p: &CPoly, q: &CPoly, opts: &OracleOptions, rng: &mut ChaCha8Rng) -> Result<Elimination> {
    let mut map: Option<AffineMap<C>> = None;
    let (mut pp, mut qq) = (p.clone(), q.clone());
    let mut rotations = 0;
    while !(leading_is_regular(&pp) && leading_is_regular(&qq)) {
        if rotations == 8 {
            return Err(Error::Invalid("could not regularize leading coefficients".into()));
        }
        rotations += 1;
        let t: f64 = rng.gen_range(0.0..TAU);
        let (c, s) = (C::new(t.cos(), 0.0), C::new(t.sin(), 0.0));
        let a = Mat::from_rows(vec![vec![c, -s], vec![s, c]]).expect("2x2");
        let g = AffineMap::new(a, vec![C::new(0.0, 0.0); 2])?;
        pp = substitute_poly(p, &g);
        qq = substitute_poly(q, &g);
        map = Some(g);
    }
    let (d1, d2) = (
        pp.degree().finite().unwrap_or(0),
        qq.degree().finite().unwrap_or(0),
    );
    let (ap, aq) = (by_y_power(&pp), by_y_power(&qq));
    let nodes = d1 * d2 + 1;
    let samples: Vec<(C, f64)> = (0..nodes)
        .map(|k| {
            let w = C::from_polar(1.0, TAU * k as f64 / nodes as f64);
            let a: Vec<C> = ap.iter().map(|c| horner(c, w)).collect();
            let b: Vec<C> = aq.iter().map(|c| horner(c, w)).collect();
            sylvester_det(&a, &b)
        })
        .collect();
    let values: Vec<C> = samples.iter().map(|s| s.0).collect();
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let bound = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    // A common factor makes the resultant vanish identically.
    if scale <= 1e-10 * bound {
        return Err(Error::PositiveDimensional);
    }
    // Inverse discrete Fourier transform at the roots of unity.
    let coeffs: Vec<C> = (0..nodes)
        .map(|j| {
            values
                .iter()
                .enumerate()
                .map(|(k, &v)| v * C::from_polar(1.0, -TAU * (j * k % nodes) as f64 / nodes as f64))
                .sum::<C>()
                / nodes as f64
        })
        .collect();
    let mut roots: Vec<Root> = Vec::new();
    let mut rejected = 0;
    for x in univariate_roots(&coeffs) {
        let col: Vec<C> = ap.iter().map(|c| horner(c, x)).collect();
        let best = univariate_roots(&col)
            .into_iter()
            .map(|y| (y, residual(&qq, x, y)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let Some((y, _)) = best else {
            rejected += 1;
            continue;
        };
        let (x, y, _) = newton(&pp, &qq, x, y, opts.newton_iters);
        let (x, y) = match &map {
            Some(g) => {
                let v = g.apply(&[x, y]);
                (v[0], v[1])
            }
            None => (x, y),
        };
        let (x, y, res) = newton(p, q, x, y, opts.newton_iters);
        if res >= opts.accept {
            rejected += 1;
            continue;
        }
        push_distinct(&mut roots, Root::new(x, y, res), opts.dedup);
    }
    Ok(Elimination {
        roots,
        rejected,
        rotations,
        degree: coeffs.len() - 1,
    })
}

/// Largest distance between paired roots under the pairing that
/// minimizes the total distance; `None` when the counts differ.
pub fn paired_distance(a: &[Root], b: &[Root]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    if a.is_empty() {
        return Some(0.0);
    }
    let dist = |r: &Root, s: &Root| ((r.x - s.x).norm_sqr() + (r.y - s.y).norm_sqr()).sqrt();
    // Integer weights for the assignment solver at 1e-12 resolution; the cap
    // keeps the solver's label sums far from i64 overflow.
    let weights = pathfinding::matrix::Matrix::from_fn(a.len(), b.len(), |(i, j)| {
        (dist(&a[i], &b[j]).min(1e3) * 1e12) as i64
    });
    let (_, assignment) = pathfinding::kuhn_munkres::kuhn_munkres_min(&weights);
    Some(
        assignment
            .iter()
            .enumerate()
            .map(|(i, &j)| dist(&a[i], &b[j]))
            .fold(0.0, f64::max),
    )
}
