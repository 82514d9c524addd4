//! End-to-end acceptance checks, one line per criterion. Runs without the
//! libtest harness so the report is always printed.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use detrep::biaffine::{minor_span_check, rank_profile_m0, symbolic_det};
use detrep::connected::{covering_gap, turan_number, turan_sets};
use detrep::constructions::{binary_quadric, construct_size, single_row_dimension_ok};
use detrep::linalg::{det, identity, matmul};
use detrep::matpoly::{commutator_padding, det_lift, det_matrix_poly, lift, MatrixPoly};
use detrep::oracle::{oracle_roots, paired_distance, OracleOptions};
use detrep::polycore::binomial;
use detrep::scalar::{int, ratio};
use detrep::symmetry::{act, coeff_action, AffineMap};
use detrep::twopareig::{random_poly, solve, SolveOptions, SolveStatus};
use detrep::{enumerate_fd, verify, ExponentVector, Mat, Method, QRep, Rational, VerifyMode, VerifyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{corpus, family_representatives, random_affine, rep, smallest_known_cells};

const QUADRIC_TIME_LIMIT: Duration = Duration::from_secs(1);
const RANDOM_POINTS: usize = 20;
const RANDOM_RADIUS: i64 = 1_000_000;
const SYMBOLIC_MAX_DEGREE: usize = 6;
const RANDOMIZED_MAX_DEGREE: usize = 12;
const RANK_POINTS: usize = 20;
const RANK_FACTOR: f64 = 1e3;
const MINOR_SPAN_MAX_SIZE: usize = 13;
const SYSTEMS_PER_KIND: usize = 50;
const SOLVER_RESIDUAL: f64 = 1e-8;
const ORACLE_MATCH: f64 = 1e-6;
const PER_SYSTEM_LIMIT: Duration = Duration::from_secs(5);
const SMOKE_SYSTEMS: usize = 20;
const SMOKE_MIN_DEGREE: usize = 7;
const SMOKE_MAX_DEGREE: usize = 15;
const SMOKE_RATE: f64 = 0.95;
const AFFINE_MAPS: usize = 10;
const LIFT_MAX_DEGREE: usize = 5;
const LIFT_MAX_BLOCK: usize = 3;
const SPLIT_CONSTANT: f64 = 3.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_check(r: &QRep, seed: u64) -> Result<(), String> {
    let opts = VerifyOptions {
        mode: VerifyMode::Randomized,
        trials: RANDOM_POINTS,
        seed,
        radius: RANDOM_RADIUS,
        ..VerifyOptions::default()
    };
    let report = verify(r, &opts).map_err(|e| e.to_string())?;
    ensure(report.pass, || format!("randomized verification failed: {:?}", report.witness))
}

fn symbolic_check(r: &QRep) -> Result<(), String> {
    let report = verify(r, &VerifyOptions::symbolic()).map_err(|e| e.to_string())?;
    ensure(report.pass, || "symbolic verification failed".into())
}

fn binary_quadric_identity() -> Outcome {
    let start = Instant::now();
    let r = binary_quadric::<Rational>();
    symbolic_check(&r)?;
    let t = start.elapsed();
    ensure(r.size() == 3, || format!("size {}", r.size()))?;
    ensure(t < QUADRIC_TIME_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("exact identity in {t:?}"))
}

fn explicit_families() -> Outcome {
    for d in 1..=RANDOMIZED_MAX_DEGREE {
        for (method, size) in [(Method::Repjan, 2 * d + 1), (Method::Minunif, 2 * d - 1)] {
            let r = rep(2, d, method);
            ensure(r.size() == size, || format!("{method}({d}) has size {}", r.size()))?;
            if d <= SYMBOLIC_MAX_DEGREE {
                symbolic_check(&r).map_err(|e| format!("{method}({d}): {e}"))?;
            }
            random_check(&r, d as u64).map_err(|e| format!("{method}({d}): {e}"))?;
        }
    }
    let sizes: Vec<usize> = (3..=12).map(|d| construct_size(2, d, Method::Minunif).unwrap()).collect();
    ensure(sizes == [5, 7, 9, 11, 13, 15, 17, 19, 21, 23], || format!("minunif sizes {sizes:?}"))?;
    Ok(format!(
        "repjan/minunif sizes for d<=12, symbolic d<={SYMBOLIC_MAX_DEGREE}, minunif row {sizes:?}"
    ))
}

fn smallest_known_table() -> Outcome {
    let start = Instant::now();
    let cells = smallest_known_cells();
    for &(n, d, size) in &cells {
        let method = Method::documented(n);
        let r = rep(n, d, method);
        ensure(r.size() == size, || format!("({n},{d}) {method} gives {} not {size}", r.size()))?;
        random_check(&r, (n * 100 + d) as u64).map_err(|e| format!("({n},{d}): {e}"))?;
    }
    Ok(format!("{} cells reproduced and verified in {:?}", cells.len(), start.elapsed()))
}

fn turan_law() -> Outcome {
    for n in 4..=12 {
        let (v, w) = turan_sets(n).map_err(|e| e.to_string())?;
        let m = n / 3;
        let expected = m * n - 3 * m * (m + 1) / 2;
        let quadratic = w.members().iter().filter(|e| e.degree() == 2).count();
        ensure(quadratic == expected && turan_number(n) == expected, || {
            format!("n={n}: |W1|={quadratic}, formula {expected}")
        })?;
        if n <= 8 {
            if let Some(gap) = covering_gap(&v, &w, 4) {
                return Err(format!("n={n}: {gap} uncovered"));
            }
        }
    }
    Ok("|W1| = mn - 3m(m+1)/2 for n=4..12, covering exhaustive for n<=8".into())
}

fn singular_m0_and_minor_span() -> Outcome {
    let reps = corpus();
    let mut spans = 0;
    for (k, (label, r)) in reps.iter().enumerate() {
        let size = r.size();
        let m0 = r.m0().map(|f| f.to_poly(r.nvars(), 0));
        if size <= MINOR_SPAN_MAX_SIZE {
            let d0 = symbolic_det(&m0, MINOR_SPAN_MAX_SIZE).map_err(|e| format!("{label}: {e}"))?;
            ensure(d0.is_zero(), || format!("{label}: det(M0) = {d0}"))?;
            let report = minor_span_check(r, MINOR_SPAN_MAX_SIZE).map_err(|e| format!("{label}: {e}"))?;
            ensure(report.pass, || format!("{label}: minor span fails, uncovered {:?}", report.uncovered))?;
            spans += 1;
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
            for _ in 0..RANK_POINTS {
                let x: Vec<Rational> = (0..r.nvars())
                    .map(|_| int(rng.gen_range(-RANDOM_RADIUS..=RANDOM_RADIUS)))
                    .collect();
                let m = m0.try_map(|p| p.eval(&x)).map_err(|e| e.to_string())?;
                ensure(det(&m) == int(0), || format!("{label}: det(M0) nonzero at {x:?}"))?;
            }
        }
        let profile = rank_profile_m0(r, RANK_POINTS, k as u64, RANK_FACTOR);
        ensure(profile.min == size - 1 && profile.max == size - 1, || {
            format!("{label}: M0 ranks {:?}, expected {}", profile.ranks, size - 1)
        })?;
    }
    Ok(format!(
        "{} representations singular with rank N-1; minor span checked on {spans} with N<={MINOR_SPAN_MAX_SIZE}",
        reps.len()
    ))
}

fn single_row_inequality() -> Outcome {
    let mut checked = 0;
    let mut cases: Vec<(usize, usize, Method)> = (1..=12).map(|d| (2, d, Method::Cons1Tree)).collect();
    for n in 2..=5 {
        for d in 1..=5 {
            cases.push((n, d, Method::Cons1Lattice));
        }
    }
    for (n, d, m) in cases {
        let size = construct_size(n, d, m).map_err(|e| e.to_string())?;
        ensure(single_row_dimension_ok(size, n, d), || format!("{m} n={n} d={d} size {size}"))?;
        checked += 1;
    }
    let boundary = construct_size(2, 2, Method::Cons1Tree).unwrap();
    let lhs = boundary * 3 - (boundary - 1);
    let rhs = binomial(4, 2) as usize;
    ensure(boundary == 3 && lhs == 7 && rhs == 6, || format!("boundary {lhs} >= {rhs} at N={boundary}"))?;
    Ok(format!("{checked} single-row outputs satisfy the inequality; boundary {lhs} >= {rhs}"))
}

struct SystemRun {
    degree: usize,
    complex: bool,
    roots: usize,
    residual: f64,
    distance: Option<f64>,
    elapsed: Duration,
    error: Option<String>,
}

fn run_system(degree: usize, complex: bool, seed: u64, with_oracle: bool) -> SystemRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_poly(degree, complex, &mut rng);
    let q = random_poly(degree, complex, &mut rng);
    let start = Instant::now();
    let result = solve(&p, &q, &SolveOptions { seed, ..SolveOptions::default() });
    let elapsed = start.elapsed();
    match result {
        Ok(set) => {
            let residual = set.roots.iter().map(|r| r.residual).fold(0.0, f64::max);
            let distance = if with_oracle && set.status == SolveStatus::Ok {
                oracle_roots(&p, &q, &OracleOptions::default())
                    .ok()
                    .and_then(|o| paired_distance(&set.roots, &o.roots))
            } else {
                None
            };
            SystemRun {
                degree,
                complex,
                roots: set.roots.len(),
                residual,
                distance,
                elapsed,
                error: None,
            }
        }
        Err(e) => SystemRun {
            degree,
            complex,
            roots: 0,
            residual: f64::INFINITY,
            distance: None,
            elapsed,
            error: Some(e.to_string()),
        },
    }
}

fn solver_correctness() -> Outcome {
    let jobs: Vec<(usize, bool, u64)> = (3..=6)
        .flat_map(|d| {
            [false, true].into_iter().flat_map(move |c| {
                (0..SYSTEMS_PER_KIND).map(move |i| (d, c, (d * 1000 + usize::from(c) * 100 + i) as u64))
            })
        })
        .collect();
    let runs: Vec<SystemRun> = jobs.par_iter().map(|&(d, c, s)| run_system(d, c, s, true)).collect();
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for r in &runs {
        let kind = if r.complex { "complex" } else { "real" };
        let tag = format!("d={} {kind}", r.degree);
        ensure(r.error.is_none(), || format!("{tag}: {}", r.error.clone().unwrap_or_default()))?;
        ensure(r.roots == r.degree * r.degree, || format!("{tag}: {} roots", r.roots))?;
        ensure(r.residual < SOLVER_RESIDUAL, || format!("{tag}: residual {:.2e}", r.residual))?;
        let dist = r.distance.ok_or_else(|| format!("{tag}: oracle could not be paired"))?;
        ensure(dist < ORACLE_MATCH, || format!("{tag}: oracle distance {dist:.2e}"))?;
        ensure(r.elapsed < PER_SYSTEM_LIMIT, || format!("{tag}: took {:?}", r.elapsed))?;
        worst = worst.max(dist);
        slowest = slowest.max(r.elapsed);
    }

    let smoke: Vec<SystemRun> = (0..SMOKE_SYSTEMS)
        .into_par_iter()
        .map(|i| {
            let d = SMOKE_MAX_DEGREE - i % (SMOKE_MAX_DEGREE - SMOKE_MIN_DEGREE + 1);
            run_system(d, i % 2 == 1, 90_000 + i as u64, false)
        })
        .collect();
    let recovered = smoke
        .iter()
        .filter(|r| r.error.is_none() && r.roots == r.degree * r.degree && r.residual < SOLVER_RESIDUAL)
        .count();
    let rate = recovered as f64 / SMOKE_SYSTEMS as f64;
    let failed: Vec<usize> = smoke
        .iter()
        .filter(|r| !(r.error.is_none() && r.roots == r.degree * r.degree))
        .map(|r| r.degree)
        .collect();
    ensure(rate >= SMOKE_RATE, || format!("smoke recovery {recovered}/{SMOKE_SYSTEMS}, failed degrees {failed:?}"))?;
    Ok(format!(
        "{} systems d=3..6 match the oracle (max distance {worst:.1e}, slowest {slowest:?}); smoke d<={SMOKE_MAX_DEGREE}: {recovered}/{SMOKE_SYSTEMS}",
        runs.len()
    ))
}

/// Basis order 1, x, y, x², xy, y² as positions in the graded-lex order.
const XFIRST: [usize; 6] = [0, 2, 1, 5, 4, 3];

fn affine_equivariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let families = family_representatives();
    for (label, r) in &families {
        for k in 0..AFFINE_MAPS {
            let g = random_affine(r.nvars(), &mut rng);
            let moved = act(&g, r).map_err(|e| format!("{label}: {e}"))?;
            ensure(moved.size() == r.size(), || format!("{label}: size changed"))?;
            random_check(&moved, k as u64).map_err(|e| format!("{label} map {k}: {e}"))?;
            let rho = coeff_action(&g, r.degree());
            let back = coeff_action(&g.inverse(), r.degree());
            ensure(matmul(&rho, &back) == identity(rho.rows()), || format!("{label}: rho(g)rho(g^-1) != I"))?;
        }
    }
    let a = Mat::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
    let g = AffineMap::new(a, vec![int(0), int(1)]).map_err(|e| e.to_string())?;
    let rho = coeff_action(&g, 2);
    let printed: [[i64; 6]; 6] = [
        [1, -1, 0, 1, 0, 0],
        [0, 0, 1, 0, -1, 0],
        [0, 1, 0, -2, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 1, 0, 0],
    ];
    for i in 0..6 {
        for j in 0..6 {
            ensure(rho[(XFIRST[i], XFIRST[j])] == int(printed[i][j]), || format!("rho entry ({i},{j})"))?;
        }
    }
    Ok(format!(
        "{} families x {AFFINE_MAPS} maps verified, rho inverse exact, (y, x+1) action reproduced",
        families.len()
    ))
}

fn random_matrix_poly(d: usize, k: usize, rng: &mut impl Rng) -> MatrixPoly<Rational> {
    let mut terms = BTreeMap::new();
    for e in enumerate_fd(2, d) {
        let c = Mat::from_fn(k, k, |_, _| ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3)));
        terms.insert(e, c);
    }
    MatrixPoly::new(2, d, k, terms).unwrap()
}

fn eval_det_lift(l: &detrep::matpoly::Lift<Rational>, x: &[Rational]) -> Rational {
    det(&l.matrix.map(|f| f.eval(x).unwrap()))
}

fn matrix_poly_lift() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut cases = 0;
    for d in 1..=LIFT_MAX_DEGREE {
        let r = rep(2, d, Method::Repjan);
        for k in 1..=LIFT_MAX_BLOCK {
            let p = random_matrix_poly(d, k, &mut rng);
            let l = lift(&r, &p).map_err(|e| e.to_string())?;
            let lhs = det_lift(&l, r.size() * k).map_err(|e| e.to_string())?;
            let rhs = det_matrix_poly(&p).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("repjan({d}) k={k}: det(lift) != det(P)"))?;
            cases += 1;
        }
    }

    // A representation padded with a block whose coefficient matrices need
    // not commute: still a scalar representation, but not a lift.
    let base = rep(2, 1, Method::Repjan);
    let ev = |a, b| ExponentVector::new(vec![a, b]);
    let padded = commutator_padding(&base, &ev(0, 0), &ev(1, 0)).map_err(|e| e.to_string())?;
    symbolic_check(&padded).map_err(|e| format!("padded representation: {e}"))?;
    let mut detected = None;
    for trial in 0..20 {
        let p = random_matrix_poly(1, 2, &mut rng);
        let l = lift(&padded, &p).map_err(|e| e.to_string())?;
        let target = det_matrix_poly(&p).map_err(|e| e.to_string())?;
        let x = vec![int(rng.gen_range(-100..=100)), int(rng.gen_range(-100..=100))];
        if eval_det_lift(&l, &x) != target.eval(&x).map_err(|e| e.to_string())? {
            detected = Some(trial);
            break;
        }
    }
    let trial = detected.ok_or("counterexample never detected")?;
    Ok(format!("{cases} lifts exact for d<={LIFT_MAX_DEGREE}, k<={LIFT_MAX_BLOCK}; counterexample detected at sample {trial}"))
}

fn asymptotic_sizes() -> Outcome {
    let mut prev_gap = f64::INFINITY;
    for d in [10, 100, 1000] {
        let ratio = construct_size(2, d, Method::Minunif).unwrap() as f64 / d as f64;
        let gap = (2.0 - ratio).abs();
        ensure(gap <= 1.0 / d as f64 + 1e-12 && gap < prev_gap, || format!("minunif({d})/d = {ratio}"))?;
        prev_gap = gap;
    }
    let mut worst = 0.0f64;
    for (n, max_d) in [(2usize, 12usize), (4, 6)] {
        for d in 2..=max_d {
            let size = construct_size(n, d, Method::Cons2Split).unwrap() as f64;
            let ratio = size / (d as f64).powi(n as i32 / 2);
            ensure(ratio <= SPLIT_CONSTANT, || format!("split({n},{d})/d^(n/2) = {ratio}"))?;
            worst = worst.max(ratio);
        }
    }
    Ok(format!("minunif/d -> 2 (gap <= 1/d); split/d^(n/2) <= {worst:.3} <= {SPLIT_CONSTANT}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("binary quadric exact identity", binary_quadric_identity),
        ("explicit bivariate families", explicit_families),
        ("smallest known size table", smallest_known_table),
        ("turan sets", turan_law),
        ("singular M0 and minor span", singular_m0_and_minor_span),
        ("single-row dimension inequality", single_row_inequality),
        ("two-parameter solver", solver_correctness),
        ("affine equivariance", affine_equivariance),
        ("matrix-polynomial lift", matrix_poly_lift),
        ("asymptotic sizes", asymptotic_sizes),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{t:.1?}]", k + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why} [{t:.1?}]", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

