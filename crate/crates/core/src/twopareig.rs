//! Bivariate systems as two-parameter eigenvalue problems.
//!
//! With `det(A₀ + xA₁ + yA₂) = p(x,y)` and `det(B₀ + xB₁ + yB₂) = q(x,y)`
//! the common roots are the eigenvalues of the operator determinants
//! `Δ₀ = A₁⊗B₂ - A₂⊗B₁`, `Δ₁ = A₂⊗B₀ - A₀⊗B₂`, `Δ₂ = A₀⊗B₁ - A₁⊗B₀`,
//! i.e. `(Δ₁ - xΔ₀)w = (Δ₂ - yΔ₀)w = 0` with `w = u⊗v`. For uniform
//! representations these pencils are singular; a staircase of rank
//! revealing compressions extracts the regular part of size `d₁d₂`, whose
//! commuting quotients `Δ₀⁻¹Δ₁`, `Δ₀⁻¹Δ₂` are triangularized together.

use std::io::Write;

use faer::Mat as FMat;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::constructions::{construct, Method};
use crate::error::{Error, Result};
use crate::polycore::{ExponentVector, MultiPoly};

type C = Complex64;
type CPoly = MultiPoly<C>;

/// Dense complex matrix used throughout the pipeline.
pub type CMat = FMat<C>;

/// `A₀ + xA₁ + yA₂` and `B₀ + xB₁ + yB₂`.
#[derive(Debug, Clone)]
pub struct TwoParamProblem {
    pub a: [CMat; 3],
    pub b: [CMat; 3],
    pub degrees: (usize, usize),
}

/// Representation matrices of `p` and `q` from a bivariate construction.
pub fn to_two_param(p: &CPoly, q: &CPoly, method: Method) -> Result<TwoParamProblem> {
    let (pa, dp) = pencil_of(p, method)?;
    let (pb, dq) = pencil_of(q, method)?;
    Ok(TwoParamProblem {
        a: pa,
        b: pb,
        degrees: (dp, dq),
    })
}

fn pencil_of(p: &CPoly, method: Method) -> Result<([CMat; 3], usize)> {
    if p.nvars() != 2 {
        return Err(Error::VariableCountMismatch {
            left: p.nvars(),
            right: 2,
        });
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = p.degree().finite().unwrap_or(0);
    let rep = construct::<C>(2, d, method)?;
    let m = rep.specialize(p)?;
    let k = m.rows();
    let part = |t: usize| {
        CMat::from_fn(k, k, |i, j| {
            let f = &m[(i, j)];
            if t == 0 {
                f.constant
            } else {
                f.linear[t - 1]
            }
        })
    };
    Ok(([part(0), part(1), part(2)], d))
}

/// `Δ₀, Δ₁, Δ₂`.
#[derive(Debug, Clone)]
pub struct DeltaTriple {
    pub d0: CMat,
    pub d1: CMat,
    pub d2: CMat,
}

impl DeltaTriple {
    pub fn size(&self) -> (usize, usize) {
        (self.d0.nrows(), self.d0.ncols())
    }
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (br, bc) = (b.nrows(), b.ncols());
    CMat::from_fn(a.nrows() * br, a.ncols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn build_deltas(tp: &TwoParamProblem) -> DeltaTriple {
    let [a0, a1, a2] = &tp.a;
    let [b0, b1, b2] = &tp.b;
    DeltaTriple {
        d0: kron(a1, b2) - kron(a2, b1),
        d1: kron(a2, b0) - kron(a0, b2),
        d2: kron(a0, b1) - kron(a1, b0),
    }
}

/// Thresholds for numerical rank decisions.
#[derive(Debug, Clone, Copy)]
pub struct RankOptions {
    /// Singular values below `hi · scale` may be treated as zero.
    pub hi: f64,
    /// The last kept singular value must exceed `lo · ε · size · scale`.
    pub lo: f64,
    /// Minimal ratio between the last kept and the first dropped value.
    pub gap_ratio: f64,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            hi: 1e-5,
            lo: 1.0,
            gap_ratio: 1e3,
        }
    }
}

/// One rank decision taken during the staircase.
#[derive(Debug, Clone, PartialEq)]
pub struct RankDecision {
    pub step: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub ratio: f64,
}

impl RankDecision {
    pub fn to_json(&self) -> Value {
        json!({
            "step": self.step,
            "rows": self.rows,
            "cols": self.cols,
            "rank": self.rank,
            "ratio": if self.ratio.is_finite() { json!(self.ratio) } else { Value::Null },
        })
    }
}

/// Picks the rank at the widest gap in the descending singular values
/// `s`, among candidates whose first dropped value is below `hi · scale`
/// and whose last kept value is above the round-off floor.
pub fn rank_by_gap(s: &[f64], scale: f64, size: usize, opts: &RankOptions) -> (usize, f64) {
    let n = s.len();
    if n == 0 {
        return (0, f64::INFINITY);
    }
    let lo = opts.lo * f64::EPSILON * size as f64 * scale;
    let hi = opts.hi * scale;
    let floor = (f64::EPSILON * scale).max(f64::MIN_POSITIVE);
    if s[n - 1] > hi {
        return (n, f64::INFINITY);
    }
    let mut best: Option<(usize, f64)> = None;
    for r in 0..n {
        if s[r] > hi {
            continue;
        }
        let above = if r > 0 { s[r - 1] } else { scale };
        if above < lo {
            continue;
        }
        // Exact zeros would make any tiny value look like a huge gap.
        let ratio = above / s[r].max(floor);
        if best.is_none_or(|(_, b)| ratio > b) {
            best = Some((r, ratio));
        }
    }
    best.unwrap_or_else(|| (s.iter().filter(|&&v| v > lo).count(), f64::INFINITY))
}

struct Svd {
    u: CMat,
    s: Vec<f64>,
    v: CMat,
}

fn svd(m: &CMat) -> Result<Svd> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Svd {
            u: CMat::identity(m.nrows(), m.nrows()),
            s: Vec::new(),
            v: CMat::identity(m.ncols(), m.ncols()),
        });
    }
    use faer::dyn_stack::{MemBuffer, MemStack};
    use faer::linalg::svd::{self as fsvd, ComputeSvdVectors, SvdParams};
    let (r, c) = (m.nrows(), m.ncols());
    // The divide-and-conquer bidiagonal solver occasionally returns a
    // spurious singular value on matrices with a large null space, so
    // the implicit QR iteration is forced.
    let params = SvdParams {
        recursion_threshold: usize::MAX,
        ..faer::Auto::<C>::auto()
    };
    let par = faer::Par::Seq;
    let mut u = CMat::zeros(r, r);
    let mut v = CMat::zeros(c, c);
    let mut s = faer::diag::Diag::<C>::zeros(r.min(c));
    let scratch = fsvd::svd_scratch::<C>(r, c, ComputeSvdVectors::Full, ComputeSvdVectors::Full, par, params.into());
    fsvd::svd(
        m.as_ref(),
        s.as_mut(),
        Some(u.as_mut()),
        Some(v.as_mut()),
        par,
        MemStack::new(&mut MemBuffer::new(scratch)),
        params.into(),
    )
    .map_err(|e| Error::Invalid(format!("singular value decomposition failed: {e:?}")))?;
    let s = s.column_vector().iter().map(|z| z.re).collect();
    Ok(Svd { u, s, v })
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    Ok(svd(m)?.s)
}

/// Sequential product, so results do not depend on thread scheduling.
fn mul(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows(), b.ncols());
    faer::linalg::matmul::matmul(out.as_mut(), faer::Accum::Replace, a, b, C::new(1.0, 0.0), faer::Par::Seq);
    out
}

fn frob(m: &CMat) -> f64 {
    m.norm_l2()
}

fn cols(m: &CMat, start: usize, count: usize) -> CMat {
    CMat::from_fn(m.nrows(), count, |i, j| m[(i, start + j)])
}

fn checked(decision: RankDecision, opts: &RankOptions, log: &mut Vec<RankDecision>) -> Result<usize> {
    let (rank, ratio) = (decision.rank, decision.ratio);
    let step = decision.step;
    log.push(decision);
    if ratio < opts.gap_ratio {
        return Err(Error::RankAmbiguous {
            step: step.to_string(),
            ratio,
        });
    }
    Ok(rank)
}

/// Compresses the triple until `Δ₀` is square and nonsingular. When
/// `Δ₀` has a column null space `V₂`, rows are restricted to the left
/// null space of `[Δ₁V₂, Δ₂V₂]` and columns to the complement of `V₂`;
/// when it only has a row null space the same is done on the other side.
pub fn staircase(dt: &DeltaTriple, opts: &RankOptions, log: &mut Vec<RankDecision>) -> Result<DeltaTriple> {
    let mut cur = dt.clone();
    loop {
        let (m, n) = cur.size();
        if m == 0 || n == 0 {
            return Err(Error::NoRegularPart);
        }
        let f = svd(&cur.d0)?;
        let scale = f.s[0].max(frob(&cur.d1)).max(frob(&cur.d2));
        if scale == 0.0 {
            return Err(Error::NoRegularPart);
        }
        let (r, ratio) = rank_by_gap(&f.s, scale, m.max(n), opts);
        let r = checked(
            RankDecision {
                step: "delta0",
                rows: m,
                cols: n,
                rank: r,
                ratio,
            },
            opts,
            log,
        )?;
        if m == n && r == n {
            return Ok(cur);
        }
        if r == 0 {
            return Err(Error::NoRegularPart);
        }
        if r < n {
            let v1 = cols(&f.v, 0, r);
            let v2 = cols(&f.v, r, n - r);
            let a = mul(&cur.d1, &v2);
            let b = mul(&cur.d2, &v2);
            let x = CMat::from_fn(m, 2 * (n - r), |i, j| {
                if j < n - r {
                    a[(i, j)]
                } else {
                    b[(i, j - (n - r))]
                }
            });
            let g = svd(&x)?;
            let (k, ratio) = rank_by_gap(&g.s, scale, m.max(x.ncols()), opts);
            let k = checked(
                RankDecision {
                    step: "right",
                    rows: m,
                    cols: x.ncols(),
                    rank: k,
                    ratio,
                },
                opts,
                log,
            )?;
            let w2 = cols(&g.u, k, m - k);
            let w2h = w2.adjoint().to_owned();
            cur = DeltaTriple {
                d0: mul(&w2h, &mul(&cur.d0, &v1)),
                d1: mul(&w2h, &mul(&cur.d1, &v1)),
                d2: mul(&w2h, &mul(&cur.d2, &v1)),
            };
        } else {
            let u1 = cols(&f.u, 0, r);
            let u2 = cols(&f.u, r, m - r);
            let u2h = u2.adjoint().to_owned();
            let a = mul(&u2h, &cur.d1);
            let b = mul(&u2h, &cur.d2);
            let x = CMat::from_fn(2 * (m - r), n, |i, j| {
                if i < m - r {
                    a[(i, j)]
                } else {
                    b[(i - (m - r), j)]
                }
            });
            let g = svd(&x)?;
            let (k, ratio) = rank_by_gap(&g.s, scale, n.max(x.nrows()), opts);
            let k = checked(
                RankDecision {
                    step: "left",
                    rows: x.nrows(),
                    cols: n,
                    rank: k,
                    ratio,
                },
                opts,
                log,
            )?;
            let z2 = cols(&g.v, k, n - k);
            let u1h = u1.adjoint().to_owned();
            cur = DeltaTriple {
                d0: mul(&u1h, &mul(&cur.d0, &z2)),
                d1: mul(&u1h, &mul(&cur.d1, &z2)),
                d2: mul(&u1h, &mul(&cur.d2, &z2)),
            };
        }
    }
}

fn to_na(m: &CMat) -> DMatrix<C> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigenvalue pairs of the commuting quotients.
#[derive(Debug, Clone)]
pub struct CommutingSolution {
    pub pairs: Vec<(C, C)>,
    /// `‖XY - YX‖_F / (‖X‖_F ‖Y‖_F)`.
    pub commutator: f64,
}

/// Triangularizes `X = Δ₀⁻¹Δ₁` and `Y = Δ₀⁻¹Δ₂` by the Schur vectors of
/// `X + γY` for a random `γ`, which keeps the pairing of `x` and `y`
/// values consistent when `x` values cluster.
pub fn solve_commuting(rt: &DeltaTriple, gamma: C, max_commutator: f64) -> Result<CommutingSolution> {
    let (m, n) = rt.size();
    if m != n {
        return Err(Error::DimensionMismatch(format!("reduced triple is {m}x{n}")));
    }
    if n == 0 {
        return Ok(CommutingSolution {
            pairs: Vec::new(),
            commutator: 0.0,
        });
    }
    let lu = to_na(&rt.d0).lu();
    let x = lu.solve(&to_na(&rt.d1)).ok_or(Error::NoRegularPart)?;
    let y = lu.solve(&to_na(&rt.d2)).ok_or(Error::NoRegularPart)?;
    let scale = (x.norm() * y.norm()).max(f64::MIN_POSITIVE);
    let commutator = (&x * &y - &y * &x).norm() / scale;
    if commutator > max_commutator {
        return Err(Error::NonCommuting(commutator));
    }
    let (q, _) = (&x + &y * gamma).schur().unpack();
    let qh = q.adjoint();
    let tx = &qh * &x * &q;
    let ty = &qh * &y * &q;
    let pairs = (0..n).map(|i| (tx[(i, i)], ty[(i, i)])).collect();
    Ok(CommutingSolution { pairs, commutator })
}

/// `(c p + s q, -s p + c q)` with `c = cos θ`, `s = sin θ`.
pub fn rotate_with(p: &CPoly, q: &CPoly, theta: f64) -> (CPoly, CPoly) {
    let (c, s) = (C::new(theta.cos(), 0.0), C::new(theta.sin(), 0.0));
    (
        &p.scale(&c) + &q.scale(&s),
        &q.scale(&c) - &p.scale(&s),
    )
}

/// [`rotate_with`] at an angle drawn from `seed`.
pub fn rotate_system(p: &CPoly, q: &CPoly, seed: u64) -> (CPoly, CPoly) {
    let theta = ChaCha8Rng::seed_from_u64(seed).gen_range(0.0..std::f64::consts::TAU);
    rotate_with(p, q, theta)
}

/// `|p(x,y)| / Σ |c_α| |x^α|`, the backward error of a root.
pub fn normalized_residual(p: &CPoly, pt: &[C]) -> f64 {
    let mut num = C::new(0.0, 0.0);
    let mut den = 0.0;
    for (e, c) in p.terms() {
        let t = *c * e.eval(pt);
        num += t;
        den += t.norm();
    }
    if den == 0.0 {
        num.norm()
    } else {
        num.norm() / den
    }
}

fn pair_residual(p: &CPoly, q: &CPoly, x: C, y: C) -> f64 {
    normalized_residual(p, &[x, y]).max(normalized_residual(q, &[x, y]))
}

/// A root with its backward error.
#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub x: C,
    pub y: C,
    pub residual: f64,
    /// Number of reported roots (itself included) within the clustering
    /// distance.
    pub multiplicity: usize,
    /// Set when Newton could not be applied (singular Jacobian).
    pub unrefined: bool,
}

impl Root {
    pub fn new(x: C, y: C, residual: f64) -> Self {
        Root {
            x,
            y,
            residual,
            multiplicity: 1,
            unrefined: false,
        }
    }
}

/// Newton iterations on the `2×2` Jacobian. A step is kept only if the
/// residual does not increase.
pub fn refine(roots: &[Root], p: &CPoly, q: &CPoly, iters: usize) -> Vec<Root> {
    let (px, py) = (p.derivative(0), p.derivative(1));
    let (qx, qy) = (q.derivative(0), q.derivative(1));
    roots
        .iter()
        .map(|r| {
            let (mut x, mut y) = (r.x, r.y);
            let mut res = pair_residual(p, q, x, y);
            let mut unrefined = false;
            for _ in 0..iters {
                let pt = [x, y];
                let ev = |f: &CPoly| f.eval(&pt).expect("bivariate");
                let (f, g) = (ev(p), ev(q));
                let (a, b, c, d) = (ev(&px), ev(&py), ev(&qx), ev(&qy));
                let det = a * d - b * c;
                let jscale = (a.norm() + b.norm()) * (c.norm() + d.norm());
                if det.norm() <= 1e-14 * jscale || jscale == 0.0 {
                    unrefined = true;
                    break;
                }
                if res == 0.0 {
                    break;
                }
                let dx = (d * f - b * g) / det;
                let dy = (a * g - c * f) / det;
                let (nx, ny) = (x - dx, y - dy);
                let nres = pair_residual(p, q, nx, ny);
                if nres <= res {
                    x = nx;
                    y = ny;
                    res = nres;
                } else {
                    break;
                }
            }
            Root {
                x,
                y,
                residual: res,
                multiplicity: r.multiplicity,
                unrefined,
            }
        })
        .collect()
}

/// Sets [`Root::multiplicity`] from pairwise distances.
pub fn mark_clusters(roots: &mut [Root], tol: f64) {
    let pts: Vec<(C, C)> = roots.iter().map(|r| (r.x, r.y)).collect();
    for (i, r) in roots.iter_mut().enumerate() {
        r.multiplicity = pts
            .iter()
            .filter(|&&(x, y)| {
                let scale = 1f64.max(r.x.norm().max(r.y.norm()));
                ((x - pts[i].0).norm().powi(2) + (y - pts[i].1).norm().powi(2)).sqrt() <= tol * scale
            })
            .count();
    }
}

/// Outcome classification of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Ok,
    Partial,
    Failed,
}

impl SolveStatus {
    pub fn name(self) -> &'static str {
        match self {
            SolveStatus::Ok => "ok",
            SolveStatus::Partial => "partial",
            SolveStatus::Failed => "failed",
        }
    }
}

/// Roots of a bivariate system with solver metadata.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub reduced_size: usize,
    pub retries: usize,
    pub status: SolveStatus,
    pub rank_log: Vec<RankDecision>,
    /// Candidates dropped for exceeding the residual threshold.
    pub rejected: usize,
    pub failure: Option<String>,
}

pub const CSV_HEADER: [&str; 5] = ["x_re", "x_im", "y_re", "y_im", "residual"];

impl RootSet {
    pub fn to_json(&self) -> Value {
        let roots: Vec<Value> = self
            .roots
            .iter()
            .map(|r| {
                json!({
                    "x_re": r.x.re, "x_im": r.x.im, "y_re": r.y.re, "y_im": r.y.im,
                    "residual": r.residual, "multiplicity": r.multiplicity,
                })
            })
            .collect();
        let mut out = json!({
            "roots": roots,
            "reduced_size": self.reduced_size,
            "retries": self.retries,
            "status": self.status.name(),
            "rank_log": self.rank_log.iter().map(RankDecision::to_json).collect::<Vec<_>>(),
        });
        if self.rejected > 0 {
            out["rejected"] = json!(self.rejected);
        }
        if let Some(f) = &self.failure {
            out["failure"] = json!(f);
        }
        out
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let num = |r: &Value, k: &str| {
            r.get(k)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::Parse(format!("root needs number field {k:?}")))
        };
        let roots = v
            .get("roots")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("root set needs array \"roots\"".into()))?
            .iter()
            .map(|r| {
                Ok(Root {
                    x: C::new(num(r, "x_re")?, num(r, "x_im")?),
                    y: C::new(num(r, "y_re")?, num(r, "y_im")?),
                    residual: num(r, "residual")?,
                    multiplicity: r.get("multiplicity").and_then(Value::as_u64).unwrap_or(1) as usize,
                    unrefined: false,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let status = match v.get("status").and_then(Value::as_str) {
            Some("ok") => SolveStatus::Ok,
            Some("partial") => SolveStatus::Partial,
            Some("failed") => SolveStatus::Failed,
            other => return Err(Error::Parse(format!("unknown status {other:?}"))),
        };
        let uint = |k: &str| v.get(k).and_then(Value::as_u64).unwrap_or(0) as usize;
        Ok(RootSet {
            roots,
            reduced_size: uint("reduced_size"),
            retries: uint("retries"),
            status,
            rank_log: Vec::new(),
            rejected: uint("rejected"),
            failure: v.get("failure").and_then(Value::as_str).map(str::to_string),
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Invalid(format!("csv output: {e}"));
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &self.roots {
            w.write_record(
                [r.x.re, r.x.im, r.y.re, r.y.im, r.residual].map(|v| format!("{v:e}")),
            )
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Invalid(format!("csv output: {e}")))?;
        Ok(())
    }
}

/// Settings for [`solve`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub method: Method,
    pub rank: RankOptions,
    /// Rotation retries after the first attempt.
    pub retries: usize,
    pub refine_iters: usize,
    /// Roots with a larger normalized residual are not reported.
    pub accept: f64,
    /// Roots closer than this (relative) count as one cluster.
    pub cluster: f64,
    pub max_commutator: f64,
    pub max_degree: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            method: Method::Minunif,
            rank: RankOptions::default(),
            retries: 3,
            refine_iters: 5,
            accept: 1e-8,
            cluster: 1e-6,
            max_commutator: 1e-3,
            max_degree: 20,
            seed: 0,
        }
    }
}

struct Attempt {
    roots: Vec<Root>,
    rejected: usize,
    reduced: usize,
    log: Vec<RankDecision>,
    error: Option<String>,
}

impl Attempt {
    fn clusters(&self) -> usize {
        self.roots.iter().filter(|r| r.multiplicity > 1).count()
    }

    fn better_than(&self, other: &Attempt) -> bool {
        (self.roots.len(), usize::MAX - self.clusters()) > (other.roots.len(), usize::MAX - other.clusters())
    }
}

fn attempt(p: &CPoly, q: &CPoly, orig: (&CPoly, &CPoly), opts: &SolveOptions, gamma: C) -> Attempt {
    let mut log = Vec::new();
    let fail = |log, e: Error| Attempt {
        roots: Vec::new(),
        rejected: 0,
        reduced: 0,
        log,
        error: Some(e.to_string()),
    };
    let tp = match to_two_param(p, q, opts.method) {
        Ok(tp) => tp,
        Err(e) => return fail(log, e),
    };
    let reduced = match staircase(&build_deltas(&tp), &opts.rank, &mut log) {
        Ok(r) => r,
        Err(e) => return fail(log, e),
    };
    let sol = match solve_commuting(&reduced, gamma, opts.max_commutator) {
        Ok(s) => s,
        Err(e) => return fail(log, e),
    };
    let raw: Vec<Root> = sol.pairs.iter().map(|&(x, y)| Root::new(x, y, f64::INFINITY)).collect();
    let refined = refine(&raw, orig.0, orig.1, opts.refine_iters);
    let total = refined.len();
    let mut roots: Vec<Root> = refined.into_iter().filter(|r| r.residual < opts.accept).collect();
    mark_clusters(&mut roots, opts.cluster);
    Attempt {
        rejected: total - roots.len(),
        roots,
        reduced: reduced.size().0,
        log,
        error: None,
    }
}

/// Total degree, or an error for the zero polynomial.
fn degree_of(p: &CPoly) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(p.degree().finite().unwrap_or(0))
}

/// Solves `p = q = 0`. Rank ambiguities, missing roots and clustered
/// roots trigger up to `opts.retries` attempts on rotated systems; the
/// best attempt is returned, with status `partial` or `failed` when none
/// recovered all `d₁d₂` roots.
pub fn solve(p: &CPoly, q: &CPoly, opts: &SolveOptions) -> Result<RootSet> {
    for f in [p, q] {
        if f.nvars() != 2 {
            return Err(Error::VariableCountMismatch {
                left: f.nvars(),
                right: 2,
            });
        }
    }
    let (dp, dq) = (degree_of(p)?, degree_of(q)?);
    for d in [dp, dq] {
        if d > opts.max_degree {
            return Err(Error::DegreeOutOfRange {
                degree: d,
                reason: format!("solver degree cap is {}", opts.max_degree),
            });
        }
    }
    let expected = dp * dq;
    if expected == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            reduced_size: 0,
            retries: 0,
            status: SolveStatus::Ok,
            rank_log: Vec::new(),
            rejected: 0,
            failure: None,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<Attempt> = None;
    let mut retries = 0;
    for k in 0..=opts.retries {
        let gamma = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (rp, rq) = if k == 0 {
            (p.clone(), q.clone())
        } else {
            rotate_with(p, q, rng.gen_range(0.0..std::f64::consts::TAU))
        };
        let a = attempt(&rp, &rq, (p, q), opts, gamma);
        let done = a.error.is_none() && a.roots.len() == expected && a.clusters() == 0;
        if best.as_ref().is_none_or(|b| a.better_than(b)) {
            best = Some(a);
        }
        if done {
            break;
        }
        retries = k + 1;
    }
    let retries = retries.min(opts.retries);
    let best = best.expect("at least one attempt");
    let status = if best.roots.len() == expected {
        SolveStatus::Ok
    } else if best.roots.is_empty() {
        SolveStatus::Failed
    } else {
        SolveStatus::Partial
    };
    let failure = match status {
        SolveStatus::Ok => None,
        _ => Some(best.error.clone().unwrap_or_else(|| {
            format!("recovered {} of {expected} roots", best.roots.len())
        })),
    };
    Ok(RootSet {
        roots: best.roots,
        reduced_size: best.reduced,
        retries,
        status,
        rank_log: best.log,
        rejected: best.rejected,
        failure,
    })
}

/// Random full polynomial of degree `d` with coefficients uniform in
/// `[-1, 1]` (real and imaginary parts when `complex`).
pub fn random_poly(d: usize, complex: bool, rng: &mut impl Rng) -> CPoly {
    let mut p = CPoly::zero(2);
    for e in crate::polycore::enumerate_fd(2, d) {
        let im = if complex { rng.gen_range(-1.0..1.0) } else { 0.0 };
        p.add_term(e, C::new(rng.gen_range(-1.0..1.0), im));
    }
    p
}

/// Convenience constructor from `(a, b, coefficient)` triples for `x^a y^b`.
pub fn poly_from_terms(terms: &[(u32, u32, C)]) -> CPoly {
    let mut p = CPoly::zero(2);
    for &(a, b, c) in terms {
        p.add_term(ExponentVector::new(vec![a, b]), c);
    }
    p
}
