//! Uniform determinantal representations `M = M₀ + Σ c_α M_α` and their
//! verification.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Mat;
use crate::polycore::{enumerate_fd, AffineForm, Degree, ExponentVector, MultiPoly};
use crate::scalar::Scalar;

/// Largest size for which exact determinants in `(x, c)` are attempted.
pub const DEFAULT_SYMBOLIC_CAP: usize = 13;

/// Sparse matrix of affine forms (the coefficient matrices `M_α`).
pub type SparseAffine<S> = BTreeMap<(usize, usize), AffineForm<S>>;

/// Where a representation came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub method: String,
    /// Sizes of the monomial sets used (`[|V|]` or `[|V|, |W|]`).
    pub set_sizes: Vec<usize>,
}

impl Provenance {
    pub fn new(method: impl Into<String>, set_sizes: Vec<usize>) -> Self {
        Provenance {
            method: method.into(),
            set_sizes,
        }
    }
}

/// A matrix `M₀ + Σ_{|α|≤d} c_α M_α` whose entries are affine in `x` and
/// in the coefficients `c` of the generic polynomial of degree `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformRep<S> {
    n: usize,
    d: usize,
    m0: Mat<AffineForm<S>>,
    malpha: BTreeMap<ExponentVector, SparseAffine<S>>,
    provenance: Option<Provenance>,
}

impl<S: Scalar> UniformRep<S> {
    /// Validates shapes and drops zero entries of the `M_α`.
    pub fn new(
        n: usize,
        d: usize,
        m0: Mat<AffineForm<S>>,
        malpha: BTreeMap<ExponentVector, SparseAffine<S>>,
    ) -> Result<Self> {
        if !m0.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "M0 is {}x{}",
                m0.rows(),
                m0.cols()
            )));
        }
        let size = m0.rows();
        for (_, _, f) in m0.iter() {
            if f.nvars() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: f.nvars(),
                });
            }
        }
        let mut cleaned = BTreeMap::new();
        for (alpha, mat) in malpha {
            if alpha.nvars() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: alpha.nvars(),
                });
            }
            if alpha.degree() > d {
                return Err(Error::DegreeOutOfRange {
                    degree: alpha.degree(),
                    reason: format!("coefficient index exceeds d={d}"),
                });
            }
            let mut kept = SparseAffine::new();
            for ((i, j), f) in mat {
                if i >= size || j >= size {
                    return Err(Error::DimensionMismatch(format!(
                        "entry ({i},{j}) outside a {size}x{size} matrix"
                    )));
                }
                if f.nvars() != n {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        found: f.nvars(),
                    });
                }
                if !f.is_zero() {
                    kept.insert((i, j), f);
                }
            }
            if !kept.is_empty() {
                cleaned.insert(alpha, kept);
            }
        }
        Ok(UniformRep {
            n,
            d,
            m0,
            malpha: cleaned,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = Some(p);
        self
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// The representation size `N`.
    pub fn size(&self) -> usize {
        self.m0.rows()
    }

    pub fn m0(&self) -> &Mat<AffineForm<S>> {
        &self.m0
    }

    pub fn malpha(&self) -> &BTreeMap<ExponentVector, SparseAffine<S>> {
        &self.malpha
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Basis of the coefficient space, which also fixes the numbering of
    /// the coefficient variables.
    pub fn coeff_basis(&self) -> Vec<ExponentVector> {
        enumerate_fd(self.n, self.d)
    }

    /// Dense `M_α` (zero matrix if not stored).
    pub fn dense_malpha(&self, alpha: &ExponentVector) -> Mat<AffineForm<S>> {
        let n = self.size();
        let mut m = Mat::filled(n, n, AffineForm::zero(self.n));
        if let Some(sp) = self.malpha.get(alpha) {
            for (&(i, j), f) in sp {
                m[(i, j)] = f.clone();
            }
        }
        m
    }

    /// Instantiates the coefficients with those of a concrete polynomial,
    /// giving a linear matrix pencil `A₀ + Σ xᵢ Aᵢ`.
    pub fn specialize(&self, coeffs: &MultiPoly<S>) -> Result<Mat<AffineForm<S>>> {
        if coeffs.nvars() != self.n {
            return Err(Error::VariableCountMismatch {
                left: self.n,
                right: coeffs.nvars(),
            });
        }
        if let Degree::Finite(k) = coeffs.degree() {
            if k > self.d {
                return Err(Error::DegreeOutOfRange {
                    degree: k,
                    reason: format!("representation has degree bound {}", self.d),
                });
            }
        }
        let mut m = self.m0.clone();
        for (alpha, sp) in &self.malpha {
            let c = coeffs.coeff(alpha);
            if c.is_zero() {
                continue;
            }
            for (&(i, j), f) in sp {
                m[(i, j)] = m[(i, j)].add(&f.scale(&c));
            }
        }
        Ok(m)
    }

    /// Numeric matrix at a point `x̄` and coefficient vector `c̄` (ordered
    /// as [`Self::coeff_basis`]).
    pub fn eval(&self, x: &[S], c: &[S]) -> Result<Mat<S>> {
        let basis = self.coeff_basis();
        if c.len() != basis.len() {
            return Err(Error::LengthMismatch {
                expected: basis.len(),
                found: c.len(),
            });
        }
        let mut m = self.m0.try_map(|f| f.eval(x))?;
        let index: HashMap<&ExponentVector, usize> =
            basis.iter().enumerate().map(|(k, e)| (e, k)).collect();
        for (alpha, sp) in &self.malpha {
            let ck = &c[index[alpha]];
            if ck.is_zero() {
                continue;
            }
            for (&(i, j), f) in sp {
                let v = m[(i, j)].clone() + ck.clone() * f.eval(x)?;
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    /// `M` as a matrix of polynomials in `n + |F_d|` variables: the `x`
    /// first, then one variable per coefficient in basis order.
    pub fn to_poly_matrix(&self) -> Mat<MultiPoly<S>> {
        let basis = self.coeff_basis();
        let total = self.n + basis.len();
        let mut m = self.m0.map(|f| f.to_poly(total, 0));
        for (k, alpha) in basis.iter().enumerate() {
            let Some(sp) = self.malpha.get(alpha) else {
                continue;
            };
            let cvar = MultiPoly::var(total, self.n + k);
            for (&(i, j), f) in sp {
                let add = &cvar * &f.to_poly(total, 0);
                m[(i, j)] = &m[(i, j)] + &add;
            }
        }
        m
    }

    /// Upper bound on the total degree of `det(M)` in `(x, c)`.
    pub fn det_degree_bound(&self) -> usize {
        let n = self.size();
        let mut row_deg = vec![0usize; n];
        for (i, _, f) in self.m0.iter() {
            let deg = usize::from(!f.is_constant());
            row_deg[i] = row_deg[i].max(deg);
        }
        for sp in self.malpha.values() {
            for (&(i, _), f) in sp {
                let deg = if f.is_constant() { 1 } else { 2 };
                row_deg[i] = row_deg[i].max(deg);
            }
        }
        row_deg.iter().sum::<usize>().max(self.d + 1)
    }

    pub fn to_json(&self) -> Value {
        let mat = |m: &Mat<AffineForm<S>>| -> Value {
            Value::Array(
                (0..m.rows())
                    .map(|i| Value::Array(m.row(i).iter().map(AffineForm::to_json).collect()))
                    .collect(),
            )
        };
        let malpha: Vec<Value> = self
            .malpha
            .keys()
            .map(|alpha| json!({ "exp": alpha.to_json(), "mat": mat(&self.dense_malpha(alpha)) }))
            .collect();
        let mut out = json!({
            "n": self.n,
            "d": self.d,
            "N": self.size(),
            "M0": mat(&self.m0),
            "Malpha": malpha,
        });
        if let Some(p) = &self.provenance {
            out["provenance"] = json!({ "method": p.method, "set_sizes": p.set_sizes });
        }
        out
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .map(|u| u as usize)
                .ok_or_else(|| Error::Parse(format!("representation needs integer field {k:?}")))
        };
        let (n, d, size) = (field("n")?, field("d")?, field("N")?);
        let read_mat = |m: &Value| -> Result<Mat<AffineForm<S>>> {
            let rows = m
                .as_array()
                .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
            let rows: Vec<Vec<AffineForm<S>>> = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                        .iter()
                        .map(|f| AffineForm::from_json(f, n))
                        .collect()
                })
                .collect::<Result<_>>()?;
            let mat = Mat::from_rows(rows)
                .ok_or_else(|| Error::Parse("ragged matrix".into()))?;
            if mat.rows() != size || mat.cols() != size {
                return Err(Error::DimensionMismatch(format!(
                    "expected {size}x{size}, found {}x{}",
                    mat.rows(),
                    mat.cols()
                )));
            }
            Ok(mat)
        };
        let m0 = read_mat(
            v.get("M0")
                .ok_or_else(|| Error::Parse("representation without \"M0\"".into()))?,
        )?;
        let mut malpha = BTreeMap::new();
        if let Some(list) = v.get("Malpha") {
            let list = list
                .as_array()
                .ok_or_else(|| Error::Parse("\"Malpha\" must be an array".into()))?;
            for item in list {
                let alpha = ExponentVector::from_json(
                    item.get("exp")
                        .ok_or_else(|| Error::Parse("Malpha item without \"exp\"".into()))?,
                )?;
                let dense = read_mat(
                    item.get("mat")
                        .ok_or_else(|| Error::Parse("Malpha item without \"mat\"".into()))?,
                )?;
                let sp: SparseAffine<S> = dense
                    .iter()
                    .filter(|(_, _, f)| !f.is_zero())
                    .map(|(i, j, f)| ((i, j), f.clone()))
                    .collect();
                malpha.insert(alpha, sp);
            }
        }
        let mut rep = Self::new(n, d, m0, malpha)?;
        if let Some(p) = v.get("provenance") {
            let method = p
                .get("method")
                .and_then(Value::as_str)
                .unwrap_or_default()
                .to_string();
            let set_sizes = p
                .get("set_sizes")
                .and_then(Value::as_array)
                .map(|a| a.iter().filter_map(|s| s.as_u64().map(|u| u as usize)).collect())
                .unwrap_or_default();
            rep.provenance = Some(Provenance { method, set_sizes });
        }
        Ok(rep)
    }
}

/// The generic polynomial `p_{n,d} = Σ c_α x^α` in the ring with variables
/// `(x₁..xₙ, c_α in basis order)`.
pub fn generic_poly<S: Scalar>(n: usize, d: usize) -> MultiPoly<S> {
    let basis = enumerate_fd(n, d);
    let total = n + basis.len();
    let mut p = MultiPoly::zero(total);
    for (k, alpha) in basis.iter().enumerate() {
        let mut e = vec![0u32; total];
        e[..n].copy_from_slice(alpha.entries());
        e[n + k] = 1;
        p.add_term(ExponentVector::new(e), S::one());
    }
    p
}

/// Exact determinant of a matrix of polynomials.
///
/// Uses fraction-free (Bareiss) elimination with full pivoting for exact
/// scalars, preferring constant pivots; floating point scalars and any
/// elimination step whose division is not exact fall back to cofactor
/// expansion with memoised minors.
pub fn symbolic_det<S: Scalar>(m: &Mat<MultiPoly<S>>, cap: usize) -> Result<MultiPoly<S>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "determinant of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if m.rows() > cap {
        return Err(Error::SymbolicCapExceeded {
            size: m.rows(),
            cap,
        });
    }
    if S::is_exact() {
        if let Some(d) = bareiss(m) {
            return Ok(d);
        }
    }
    Ok(det_by_minors(m))
}

fn ring_of<S: Scalar>(m: &Mat<MultiPoly<S>>) -> usize {
    m.iter().next().map_or(0, |(_, _, p)| p.nvars())
}

fn bareiss<S: Scalar>(m: &Mat<MultiPoly<S>>) -> Option<MultiPoly<S>> {
    let n = m.rows();
    let nv = ring_of(m);
    if n == 0 {
        return Some(MultiPoly::one(nv));
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = MultiPoly::<S>::one(nv);
    for k in 0..n {
        // Best pivot: a nonzero constant, else the entry with fewest terms.
        let mut best: Option<(usize, usize, (bool, usize))> = None;
        for i in k..n {
            for j in k..n {
                let p = &a[(i, j)];
                if p.is_zero() {
                    continue;
                }
                let key = (p.as_constant().is_none(), p.num_terms());
                if best.as_ref().is_none_or(|b| key < b.2) {
                    best = Some((i, j, key));
                }
            }
            if matches!(best, Some((_, _, (false, _)))) {
                break;
            }
        }
        let Some((pi, pj, _)) = best else {
            return Some(MultiPoly::zero(nv));
        };
        if pi != k {
            a.swap_rows(pi, k);
            negate = !negate;
        }
        if pj != k {
            a.swap_cols(pj, k);
            negate = !negate;
        }
        let pivot = a[(k, k)].clone();
        let prev_const = prev.as_constant();
        for i in k + 1..n {
            let aik = a[(i, k)].clone();
            for j in k + 1..n {
                let mut num = &pivot * &a[(i, j)];
                if !aik.is_zero() && !a[(k, j)].is_zero() {
                    num = &num - &(&aik * &a[(k, j)]);
                }
                a[(i, j)] = match &prev_const {
                    Some(c) => num.scale(&(S::one() / c.clone())),
                    None => num.div_exact(&prev)?,
                };
            }
        }
        prev = pivot;
    }
    let d = a[(n - 1, n - 1)].clone();
    Some(if negate { -d } else { d })
}

/// Determinant by Laplace expansion along rows, memoising the minor for
/// each set of remaining columns. Division free.
pub fn det_by_minors<S: Scalar>(m: &Mat<MultiPoly<S>>) -> MultiPoly<S> {
    let n = m.rows();
    assert!(n <= 63, "cofactor expansion limited to 63 columns");
    let nv = ring_of(m);
    let mut memo: HashMap<u64, MultiPoly<S>> = HashMap::new();
    fn rec<S: Scalar>(
        m: &Mat<MultiPoly<S>>,
        row: usize,
        cols: u64,
        nv: usize,
        memo: &mut HashMap<u64, MultiPoly<S>>,
    ) -> MultiPoly<S> {
        if row == m.rows() {
            return MultiPoly::one(nv);
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = MultiPoly::zero(nv);
        let mut pos = 0;
        for j in 0..m.cols() {
            if cols & (1 << j) == 0 {
                continue;
            }
            let e = &m[(row, j)];
            if !e.is_zero() {
                let minor = rec(m, row + 1, cols & !(1 << j), nv, memo);
                if !minor.is_zero() {
                    let t = e * &minor;
                    acc = if pos % 2 == 0 { &acc + &t } else { &acc - &t };
                }
            }
            pos += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    rec(m, 0, full, nv, &mut memo)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Symbolic,
    Randomized,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub mode: VerifyMode,
    pub trials: usize,
    pub seed: u64,
    /// Integer sample points are drawn from `[-radius, radius]`.
    pub radius: i64,
    pub cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: VerifyMode::Symbolic,
            trials: 20,
            seed: 0,
            radius: 10,
            cap: DEFAULT_SYMBOLIC_CAP,
        }
    }
}

impl VerifyOptions {
    pub fn symbolic() -> Self {
        Self::default()
    }

    pub fn randomized(trials: usize, seed: u64) -> Self {
        VerifyOptions {
            mode: VerifyMode::Randomized,
            trials,
            seed,
            ..Self::default()
        }
    }
}

/// A point `(x̄, c̄)` where `det(M)` and `p_{n,d}` disagree.
#[derive(Debug, Clone)]
pub struct Witness<S> {
    pub x: Vec<S>,
    pub c: Vec<S>,
    pub det: S,
    pub expected: S,
}

#[derive(Debug, Clone)]
pub struct VerificationReport<S> {
    pub mode: VerifyMode,
    pub pass: bool,
    pub witness: Option<Witness<S>>,
    pub trials: usize,
    /// Upper bound on the probability that a wrong representation passes
    /// (randomized mode only).
    pub failure_bound: Option<f64>,
}

impl VerifyMode {
    pub fn name(self) -> &'static str {
        match self {
            VerifyMode::Symbolic => "symbolic",
            VerifyMode::Randomized => "random",
        }
    }
}

impl<S: Scalar> VerificationReport<S> {
    pub fn to_json(&self) -> Value {
        let list = |v: &[S]| Value::Array(v.iter().map(Scalar::to_json).collect());
        let witness = match &self.witness {
            Some(w) => json!({
                "x": list(&w.x),
                "c": list(&w.c),
                "det": w.det.to_json(),
                "expected": w.expected.to_json(),
            }),
            None => Value::Null,
        };
        json!({
            "mode": self.mode.name(),
            "pass": self.pass,
            "trials": self.trials,
            "failure_bound": self.failure_bound,
            "witness": witness,
        })
    }
}

fn sample_point<S: Scalar>(rng: &mut ChaCha8Rng, k: usize, radius: i64) -> Vec<S> {
    (0..k).map(|_| S::from_i64(rng.gen_range(-radius..=radius))).collect()
}

fn values_agree<S: Scalar>(a: &S, b: &S) -> bool {
    if S::is_exact() {
        a == b
    } else {
        let scale = a.magnitude().max(b.magnitude()).max(1.0);
        (a.clone() - b.clone()).magnitude() <= 1e-9 * scale
    }
}

/// Checks `det(M) = p_{n,d}`.
pub fn verify<S: Scalar>(rep: &UniformRep<S>, opts: &VerifyOptions) -> Result<VerificationReport<S>> {
    let basis = rep.coeff_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let expected_at = |x: &[S], c: &[S]| -> S {
        basis
            .iter()
            .zip(c)
            .fold(S::zero(), |acc, (a, ck)| acc + ck.clone() * a.eval(x))
    };
    match opts.mode {
        VerifyMode::Symbolic => {
            let det = symbolic_det(&rep.to_poly_matrix(), opts.cap)?;
            let target = generic_poly::<S>(rep.nvars(), rep.degree());
            let pass = det.equals(&target);
            let witness = if pass {
                None
            } else {
                // Any nonzero polynomial is nonzero somewhere on a grid
                // larger than its degree; random integer points find one fast.
                let diff = &det - &target;
                let mut found = None;
                for _ in 0..1000 {
                    let x = sample_point::<S>(&mut rng, rep.nvars(), opts.radius);
                    let c = sample_point::<S>(&mut rng, basis.len(), opts.radius);
                    let mut pt = x.clone();
                    pt.extend(c.iter().cloned());
                    if !diff.eval(&pt)?.is_negligible(1e-9) {
                        found = Some(Witness {
                            det: det.eval(&pt)?,
                            expected: expected_at(&x, &c),
                            x,
                            c,
                        });
                        break;
                    }
                }
                found
            };
            Ok(VerificationReport {
                mode: VerifyMode::Symbolic,
                pass,
                witness,
                trials: 1,
                failure_bound: None,
            })
        }
        VerifyMode::Randomized => {
            let mut witness = None;
            for _ in 0..opts.trials {
                let x = sample_point::<S>(&mut rng, rep.nvars(), opts.radius);
                let c = sample_point::<S>(&mut rng, basis.len(), opts.radius);
                let det = linalg::det(&rep.eval(&x, &c)?);
                let expected = expected_at(&x, &c);
                if !values_agree(&det, &expected) {
                    witness = Some(Witness { x, c, det, expected });
                    break;
                }
            }
            let box_size = (2 * opts.radius + 1) as f64;
            let ratio = (rep.det_degree_bound() as f64 / box_size).min(1.0);
            Ok(VerificationReport {
                mode: VerifyMode::Randomized,
                pass: witness.is_none(),
                witness,
                trials: opts.trials,
                failure_bound: Some(ratio.powi(opts.trials as i32)),
            })
        }
    }
}

/// Symbolic verification when the size permits, randomized otherwise.
pub fn verify_auto<S: Scalar>(rep: &UniformRep<S>, trials: usize, seed: u64) -> Result<VerificationReport<S>> {
    if S::is_exact() && rep.size() <= DEFAULT_SYMBOLIC_CAP {
        verify(rep, &VerifyOptions::symbolic())
    } else {
        verify(rep, &VerifyOptions::randomized(trials, seed))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub min: usize,
    pub max: usize,
    pub ranks: Vec<usize>,
}

/// Numerical ranks of `M₀` at random real points in `[-1, 1]ⁿ`, with
/// threshold `factor·ε·N·σ_max` (use `factor = 1.0` for the plain rule).
pub fn rank_profile_m0<S: Scalar>(rep: &UniformRep<S>, points: usize, seed: u64, factor: f64) -> RankProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rep.nvars();
    let m0c = rep.m0().map(|f| f.map(|s| s.to_c64()));
    let ranks: Vec<usize> = (0..points)
        .map(|_| {
            let x: Vec<num_complex::Complex64> = (0..n)
                .map(|_| num_complex::Complex64::new(rng.gen_range(-1.0..=1.0), 0.0))
                .collect();
            let m = m0c.map(|f| f.eval(&x).expect("point length matches"));
            linalg::numeric_rank(&linalg::to_nalgebra(&m), factor)
        })
        .collect();
    RankProfile {
        min: ranks.iter().copied().min().unwrap_or(0),
        max: ranks.iter().copied().max().unwrap_or(0),
        ranks,
    }
}

#[derive(Debug, Clone)]
pub struct MinorSpanReport<S> {
    pub pass: bool,
    /// Dimension of the span of the maximal minors of `M₀`.
    pub minor_span_dim: usize,
    /// A monomial of degree ≤ d outside `F₁·V`, if any.
    pub uncovered: Option<ExponentVector>,
    pub minors: Vec<MultiPoly<S>>,
}

/// Computes the `(N-1)×(N-1)` minors of `M₀`, lets `V` be their span, and
/// checks that multiplying `V` by `1, x₁, …, xₙ` spans every monomial of
/// degree at most `d`.
pub fn minor_span_check<S: Scalar>(rep: &UniformRep<S>, cap: usize) -> Result<MinorSpanReport<S>> {
    if !S::is_exact() {
        return Err(Error::InexactScalar);
    }
    let size = rep.size();
    if size > cap {
        return Err(Error::SymbolicCapExceeded { size, cap });
    }
    let n = rep.nvars();
    let m0 = rep.m0().map(|f| f.to_poly(n, 0));
    let mut minors = Vec::new();
    if size >= 1 {
        for skip_r in 0..size {
            for skip_c in 0..size {
                let sub = Mat::from_fn(size - 1, size - 1, |i, j| {
                    let ii = if i >= skip_r { i + 1 } else { i };
                    let jj = if j >= skip_c { j + 1 } else { j };
                    m0[(ii, jj)].clone()
                });
                // The empty minor of a 1×1 matrix is the constant 1.
                let d = if size == 1 { MultiPoly::one(n) } else { symbolic_det(&sub, cap)? };
                if !d.is_zero() {
                    minors.push(d);
                }
            }
        }
    }
    let mut products = Vec::new();
    for v in &minors {
        products.push(v.clone());
        for i in 0..n {
            products.push(v * &MultiPoly::var(n, i));
        }
    }
    let mut monos: BTreeMap<ExponentVector, usize> = BTreeMap::new();
    for p in products.iter().chain(minors.iter()) {
        for (e, _) in p.terms() {
            let k = monos.len();
            monos.entry(e.clone()).or_insert(k);
        }
    }
    let targets = enumerate_fd(n, rep.degree());
    for e in &targets {
        let k = monos.len();
        monos.entry(e.clone()).or_insert(k);
    }
    let to_rows = |polys: &[MultiPoly<S>]| -> Mat<S> {
        let mut m = Mat::filled(polys.len(), monos.len(), S::zero());
        for (r, p) in polys.iter().enumerate() {
            for (e, c) in p.terms() {
                m[(r, monos[e])] = c.clone();
            }
        }
        m
    };
    let minor_span_dim = linalg::rank(&to_rows(&minors), 0.0);
    let base_rank = linalg::rank(&to_rows(&products), 0.0);
    let mut uncovered = None;
    let mut current = products.clone();
    current.extend(targets.iter().map(|e| MultiPoly::monomial(e.clone(), S::one())));
    let all_covered = linalg::rank(&to_rows(&current), 0.0) == base_rank;
    current.truncate(products.len());
    for e in targets.iter().filter(|_| !all_covered) {
        current.push(MultiPoly::monomial(e.clone(), S::one()));
        if linalg::rank(&to_rows(&current), 0.0) > base_rank {
            uncovered = Some(e.clone());
            break;
        }
        current.pop();
    }
    Ok(MinorSpanReport {
        pass: uncovered.is_none() && !minors.is_empty(),
        minor_span_dim,
        uncovered,
        minors,
    })
}
