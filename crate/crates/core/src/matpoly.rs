//! Lifting scalar representations to matrix polynomials.
//!
//! Replacing every scalar entry `a + b·x` of `M₀` by `(a + b·x) I_k` and
//! every `c_α` by a `k×k` matrix `C_α` gives `M̃ = M₀ ⊗ I_k + Σ M_α ⊗ C_α`.
//! When unimodular `Q`, `Z` exist with `QMZ` triangular up to permutation,
//! with one diagonal entry `±p` and the others `±1`, the same transformation
//! blocks `M̃` and `det(M̃) = det(P)` for `P = Σ x^α C_α`. Without such a
//! witness the lift can fail, e.g. when the determinant only equals `p`
//! through cancelling products `c_α c_β - c_β c_α`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::biaffine::{generic_poly, symbolic_det, SparseAffine, UniformRep};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::polycore::{enumerate_fd, AffineForm, ExponentVector, MultiPoly};
use crate::scalar::Scalar;

/// `P = Σ_{|α|≤d} x^α C_α` with `k×k` coefficient matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPoly<S> {
    n: usize,
    d: usize,
    k: usize,
    terms: BTreeMap<ExponentVector, Mat<S>>,
}

impl<S: Scalar> MatrixPoly<S> {
    pub fn new(n: usize, d: usize, k: usize, terms: BTreeMap<ExponentVector, Mat<S>>) -> Result<Self> {
        for (e, m) in &terms {
            if e.nvars() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: e.nvars(),
                });
            }
            if e.degree() > d {
                return Err(Error::DegreeOutOfRange {
                    degree: e.degree(),
                    reason: format!("matrix polynomial declared with d={d}"),
                });
            }
            if m.rows() != k || m.cols() != k {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient of {e} is {}x{}, expected {k}x{k}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(MatrixPoly { n, d, k, terms })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn block_size(&self) -> usize {
        self.k
    }

    pub fn coeff(&self, alpha: &ExponentVector) -> Option<&Mat<S>> {
        self.terms.get(alpha)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Mat<S>)> {
        self.terms.iter()
    }

    pub fn eval(&self, x: &[S]) -> Mat<S> {
        let mut out = Mat::filled(self.k, self.k, S::zero());
        for (e, c) in &self.terms {
            let w = e.eval(x);
            for (i, j, v) in c.iter() {
                let t = out[(i, j)].clone() + w.clone() * v.clone();
                out[(i, j)] = t;
            }
        }
        out
    }

    /// Entry-wise polynomial matrix in `x`.
    pub fn to_poly_matrix(&self) -> Mat<MultiPoly<S>> {
        let mut out = Mat::filled(self.k, self.k, MultiPoly::zero(self.n));
        for (e, c) in &self.terms {
            for (i, j, v) in c.iter() {
                let mut p = out[(i, j)].clone();
                p.add_term(e.clone(), v.clone());
                out[(i, j)] = p;
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, m)| {
                let rows: Vec<Value> = (0..m.rows())
                    .map(|i| Value::Array(m.row(i).iter().map(Scalar::to_json).collect()))
                    .collect();
                json!({ "exp": e.to_json(), "mat": rows })
            })
            .collect();
        json!({ "n": self.n, "d": self.d, "k": self.k, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .map(|u| u as usize)
                .ok_or_else(|| Error::Parse(format!("matrix polynomial needs integer field {k:?}")))
        };
        let (n, d, k) = (field("n")?, field("d")?, field("k")?);
        let mut terms = BTreeMap::new();
        for t in v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("matrix polynomial needs array \"terms\"".into()))?
        {
            let e = ExponentVector::from_json(t.get("exp").unwrap_or(&Value::Null))?;
            let rows = t
                .get("mat")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term without \"mat\"".into()))?
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                        .iter()
                        .map(S::from_json)
                        .collect::<Result<Vec<S>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let m = Mat::from_rows(rows).ok_or_else(|| Error::Parse("ragged matrix".into()))?;
            terms.insert(e, m);
        }
        Self::new(n, d, k, terms)
    }
}

/// Result of [`lift`]; `warranted` is set when the representation belongs
/// to a family with a known triangularization witness.
#[derive(Debug, Clone)]
pub struct Lift<S> {
    pub matrix: Mat<AffineForm<S>>,
    pub warranted: bool,
}

/// Families for which [`witness_check`] constructs `Q` and `Z`.
pub fn has_witness_family<S: Scalar>(rep: &UniformRep<S>) -> bool {
    rep.nvars() == 2
        && rep
            .provenance()
            .is_some_and(|p| p.method == "repjan" || p.method == "minunif")
}

/// `M₀ ⊗ I_k + Σ M_α ⊗ C_α`.
pub fn lift<S: Scalar>(rep: &UniformRep<S>, p: &MatrixPoly<S>) -> Result<Lift<S>> {
    if rep.nvars() != p.nvars() || rep.degree() < p.degree() {
        return Err(Error::DimensionMismatch(format!(
            "representation (n={}, d={}) and matrix polynomial (n={}, d={})",
            rep.nvars(),
            rep.degree(),
            p.nvars(),
            p.degree()
        )));
    }
    let (size, k, n) = (rep.size(), p.block_size(), rep.nvars());
    let mut out = Mat::filled(size * k, size * k, AffineForm::zero(n));
    for (i, j, f) in rep.m0().iter() {
        if f.is_zero() {
            continue;
        }
        for t in 0..k {
            out[(i * k + t, j * k + t)] = f.clone();
        }
    }
    for (alpha, sp) in rep.malpha() {
        let Some(c) = p.coeff(alpha) else { continue };
        for (&(i, j), f) in sp {
            for (a, b, v) in c.iter() {
                if v.is_zero() {
                    continue;
                }
                let cell = &mut out[(i * k + a, j * k + b)];
                *cell = cell.add(&f.scale(v));
            }
        }
    }
    Ok(Lift {
        matrix: out,
        warranted: has_witness_family(rep),
    })
}

/// Outcome of [`witness_check`].
#[derive(Debug, Clone)]
pub struct WitnessReport<S> {
    pub pass: bool,
    /// `QMZ` as polynomials in `(x, y, c)`.
    pub qmz: Mat<MultiPoly<S>>,
    /// Row and column order making `QMZ` lower triangular.
    pub row_order: Vec<usize>,
    pub col_order: Vec<usize>,
    /// Index (in pivot order) of the diagonal entry equal to `±p`.
    pub p_position: Option<usize>,
}

/// Builds `Q` (identity above, upper-triangular powers of `y` on the rows
/// of `[L, M_yᵀ]`) and `Z` (lower-triangular powers of `x` on the columns
/// of `M_x`), both of determinant 1, and checks that `QMZ` is a permuted
/// triangular matrix whose diagonal is `±1` except one entry `±p`, with
/// the signs multiplying to `+1`.
pub fn witness_check<S: Scalar>(rep: &UniformRep<S>) -> Result<WitnessReport<S>> {
    if !has_witness_family(rep) {
        return Err(Error::UnsupportedFamily(
            rep.provenance()
                .map_or_else(|| "unknown".to_string(), |p| p.method.clone()),
        ));
    }
    let set_sizes = &rep.provenance().expect("checked above").set_sizes;
    let (m1, m2) = (set_sizes[0], set_sizes[1]);
    let size = rep.size();
    let m = rep.to_poly_matrix();
    let nv = m[(0, 0)].nvars();
    let x = MultiPoly::<S>::var(nv, 0);
    let y = MultiPoly::<S>::var(nv, 1);
    let pow = |base: &MultiPoly<S>, e: usize| (0..e).fold(MultiPoly::one(nv), |acc, _| &acc * base);
    let q = Mat::from_fn(size, size, |i, j| {
        let top = m1 - 1;
        if i < top || j < top {
            if i == j {
                MultiPoly::one(nv)
            } else {
                MultiPoly::zero(nv)
            }
        } else if j >= i {
            pow(&y, j - i)
        } else {
            MultiPoly::zero(nv)
        }
    });
    let z = Mat::from_fn(size, size, |i, j| {
        if i < m1 && j < m1 {
            if i >= j {
                pow(&x, i - j)
            } else {
                MultiPoly::zero(nv)
            }
        } else if i == j {
            MultiPoly::one(nv)
        } else {
            MultiPoly::zero(nv)
        }
    });
    let _ = m2;
    let qmz = poly_matmul(&poly_matmul(&q, &m), &z);
    let target = generic_poly::<S>(2, rep.degree());

    // Peel rows with a single nonzero among the remaining columns.
    let mut rows_left: Vec<usize> = (0..size).collect();
    let mut cols_left: Vec<usize> = (0..size).collect();
    let (mut row_order, mut col_order) = (Vec::new(), Vec::new());
    while !rows_left.is_empty() {
        let found = rows_left.iter().enumerate().find_map(|(ri, &r)| {
            let nz: Vec<usize> = cols_left
                .iter()
                .copied()
                .filter(|&c| !qmz[(r, c)].is_zero())
                .collect();
            (nz.len() == 1).then(|| (ri, r, nz[0]))
        });
        let Some((ri, r, c)) = found else { break };
        rows_left.remove(ri);
        cols_left.retain(|&cc| cc != c);
        row_order.push(r);
        col_order.push(c);
    }
    let triangular = rows_left.is_empty();
    let mut p_position = None;
    let mut pass = triangular;
    if triangular {
        let mut sign_acc: i32 = permutation_sign(&row_order) * permutation_sign(&col_order);
        for (t, (&r, &c)) in row_order.iter().zip(&col_order).enumerate() {
            let e = &qmz[(r, c)];
            if *e == MultiPoly::one(nv) {
            } else if *e == -MultiPoly::one(nv) {
                sign_acc = -sign_acc;
            } else if *e == target && p_position.is_none() {
                p_position = Some(t);
            } else if *e == -target.clone() && p_position.is_none() {
                p_position = Some(t);
                sign_acc = -sign_acc;
            } else {
                pass = false;
            }
        }
        pass = pass && p_position.is_some() && sign_acc == 1;
    }
    Ok(WitnessReport {
        pass,
        qmz,
        row_order,
        col_order,
        p_position,
    })
}

fn permutation_sign(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn poly_matmul<S: Scalar>(a: &Mat<MultiPoly<S>>, b: &Mat<MultiPoly<S>>) -> Mat<MultiPoly<S>> {
    let nv = a[(0, 0)].nvars();
    Mat::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = MultiPoly::zero(nv);
        for t in 0..a.cols() {
            if a[(i, t)].is_zero() || b[(t, j)].is_zero() {
                continue;
            }
            acc = &acc + &(&a[(i, t)] * &b[(t, j)]);
        }
        acc
    })
}

/// `diag(M, N)` with the `4×4` block
/// `N = [[0, c_α, c_β, 1], [-c_α, 0, 1, 0], [-c_β, -1, 0, 0], [-1, 0, 0, 1]]`,
/// whose determinant is `1 + c_α c_β - c_β c_α = 1`. The result still
/// represents `p`, but its lift fails when `C_α`, `C_β` do not commute.
pub fn commutator_padding<S: Scalar>(
    rep: &UniformRep<S>,
    alpha: &ExponentVector,
    beta: &ExponentVector,
) -> Result<UniformRep<S>> {
    let basis = enumerate_fd(rep.nvars(), rep.degree());
    if alpha == beta || !basis.contains(alpha) || !basis.contains(beta) {
        return Err(Error::Invalid(
            "padding needs two distinct coefficient indices of degree at most d".into(),
        ));
    }
    let n = rep.nvars();
    let size = rep.size();
    let big = size + 4;
    let one = |v: i64| AffineForm::constant(n, S::from_i64(v));
    let mut m0 = Mat::filled(big, big, AffineForm::zero(n));
    for (i, j, f) in rep.m0().iter() {
        m0[(i, j)] = f.clone();
    }
    let o = size;
    m0[(o, o + 3)] = one(1);
    m0[(o + 1, o + 2)] = one(1);
    m0[(o + 2, o + 1)] = one(-1);
    m0[(o + 3, o)] = one(-1);
    m0[(o + 3, o + 3)] = one(1);
    let mut malpha: BTreeMap<ExponentVector, SparseAffine<S>> = rep.malpha().clone();
    let a = malpha.entry(alpha.clone()).or_default();
    a.insert((o, o + 1), one(1));
    a.insert((o + 1, o), one(-1));
    let b = malpha.entry(beta.clone()).or_default();
    b.insert((o, o + 2), one(1));
    b.insert((o + 2, o), one(-1));
    let out = UniformRep::new(n, rep.degree(), m0, malpha)?;
    Ok(match rep.provenance() {
        Some(p) => out.with_provenance(crate::biaffine::Provenance::new(
            format!("{}+commutator", p.method),
            p.set_sizes.clone(),
        )),
        None => out,
    })
}

/// `det(P)` as a polynomial in `x`.
pub fn det_matrix_poly<S: Scalar>(p: &MatrixPoly<S>) -> Result<MultiPoly<S>> {
    symbolic_det(&p.to_poly_matrix(), usize::MAX)
}

/// `det(M̃)` as a polynomial in `x`.
pub fn det_lift<S: Scalar>(l: &Lift<S>, cap: usize) -> Result<MultiPoly<S>> {
    let n = l.matrix[(0, 0)].nvars();
    symbolic_det(&l.matrix.map(|f| f.to_poly(n, 0)), cap)
}
