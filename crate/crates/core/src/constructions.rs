//! Building representations from monomial sets.
//!
//! * Single-row construction: for `V` connected to 1 with `F₁·V ⊇ F_d`,
//!   `M = [s; M_V]` has size `|V|`, where `s_j` collects `c_α x^δ` for every
//!   `α = δ + v_j`.
//! * Two-block construction: for `V, W` connected to 1 with
//!   `F₁·V·W ⊇ F_d`, `M = [[M_V, 0], [L, M_Wᵀ]]` has size `|V| + |W| - 1`.
//!   Expanding the determinant along the `L` block, the coefficient of
//!   `ℓ_ij` is `(-1)^{|V|-1} x^{v_j} x^{w_i}`, so every entry of `L` carries
//!   that global sign.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::biaffine::{Provenance, SparseAffine, UniformRep};
use crate::connected::{
    self, binary_sets, bivariate_sets, build_mv, decompose_all, lattice_set, split_sets, table_sets,
    tree_set, turan_sets, unit_set, MonomialSet,
};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::polycore::{enumerate_fd, AffineForm, ExponentVector};
use crate::scalar::Scalar;

/// One monomial's placement: `c_α x^δ` (times `sign`) is added to cell
/// `(row, col)` of `L` (the single row `s` for the one-row construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignedMonomial {
    pub alpha: ExponentVector,
    /// Index into `W` (always 0 for the one-row construction).
    pub row: usize,
    /// Index into `V`.
    pub col: usize,
    /// `None` for `δ = 0`, else the variable index of `δ = e_k`.
    pub shift: Option<usize>,
    pub sign: i8,
}

/// Placement of every coefficient `c_α`, `|α| ≤ d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub entries: Vec<AssignedMonomial>,
}

impl Assignment {
    /// Default placement: `δ = 0` preferred, then the smallest
    /// `(δ, j, i)`; every entry gets the sign `(-1)^{|V|-1}`.
    pub fn canonical(v: &MonomialSet, w: &MonomialSet, d: usize) -> Result<Assignment> {
        let s: i8 = if v.len() % 2 == 1 { 1 } else { -1 };
        let entries = decompose_all(v, w, d)?
            .into_iter()
            .map(|dec| AssignedMonomial {
                alpha: dec.alpha,
                row: dec.w_index,
                col: dec.v_index,
                shift: dec.shift,
                sign: s,
            })
            .collect();
        Ok(Assignment { entries })
    }

    /// Checks `x^α = x^δ · v_col · w_row` for every entry and that every
    /// `|α| ≤ d` occurs exactly once.
    pub fn validate(&self, v: &MonomialSet, w: &MonomialSet, d: usize) -> Result<()> {
        let n = v.nvars();
        let mut seen = BTreeMap::new();
        for e in &self.entries {
            let mut prod = v.members()[e.col].plus(&w.members()[e.row]);
            if let Some(k) = e.shift {
                prod = prod.plus_unit(k);
            }
            if prod != e.alpha {
                return Err(Error::Invalid(format!(
                    "assignment of {} does not factor through cell ({}, {})",
                    e.alpha, e.row, e.col
                )));
            }
            if seen.insert(e.alpha.clone(), ()).is_some() {
                return Err(Error::Invalid(format!("{} assigned twice", e.alpha)));
            }
        }
        if let Some(missing) = enumerate_fd(n, d).into_iter().find(|a| !seen.contains_key(a)) {
            return Err(Error::CoveringFailure(missing.to_string()));
        }
        Ok(())
    }
}

fn entry_form<S: Scalar>(n: usize, e: &AssignedMonomial) -> AffineForm<S> {
    let s = S::from_i64(e.sign as i64);
    match e.shift {
        None => AffineForm::constant(n, s),
        Some(k) => AffineForm::var(n, k, s),
    }
}

fn constant_rep<S: Scalar>(n: usize, method: &str) -> Result<UniformRep<S>> {
    let m0 = Mat::filled(1, 1, AffineForm::zero(n));
    let mut malpha = BTreeMap::new();
    let mut sp = SparseAffine::new();
    sp.insert((0, 0), AffineForm::constant(n, S::one()));
    malpha.insert(ExponentVector::zero(n), sp);
    Ok(UniformRep::new(n, 0, m0, malpha)?.with_provenance(Provenance::new(method, vec![1])))
}

/// Assembles `[[M_V, 0], [L, M_Wᵀ]]` with `L` given by an assignment.
pub fn cons2_with<S: Scalar>(
    v: &MonomialSet,
    w: &MonomialSet,
    d: usize,
    assignment: &Assignment,
) -> Result<UniformRep<S>> {
    assignment.validate(v, w, d)?;
    let n = v.nvars();
    let (m1, m2) = (v.len(), w.len());
    let size = m1 + m2 - 1;
    let mut m0 = Mat::filled(size, size, AffineForm::zero(n));
    let mv = build_mv::<S>(v);
    for (i, j, f) in mv.iter() {
        m0[(i, j)] = f.clone();
    }
    let mw = build_mv::<S>(w);
    for (r, i, f) in mw.iter() {
        m0[(m1 - 1 + i, m1 + r)] = f.clone();
    }
    let mut malpha: BTreeMap<ExponentVector, SparseAffine<S>> = BTreeMap::new();
    for e in &assignment.entries {
        malpha
            .entry(e.alpha.clone())
            .or_default()
            .insert((m1 - 1 + e.row, e.col), entry_form(n, e));
    }
    UniformRep::new(n, d, m0, malpha)
}

/// Two-block construction of size `|V| + |W| - 1`.
pub fn cons2<S: Scalar>(v: &MonomialSet, w: &MonomialSet, d: usize) -> Result<UniformRep<S>> {
    let a = Assignment::canonical(v, w, d)?;
    Ok(cons2_with::<S>(v, w, d, &a)?.with_provenance(Provenance::new("cons2", vec![v.len(), w.len()])))
}

/// Single-row construction `[s; M_V]` of size `|V|`.
pub fn cons1<S: Scalar>(v: &MonomialSet, d: usize) -> Result<UniformRep<S>> {
    let n = v.nvars();
    let one = unit_set(n);
    let dec = decompose_all(v, &one, d)?;
    let m = v.len();
    let mut m0 = Mat::filled(m, m, AffineForm::zero(n));
    for (i, j, f) in build_mv::<S>(v).iter() {
        m0[(i + 1, j)] = f.clone();
    }
    let mut malpha: BTreeMap<ExponentVector, SparseAffine<S>> = BTreeMap::new();
    for dec in dec {
        let e = AssignedMonomial {
            alpha: dec.alpha.clone(),
            row: 0,
            col: dec.v_index,
            shift: dec.shift,
            sign: 1,
        };
        malpha
            .entry(dec.alpha)
            .or_default()
            .insert((0, dec.v_index), entry_form(n, &e));
    }
    Ok(UniformRep::new(n, d, m0, malpha)?.with_provenance(Provenance::new("cons1", vec![m])))
}

/// Bivariate representation of size `2d+1`:
/// `[[M_x, 0], [L, M_yᵀ]]` with `M_x, M_y` the `d×(d+1)` bidiagonal
/// blocks (`-x`/`-y` on the diagonal, 1 above) and `L_ij = c_{j,i}` for
/// `i + j ≤ d` (0-based). The overall sign `(-1)^d` is realised by negating
/// the first row when `d` is odd.
pub fn repjan<S: Scalar>(d: usize) -> Result<UniformRep<S>> {
    if d == 0 {
        return constant_rep(2, "repjan");
    }
    let v = connected::full_set(2, &[0], d);
    let w = connected::full_set(2, &[1], d);
    let entries = enumerate_fd(2, d)
        .into_iter()
        .map(|alpha| AssignedMonomial {
            row: alpha.get(1) as usize,
            col: alpha.get(0) as usize,
            alpha,
            shift: None,
            sign: 1,
        })
        .collect();
    let rep = cons2_with::<S>(&v, &w, d, &Assignment { entries })?;
    let rep = if d % 2 == 1 { negate_row(&rep, 0)? } else { rep };
    Ok(rep.with_provenance(Provenance::new("repjan", vec![d + 1, d + 1])))
}

fn negate_row<S: Scalar>(rep: &UniformRep<S>, row: usize) -> Result<UniformRep<S>> {
    let size = rep.size();
    let mut m0 = rep.m0().clone();
    for j in 0..size {
        m0[(row, j)] = m0[(row, j)].neg();
    }
    let malpha = rep
        .malpha()
        .iter()
        .map(|(a, sp)| {
            let sp = sp
                .iter()
                .map(|(&(i, j), f)| ((i, j), if i == row { f.neg() } else { f.clone() }))
                .collect();
            (a.clone(), sp)
        })
        .collect();
    UniformRep::new(rep.nvars(), rep.degree(), m0, malpha)
}

/// Placement for the `2d-1` family: `x^a y^b` goes to cell `(b, a)` when
/// `a, b ≤ d-1` and `a+b ≤ d-1`; otherwise one factor `x` (or `y` for
/// `y^d`) is split off as `δ`.
pub fn minunif_assignment(d: usize) -> Assignment {
    // (-1)^{|V|-1} with |V| = d.
    let s: i8 = if d % 2 == 1 { 1 } else { -1 };
    let k = d as u32;
    let entries = enumerate_fd(2, d)
        .into_iter()
        .map(|alpha| {
            let (a, b) = (alpha.get(0), alpha.get(1));
            let (row, col, shift) = if a < k && b < k && a + b < k {
                (b, a, None)
            } else if a >= 1 {
                (b, a - 1, Some(0))
            } else {
                (b - 1, 0, Some(1))
            };
            AssignedMonomial {
                alpha,
                row: row as usize,
                col: col as usize,
                shift,
                sign: s,
            }
        })
        .collect();
    Assignment { entries }
}

/// Bivariate representation of size `2d-1` from `V = {1..x^{d-1}}`,
/// `W = {1..y^{d-1}}`.
pub fn minunif<S: Scalar>(d: usize) -> Result<UniformRep<S>> {
    if d == 0 {
        return constant_rep(2, "minunif");
    }
    let (v, w) = bivariate_sets(d);
    let rep = cons2_with::<S>(&v, &w, d, &minunif_assignment(d))?;
    Ok(rep.with_provenance(Provenance::new("minunif", vec![d, d])))
}

/// The 3×3 representation of the generic bivariate quadric
/// `[[-x, 1, 0], [-y, 0, 1], [c₀₀, c₁₀ + c₂₀x + c₁₁y, c₀₁ + c₀₂y]]`.
pub fn binary_quadric<S: Scalar>() -> UniformRep<S> {
    let n = 2;
    let form = |c: i64, lin: [i64; 2]| AffineForm {
        constant: S::from_i64(c),
        linear: lin.iter().map(|&v| S::from_i64(v)).collect(),
    };
    let mut m0 = Mat::filled(3, 3, AffineForm::zero(n));
    m0[(0, 0)] = form(0, [-1, 0]);
    m0[(0, 1)] = form(1, [0, 0]);
    m0[(1, 0)] = form(0, [0, -1]);
    m0[(1, 2)] = form(1, [0, 0]);
    let cells: [([u32; 2], usize, AffineForm<S>); 6] = [
        ([0, 0], 0, form(1, [0, 0])),
        ([1, 0], 1, form(1, [0, 0])),
        ([2, 0], 1, form(0, [1, 0])),
        ([1, 1], 1, form(0, [0, 1])),
        ([0, 1], 2, form(1, [0, 0])),
        ([0, 2], 2, form(0, [0, 1])),
    ];
    let malpha = cells
        .into_iter()
        .map(|(e, col, f)| {
            let mut sp = SparseAffine::new();
            sp.insert((2, col), f);
            (ExponentVector::new(e.to_vec()), sp)
        })
        .collect();
    UniformRep::new(n, 2, m0, malpha)
        .expect("fixed shapes")
        .with_provenance(Provenance::new("binary-quadric", vec![3]))
}

/// Construction methods known to [`construct`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Cons1Tree,
    Cons1Lattice,
    Cons2Split,
    Cons2Table,
    Cons2Turan,
    Cons2Binary,
    Repjan,
    Minunif,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Cons1Tree,
        Method::Cons1Lattice,
        Method::Cons2Split,
        Method::Cons2Table,
        Method::Cons2Turan,
        Method::Cons2Binary,
        Method::Repjan,
        Method::Minunif,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Cons1Tree => "cons1-tree",
            Method::Cons1Lattice => "cons1-lattice",
            Method::Cons2Split => "cons2-split",
            Method::Cons2Table => "cons2-table",
            Method::Cons2Turan => "cons2-turan",
            Method::Cons2Binary => "cons2-binary",
            Method::Repjan => "repjan",
            Method::Minunif => "minunif",
        }
    }

    /// The method whose sizes make up the table of smallest known sizes.
    pub fn documented(n: usize) -> Method {
        if n == 2 {
            Method::Minunif
        } else {
            Method::Cons2Table
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Method::ALL.iter().map(|m| m.name()).collect();
                Error::Parse(format!("unknown method {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

fn inapplicable(method: Method, n: usize, d: usize, reason: &str) -> Error {
    Error::InapplicableMethod {
        method: method.name().into(),
        n,
        d,
        reason: reason.into(),
    }
}

/// The monomial sets a method uses: `(V, None)` for single-row methods,
/// `(V, Some(W))` for two-block ones.
pub fn method_sets(n: usize, d: usize, method: Method) -> Result<(MonomialSet, Option<MonomialSet>)> {
    let bivariate = |m: Method| {
        if n == 2 {
            Ok(())
        } else {
            Err(inapplicable(m, n, d, "only defined for two variables"))
        }
    };
    match method {
        Method::Cons1Tree => {
            bivariate(method)?;
            Ok((tree_set(d), None))
        }
        Method::Cons1Lattice => Ok((lattice_set(n, d)?, None)),
        Method::Cons2Split => {
            let (v, w) = split_sets(n, d)?;
            Ok((v, Some(w)))
        }
        Method::Cons2Table => {
            let (v, w) = table_sets(n, d)?;
            Ok((v, Some(w)))
        }
        Method::Cons2Turan => {
            if d != 4 {
                return Err(inapplicable(method, n, d, "only defined for degree 4"));
            }
            let (v, w) = turan_sets(n)?;
            Ok((v, Some(w)))
        }
        Method::Cons2Binary => {
            let (a0, a1) = binary_sets(n, d)?;
            Ok((a0.truncate(d), Some(a1.truncate(d))))
        }
        Method::Repjan => {
            bivariate(method)?;
            Ok((connected::full_set(2, &[0], d), Some(connected::full_set(2, &[1], d))))
        }
        Method::Minunif => {
            bivariate(method)?;
            let (v, w) = bivariate_sets(d);
            Ok((v, Some(w)))
        }
    }
}

/// Builds the representation of `p_{n,d}` with the given method.
pub fn construct<S: Scalar>(n: usize, d: usize, method: Method) -> Result<UniformRep<S>> {
    if n == 0 {
        return Err(inapplicable(method, n, d, "needs at least one variable"));
    }
    if d == 0 {
        return constant_rep(n, method.name());
    }
    let rep = match method {
        Method::Repjan => {
            method_sets(n, d, method)?;
            repjan::<S>(d)?
        }
        Method::Minunif => {
            method_sets(n, d, method)?;
            minunif::<S>(d)?
        }
        _ => match method_sets(n, d, method)? {
            (v, None) => cons1::<S>(&v, d)?,
            (v, Some(w)) => cons2::<S>(&v, &w, d)?,
        },
    };
    let sizes = rep.provenance().map(|p| p.set_sizes.clone()).unwrap_or_default();
    Ok(rep.with_provenance(Provenance::new(method.name(), sizes)))
}

/// Size `construct` would produce, computed from the sets alone.
pub fn construct_size(n: usize, d: usize, method: Method) -> Result<usize> {
    if d == 0 {
        return Ok(1);
    }
    Ok(match method_sets(n, d, method)? {
        (v, None) => v.len(),
        (v, Some(w)) => v.len() + w.len() - 1,
    })
}

/// The generic polynomial's coefficient count must not exceed the number
/// of affine parameters a single-row representation can carry:
/// `N·(n+1) - (N-1) ≥ binomial(n+d, n)`.
pub fn single_row_dimension_ok(size: usize, n: usize, d: usize) -> bool {
    let lhs = (size * (n + 1)) as u128 - (size as u128 - 1);
    lhs >= crate::polycore::binomial(n + d, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biaffine::{verify, VerifyOptions};
    use crate::scalar::Rational;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("cons3".parse::<Method>().is_err());
    }

    #[test]
    fn degree_zero_is_one_by_one() {
        for m in Method::ALL {
            let rep = construct::<Rational>(2, 0, m).unwrap();
            assert_eq!(rep.size(), 1);
            assert!(verify(&rep, &VerifyOptions::symbolic()).unwrap().pass);
        }
    }

    #[test]
    fn inapplicable_methods_are_rejected() {
        assert!(matches!(
            construct::<Rational>(5, 3, Method::Cons2Turan),
            Err(Error::InapplicableMethod { .. })
        ));
        assert!(construct::<Rational>(3, 3, Method::Cons2Split).is_err());
        assert!(construct::<Rational>(3, 3, Method::Minunif).is_err());
        assert!(matches!(
            construct::<Rational>(9, 3, Method::Cons2Table),
            Err(Error::NotTabulated { .. })
        ));
    }

    #[test]
    fn minunif_sign_matches_block_rule() {
        for d in 1..=5 {
            let a = minunif_assignment(d);
            let expect = if d % 2 == 1 { 1 } else { -1 };
            assert!(a.entries.iter().all(|e| e.sign == expect));
        }
    }
}
