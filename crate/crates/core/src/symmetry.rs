//! Affine changes of coordinates acting on representations.
//!
//! For `g(x) = Ax + b` the substitution `x ← g⁻¹x` maps the generic
//! polynomial to `p(g⁻¹x, c) = p(x, ρ(g)c)` for a linear map `ρ(g)` on the
//! coefficient space. If `M(x, c)` represents `p`, then so does
//! `M(g⁻¹x, ρ(g)⁻¹c)`, with the same size.

use std::collections::HashMap;

use crate::biaffine::{SparseAffine, UniformRep};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Mat;
use crate::polycore::{enumerate_fd, AffineForm, ExponentVector, MultiPoly};
use crate::scalar::Scalar;

/// The affine map `x ↦ Ax + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap<S> {
    a: Mat<S>,
    b: Vec<S>,
}

impl<S: Scalar> AffineMap<S> {
    /// Fails if `A` is not square, sizes disagree or `A` is singular.
    pub fn new(a: Mat<S>, b: Vec<S>) -> Result<Self> {
        if !a.is_square() || a.rows() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "affine map with {}x{} matrix and translation of length {}",
                a.rows(),
                a.cols(),
                b.len()
            )));
        }
        if linalg::det(&a).is_negligible(1e-300) {
            return Err(Error::SingularMap);
        }
        Ok(AffineMap { a, b })
    }

    pub fn identity(n: usize) -> Self {
        AffineMap {
            a: linalg::identity(n),
            b: vec![S::zero(); n],
        }
    }

    pub fn nvars(&self) -> usize {
        self.b.len()
    }

    pub fn matrix(&self) -> &Mat<S> {
        &self.a
    }

    pub fn translation(&self) -> &[S] {
        &self.b
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        let n = self.nvars();
        (0..n)
            .map(|i| {
                (0..n).fold(self.b[i].clone(), |acc, j| acc + self.a[(i, j)].clone() * x[j].clone())
            })
            .collect()
    }

    pub fn inverse(&self) -> Self {
        let ai = linalg::inverse(&self.a).expect("affine maps are invertible by construction");
        let n = self.nvars();
        let b = (0..n)
            .map(|i| {
                -(0..n).fold(S::zero(), |acc, j| acc + ai[(i, j)].clone() * self.b[j].clone())
            })
            .collect();
        AffineMap { a: ai, b }
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        let a = linalg::matmul(&self.a, &other.a);
        let b = self.apply(&other.b);
        AffineMap { a, b }
    }

    /// Components of the map as affine forms.
    pub fn components(&self) -> Vec<AffineForm<S>> {
        let n = self.nvars();
        (0..n)
            .map(|i| AffineForm {
                constant: self.b[i].clone(),
                linear: (0..n).map(|j| self.a[(i, j)].clone()).collect(),
            })
            .collect()
    }
}

/// `f(h(x))` for an affine form `f` and affine map `h`.
pub fn substitute_form<S: Scalar>(f: &AffineForm<S>, h: &AffineMap<S>) -> AffineForm<S> {
    let mut out = AffineForm::constant(f.nvars(), f.constant.clone());
    for (i, comp) in h.components().iter().enumerate() {
        if !f.linear[i].is_zero() {
            out = out.add(&comp.scale(&f.linear[i]));
        }
    }
    out
}

/// `p(h(x))` for a polynomial `p`.
pub fn substitute_poly<S: Scalar>(p: &MultiPoly<S>, h: &AffineMap<S>) -> MultiPoly<S> {
    let n = p.nvars();
    let comps: Vec<MultiPoly<S>> = h.components().iter().map(|f| f.to_poly(n, 0)).collect();
    let mut powers: HashMap<(usize, u32), MultiPoly<S>> = HashMap::new();
    let mut out = MultiPoly::zero(n);
    for (e, c) in p.terms() {
        let mut t = MultiPoly::constant(n, c.clone());
        for (i, &k) in e.entries().iter().enumerate() {
            if k == 0 {
                continue;
            }
            let pw = powers
                .entry((i, k))
                .or_insert_with(|| {
                    (0..k).fold(MultiPoly::one(n), |acc, _| &acc * &comps[i])
                })
                .clone();
            t = &t * &pw;
        }
        out = &out + &t;
    }
    out
}

/// Matrix of `c ↦ c'` with `p(g⁻¹x, c) = p(x, c')`, in the graded-lex
/// basis of `F_d`: entry `(β, α)` is the coefficient of `x^β` in
/// `(g⁻¹x)^α`. It is a group homomorphism: `ρ(g∘h) = ρ(g)ρ(h)`.
pub fn coeff_action<S: Scalar>(g: &AffineMap<S>, d: usize) -> Mat<S> {
    let n = g.nvars();
    let basis = enumerate_fd(n, d);
    let ginv = g.inverse();
    let index: HashMap<&ExponentVector, usize> = basis.iter().enumerate().map(|(k, e)| (e, k)).collect();
    let mut rho = Mat::filled(basis.len(), basis.len(), S::zero());
    for (col, alpha) in basis.iter().enumerate() {
        let image = substitute_poly(&MultiPoly::monomial(alpha.clone(), S::one()), &ginv);
        for (beta, c) in image.terms() {
            rho[(index[beta], col)] = c.clone();
        }
    }
    rho
}

/// `M(g⁻¹x, ρ(g)⁻¹c)`: a representation of the same size whose
/// determinant is again the generic polynomial.
pub fn act<S: Scalar>(g: &AffineMap<S>, rep: &UniformRep<S>) -> Result<UniformRep<S>> {
    if g.nvars() != rep.nvars() {
        return Err(Error::VariableCountMismatch {
            left: g.nvars(),
            right: rep.nvars(),
        });
    }
    let ginv = g.inverse();
    let basis = rep.coeff_basis();
    // ρ(g)⁻¹ = ρ(g⁻¹).
    let rho_inv = coeff_action(&ginv, rep.degree());
    let m0 = rep.m0().map(|f| substitute_form(f, &ginv));
    let moved: HashMap<&ExponentVector, SparseAffine<S>> = rep
        .malpha()
        .iter()
        .map(|(a, sp)| {
            (
                a,
                sp.iter().map(|(&ij, f)| (ij, substitute_form(f, &ginv))).collect(),
            )
        })
        .collect();
    let mut malpha = std::collections::BTreeMap::new();
    // New M_β = Σ_α (ρ⁻¹)_{αβ} M_α(g⁻¹x).
    for (bi, beta) in basis.iter().enumerate() {
        let mut acc: SparseAffine<S> = SparseAffine::new();
        for (ai, alpha) in basis.iter().enumerate() {
            let w = &rho_inv[(ai, bi)];
            if w.is_zero() {
                continue;
            }
            let Some(sp) = moved.get(alpha) else { continue };
            for (&ij, f) in sp {
                let term = f.scale(w);
                let e = acc.entry(ij).or_insert_with(|| AffineForm::zero(rep.nvars()));
                *e = e.add(&term);
            }
        }
        if !acc.is_empty() {
            malpha.insert(beta.clone(), acc);
        }
    }
    let out = UniformRep::new(rep.nvars(), rep.degree(), m0, malpha)?;
    Ok(match rep.provenance() {
        Some(p) => out.with_provenance(p.clone()),
        None => out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio, Rational};

    fn swap_shift() -> AffineMap<Rational> {
        // g(x, y) = (y, x + 1)
        let a = Mat::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        AffineMap::new(a, vec![int(0), int(1)]).unwrap()
    }

    #[test]
    fn inverse_and_compose() {
        let g = swap_shift();
        let gi = g.inverse();
        assert_eq!(gi.apply(&[int(3), int(5)]), vec![int(4), int(3)]);
        assert_eq!(g.compose(&gi), AffineMap::identity(2));
    }

    #[test]
    fn singular_map_rejected() {
        let a = Mat::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]).unwrap();
        assert_eq!(AffineMap::new(a, vec![int(0), int(0)]), Err(Error::SingularMap));
    }

    #[test]
    fn identity_acts_trivially() {
        let rho = coeff_action(&AffineMap::<Rational>::identity(3), 2);
        assert_eq!(rho, linalg::identity(10));
    }

    #[test]
    fn scaling_in_one_variable() {
        let g = AffineMap::new(Mat::filled(1, 1, int(2)), vec![int(0)]).unwrap();
        let rho = coeff_action(&g, 2);
        let expect = Mat::from_fn(3, 3, |i, j| {
            if i != j {
                int(0)
            } else {
                [int(1), ratio(1, 2), ratio(1, 4)][i].clone()
            }
        });
        assert_eq!(rho, expect);
    }
}
