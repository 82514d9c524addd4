//! Monomial sets connected to 1 and the companion block `M_V`.
//!
//! A set `V` of monomials is connected to 1 if it contains 1 and every
//! other member is obtained from some member by multiplying with a single
//! variable. Such sets are the combinatorial input of all constructions.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Mat;
use crate::polycore::{enumerate_fd, AffineForm, ExponentVector};
use crate::scalar::{Rational, Scalar};

/// Parent edge: `members[child] = members[parent] + e_var`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParentEdge {
    pub parent: usize,
    pub var: usize,
}

/// A set of monomials connected to 1, sorted graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialSet {
    n: usize,
    members: Vec<ExponentVector>,
    parents: Vec<Option<ParentEdge>>,
}

impl MonomialSet {
    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[ExponentVector] {
        &self.members
    }

    /// Parent edge of member `i` (`None` only for the constant monomial).
    pub fn parent(&self, i: usize) -> Option<ParentEdge> {
        self.parents[i]
    }

    pub fn contains(&self, e: &ExponentVector) -> bool {
        self.members.binary_search(e).is_ok()
    }

    pub fn index_of(&self, e: &ExponentVector) -> Option<usize> {
        self.members.binary_search(e).ok()
    }

    /// Members of total degree at most `d`. The result is still connected
    /// because parents have smaller degree.
    pub fn truncate(&self, d: usize) -> MonomialSet {
        check_connected(
            self.n,
            self.members.iter().filter(|e| e.degree() <= d).cloned(),
        )
        .expect("degree truncation keeps a set connected")
    }

    pub fn to_json(&self) -> Value {
        let parents: Vec<Value> = self
            .parents
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| json!({ "child": i, "parent": p.parent, "var": p.var })))
            .collect();
        json!({
            "n": self.n,
            "members": self.members.iter().map(ExponentVector::to_json).collect::<Vec<_>>(),
            "parents": parents,
        })
    }

    /// Parses the JSON form; parent edges are recomputed and checked.
    pub fn from_json(v: &Value) -> Result<MonomialSet> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("monomial set needs integer field \"n\"".into()))?
            as usize;
        let members = v
            .get("members")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("monomial set needs array field \"members\"".into()))?
            .iter()
            .map(ExponentVector::from_json)
            .collect::<Result<Vec<_>>>()?;
        check_connected(n, members)
    }
}

/// Sorts the members, and finds for each nonconstant member a parent
/// (first variable whose removal lands in the set).
pub fn check_connected<I>(n: usize, members: I) -> Result<MonomialSet>
where
    I: IntoIterator<Item = ExponentVector>,
{
    let set: BTreeSet<ExponentVector> = members.into_iter().collect();
    if let Some(bad) = set.iter().find(|e| e.nvars() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            found: bad.nvars(),
        });
    }
    let members: Vec<ExponentVector> = set.into_iter().collect();
    if members.first().is_none_or(|e| !e.is_zero()) {
        return Err(Error::NotConnected("the constant monomial 1 is missing".into()));
    }
    let index: HashMap<&ExponentVector, usize> =
        members.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut parents = vec![None];
    for e in members.iter().skip(1) {
        let edge = (0..n).find_map(|k| {
            e.minus_unit(k)
                .and_then(|p| index.get(&p).map(|&j| ParentEdge { parent: j, var: k }))
        });
        match edge {
            Some(edge) => parents.push(Some(edge)),
            None => return Err(Error::NotConnected(format!("{e} has no neighbour of lower degree"))),
        }
    }
    Ok(MonomialSet {
        n,
        members,
        parents,
    })
}

/// The `(m-1)×m` block whose row for member `i ≥ 1` has `-x_k` in the
/// parent's column and `1` in column `i`. Its maximal minor deleting
/// column `j` is `(-1)^j x^{members[j]}` (0-based `j`), so its kernel is
/// spanned by the vector of members.
pub fn build_mv<S: Scalar>(v: &MonomialSet) -> Mat<AffineForm<S>> {
    let n = v.nvars();
    let m = v.len();
    let mut mat = Mat::filled(m.saturating_sub(1), m, AffineForm::zero(n));
    for i in 1..m {
        let edge = v.parent(i).expect("nonconstant members have parents");
        mat[(i - 1, edge.parent)] = AffineForm::var(n, edge.var, -S::one());
        mat[(i - 1, i)] = AffineForm::constant(n, S::one());
    }
    mat
}

/// Every monomial of degree ≤ `d` written as `x^δ · v · w` with
/// `δ ∈ {0, e_1, …, e_n}`, `v ∈ V`, `w ∈ W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub alpha: ExponentVector,
    /// `None` for `δ = 0`, else the variable index.
    pub shift: Option<usize>,
    pub v_index: usize,
    pub w_index: usize,
}

/// Finds, for each `α` in the basis of `F_d`, the decomposition with
/// `δ = 0` preferred, then the smallest `(δ, j, i)` lexicographically.
/// Fails with the first monomial that has none.
pub fn decompose_all(v: &MonomialSet, w: &MonomialSet, d: usize) -> Result<Vec<Decomposition>> {
    let n = v.nvars();
    if w.nvars() != n {
        return Err(Error::VariableCountMismatch {
            left: n,
            right: w.nvars(),
        });
    }
    let shifts: Vec<Option<usize>> = std::iter::once(None).chain((0..n).map(Some)).collect();
    enumerate_fd(n, d)
        .into_iter()
        .map(|alpha| {
            for &shift in &shifts {
                let rest = match shift {
                    None => Some(alpha.clone()),
                    Some(k) => alpha.minus_unit(k),
                };
                let Some(rest) = rest else { continue };
                for (j, vj) in v.members().iter().enumerate() {
                    if let Some(g) = rest.minus(vj) {
                        if let Some(i) = w.index_of(&g) {
                            return Ok(Decomposition {
                                alpha,
                                shift,
                                v_index: j,
                                w_index: i,
                            });
                        }
                    }
                }
            }
            Err(Error::CoveringFailure(alpha.to_string()))
        })
        .collect()
}

/// Whether `F₁·V·W ⊇ F_d`; returns the first uncovered monomial if not.
pub fn covering_gap(v: &MonomialSet, w: &MonomialSet, d: usize) -> Option<ExponentVector> {
    let n = v.nvars();
    let sums: HashSet<ExponentVector> = v
        .members()
        .iter()
        .flat_map(|a| w.members().iter().map(move |b| a.plus(b)))
        .collect();
    enumerate_fd(n, d).into_iter().find(|alpha| {
        !(sums.contains(alpha) || (0..n).any(|k| alpha.minus_unit(k).is_some_and(|r| sums.contains(&r))))
    })
}

/// The set `{1}`.
pub fn unit_set(n: usize) -> MonomialSet {
    check_connected(n, [ExponentVector::zero(n)]).expect("{1} is connected")
}

/// All monomials of degree ≤ `d` in the variables `vars` (a subset of
/// `0..n`).
pub fn full_set(n: usize, vars: &[usize], d: usize) -> MonomialSet {
    let k = vars.len();
    let members = enumerate_fd(k, d).into_iter().map(|e| {
        let mut v = vec![0; n];
        for (t, &i) in vars.iter().enumerate() {
            v[i] = e.get(t);
        }
        ExponentVector::new(v)
    });
    check_connected(n, members).expect("full degree sets are connected")
}

/// Bivariate set with `F₁·V ⊇ F_d`: in each degree layer `k < d` keep
/// `x^a y^{k-a}` for even `a` and for `a = k`. Size `Σ_{k<d} ⌈(k+2)/2⌉`,
/// about `d²/4`.
pub fn tree_set(d: usize) -> MonomialSet {
    let mut members = vec![ExponentVector::zero(2)];
    for k in 0..d as u32 {
        for a in 0..=k {
            if a % 2 == 0 || a == k {
                members.push(ExponentVector::new(vec![a, k - a]));
            }
        }
    }
    check_connected(2, members).expect("layered set is connected")
}

/// The A-type Cartan matrix of size `k` (2 on the diagonal, -1 next to it).
pub fn cartan_matrix(k: usize) -> Mat<Rational> {
    Mat::from_fn(k, k, |i, j| {
        if i == j {
            Rational::from_i64(2)
        } else if i.abs_diff(j) == 1 {
            Rational::from_i64(-1)
        } else {
            Rational::from_i64(0)
        }
    })
}

/// Membership in the lattice spanned by the rows of a nonsingular integer
/// matrix, decided by solving exactly: `v ∈ Λ` iff `C⁻ᵀ v` is integral.
pub struct LatticeMembership {
    inv_t: Mat<Rational>,
}

impl LatticeMembership {
    pub fn new(basis_rows: &Mat<Rational>) -> Option<Self> {
        let t = Mat::from_fn(basis_rows.cols(), basis_rows.rows(), |i, j| basis_rows[(j, i)].clone());
        linalg::inverse(&t).map(|inv_t| LatticeMembership { inv_t })
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let k = self.inv_t.rows();
        (0..k).all(|i| {
            let s = (0..k).fold(Rational::from_i64(0), |acc, j| {
                acc + self.inv_t[(i, j)].clone() * Rational::from_i64(v[j] as i64)
            });
            s.is_integer()
        })
    }
}

/// Set `S = S₁ ∪ … ∪ Sₙ ∪ S₀` of lattice points in the simplex `Δ_d`:
/// `Sᵢ` are the points with `i`-th coordinate 0, and `S₀` the points whose
/// last `n-1` coordinates lie in the root lattice `Λ` of type `A_{n-1}`.
/// Every point `α` of `Δ_d` has some `β ∈ S` with `α-β ∈ {0, e₂, …, eₙ}`,
/// so `F₁·S ⊇ F_d` with `|S| ≈ |Δ_d|/n`.
pub fn lattice_set(n: usize, d: usize) -> Result<MonomialSet> {
    if n < 2 {
        return Err(Error::InapplicableMethod {
            method: "cons1-lattice".into(),
            n,
            d,
            reason: "needs at least two variables".into(),
        });
    }
    let lattice = LatticeMembership::new(&cartan_matrix(n - 1)).expect("Cartan matrix is nonsingular");
    let members = enumerate_fd(n, d).into_iter().filter(|a| {
        a.entries().contains(&0) || lattice.contains(&a.entries()[1..])
    });
    check_connected(n, members)
}

/// Whether the binary expansion of `a` only has ones at even (`parity =
/// 0`) or odd (`parity = 1`) bit positions.
pub fn in_binary_class(a: u64, parity: u32) -> bool {
    let mask = if parity == 0 {
        0xAAAA_AAAA_AAAA_AAAAu64
    } else {
        0x5555_5555_5555_5555u64
    };
    a & mask == 0
}

/// The two sets `A₀, A₁ ⊂ [0,d]ⁿ` of exponent vectors whose entries have
/// ones only at even, respectively odd, binary positions, each extended to
/// be connected to 0. Every `α ∈ [0,d]ⁿ` is `β + γ` with `β ∈ A₀`,
/// `γ ∈ A₁`, giving sets of size `O(d^{n/2})`.
///
/// Connection repair: for `α ≠ 0` let `l` be the least 2-adic valuation of
/// its nonzero entries and `j` the first coordinate attaining it; then
/// `α - e_j, …, α - (2^l - 1)e_j` are added, which links `α` to
/// `α - 2^l e_j`, again in the class.
pub fn binary_sets(n: usize, d: usize) -> Result<(MonomialSet, MonomialSet)> {
    if n < 3 {
        return Err(Error::InapplicableMethod {
            method: "cons2-binary".into(),
            n,
            d,
            reason: "needs at least three variables; use the split sets for n = 2".into(),
        });
    }
    let build = |parity: u32| -> MonomialSet {
        let vals: Vec<u32> = (0..=d as u32).filter(|&a| in_binary_class(a as u64, parity)).collect();
        let mut set: BTreeSet<ExponentVector> = BTreeSet::new();
        let mut idx = vec![0usize; n];
        loop {
            let alpha: Vec<u32> = idx.iter().map(|&k| vals[k]).collect();
            let alpha = ExponentVector::new(alpha);
            if !alpha.is_zero() {
                let (l, j) = alpha
                    .entries()
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a != 0)
                    .map(|(j, &a)| (a.trailing_zeros(), j))
                    .min()
                    .expect("nonzero vector has a nonzero entry");
                let mut v = alpha.entries().to_vec();
                for _ in 1..(1u32 << l) {
                    v[j] -= 1;
                    set.insert(ExponentVector::new(v.clone()));
                }
            }
            set.insert(alpha);
            // Next index tuple.
            let mut pos = 0;
            loop {
                if pos == n {
                    return check_connected(n, set).expect("repaired binary set is connected");
                }
                idx[pos] += 1;
                if idx[pos] < vals.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    };
    Ok((build(0), build(1)))
}

/// `V` = monomials of degree ≤ `d` in the first `n/2` variables, `W` the
/// same in the last `n/2`.
pub fn split_sets(n: usize, d: usize) -> Result<(MonomialSet, MonomialSet)> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::InapplicableMethod {
            method: "cons2-split".into(),
            n,
            d,
            reason: "needs an even number of variables".into(),
        });
    }
    let h = n / 2;
    let first: Vec<usize> = (0..h).collect();
    let last: Vec<usize> = (h..n).collect();
    Ok((full_set(n, &first, d), full_set(n, &last, d)))
}

/// Reads a monomial such as `x2y` (`x²y`) or `zw` with variables named
/// `x y z w u v q s`.
pub fn parse_monomial(s: &str, n: usize) -> Result<ExponentVector> {
    const NAMES: [char; 8] = ['x', 'y', 'z', 'w', 'u', 'v', 'q', 's'];
    let mut v = vec![0u32; n];
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace() && *c != '^' && *c != '*').collect();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let i = NAMES
            .iter()
            .position(|&x| x == c)
            .filter(|&i| i < n)
            .ok_or_else(|| Error::Parse(format!("unknown variable {c:?} in {s:?} for n={n}")))?;
        k += 1;
        let start = k;
        while k < chars.len() && chars[k].is_ascii_digit() {
            k += 1;
        }
        let e: u32 = if start == k {
            1
        } else {
            chars[start..k].iter().collect::<String>().parse().unwrap()
        };
        v[i] += e;
    }
    Ok(ExponentVector::new(v))
}

/// Extra monomials `(n, d, V₁, W₁)` added to the pure-power sets.
const TABLE: &[(usize, usize, &[&str], &[&str])] = &[
    (3, 4, &[], &[]),
    (3, 5, &[], &["xy"]),
    (3, 6, &[], &["xy", "x2y"]),
    (3, 7, &[], &["x2y", "y2z", "z2x"]),
    (3, 8, &[], &["x2y", "y2z", "z2x", "x2y2", "z2x2"]),
    (3, 9, &["x3y", "y3z", "z3x"], &["x2y", "x2z", "y2z", "x2y2", "x2z2", "y2z2"]),
    (4, 4, &[], &["xy"]),
    (4, 5, &[], &["xy", "zw"]),
    (4, 6, &["x2y", "y2z", "z2w"], &["xy", "zw"]),
    (4, 7, &["x2y", "y2z", "z2w", "w2x", "xy"], &["x2z", "xz2", "y2w", "yw2"]),
    (
        4,
        8,
        &["x2y", "x2y2", "z2x", "x3y", "y3z", "z3w", "w3x"],
        &["xy", "xyz", "xyw", "y2z", "z2w", "w2x", "w2y", "x2z"],
    ),
    (5, 4, &[], &["xy", "zw"]),
    (5, 5, &["xy", "yz", "zw"], &["wu", "xu"]),
    (6, 4, &[], &["xy", "zw", "uv"]),
    (6, 5, &["xy", "zw", "uv", "wy"], &["yz", "wu", "xv", "xz"]),
    (7, 4, &[], &["xy", "zw", "uv", "xq", "yq"]),
    (7, 5, &["xy", "zw", "uv", "wy", "qu"], &["yz", "wu", "vq", "xz", "wx"]),
    (8, 4, &[], &["xy", "yz", "xz", "wu", "wv", "uv", "qs"]),
];

/// Whether `(n, d)` has tabulated sets.
pub fn is_tabulated(n: usize, d: usize) -> bool {
    match n {
        2 => (2..=9).contains(&d),
        3 => (2..=9).contains(&d),
        4 => (2..=8).contains(&d),
        5..=7 => (2..=5).contains(&d),
        8 => (2..=4).contains(&d),
        _ => false,
    }
}

/// Pure powers `{1, xᵢᵗ : 1 ≤ t ≤ e}`.
pub fn pure_powers(n: usize, e: usize) -> Vec<ExponentVector> {
    let mut out = vec![ExponentVector::zero(n)];
    for i in 0..n {
        for t in 1..=e as u32 {
            let mut v = vec![0; n];
            v[i] = t;
            out.push(ExponentVector::new(v));
        }
    }
    out
}

/// The small hand-made sets: pure powers up to `e = ⌈(d-1)/2⌉` in `V` and
/// `f = ⌊(d-1)/2⌋` in `W`, plus tabulated extra monomials. For two
/// variables these are the sets of [`bivariate_sets`].
pub fn table_sets(n: usize, d: usize) -> Result<(MonomialSet, MonomialSet)> {
    if !is_tabulated(n, d) {
        return Err(Error::NotTabulated { n, d });
    }
    if n == 2 {
        return Ok(bivariate_sets(d));
    }
    let e = d / 2; // ⌈(d-1)/2⌉
    let f = (d - 1) / 2;
    let (v1, w1): (&[&str], &[&str]) = TABLE
        .iter()
        .find(|row| row.0 == n && row.1 == d)
        .map_or((&[], &[]), |row| (row.2, row.3));
    let mut v = pure_powers(n, e);
    for s in v1 {
        v.push(parse_monomial(s, n)?);
    }
    let mut w = pure_powers(n, f);
    for s in w1 {
        w.push(parse_monomial(s, n)?);
    }
    Ok((check_connected(n, v)?, check_connected(n, w)?))
}

/// `V = {1, x, …, x^{d-1}}`, `W = {1, y, …, y^{d-1}}`, giving size `2d-1`.
pub fn bivariate_sets(d: usize) -> (MonomialSet, MonomialSet) {
    let k = d.saturating_sub(1);
    (full_set(2, &[0], k), full_set(2, &[1], k))
}

/// Splits `0..n` into three contiguous groups of nearly equal size, larger
/// groups first.
pub fn turan_groups(n: usize) -> Vec<Vec<usize>> {
    let base = n / 3;
    let extra = n % 3;
    let mut out = Vec::new();
    let mut start = 0;
    for g in 0..3 {
        let size = base + usize::from(g < extra);
        out.push((start..start + size).collect());
        start += size;
    }
    out
}

/// `T(n,4,2) = m·n - 3m(m+1)/2` with `m = ⌊n/3⌋`.
pub fn turan_number(n: usize) -> usize {
    let m = n / 3;
    m * n - 3 * m * (m + 1) / 2
}

/// Sets for degree 4: `V = {1, xᵢ, xᵢ²}` and `W = {1, xᵢ} ∪ {x_a x_b}` over
/// pairs inside the three groups, so that every four distinct variables
/// contain such a pair.
pub fn turan_sets(n: usize) -> Result<(MonomialSet, MonomialSet)> {
    if n < 4 {
        return Err(Error::InapplicableMethod {
            method: "cons2-turan".into(),
            n,
            d: 4,
            reason: "needs at least four variables".into(),
        });
    }
    let v = pure_powers(n, 2);
    let mut w = pure_powers(n, 1);
    for g in turan_groups(n) {
        for (k, &a) in g.iter().enumerate() {
            for &b in &g[k + 1..] {
                let mut e = vec![0; n];
                e[a] = 1;
                e[b] = 1;
                w.push(ExponentVector::new(e));
            }
        }
    }
    Ok((check_connected(n, v)?, check_connected(n, w)?))
}
