//! Polynomial super-calculus on `M = T[1]V̂`.
//!
//! Coordinates are `t^α` of degree `-|e_α|` and `θ^α` of degree `1 - |e_α|`.
//! A monomial is stored as an exponent vector over the fixed variable order
//! `t^0 < … < t^{n-1} < θ^0 < … < θ^{n-1}` and stands for the ordered product
//! in that order. Vector fields act as left derivations, coefficients on the
//! left. Tangent-valued forms on `V̂` are vector fields with only `∂/∂t`
//! components; their `θ`-degree is the form degree.
//!
//! Every result is reduced modulo coefficients of polynomial degree above the
//! truncation order, and a flag records whether anything was dropped.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{AlgebraStructure, BasisElement, OpKind};
use crate::linalg::Echelon;
use crate::{Error, FormalSum, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates {
    /// `|e_α|` for each basis vector of `V`.
    pub degrees: Vec<i64>,
    /// Largest polynomial degree (in `t` and `θ` together) kept in
    /// coefficients.
    pub order: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T(usize),
    Theta(usize),
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::T(a) | Var::Theta(a) => a,
        }
    }
}

pub type Monomial = Vec<u32>;

impl Coordinates {
    pub fn new(degrees: Vec<i64>, order: usize) -> Arc<Self> {
        Arc::new(Coordinates { degrees, order })
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn var_degree(&self, v: Var) -> i64 {
        match v {
            Var::T(a) => -self.degrees[a],
            Var::Theta(a) => 1 - self.degrees[a],
        }
    }

    fn slot(&self, v: Var) -> usize {
        match v {
            Var::T(a) => a,
            Var::Theta(a) => self.dim() + a,
        }
    }

    fn var_at(&self, slot: usize) -> Var {
        if slot < self.dim() {
            Var::T(slot)
        } else {
            Var::Theta(slot - self.dim())
        }
    }

    fn slot_degree(&self, slot: usize) -> i64 {
        self.var_degree(self.var_at(slot))
    }

    pub fn one(&self) -> Monomial {
        alloc::vec![0; 2 * self.dim()]
    }

    pub fn var(&self, v: Var) -> Monomial {
        let mut m = self.one();
        m[self.slot(v)] = 1;
        m
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.iter().enumerate().map(|(s, &e)| e as i64 * self.slot_degree(s)).sum()
    }

    pub fn poly_degree(m: &Monomial) -> usize {
        m.iter().map(|&e| e as usize).sum()
    }

    pub fn t_degree(&self, m: &Monomial) -> usize {
        m[..self.dim()].iter().map(|&e| e as usize).sum()
    }

    pub fn theta_degree(&self, m: &Monomial) -> usize {
        m[self.dim()..].iter().map(|&e| e as usize).sum()
    }

    fn odd(&self, slot: usize) -> bool {
        self.slot_degree(slot) & 1 == 1
    }

    /// `m1 · m2` in canonical order with its sign, or `None` if an odd
    /// variable would appear twice.
    pub fn mul_monomials(&self, m1: &Monomial, m2: &Monomial) -> Option<(Monomial, Scalar)> {
        let mut parity = 0u32;
        let mut odd_after = 0u32;
        for s in (0..m1.len()).rev() {
            if self.odd(s) {
                if m1[s] + m2[s] > 1 {
                    return None;
                }
                parity += m2[s] * odd_after;
                odd_after += m1[s];
            }
        }
        let m = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
        Some((m, Scalar::sign(parity as i64)))
    }

    /// Left derivative `∂/∂v` of a monomial.
    pub fn derive_monomial(&self, m: &Monomial, v: Var) -> Option<(Monomial, Scalar)> {
        let s = self.slot(v);
        if m[s] == 0 {
            return None;
        }
        let before: i64 = (0..s).map(|k| m[k] as i64 * self.slot_degree(k)).sum();
        let mut c = Scalar::from_int(m[s] as i64);
        c.apply_sign(self.slot_degree(s) * before);
        let mut out = m.clone();
        out[s] -= 1;
        Some((out, c))
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let mut out = String::new();
        for (s, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = match self.var_at(s) {
                Var::T(a) => format!("t{}", a + 1),
                Var::Theta(a) => format!("θ{}", a + 1),
            };
            out.push_str(&name);
            if e > 1 {
                out.push_str(&format!("^{e}"));
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    /// All monomials with polynomial degree in `lo..=hi`.
    pub fn monomials(&self, lo: usize, hi: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = self.one();
        self.monomials_rec(0, hi, &mut cur, &mut out);
        out.retain(|m| (lo..=hi).contains(&Self::poly_degree(m)));
        out.sort();
        out
    }

    fn monomials_rec(&self, slot: usize, budget: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if slot == cur.len() {
            out.push(cur.clone());
            return;
        }
        let cap = if self.odd(slot) { budget.min(1) } else { budget };
        for e in 0..=cap {
            cur[slot] = e as u32;
            self.monomials_rec(slot + 1, budget - e, cur, out);
        }
        cur[slot] = 0;
    }
}

pub type SuperPolynomial = FormalSum<Monomial>;

/// A vector field on `M`: terms `c · m · ∂/∂v`.
#[derive(Clone, Debug)]
pub struct VectorField {
    coords: Arc<Coordinates>,
    terms: FormalSum<(Monomial, Var)>,
    truncated: bool,
}

impl PartialEq for VectorField {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && *self.coords == *other.coords
    }
}

impl VectorField {
    pub fn zero(coords: &Arc<Coordinates>) -> Self {
        VectorField {
            coords: coords.clone(),
            terms: FormalSum::zero(),
            truncated: false,
        }
    }

    pub fn from_terms(coords: &Arc<Coordinates>, terms: FormalSum<(Monomial, Var)>) -> Self {
        let mut f = VectorField {
            coords: coords.clone(),
            terms,
            truncated: false,
        };
        f.truncate();
        f
    }

    /// `f · ∂/∂v`.
    pub fn term(coords: &Arc<Coordinates>, m: Monomial, v: Var, c: Scalar) -> Self {
        Self::from_terms(coords, FormalSum::single((m, v), c))
    }

    /// `d = Σ θ^α ∂/∂t^α`.
    pub fn de_rham(coords: &Arc<Coordinates>) -> Self {
        let terms = (0..coords.dim())
            .map(|a| ((coords.var(Var::Theta(a)), Var::T(a)), Scalar::one()))
            .collect();
        Self::from_terms(coords, terms)
    }

    pub fn coords(&self) -> &Arc<Coordinates> {
        &self.coords
    }

    pub fn terms(&self) -> &FormalSum<(Monomial, Var)> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    fn truncate(&mut self) {
        let order = self.coords.order;
        if self.terms.retain(|(m, _)| Coordinates::poly_degree(m) <= order) {
            self.truncated = true;
        }
    }

    fn with_terms(&self, terms: FormalSum<(Monomial, Var)>, truncated: bool) -> Self {
        let mut f = VectorField {
            coords: self.coords.clone(),
            terms,
            truncated,
        };
        f.truncate();
        f
    }

    fn check(&self, other: &Self) -> Result<(), Error> {
        if Arc::ptr_eq(&self.coords, &other.coords) || *self.coords == *other.coords {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn term_degree(&self, m: &Monomial, v: Var) -> i64 {
        self.coords.monomial_degree(m) - self.coords.var_degree(v)
    }

    /// Degree if homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|(m, v)| self.term_degree(m, *v));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        Ok(self.with_terms(&self.terms + &other.terms, self.truncated || other.truncated))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        Ok(self.with_terms(&self.terms - &other.terms, self.truncated || other.truncated))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.with_terms(self.terms.scaled(c), self.truncated)
    }

    /// `X(f)`.
    pub fn apply(&self, f: &SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero();
        for ((m, v), c) in self.terms.iter() {
            for (g, cg) in f.iter() {
                let Some((dg, cd)) = self.coords.derive_monomial(g, *v) else {
                    continue;
                };
                if let Some((p, cp)) = self.coords.mul_monomials(m, &dg) {
                    out.add_term(p, &(c * cg) * &(cd * cp));
                }
            }
        }
        out.retain(|m| Coordinates::poly_degree(m) <= self.coords.order);
        out
    }

    /// Graded commutator `XY - (-1)^{|X||Y|} YX`, termwise.
    pub fn commutator(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        let co = &self.coords;
        let mut out = FormalSum::zero();
        for ((m1, u), c1) in self.terms.iter() {
            let dx = self.term_degree(m1, *u);
            for ((m2, v), c2) in other.terms.iter() {
                let dy = other.term_degree(m2, *v);
                let c = c1 * c2;
                if let Some((dm, cd)) = co.derive_monomial(m2, *u) {
                    if let Some((p, cp)) = co.mul_monomials(m1, &dm) {
                        out.add_term((p, *v), &c * &(cd * cp));
                    }
                }
                if let Some((dm, cd)) = co.derive_monomial(m1, *v) {
                    if let Some((p, cp)) = co.mul_monomials(m2, &dm) {
                        let mut k = -(&c * &(cd * cp));
                        k.apply_sign(dx * dy);
                        out.add_term((p, *u), k);
                    }
                }
            }
        }
        Ok(self.with_terms(out, self.truncated || other.truncated))
    }

    /// Terms whose direction is `∂/∂t`.
    pub fn horizontal_part(&self) -> TvForm {
        let terms = self
            .terms
            .iter()
            .filter(|((_, v), _)| matches!(v, Var::T(_)))
            .map(|((m, v), c)| ((m.clone(), v.index()), c.clone()))
            .collect();
        TvForm::from_terms(&self.coords, terms)
    }

    pub fn is_vertical(&self) -> bool {
        self.terms.keys().all(|(_, v)| matches!(v, Var::Theta(_)))
    }

    /// Linear part: terms with coefficient of polynomial degree one.
    pub fn taylor_component(&self, degree: usize) -> VectorField {
        let terms = self
            .terms
            .iter()
            .filter(|((m, _), _)| Coordinates::poly_degree(m) == degree)
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        self.with_terms(terms, self.truncated)
    }

    /// Lowest polynomial degree of a coefficient whose term is nonzero.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(m, _)| Coordinates::poly_degree(m)).min()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_zero() {
            return write!(f, "0");
        }
        for (i, ((m, v), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let dir = match v {
                Var::T(a) => format!("∂t{}", a + 1),
                Var::Theta(a) => format!("∂θ{}", a + 1),
            };
            write!(f, "({c})·{}·{dir}", self.coords.render_monomial(m))?;
        }
        Ok(())
    }
}

/// A tangent-valued form on `V̂`: terms `c · f(t) θ^{β…} · ∂/∂t^γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TvForm {
    field: VectorField,
}

impl TvForm {
    pub fn zero(coords: &Arc<Coordinates>) -> Self {
        TvForm {
            field: VectorField::zero(coords),
        }
    }

    pub fn from_terms(coords: &Arc<Coordinates>, terms: FormalSum<(Monomial, usize)>) -> Self {
        let terms = terms.iter().map(|((m, g), c)| ((m.clone(), Var::T(*g)), c.clone())).collect();
        TvForm {
            field: VectorField::from_terms(coords, terms),
        }
    }

    pub fn term(coords: &Arc<Coordinates>, m: Monomial, gamma: usize, c: Scalar) -> Self {
        Self::from_terms(coords, FormalSum::single((m, gamma), c))
    }

    /// `Id = Σ θ^α ∂/∂t^α`, the identity endomorphism as a 1-form.
    pub fn identity(coords: &Arc<Coordinates>) -> Self {
        TvForm {
            field: VectorField::de_rham(coords),
        }
    }

    pub fn coords(&self) -> &Arc<Coordinates> {
        &self.field.coords
    }

    pub fn as_field(&self) -> &VectorField {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, usize, &Scalar)> {
        self.field.terms.iter().map(|((m, v), c)| (m, v.index(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero()
    }

    pub fn truncated(&self) -> bool {
        self.field.truncated
    }

    pub fn degree(&self) -> Option<i64> {
        self.field.degree()
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        Ok(TvForm {
            field: self.field.add(&other.field)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        Ok(TvForm {
            field: self.field.sub(&other.field)?,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TvForm {
            field: self.field.scale(c),
        }
    }

    /// Form degrees present.
    pub fn form_degrees(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms().map(|(m, _, _)| self.coords().theta_degree(m)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Keeps the terms of form degree `p`.
    pub fn form_component(&self, p: usize) -> TvForm {
        let co = self.coords().clone();
        let terms = self
            .terms()
            .filter(|(m, _, _)| co.theta_degree(m) == p)
            .map(|(m, g, c)| ((m.clone(), g), c.clone()))
            .collect();
        TvForm::from_terms(&co, terms)
    }

    /// Whether no coefficient involves `θ`.
    pub fn is_zero_form(&self) -> bool {
        self.form_degrees().iter().all(|&p| p == 0)
    }
}

impl fmt::Display for TvForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.field.fmt(f)
    }
}

/// `[X, Y]` on `M`.
pub fn vf_commutator(x: &VectorField, y: &VectorField) -> Result<VectorField, Error> {
    x.commutator(y)
}

/// The vertical field `f θ^β… ∂/∂θ^γ` attached to `f θ^β… ⊗ ∂/∂t^γ`.
pub fn iota(a: &TvForm) -> VectorField {
    let terms = a
        .field
        .terms
        .iter()
        .map(|((m, v), c)| ((m.clone(), Var::Theta(v.index())), c.clone()))
        .collect();
    a.field.with_terms(terms, a.field.truncated)
}

/// The unique `(X₁, X₂)` with `X = i(X₁) + [d, i(X₂)]`.
pub fn split_vertical(x: &VectorField) -> Result<(TvForm, TvForm), Error> {
    let co = x.coords.clone();
    // the ∂/∂t part of [d, i(Y)] is -(-1)^{|i(Y)|} Y
    let terms = x
        .terms
        .iter()
        .filter(|((_, v), _)| matches!(v, Var::T(_)))
        .map(|((m, v), c)| {
            let deg = x.term_degree(m, *v);
            ((m.clone(), v.index()), c * &Scalar::sign(deg))
        })
        .collect();
    let x2 = TvForm::from_terms(&co, terms);
    let d = VectorField::de_rham(&co);
    let rest = x.sub(&d.commutator(&iota(&x2))?)?;
    if !rest.is_vertical() {
        return Err(Error::Consistency("remainder after splitting is not vertical".into()));
    }
    let terms = rest
        .terms
        .iter()
        .map(|((m, v), c)| ((m.clone(), v.index()), c.clone()))
        .collect();
    let mut x1 = TvForm::from_terms(&co, terms);
    x1.field.truncated |= x.truncated;
    Ok((x1, x2))
}

/// `Ψ(X) = [d, i(X)]`.
pub fn psi(x: &TvForm) -> Result<VectorField, Error> {
    VectorField::de_rham(x.coords()).commutator(&iota(x))
}

/// Contraction `Σ A^γ ∂_{θ^γ}(B^δ) ∂_δ`, i.e. `v₂ ⊗ (ω₁ ∧ v₁⌟ω₂)`.
pub fn nr_contraction(a: &TvForm, b: &TvForm) -> Result<TvForm, Error> {
    a.field.check(&b.field)?;
    let co = a.coords();
    let mut out = FormalSum::zero();
    for (ma, g, ca) in a.terms() {
        for (mb, h, cb) in b.terms() {
            if let Some((dm, cd)) = co.derive_monomial(mb, Var::Theta(g)) {
                if let Some((p, cp)) = co.mul_monomials(ma, &dm) {
                    out.add_term((p, h), &(ca * cb) * &(cd * cp));
                }
            }
        }
    }
    let mut r = TvForm::from_terms(co, out);
    r.field.truncated |= a.truncated() || b.truncated();
    Ok(r)
}

/// Nijenhuis-Richardson composition `A ∘ B = -(-1)^{|iA||iB|} contraction(B, A)`,
/// the `ΠV`-component of `[[d, iA], iB]`.
pub fn nr_product(a: &TvForm, b: &TvForm) -> Result<TvForm, Error> {
    a.field.check(&b.field)?;
    let co = a.coords();
    let mut out = TvForm::zero(co);
    for (ma, g, ca) in a.terms() {
        let ta = TvForm::term(co, ma.clone(), g, ca.clone());
        let da = iota(&ta).degree().expect("single term");
        for (mb, h, cb) in b.terms() {
            let tb = TvForm::term(co, mb.clone(), h, cb.clone());
            let db = iota(&tb).degree().expect("single term");
            out = out.sub(&nr_contraction(&tb, &ta)?.scale(&Scalar::sign(da * db)))?;
        }
    }
    out.field.truncated |= a.truncated() || b.truncated();
    Ok(out)
}

/// `[A, B]_NR`, pulled back from the commutator of vertical fields.
pub fn nr_bracket(a: &TvForm, b: &TvForm) -> Result<TvForm, Error> {
    let c = iota(a).commutator(&iota(b))?;
    let terms = c
        .terms
        .iter()
        .map(|((m, v), k)| ((m.clone(), v.index()), k.clone()))
        .collect();
    let mut r = TvForm::from_terms(a.coords(), terms);
    r.field.truncated |= c.truncated;
    Ok(r)
}

/// Frölicher-Nijenhuis bracket: `[[d, iA], [d, iB]] = [d, i(C)]`, returns `C`.
pub fn fn_bracket(a: &TvForm, b: &TvForm) -> Result<TvForm, Error> {
    let x = psi(a)?.commutator(&psi(b)?)?;
    let (x1, x2) = split_vertical(&x)?;
    if !x1.is_zero() {
        return Err(Error::Consistency(format!("commutator of d-closed fields has vertical part {x1}")));
    }
    Ok(x2)
}

/// `Lie_X Γ` for a vector field `X` on `V̂` given as a 0-form.
pub fn lie_derivative(x: &TvForm, gamma: &TvForm) -> Result<TvForm, Error> {
    if !x.is_zero_form() {
        return Err(Error::Domain("Lie derivative needs a 0-form vector field".into()));
    }
    fn_bracket(x, gamma)
}

fn require_one_form(j: &TvForm) -> Result<(), Error> {
    if j.form_degrees().iter().any(|&p| p != 1) {
        return Err(Error::Domain("endomorphism must be a pure 1-form".into()));
    }
    Ok(())
}

fn require_ungraded(co: &Coordinates) -> Result<(), Error> {
    if co.degrees.iter().any(|&d| d != 0) {
        return Err(Error::Domain("classical Nijenhuis tensor needs V concentrated in degree 0".into()));
    }
    Ok(())
}

/// `J(X)` for a 0-form `X`: contracts `X` into the form slot of `J`.
pub fn apply_endomorphism(j: &TvForm, x: &TvForm) -> Result<TvForm, Error> {
    nr_contraction(x, j)
}

fn classical_bracket(x: &TvForm, y: &TvForm) -> Result<TvForm, Error> {
    Ok(x.field.commutator(&y.field)?.horizontal_part())
}

/// `N_J(X, Y) = [JX, JY] + J²[X, Y] - J[X, JY] - J[JX, Y]`.
pub fn nijenhuis_classical(j: &TvForm, x: &TvForm, y: &TvForm) -> Result<TvForm, Error> {
    require_one_form(j)?;
    if !x.is_zero_form() || !y.is_zero_form() {
        return Err(Error::Domain("arguments must be vector fields on V̂".into()));
    }
    let jx = apply_endomorphism(j, x)?;
    let jy = apply_endomorphism(j, y)?;
    let mut out = classical_bracket(&jx, &jy)?;
    let xy = classical_bracket(x, y)?;
    out = out.add(&apply_endomorphism(j, &apply_endomorphism(j, &xy)?)?)?;
    out = out.sub(&apply_endomorphism(j, &classical_bracket(x, &jy)?)?)?;
    out = out.sub(&apply_endomorphism(j, &classical_bracket(&jx, y)?)?)?;
    Ok(out)
}

/// `Ñ_J = Σ_{α<β} N_J(∂_α, ∂_β) θ^α θ^β`, the classical tensor as a 2-form.
pub fn nijenhuis_form(j: &TvForm) -> Result<TvForm, Error> {
    require_one_form(j)?;
    let co = j.coords().clone();
    require_ungraded(&co)?;
    let mut out = TvForm::zero(&co);
    for a in 0..co.dim() {
        for b in a + 1..co.dim() {
            let da = TvForm::term(&co, co.one(), a, Scalar::one());
            let db = TvForm::term(&co, co.one(), b, Scalar::one());
            let n = nijenhuis_classical(j, &da, &db)?;
            let (theta_ab, s) = co
                .mul_monomials(&co.var(Var::Theta(a)), &co.var(Var::Theta(b)))
                .expect("distinct odd variables");
            for (m, g, c) in n.terms() {
                let (p, cp) = co.mul_monomials(m, &theta_ab).expect("t-only coefficient");
                out = out.add(&TvForm::term(&co, p, g, &(c * &s) * &cp))?;
            }
        }
    }
    Ok(out)
}

/// Outcome of comparing `[J • J]` with the classical tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct FnComparison {
    pub fn_square: TvForm,
    pub classical: TvForm,
    /// `c` with `[J • J] = c · Ñ_J`; `None` when both sides vanish.
    pub constant: Option<Scalar>,
}

/// Computes `[J • J]` and `Ñ_J` and the constant relating them.
pub fn fn_square_vs_classical(j: &TvForm) -> Result<FnComparison, Error> {
    let sq = fn_bracket(j, j)?;
    let cl = nijenhuis_form(j)?;
    let constant = match (sq.is_zero(), cl.is_zero()) {
        (true, true) => None,
        (false, true) | (true, false) => {
            return Err(Error::Consistency("[J•J] and N_J are not proportional".into()));
        }
        (false, false) => {
            let (m, g, c) = cl.terms().next().expect("nonzero");
            let key = (m.clone(), Var::T(g));
            let c = &sq.as_field().terms().coefficient(&key) / c;
            if sq != cl.scale(&c) {
                return Err(Error::Consistency("[J•J] and N_J are not proportional".into()));
            }
            Some(c)
        }
    };
    Ok(FnComparison {
        fn_square: sq,
        classical: cl,
        constant,
    })
}

/// The pre-Lie² algebra of tangent-valued forms modulo weight above `max_weight`,
/// where a term has weight (polynomial degree of its coefficient) − 1 and
/// only weights `≥ 0` are kept. `∘` is the NR product and `[•]` the FN
/// bracket; a basis element has the degree of its image under `iota`.
pub struct TvAlgebra {
    pub coords: Arc<Coordinates>,
    pub basis: Vec<TvForm>,
    index: BTreeMap<(Monomial, usize), usize>,
}

impl TvAlgebra {
    /// `coords.order` must be at least `max_weight + 1`.
    pub fn new(degrees: Vec<i64>, max_weight: usize) -> Self {
        let coords = Coordinates::new(degrees, 2 * max_weight + 2);
        let mut basis = Vec::new();
        let mut index = BTreeMap::new();
        for m in coords.monomials(1, max_weight + 1) {
            for g in 0..coords.dim() {
                index.insert((m.clone(), g), basis.len());
                basis.push(TvForm::term(&coords, m.clone(), g, Scalar::one()));
            }
        }
        TvAlgebra { coords, basis, index }
    }

    fn coordinates(&self, f: &TvForm) -> FormalSum<usize> {
        f.terms()
            .filter_map(|(m, g, c)| self.index.get(&(m.clone(), g)).map(|&i| (i, c.clone())))
            .collect()
    }

    pub fn structure(&self) -> Result<AlgebraStructure, Error> {
        let co = &self.coords;
        let basis = self
            .basis
            .iter()
            .map(|b| {
                let (m, g, _) = b.terms().next().expect("basis term");
                let name = format!("{}∂t{}", co.render_monomial(m), g + 1);
                BasisElement::new(name, iota(b).degree().expect("homogeneous"))
            })
            .collect();
        let mut s = AlgebraStructure::new(basis);
        s.ensure_op(OpKind::Circ);
        s.ensure_op(OpKind::Bullet);
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                s.set_product(OpKind::Circ, i, j, self.coordinates(&nr_product(a, b)?));
                s.set_product(OpKind::Bullet, i, j, self.coordinates(&fn_bracket(a, b)?));
            }
        }
        Ok(s)
    }

    /// Checks that the `ΠV` part of `[[d, iA], iB]` is `A ∘ B` and its `V`
    /// part is `-(-1)^{|A|}[A • B]` on all basis pairs.
    pub fn bracket_decomposition_holds(&self) -> Result<bool, Error> {
        for a in &self.basis {
            let da = iota(a).degree().expect("homogeneous");
            for b in &self.basis {
                let x = psi(a)?.commutator(&iota(b))?;
                let (x1, x2) = split_vertical(&x)?;
                if x2 != nr_product(a, b)? {
                    return Ok(false);
                }
                if x1 != fn_bracket(a, b)?.scale(&-Scalar::sign(da)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Whether `vectors` are linearly independent.
pub fn independent(vectors: &[VectorField]) -> bool {
    let mut e = Echelon::new();
    vectors.iter().all(|v| e.insert(v.terms()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn co(degrees: &[i64], order: usize) -> Arc<Coordinates> {
        Coordinates::new(degrees.to_vec(), order)
    }

    #[test]
    fn de_rham_squares_to_zero() {
        for degrees in [&[0][..], &[0, 1], &[1, -1, 2]] {
            let c = co(degrees, 4);
            let d = VectorField::de_rham(&c);
            assert!(d.commutator(&d).unwrap().is_zero());
            assert_eq!(d.degree(), Some(1));
        }
    }

    #[test]
    fn classical_brackets() {
        let c = co(&[0], 3);
        let dt = VectorField::term(&c, c.one(), Var::T(0), Scalar::one());
        assert!(dt.commutator(&dt).unwrap().is_zero());
        let euler = VectorField::term(&c, c.var(Var::T(0)), Var::T(0), Scalar::one());
        assert_eq!(euler.commutator(&dt).unwrap(), dt.scale(&-Scalar::one()));
    }

    #[test]
    fn iota_is_vertical() {
        let c = co(&[0, 1], 3);
        let a = TvForm::term(&c, c.one(), 0, Scalar::one());
        assert_eq!(iota(&a), VectorField::term(&c, c.one(), Var::Theta(0), Scalar::one()));
        let t1 = c.var(Var::T(1));
        let x = TvForm::term(&c, c.var(Var::Theta(1)), 1, Scalar::from_int(3));
        assert!(iota(&x).apply(&FormalSum::basis(t1)).is_zero());
    }

    #[test]
    fn split_reconstructs() {
        let c = co(&[0, 1], 3);
        let mons = c.monomials(0, 2);
        let mut x = VectorField::zero(&c);
        for (i, m) in mons.iter().enumerate().take(9) {
            let v = if i % 2 == 0 { Var::T(i % 2) } else { Var::Theta(1) };
            x = x.add(&VectorField::term(&c, m.clone(), v, Scalar::from_int(i as i64 + 1))).unwrap();
        }
        let (x1, x2) = split_vertical(&x).unwrap();
        let back = iota(&x1).add(&psi(&x2).unwrap()).unwrap();
        assert_eq!(back, x);
        let d = VectorField::de_rham(&c);
        let (y1, y2) = split_vertical(&d).unwrap();
        assert!(y1.is_zero());
        assert_eq!(psi(&y2).unwrap(), d);
    }

    #[test]
    fn identity_endomorphism() {
        let c = co(&[0, 0], 3);
        let id = TvForm::identity(&c);
        assert_eq!(nr_contraction(&id, &id).unwrap(), id);
        assert_eq!(nr_product(&id, &id).unwrap(), id.scale(&-Scalar::one()));
        assert!(fn_bracket(&id, &id).unwrap().is_zero());
        let x = TvForm::term(&c, c.var(Var::T(1)), 0, Scalar::one());
        let y = TvForm::term(&c, c.var(Var::T(0)), 1, Scalar::from_int(2));
        assert!(nijenhuis_classical(&id, &x, &y).unwrap().is_zero());
        let three = id.scale(&Scalar::from_int(3));
        assert!(nijenhuis_classical(&three, &x, &y).unwrap().is_zero());
    }

    #[test]
    fn zero_forms_bracket_is_lie_bracket() {
        let c = co(&[0], 4);
        let x = TvForm::term(&c, c.var(Var::T(0)), 0, Scalar::one());
        let mut t2 = c.one();
        t2[0] = 2;
        let y = TvForm::term(&c, t2, 0, Scalar::one());
        let lie = x.as_field().commutator(y.as_field()).unwrap().horizontal_part();
        assert_eq!(fn_bracket(&x, &y).unwrap(), lie);
        assert_eq!(lie_derivative(&x, &y).unwrap(), lie);
    }

    #[test]
    fn nr_antisymmetrization_is_commutator() {
        let alg = TvAlgebra::new(alloc::vec![0, 1], 1);
        for a in &alg.basis {
            let da = iota(a).degree().unwrap();
            for b in &alg.basis {
                let db = iota(b).degree().unwrap();
                let anti = nr_product(a, b)
                    .unwrap()
                    .sub(&nr_product(b, a).unwrap().scale(&Scalar::sign(da * db)))
                    .unwrap();
                assert_eq!(anti, nr_bracket(a, b).unwrap());
            }
        }
    }

    fn linear_j(c: &Arc<Coordinates>, k: &[i64]) -> TvForm {
        // J = Σ (k0 + k1 t^0 + k2 t^1) θ^β ∂_γ over (β, γ)
        let mut j = TvForm::zero(c);
        let mut it = k.iter();
        for b in 0..2 {
            for g in 0..2 {
                for m in [c.one(), c.var(Var::T(0)), c.var(Var::T(1))] {
                    let (p, s) = c.mul_monomials(&m, &c.var(Var::Theta(b))).unwrap();
                    let coef = Scalar::from_int(*it.next().unwrap());
                    j = j.add(&TvForm::term(c, p, g, &coef * &s)).unwrap();
                }
            }
        }
        j
    }

    #[test]
    fn fn_square_is_multiple_of_classical() {
        let c = co(&[0, 0], 3);
        let samples: [[i64; 12]; 3] = [
            [1, 2, 0, -1, 0, 3, 2, 1, 1, 0, -2, 1],
            [0, 1, 1, 2, -3, 0, 1, 0, 2, 1, 1, -1],
            [3, 0, -1, 1, 1, 1, 0, 2, 0, -1, 0, 2],
        ];
        let mut seen = Vec::new();
        for k in samples {
            let r = fn_square_vs_classical(&linear_j(&c, &k)).unwrap();
            seen.push(r.constant.expect("nonzero"));
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]), "{seen:?}");
        let id = fn_square_vs_classical(&TvForm::identity(&c)).unwrap();
        assert_eq!(id.constant, None);
    }

    #[test]
    fn nijenhuis_is_tensorial() {
        let c = co(&[0, 0], 4);
        let j = linear_j(&c, &[1, 2, 0, -1, 0, 3, 2, 1, 1, 0, -2, 1]);
        let x = TvForm::term(&c, c.var(Var::T(1)), 0, Scalar::one());
        let y = TvForm::term(&c, c.one(), 1, Scalar::from_int(2));
        let f = c.var(Var::T(0));
        let fx = TvForm::term(&c, c.mul_monomials(&f, &c.var(Var::T(1))).unwrap().0, 0, Scalar::one());
        let lhs = nijenhuis_classical(&j, &fx, &y).unwrap();
        let n = nijenhuis_classical(&j, &x, &y).unwrap();
        let mut rhs = TvForm::zero(&c);
        for (m, g, k) in n.terms() {
            let (p, s) = c.mul_monomials(&f, m).unwrap();
            rhs = rhs.add(&TvForm::term(&c, p, g, k * &s)).unwrap();
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_field_preserves_identity() {
        let c = co(&[0], 4);
        let euler = TvForm::term(&c, c.var(Var::T(0)), 0, Scalar::one());
        assert!(lie_derivative(&euler, &TvForm::identity(&c)).unwrap().is_zero());
    }

    #[test]
    fn nr_zero_forms_vanish() {
        let c = co(&[0], 3);
        let a = TvForm::term(&c, c.var(Var::T(0)), 0, Scalar::one());
        assert!(nr_product(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn tv_algebra_is_prelie2() {
        for degrees in [alloc::vec![0], alloc::vec![1], alloc::vec![0, 1]] {
            let alg = TvAlgebra::new(degrees.clone(), if degrees.len() == 1 { 2 } else { 1 });
            assert!(alg.bracket_decomposition_holds().unwrap(), "{degrees:?}");
            let s = alg.structure().unwrap();
            s.validate().unwrap();
            let r = crate::algebra::check_prelie2(&s).unwrap();
            assert!(r.is_empty(), "{degrees:?}: {}", r.violations[0]);
        }
    }
}
