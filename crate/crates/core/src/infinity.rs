//! Homotopy structures `μ_{k,p}` and their geometric picture: the vector
//! field `ð`, the tangent-valued form `Γ`, the Maurer-Cartan equations and the
//! lift `ð̂ = Ψ(ð + Γ)` to `M = T[1]V̂`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{AlgebraStructure, BasisElement, OpKind, Vector};
use crate::geometry::{self, Coordinates, TvForm, Var, VectorField};
use crate::linalg::SparseMatrix;
use crate::operad::{cobar_generator_unary, evaluate_sum, CobarVariant, Operations};
use crate::sign::sort_with_parity;
use crate::{Error, FormalSum, Scalar};

/// Sorted symmetric block, sorted antisymmetric block.
pub type MuKey = (Vec<usize>, Vec<usize>);

/// Structure constants of `μ_{k,p}: ⊙^k V ⊗ ∧^p V → V[1-p]`, stored on
/// sorted inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct MuCollection {
    pub basis: Vec<BasisElement>,
    pub variant: CobarVariant,
    maps: BTreeMap<MuKey, Vector>,
}

impl MuCollection {
    pub fn new(basis: Vec<BasisElement>, variant: CobarVariant) -> Self {
        MuCollection {
            basis,
            variant,
            maps: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MuKey, &Vector)> {
        self.maps.iter()
    }

    /// Largest `k + p` present.
    pub fn max_arity(&self) -> usize {
        self.maps.keys().map(|(s, a)| s.len() + a.len()).max().unwrap_or(0)
    }

    /// Sorts the blocks; `None` if the symmetries force the value to vanish.
    pub fn normalize(&self, sym: &[usize], anti: &[usize]) -> Option<(MuKey, Scalar)> {
        let mut s = sym.to_vec();
        let mut a = anti.to_vec();
        let mut odd = sort_with_parity(&mut s, |&i| self.degree(i));
        odd ^= sort_with_parity(&mut a, |&i| self.degree(i));
        let mut labels: Vec<usize> = (0..a.len()).collect();
        let mut order: Vec<(usize, usize)> = anti.iter().copied().zip(0..).collect();
        order.sort();
        labels.iter_mut().zip(&order).for_each(|(l, o)| *l = o.1);
        odd ^= sort_with_parity(&mut labels, |_| 1);
        if s.windows(2).any(|w| w[0] == w[1] && self.degree(w[0]) & 1 == 1) {
            return None;
        }
        if a.windows(2).any(|w| w[0] == w[1] && self.degree(w[0]) & 1 == 0) {
            return None;
        }
        Some(((s, a), if odd { -Scalar::one() } else { Scalar::one() }))
    }

    /// Sets `μ(sym; anti) = v`, extending by the symmetries.
    pub fn set(&mut self, sym: &[usize], anti: &[usize], v: Vector) -> Result<(), Error> {
        if sym.len() < self.variant.min_symmetric() {
            return Err(Error::Domain(format!(
                "μ_{{0,{}}} is not part of a pre-Lie²∞ structure",
                anti.len()
            )));
        }
        if sym.len() + anti.len() == 0 {
            return Err(Error::Domain("μ_{0,0} is not allowed".into()));
        }
        if sym.iter().chain(anti).any(|&i| i >= self.dim()) || v.keys().any(|&i| i >= self.dim()) {
            return Err(Error::Structure("μ refers to a missing basis element".into()));
        }
        let want: i64 = sym.iter().chain(anti).map(|&i| self.degree(i)).sum::<i64>() + 1 - anti.len() as i64;
        if let Some(&k) = v.keys().find(|&&k| self.degree(k) != want) {
            return Err(Error::Structure(format!(
                "μ_{{{},{}}} lands on {} of degree {}, expected {}",
                sym.len(),
                anti.len(),
                self.basis[k].name,
                self.degree(k),
                want
            )));
        }
        match self.normalize(sym, anti) {
            None if v.is_zero() => Ok(()),
            None => Err(Error::Structure(format!(
                "μ_{{{},{}}} must vanish on repeated inputs {sym:?}; {anti:?}",
                sym.len(),
                anti.len()
            ))),
            Some((key, sign)) => {
                let v = v.scaled(&sign);
                if v.is_zero() {
                    self.maps.remove(&key);
                } else {
                    self.maps.insert(key, v);
                }
                Ok(())
            }
        }
    }

    pub fn get(&self, sym: &[usize], anti: &[usize]) -> Vector {
        match self.normalize(sym, anti) {
            None => Vector::zero(),
            Some((key, sign)) => self.maps.get(&key).map_or_else(Vector::zero, |v| v.scaled(&sign)),
        }
    }

    /// `μ_{1,1}(a; b) = a ∘ b`, `μ_{2,0}(a, b) = (-1)^{|a|}[a • b]` and,
    /// for N∞, `μ_{0,2}(a, b) = (-1)^{|a|} a ⋆ b`.
    pub fn from_binary(s: &AlgebraStructure, variant: CobarVariant) -> Result<Self, Error> {
        let mut mu = MuCollection::new(s.basis.clone(), variant);
        for a in 0..s.dim() {
            for b in 0..s.dim() {
                let sa = Scalar::sign(s.degree(a));
                if s.has_op(OpKind::Circ) {
                    mu.set(&[a], &[b], s.product(OpKind::Circ, a, b))?;
                }
                if s.has_op(OpKind::Bullet) && a <= b {
                    mu.set(&[a, b], &[], s.product(OpKind::Bullet, a, b).scaled(&sa))?;
                }
                if variant == CobarVariant::NInfinity && s.has_op(OpKind::Star) && a <= b {
                    mu.set(&[], &[a, b], s.product(OpKind::Star, a, b).scaled(&sa))?;
                }
            }
        }
        Ok(mu)
    }
}

impl Operations for MuCollection {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn basis_degree(&self, i: usize) -> i64 {
        self.degree(i)
    }

    fn operation(&self, k: usize, _p: usize, inputs: &[usize]) -> Result<Vector, Error> {
        Ok(self.get(&inputs[..k], &inputs[k..]))
    }
}

/// `ε = Σ_i |e_{α_i}|(1 + Σ_{j≤i} |e_{α_j}|)` for `ð`.
pub fn epsilon_vector_field(alpha: &[i64]) -> i64 {
    let mut partial = 0;
    let mut e = 0;
    for &a in alpha {
        partial += a;
        e += a * (1 + partial);
    }
    e
}

/// `ε = Σ_i |e_{α_i}|(2 - p + Σ_{j≤i} |e_{α_j}|) + Σ_i (|e_{β_i}| + 1) Σ_{j>i} |e_{β_j}|`
/// for `Γ_p`.
pub fn epsilon_form(alpha: &[i64], beta: &[i64]) -> i64 {
    let p = beta.len() as i64;
    let mut partial = 0;
    let mut e = 0;
    for &a in alpha {
        partial += a;
        e += a * (2 - p + partial);
    }
    for i in 0..beta.len() {
        e += (beta[i] + 1) * beta[i + 1..].iter().sum::<i64>();
    }
    e
}

/// `(ð, Γ)` on coordinates truncated at polynomial degree `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct DgManifoldPair {
    pub coords: Arc<Coordinates>,
    pub eth: TvForm,
    pub gamma: TvForm,
}

impl DgManifoldPair {
    pub fn order(&self) -> usize {
        self.coords.order
    }

    /// `ð + Γ`.
    pub fn total(&self) -> Result<TvForm, Error> {
        self.eth.add(&self.gamma)
    }
}

fn factorial(n: usize) -> Scalar {
    Scalar::from_int((1..=n as i64).product())
}

fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut u = t.clone();
                    u.push(i);
                    u
                })
            })
            .collect();
    }
    out
}

fn ordered_monomial(co: &Coordinates, vars: &[Var]) -> Option<(geometry::Monomial, Scalar)> {
    let mut m = co.one();
    let mut sign = Scalar::one();
    for &v in vars {
        let (n, s) = co.mul_monomials(&m, &co.var(v))?;
        m = n;
        sign *= s;
    }
    Some((m, sign))
}

/// Variable order of the monomial and sign exponent for the term
/// `μ^γ_{α…, β…}`.
fn standard_convention(alpha: &[usize], beta: &[usize], da: &[i64], db: &[i64]) -> (Vec<Var>, i64) {
    let vars = alpha
        .iter()
        .rev()
        .map(|&a| Var::T(a))
        .chain(beta.iter().rev().map(|&b| Var::Theta(b)))
        .collect();
    let eps = if beta.is_empty() {
        epsilon_vector_field(da)
    } else {
        epsilon_form(da, db) + da.iter().sum::<i64>()
    };
    (vars, eps)
}

/// The term `Σ (1/k!p!) (-1)^ε t^{α…} θ^{β…} μ^γ_{α…,β…} ∂_γ` over all ordered
/// index tuples, for one arity `(k, p)`.
fn assemble_arity<C: Fn(&[usize], &[usize], &[i64], &[i64]) -> (Vec<Var>, i64) + ?Sized>(mu: &MuCollection, co: &Arc<Coordinates>, k: usize, p: usize, conv: &C) -> TvForm {
    let n = mu.dim();
    let norm = (factorial(k) * factorial(p)).recip().expect("nonzero");
    let mut out = FormalSum::zero();
    for alpha in tuples(n, k) {
        for beta in tuples(n, p) {
            let v = mu.get(&alpha, &beta);
            if v.is_zero() {
                continue;
            }
            let da: Vec<i64> = alpha.iter().map(|&i| mu.degree(i)).collect();
            let db: Vec<i64> = beta.iter().map(|&i| mu.degree(i)).collect();
            let (vars, eps) = conv(&alpha, &beta, &da, &db);
            let Some((m, s)) = ordered_monomial(co, &vars) else {
                continue;
            };
            let mut c = &norm * &s;
            c.apply_sign(eps);
            for (g, x) in v.iter() {
                out.add_term((m.clone(), *g), &c * x);
            }
        }
    }
    TvForm::from_terms(co, out)
}

/// Arities `(k, p)` with `1 ≤ k + p ≤ order` allowed by the variant.
pub fn arities(variant: CobarVariant, order: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in 1..=order {
        for k in variant.min_symmetric()..=n {
            out.push((k, n - k));
        }
    }
    out
}

/// Builds `ð` from `μ_{k,0}` and `Γ = Σ Γ_p` from `μ_{k,p≥1}`, keeping
/// arities up to `order`.
pub fn assemble(mu: &MuCollection, order: usize) -> Result<DgManifoldPair, Error> {
    let co = Coordinates::new(mu.degrees(), order);
    let mut eth = TvForm::zero(&co);
    let mut gamma = TvForm::zero(&co);
    for (k, p) in arities(mu.variant, order) {
        let part = assemble_arity(mu, &co, k, p, &standard_convention);
        if p == 0 {
            eth = eth.add(&part)?;
        } else {
            gamma = gamma.add(&part)?;
        }
    }
    Ok(DgManifoldPair { coords: co, eth, gamma })
}

/// Inverse of `assemble` on the arities it keeps.
pub fn disassemble(pair: &DgManifoldPair, basis: Vec<BasisElement>, variant: CobarVariant) -> Result<MuCollection, Error> {
    disassemble_with(pair, basis, variant, &standard_convention)
}

fn disassemble_with<C: Fn(&[usize], &[usize], &[i64], &[i64]) -> (Vec<Var>, i64) + ?Sized>(
    pair: &DgManifoldPair,
    basis: Vec<BasisElement>,
    variant: CobarVariant,
    conv: &C,
) -> Result<MuCollection, Error> {
    let co = &pair.coords;
    let total = pair.total()?;
    let mut mu = MuCollection::new(basis, variant);
    let mut unit = MuCollection::new(mu.basis.clone(), variant);
    let mut seen: BTreeMap<(geometry::Monomial, usize), ()> = BTreeMap::new();
    for (m, g, _) in total.terms() {
        if seen.insert((m.clone(), g), ()).is_some() {
            continue;
        }
        let mut sym = Vec::new();
        let mut anti = Vec::new();
        for a in 0..co.dim() {
            for _ in 0..m[a] {
                sym.push(a);
            }
            for _ in 0..m[co.dim() + a] {
                anti.push(a);
            }
        }
        if sym.len() < variant.min_symmetric() {
            return Err(Error::Domain("constant-in-t term in a pre-Lie²∞ pair".into()));
        }
        // coefficient produced by a unit structure constant on this key
        unit.maps.clear();
        unit.maps.insert((sym.clone(), anti.clone()), FormalSum::basis(g));
        let probe = assemble_arity(&unit, co, sym.len(), anti.len(), conv);
        let key = (m.clone(), Var::T(g));
        let c = probe.as_field().terms().coefficient(&key);
        let Some(inv) = c.recip() else {
            return Err(Error::Consistency(format!("assembly loses the constant μ{sym:?};{anti:?}")));
        };
        let value = &total.as_field().terms().coefficient(&key) * &inv;
        let mut v = mu.get(&sym, &anti);
        v.add_term(g, value);
        mu.maps.insert((sym, anti), v);
    }
    mu.maps.retain(|_, v| !v.is_zero());
    Ok(mu)
}

/// `exp(ad_Y)(ð + Γ)` for a degree-zero `Y` whose coefficients have
/// polynomial degree at least two.
pub fn gauge(pair: &DgManifoldPair, y: &TvForm) -> Result<DgManifoldPair, Error> {
    if y.degree() != Some(0) && !y.is_zero() {
        return Err(Error::Domain("gauge parameter must have degree 0".into()));
    }
    if y.terms().any(|(m, _, _)| Coordinates::poly_degree(m) < 2) {
        return Err(Error::Domain("gauge parameter must vanish to second order".into()));
    }
    let mut total = pair.total()?;
    let mut term = total.clone();
    for n in 1.. {
        term = geometry::fn_bracket(y, &term)?.scale(&Scalar::ratio(1, n));
        if term.is_zero() {
            break;
        }
        total = total.add(&term)?;
    }
    let eth = total.form_component(0);
    let gamma = total.sub(&eth)?;
    Ok(DgManifoldPair {
        coords: pair.coords.clone(),
        eth,
        gamma,
    })
}

/// Random degree-zero gauge parameter with quadratic coefficients; 1-form
/// terms are included when `forms` is set.
pub fn random_gauge_parameter(co: &Arc<Coordinates>, seed: u64, forms: bool) -> TvForm {
    use rand::Rng;
    let mut r = crate::samples::rng(seed);
    let mut terms = FormalSum::zero();
    for m in co.monomials(2, 2) {
        let p = co.theta_degree(&m);
        if co.t_degree(&m) == 0 || p > usize::from(forms) {
            continue;
        }
        for g in 0..co.dim() {
            if co.monomial_degree(&m) + co.degrees[g] == 0 && r.gen_bool(0.6) {
                terms.add_term((m.clone(), g), Scalar::from_int(r.gen_range(-2..=2)));
            }
        }
    }
    TvForm::from_terms(co, terms)
}

/// Components of a tangent-valued form by (t-degree, θ-degree).
pub fn components(f: &TvForm) -> BTreeMap<(usize, usize), usize> {
    let co = f.coords();
    let mut out = BTreeMap::new();
    for (m, _, _) in f.terms() {
        *out.entry((co.t_degree(m), co.theta_degree(m))).or_insert(0) += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct McReport {
    /// Truncation: polynomial degree kept.
    pub order: usize,
    /// `[ð, ð]`, valid up to polynomial degree `order`.
    pub eth_square: TvForm,
    /// `Lie_ð Γ + ½[Γ • Γ]`, valid up to polynomial degree `order`.
    pub gamma_equation: TvForm,
}

impl McReport {
    pub fn passed(&self) -> bool {
        self.eth_square.is_zero() && self.gamma_equation.is_zero()
    }

    /// Nonzero arities `(k, p)` of the combined equation.
    pub fn failing_arities(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = components(&self.eth_square)
            .into_keys()
            .chain(components(&self.gamma_equation).into_keys())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn witness(&self) -> Option<String> {
        let f = if self.eth_square.is_zero() {
            &self.gamma_equation
        } else {
            &self.eth_square
        };
        let (m, g, c) = f.terms().next()?;
        Some(format!("({c})·{}·∂t{}", f.coords().render_monomial(m), g + 1))
    }
}

/// Keeps terms of polynomial degree at most `order`, where the equations are
/// complete.
fn complete_part(f: &TvForm, order: usize) -> TvForm {
    let co = f.coords().clone();
    let terms = f
        .terms()
        .filter(|(m, _, _)| Coordinates::poly_degree(m) <= order)
        .map(|(m, g, c)| ((m.clone(), g), c.clone()))
        .collect();
    TvForm::from_terms(&co, terms)
}

/// `[ð, ð] = 0` and `Lie_ð Γ + ½[Γ • Γ] = 0` modulo polynomial degree `> order`.
pub fn check_maurer_cartan(pair: &DgManifoldPair) -> Result<McReport, Error> {
    let order = pair.order();
    let sq = geometry::fn_bracket(&pair.eth, &pair.eth)?;
    let lie = geometry::lie_derivative(&pair.eth, &pair.gamma)?;
    let gg = geometry::fn_bracket(&pair.gamma, &pair.gamma)?;
    let half = Scalar::ratio(1, 2);
    let eq = lie.add(&gg.scale(&half))?;
    Ok(McReport {
        order,
        eth_square: complete_part(&sq, order),
        gamma_equation: complete_part(&eq, order),
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuadraticReport {
    pub checked: Vec<(usize, usize)>,
    /// Generators whose relation does not vanish, with a witness input
    /// tuple and the value there.
    pub failures: Vec<((usize, usize), Vec<usize>, Vector)>,
}

impl QuadraticReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failing_arities(&self) -> Vec<(usize, usize)> {
        self.failures.iter().map(|f| f.0).collect()
    }
}

/// Evaluates the cobar differential of every generator of arity
/// `1..=max_arity` (the arity-one generators carry the differential of `V`).
pub fn quadratic_relations_check(mu: &MuCollection, max_arity: usize) -> Result<QuadraticReport, Error> {
    let mut report = QuadraticReport::default();
    for (k, p) in arities(mu.variant, max_arity) {
        let d = cobar_generator_unary(k, p, mu.variant)?;
        let values = evaluate_sum(&d, mu)?;
        report.checked.push((k, p));
        if let Some((inputs, v)) = values.into_iter().next() {
            report.failures.push(((k, p), inputs, v));
        }
    }
    Ok(report)
}

/// `ð̂ = Ψ(ð + Γ) = [d, i(ð + Γ)]`.
pub fn psi_lift(pair: &DgManifoldPair) -> Result<VectorField, Error> {
    geometry::psi(&pair.total()?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftReport {
    pub order: usize,
    /// `[ð̂, ð̂]` below polynomial degree `order`.
    pub square: VectorField,
    /// `[d, ð̂]`.
    pub commutator_with_d: VectorField,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        self.square.is_zero() && self.commutator_with_d.is_zero()
    }
}

fn field_below(f: &VectorField, order: usize) -> VectorField {
    let terms = f
        .terms()
        .iter()
        .filter(|((m, _), _)| Coordinates::poly_degree(m) <= order)
        .map(|(k, c)| (k.clone(), c.clone()))
        .collect();
    VectorField::from_terms(f.coords(), terms)
}

/// `[ð̂, ð̂] = 0` and `[d, ð̂] = 0` modulo polynomial degree `> order`.
pub fn check_lift(lift: &VectorField) -> Result<LiftReport, Error> {
    let order = lift.coords().order;
    let d = VectorField::de_rham(lift.coords());
    Ok(LiftReport {
        order,
        square: field_below(&lift.commutator(lift)?, order),
        commutator_with_d: d.commutator(lift)?,
    })
}

/// `ð̂ I ⊂ I²`: no coefficient of `ð̂` has polynomial degree below two.
pub fn is_minimal(pair: &DgManifoldPair) -> Result<bool, Error> {
    Ok(psi_lift(pair)?.lowest_degree().is_none_or(|d| d >= 2))
}

/// Matrix of a field's linear part acting on the coordinate functions.
fn linear_matrix(f: &VectorField) -> SparseMatrix {
    let co = f.coords();
    let n = 2 * co.dim();
    let var = |s: usize| if s < co.dim() { Var::T(s) } else { Var::Theta(s - co.dim()) };
    let mut columns = vec![FormalSum::zero(); n];
    for ((m, v), c) in f.terms().iter() {
        if Coordinates::poly_degree(m) != 1 {
            continue;
        }
        let src = m.iter().position(|&e| e == 1).expect("linear monomial");
        let target = (0..n).find(|&s| var(s) == *v).expect("variable");
        // f = c · x_src ∂_target sends the coordinate x_target to c · x_src
        columns[target].add_term(src, c.clone());
    }
    SparseMatrix { rows: n, columns }
}

/// Whether the linear part of `field`, as a differential on coordinate
/// functions, squares to zero and has no cohomology.
pub fn linear_part_acyclic(field: &VectorField) -> bool {
    let m = linear_matrix(field);
    m.compose(&m).is_zero() && 2 * m.rank() == m.cols()
}

/// Exactly linear with acyclic linear part.
pub fn is_linear_contractible(field: &VectorField) -> bool {
    field.terms().keys().all(|(m, _)| Coordinates::poly_degree(m) == 1) && linear_part_acyclic(field)
}

fn require_degree_zero(co: &Coordinates) -> Result<(), Error> {
    if co.degrees.iter().any(|&d| d != 0) {
        return Err(Error::Domain("V must be concentrated in degree 0".into()));
    }
    Ok(())
}

/// `e_α ∘ e_β = Σ J^γ_{αβ} e_γ` for `J = Σ J^γ_{αβ} t^α θ^β ∂_γ`.
pub fn prelie_from_linear_j(j: &TvForm) -> Result<AlgebraStructure, Error> {
    let co = j.coords();
    require_degree_zero(co)?;
    let n = co.dim();
    let basis = (0..n).map(|i| BasisElement::new(format!("e{}", i + 1), 0)).collect();
    let mut s = AlgebraStructure::new(basis);
    s.ensure_op(OpKind::Circ);
    for (m, g, c) in j.terms() {
        if co.t_degree(m) != 1 || co.theta_degree(m) != 1 {
            return Err(Error::Domain("J must be linear in t and a 1-form".into()));
        }
        let a = (0..n).find(|&a| m[a] == 1).expect("t index");
        let b = (0..n).find(|&b| m[n + b] == 1).expect("θ index");
        s.add_to(OpKind::Circ, a, b, g, c.clone());
    }
    Ok(s)
}

/// Inverse of `prelie_from_linear_j`, on coordinates truncated at `order ≥ 3`
/// so that `N_J` is visible.
pub fn linear_j_from_prelie(s: &AlgebraStructure, order: usize) -> Result<TvForm, Error> {
    s.require(OpKind::Circ)?;
    if s.basis.iter().any(|b| b.degree != 0) {
        return Err(Error::Domain("V must be concentrated in degree 0".into()));
    }
    let co = Coordinates::new(vec![0; s.dim()], order.max(3));
    let mut j = TvForm::zero(&co);
    for (&(a, b), v) in s.entries(OpKind::Circ) {
        let (m, sign) = co.mul_monomials(&co.var(Var::T(a)), &co.var(Var::Theta(b))).expect("distinct variables");
        for (g, c) in v.iter() {
            j = j.add(&TvForm::term(&co, m.clone(), *g, c * &sign))?;
        }
    }
    Ok(j)
}


fn multisets(n: usize, len: usize) -> Vec<Vec<usize>> {
    tuples(n, len).into_iter().filter(|t| t.windows(2).all(|w| w[0] <= w[1])).collect()
}

/// Random constants for every arity up to `order`, respecting degrees and
/// symmetries but no relations.
pub fn random_collection(seed: u64, degrees: &[i64], variant: CobarVariant, order: usize, density: f64) -> MuCollection {
    use rand::Rng;
    let mut r = crate::samples::rng(seed);
    let basis = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| BasisElement::new(format!("e{}", i + 1), d))
        .collect();
    let mut mu = MuCollection::new(basis, variant);
    for (k, p) in arities(variant, order) {
        for sym in multisets(mu.dim(), k) {
            for anti in multisets(mu.dim(), p) {
                if mu.normalize(&sym, &anti).is_none() {
                    continue;
                }
                let want = sym.iter().chain(&anti).map(|&i| mu.degree(i)).sum::<i64>() + 1 - p as i64;
                let mut v = Vector::zero();
                for g in (0..mu.dim()).filter(|&g| mu.degree(g) == want) {
                    if r.gen_bool(density) {
                        v.add_term(g, Scalar::from_int(r.gen_range(-2..=2)));
                    }
                }
                mu.set(&sym, &anti, v).expect("constants respect degrees");
            }
        }
    }
    mu
}

/// Seeded collections on at most two generators mixing random constants
/// (almost always failing) with gauge transforms of valid structures
/// (always passing), all of arity at most `order`.
pub fn maurer_cartan_samples(seed: u64, count: usize, order: usize) -> Result<Vec<MuCollection>, Error> {
    const DEGREES: [&[i64]; 5] = [&[1], &[0, 0], &[0, 1], &[1, -1], &[-1, 0]];
    let variant = |i: usize| {
        if i.is_multiple_of(2) {
            CobarVariant::PInfinity
        } else {
            CobarVariant::NInfinity
        }
    };
    (0..count)
        .map(|i| {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
            match i % 4 {
                0 | 1 => Ok(random_collection(s, DEGREES[i / 4 % 5], variant(i / 4), order, 0.35)),
                2 => {
                    let ring = crate::samples::random_prelie(s, 2);
                    let mu = MuCollection::from_binary(&ring, CobarVariant::NInfinity)?;
                    gauged(&mu, order, s)
                }
                _ => {
                    let basis = vec![BasisElement::new("e", 0), BasisElement::new("f", 1)];
                    let mut mu = MuCollection::new(basis, variant(i / 4));
                    mu.set(&[0], &[], Vector::basis(1))?;
                    gauged(&mu, order, s)
                }
            }
        })
        .collect()
}

fn gauged(mu: &MuCollection, order: usize, seed: u64) -> Result<MuCollection, Error> {
    let pair = assemble(mu, order)?;
    let y = random_gauge_parameter(&pair.coords, seed, true);
    disassemble(&gauge(&pair, &y)?, mu.basis.clone(), mu.variant)
}
