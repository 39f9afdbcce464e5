//! Finite graded algebras given by structure constants, the identity
//! checkers for pre-Lie², N-algebras and their Koszul duals, and the
//! dg Lie algebra `V ⊕ ΠV` attached to a structure.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::Echelon;
use crate::operad::{dual_relations, DualVariant};
use crate::{Error, FormalSum, Scalar};

/// A vector in a finite basis, by basis index.
pub type Vector = FormalSum<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        BasisElement {
            name: name.into(),
            degree,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    Circ,
    Bullet,
    Star,
}

impl OpKind {
    pub const ALL: [OpKind; 3] = [OpKind::Circ, OpKind::Bullet, OpKind::Star];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Circ => "circ",
            OpKind::Bullet => "bullet",
            OpKind::Star => "star",
        }
    }

    pub fn from_name(name: &str) -> Option<OpKind> {
        OpKind::ALL.into_iter().find(|k| k.name() == name)
    }

    fn symbol(self) -> &'static str {
        match self {
            OpKind::Circ => "∘",
            OpKind::Bullet => "•",
            OpKind::Star => "⋆",
        }
    }
}

/// Which operad the operations belong to. This fixes operation degrees and
/// the symmetry each operation must have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `∘` of degree 0, `[•]` of degree 1, `⋆` of degree -1.
    Direct,
    /// Koszul dual side: `∘` of degree 0, `•` of degree -1, `⋆` of degree 1,
    /// no symmetry imposed.
    Dual,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraStructure {
    pub basis: Vec<BasisElement>,
    pub flavor: Flavor,
    ops: BTreeMap<OpKind, BTreeMap<(usize, usize), Vector>>,
}

fn e(i: usize) -> Vector {
    FormalSum::basis(i)
}

fn sg(exponent: i64) -> Scalar {
    Scalar::sign(exponent)
}

impl AlgebraStructure {
    pub fn new(basis: Vec<BasisElement>) -> Self {
        AlgebraStructure {
            basis,
            flavor: Flavor::Direct,
            ops: BTreeMap::new(),
        }
    }

    pub fn new_dual(basis: Vec<BasisElement>) -> Self {
        AlgebraStructure {
            flavor: Flavor::Dual,
            ..Self::new(basis)
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn op_degree(&self, op: OpKind) -> i64 {
        match (self.flavor, op) {
            (_, OpKind::Circ) => 0,
            (Flavor::Direct, OpKind::Bullet) | (Flavor::Dual, OpKind::Star) => 1,
            (Flavor::Direct, OpKind::Star) | (Flavor::Dual, OpKind::Bullet) => -1,
        }
    }

    pub fn has_op(&self, op: OpKind) -> bool {
        self.ops.contains_key(&op)
    }

    /// Declares `op` (with all constants zero if it was absent).
    pub fn ensure_op(&mut self, op: OpKind) {
        self.ops.entry(op).or_default();
    }

    pub fn remove_op(&mut self, op: OpKind) {
        self.ops.remove(&op);
    }

    /// Sets the coefficient of `e_k` in `op(e_i, e_j)`.
    pub fn set(&mut self, op: OpKind, i: usize, j: usize, k: usize, c: Scalar) {
        let slot = self.ops.entry(op).or_default().entry((i, j)).or_default();
        let old = slot.coefficient(&k);
        slot.add_term(k, c - old);
        if slot.is_zero() {
            self.ops.get_mut(&op).expect("just inserted").remove(&(i, j));
        }
    }

    /// Adds `c · e_k` to `op(e_i, e_j)`.
    pub fn add_to(&mut self, op: OpKind, i: usize, j: usize, k: usize, c: Scalar) {
        let table = self.ops.entry(op).or_default();
        let slot = table.entry((i, j)).or_default();
        slot.add_term(k, c);
        if slot.is_zero() {
            table.remove(&(i, j));
        }
    }

    pub fn set_product(&mut self, op: OpKind, i: usize, j: usize, v: Vector) {
        let table = self.ops.entry(op).or_default();
        if v.is_zero() {
            table.remove(&(i, j));
        } else {
            table.insert((i, j), v);
        }
    }

    /// `op(e_i, e_j)`.
    pub fn product(&self, op: OpKind, i: usize, j: usize) -> Vector {
        self.ops
            .get(&op)
            .and_then(|t| t.get(&(i, j)))
            .cloned()
            .unwrap_or_default()
    }

    /// Bilinear extension of `op`.
    pub fn mul(&self, op: OpKind, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&self.product(op, *i, *j), &(a * b));
            }
        }
        out
    }

    /// Nonzero structure constants `(i, j) ↦ op(e_i, e_j)`.
    pub fn entries(&self, op: OpKind) -> impl Iterator<Item = (&(usize, usize), &Vector)> {
        self.ops.get(&op).into_iter().flat_map(|t| t.iter())
    }

    pub fn ops(&self) -> impl Iterator<Item = OpKind> + '_ {
        self.ops.keys().copied()
    }

    pub fn vector_degree(&self, v: &Vector) -> Option<i64> {
        let mut it = v.keys().map(|&k| self.degree(k));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn render(&self, v: &Vector) -> String {
        render_vector(v, |i| self.basis[i].name.clone())
    }

    pub fn require(&self, op: OpKind) -> Result<(), Error> {
        if self.has_op(op) {
            Ok(())
        } else {
            Err(Error::MissingOperation(op.name().into()))
        }
    }

    /// Checks degrees of all constants and the declared symmetries of `[•]`
    /// and `⋆` (direct flavor only).
    pub fn validate(&self) -> Result<(), Error> {
        for op in self.ops() {
            for (&(i, j), v) in self.entries(op) {
                if i >= self.dim() || j >= self.dim() || v.keys().any(|&k| k >= self.dim()) {
                    return Err(Error::Structure(format!("{} constant refers to a missing basis element", op.name())));
                }
                let want = self.degree(i) + self.degree(j) + self.op_degree(op);
                if let Some(&k) = v.keys().find(|&&k| self.degree(k) != want) {
                    return Err(Error::Structure(format!(
                        "{}({}, {}) has a component on {} of degree {}, expected {}",
                        op.name(),
                        self.basis[i].name,
                        self.basis[j].name,
                        self.basis[k].name,
                        self.degree(k),
                        want
                    )));
                }
            }
        }
        if self.flavor == Flavor::Direct {
            let mut report = ViolationReport::default();
            self.symmetry_violations(&mut report);
            if let Some(v) = report.violations.first() {
                return Err(Error::Structure(format!(
                    "{} fails on ({})",
                    v.identity,
                    v.witness.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn symmetry_violations(&self, report: &mut ViolationReport) {
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                let (da, db) = (self.degree(a), self.degree(b));
                if self.has_op(OpKind::Bullet) {
                    let lhs = self.product(OpKind::Bullet, a, b);
                    let rhs = self.product(OpKind::Bullet, b, a).scaled(&-sg((da + 1) * (db + 1)));
                    report.record(self, "bullet-symmetry", &[a, b], lhs, rhs);
                }
                if self.has_op(OpKind::Star) {
                    let lhs = self.product(OpKind::Star, a, b);
                    let rhs = self.product(OpKind::Star, b, a).scaled(&-sg(da * db + da + db));
                    report.record(self, "star-symmetry", &[a, b], lhs, rhs);
                }
            }
        }
    }
}

pub(crate) fn render_vector(v: &Vector, name: impl Fn(usize) -> String) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (k, c)) in v.iter().enumerate() {
        if n > 0 {
            out.push_str(" + ");
        }
        if c.is_one() {
            out.push_str(&name(*k));
        } else {
            out.push_str(&format!("({c})·{}", name(*k)));
        }
    }
    out
}

/// One failing instance of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: String,
    pub witness: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at ({}): lhs = {}, rhs = {}",
            self.identity,
            self.witness.join(", "),
            self.lhs,
            self.rhs
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
    /// Number of identity instances evaluated.
    pub checked: usize,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.is_empty()
    }

    pub fn merge(&mut self, other: ViolationReport) {
        self.violations.extend(other.violations);
        self.checked += other.checked;
    }

    /// Records `lhs = rhs` for the basis witness `w`.
    fn record(&mut self, s: &AlgebraStructure, identity: &str, w: &[usize], lhs: Vector, rhs: Vector) {
        self.record_named(identity, w.iter().map(|&i| s.basis[i].name.clone()).collect(), lhs, rhs, |k| {
            s.basis[k].name.clone()
        });
    }

    pub(crate) fn record_named(
        &mut self,
        identity: &str,
        witness: Vec<String>,
        lhs: Vector,
        rhs: Vector,
        name: impl Fn(usize) -> String,
    ) {
        self.checked += 1;
        if lhs != rhs {
            self.violations.push(Violation {
                identity: identity.into(),
                witness,
                lhs: render_vector(&lhs, &name),
                rhs: render_vector(&rhs, &name),
            });
        }
    }

    pub fn identities_failed(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.violations.iter().map(|v| v.identity.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        names
    }
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
}

fn prelie_into(s: &AlgebraStructure, report: &mut ViolationReport) {
    use OpKind::Circ;
    for (a, b, c) in triples(s.dim()) {
        let m = |x: &Vector, y: &Vector| s.mul(Circ, x, y);
        let (ea, eb, ec) = (e(a), e(b), e(c));
        let lhs = m(&m(&ea, &eb), &ec) - m(&ea, &m(&eb, &ec));
        let rhs = (m(&m(&ea, &ec), &eb) - m(&ea, &m(&ec, &eb))).scaled(&sg(s.degree(b) * s.degree(c)));
        report.record(s, "pre-Lie", &[a, b, c], lhs, rhs);
    }
}

/// The right-symmetric associator identity for `∘`.
pub fn check_prelie(s: &AlgebraStructure) -> Result<ViolationReport, Error> {
    s.require(OpKind::Circ)?;
    let mut report = ViolationReport::default();
    prelie_into(s, &mut report);
    Ok(report)
}

/// Pre-Lie for `∘`, symmetry and odd Jacobi for `[•]`, and the
/// compatibility identity between them.
pub fn check_prelie2(s: &AlgebraStructure) -> Result<ViolationReport, Error> {
    use OpKind::{Bullet, Circ};
    s.require(Circ)?;
    s.require(Bullet)?;
    let mut report = ViolationReport::default();
    prelie_into(s, &mut report);
    for a in 0..s.dim() {
        for b in 0..s.dim() {
            let lhs = s.product(Bullet, a, b);
            let rhs = s.product(Bullet, b, a).scaled(&-sg((s.degree(a) + 1) * (s.degree(b) + 1)));
            report.record(s, "bullet-symmetry", &[a, b], lhs, rhs);
        }
    }
    let o = |x: &Vector, y: &Vector| s.mul(Circ, x, y);
    let bl = |x: &Vector, y: &Vector| s.mul(Bullet, x, y);
    for (a, b, c) in triples(s.dim()) {
        let (ea, eb, ec) = (e(a), e(b), e(c));
        let (da, db, dc) = (s.degree(a), s.degree(b), s.degree(c));
        let lhs = bl(&bl(&ea, &eb), &ec);
        let rhs = bl(&ea, &bl(&eb, &ec)) + bl(&eb, &bl(&ea, &ec)).scaled(&sg(db * da + db + da));
        report.record(s, "odd-Jacobi", &[a, b, c], lhs, rhs);

        let mut lhs = o(&bl(&ea, &eb), &ec);
        lhs.add_scaled(&o(&ea, &bl(&eb, &ec)), &sg(db));
        lhs.add_scaled(&o(&eb, &bl(&ea, &ec)), &sg(db * da + db));
        let mut rhs = bl(&o(&ea, &ec), &eb).scaled(&sg(db * dc + dc));
        rhs.add_scaled(&bl(&o(&eb, &ec), &ea), &sg((da + 1) * (db + dc) + da));
        report.record(s, "compatibility", &[a, b, c], lhs, rhs);
    }
    Ok(report)
}

/// All N-algebra identities: symmetries of `[•]` and `⋆` plus the graded
/// Jacobi identity of the attached bracket on `V ⊕ ΠV`, split by which
/// inputs carry `Π` and by component.
pub fn check_n_algebra(s: &AlgebraStructure) -> Result<ViolationReport, Error> {
    for op in OpKind::ALL {
        s.require(op)?;
    }
    let mut report = ViolationReport::default();
    s.symmetry_violations(&mut report);
    let g = suspend_to_dgla(s)?;
    let n = s.dim();
    for (x, y, z) in triples(2 * n) {
        let (lhs, rhs) = g.jacobi_sides(x, y, z);
        let pattern: Vec<&str> = [x, y, z].iter().map(|&i| if i >= n { "Π" } else { "" }).collect();
        let letters = ["a", "b", "c"];
        let label: Vec<String> = pattern.iter().zip(letters).map(|(p, l)| format!("{p}{l}")).collect();
        let witness = [x, y, z].iter().map(|&i| g.basis[i].name.clone()).collect::<Vec<_>>();
        // split into the V and ΠV components
        for (part, keep) in [("V", false), ("ΠV", true)] {
            let pick = |v: &Vector| -> Vector {
                v.iter()
                    .filter(|(k, _)| (**k >= n) == keep)
                    .map(|(k, c)| (*k, c.clone()))
                    .collect()
            };
            report.record_named(
                &format!("jacobi({})/{part}", label.join(",")),
                witness.clone(),
                pick(&lhs),
                pick(&rhs),
                |k| g.basis[k].name.clone(),
            );
        }
    }
    Ok(report)
}

/// Identities of the Koszul dual algebras, evaluated from their relation
/// trees.
pub fn check_dual_algebra(s: &AlgebraStructure, variant: DualVariant) -> Result<ViolationReport, Error> {
    s.require(OpKind::Circ)?;
    s.require(OpKind::Bullet)?;
    if variant == DualVariant::NDual {
        s.require(OpKind::Star)?;
    }
    let mut report = ViolationReport::default();
    for rel in dual_relations(variant) {
        for (a, b, c) in triples(s.dim()) {
            let value = rel.evaluate(s, [a, b, c]);
            report.record(s, &rel.name, &[a, b, c], value, Vector::zero());
        }
    }
    Ok(report)
}

/// A graded Lie algebra with differential on a finite basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgLieStructure {
    pub basis: Vec<BasisElement>,
    pub bracket: BTreeMap<(usize, usize), Vector>,
    pub differential: Vec<Vector>,
}

impl DgLieStructure {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        self.bracket.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn br(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&self.bracket_basis(*i, *j), &(a * b));
            }
        }
        out
    }

    pub fn d(&self, x: &Vector) -> Vector {
        x.map_linear(|&i| self.differential[i].clone())
    }

    fn jacobi_sides(&self, x: usize, y: usize, z: usize) -> (Vector, Vector) {
        let (ex, ey, ez) = (e(x), e(y), e(z));
        let lhs = self.br(&ex, &self.br(&ey, &ez));
        let mut rhs = self.br(&self.br(&ex, &ey), &ez);
        rhs.add_scaled(&self.br(&ey, &self.br(&ex, &ez)), &sg(self.degree(x) * self.degree(y)));
        (lhs, rhs)
    }

    /// Antisymmetry, Jacobi, Leibniz and `d² = 0` on basis elements.
    pub fn check(&self) -> ViolationReport {
        let mut report = ViolationReport::default();
        let name = |k: usize| self.basis[k].name.clone();
        let wit = |v: &[usize]| v.iter().map(|&i| name(i)).collect::<Vec<_>>();
        for x in 0..self.dim() {
            report.record_named("d-squared", wit(&[x]), self.d(&self.d(&e(x))), Vector::zero(), name);
            for y in 0..self.dim() {
                let (dx, dy) = (self.degree(x), self.degree(y));
                let lhs = self.bracket_basis(x, y);
                let rhs = self.bracket_basis(y, x).scaled(&-sg(dx * dy));
                report.record_named("antisymmetry", wit(&[x, y]), lhs, rhs, name);
                let lhs = self.d(&self.bracket_basis(x, y));
                let mut rhs = self.br(&self.d(&e(x)), &e(y));
                rhs.add_scaled(&self.br(&e(x), &self.d(&e(y))), &sg(dx));
                report.record_named("leibniz", wit(&[x, y]), lhs, rhs, name);
            }
        }
        for (x, y, z) in triples(self.dim()) {
            let (lhs, rhs) = self.jacobi_sides(x, y, z);
            report.record_named("jacobi", wit(&[x, y, z]), lhs, rhs, name);
        }
        report
    }
}

/// The bracket and differential on `V ⊕ ΠV`, with `ΠV` occupying indices
/// `n..2n`.
pub fn suspend_to_dgla(s: &AlgebraStructure) -> Result<DgLieStructure, Error> {
    use OpKind::{Bullet, Circ, Star};
    if s.flavor != Flavor::Direct {
        return Err(Error::Structure("suspension needs the direct operation degrees".into()));
    }
    s.require(Circ)?;
    s.require(Bullet)?;
    s.validate()?;
    let n = s.dim();
    let pi = |v: &Vector| -> Vector { v.iter().map(|(k, c)| (k + n, c.clone())).collect() };
    let mut basis = s.basis.clone();
    for b in &s.basis {
        basis.push(BasisElement::new(format!("Π{}", b.name), b.degree + 1));
    }
    let mut bracket = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            let (da, db) = (s.degree(a), s.degree(b));
            let mut ab = s.product(Circ, a, b);
            ab.add_scaled(&s.product(Circ, b, a), &-sg(da * db));
            ab.add_scaled(&pi(&s.product(Star, a, b)), &sg(da));
            bracket.insert((a, b), ab);

            let mut pab = s.product(Bullet, a, b).scaled(&-sg(da));
            pab = pab + pi(&s.product(Circ, a, b));
            bracket.insert((a + n, b), pab);

            let mut apb = s.product(Bullet, b, a).scaled(&-sg(db));
            apb = apb + pi(&s.product(Circ, b, a));
            bracket.insert((a, b + n), apb.scaled(&-sg(da * (db + 1))));

            bracket.insert((a + n, b + n), pi(&s.product(Bullet, a, b)));
        }
    }
    bracket.retain(|_, v| !v.is_zero());
    let differential = (0..2 * n)
        .map(|i| if i < n { e(i + n) } else { Vector::zero() })
        .collect();
    Ok(DgLieStructure {
        basis,
        bracket,
        differential,
    })
}

/// Reads `∘`, `[•]`, `⋆` back from a bracket on `V ⊕ ΠV` laid out as in
/// [`suspend_to_dgla`].
pub fn desuspend(g: &DgLieStructure) -> Result<AlgebraStructure, Error> {
    use OpKind::{Bullet, Circ, Star};
    if !g.dim().is_multiple_of(2) {
        return Err(Error::Structure("odd dimensional V ⊕ ΠV".into()));
    }
    let n = g.dim() / 2;
    let mut s = AlgebraStructure::new(g.basis[..n].to_vec());
    for op in OpKind::ALL {
        s.ensure_op(op);
    }
    for a in 0..n {
        for b in 0..n {
            let da = s.degree(a);
            for (k, c) in g.bracket_basis(a + n, b).iter() {
                if *k >= n {
                    s.add_to(Circ, a, b, k - n, c.clone());
                } else {
                    s.add_to(Bullet, a, b, *k, -(c * &sg(da)));
                }
            }
            for (k, c) in g.bracket_basis(a, b).iter() {
                if *k >= n {
                    s.add_to(Star, a, b, k - n, c * &sg(da));
                }
            }
        }
    }
    Ok(s)
}

/// Changes the splitting of `V ⊕ ΠV` by `a ↦ a + Πf(a)` and reads the
/// operations back. `f[i]` is `f(e_i)`, of degree `|e_i| - 1`.
pub fn susy_transform(s: &AlgebraStructure, f: &[Vector]) -> Result<AlgebraStructure, Error> {
    if !check_n_algebra(s)?.is_empty() {
        return Err(Error::Precondition("input is not an N-algebra".into()));
    }
    let n = s.dim();
    if f.len() != n {
        return Err(Error::Structure(format!("f has {} columns, expected {n}", f.len())));
    }
    for (i, fi) in f.iter().enumerate() {
        if fi.keys().any(|&k| k >= n || s.degree(k) != s.degree(i) - 1) {
            return Err(Error::Structure(format!("f({}) is not of degree -1", s.basis[i].name)));
        }
    }
    let g = suspend_to_dgla(s)?;
    let pi = |v: &Vector| -> Vector { v.iter().map(|(k, c)| (k + n, c.clone())).collect() };
    let f_of = |v: &Vector| -> Vector { v.map_linear(|&i| f[i].clone()) };
    // new basis vectors in old coordinates
    let new: Vec<Vector> = (0..2 * n)
        .map(|i| if i < n { e(i) + pi(&f[i]) } else { e(i) })
        .collect();
    // old coordinates -> new: V part unchanged, Π part loses Π f(V part)
    let to_new = |x: &Vector| -> Vector {
        let v: Vector = x.iter().filter(|(k, _)| **k < n).map(|(k, c)| (*k, c.clone())).collect();
        x.clone() - pi(&f_of(&v))
    };
    let mut bracket = BTreeMap::new();
    for i in 0..2 * n {
        for j in 0..2 * n {
            let b = to_new(&g.br(&new[i], &new[j]));
            if !b.is_zero() {
                bracket.insert((i, j), b);
            }
        }
    }
    let h = DgLieStructure {
        basis: g.basis.clone(),
        bracket,
        differential: g.differential.clone(),
    };
    let mut out = desuspend(&h)?;
    out.basis = s.basis.clone();
    Ok(out)
}

/// Re-expresses `s` in the basis `new` (each vector homogeneous). The names
/// of the old basis are kept.
pub fn change_basis(s: &AlgebraStructure, new: &[Vector]) -> Result<AlgebraStructure, Error> {
    if new.len() != s.dim() {
        return Err(Error::Structure("basis change must be square".into()));
    }
    let mut span = Echelon::new();
    let mut basis = Vec::new();
    for (i, v) in new.iter().enumerate() {
        let d = s
            .vector_degree(v)
            .ok_or_else(|| Error::Structure("basis vectors must be homogeneous and nonzero".into()))?;
        if !span.insert(v) {
            return Err(Error::Structure("basis change is singular".into()));
        }
        basis.push(BasisElement::new(s.basis[i].name.clone(), d));
    }
    let mut out = AlgebraStructure {
        basis,
        flavor: s.flavor,
        ops: BTreeMap::new(),
    };
    for op in s.ops().collect::<Vec<_>>() {
        out.ensure_op(op);
        for i in 0..new.len() {
            for j in 0..new.len() {
                let p = s.mul(op, &new[i], &new[j]);
                let coords = span
                    .express(&p)
                    .ok_or_else(|| Error::Consistency("product left the span".into()))?;
                out.set_product(op, i, j, coords);
            }
        }
    }
    Ok(out)
}

/// A differential graded commutative associative algebra on a finite basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgcaStructure {
    pub basis: Vec<BasisElement>,
    pub product: BTreeMap<(usize, usize), Vector>,
    pub differential: Vec<Vector>,
}

impl DgcaStructure {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                if let Some(p) = self.product.get(&(*i, *j)) {
                    out.add_scaled(p, &(a * b));
                }
            }
        }
        out
    }

    pub fn d(&self, x: &Vector) -> Vector {
        x.map_linear(|&i| self.differential[i].clone())
    }

    /// Associativity, graded commutativity, Leibniz, `d² = 0` and degrees.
    pub fn check(&self) -> ViolationReport {
        let mut report = ViolationReport::default();
        let name = |k: usize| self.basis[k].name.clone();
        let wit = |v: &[usize]| v.iter().map(|&i| name(i)).collect::<Vec<_>>();
        for x in 0..self.dim() {
            let dx = self.d(&e(x));
            report.record_named("d-squared", wit(&[x]), self.d(&dx), Vector::zero(), name);
            let bad: Vector = dx
                .iter()
                .filter(|(k, _)| self.degree(**k) != self.degree(x) + 1)
                .map(|(k, c)| (*k, c.clone()))
                .collect();
            report.record_named("d-degree", wit(&[x]), bad, Vector::zero(), name);
            for y in 0..self.dim() {
                let (gx, gy) = (self.degree(x), self.degree(y));
                let xy = self.mul(&e(x), &e(y));
                let bad: Vector = xy
                    .iter()
                    .filter(|(k, _)| self.degree(**k) != gx + gy)
                    .map(|(k, c)| (*k, c.clone()))
                    .collect();
                report.record_named("product-degree", wit(&[x, y]), bad, Vector::zero(), name);
                let yx = self.mul(&e(y), &e(x)).scaled(&sg(gx * gy));
                report.record_named("commutativity", wit(&[x, y]), xy.clone(), yx, name);
                let mut rhs = self.mul(&self.d(&e(x)), &e(y));
                rhs.add_scaled(&self.mul(&e(x), &self.d(&e(y))), &sg(gx));
                report.record_named("leibniz", wit(&[x, y]), self.d(&xy), rhs, name);
            }
        }
        for (x, y, z) in triples(self.dim()) {
            let (ex, ey, ez) = (e(x), e(y), e(z));
            let lhs = self.mul(&self.mul(&ex, &ey), &ez);
            let rhs = self.mul(&ex, &self.mul(&ey, &ez));
            report.record_named("associativity", wit(&[x, y, z]), lhs, rhs, name);
        }
        report
    }
}

/// The dual-flavor structure on `A[-1]`:
/// `Πα ∘ Πβ = Π(α·dβ)`, `Πα • Πβ = Π(α·β)`, `Πα ⋆ Πβ = (-1)^{|α|} Π(dα·dβ)`.
pub fn dual_from_dgca(a: &DgcaStructure) -> Result<AlgebraStructure, Error> {
    let report = a.check();
    if let Some(v) = report.violations.first() {
        return Err(Error::Precondition(format!("not a dgca: {v}")));
    }
    let basis = a
        .basis
        .iter()
        .map(|b| BasisElement::new(format!("Π{}", b.name), b.degree + 1))
        .collect();
    let mut s = AlgebraStructure::new_dual(basis);
    for op in OpKind::ALL {
        s.ensure_op(op);
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let (ei, ej) = (e(i), e(j));
            s.set_product(OpKind::Circ, i, j, a.mul(&ei, &a.d(&ej)));
            s.set_product(OpKind::Bullet, i, j, a.mul(&ei, &ej));
            let star = a.mul(&a.d(&ei), &a.d(&ej)).scaled(&sg(a.degree(i)));
            s.set_product(OpKind::Star, i, j, star);
        }
    }
    Ok(s)
}

impl fmt::Display for AlgebraStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in self.ops() {
            for (&(i, j), v) in self.entries(op) {
                writeln!(
                    f,
                    "{} {} {} = {}",
                    self.basis[i].name,
                    op.symbol(),
                    self.basis[j].name,
                    self.render(v)
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::{FreeLieContext, ImageOfQ};
    use crate::operad::DualVariant;

    fn image_of_q(degrees: &[i64], weight: usize) -> AlgebraStructure {
        let c = FreeLieContext::with_degrees(degrees, weight);
        ImageOfQ::new(&c).unwrap().structure().unwrap()
    }

    fn with_star(mut s: AlgebraStructure) -> AlgebraStructure {
        s.ensure_op(OpKind::Star);
        s
    }

    #[test]
    fn zero_structures_pass() {
        let mut s = AlgebraStructure::new(alloc::vec![BasisElement::new("x", 0), BasisElement::new("y", 1)]);
        for op in OpKind::ALL {
            s.ensure_op(op);
        }
        assert!(check_prelie(&s).unwrap().is_empty());
        assert!(check_prelie2(&s).unwrap().is_empty());
        assert!(check_n_algebra(&s).unwrap().is_empty());
        assert!(suspend_to_dgla(&s).unwrap().check().is_empty());
    }

    #[test]
    fn missing_op_is_reported() {
        let s = AlgebraStructure::new(alloc::vec![BasisElement::new("x", 0)]);
        assert_eq!(check_prelie(&s), Err(Error::MissingOperation("circ".into())));
    }

    #[test]
    fn idempotent_is_prelie() {
        let mut s = AlgebraStructure::new(alloc::vec![BasisElement::new("e", 0)]);
        s.set(OpKind::Circ, 0, 0, 0, Scalar::one());
        assert!(check_prelie(&s).unwrap().is_empty());
    }

    #[test]
    fn image_of_q_is_prelie2() {
        for degrees in [&[0][..], &[1], &[0, 1]] {
            let s = image_of_q(degrees, 3);
            let r = check_prelie2(&s).unwrap();
            assert!(r.is_empty(), "{degrees:?}: {:?}", r.violations.first());
            let r = check_n_algebra(&with_star(s.clone())).unwrap();
            assert!(r.is_empty(), "{degrees:?}: {:?}", r.violations.first());
            assert!(suspend_to_dgla(&s).unwrap().check().is_empty());
        }
    }

    #[test]
    fn perturbed_image_of_q_fails() {
        let mut s = image_of_q(&[0, 0], 3);
        let (&(i, j), v) = s.entries(OpKind::Circ).next().unwrap();
        let k = *v.keys().next().unwrap();
        s.add_to(OpKind::Circ, i, j, k, Scalar::one());
        assert!(!check_prelie2(&s).unwrap().is_empty());
        assert!(!check_n_algebra(&with_star(s)).unwrap().is_empty());
    }

    #[test]
    fn desuspend_inverts_suspend() {
        let s = with_star(image_of_q(&[0, 1], 2));
        let mut back = desuspend(&suspend_to_dgla(&s).unwrap()).unwrap();
        back.basis = s.basis.clone();
        assert_eq!(back, s);
    }

    #[test]
    fn susy_identity_and_composition() {
        let s = with_star(image_of_q(&[0, 1], 3));
        let n = s.dim();
        let zero = alloc::vec![Vector::zero(); n];
        assert_eq!(susy_transform(&s, &zero).unwrap(), s);
        // f sends each element to the first basis element one degree lower
        let pick = |scale: i64| -> Vec<Vector> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .find(|&k| s.degree(k) == s.degree(i) - 1)
                        .map(|k| FormalSum::single(k, Scalar::from_int(scale)))
                        .unwrap_or_default()
                })
                .collect()
        };
        let (f, g) = (pick(1), pick(2));
        let sf = susy_transform(&s, &f).unwrap();
        assert!(check_n_algebra(&sf).unwrap().is_empty());
        assert_eq!(sf.entries(OpKind::Bullet).collect::<Vec<_>>(), s.entries(OpKind::Bullet).collect::<Vec<_>>());
        let fg: Vec<Vector> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        assert_eq!(susy_transform(&sf, &g).unwrap(), susy_transform(&s, &fg).unwrap());
    }

    fn three_element_dgca() -> DgcaStructure {
        let basis = alloc::vec![BasisElement::new("1", 0), BasisElement::new("x", 0), BasisElement::new("dx", 1)];
        let mut product = BTreeMap::new();
        for i in 0..3 {
            product.insert((0, i), e(i));
            product.insert((i, 0), e(i));
        }
        DgcaStructure {
            basis,
            product,
            differential: alloc::vec![Vector::zero(), e(2), Vector::zero()],
        }
    }

    #[test]
    fn dual_of_three_element_dgca() {
        let a = three_element_dgca();
        assert!(a.check().is_empty());
        let s = dual_from_dgca(&a).unwrap();
        s.validate().unwrap();
        for v in [DualVariant::PDual, DualVariant::NDual] {
            let r = check_dual_algebra(&s, v).unwrap();
            assert!(r.is_empty(), "{:?}", r.violations.first());
        }
    }

    #[test]
    fn dual_rejects_broken_leibniz() {
        let mut a = three_element_dgca();
        a.differential[0] = e(2);
        assert!(matches!(dual_from_dgca(&a), Err(Error::Precondition(_))));
    }

    #[test]
    fn corrupted_dual_fails() {
        let mut s = dual_from_dgca(&three_element_dgca()).unwrap();
        s.add_to(OpKind::Circ, 1, 1, 2, Scalar::one());
        assert!(!check_dual_algebra(&s, DualVariant::PDual).unwrap().is_empty());
    }

    #[test]
    fn checkers_invariant_under_basis_change() {
        let s = with_star(image_of_q(&[0, 0], 3));
        let n = s.dim();
        // unipotent change inside each degree block
        let new: Vec<Vector> = (0..n)
            .map(|i| {
                let mut v = e(i);
                if let Some(k) = (i + 1..n).find(|&k| s.degree(k) == s.degree(i)) {
                    v.add_term(k, Scalar::ratio(3, 2));
                }
                v
            })
            .collect();
        let t = change_basis(&s, &new).unwrap();
        assert_ne!(t, s);
        assert!(check_prelie2(&t).unwrap().is_empty());
        assert!(check_n_algebra(&t).unwrap().is_empty());
    }
}
