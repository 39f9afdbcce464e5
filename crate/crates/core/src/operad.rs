//! Operads on mixed-symmetry corollas: trees, grafting, the cobar
//! differential and the hard-coded relation trees of the Koszul duals.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{AlgebraStructure, OpKind, Vector};
use crate::sign::{block_shuffle_parity, koszul_sign, sort_with_parity};
use crate::{Error, FormalSum, Scalar};
use alloc::format;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DualVariant {
    PDual,
    NDual,
}

/// A binary tree of operations with leaves numbered by input slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BinTree {
    Leaf(usize),
    Node(OpKind, Box<BinTree>, Box<BinTree>),
}

impl BinTree {
    pub fn node(op: OpKind, l: BinTree, r: BinTree) -> BinTree {
        BinTree::Node(op, Box::new(l), Box::new(r))
    }

    /// `(x op y) op2 z` with leaves `x y z`.
    pub fn left(op2: OpKind, op: OpKind, x: usize, y: usize, z: usize) -> BinTree {
        BinTree::node(op2, BinTree::node(op, BinTree::Leaf(x), BinTree::Leaf(y)), BinTree::Leaf(z))
    }

    /// `x op2 (y op z)`.
    pub fn right(op2: OpKind, op: OpKind, x: usize, y: usize, z: usize) -> BinTree {
        BinTree::node(op2, BinTree::Leaf(x), BinTree::node(op, BinTree::Leaf(y), BinTree::Leaf(z)))
    }

    pub fn leaves(&self) -> Vec<usize> {
        match self {
            BinTree::Leaf(i) => vec![*i],
            BinTree::Node(_, l, r) => {
                let mut v = l.leaves();
                v.extend(r.leaves());
                v
            }
        }
    }

    fn eval(&self, s: &AlgebraStructure, inputs: &[usize]) -> Vector {
        match self {
            BinTree::Leaf(i) => FormalSum::basis(inputs[*i]),
            BinTree::Node(op, l, r) => s.mul(*op, &l.eval(s, inputs), &r.eval(s, inputs)),
        }
    }
}

/// `(-1)^{Σ |x_i||x_j| + Σ |x_k| + c}` over the listed input slots.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignExpr {
    pub quadratic: Vec<(usize, usize)>,
    pub linear: Vec<usize>,
    pub constant: bool,
}

impl SignExpr {
    pub fn plus() -> Self {
        SignExpr::default()
    }

    pub fn minus() -> Self {
        SignExpr {
            constant: true,
            ..SignExpr::default()
        }
    }

    pub fn eval(&self, degrees: &[i64]) -> Scalar {
        let mut e = self.constant as i64;
        for &(i, j) in &self.quadratic {
            e += degrees[i] * degrees[j];
        }
        for &k in &self.linear {
            e += degrees[k];
        }
        Scalar::sign(e)
    }
}

/// A relation `Σ sign · tree = 0`. Trees whose leaves are a permutation of
/// the inputs pick up the Koszul sign of that permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTree {
    pub name: String,
    pub terms: Vec<(SignExpr, BinTree)>,
}

impl RelationTree {
    pub fn evaluate(&self, s: &AlgebraStructure, inputs: [usize; 3]) -> Vector {
        let degrees: Vec<i64> = inputs.iter().map(|&i| s.degree(i)).collect();
        let mut out = Vector::zero();
        for (sign, tree) in &self.terms {
            let perm = tree.leaves();
            let k = koszul_sign(&degrees, &perm).expect("relation trees use each input once");
            out.add_scaled(&tree.eval(s, &inputs), &(sign.eval(&degrees) * k));
        }
        out
    }
}

fn rel(name: &str, terms: Vec<(SignExpr, BinTree)>) -> RelationTree {
    RelationTree {
        name: name.into(),
        terms,
    }
}

/// Relations of the dual operads as trees.
pub fn dual_relations(variant: DualVariant) -> Vec<RelationTree> {
    use OpKind::{Bullet, Circ, Star};
    let p = SignExpr::plus;
    let m = SignExpr::minus;
    let lin = |k: usize, constant: bool| SignExpr {
        linear: vec![k],
        constant,
        ..SignExpr::default()
    };
    let mut out = vec![
        rel(
            "assoc-circ",
            vec![(p(), BinTree::left(Circ, Circ, 0, 1, 2)), (m(), BinTree::right(Circ, Circ, 0, 1, 2))],
        ),
        rel(
            "assoc-bullet",
            vec![
                (p(), BinTree::left(Bullet, Bullet, 0, 1, 2)),
                (m(), BinTree::right(Bullet, Bullet, 0, 1, 2)),
            ],
        ),
        rel(
            "circ-right-commutative",
            vec![(p(), BinTree::left(Circ, Circ, 0, 1, 2)), (m(), BinTree::left(Circ, Circ, 0, 2, 1))],
        ),
        rel(
            "bullet-circ",
            vec![
                (p(), BinTree::right(Bullet, Circ, 0, 1, 2)),
                (m(), BinTree::left(Circ, Bullet, 0, 1, 2)),
            ],
        ),
        rel(
            "circ-bullet",
            vec![
                (p(), BinTree::right(Circ, Bullet, 0, 1, 2)),
                (lin(1, false), BinTree::left(Circ, Bullet, 0, 1, 2)),
                (lin(1, true), BinTree::left(Circ, Bullet, 0, 2, 1)),
            ],
        ),
    ];
    if variant == DualVariant::NDual {
        out.extend([
            rel(
                "star-circ-swap",
                vec![(p(), BinTree::left(Circ, Star, 0, 1, 2)), (m(), BinTree::left(Circ, Star, 0, 2, 1))],
            ),
            rel(
                "star-circ-exchange",
                vec![(p(), BinTree::left(Circ, Star, 0, 2, 1)), (p(), BinTree::left(Star, Circ, 0, 2, 1))],
            ),
            rel(
                "bullet-star",
                vec![
                    (p(), BinTree::right(Bullet, Star, 0, 1, 2)),
                    (m(), BinTree::right(Circ, Circ, 0, 1, 2)),
                ],
            ),
            rel("star-circ-zero", vec![(p(), BinTree::left(Circ, Star, 0, 2, 1))]),
            rel(
                "bullet-star-exchange",
                vec![
                    (p(), BinTree::left(Star, Bullet, 0, 2, 1)),
                    (m(), BinTree::right(Bullet, Star, 0, 1, 2)),
                    (p(), BinTree::right(Bullet, Star, 0, 2, 1)),
                ],
            ),
        ]);
    }
    out
}

/// Which cobar construction: pre-Lie²∞ or Nijenhuis∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CobarVariant {
    PInfinity,
    NInfinity,
}

impl CobarVariant {
    pub fn min_symmetric(self) -> usize {
        match self {
            CobarVariant::PInfinity => 1,
            CobarVariant::NInfinity => 0,
        }
    }
}

/// Dimension of the generating S-module in arity `n`: `Σ_p binom(n, p)`.
pub fn smodule_dim(n: usize, variant: CobarVariant) -> u128 {
    let top = n - variant.min_symmetric().min(n);
    (0..=top).map(|p| binomial(n, p)).sum()
}

/// All normalized corollas of arity `n`, found by normalizing every ordering
/// of the labels split at every position.
pub fn enumerate_corollas(n: usize, variant: CobarVariant) -> Vec<Corolla> {
    let mut seen = alloc::collections::BTreeSet::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        for k in variant.min_symmetric().min(n + 1)..=n {
            let c = Corolla {
                sym: perm[..k].to_vec(),
                anti: perm[k..].to_vec(),
            };
            seen.insert(corolla_normalize(&c).expect("labels form a permutation").0);
        }
        // next permutation in lexicographic order
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).expect("successor exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    seen.into_iter().collect()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// A tree of corollas. A vertex with `k` symmetric and `p` antisymmetric
/// inputs has degree `1 - p`; its decoration order is the preorder.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Leaf(usize),
    Node(Box<Vertex>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub sym: Vec<Tree>,
    pub anti: Vec<Tree>,
}

pub type TreeSum = FormalSum<Tree>;

/// A corolla with labelled legs, not necessarily normalized.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Corolla {
    pub sym: Vec<usize>,
    pub anti: Vec<usize>,
}

impl Corolla {
    /// The standard generator on labels `0..k+p`.
    pub fn standard(k: usize, p: usize) -> Self {
        Corolla {
            sym: (0..k).collect(),
            anti: (k..k + p).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.sym.len() + self.anti.len()
    }

    pub fn degree(&self) -> i64 {
        1 - self.anti.len() as i64
    }

    pub fn tree(&self) -> Tree {
        Tree::node(
            self.sym.iter().map(|&l| Tree::Leaf(l)).collect(),
            self.anti.iter().map(|&l| Tree::Leaf(l)).collect(),
        )
    }

    fn check(&self, variant: CobarVariant, unary: bool) -> Result<(), Error> {
        let mut labels: Vec<usize> = self.sym.iter().chain(&self.anti).copied().collect();
        labels.sort_unstable();
        if labels.iter().enumerate().any(|(i, &l)| i != l) {
            return Err(Error::MalformedPermutation);
        }
        if self.arity() < if unary { 1 } else { 2 } || self.sym.len() < variant.min_symmetric() {
            return Err(Error::Domain(format!(
                "corolla ({}, {}) is not a generator of this variant",
                self.sym.len(),
                self.anti.len()
            )));
        }
        Ok(())
    }
}

/// Sorts both blocks; the sign is the parity of the antisymmetric sort.
pub fn corolla_normalize(c: &Corolla) -> Result<(Corolla, Scalar), Error> {
    let mut labels: Vec<usize> = c.sym.iter().chain(&c.anti).copied().collect();
    labels.sort_unstable();
    if labels.iter().enumerate().any(|(i, &l)| i != l) {
        return Err(Error::MalformedPermutation);
    }
    let mut sym = c.sym.clone();
    sym.sort_unstable();
    let mut anti = c.anti.clone();
    let odd = sort_with_parity(&mut anti, |_| 1);
    Ok((Corolla { sym, anti }, if odd { -Scalar::one() } else { Scalar::one() }))
}

impl Tree {
    pub fn node(sym: Vec<Tree>, anti: Vec<Tree>) -> Tree {
        Tree::Node(Box::new(Vertex { sym, anti }))
    }

    pub fn degree(&self) -> i64 {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(v) => 1 - v.anti.len() as i64 + v.children().map(Tree::degree).sum::<i64>(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(v) => v.children().map(Tree::arity).sum(),
        }
    }

    pub fn vertices(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(v) => 1 + v.children().map(Tree::vertices).sum::<usize>(),
        }
    }

    pub fn min_label(&self) -> usize {
        match self {
            Tree::Leaf(l) => *l,
            Tree::Node(v) => v.children().map(Tree::min_label).min().unwrap_or(usize::MAX),
        }
    }

    pub fn labels(&self) -> Vec<usize> {
        match self {
            Tree::Leaf(l) => vec![*l],
            Tree::Node(v) => v.children().flat_map(Tree::labels).collect(),
        }
    }

    fn preorder_degrees(&self, out: &mut Vec<i64>) {
        if let Tree::Node(v) = self {
            out.push(1 - v.anti.len() as i64);
            for c in v.children() {
                c.preorder_degrees(out);
            }
        }
    }

    /// Preorder traversal: `Ok(degree)` for a vertex, `Err(label)` for a leaf.
    fn events(&self, out: &mut Vec<Result<i64, usize>>) {
        match self {
            Tree::Leaf(l) => out.push(Err(*l)),
            Tree::Node(v) => {
                out.push(Ok(1 - v.anti.len() as i64));
                for c in v.children() {
                    c.events(out);
                }
            }
        }
    }

    /// Canonical representative: children sorted by smallest label, with
    /// Koszul signs for moving decorations and a sign per transposition of
    /// antisymmetric inputs.
    pub fn canonical(&self) -> (Tree, Scalar) {
        match self {
            Tree::Leaf(_) => (self.clone(), Scalar::one()),
            Tree::Node(v) => {
                let mut sign = Scalar::one();
                let mut sort = |children: &[Tree], anti: bool| {
                    let mut items: Vec<(usize, i64, Tree)> = children
                        .iter()
                        .map(|c| {
                            let (t, s) = c.canonical();
                            sign = &sign * &s;
                            (t.min_label(), t.degree(), t)
                        })
                        .collect();
                    let before: Vec<usize> = items.iter().map(|(l, _, _)| *l).collect();
                    let mut odd = sort_with_parity(&mut items, |(_, d, _)| *d);
                    if anti {
                        let mut labels = before;
                        odd ^= sort_with_parity(&mut labels, |_| 1);
                    }
                    if odd {
                        sign = -sign.clone();
                    }
                    items.into_iter().map(|(_, _, t)| t).collect::<Vec<_>>()
                };
                let sym = sort(&v.sym, false);
                let anti = sort(&v.anti, true);
                (Tree::node(sym, anti), sign)
            }
        }
    }

    /// Replaces each leaf `l` by `subs[l]`. The decorations of `self` come
    /// first, then those of `subs[0]`, `subs[1]`, …; the sign moves them into
    /// preorder.
    pub fn substitute(&self, subs: &[Tree]) -> (Tree, Scalar) {
        let mut events = Vec::new();
        self.events(&mut events);
        let own = events.iter().filter(|e| e.is_ok()).count();
        let mut offsets = Vec::with_capacity(subs.len());
        let mut degrees = Vec::new();
        events.iter().filter_map(|e| e.ok()).for_each(|d| degrees.push(d));
        for s in subs {
            offsets.push(degrees.len());
            s.preorder_degrees(&mut degrees);
        }
        let mut perm = Vec::with_capacity(degrees.len());
        let mut vertex = 0;
        for e in &events {
            match e {
                Ok(_) => {
                    perm.push(vertex);
                    vertex += 1;
                }
                Err(l) => {
                    let n = subs[*l].vertices();
                    perm.extend(offsets[*l]..offsets[*l] + n);
                }
            }
        }
        debug_assert_eq!(vertex, own);
        let sign = koszul_sign(&degrees, &perm).expect("substitution is a bijection");
        (self.replace_leaves(subs), sign)
    }

    fn replace_leaves(&self, subs: &[Tree]) -> Tree {
        match self {
            Tree::Leaf(l) => subs[*l].clone(),
            Tree::Node(v) => Tree::node(
                v.sym.iter().map(|c| c.replace_leaves(subs)).collect(),
                v.anti.iter().map(|c| c.replace_leaves(subs)).collect(),
            ),
        }
    }

    pub fn relabel(&self, f: &impl Fn(usize) -> usize) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(f(*l)),
            Tree::Node(v) => Tree::node(
                v.sym.iter().map(|c| c.relabel(f)).collect(),
                v.anti.iter().map(|c| c.relabel(f)).collect(),
            ),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Tree::Leaf(l) => format!("{}", l + 1),
            Tree::Node(v) => {
                let s: Vec<String> = v.sym.iter().map(Tree::render).collect();
                let a: Vec<String> = v.anti.iter().map(Tree::render).collect();
                format!("μ({} | {})", s.join(","), a.join(","))
            }
        }
    }
}

impl Vertex {
    pub fn children(&self) -> impl Iterator<Item = &Tree> {
        self.sym.iter().chain(&self.anti)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn add_canonical(sum: &mut TreeSum, t: &Tree, c: Scalar) {
    let (t, s) = t.canonical();
    sum.add_term(t, c * s);
}

/// Operadic composition `outer ∘_i inner`: inner's labels are shifted by
/// `i` and outer's labels above `i` by `arity(inner) - 1`.
pub fn graft(outer: &TreeSum, i: usize, inner: &TreeSum) -> Result<TreeSum, Error> {
    let mut out = TreeSum::zero();
    for (a, ca) in outer.iter() {
        let n = a.arity();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, arity: n });
        }
        for (b, cb) in inner.iter() {
            let m = b.arity();
            let b = b.relabel(&|l| l + i);
            let subs: Vec<Tree> = (0..n)
                .map(|l| match l.cmp(&i) {
                    core::cmp::Ordering::Less => Tree::Leaf(l),
                    core::cmp::Ordering::Equal => b.clone(),
                    core::cmp::Ordering::Greater => Tree::Leaf(l + m - 1),
                })
                .collect();
            let (t, s) = a.substitute(&subs);
            add_canonical(&mut out, &t, &(ca * cb) * &s);
        }
    }
    Ok(out)
}

fn subsets(items: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    (0..1u32 << items.len())
        .map(|mask| {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            for (i, &x) in items.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    a.push(x)
                } else {
                    b.push(x)
                }
            }
            (a, b)
        })
        .collect()
}

fn leaves(labels: &[usize]) -> Vec<Tree> {
    labels.iter().map(|&l| Tree::Leaf(l)).collect()
}

/// The cobar differential of the standard generator with `k` symmetric and
/// `p` antisymmetric inputs, as a sum of two-vertex trees.
pub fn cobar_generator(k: usize, p: usize, variant: CobarVariant) -> Result<TreeSum, Error> {
    Corolla::standard(k, p).check(variant, false)?;
    cobar_terms(k, p, variant, false)
}

/// As `cobar_generator`, but with arity-one corollas (the differential of
/// the underlying complex) admitted as vertices and as generators.
pub fn cobar_generator_unary(k: usize, p: usize, variant: CobarVariant) -> Result<TreeSum, Error> {
    Corolla::standard(k, p).check(variant, true)?;
    cobar_terms(k, p, variant, true)
}

fn cobar_terms(k: usize, p: usize, variant: CobarVariant, unary: bool) -> Result<TreeSum, Error> {
    let lo = variant.min_symmetric();
    let least = if unary { 1 } else { 2 };
    let sym: Vec<usize> = (0..k).collect();
    let anti: Vec<usize> = (k..k + p).collect();
    let mut out = TreeSum::zero();
    for (i2, i1) in subsets(&sym) {
        // first sum: inner vertex plugged into a symmetric input
        for (j1, j2) in subsets(&anti) {
            if i2.len() < lo || i1.len() + j2.len() + 1 < least || i2.len() + j1.len() < least {
                continue;
            }
            let mut sign = block_shuffle_parity(&anti, &[&j1, &j2])?;
            sign.apply_sign(j2.len() as i64);
            let inner = Tree::node(leaves(&i2), leaves(&j1));
            let mut outer_sym = leaves(&i1);
            outer_sym.push(inner);
            add_canonical(&mut out, &Tree::node(outer_sym, leaves(&j2)), sign);
        }
        // second sum: inner vertex plugged into an antisymmetric input, one
        // antisymmetric label entering it through a symmetric input
        if i1.len() < lo {
            continue;
        }
        for &j in &anti {
            let rest: Vec<usize> = anti.iter().copied().filter(|&x| x != j).collect();
            for (j2, j3) in subsets(&rest) {
                if i1.len() + j3.len() + 1 < least || i2.len() + j2.len() + 1 < least {
                    continue;
                }
                let j1 = [j];
                let mut sign = -block_shuffle_parity(&anti, &[&j1, &j2, &j3])?;
                sign.apply_sign((j2.len() + j3.len()) as i64);
                let mut inner_sym = leaves(&i2);
                inner_sym.push(Tree::Leaf(j));
                let inner = Tree::node(inner_sym, leaves(&j2));
                let mut outer_anti = vec![inner];
                outer_anti.extend(leaves(&j3));
                add_canonical(&mut out, &Tree::node(leaves(&i1), outer_anti), sign);
            }
        }
    }
    Ok(out)
}

/// Extends `cobar_generator` to trees by the graded Leibniz rule along the
/// preorder.
pub fn cobar_d(t: &Tree, variant: CobarVariant) -> Result<TreeSum, Error> {
    cobar_d_with(t, variant, false)
}

pub fn cobar_d_with(t: &Tree, variant: CobarVariant, unary: bool) -> Result<TreeSum, Error> {
    let mut out = TreeSum::zero();
    let mut paths = Vec::new();
    collect_paths(t, &mut Vec::new(), &mut paths);
    let mut preceding = 0i64;
    for path in paths {
        let v = subtree(t, &path);
        let Tree::Node(vx) = v else { unreachable!() };
        let children: Vec<Tree> = vx.children().cloned().collect();
        let dv = if unary {
            cobar_generator_unary(vx.sym.len(), vx.anti.len(), variant)?
        } else {
            cobar_generator(vx.sym.len(), vx.anti.len(), variant)?
        };
        for (d, c) in dv.iter() {
            let (new_sub, s) = d.substitute(&children);
            let mut coef = c * &s;
            coef.apply_sign(preceding);
            add_canonical(&mut out, &replace_at(t, &path, new_sub), coef);
        }
        preceding += 1 - vx.anti.len() as i64;
    }
    Ok(out)
}

fn collect_paths(t: &Tree, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if let Tree::Node(v) = t {
        out.push(prefix.clone());
        for (i, c) in v.children().enumerate() {
            prefix.push(i);
            collect_paths(c, prefix, out);
            prefix.pop();
        }
    }
}

fn subtree<'a>(t: &'a Tree, path: &[usize]) -> &'a Tree {
    match (t, path.split_first()) {
        (_, None) => t,
        (Tree::Node(v), Some((&i, rest))) => subtree(v.children().nth(i).expect("valid path"), rest),
        (Tree::Leaf(_), Some(_)) => unreachable!("path through a leaf"),
    }
}

fn replace_at(t: &Tree, path: &[usize], new: Tree) -> Tree {
    match (t, path.split_first()) {
        (_, None) => new,
        (Tree::Node(v), Some((&i, rest))) => {
            let k = v.sym.len();
            let mut v = (**v).clone();
            if i < k {
                v.sym[i] = replace_at(&v.sym[i], rest, new);
            } else {
                v.anti[i - k] = replace_at(&v.anti[i - k], rest, new);
            }
            Tree::Node(Box::new(v))
        }
        (Tree::Leaf(_), Some(_)) => unreachable!("path through a leaf"),
    }
}

pub fn cobar_d_sum(s: &TreeSum, variant: CobarVariant, unary: bool) -> Result<TreeSum, Error> {
    let mut out = TreeSum::zero();
    for (t, c) in s.iter() {
        out.add_scaled(&cobar_d_with(t, variant, unary)?, c);
    }
    Ok(out)
}

/// Nonzero `d²` residue on a generator.
#[derive(Clone, Debug, PartialEq)]
pub struct DSquaredFailure {
    pub generator: (usize, usize),
    pub residue: TreeSum,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DSquaredReport {
    pub checked: Vec<(usize, usize)>,
    pub failures: Vec<DSquaredFailure>,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `d(d(c)) = 0` for every generator of arity `2..=n` (from arity one
/// when `unary`).
pub fn d_squared_check(n: usize, variant: CobarVariant, unary: bool) -> Result<DSquaredReport, Error> {
    let mut report = DSquaredReport::default();
    for arity in if unary { 1 } else { 2 }..=n {
        for k in variant.min_symmetric()..=arity {
            let p = arity - k;
            let d1 = cobar_terms(k, p, variant, unary)?;
            let d2 = cobar_d_sum(&d1, variant, unary)?;
            report.checked.push((k, p));
            if !d2.is_zero() {
                report.failures.push(DSquaredFailure {
                    generator: (k, p),
                    residue: d2,
                });
            }
        }
    }
    Ok(report)
}

/// Multilinear operations `μ_{k,p}` on a graded basis, inputs listed
/// symmetric block first.
pub trait Operations {
    fn dim(&self) -> usize;
    fn basis_degree(&self, i: usize) -> i64;
    fn operation(&self, k: usize, p: usize, inputs: &[usize]) -> Result<Vector, Error>;
}

/// Binary operations of an algebra as corollas: `μ_{1,1}(a; b) = a ∘ b`,
/// `μ_{2,0}(a, b) = (-1)^{|a|}[a • b]`, `μ_{0,2}(a, b) = (-1)^{|a|} a ⋆ b`.
pub struct BinaryOperations<'a>(pub &'a AlgebraStructure);

impl Operations for BinaryOperations<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn basis_degree(&self, i: usize) -> i64 {
        self.0.degree(i)
    }

    fn operation(&self, k: usize, p: usize, inputs: &[usize]) -> Result<Vector, Error> {
        let s = self.0;
        let (op, sign) = match (k, p) {
            (1, 1) => (OpKind::Circ, Scalar::one()),
            (2, 0) => (OpKind::Bullet, Scalar::sign(s.degree(inputs[0]))),
            (0, 2) => (OpKind::Star, Scalar::sign(s.degree(inputs[0]))),
            _ => return Ok(Vector::zero()),
        };
        s.require(op)?;
        Ok(s.product(op, inputs[0], inputs[1]).scaled(&sign))
    }
}

fn eval_planar<O: Operations + ?Sized>(t: &Tree, inputs: &[usize], ops: &O) -> Result<Vector, Error> {
    let Tree::Node(v) = t else {
        return Ok(FormalSum::basis(inputs[0]));
    };
    let mut sign = 0i64;
    let mut offset = 0;
    let mut before = 0i64;
    let mut results = Vec::new();
    for c in v.children() {
        let n = c.arity();
        let block = &inputs[offset..offset + n];
        sign += c.degree() * before;
        before += block.iter().map(|&i| ops.basis_degree(i)).sum::<i64>();
        results.push(eval_planar(c, block, ops)?);
        offset += n;
    }
    let (k, p) = (v.sym.len(), v.anti.len());
    let mut out = Vector::zero();
    let mut choice = Vec::with_capacity(results.len());
    expand(&results, &mut choice, Scalar::one(), &mut |args, c| {
        out.add_scaled(&ops.operation(k, p, args)?, &c);
        Ok(())
    })?;
    Ok(out.scaled(&Scalar::sign(sign)))
}

fn expand(
    factors: &[Vector],
    choice: &mut Vec<usize>,
    coef: Scalar,
    f: &mut impl FnMut(&[usize], Scalar) -> Result<(), Error>,
) -> Result<(), Error> {
    let Some((first, rest)) = factors.split_first() else {
        return f(choice, coef);
    };
    for (i, c) in first.iter() {
        choice.push(*i);
        expand(rest, choice, &coef * c, f)?;
        choice.pop();
    }
    Ok(())
}

/// `T(x_0, …, x_{n-1})` for basis inputs indexed by leaf label.
pub fn evaluate_tree_at<O: Operations + ?Sized>(t: &Tree, inputs: &[usize], ops: &O) -> Result<Vector, Error> {
    let labels = t.labels();
    if labels.len() != inputs.len() {
        return Err(Error::IndexOutOfRange {
            index: inputs.len(),
            arity: labels.len(),
        });
    }
    let degrees: Vec<i64> = inputs.iter().map(|&i| ops.basis_degree(i)).collect();
    let sign = koszul_sign(&degrees, &labels)?;
    let planar: Vec<usize> = labels.iter().map(|&l| inputs[l]).collect();
    Ok(eval_planar(t, &planar, ops)?.scaled(&sign))
}

pub fn evaluate_sum_at<O: Operations + ?Sized>(s: &TreeSum, inputs: &[usize], ops: &O) -> Result<Vector, Error> {
    let mut out = Vector::zero();
    for (t, c) in s.iter() {
        out.add_scaled(&evaluate_tree_at(t, inputs, ops)?, c);
    }
    Ok(out)
}

/// Structure constants of the multilinear map `T` over all basis tuples.
pub fn evaluate_tree<O: Operations + ?Sized>(
    t: &Tree,
    ops: &O,
) -> Result<alloc::collections::BTreeMap<Vec<usize>, Vector>, Error> {
    evaluate_sum(&TreeSum::basis(t.clone()), ops)
}

pub fn evaluate_sum<O: Operations + ?Sized>(
    s: &TreeSum,
    ops: &O,
) -> Result<alloc::collections::BTreeMap<Vec<usize>, Vector>, Error> {
    let n = s.keys().next().map_or(0, Tree::arity);
    let mut out = alloc::collections::BTreeMap::new();
    let mut tuple = vec![0usize; n];
    loop {
        let v = evaluate_sum_at(s, &tuple, ops)?;
        if !v.is_zero() {
            out.insert(tuple.clone(), v);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            tuple[i] += 1;
            if tuple[i] < ops.dim() {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}
#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{broken_compatibility, image_of_q, random_structure, susy_sample};
    use CobarVariant::{NInfinity, PInfinity};

    fn nonzero_relations(s: &AlgebraStructure, v: CobarVariant) -> usize {
        let ops = BinaryOperations(s);
        (v.min_symmetric()..=3)
            .map(|k| evaluate_sum(&cobar_generator(k, 3 - k, v).unwrap(), &ops).unwrap().len())
            .sum()
    }

    #[test]
    fn corolla_normalization() {
        let c = |s: &[usize], a: &[usize]| Corolla {
            sym: s.to_vec(),
            anti: a.to_vec(),
        };
        assert_eq!(corolla_normalize(&c(&[1, 0], &[])).unwrap(), (c(&[0, 1], &[]), Scalar::one()));
        assert_eq!(corolla_normalize(&c(&[], &[1, 0])).unwrap(), (c(&[], &[0, 1]), -Scalar::one()));
        assert_eq!(corolla_normalize(&c(&[2, 0], &[1])).unwrap(), (c(&[0, 2], &[1]), Scalar::one()));
        assert!(corolla_normalize(&c(&[0, 0], &[1])).is_err());
    }

    #[test]
    fn dimensions_match_enumeration() {
        for n in 1..=6 {
            for v in [PInfinity, NInfinity] {
                assert_eq!(smodule_dim(n, v), enumerate_corollas(n, v).len() as u128);
            }
        }
        assert_eq!(smodule_dim(2, PInfinity), 3);
        assert_eq!(smodule_dim(2, NInfinity), 4);
        assert_eq!(smodule_dim(1, PInfinity), 1);
    }

    #[test]
    fn graft_builds_left_comb() {
        let c = TreeSum::basis(Corolla::standard(2, 0).tree());
        let g = graft(&c, 0, &c).unwrap();
        let comb = Tree::node(vec![Tree::node(vec![Tree::Leaf(0), Tree::Leaf(1)], vec![]), Tree::Leaf(2)], vec![]);
        let (comb, s) = comb.canonical();
        assert_eq!(g, TreeSum::single(comb, s));
        assert!(graft(&c, 2, &c).is_err());
    }

    #[test]
    fn graft_is_associative() {
        let gens: Vec<TreeSum> = [(2, 0), (1, 1), (0, 2)]
            .iter()
            .map(|&(k, p)| TreeSum::basis(Corolla::standard(k, p).tree()))
            .collect();
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    for i in 0..2 {
                        for j in 0..2 {
                            // sequential: (a ∘_i b) ∘_{i+j} c = a ∘_i (b ∘_j c)
                            let lhs = graft(&graft(a, i, b).unwrap(), i + j, c).unwrap();
                            let rhs = graft(a, i, &graft(b, j, c).unwrap()).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                    // parallel: (a ∘_1 c) ∘_0 b = ± (a ∘_0 b) ∘_2 c
                    let lhs = graft(&graft(a, 1, c).unwrap(), 0, b).unwrap();
                    let rhs = graft(&graft(a, 0, b).unwrap(), 2, c).unwrap();
                    let deg = |t: &TreeSum| t.keys().next().unwrap().degree();
                    assert_eq!(lhs, rhs.scaled(&Scalar::sign(deg(b) * deg(c))));
                }
            }
        }
    }

    #[test]
    fn differential_degree_and_arity() {
        for v in [PInfinity, NInfinity] {
            for n in 2..=4 {
                for k in v.min_symmetric()..=n {
                    let c = Corolla::standard(k, n - k);
                    for t in cobar_generator(k, n - k, v).unwrap().keys() {
                        assert_eq!(t.degree(), c.degree() + 1);
                        assert_eq!(t.arity(), n);
                        assert_eq!(t.vertices(), 2);
                    }
                }
            }
        }
        assert!(cobar_generator(0, 2, PInfinity).is_err());
        assert!(cobar_generator(2, 0, PInfinity).unwrap().is_zero());
    }

    #[test]
    fn extension_terms_appear_for_n_infinity() {
        let p = cobar_generator(1, 2, PInfinity).unwrap();
        let n = cobar_generator(1, 2, NInfinity).unwrap();
        assert!(n.len() > p.len());
        assert!(!cobar_generator(0, 3, NInfinity).unwrap().is_zero());
    }

    #[test]
    fn d_squared_vanishes() {
        for v in [PInfinity, NInfinity] {
            let r = d_squared_check(4, v, false).unwrap();
            assert!(r.passed(), "{v:?}: {:?}", r.failures.first().map(|f| f.generator));
            assert_eq!(r.checked.len(), if v == PInfinity { 9 } else { 12 });
            let r = d_squared_check(4, v, true).unwrap();
            assert!(r.passed(), "{v:?} with unary: {:?}", r.failures.first().map(|f| f.generator));
        }
    }

    #[test]
    fn single_corolla_evaluates_to_its_operation() {
        let s = image_of_q(&[0, 1], 3).unwrap();
        let ops = BinaryOperations(&s);
        let t = Corolla::standard(1, 1).tree();
        for a in 0..s.dim() {
            for b in 0..s.dim() {
                assert_eq!(evaluate_tree_at(&t, &[a, b], &ops).unwrap(), s.product(OpKind::Circ, a, b));
            }
        }
    }

    #[test]
    fn evaluation_respects_grafting() {
        let s = random_structure(4, &[0, 1, 1], &OpKind::ALL, 0.6);
        let ops = BinaryOperations(&s);
        for (k1, p1) in [(2, 0), (1, 1), (0, 2)] {
            for (k2, p2) in [(2, 0), (1, 1), (0, 2)] {
                let a = Corolla::standard(k1, p1).tree();
                let b = Corolla::standard(k2, p2).tree();
                for i in 0..2 {
                    let g = graft(&TreeSum::basis(a.clone()), i, &TreeSum::basis(b.clone())).unwrap();
                    for x in 0..3 {
                        for y in 0..3 {
                            for z in 0..3 {
                                let xs = [x, y, z];
                                let inner_in = &xs[i..i + 2];
                                let inner = evaluate_tree_at(&b, inner_in, &ops).unwrap();
                                let before: i64 = xs[..i].iter().map(|&q| s.degree(q)).sum();
                                let mut want = Vector::zero();
                                for (m, c) in inner.iter() {
                                    let args: Vec<usize> = if i == 0 { vec![*m, z] } else { vec![x, *m] };
                                    want.add_scaled(&evaluate_tree_at(&a, &args, &ops).unwrap(), c);
                                }
                                want = want.scaled(&Scalar::sign(b.degree() * before));
                                assert_eq!(evaluate_sum_at(&g, &xs, &ops).unwrap(), want);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cobar_relations_match_identity_checkers() {
        for degrees in [&[0][..], &[1], &[0, 1]] {
            assert_eq!(nonzero_relations(&image_of_q(degrees, 3).unwrap(), PInfinity), 0);
            assert_eq!(nonzero_relations(&susy_sample(degrees, 3, 5).unwrap(), NInfinity), 0);
        }
        assert!(nonzero_relations(&broken_compatibility(), PInfinity) > 0);
        let r = random_structure(1, &[0, 1, 1], &OpKind::ALL, 0.5);
        assert!(nonzero_relations(&r, NInfinity) > 0);
    }
}
