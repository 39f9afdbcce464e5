//! The free graded Lie algebra on `W ⊕ ΠW` and its contracting homotopy.
//!
//! Lie elements are stored through their image in the tensor algebra, which
//! is injective over the rationals; that image is the normal form, so two
//! Lie elements are equal iff their tensor expansions are. A basis of each
//! weight component is picked greedily among left-normed brackets.
//!
//! `d` sends `w ↦ Πw`, `Πw ↦ 0`; `q` sends `Πw ↦ w`, `w ↦ 0`; both extend as
//! derivations. On the weight `λ` component `Q = q / λ`, which gives
//! `dQ + Qd = id`.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{AlgebraStructure, BasisElement, OpKind};
use crate::linalg::Echelon;
use crate::{Error, FormalSum, Scalar};

/// One letter of the free algebra: a base generator `w` or its shift `Πw`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub base: usize,
    pub shifted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseGenerator {
    pub name: String,
    pub degree: i64,
}

/// Generator set and truncation weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeLieContext {
    pub generators: Vec<BaseGenerator>,
    pub max_weight: usize,
}

pub type TensorWord = Vec<Generator>;

/// An element of the (weight truncated) free Lie algebra.
#[derive(Clone, Debug)]
pub struct FreeLieElement {
    context: Arc<FreeLieContext>,
    terms: FormalSum<TensorWord>,
    truncated: bool,
}

impl PartialEq for FreeLieElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && *self.context == *other.context
    }
}

/// A bracket expression in the generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LieWord {
    Gen(Generator),
    Bracket(Box<LieWord>, Box<LieWord>),
}

impl LieWord {
    pub fn bracket(a: LieWord, b: LieWord) -> LieWord {
        LieWord::Bracket(Box::new(a), Box::new(b))
    }

    /// Left-normed bracket `[[[g1, g2], g3], …]`.
    pub fn left_normed(gens: &[Generator]) -> LieWord {
        let mut it = gens.iter();
        let mut w = LieWord::Gen(*it.next().expect("nonempty word"));
        for g in it {
            w = LieWord::bracket(w, LieWord::Gen(*g));
        }
        w
    }

    pub fn weight(&self) -> usize {
        match self {
            LieWord::Gen(_) => 1,
            LieWord::Bracket(a, b) => a.weight() + b.weight(),
        }
    }

    pub fn render(&self, ctx: &FreeLieContext) -> String {
        match self {
            LieWord::Gen(g) => ctx.generator_name(*g),
            LieWord::Bracket(a, b) => alloc::format!("[{},{}]", a.render(ctx), b.render(ctx)),
        }
    }
}

impl FreeLieContext {
    pub fn new(generators: Vec<BaseGenerator>, max_weight: usize) -> Arc<Self> {
        Arc::new(FreeLieContext {
            generators,
            max_weight,
        })
    }

    /// `n` base generators `w1..wn` with the given degrees.
    pub fn with_degrees(degrees: &[i64], max_weight: usize) -> Arc<Self> {
        let gens = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| BaseGenerator {
                name: alloc::format!("w{}", i + 1),
                degree: d,
            })
            .collect();
        Self::new(gens, max_weight)
    }

    pub fn degree(&self, g: Generator) -> i64 {
        self.generators[g.base].degree + g.shifted as i64
    }

    pub fn word_degree(&self, w: &[Generator]) -> i64 {
        w.iter().map(|&g| self.degree(g)).sum()
    }

    pub fn generator_name(&self, g: Generator) -> String {
        let n = &self.generators[g.base].name;
        if g.shifted {
            alloc::format!("Π{n}")
        } else {
            n.clone()
        }
    }

    /// All letters in their fixed total order.
    pub fn letters(&self) -> Vec<Generator> {
        (0..self.generators.len())
            .flat_map(|base| {
                [false, true]
                    .into_iter()
                    .map(move |shifted| Generator { base, shifted })
            })
            .collect()
    }
}

fn expand(word: &LieWord, ctx: &FreeLieContext) -> FormalSum<TensorWord> {
    match word {
        LieWord::Gen(g) => FormalSum::basis(alloc::vec![*g]),
        LieWord::Bracket(a, b) => tensor_bracket(&expand(a, ctx), &expand(b, ctx), ctx, usize::MAX).0,
    }
}

/// `[x, y] = xy - (-1)^{|x||y|} yx` termwise; drops words longer than `max`.
fn tensor_bracket(
    x: &FormalSum<TensorWord>,
    y: &FormalSum<TensorWord>,
    ctx: &FreeLieContext,
    max: usize,
) -> (FormalSum<TensorWord>, bool) {
    let mut out = FormalSum::zero();
    let mut dropped = false;
    for (u, cu) in x.iter() {
        for (v, cv) in y.iter() {
            if u.len() + v.len() > max {
                dropped = true;
                continue;
            }
            let c = cu * cv;
            let mut uv = u.clone();
            uv.extend_from_slice(v);
            let mut vu = v.clone();
            vu.extend_from_slice(u);
            let s = ctx.word_degree(u) * ctx.word_degree(v);
            out.add_term(uv, c.clone());
            let mut c2 = -c;
            c2.apply_sign(s);
            out.add_term(vu, c2);
        }
    }
    (out, dropped)
}

/// Applies the derivation of degree `deg` given on letters by `on_letter`.
fn derivation(
    x: &FormalSum<TensorWord>,
    ctx: &FreeLieContext,
    deg: i64,
    on_letter: impl Fn(Generator) -> Option<Generator>,
) -> FormalSum<TensorWord> {
    let mut out = FormalSum::zero();
    for (w, c) in x.iter() {
        let mut before = 0i64;
        for (i, &g) in w.iter().enumerate() {
            if let Some(h) = on_letter(g) {
                let mut nw = w.clone();
                nw[i] = h;
                let mut cc = c.clone();
                cc.apply_sign(deg * before);
                out.add_term(nw, cc);
            }
            before += ctx.degree(g);
        }
    }
    out
}

impl FreeLieElement {
    pub fn context(&self) -> &Arc<FreeLieContext> {
        &self.context
    }

    pub fn zero(ctx: &Arc<FreeLieContext>) -> Self {
        FreeLieElement {
            context: ctx.clone(),
            terms: FormalSum::zero(),
            truncated: false,
        }
    }

    pub fn generator(ctx: &Arc<FreeLieContext>, base: usize, shifted: bool) -> Self {
        Self::from_word(ctx, &LieWord::Gen(Generator { base, shifted }))
    }

    pub fn from_word(ctx: &Arc<FreeLieContext>, word: &LieWord) -> Self {
        let mut terms = expand(word, ctx);
        let truncated = terms.retain(|w| w.len() <= ctx.max_weight);
        FreeLieElement {
            context: ctx.clone(),
            terms,
            truncated,
        }
    }

    /// Tensor algebra image (the normal form).
    pub fn tensor(&self) -> &FormalSum<TensorWord> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// Whether any operation producing this value dropped terms above the
    /// truncation weight.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Degree if homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|w| self.context.word_degree(w));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn weights(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.terms.keys().map(Vec::len).collect();
        w.dedup();
        w.sort_unstable();
        w.dedup();
        w
    }

    fn check(&self, other: &Self) -> Result<(), Error> {
        if Arc::ptr_eq(&self.context, &other.context) || *self.context == *other.context {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn with_terms(&self, terms: FormalSum<TensorWord>, truncated: bool) -> Self {
        FreeLieElement {
            context: self.context.clone(),
            terms,
            truncated,
        }
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

    /// Graded Lie bracket; terms above the truncation weight are dropped and
    /// the result is flagged.
    pub fn bracket(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        let (terms, dropped) = tensor_bracket(&self.terms, &other.terms, &self.context, self.context.max_weight);
        Ok(self.with_terms(terms, dropped || self.truncated || other.truncated))
    }

    /// The derivation `d`: `w ↦ Πw`, `Πw ↦ 0`.
    pub fn apply_d(&self) -> Self {
        let t = derivation(&self.terms, &self.context, 1, |g| {
            (!g.shifted).then_some(Generator { base: g.base, shifted: true })
        });
        self.with_terms(t, self.truncated)
    }

    /// The unscaled derivation `q`: `Πw ↦ w`, `w ↦ 0`.
    pub fn apply_q(&self) -> Self {
        let t = derivation(&self.terms, &self.context, -1, |g| {
            g.shifted.then_some(Generator { base: g.base, shifted: false })
        });
        self.with_terms(t, self.truncated)
    }

    /// `Q = q / λ` on each weight `λ` component.
    pub fn apply_big_q(&self) -> Self {
        let q = self.apply_q();
        let terms = q
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c * &Scalar::ratio(1, w.len() as i64)))
            .collect();
        self.with_terms(terms, self.truncated)
    }

    /// Whether `Q d x = x`, i.e. `x ∈ Im Q`.
    pub fn in_image_of_q(&self) -> bool {
        self.apply_d().apply_big_q() == *self
    }

    fn require_image_of_q(&self, which: &str) -> Result<(), Error> {
        if self.in_image_of_q() {
            Ok(())
        } else {
            Err(Error::NotInImageOfQ(alloc::format!("Q d {which} != {which}")))
        }
    }

    /// `a ∘ b := Q[da, b]` for `a, b ∈ Im Q`.
    pub fn induced_circ(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        self.require_image_of_q("a")?;
        other.require_image_of_q("b")?;
        Ok(self.apply_d().bracket(other)?.apply_big_q())
    }

    /// `[a • b] := Q[da, db]` for `a, b ∈ Im Q`.
    pub fn induced_bullet(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        self.require_image_of_q("a")?;
        other.require_image_of_q("b")?;
        Ok(self.apply_d().bracket(&other.apply_d())?.apply_big_q())
    }
}

impl fmt::Display for FreeLieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for g in w {
                write!(f, "·{}", self.context.generator_name(*g))?;
            }
        }
        Ok(())
    }
}

/// Left-normed brackets forming a basis of the weight `weight` component.
pub fn lie_basis(ctx: &Arc<FreeLieContext>, weight: usize) -> Result<Vec<LieWord>, Error> {
    if weight < 1 {
        return Err(Error::WeightOutOfRange);
    }
    let letters = ctx.letters();
    let mut basis = Vec::new();
    let mut span = Echelon::new();
    let mut idx = alloc::vec![0usize; weight];
    loop {
        let gens: Vec<Generator> = idx.iter().map(|&i| letters[i]).collect();
        let word = LieWord::left_normed(&gens);
        let t = expand(&word, ctx);
        if !t.is_zero() && span.insert(&t) {
            basis.push(word);
        }
        // odometer over letter sequences in lexicographic order
        let mut pos = weight;
        loop {
            if pos == 0 {
                return Ok(basis);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < letters.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// A finite basis of `V = Im Q` up to the truncation weight, with the
/// induced pre-Lie² structure constants.
pub struct ImageOfQ {
    pub context: Arc<FreeLieContext>,
    pub basis: Vec<FreeLieElement>,
    pub names: Vec<String>,
    span: Echelon<TensorWord>,
}

impl ImageOfQ {
    pub fn new(ctx: &Arc<FreeLieContext>) -> Result<Self, Error> {
        let mut basis = Vec::new();
        let mut names = Vec::new();
        let mut span = Echelon::new();
        for weight in 1..=ctx.max_weight {
            for word in lie_basis(ctx, weight)? {
                let v = FreeLieElement::from_word(ctx, &word).apply_big_q();
                // Q is homogeneous, so only degree-homogeneous pieces appear
                if !v.is_zero() && !span.contains(v.tensor()) {
                    span.insert(v.tensor());
                    names.push(alloc::format!("Q{}", word.render(ctx)));
                    basis.push(v);
                }
            }
        }
        Ok(ImageOfQ {
            context: ctx.clone(),
            basis,
            names,
            span,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an element of `Im Q` in the chosen basis.
    pub fn coordinates(&self, x: &FreeLieElement) -> Result<FormalSum<usize>, Error> {
        self.span
            .express(x.tensor())
            .ok_or_else(|| Error::NotInImageOfQ("element outside the truncated span".to_string()))
    }

    /// The pre-Lie² structure `(∘, •)` on the truncated `Im Q`.
    pub fn structure(&self) -> Result<AlgebraStructure, Error> {
        let basis = self
            .basis
            .iter()
            .zip(&self.names)
            .map(|(b, n)| BasisElement {
                name: n.clone(),
                degree: b.degree().expect("Q of a homogeneous word is homogeneous"),
            })
            .collect();
        let mut s = AlgebraStructure::new(basis);
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let circ = self.coordinates(&a.induced_circ(b)?)?;
                let bullet = self.coordinates(&a.induced_bullet(b)?)?;
                for (k, c) in circ.iter() {
                    s.set(OpKind::Circ, i, j, *k, c.clone());
                }
                for (k, c) in bullet.iter() {
                    s.set(OpKind::Bullet, i, j, *k, c.clone());
                }
            }
        }
        s.ensure_op(OpKind::Circ);
        s.ensure_op(OpKind::Bullet);
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx1() -> Arc<FreeLieContext> {
        FreeLieContext::with_degrees(&[0], 4)
    }

    #[test]
    fn weight_one_basis() {
        let b = lie_basis(&ctx1(), 1).unwrap();
        assert_eq!(b.len(), 2);
        assert!(lie_basis(&ctx1(), 0).is_err());
    }

    #[test]
    fn even_self_bracket_vanishes_odd_does_not() {
        let c = ctx1();
        let w = FreeLieElement::generator(&c, 0, false);
        let pw = FreeLieElement::generator(&c, 0, true);
        assert!(w.bracket(&w).unwrap().is_zero());
        let pp = pw.bracket(&pw).unwrap();
        // [Πw, Πw] = 2 Πw Πw for |Πw| odd
        assert_eq!(
            pp.tensor(),
            &FormalSum::single(
                alloc::vec![Generator { base: 0, shifted: true }; 2],
                Scalar::from_int(2)
            )
        );
    }

    #[test]
    fn d_on_generators() {
        let c = ctx1();
        let w = FreeLieElement::generator(&c, 0, false);
        let pw = FreeLieElement::generator(&c, 0, true);
        assert_eq!(w.apply_d(), pw);
        assert!(pw.apply_d().is_zero());
    }

    #[test]
    fn truncation_is_flagged() {
        let c = FreeLieContext::with_degrees(&[0, 0], 1);
        let a = FreeLieElement::generator(&c, 0, false);
        let b = FreeLieElement::generator(&c, 1, false);
        let ab = a.bracket(&b).unwrap();
        assert!(ab.is_zero());
        assert!(ab.truncated());
    }

    #[test]
    fn context_mismatch() {
        let a = FreeLieElement::generator(&ctx1(), 0, false);
        let b = FreeLieElement::generator(&FreeLieContext::with_degrees(&[1], 4), 0, false);
        assert_eq!(a.bracket(&b), Err(Error::ContextMismatch));
    }

    #[test]
    fn circ_requires_image_of_q() {
        let c = ctx1();
        let pw = FreeLieElement::generator(&c, 0, true);
        let w = FreeLieElement::generator(&c, 0, false);
        assert!(matches!(pw.induced_circ(&w), Err(Error::NotInImageOfQ(_))));
    }

    fn three_even() -> (Arc<FreeLieContext>, [FreeLieElement; 3]) {
        let c = FreeLieContext::with_degrees(&[0, 0, 0], 3);
        let w = [0, 1, 2].map(|i| FreeLieElement::generator(&c, i, false));
        (c, w)
    }

    #[test]
    fn circ_of_generators_is_half_bracket() {
        let (_, [w1, w2, _]) = three_even();
        let lhs = w1.induced_circ(&w2).unwrap();
        let rhs = w1.bracket(&w2).unwrap().scale(&Scalar::ratio(1, 2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bullet_of_generators() {
        for deg in [0i64, 1, 2] {
            let c = FreeLieContext::with_degrees(&[deg, 0], 3);
            let w1 = FreeLieElement::generator(&c, 0, false);
            let w2 = FreeLieElement::generator(&c, 1, false);
            let pw1 = FreeLieElement::generator(&c, 0, true);
            let pw2 = FreeLieElement::generator(&c, 1, true);
            let half = Scalar::ratio(1, 2);
            let a = w1.bracket(&pw2).unwrap().scale(&half);
            let b = pw1.bracket(&w2).unwrap().scale(&(half * Scalar::sign(deg)));
            assert_eq!(w1.induced_bullet(&w2).unwrap(), a.sub(&b).unwrap());
        }
    }

    #[test]
    fn nested_circ_coefficients() {
        let (_, [w1, w2, w3]) = three_even();
        let inner = w2.induced_circ(&w3).unwrap();
        let lhs = w1.induced_circ(&inner).unwrap();
        let rhs = w1.bracket(&w2.bracket(&w3).unwrap()).unwrap().scale(&Scalar::ratio(1, 6));
        assert_eq!(lhs, rhs);
        let outer = w1.induced_circ(&w2).unwrap().induced_circ(&w3).unwrap();
        let rhs = w1.bracket(&w2).unwrap().bracket(&w3).unwrap().scale(&Scalar::ratio(1, 3));
        assert_eq!(outer, rhs);
    }

    #[test]
    fn homotopy_identities_on_basis() {
        let c = FreeLieContext::with_degrees(&[0, 1], 4);
        for weight in 1..=4 {
            for word in lie_basis(&c, weight).unwrap() {
                let x = FreeLieElement::from_word(&c, &word);
                let back = x.apply_d().apply_big_q().add(&x.apply_big_q().apply_d()).unwrap();
                assert_eq!(back, x, "{}", word.render(&c));
                assert!(x.apply_d().apply_d().is_zero());
                assert!(x.apply_big_q().apply_big_q().is_zero());
            }
        }
    }
}
