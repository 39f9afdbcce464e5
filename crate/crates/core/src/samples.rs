//! Deterministic example structures and seeded random instances.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraStructure, BasisElement, DgcaStructure, OpKind, Vector};
use crate::freelie::{FreeLieContext, ImageOfQ};
use crate::{Error, FormalSum, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Im Q` in the free Lie algebra on generators of the given degrees,
/// truncated at `weight`.
pub fn image_of_q(degrees: &[i64], weight: usize) -> Result<AlgebraStructure, Error> {
    let ctx = FreeLieContext::with_degrees(degrees, weight);
    ImageOfQ::new(&ctx)?.structure()
}

/// Declares a zero `⋆`.
pub fn with_star(mut s: AlgebraStructure) -> AlgebraStructure {
    s.ensure_op(OpKind::Star);
    s
}

/// `e ∘ e = e`, `[e • e] = f` with `|e| = 0`, `|f| = 1`: pre-Lie and odd
/// Jacobi hold, compatibility fails.
pub fn broken_compatibility() -> AlgebraStructure {
    let mut s = AlgebraStructure::new(alloc::vec![BasisElement::new("e", 0), BasisElement::new("f", 1)]);
    s.set(OpKind::Circ, 0, 0, 0, Scalar::one());
    s.set(OpKind::Bullet, 0, 0, 1, Scalar::one());
    s
}

fn small(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_int(rng.gen_range(-2..=2))
}

fn random_vector(rng: &mut ChaCha8Rng, targets: &[usize], density: f64) -> Vector {
    let mut v = Vector::zero();
    for &k in targets {
        if rng.gen_bool(density) {
            v.add_term(k, small(rng));
        }
    }
    v
}

fn of_degree(s: &AlgebraStructure, d: i64) -> Vec<usize> {
    (0..s.dim()).filter(|&k| s.degree(k) == d).collect()
}

/// A degree `-1` map sending each basis element to a random combination of
/// elements one degree lower.
pub fn random_degree_lowering(s: &AlgebraStructure, seed: u64) -> Vec<Vector> {
    let mut r = rng(seed);
    (0..s.dim())
        .map(|i| random_vector(&mut r, &of_degree(s, s.degree(i) - 1), 0.5))
        .collect()
}

/// An N-algebra obtained from `Im Q` by a random supersymmetry transformation.
pub fn susy_sample(degrees: &[i64], weight: usize, seed: u64) -> Result<AlgebraStructure, Error> {
    let s = with_star(image_of_q(degrees, weight)?);
    let f = random_degree_lowering(&s, seed);
    crate::algebra::susy_transform(&s, &f)
}

/// Random structure constants with the right degrees and symmetries but no
/// identities imposed.
pub fn random_structure(seed: u64, degrees: &[i64], ops: &[OpKind], density: f64) -> AlgebraStructure {
    let mut r = rng(seed);
    let basis = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| BasisElement::new(format!("e{}", i + 1), d))
        .collect();
    let mut s = AlgebraStructure::new(basis);
    for &op in ops {
        s.ensure_op(op);
        let n = s.dim();
        for a in 0..n {
            let lo = if op == OpKind::Circ { 0 } else { a };
            for b in lo..n {
                let want = s.degree(a) + s.degree(b) + s.op_degree(op);
                let v = random_vector(&mut r, &of_degree(&s, want), density);
                let (da, db) = (s.degree(a), s.degree(b));
                let swap = match op {
                    OpKind::Circ => {
                        s.set_product(op, a, b, v);
                        continue;
                    }
                    OpKind::Bullet => -Scalar::sign((da + 1) * (db + 1)),
                    OpKind::Star => -Scalar::sign(da * db + da + db),
                };
                if a == b && swap == -Scalar::one() {
                    continue;
                }
                s.set_product(op, b, a, v.scaled(&swap));
                s.set_product(op, a, b, v);
            }
        }
    }
    s
}

/// A nonzero pre-Lie algebra on `dim` degree-zero generators, found by
/// seeded rejection sampling.
pub fn random_prelie(seed: u64, dim: usize) -> AlgebraStructure {
    let degrees = alloc::vec![0; dim];
    (0u64..)
        .map(|attempt| random_structure(seed.wrapping_mul(0x9e37_79b9).wrapping_add(attempt), &degrees, &[OpKind::Circ], 0.3))
        .find(|s| s.entries(OpKind::Circ).next().is_some() && crate::algebra::check_prelie(s).is_ok_and(|r| r.is_empty()))
        .expect("pre-Lie structures exist")
}

/// `1, x, dx` with `d x = dx` and `x² = 0`.
pub fn three_element_dgca() -> DgcaStructure {
    truncated_polynomial_dgca(2)
}

/// `k[x]/(x^m) ⊗ Λ(dx)` modulo `x^{m-1} dx`, with `|x| = 0`, `|dx| = 1`.
pub fn truncated_polynomial_dgca(m: usize) -> DgcaStructure {
    assert!(m >= 1);
    let mut basis = Vec::new();
    for i in 0..m {
        basis.push(BasisElement::new(if i == 0 { "1".into() } else { format!("x^{i}") }, 0));
    }
    for i in 0..m - 1 {
        basis.push(BasisElement::new(if i == 0 { "dx".into() } else { format!("x^{i}dx") }, 1));
    }
    // x^i at index i, x^i dx at index m + i
    let form = |i: usize| m + i;
    let mut product = BTreeMap::new();
    for i in 0..m {
        for j in 0..m {
            if i + j < m {
                product.insert((i, j), FormalSum::basis(i + j));
            }
            if j < m - 1 && i + j < m - 1 {
                product.insert((i, form(j)), FormalSum::basis(form(i + j)));
                product.insert((form(j), i), FormalSum::basis(form(i + j)));
            }
        }
    }
    let mut differential = Vec::new();
    for i in 0..m {
        differential.push(if i == 0 {
            Vector::zero()
        } else {
            FormalSum::single(form(i - 1), Scalar::from_int(i as i64))
        });
    }
    differential.extend((0..m - 1).map(|_| Vector::zero()));
    DgcaStructure {
        basis,
        product,
        differential,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_n_algebra, check_prelie2};

    #[test]
    fn samples_are_valid() {
        assert!(check_prelie2(&image_of_q(&[0, 1], 3).unwrap()).unwrap().is_empty());
        let s = susy_sample(&[0, 1], 3, 7).unwrap();
        assert!(s.product(OpKind::Star, 0, 0).is_zero() || s.validate().is_ok());
        assert!(check_n_algebra(&s).unwrap().is_empty());
        for m in 1..=4 {
            assert!(truncated_polynomial_dgca(m).check().is_empty(), "m = {m}");
        }
        for seed in 0..5 {
            assert!(crate::algebra::check_prelie(&random_prelie(seed, 2)).unwrap().is_empty());
        }
        let r = random_structure(3, &[0, 1, 1, 2], &OpKind::ALL, 0.6);
        r.validate().unwrap();
        assert_eq!(random_structure(3, &[0, 1, 1, 2], &OpKind::ALL, 0.6), r);
    }
}
