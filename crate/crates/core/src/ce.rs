//! Chevalley-Eilenberg complexes on `⊙(g[1])` for `g = V ⊕ ΠV`, the split
//! `d = d_∘ + d_•` and operadic homology of pre-Lie² algebras.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::algebra::{check_prelie2, suspend_to_dgla, AlgebraStructure, DgLieStructure, Vector};
use crate::linalg::SparseMatrix;
use crate::sign::sort_with_parity;
use crate::{Error, FormalSum, Scalar};

/// A monomial in `⊙(g[1])`: sorted indices of `g` basis elements.
pub type Monomial = Vec<usize>;

/// Which part of the bracket to use, by how it changes the number of `Π`
/// letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    All,
    /// Keeps the number of `Π` letters.
    Circ,
    /// Lowers it by one.
    Bullet,
}

/// Graded basis of `⊙^{≤ m}(g[1])`, by word length.
struct SymmetricBasis {
    shifted: Vec<i64>,
    by_length: Vec<Vec<Monomial>>,
    index: BTreeMap<Monomial, usize>,
}

impl SymmetricBasis {
    fn new(degrees: &[i64], max_len: usize, allowed: impl Fn(&Monomial) -> bool) -> Self {
        let shifted: Vec<i64> = degrees.iter().map(|d| d - 1).collect();
        let mut by_length: Vec<Vec<Monomial>> = alloc::vec![alloc::vec![Vec::new()]];
        for len in 1..=max_len {
            let mut next = Vec::new();
            for m in &by_length[len - 1] {
                let start = m.last().copied().unwrap_or(0);
                for (i, &sh) in shifted.iter().enumerate().skip(start) {
                    // odd letters square to zero
                    if m.last() == Some(&i) && sh & 1 == 1 {
                        continue;
                    }
                    let mut w = m.clone();
                    w.push(i);
                    next.push(w);
                }
            }
            by_length.push(next);
        }
        for level in by_length.iter_mut() {
            level.retain(|m| allowed(m));
        }
        let mut index = BTreeMap::new();
        for level in &by_length {
            for m in level {
                let n = index.len();
                index.insert(m.clone(), n);
            }
        }
        SymmetricBasis {
            shifted,
            by_length,
            index,
        }
    }

    fn len(&self) -> usize {
        self.index.len()
    }

    /// `z ⊙ rest` in canonical order with its sign, or `None` if it vanishes
    /// or is not in the basis.
    fn insert_front(&self, z: usize, rest: &[usize]) -> Option<(usize, Scalar)> {
        let mut w: Vec<usize> = Vec::with_capacity(rest.len() + 1);
        w.push(z);
        w.extend_from_slice(rest);
        let odd = sort_with_parity(&mut w, |&i| self.shifted[i]);
        if w.windows(2).any(|p| p[0] == p[1] && self.shifted[p[0]] & 1 == 1) {
            return None;
        }
        let idx = *self.index.get(&w)?;
        Some((idx, Scalar::sign(odd as i64)))
    }
}

fn pi_count(m: &[usize], n: usize) -> usize {
    m.iter().filter(|&&i| i >= n).count()
}

/// `ℓ₂(sx, sy) = (-1)^{|x|} s[x, y]`, restricted to `part`.
fn l2(g: &DgLieStructure, n: usize, x: usize, y: usize, part: Part) -> Vector {
    let pis = (x >= n) as usize + (y >= n) as usize;
    let b = g.bracket_basis(x, y);
    let kept = b.iter().filter(|(k, _)| {
        let out = (**k >= n) as usize;
        match part {
            Part::All => true,
            Part::Circ => out == pis,
            Part::Bullet => out + 1 == pis,
        }
    });
    kept.map(|(k, c)| (*k, c * &Scalar::sign(g.degree(x)))).collect()
}

/// The coderivation extending `ℓ₂`, from `source` words to `target` words.
fn ce_matrix(g: &DgLieStructure, n: usize, basis: &SymmetricBasis, part: Part, target: Option<&SymmetricBasis>) -> SparseMatrix {
    let target = target.unwrap_or(basis);
    let mut columns = alloc::vec![FormalSum::zero(); basis.len()];
    for level in &basis.by_length {
        for m in level {
            let col = &mut columns[basis.index[m]];
            for i in 0..m.len() {
                for j in i + 1..m.len() {
                    // move letters i and j to the front
                    let si: i64 = m[..i].iter().map(|&k| basis.shifted[k]).sum();
                    let sj: i64 = m[..j].iter().map(|&k| basis.shifted[k]).sum::<i64>() - basis.shifted[m[i]];
                    let eps = Scalar::sign(basis.shifted[m[i]] * si + basis.shifted[m[j]] * sj);
                    let rest: Vec<usize> = m
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i && *k != j)
                        .map(|(_, &v)| v)
                        .collect();
                    for (z, c) in l2(g, n, m[i], m[j], part).iter() {
                        if let Some((idx, s)) = target.insert_front(*z, &rest) {
                            col.add_term(idx, &(&eps * c) * &s);
                        }
                    }
                }
            }
        }
    }
    SparseMatrix {
        rows: target.len(),
        columns,
    }
}

/// Result of [`ce_bicomplex`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicomplexReport {
    pub dimension: usize,
    pub d_circ: SparseMatrix,
    pub d_bullet: SparseMatrix,
    /// Nonzero entries of `d_∘²`, `d_•²` and `d_∘ d_• + d_• d_∘`.
    pub circ_square_residue: usize,
    pub bullet_square_residue: usize,
    pub anticommutator_residue: usize,
}

impl BicomplexReport {
    pub fn commutes(&self) -> bool {
        self.anticommutator_residue == 0
    }

    pub fn passed(&self) -> bool {
        self.circ_square_residue == 0 && self.bullet_square_residue == 0 && self.commutes()
    }
}

fn require_i_and_ii(s: &AlgebraStructure) -> Result<(), Error> {
    let report = check_prelie2(s)?;
    let bad = report
        .identities_failed()
        .into_iter()
        .find(|name| *name != "compatibility");
    match bad {
        Some(name) => Err(Error::Precondition(alloc::format!("{name} fails"))),
        None => Ok(()),
    }
}

/// `d_∘` and `d_•` on `⊙^{≤ m}V ⊗ ∧^{≤ m}V`, realised as `⊙^{≤ m}(g[1])`.
pub fn ce_bicomplex(s: &AlgebraStructure, max_len: usize) -> Result<BicomplexReport, Error> {
    if max_len < 2 {
        return Err(Error::Domain("word length bound must be at least 2".into()));
    }
    require_i_and_ii(s)?;
    let mut plain = s.clone();
    plain.remove_op(crate::algebra::OpKind::Star);
    let g = suspend_to_dgla(&plain)?;
    let n = s.dim();
    let degrees: Vec<i64> = g.basis.iter().map(|b| b.degree).collect();
    let basis = SymmetricBasis::new(&degrees, max_len, |_| true);
    let dc = ce_matrix(&g, n, &basis, Part::Circ, None);
    let db = ce_matrix(&g, n, &basis, Part::Bullet, None);
    let anti = dc.compose(&db).add(&db.compose(&dc), &Scalar::one());
    Ok(BicomplexReport {
        dimension: basis.len(),
        circ_square_residue: dc.compose(&dc).nnz(),
        bullet_square_residue: db.compose(&db).nnz(),
        anticommutator_residue: anti.nnz(),
        d_circ: dc,
        d_bullet: db,
    })
}

/// Homology of the quotient complex `J = ⊙(g[1]) / ⊙(V[1])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    /// `dims[k]` is the dimension of `J` in word length `k` (index 0 unused).
    pub dims: Vec<usize>,
    /// `ranks[k]` is the rank of `d: J_k → J_{k-1}`.
    pub ranks: Vec<usize>,
    /// `homology[k] = dim H_k(J)`.
    pub homology: Vec<usize>,
    pub full_d_squared_zero: bool,
    pub sub_d_squared_zero: bool,
    pub quotient_d_squared_zero: bool,
    pub subcomplex_closed: bool,
}

/// Operadic homology of a pre-Lie² algebra in word lengths `1..=m`.
pub fn operadic_homology(s: &AlgebraStructure, m: usize) -> Result<HomologyReport, Error> {
    if m < 1 {
        return Err(Error::Domain("word length bound must be at least 1".into()));
    }
    let report = check_prelie2(s)?;
    if !report.is_empty() {
        return Err(Error::Precondition("structure is not pre-Lie²".into()));
    }
    let mut plain = s.clone();
    plain.remove_op(crate::algebra::OpKind::Star);
    let g = suspend_to_dgla(&plain)?;
    let n = s.dim();
    let degrees: Vec<i64> = g.basis.iter().map(|b| b.degree).collect();
    // one extra length so that the top homology group is exact
    let full = SymmetricBasis::new(&degrees, m + 1, |_| true);
    let sub = SymmetricBasis::new(&degrees, m + 1, |w| pi_count(w, n) == 0);
    let quot = SymmetricBasis::new(&degrees, m + 1, |w| pi_count(w, n) > 0);
    let d_full = ce_matrix(&g, n, &full, Part::All, None);
    let d_sub_in_full = ce_matrix(&g, n, &sub, Part::All, Some(&full));
    let d_sub = ce_matrix(&g, n, &sub, Part::All, None);
    let d_quot = ce_matrix(&g, n, &quot, Part::All, None);
    // the subcomplex is closed iff computing inside the full space loses nothing
    let subcomplex_closed = d_sub_in_full.nnz() == d_sub.nnz();

    let mut dims = alloc::vec![0usize; m + 2];
    let mut ranks = alloc::vec![0usize; m + 2];
    for (len, level) in quot.by_length.iter().enumerate() {
        dims[len] = level.len();
        let cols: Vec<Vector> = level.iter().map(|w| d_quot.columns[quot.index[w]].clone()).collect();
        ranks[len] = crate::linalg::rank(&cols);
    }
    let homology = (0..=m)
        .map(|k| if k == 0 { 0 } else { dims[k] - ranks[k] - ranks[k + 1] })
        .collect();
    dims.truncate(m + 1);
    ranks.truncate(m + 1);
    Ok(HomologyReport {
        dims,
        ranks,
        homology,
        full_d_squared_zero: d_full.compose(&d_full).is_zero(),
        sub_d_squared_zero: d_sub.compose(&d_sub).is_zero(),
        quotient_d_squared_zero: d_quot.compose(&d_quot).is_zero(),
        subcomplex_closed,
    })
}
