//! Koszul signs and permutation parities.
//!
//! A permutation is given as an array `perm` with `perm[i]` the original
//! position of the item that ends up at position `i`.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Scalar};

/// Checks that `perm` is a bijection on `0..perm.len()`.
pub fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// Parity of the Koszul sign for reordering homogeneous items of the given
/// degrees. `true` means the sign is `-1`.
pub fn koszul_parity(degrees: &[i64], perm: &[usize]) -> bool {
    debug_assert!(is_permutation(perm) && perm.len() == degrees.len());
    let mut odd = false;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            // items originally at perm[j] < perm[i] have been moved past each other
            if perm[j] < perm[i] && degrees[perm[i]] & 1 == 1 && degrees[perm[j]] & 1 == 1 {
                odd = !odd;
            }
        }
    }
    odd
}

/// Koszul sign `±1` of reordering a word of homogeneous symbols.
pub fn koszul_sign(degrees: &[i64], perm: &[usize]) -> Result<Scalar, Error> {
    if perm.len() != degrees.len() || !is_permutation(perm) {
        return Err(Error::MalformedPermutation);
    }
    Ok(if koszul_parity(degrees, perm) {
        -Scalar::one()
    } else {
        Scalar::one()
    })
}

/// Parity of a permutation by inversion count.
pub fn permutation_parity(perm: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[j] < perm[i] {
                odd = !odd;
            }
        }
    }
    odd
}

/// Composite permutation: applying `q` and then `p` to a word.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&i| q[i]).collect()
}

/// Applies `perm` to a word.
pub fn permute<T: Clone>(word: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&i| word[i].clone()).collect()
}

/// Parity `(-1)^σ` of the permutation taking `ordered` to the concatenation of
/// `blocks`. Each block must be ascending with respect to `ordered`, blocks
/// must be disjoint and cover `ordered`.
pub fn block_shuffle_parity<L: PartialEq>(ordered: &[L], blocks: &[&[L]]) -> Result<Scalar, Error> {
    let mut perm = Vec::with_capacity(ordered.len());
    for block in blocks {
        let mut last: Option<usize> = None;
        for item in block.iter() {
            let pos = ordered
                .iter()
                .position(|x| x == item)
                .ok_or(Error::MalformedPartition)?;
            if last.is_some_and(|l| l >= pos) {
                return Err(Error::MalformedPartition);
            }
            last = Some(pos);
            perm.push(pos);
        }
    }
    if perm.len() != ordered.len() || !is_permutation(&perm) {
        return Err(Error::MalformedPartition);
    }
    Ok(if permutation_parity(&perm) {
        -Scalar::one()
    } else {
        Scalar::one()
    })
}

/// Sorts `items` ascending and returns the Koszul parity of the sort, where
/// swapping two items costs a sign iff both have odd `degree`.
pub fn sort_with_parity<T: Ord + Clone>(items: &mut [T], degree: impl Fn(&T) -> i64) -> bool {
    // insertion sort; the inputs here are tiny
    let mut odd = false;
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 && items[j - 1] > items[j] {
            if degree(&items[j - 1]) & 1 == 1 && degree(&items[j]) & 1 == 1 {
                odd = !odd;
            }
            items.swap(j - 1, j);
            j -= 1;
        }
    }
    odd
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_basics() {
        assert_eq!(koszul_sign(&[1, 2, 3], &[0, 1, 2]).unwrap(), Scalar::one());
        assert_eq!(koszul_sign(&[1, 1], &[1, 0]).unwrap(), -Scalar::one());
        assert_eq!(koszul_sign(&[1, 2], &[1, 0]).unwrap(), Scalar::one());
        assert!(koszul_sign(&[1, 1], &[0, 0]).is_err());
    }

    #[test]
    fn block_shuffle_examples() {
        assert_eq!(
            block_shuffle_parity(&[1, 2, 3], &[&[1, 2, 3], &[]]).unwrap(),
            Scalar::one()
        );
        assert_eq!(block_shuffle_parity(&[1, 2], &[&[2], &[1]]).unwrap(), -Scalar::one());
        // inversions of (2,4,1,3): (2,1),(4,1),(4,3) -> three
        assert_eq!(
            block_shuffle_parity(&[1, 2, 3, 4], &[&[2, 4], &[1, 3]]).unwrap(),
            -Scalar::one()
        );
    }

    #[test]
    fn block_shuffle_rejects_bad_partitions() {
        assert!(block_shuffle_parity(&[1, 2, 3], &[&[1, 2], &[2, 3]]).is_err());
        assert!(block_shuffle_parity(&[1, 2, 3], &[&[1], &[3]]).is_err());
        assert!(block_shuffle_parity(&[1, 2, 3], &[&[2, 1], &[3]]).is_err());
    }

    #[test]
    fn sort_parity_counts_odd_swaps() {
        let mut v = [3, 1, 2];
        assert!(!sort_with_parity(&mut v, |_| 1));
        assert_eq!(v, [1, 2, 3]);
        let mut w = [2, 1];
        assert!(sort_with_parity(&mut w, |_| 1));
        let mut u = [2, 1];
        assert!(!sort_with_parity(&mut u, |x| *x));
    }
}
