//! Dense linear algebra over a finite field.

use crate::field::{FieldElem, FiniteField};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(k: &FiniteField, rows: &mut [Vec<FieldElem>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !k.is_zero(rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = k.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || k.is_zero(row[c]) {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = k.sub(*x, k.mul(f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{v : rows * v = 0}`.
pub fn nullspace(k: &FiniteField, rows: &[Vec<FieldElem>], ncols: usize) -> Vec<Vec<FieldElem>> {
    let mut m = rows.to_vec();
    let pivots = rref(k, &mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![k.zero(); ncols];
            v[f] = k.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = k.neg(m[r][f]);
            }
            v
        })
        .collect()
}

/// All `k`-linear combinations of `basis`, in a fixed order.
pub fn span<'a>(k: &'a FiniteField, basis: &'a [Vec<FieldElem>], len: usize) -> impl Iterator<Item = Vec<FieldElem>> + 'a {
    let q = k.order();
    let total = q.pow(basis.len() as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![k.zero(); len];
        for b in basis {
            let c = k.element(idx % q);
            idx /= q;
            if k.is_zero(c) {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(b) {
                *x = k.add(*x, k.mul(c, y));
            }
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn nullspace_vectors_are_annihilated(entries in prop::collection::vec(0i64..5, 12), nrows in 1usize..4) {
            let k = FiniteField::new(5, 1).unwrap();
            let ncols = 4;
            let rows: Vec<Vec<FieldElem>> = entries.chunks(ncols).take(nrows).map(|c| c.iter().map(|&x| k.from_int(x)).collect()).collect();
            let ns = nullspace(&k, &rows, ncols);
            let mut m = rows.clone();
            let rank = rref(&k, &mut m, ncols).len();
            prop_assert_eq!(ns.len() + rank, ncols);
            for v in &ns {
                for r in &rows {
                    let dot = r.iter().zip(v).fold(k.zero(), |acc, (&a, &b)| k.add(acc, k.mul(a, b)));
                    prop_assert!(k.is_zero(dot));
                }
            }
        }
    }

    #[test]
    fn span_enumerates_the_subspace() {
        let k = FiniteField::new(3, 1).unwrap();
        let basis = vec![vec![k.one(), k.zero(), k.one()], vec![k.zero(), k.one(), k.one()]];
        let all: std::collections::HashSet<_> = span(&k, &basis, 3).collect();
        assert_eq!(all.len(), 9);
    }
}
