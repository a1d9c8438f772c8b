//! The Bruhat-Tits tree of `GL2(k((t)))`.
//!
//! Every vertex is the class of `(t^m, f; 0, 1)` modulo `GL2(k[[t]])` and
//! scalars, where only `f mod t^m` matters. The normal form keeps the level
//! `m` and the finitely many terms of `f` below `t^m`, so vertex equality is
//! structural.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::coordring::Mat2;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FiniteField};
use crate::laurent::{LaurentRing, LaurentSeries, Val};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    pub m: i64,
    /// Nonzero coefficients of `f` at exponents `< m`.
    pub tail: BTreeMap<i64, FieldElem>,
}

impl TreeVertex {
    pub fn new(m: i64, tail: BTreeMap<i64, FieldElem>) -> Self {
        let tail = tail.into_iter().filter(|&(e, c)| e < m && c != FieldElem::default()).collect();
        TreeVertex { m, tail }
    }

    /// The class of `K` itself.
    pub fn base() -> Self {
        TreeVertex { m: 0, tail: BTreeMap::new() }
    }

    pub fn lowest_exponent(&self) -> Option<i64> {
        self.tail.keys().next().copied()
    }

    pub fn tail_series(&self, k: &FiniteField) -> LaurentSeries {
        LaurentSeries::from_terms(k, &self.tail)
    }

    /// The representative `(t^m, f; 0, 1)`.
    pub fn matrix(&self, k: &FiniteField) -> Mat2<LaurentSeries> {
        Mat2::new(
            LaurentSeries::monomial(k, k.one(), self.m),
            self.tail_series(k),
            LaurentSeries::zero(),
            LaurentSeries::monomial(k, k.one(), 0),
        )
    }

    pub fn format(&self, k: &FiniteField) -> String {
        let f = self.tail_series(k).format(k);
        format!("(m={}, f={})", self.m, f)
    }
}

/// Serialized as `{"m": .., "tail": [[exp, coeff], ..]}` with field indices.
#[derive(Serialize)]
struct VertexRepr {
    m: i64,
    tail: Vec<(i64, u32)>,
}

impl Serialize for TreeVertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VertexRepr { m: self.m, tail: self.tail.iter().map(|(&e, c)| (e, c.index())).collect() }.serialize(s)
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, tail=[", self.m)?;
        for (i, (e, c)) in self.tail.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}*t^{}", c.index(), e)?;
        }
        f.write_str("])")
    }
}

/// Normal form of `phi(f1, f2)`, the class of `(f1, f2; 0, 1)`.
pub fn phi(k: &FiniteField, f1: &LaurentSeries, f2: &LaurentSeries) -> Result<TreeVertex> {
    let m = f1.valuation()?;
    Ok(TreeVertex::new(m, f2.terms_below(k, m)?))
}

/// Reduces `g` by right multiplication with `GL2(k[[t]])` and scalars.
pub fn vertex_from_matrix(lr: &LaurentRing, g: &Mat2<LaurentSeries>) -> Result<TreeVertex> {
    let k = lr.field();
    let det = g.det(lr);
    let vdet = match det.val() {
        Val::At(v) => v,
        Val::Zero => return Err(Error::Singular),
        Val::Unknown { prec } => return Err(Error::precision(prec + 1, prec)),
    };
    // exact valuation, or a lower bound when every known coefficient vanishes
    let floor = |s: &LaurentSeries| match s.val() {
        Val::At(v) => (Some(v), v),
        Val::Zero => (None, i64::MAX),
        Val::Unknown { prec } => (None, prec),
    };
    let ((vc, bc), (vd, bd)) = (floor(&g.c), floor(&g.d));
    // pivot on the bottom-row entry of least valuation
    let (s, pivot, other) = match (vc, vd) {
        (_, Some(d)) if d <= bc => (d, &g.d, &g.b),
        (Some(c), _) if c <= bd => (c, &g.c, &g.a),
        _ if bc == i64::MAX && bd == i64::MAX => return Err(Error::Singular),
        _ => {
            let prec = bc.min(bd);
            return Err(Error::precision(prec + 1, prec));
        }
    };
    let m = vdet - 2 * s;
    let f = lr.div(other, pivot)?;
    Ok(TreeVertex::new(m, f.terms_below(k, m)?))
}

/// The `q + 1` neighbors: one down (level `m - 1`), then `q` up.
pub fn neighbors(k: &FiniteField, v: &TreeVertex) -> Vec<TreeVertex> {
    let mut out = Vec::with_capacity(k.order() as usize + 1);
    out.push(TreeVertex::new(v.m - 1, v.tail.clone()));
    for b in k.elements() {
        let mut tail = v.tail.clone();
        if !k.is_zero(b) {
            tail.insert(v.m, b);
        }
        out.push(TreeVertex { m: v.m + 1, tail });
    }
    out
}

/// Lowest exponent where the tails differ, if any.
fn tail_divergence(k: &FiniteField, a: &TreeVertex, b: &TreeVertex) -> Option<i64> {
    let keys = a.tail.keys().chain(b.tail.keys());
    let mut exps: Vec<i64> = keys.copied().collect();
    exps.sort_unstable();
    exps.into_iter().find(|e| a.tail.get(e).copied().unwrap_or(k.zero()) != b.tail.get(e).copied().unwrap_or(k.zero()))
}

pub fn distance(k: &FiniteField, a: &TreeVertex, b: &TreeVertex) -> u64 {
    let mut c = a.m.min(b.m);
    if let Some(e) = tail_divergence(k, a, b) {
        c = c.min(e);
    }
    ((a.m - c) + (b.m - c)) as u64
}

/// Number of vertices within distance `r` of any vertex.
pub fn ball_size(q: u64, r: u32) -> u128 {
    if r == 0 {
        return 1;
    }
    let q = q as u128;
    let geometric: u128 = (0..r).map(|i| q.pow(i)).sum();
    1 + (q + 1) * geometric
}

/// All vertices within distance `r` of `center`, in breadth-first order.
pub fn ball(k: &FiniteField, center: &TreeVertex, r: u32, budget: u128) -> Result<Vec<TreeVertex>> {
    let size = ball_size(k.order(), r);
    if size > budget {
        return Err(Error::BudgetExceeded { requested: size, budget });
    }
    let mut seen: HashSet<TreeVertex> = HashSet::from([center.clone()]);
    let mut out = vec![center.clone()];
    let mut queue = VecDeque::from([(center.clone(), 0u32)]);
    while let Some((v, d)) = queue.pop_front() {
        if d == r {
            continue;
        }
        for w in neighbors(k, &v) {
            if seen.insert(w.clone()) {
                out.push(w.clone());
                queue.push_back((w, d + 1));
            }
        }
    }
    Ok(out)
}

/// Breadth-first distances from `source` to every vertex of `ball`.
pub fn bfs_distances(k: &FiniteField, source: &TreeVertex, within: &HashSet<TreeVertex>) -> BTreeMap<TreeVertex, u64> {
    let mut dist = BTreeMap::from([(source.clone(), 0u64)]);
    let mut queue = VecDeque::from([source.clone()]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for w in neighbors(k, &v) {
            if within.contains(&w) && !dist.contains_key(&w) {
                dist.insert(w.clone(), d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Action of `g` on the vertex `v`: the class of `g * (t^m, f; 0, 1)`.
pub fn act(lr: &LaurentRing, g: &Mat2<LaurentSeries>, v: &TreeVertex) -> Result<TreeVertex> {
    vertex_from_matrix(lr, &g.mul(&v.matrix(lr.field()), lr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordring::RingOps;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f5() -> FiniteField {
        FiniteField::new(5, 1).unwrap()
    }

    fn v(k: &FiniteField, m: i64, tail: &[(i64, i64)]) -> TreeVertex {
        TreeVertex::new(m, tail.iter().map(|&(e, c)| (e, k.from_int(c))).collect())
    }

    #[test]
    fn pivot_ignores_an_entry_lost_to_cancellation() {
        let k = f5();
        let lr = LaurentRing::new(&k, 32);
        let one = LaurentSeries::monomial(&k, k.one(), 0);
        let lost = LaurentSeries::from_coeffs(&k, 0, vec![], Some(5));
        let g = Mat2::new(one.clone(), lr.t(), lost.clone(), one.clone());
        assert_eq!(vertex_from_matrix(&lr, &g).unwrap(), v(&k, 0, &[]));
        let g = Mat2::new(one.clone(), LaurentSeries::zero(), lost.clone(), lost);
        assert!(matches!(vertex_from_matrix(&lr, &g), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn phi_examples() {
        let k = f5();
        let t = |e| LaurentSeries::monomial(&k, k.one(), e);
        assert_eq!(phi(&k, &t(1), &t(-1)).unwrap(), v(&k, 1, &[(-1, 1)]));
        assert_eq!(phi(&k, &t(0), &LaurentSeries::zero()).unwrap(), TreeVertex::base());
        assert_eq!(phi(&k, &t(-3), &LaurentSeries::zero()).unwrap(), v(&k, -3, &[]));
    }

    #[test]
    fn vertex_from_matrix_examples() {
        let k = f5();
        let lr = LaurentRing::new(&k, 20);
        let id = Mat2::identity(&lr);
        assert_eq!(vertex_from_matrix(&lr, &id).unwrap(), TreeVertex::base());
        let t = lr.t();
        let scalar = id.map(|e| lr.mul(e, &t));
        assert_eq!(vertex_from_matrix(&lr, &scalar).unwrap(), TreeVertex::base());
        let o = v(&k, 1, &[(-1, 1)]);
        assert_eq!(vertex_from_matrix(&lr, &o.matrix(&k)).unwrap(), o);
        let sing = Mat2::new(lr.one(), lr.one(), lr.one(), lr.one());
        assert_eq!(vertex_from_matrix(&lr, &sing), Err(Error::Singular));
    }

    #[test]
    fn neighbor_examples() {
        let k = f5();
        assert_eq!(neighbors(&k, &TreeVertex::base()).len(), 6);
        let o = v(&k, 1, &[(-1, 1)]);
        assert_eq!(neighbors(&k, &o)[0], v(&k, 0, &[(-1, 1)]));
        let up = neighbors(&k, &o);
        for l in 0..5 {
            assert!(up.contains(&v(&k, 2, &[(-1, 1), (1, l)])));
        }
    }

    #[test]
    fn distance_examples() {
        let k = f5();
        let o = v(&k, 1, &[(-1, 1)]);
        assert_eq!(distance(&k, &o, &o), 0);
        assert_eq!(distance(&k, &o, &v(&k, 0, &[(-1, 1)])), 1);
        assert_eq!(distance(&k, &o, &v(&k, -2, &[])), 3);
    }

    #[test]
    fn ball_sizes() {
        let k = f5();
        let b = TreeVertex::base();
        assert_eq!(ball(&k, &b, 0, u128::MAX).unwrap().len(), 1);
        assert_eq!(ball(&k, &b, 1, u128::MAX).unwrap().len(), 7);
        assert_eq!(ball(&k, &b, 3, u128::MAX).unwrap().len(), 187);
        assert!(matches!(ball(&k, &b, 3, 100), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn closed_form_distance_matches_bfs() {
        let k = FiniteField::new(3, 1).unwrap();
        let o = v(&k, 1, &[(-1, 1)]);
        let b = ball(&k, &o, 3, u128::MAX).unwrap();
        let within: HashSet<_> = b.iter().cloned().collect();
        for a in &b {
            let d = bfs_distances(&k, a, &within);
            for c in &b {
                if let Some(&dd) = d.get(c) {
                    assert_eq!(distance(&k, a, c), dd);
                }
            }
        }
    }

    fn random_unit_matrix(lr: &LaurentRing, rng: &mut ChaCha8Rng, len: usize) -> Mat2<LaurentSeries> {
        let k = lr.field();
        let q = k.order();
        loop {
            let mut entry = || {
                let coeffs = (0..len).map(|_| k.element(rng.gen_range(0..q))).collect();
                LaurentSeries::from_coeffs(k, 0, coeffs, None)
            };
            let m = Mat2::new(entry(), entry(), entry(), entry());
            if matches!(m.det(lr).val(), Val::At(0)) {
                return m;
            }
        }
    }

    #[test]
    fn invariant_under_right_k_and_scalars() {
        let k = f5();
        let lr = LaurentRing::new(&k, 30);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let m = rng.gen_range(-3..4);
            let b = LaurentSeries::from_coeffs(&k, -2, (0..6).map(|_| k.element(rng.gen_range(0..5))).collect(), None);
            let g = Mat2::new(LaurentSeries::monomial(&k, k.one(), m), b, LaurentSeries::zero(), lr.one());
            let expected = vertex_from_matrix(&lr, &g).unwrap();
            let kappa = random_unit_matrix(&lr, &mut rng, 4);
            let z = LaurentSeries::monomial(&k, k.element(rng.gen_range(1..5)), rng.gen_range(-2..3));
            let moved = g.mul(&kappa, &lr).map(|e| lr.mul(e, &z));
            assert_eq!(vertex_from_matrix(&lr, &moved).unwrap(), expected);
        }
    }

    proptest! {
        #[test]
        fn neighbors_are_adjacent_and_symmetric(m in -4i64..4, tail in prop::collection::btree_map(-4i64..4, 1i64..3, 0..4)) {
            let k = FiniteField::new(3, 1).unwrap();
            let x = TreeVertex::new(m, tail.into_iter().map(|(e, c)| (e, k.from_int(c))).collect());
            let ns = neighbors(&k, &x);
            prop_assert_eq!(ns.len(), 4);
            let distinct: HashSet<_> = ns.iter().collect();
            prop_assert_eq!(distinct.len(), 4);
            for n in &ns {
                prop_assert_eq!(distance(&k, &x, n), 1);
                prop_assert!(neighbors(&k, n).contains(&x));
            }
        }
    }
}
