//! The affine coordinate ring `A = k[x,y]/(F)` of a Weierstrass cubic, its
//! fraction field, and 2x2 matrices over these rings.
//!
//! Elements of `A` are kept in the normal form `u(x) + v(x)*y`: every `y^2`
//! is eliminated through the Weierstrass relation, so equality of normal
//! forms is equality in `A`. Fractions are never reduced (`A` is not a
//! PID); they are compared by cross-multiplication.

use std::fmt;

use crate::curve::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FiniteField};

/// Minimal ring interface used by the generic matrix code.
pub trait RingOps {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
}

impl RingOps for FiniteField {
    type Elem = FieldElem;
    fn zero(&self) -> FieldElem {
        FiniteField::zero(self)
    }
    fn one(&self) -> FieldElem {
        FiniteField::one(self)
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FiniteField::add(self, *a, *b)
    }
    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FiniteField::sub(self, *a, *b)
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FiniteField::mul(self, *a, *b)
    }
    fn neg(&self, a: &FieldElem) -> FieldElem {
        FiniteField::neg(self, *a)
    }
}

// ---------------------------------------------------------------------------
// dense univariate polynomials, coefficient i of x^i, no trailing zeros

pub(crate) type Poly = Vec<FieldElem>;

fn trim(k: &FiniteField, mut p: Poly) -> Poly {
    while p.last().is_some_and(|&c| k.is_zero(c)) {
        p.pop();
    }
    p
}

fn poly_add(k: &FiniteField, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or_default();
            let y = b.get(i).copied().unwrap_or_default();
            k.add(x, y)
        })
        .collect();
    trim(k, out)
}

fn poly_neg(k: &FiniteField, a: &[FieldElem]) -> Poly {
    a.iter().map(|&c| k.neg(c)).collect()
}

fn poly_sub(k: &FiniteField, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    poly_add(k, a, &poly_neg(k, b))
}

fn poly_scale(k: &FiniteField, c: FieldElem, a: &[FieldElem]) -> Poly {
    trim(k, a.iter().map(|&x| k.mul(c, x)).collect())
}

fn poly_mul(k: &FiniteField, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(x, y));
        }
    }
    trim(k, out)
}

/// `p(x + c)`.
fn poly_translate(k: &FiniteField, p: &[FieldElem], c: FieldElem) -> Poly {
    let lin = trim(k, vec![c, k.one()]);
    let mut acc: Poly = vec![];
    for &coef in p.iter().rev() {
        acc = poly_add(k, &poly_mul(k, &acc, &lin), &trim(k, vec![coef]));
    }
    acc
}

fn poly_degree(p: &[FieldElem]) -> Option<usize> {
    p.len().checked_sub(1)
}

// ---------------------------------------------------------------------------

/// `u(x) + v(x)*y` in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AElem {
    pub(crate) u: Poly,
    pub(crate) v: Poly,
}

impl AElem {
    pub fn u(&self) -> &[FieldElem] {
        &self.u
    }
    pub fn v(&self) -> &[FieldElem] {
        &self.v
    }
    pub fn is_zero(&self) -> bool {
        self.u.is_empty() && self.v.is_empty()
    }
}

/// The ring `A` attached to a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordRing {
    curve: WeierstrassCurve,
    /// `x^3 + a2 x^2 + a4 x + a6`
    cubic: Poly,
    /// `a1 x + a3`
    linear: Poly,
}

impl CoordRing {
    pub fn new(curve: &WeierstrassCurve) -> Self {
        let k = curve.field();
        let cubic = trim(k, vec![curve.a6(), curve.a4(), curve.a2(), k.one()]);
        let linear = trim(k, vec![curve.a3(), curve.a1()]);
        CoordRing { curve: curve.clone(), cubic, linear }
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    pub fn field(&self) -> &FiniteField {
        self.curve.field()
    }

    /// Builds `u + v*y` from raw coefficient lists (normalizing trailing zeros).
    pub fn from_parts(&self, u: Vec<FieldElem>, v: Vec<FieldElem>) -> AElem {
        let k = self.field();
        AElem { u: trim(k, u), v: trim(k, v) }
    }

    pub fn constant(&self, c: FieldElem) -> AElem {
        self.from_parts(vec![c], vec![])
    }

    pub fn x(&self) -> AElem {
        self.monomial(1, 0)
    }

    pub fn y(&self) -> AElem {
        self.monomial(0, 1)
    }

    /// `x^i y^j` for `j <= 1`.
    pub fn monomial(&self, i: usize, j: usize) -> AElem {
        assert!(j <= 1, "normal form has y-degree at most 1");
        let k = self.field();
        let mut p = vec![k.zero(); i + 1];
        p[i] = k.one();
        if j == 0 {
            AElem { u: p, v: vec![] }
        } else {
            AElem { u: vec![], v: p }
        }
    }

    pub fn scale(&self, c: FieldElem, a: &AElem) -> AElem {
        let k = self.field();
        AElem { u: poly_scale(k, c, &a.u), v: poly_scale(k, c, &a.v) }
    }

    /// `Some(c)` when `a` is the constant `c`.
    pub fn constant_value(&self, a: &AElem) -> Option<FieldElem> {
        if !a.v.is_empty() || a.u.len() > 1 {
            return None;
        }
        Some(a.u.first().copied().unwrap_or(self.field().zero()))
    }

    /// Pole order at infinity: `v(x) = -2`, `v(y) = -3`. `None` for zero.
    pub fn v_infinity(&self, a: &AElem) -> Option<i64> {
        let from_u = poly_degree(&a.u).map(|d| -2 * d as i64);
        let from_v = poly_degree(&a.v).map(|d| -3 - 2 * d as i64);
        match (from_u, from_v) {
            (None, None) => None,
            (Some(s), None) | (None, Some(s)) => Some(s),
            (Some(s), Some(t)) => Some(s.min(t)),
        }
    }

    /// Leading coefficient with respect to pole order.
    fn leading(&self, a: &AElem) -> Option<(i64, FieldElem)> {
        let v = self.v_infinity(a)?;
        let c = if v % 2 == 0 { *a.u.last()? } else { *a.v.last()? };
        Some((v, c))
    }

    /// Monomial basis of `L(n*inf)`: `x^i y^j`, `j <= 1`, `2i + 3j <= n`,
    /// ordered by pole order.
    pub fn lspace_basis(&self, n: u32) -> Vec<AElem> {
        let mut basis = vec![self.constant(self.field().one())];
        for d in 2..=n as usize {
            if d % 2 == 0 {
                basis.push(self.monomial(d / 2, 0));
            } else {
                basis.push(self.monomial((d - 3) / 2, 1));
            }
        }
        basis
    }

    /// Image of `a` (an element of the ring of `self.curve().shift(l, m)`)
    /// under `x' -> x - l`, `y' -> y - m`.
    pub fn translate_from_shifted(&self, a: &AElem, l: FieldElem, m: FieldElem) -> AElem {
        let k = self.field();
        let nl = k.neg(l);
        let u = poly_translate(k, &a.u, nl);
        let v = poly_translate(k, &a.v, nl);
        let u = poly_sub(k, &u, &poly_scale(k, m, &v));
        AElem { u, v }
    }

    pub fn format(&self, a: &AElem) -> String {
        let k = self.field();
        let mut terms: Vec<(i64, String)> = Vec::new();
        let push = |terms: &mut Vec<(i64, String)>, c: FieldElem, i: usize, y: bool| {
            if k.is_zero(c) {
                return;
            }
            let mut mono = String::new();
            match i {
                0 => {}
                1 => mono.push('x'),
                _ => mono.push_str(&format!("x^{i}")),
            }
            if y {
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push('y');
            }
            let coef = k.format(c);
            let term = if mono.is_empty() {
                coef
            } else if c == k.one() {
                mono
            } else if coef.contains('+') {
                format!("({coef})*{mono}")
            } else {
                format!("{coef}*{mono}")
            };
            let pole = 2 * i as i64 + if y { 3 } else { 0 };
            terms.push((pole, term));
        };
        for (i, &c) in a.u.iter().enumerate() {
            push(&mut terms, c, i, false);
        }
        for (i, &c) in a.v.iter().enumerate() {
            push(&mut terms, c, i, true);
        }
        if terms.is_empty() {
            return "0".to_string();
        }
        terms.sort_by_key(|t| std::cmp::Reverse(t.0));
        terms.into_iter().map(|t| t.1).collect::<Vec<_>>().join(" + ")
    }
}

impl RingOps for CoordRing {
    type Elem = AElem;

    fn zero(&self) -> AElem {
        AElem::default()
    }

    fn one(&self) -> AElem {
        self.constant(self.field().one())
    }

    fn add(&self, a: &AElem, b: &AElem) -> AElem {
        let k = self.field();
        AElem { u: poly_add(k, &a.u, &b.u), v: poly_add(k, &a.v, &b.v) }
    }

    fn sub(&self, a: &AElem, b: &AElem) -> AElem {
        let k = self.field();
        AElem { u: poly_sub(k, &a.u, &b.u), v: poly_sub(k, &a.v, &b.v) }
    }

    /// `y^2 = cubic(x) - (a1 x + a3) y`.
    fn mul(&self, a: &AElem, b: &AElem) -> AElem {
        let k = self.field();
        let vv = poly_mul(k, &a.v, &b.v);
        let u = poly_add(k, &poly_mul(k, &a.u, &b.u), &poly_mul(k, &vv, &self.cubic));
        let cross = poly_add(k, &poly_mul(k, &a.u, &b.v), &poly_mul(k, &a.v, &b.u));
        let v = poly_sub(k, &cross, &poly_mul(k, &vv, &self.linear));
        AElem { u, v }
    }

    fn neg(&self, a: &AElem) -> AElem {
        let k = self.field();
        AElem { u: poly_neg(k, &a.u), v: poly_neg(k, &a.v) }
    }
}

/// `num / den` in the function field. Never reduced.
#[derive(Clone, Debug)]
pub struct AFrac {
    pub num: AElem,
    pub den: AElem,
}

/// The function field `F = Frac(A)`.
#[derive(Clone, Debug)]
pub struct FunctionField {
    ring: CoordRing,
}

impl FunctionField {
    pub fn new(ring: &CoordRing) -> Self {
        FunctionField { ring: ring.clone() }
    }

    pub fn ring(&self) -> &CoordRing {
        &self.ring
    }

    pub fn frac(&self, num: AElem, den: AElem) -> Result<AFrac> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(AFrac { num, den })
    }

    pub fn from_elem(&self, a: &AElem) -> AFrac {
        AFrac { num: a.clone(), den: self.ring.one() }
    }

    pub fn constant(&self, c: FieldElem) -> AFrac {
        self.from_elem(&self.ring.constant(c))
    }

    pub fn inv(&self, a: &AFrac) -> Result<AFrac> {
        self.frac(a.den.clone(), a.num.clone())
    }

    pub fn div(&self, a: &AFrac, b: &AFrac) -> Result<AFrac> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn is_zero(&self, a: &AFrac) -> bool {
        a.num.is_zero()
    }

    pub fn eq(&self, a: &AFrac, b: &AFrac) -> bool {
        let r = &self.ring;
        r.mul(&a.num, &b.den) == r.mul(&b.num, &a.den)
    }

    /// `Some(c)` when the fraction equals the constant `c`.
    pub fn constant_value(&self, a: &AFrac) -> Option<FieldElem> {
        let r = &self.ring;
        let k = r.field();
        if a.num.is_zero() {
            return Some(k.zero());
        }
        let (vn, cn) = r.leading(&a.num)?;
        let (vd, cd) = r.leading(&a.den)?;
        if vn != vd {
            return None;
        }
        let c = k.div(cn, cd)?;
        (r.scale(c, &a.den) == a.num).then_some(c)
    }

    /// Substitutes `x' -> x - l`, `y' -> y - m` in numerator and denominator.
    pub fn translate_from_shifted(&self, a: &AFrac, l: FieldElem, m: FieldElem) -> AFrac {
        AFrac {
            num: self.ring.translate_from_shifted(&a.num, l, m),
            den: self.ring.translate_from_shifted(&a.den, l, m),
        }
    }
}

/// Equality of fractions by cross-multiplication.
pub fn frac_eq(field: &FunctionField, a: &AFrac, b: &AFrac) -> Result<bool> {
    if a.den.is_zero() || b.den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(field.eq(a, b))
}

impl RingOps for FunctionField {
    type Elem = AFrac;

    fn zero(&self) -> AFrac {
        self.from_elem(&self.ring.zero())
    }

    fn one(&self) -> AFrac {
        self.from_elem(&self.ring.one())
    }

    fn add(&self, a: &AFrac, b: &AFrac) -> AFrac {
        let r = &self.ring;
        if a.den == b.den {
            return AFrac { num: r.add(&a.num, &b.num), den: a.den.clone() };
        }
        let num = r.add(&r.mul(&a.num, &b.den), &r.mul(&b.num, &a.den));
        AFrac { num, den: r.mul(&a.den, &b.den) }
    }

    fn sub(&self, a: &AFrac, b: &AFrac) -> AFrac {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &AFrac, b: &AFrac) -> AFrac {
        let r = &self.ring;
        AFrac { num: r.mul(&a.num, &b.num), den: r.mul(&a.den, &b.den) }
    }

    fn neg(&self, a: &AFrac) -> AFrac {
        AFrac { num: self.ring.neg(&a.num), den: a.den.clone() }
    }
}

// ---------------------------------------------------------------------------

/// A 2x2 matrix `[[a, b], [c, d]]` over some ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Clone> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity<R: RingOps<Elem = T>>(r: &R) -> Self {
        Mat2::new(r.one(), r.zero(), r.zero(), r.one())
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, mut f: F) -> Mat2<U> {
        Mat2 { a: f(&self.a), b: f(&self.b), c: f(&self.c), d: f(&self.d) }
    }

    pub fn try_map<U, E, F: FnMut(&T) -> Result<U, E>>(&self, mut f: F) -> Result<Mat2<U>, E> {
        Ok(Mat2 { a: f(&self.a)?, b: f(&self.b)?, c: f(&self.c)?, d: f(&self.d)? })
    }

    pub fn mul<R: RingOps<Elem = T>>(&self, other: &Self, r: &R) -> Self {
        Mat2 {
            a: r.add(&r.mul(&self.a, &other.a), &r.mul(&self.b, &other.c)),
            b: r.add(&r.mul(&self.a, &other.b), &r.mul(&self.b, &other.d)),
            c: r.add(&r.mul(&self.c, &other.a), &r.mul(&self.d, &other.c)),
            d: r.add(&r.mul(&self.c, &other.b), &r.mul(&self.d, &other.d)),
        }
    }

    pub fn det<R: RingOps<Elem = T>>(&self, r: &R) -> T {
        r.sub(&r.mul(&self.a, &self.d), &r.mul(&self.b, &self.c))
    }

    /// `[[d, -b], [-c, a]]`.
    pub fn adjugate<R: RingOps<Elem = T>>(&self, r: &R) -> Self {
        Mat2 { a: self.d.clone(), b: r.neg(&self.b), c: r.neg(&self.c), d: self.a.clone() }
    }
}

impl Mat2<FieldElem> {
    pub fn inverse(&self, k: &FiniteField) -> Option<Self> {
        let inv = k.inv(self.det(k))?;
        Some(self.adjugate(k).map(|&e| k.mul(inv, e)))
    }

    /// Representative of the class modulo `k^x` scalars: first nonzero entry is 1.
    pub fn projective(&self, k: &FiniteField) -> Self {
        let lead = self.entries().into_iter().copied().find(|&e| !k.is_zero(e)).expect("nonzero matrix");
        let s = k.inv(lead).unwrap();
        self.map(|&e| k.mul(s, e))
    }

    pub fn is_scalar(&self, k: &FiniteField) -> bool {
        k.is_zero(self.b) && k.is_zero(self.c) && self.a == self.d
    }
}

impl Mat2<AElem> {
    /// Representative modulo `k^x` scalars: the first nonzero coefficient
    /// (entries in order a, b, c, d; `u` before `v`) is scaled to 1.
    pub fn projective(&self, r: &CoordRing) -> Self {
        let lead = self
            .entries()
            .into_iter()
            .flat_map(|e| e.u.iter().chain(e.v.iter()))
            .copied()
            .find(|&c| !r.field().is_zero(c))
            .expect("nonzero matrix");
        let s = r.field().inv(lead).unwrap();
        self.map(|e| r.scale(s, e))
    }

    /// Determinant when it is a unit constant.
    pub fn unit_det(&self, r: &CoordRing) -> Option<FieldElem> {
        r.constant_value(&self.det(r)).filter(|&c| !r.field().is_zero(c))
    }

    pub fn constant_entries(&self, r: &CoordRing) -> Option<Mat2<FieldElem>> {
        Some(Mat2 {
            a: r.constant_value(&self.a)?,
            b: r.constant_value(&self.b)?,
            c: r.constant_value(&self.c)?,
            d: r.constant_value(&self.d)?,
        })
    }

    pub fn translate_from_shifted(&self, r: &CoordRing, l: FieldElem, m: FieldElem) -> Self {
        self.map(|e| r.translate_from_shifted(e, l, m))
    }

    pub fn format(&self, r: &CoordRing) -> [String; 4] {
        self.entries().map(|e| r.format(e))
    }
}

impl From<&Mat2<FieldElem>> for [u32; 4] {
    fn from(m: &Mat2<FieldElem>) -> Self {
        m.entries().map(|e| e.index())
    }
}

impl fmt::Display for Mat2<String> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Streams `GL2(A)` matrices with entries in `L(bound*inf)` in a fixed
/// order: coefficient digits base `q`, entry-major. Only the matrices with
/// determinant in `k^x` are yielded.
pub struct BoundedGl2 {
    ring: CoordRing,
    basis: Vec<AElem>,
    total: u128,
}

pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

pub fn enumerate_bounded_gl2a(ring: &CoordRing, bound: u32, budget: u128) -> Result<BoundedGl2> {
    let basis = ring.lspace_basis(bound);
    let q = ring.field().order() as u128;
    let exp = 4 * basis.len() as u32;
    let total = q.checked_pow(exp).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded { requested: total, budget });
    }
    Ok(BoundedGl2 { ring: ring.clone(), basis, total })
}

impl BoundedGl2 {
    /// Size of the raw search space before the determinant filter.
    pub fn raw_count(&self) -> u128 {
        self.total
    }

    pub fn basis(&self) -> &[AElem] {
        &self.basis
    }

    /// The candidate matrix with the given index (no determinant filter).
    pub fn candidate(&self, mut index: u128) -> Mat2<AElem> {
        let r = &self.ring;
        let k = r.field();
        let q = k.order() as u128;
        let mut entries: [AElem; 4] = Default::default();
        for entry in entries.iter_mut() {
            for b in &self.basis {
                let digit = (index % q) as u64;
                index /= q;
                if digit != 0 {
                    *entry = r.add(entry, &r.scale(k.element(digit), b));
                }
            }
        }
        let [a, b, c, d] = entries;
        Mat2::new(a, b, c, d)
    }

    /// Matrices with unit determinant among candidates in `range`.
    pub fn range(&self, range: std::ops::Range<u128>) -> impl Iterator<Item = Mat2<AElem>> + '_ {
        range.map(|i| self.candidate(i)).filter(|m| m.unit_det(&self.ring).is_some())
    }

    pub fn iter(&self) -> impl Iterator<Item = Mat2<AElem>> + '_ {
        self.range(0..self.total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring5(a: [i64; 5]) -> CoordRing {
        let k = FiniteField::new(5, 1).unwrap();
        CoordRing::new(&WeierstrassCurve::from_ints(&k, a))
    }

    #[test]
    fn multiplication_examples() {
        let r = ring5([0, 0, 0, -1, 0]);
        let k = r.field().clone();
        let yy = r.mul(&r.y(), &r.y());
        assert_eq!(yy, r.from_parts(vec![k.zero(), k.from_int(-1), k.zero(), k.one()], vec![]));
        assert_eq!(r.mul(&r.x(), &r.y()), r.monomial(1, 1));
    }

    #[test]
    fn weierstrass_quotient_identity() {
        // (y^2 + a3 y - a6) = x (x^2 + a2 x + a4 - a1 y)
        let r = ring5([1, 2, 3, 4, 0]);
        let k = r.field().clone();
        let c = |n| r.constant(k.from_int(n));
        let lhs = r.add(&r.mul(&r.y(), &r.y()), &r.mul(&c(3), &r.y()));
        let q = r.sub(&r.add(&r.add(&r.monomial(2, 0), &r.mul(&c(2), &r.x())), &c(4)), &r.mul(&c(1), &r.y()));
        assert_eq!(lhs, r.mul(&r.x(), &q));
    }

    #[test]
    fn v_infinity_examples() {
        let r = ring5([0, 0, 0, -1, 0]);
        assert_eq!(r.v_infinity(&r.x()), Some(-2));
        assert_eq!(r.v_infinity(&r.y()), Some(-3));
        assert_eq!(r.v_infinity(&r.add(&r.monomial(2, 0), &r.y())), Some(-4));
        assert_eq!(r.v_infinity(&r.zero()), None);
    }

    #[test]
    fn lspace_examples() {
        let r = ring5([0, 0, 0, -1, 0]);
        assert_eq!(r.lspace_basis(0), vec![r.one()]);
        assert_eq!(r.lspace_basis(1), vec![r.one()]);
        let b5 = r.lspace_basis(5);
        assert_eq!(b5, vec![r.one(), r.x(), r.y(), r.monomial(2, 0), r.monomial(1, 1)]);
        for n in 1..12 {
            let basis = r.lspace_basis(n);
            assert_eq!(basis.len(), n as usize);
            assert!(basis.iter().all(|b| r.v_infinity(b).unwrap() >= -(n as i64)));
        }
    }

    #[test]
    fn frac_eq_examples() {
        let r = ring5([0, 0, 0, -1, 0]);
        let f = FunctionField::new(&r);
        let y_over_x = f.frac(r.y(), r.x()).unwrap();
        let xy_over_x2 = f.frac(r.mul(&r.y(), &r.x()), r.monomial(2, 0)).unwrap();
        assert!(frac_eq(&f, &y_over_x, &xy_over_x2).unwrap());
        let x_over_y = f.frac(r.x(), r.y()).unwrap();
        assert!(!frac_eq(&f, &y_over_x, &x_over_y).unwrap());
        assert!(f.frac(r.x(), r.zero()).is_err());
        let bad = AFrac { num: r.x(), den: r.zero() };
        assert_eq!(frac_eq(&f, &bad, &y_over_x), Err(Error::ZeroDenominator));
    }

    #[test]
    fn constant_value_of_fraction() {
        let r = ring5([0, 0, 0, -1, 0]);
        let f = FunctionField::new(&r);
        let k = r.field().clone();
        let three_y = r.scale(k.from_int(3), &r.y());
        assert_eq!(f.constant_value(&f.frac(three_y, r.y()).unwrap()), Some(k.from_int(3)));
        assert_eq!(f.constant_value(&f.frac(r.x(), r.y()).unwrap()), None);
        assert_eq!(f.constant_value(&f.zero()), Some(k.zero()));
    }

    #[test]
    fn bounded_enumeration_counts() {
        let r = ring5([0, 0, 0, -1, 0]);
        let e = enumerate_bounded_gl2a(&r, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(e.raw_count(), 625);
        assert_eq!(e.iter().count(), 480);
        let k2 = FiniteField::new(2, 1).unwrap();
        let r2 = CoordRing::new(&WeierstrassCurve::from_ints(&k2, [0, 0, 1, 1, 0]));
        assert_eq!(enumerate_bounded_gl2a(&r2, 0, DEFAULT_BUDGET).unwrap().iter().count(), 6);
        let big = enumerate_bounded_gl2a(&r, 8, DEFAULT_BUDGET);
        assert!(matches!(big, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn translation_is_a_ring_map() {
        let k = FiniteField::new(7, 1).unwrap();
        let e = WeierstrassCurve::from_ints(&k, [1, 2, 3, 4, 5]);
        let r = CoordRing::new(&e);
        for p in e.points() {
            let crate::curve::CurvePoint::Affine { l, m } = p else { continue };
            let rs = CoordRing::new(&e.shift(l, Some(m)).unwrap());
            let basis = rs.lspace_basis(6);
            for a in &basis {
                for b in &basis {
                    let lhs = r.translate_from_shifted(&rs.mul(a, b), l, m);
                    let rhs = r.mul(&r.translate_from_shifted(a, l, m), &r.translate_from_shifted(b, l, m));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    fn arb_elem() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
        (prop::collection::vec(0i64..5, 0..5), prop::collection::vec(0i64..5, 0..4))
    }

    proptest! {
        #[test]
        fn ring_laws_and_valuation((u1, v1) in arb_elem(), (u2, v2) in arb_elem(), (u3, v3) in arb_elem()) {
            let r = ring5([1, 0, 2, -1, 3]);
            let k = r.field().clone();
            let mk = |u: &[i64], v: &[i64]| r.from_parts(u.iter().map(|&c| k.from_int(c)).collect(), v.iter().map(|&c| k.from_int(c)).collect());
            let (a, b, c) = (mk(&u1, &v1), mk(&u2, &v2), mk(&u3, &v3));
            prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
            prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
            prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
            if let (Some(va), Some(vb)) = (r.v_infinity(&a), r.v_infinity(&b)) {
                prop_assert_eq!(r.v_infinity(&r.mul(&a, &b)), Some(va + vb));
                let s = r.add(&a, &b);
                if let Some(vs) = r.v_infinity(&s) {
                    prop_assert!(vs >= va.min(vb));
                    if va != vb { prop_assert_eq!(vs, va.min(vb)); }
                }
            }
        }

        #[test]
        fn lspace_products((m, n) in (0u32..8, 0u32..8), i in 0usize..8, j in 0usize..8) {
            let r = ring5([0, 0, 0, -1, 0]);
            let bm = r.lspace_basis(m);
            let bn = r.lspace_basis(n);
            let p = r.mul(&bm[i % bm.len()], &bn[j % bn.len()]);
            prop_assert!(r.v_infinity(&p).unwrap() >= -((m + n) as i64));
        }
    }
}
