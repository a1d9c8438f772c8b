//! Truncated Laurent series in the uniformizer `t = x/y` at infinity.
//!
//! A series knows its coefficients exactly below `prec`; above that nothing
//! is claimed. Every operation propagates the precision it can certify, so
//! a decision that needs an unknown coefficient fails loudly with
//! [`Error::InsufficientPrecision`] instead of reading garbage.

use std::collections::BTreeMap;
use std::fmt;

use crate::coordring::{AElem, AFrac, CoordRing, RingOps};
use crate::curve::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FiniteField};

pub const DEFAULT_PRECISION: usize = 64;

/// Valuation of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Val {
    At(i64),
    /// The series is exactly zero.
    Zero,
    /// Every known coefficient vanishes; the value is at least `prec`.
    Unknown { prec: i64 },
}

/// `sum c_i t^(n0 + i)`, known below `prec` (`None` when exact).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    n0: i64,
    coeffs: Vec<FieldElem>,
    prec: Option<i64>,
}

impl LaurentSeries {
    pub fn zero() -> Self {
        LaurentSeries { n0: 0, coeffs: vec![], prec: None }
    }

    /// `c * t^e`, exact.
    pub fn monomial(k: &FiniteField, c: FieldElem, e: i64) -> Self {
        Self::from_coeffs(k, e, vec![c], None)
    }

    /// Builds a series from coefficients starting at `n0`. With a finite
    /// `prec`, coefficients at exponents `>= prec` are dropped.
    pub fn from_coeffs(k: &FiniteField, n0: i64, mut coeffs: Vec<FieldElem>, prec: Option<i64>) -> Self {
        if let Some(p) = prec {
            coeffs.truncate((p - n0).max(0) as usize);
        }
        let mut s = LaurentSeries { n0, coeffs, prec };
        s.normalize(k);
        s
    }

    /// Exact Laurent polynomial from `(exponent, coefficient)` pairs.
    pub fn from_terms(k: &FiniteField, terms: &BTreeMap<i64, FieldElem>) -> Self {
        let Some((&lo, _)) = terms.first_key_value() else {
            return Self::zero();
        };
        let hi = *terms.last_key_value().unwrap().0;
        let mut coeffs = vec![k.zero(); (hi - lo + 1) as usize];
        for (&e, &c) in terms {
            coeffs[(e - lo) as usize] = c;
        }
        Self::from_coeffs(k, lo, coeffs, None)
    }

    fn normalize(&mut self, k: &FiniteField) {
        let lead = self.coeffs.iter().position(|&c| !k.is_zero(c));
        match lead {
            Some(i) => {
                self.coeffs.drain(..i);
                self.n0 += i as i64;
                while self.coeffs.last().is_some_and(|&c| k.is_zero(c)) {
                    self.coeffs.pop();
                }
            }
            None => {
                self.coeffs.clear();
                self.n0 = self.prec.unwrap_or(0);
            }
        }
    }

    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn val(&self) -> Val {
        match (self.coeffs.is_empty(), self.prec) {
            (false, _) => Val::At(self.n0),
            (true, None) => Val::Zero,
            (true, Some(prec)) => Val::Unknown { prec },
        }
    }

    /// Certified valuation of a nonzero series.
    pub fn valuation(&self) -> Result<i64> {
        match self.val() {
            Val::At(v) => Ok(v),
            Val::Zero => Err(Error::Singular),
            Val::Unknown { prec } => Err(Error::precision(prec + 1, prec)),
        }
    }

    /// Lower bound for the valuation (`i64::MAX` for exact zero).
    fn val_floor(&self) -> i64 {
        match self.val() {
            Val::At(v) => v,
            Val::Zero => i64::MAX,
            Val::Unknown { prec } => prec,
        }
    }

    /// Coefficient of `t^e`.
    pub fn coeff(&self, k: &FiniteField, e: i64) -> Result<FieldElem> {
        if let Some(p) = self.prec {
            if e >= p {
                return Err(Error::precision(e + 1, p));
            }
        }
        if e < self.n0 {
            return Ok(k.zero());
        }
        Ok(self.coeffs.get((e - self.n0) as usize).copied().unwrap_or(k.zero()))
    }

    /// Nonzero coefficients at exponents `< m`.
    pub fn terms_below(&self, k: &FiniteField, m: i64) -> Result<BTreeMap<i64, FieldElem>> {
        if let Some(p) = self.prec {
            if p < m {
                return Err(Error::precision(m, p));
            }
        }
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.n0 + i as i64, c))
            .take_while(|&(e, _)| e < m)
            .filter(|&(_, c)| !k.is_zero(c))
            .collect())
    }

    /// Multiplication by `t^e`.
    pub fn shift(&self, e: i64) -> Self {
        if self.coeffs.is_empty() && self.prec.is_none() {
            return self.clone();
        }
        LaurentSeries { n0: self.n0 + e, coeffs: self.coeffs.clone(), prec: self.prec.map(|p| p + e) }
    }

    /// Drops every coefficient at exponent `>= p`.
    pub fn truncate(&self, k: &FiniteField, p: i64) -> Self {
        let prec = Some(self.prec.map_or(p, |q| q.min(p)));
        Self::from_coeffs(k, self.n0, self.coeffs.clone(), prec)
    }

    pub fn format(&self, k: &FiniteField) -> String {
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| !k.is_zero(c))
            .map(|(i, &c)| {
                let e = self.n0 + i as i64;
                let coef = k.format(c);
                match e {
                    0 => coef,
                    _ if c == k.one() => format!("t^{e}"),
                    _ => format!("{coef}*t^{e}"),
                }
            })
            .collect();
        if let Some(p) = self.prec {
            parts.push(format!("O(t^{p})"));
        }
        if parts.is_empty() {
            return "0".into();
        }
        parts.join(" + ")
    }
}

/// Arithmetic context for series over `k`. `cap` is the number of terms
/// kept when inverting an exact series that is not a monomial.
#[derive(Clone, Debug)]
pub struct LaurentRing {
    k: FiniteField,
    cap: usize,
}

impl LaurentRing {
    pub fn new(k: &FiniteField, cap: usize) -> Self {
        LaurentRing { k: k.clone(), cap }
    }

    pub fn field(&self) -> &FiniteField {
        &self.k
    }

    pub fn t(&self) -> LaurentSeries {
        LaurentSeries::monomial(&self.k, self.k.one(), 1)
    }

    pub fn scale(&self, c: FieldElem, a: &LaurentSeries) -> LaurentSeries {
        let coeffs = a.coeffs.iter().map(|&x| self.k.mul(c, x)).collect();
        LaurentSeries::from_coeffs(&self.k, a.n0, coeffs, a.prec)
    }

    pub fn inv(&self, a: &LaurentSeries) -> Result<LaurentSeries> {
        let k = &self.k;
        let v = a.valuation()?;
        let c0inv = k.inv(a.coeffs[0]).unwrap();
        let rel = match a.prec {
            Some(p) => (p - v) as usize,
            None if a.coeffs.len() == 1 => {
                return Ok(LaurentSeries::monomial(k, c0inv, -v));
            }
            None => self.cap,
        };
        let mut b = Vec::with_capacity(rel);
        for j in 0..rel {
            if j == 0 {
                b.push(c0inv);
                continue;
            }
            let mut acc = k.zero();
            for i in 1..=j.min(a.coeffs.len() - 1) {
                acc = k.add(acc, k.mul(a.coeffs[i], b[j - i]));
            }
            b.push(k.neg(k.mul(c0inv, acc)));
        }
        Ok(LaurentSeries::from_coeffs(k, -v, b, Some(-v + rel as i64)))
    }

    pub fn div(&self, a: &LaurentSeries, b: &LaurentSeries) -> Result<LaurentSeries> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &LaurentSeries, n: u32) -> LaurentSeries {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Certifies that `a` and `b` agree wherever both are known.
    pub fn agree(&self, a: &LaurentSeries, b: &LaurentSeries) -> bool {
        let d = self.sub(a, b);
        !matches!(d.val(), Val::At(_))
    }
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl RingOps for LaurentRing {
    type Elem = LaurentSeries;

    fn zero(&self) -> LaurentSeries {
        LaurentSeries::zero()
    }

    fn one(&self) -> LaurentSeries {
        LaurentSeries::monomial(&self.k, self.k.one(), 0)
    }

    fn add(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        let k = &self.k;
        let prec = min_prec(a.prec, b.prec);
        let end = |s: &LaurentSeries| s.n0 + s.coeffs.len() as i64;
        let lo = a.n0.min(b.n0);
        let mut hi = end(a).max(end(b));
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        if hi <= lo {
            return LaurentSeries::from_coeffs(k, lo, vec![], prec);
        }
        let get = |s: &LaurentSeries, e: i64| {
            if e < s.n0 {
                k.zero()
            } else {
                s.coeffs.get((e - s.n0) as usize).copied().unwrap_or(k.zero())
            }
        };
        let coeffs = (lo..hi).map(|e| k.add(get(a, e), get(b, e))).collect();
        LaurentSeries::from_coeffs(k, lo, coeffs, prec)
    }

    fn sub(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        let k = &self.k;
        let (va, vb) = (a.val_floor(), b.val_floor());
        if va == i64::MAX || vb == i64::MAX {
            return LaurentSeries::zero();
        }
        let prec = min_prec(a.prec.map(|p| p + vb), b.prec.map(|p| p + va));
        let n0 = a.n0 + b.n0;
        let mut len = a.coeffs.len() + b.coeffs.len();
        if let Some(p) = prec {
            len = len.min((p - n0).max(0) as usize);
        }
        let mut out = vec![k.zero(); len];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if i >= len || k.is_zero(x) {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = k.add(out[i + j], k.mul(x, y));
            }
        }
        LaurentSeries::from_coeffs(k, n0, out, prec)
    }

    fn neg(&self, a: &LaurentSeries) -> LaurentSeries {
        self.scale(self.k.neg(self.k.one()), a)
    }
}

// ---------------------------------------------------------------------------
// expansion of x and y at infinity

/// Power series product modulo `t^m`.
fn mul_mod(k: &FiniteField, a: &[FieldElem], b: &[FieldElem], m: usize) -> Vec<FieldElem> {
    let mut out = vec![k.zero(); m];
    for (i, &x) in a.iter().enumerate().take(m) {
        if k.is_zero(x) {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(m - i) {
            out[i + j] = k.add(out[i + j], k.mul(x, y));
        }
    }
    out
}

fn add_mod(k: &FiniteField, terms: &[Vec<FieldElem>], m: usize) -> Vec<FieldElem> {
    let mut out = vec![k.zero(); m];
    for t in terms {
        for (i, &c) in t.iter().enumerate().take(m) {
            out[i] = k.add(out[i], c);
        }
    }
    out
}

/// `c * t^e` as a dense power series of length `m`.
fn mono(k: &FiniteField, c: FieldElem, e: usize, m: usize) -> Vec<FieldElem> {
    let mut v = vec![k.zero(); m];
    if e < m {
        v[e] = c;
    }
    v
}

fn inv_mod(k: &FiniteField, a: &[FieldElem], m: usize) -> Vec<FieldElem> {
    let c0inv = k.inv(a[0]).expect("unit constant term");
    let mut b = vec![k.zero(); m];
    b[0] = c0inv;
    for j in 1..m {
        let mut acc = k.zero();
        for i in 1..=j.min(a.len() - 1) {
            acc = k.add(acc, k.mul(a[i], b[j - i]));
        }
        b[j] = k.neg(k.mul(c0inv, acc));
    }
    b
}

/// `G(w)` and `G'(w)` modulo `t^m`, where `w = t^3 y` and
/// `G(w) = t^6 F(t^-2 w, t^-3 w)
///       = w^2 + a1 t w^2 + a3 t^3 w - w^3 - a2 t^2 w^2 - a4 t^4 w - a6 t^6`.
fn newton_terms(curve: &WeierstrassCurve, w: &[FieldElem], m: usize) -> (Vec<FieldElem>, Vec<FieldElem>) {
    let k = curve.field();
    let [a1, a2, a3, a4, a6] = curve.coefficients();
    let w2 = mul_mod(k, w, w, m);
    let w3 = mul_mod(k, &w2, w, m);
    let neg = |c| k.neg(c);
    let g = add_mod(
        k,
        &[
            w2.clone(),
            mul_mod(k, &mono(k, a1, 1, m), &w2, m),
            mul_mod(k, &mono(k, a3, 3, m), w, m),
            w3.iter().map(|&c| neg(c)).collect(),
            mul_mod(k, &mono(k, neg(a2), 2, m), &w2, m),
            mul_mod(k, &mono(k, neg(a4), 4, m), w, m),
            mono(k, neg(a6), 6, m),
        ],
        m,
    );
    let two = k.from_int(2);
    let three = k.from_int(3);
    let dg = add_mod(
        k,
        &[
            w.iter().map(|&c| k.mul(two, c)).collect(),
            mul_mod(k, &mono(k, k.mul(two, a1), 1, m), w, m),
            mono(k, a3, 3, m),
            w2.iter().map(|&c| k.neg(k.mul(three, c))).collect(),
            mul_mod(k, &mono(k, k.neg(k.mul(two, a2)), 2, m), w, m),
            mono(k, neg(a4), 4, m),
        ],
        m,
    );
    (g, dg)
}

/// Laurent expansions of `x` and `y` in `t = x/y`: `x = t^-2 w`, `y = t^-3 w`
/// with `w = 1 + O(t)` the Newton solution of `G(w) = 0`. The returned `y`
/// is known below `t^n`, `x` below `t^(n+1)`.
pub fn expand_xy(curve: &WeierstrassCurve, n: usize) -> Result<(LaurentSeries, LaurentSeries)> {
    if n < 8 {
        return Err(Error::InvalidInput(format!("precision {n} below the minimum of 8")));
    }
    let k = curve.field();
    let target = n + 3;
    let mut w = vec![k.one()];
    let mut have = 1;
    while have < target {
        let next = (2 * have).min(target);
        w.resize(next, k.zero());
        let (g, dg) = newton_terms(curve, &w, next);
        if g[..have].iter().any(|&c| !k.is_zero(c)) {
            return Err(Error::NoConvergence(have));
        }
        let step = mul_mod(k, &g, &inv_mod(k, &dg, next), next);
        for (wi, si) in w.iter_mut().zip(step) {
            *wi = k.sub(*wi, si);
        }
        have = next;
    }
    let (g, _) = newton_terms(curve, &w, target);
    if g.iter().any(|&c| !k.is_zero(c)) {
        return Err(Error::NoConvergence(target));
    }
    let xhat = LaurentSeries::from_coeffs(k, -2, w.clone(), Some(n as i64 + 1));
    let yhat = LaurentSeries::from_coeffs(k, -3, w, Some(n as i64));
    Ok((xhat, yhat))
}

/// The embedding `A -> k((t))` at a fixed working precision.
#[derive(Clone, Debug)]
pub struct Embedding {
    ring: CoordRing,
    lr: LaurentRing,
    n: usize,
    xhat: LaurentSeries,
    yhat: LaurentSeries,
}

impl Embedding {
    pub fn new(ring: &CoordRing, n: usize) -> Result<Self> {
        let (xhat, yhat) = expand_xy(ring.curve(), n)?;
        Ok(Embedding { ring: ring.clone(), lr: LaurentRing::new(ring.field(), n), n, xhat, yhat })
    }

    pub fn precision(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &CoordRing {
        &self.ring
    }

    pub fn laurent(&self) -> &LaurentRing {
        &self.lr
    }

    pub fn xhat(&self) -> &LaurentSeries {
        &self.xhat
    }

    pub fn yhat(&self) -> &LaurentSeries {
        &self.yhat
    }

    fn horner(&self, p: &[FieldElem]) -> LaurentSeries {
        let k = self.ring.field();
        let lr = &self.lr;
        let mut acc = LaurentSeries::zero();
        for &c in p.iter().rev() {
            acc = lr.add(&lr.mul(&acc, &self.xhat), &LaurentSeries::monomial(k, c, 0));
        }
        acc
    }

    /// `u(x^) + v(x^) y^`.
    pub fn embed(&self, a: &AElem) -> LaurentSeries {
        let lr = &self.lr;
        lr.add(&self.horner(a.u()), &lr.mul(&self.horner(a.v()), &self.yhat))
    }

    pub fn embed_frac(&self, f: &AFrac) -> Result<LaurentSeries> {
        self.lr.div(&self.embed(&f.num), &self.embed(&f.den))
    }

    /// `F(x^, y^)`; vanishes wherever known.
    pub fn relation_residual(&self) -> LaurentSeries {
        let c = self.ring.curve();
        let k = c.field();
        let lr = &self.lr;
        let (x, y) = (&self.xhat, &self.yhat);
        let cst = |a: FieldElem| LaurentSeries::monomial(k, a, 0);
        let terms = [
            lr.mul(y, y),
            lr.mul(&cst(c.a1()), &lr.mul(x, y)),
            lr.mul(&cst(c.a3()), y),
            lr.neg(&lr.pow(x, 3)),
            lr.neg(&lr.mul(&cst(c.a2()), &lr.mul(x, x))),
            lr.neg(&lr.mul(&cst(c.a4()), x)),
            cst(k.neg(c.a6())),
        ];
        terms.iter().fold(LaurentSeries::zero(), |acc, s| lr.add(&acc, s))
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::At(v) => write!(f, "{v}"),
            Val::Zero => f.write_str("+inf"),
            Val::Unknown { prec } => write!(f, "unknown (>= {prec})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> FiniteField {
        FiniteField::new(5, 1).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let k = f5();
        let lr = LaurentRing::new(&k, 16);
        let s = lr.add(&LaurentSeries::monomial(&k, k.one(), -3), &lr.t());
        assert_eq!(s.val(), Val::At(-3));
        let z = LaurentSeries::from_coeffs(&k, 0, vec![k.zero(); 10], Some(10));
        assert_eq!(z.val(), Val::Unknown { prec: 10 });
        let p = lr.mul(&LaurentSeries::monomial(&k, k.one(), -2), &LaurentSeries::monomial(&k, k.one(), 5));
        assert_eq!(p.val(), Val::At(3));
        assert_eq!(LaurentSeries::zero().val(), Val::Zero);
    }

    #[test]
    fn cuspidal_cubic_expands_to_monomials() {
        let k = f5();
        let e = WeierstrassCurve::from_ints(&k, [0, 0, 0, 0, 0]);
        let (x, y) = expand_xy(&e, 20).unwrap();
        assert_eq!(x.terms_below(&k, 21).unwrap(), BTreeMap::from([(-2, k.one())]));
        assert_eq!(y.terms_below(&k, 20).unwrap(), BTreeMap::from([(-3, k.one())]));
    }

    #[test]
    fn expansion_satisfies_relation() {
        for (p, a) in [(5, [0, 0, 0, -1, 0]), (5, [0, 0, 0, 1, 1]), (2, [1, 0, 1, 1, 0]), (3, [0, 1, 0, 0, 2]), (7, [1, 2, 3, 4, 5])] {
            let k = FiniteField::new(p, 1).unwrap();
            let e = WeierstrassCurve::from_ints(&k, a);
            let emb = Embedding::new(&CoordRing::new(&e), 40).unwrap();
            let r = emb.relation_residual();
            assert!(matches!(r.val(), Val::Unknown { .. }), "{}", r.format(&k));
            assert!(r.precision().unwrap() >= 37);
            assert_eq!(emb.xhat().val(), Val::At(-2));
            assert_eq!(emb.yhat().val(), Val::At(-3));
            assert_eq!(emb.xhat().coeff(&k, -2).unwrap(), k.one());
            assert_eq!(emb.yhat().coeff(&k, -3).unwrap(), k.one());
            let ty = emb.laurent().mul(&emb.laurent().t(), emb.yhat());
            assert_eq!(&ty, emb.xhat());
        }
    }

    #[test]
    fn expansion_is_stable_in_precision() {
        let k = FiniteField::new(7, 1).unwrap();
        let e = WeierstrassCurve::from_ints(&k, [1, 2, 3, 4, 5]);
        let (x20, _) = expand_xy(&e, 20).unwrap();
        let (x50, _) = expand_xy(&e, 50).unwrap();
        assert_eq!(x20, x50.truncate(&k, 21));
    }

    #[test]
    fn embed_examples() {
        let k = f5();
        let r = CoordRing::new(&WeierstrassCurve::from_ints(&k, [0, 0, 0, -1, 0]));
        let emb = Embedding::new(&r, 30).unwrap();
        assert_eq!(&emb.embed(&r.x()), emb.xhat());
        let yy = emb.embed(&r.mul(&r.y(), &r.y()));
        let y = emb.embed(&r.y());
        assert!(emb.laurent().agree(&yy, &emb.laurent().mul(&y, &y)));
        assert_eq!(emb.embed(&r.add(&r.monomial(2, 0), &r.y())).val(), Val::At(-4));
    }

    #[test]
    fn inverse_tracks_precision() {
        let k = f5();
        let lr = LaurentRing::new(&k, 12);
        let a = lr.add(&lr.one(), &lr.t());
        let b = lr.inv(&a).unwrap();
        assert_eq!(b.precision(), Some(12));
        let prod = lr.mul(&a, &b);
        assert!(lr.agree(&prod, &lr.one()));
        assert_eq!(prod.precision(), Some(12));
        let z = LaurentSeries::from_coeffs(&k, 0, vec![], Some(5));
        assert!(matches!(lr.inv(&z), Err(Error::InsufficientPrecision { .. })));
        assert!(a.coeff(&k, 3).is_ok());
        assert!(matches!(b.coeff(&k, 12), Err(Error::InsufficientPrecision { .. })));
    }

    proptest! {
        #[test]
        fn embedding_is_a_valuation_preserving_homomorphism(
            u1 in prop::collection::vec(0i64..7, 0..5), v1 in prop::collection::vec(0i64..7, 0..4),
            u2 in prop::collection::vec(0i64..7, 0..5), v2 in prop::collection::vec(0i64..7, 0..4),
        ) {
            let k = FiniteField::new(7, 1).unwrap();
            let r = CoordRing::new(&WeierstrassCurve::from_ints(&k, [1, 2, 3, 4, 5]));
            let emb = Embedding::new(&r, 40).unwrap();
            let lr = emb.laurent();
            let mk = |u: &[i64], v: &[i64]| r.from_parts(u.iter().map(|&c| k.from_int(c)).collect(), v.iter().map(|&c| k.from_int(c)).collect());
            let (a, b) = (mk(&u1, &v1), mk(&u2, &v2));
            let (ea, eb) = (emb.embed(&a), emb.embed(&b));
            prop_assert!(lr.agree(&emb.embed(&r.add(&a, &b)), &lr.add(&ea, &eb)));
            prop_assert!(lr.agree(&emb.embed(&r.mul(&a, &b)), &lr.mul(&ea, &eb)));
            match r.v_infinity(&a) {
                Some(v) => prop_assert_eq!(ea.val(), Val::At(v)),
                None => prop_assert_eq!(ea.val(), Val::Zero),
            }
        }
    }
}
