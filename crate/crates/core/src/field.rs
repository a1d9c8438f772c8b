//! Prime fields `F_p` and their quadratic extensions `F_{p^2}`.
//!
//! Elements are plain `Copy` handles; all arithmetic goes through the
//! owning [`FiniteField`]. An element of `F_{p^2}` with coordinates
//! `(c0, c1)` stands for `c0 + c1*w` where `w` is a root of the field's
//! fixed monic modulus, and is encoded as the integer `c0 + c1*p`. The
//! encoding of `F_p` inside `F_{p^2}` is therefore the identity.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u32);

impl FieldElem {
    /// Raw encoding, `c0 + c1*p`.
    pub fn index(self) -> u32 {
        self.0
    }
}

#[derive(Debug)]
struct FieldData {
    p: u32,
    degree: u32,
    /// `(b, c)` for the modulus `w^2 + b*w + c`.
    modulus: Option<(u32, u32)>,
    inverses: Vec<u32>,
}

/// `F_p` (degree 1) or `F_{p^2}` (degree 2). Cheap to clone.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteField({})", self.spec())
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.degree == other.0.degree && self.0.modulus == other.0.modulus
    }
}

impl Eq for FiniteField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// Builds `F_p` or `F_{p^2}`. For degree 2 the modulus `w^2 + b*w + c`
    /// is the first irreducible one in lexicographic order of `(b, c)`.
    pub fn new(p: u64, degree: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > 46_337 {
            return Err(Error::InvalidInput(format!("characteristic {p} too large")));
        }
        let p32 = p as u32;
        let modulus = match degree {
            1 => None,
            2 => {
                let mut found = None;
                'search: for b in 0..p32 {
                    for c in 0..p32 {
                        let has_root = (0..p32).any(|y| {
                            (y as u64 * y as u64 + b as u64 * y as u64 + c as u64).is_multiple_of(p)
                        });
                        if !has_root {
                            found = Some((b, c));
                            break 'search;
                        }
                    }
                }
                Some(found.ok_or(Error::NoIrreducibleFound(p))?)
            }
            d => return Err(Error::UnsupportedDegree(d)),
        };
        // pow only needs multiplication, so an inverse-free copy can build the table
        let scratch = FiniteField(Arc::new(FieldData { p: p32, degree, modulus, inverses: Vec::new() }));
        let q = scratch.0.order_u32();
        let mut inverses = vec![0u32; q as usize];
        for e in 1..q {
            if inverses[e as usize] == 0 {
                let inv = scratch.pow(FieldElem(e), q as u64 - 2);
                inverses[e as usize] = inv.0;
                inverses[inv.0 as usize] = e;
            }
        }
        Ok(FiniteField(Arc::new(FieldData { p: p32, degree, modulus, inverses })))
    }

    /// Parses `"p"`, `"p^e"` or a prime power `"q"` (e.g. `"4"` for `F_4`).
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = || Error::InvalidInput(format!("bad field spec {spec:?}"));
        if let Some((p, e)) = spec.split_once(['^', ',']) {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let e: u32 = e.trim().trim_start_matches('^').parse().map_err(|_| bad())?;
            return FiniteField::new(p, e);
        }
        let q: u64 = spec.parse().map_err(|_| bad())?;
        if is_prime(q) {
            return FiniteField::new(q, 1);
        }
        let r = (q as f64).sqrt().round() as u64;
        if r * r == q && is_prime(r) {
            return FiniteField::new(r, 2);
        }
        Err(Error::NotPrime(q))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn order(&self) -> u64 {
        self.0.order_u32() as u64
    }

    /// Monic modulus `w^2 + b*w + c` as `(b, c)`, for degree 2.
    pub fn modulus(&self) -> Option<(FieldElem, FieldElem)> {
        self.0.modulus.map(|(b, c)| (FieldElem(b), FieldElem(c)))
    }

    /// Canonical spec string: `"p"` or `"p^2"`.
    pub fn spec(&self) -> String {
        if self.0.degree == 1 {
            format!("{}", self.0.p)
        } else {
            format!("{}^{}", self.0.p, self.0.degree)
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// The adjoined root `w` (degree 2 only).
    pub fn omega(&self) -> Option<FieldElem> {
        (self.0.degree == 2).then(|| FieldElem(self.0.p))
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coords(&self, c0: u32, c1: u32) -> FieldElem {
        let p = self.0.p;
        debug_assert!(self.0.degree == 2 || c1 == 0);
        FieldElem(c0 % p + (c1 % p) * p)
    }

    pub fn coords(&self, a: FieldElem) -> (u32, u32) {
        (a.0 % self.0.p, a.0 / self.0.p)
    }

    /// Element with the given raw index; `index < order()`.
    pub fn element(&self, index: u64) -> FieldElem {
        debug_assert!(index < self.order());
        FieldElem(index as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.0.order_u32()).map(FieldElem)
    }

    pub fn units(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (1..self.0.order_u32()).map(FieldElem)
    }

    pub fn is_zero(&self, a: FieldElem) -> bool {
        a.0 == 0
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.0.p;
        let (a0, a1) = (a.0 % p, a.0 / p);
        let (b0, b1) = (b.0 % p, b.0 / p);
        FieldElem((a0 + b0) % p + ((a1 + b1) % p) * p)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.0.p;
        let (a0, a1) = (a.0 % p, a.0 / p);
        FieldElem((p - a0) % p + ((p - a1) % p) * p)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.0.p as u64;
        match self.0.modulus {
            None => FieldElem(((a.0 as u64 * b.0 as u64) % p) as u32),
            Some((mb, mc)) => {
                let (a0, a1) = (a.0 as u64 % p, a.0 as u64 / p);
                let (b0, b1) = (b.0 as u64 % p, b.0 as u64 / p);
                // w^2 = -mb*w - mc
                let top = a1 * b1 % p;
                let c0 = (a0 * b0 + (p - mc as u64) * top) % p;
                let c1 = (a0 * b1 + a1 * b0 + (p - mb as u64) * top) % p;
                FieldElem((c0 + c1 * p) as u32)
            }
        }
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            None
        } else {
            Some(FieldElem(self.0.inverses[a.0 as usize]))
        }
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElem, mut n: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Order of `a` in the multiplicative group; `None` for zero.
    pub fn multiplicative_order(&self, a: FieldElem) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        let mut x = a;
        let mut n = 1;
        while x != self.one() {
            x = self.mul(x, a);
            n += 1;
        }
        Some(n)
    }

    /// Smallest-index generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        let target = self.order() - 1;
        self.units()
            .find(|&a| self.multiplicative_order(a) == Some(target))
            .expect("multiplicative group of a finite field is cyclic")
    }

    pub fn format(&self, a: FieldElem) -> String {
        let (c0, c1) = self.coords(a);
        match (c0, c1) {
            (c0, 0) => format!("{c0}"),
            (0, 1) => "w".to_string(),
            (0, c1) => format!("{c1}w"),
            (c0, 1) => format!("{c0}+w"),
            (c0, c1) => format!("{c0}+{c1}w"),
        }
    }
}

impl FieldData {
    fn order_u32(&self) -> u32 {
        self.p.pow(self.degree)
    }
}

/// All roots in `k` of `c2*y^2 + c1*y + c0`, by enumeration, ascending.
pub fn quad_roots(k: &FiniteField, c2: FieldElem, c1: FieldElem, c0: FieldElem) -> Result<Vec<FieldElem>> {
    if k.is_zero(c2) {
        return Err(Error::LeadingZero);
    }
    Ok(k.elements()
        .filter(|&y| {
            let v = k.add(k.mul(k.add(k.mul(c2, y), c1), y), c0);
            k.is_zero(v)
        })
        .collect())
}

/// `k(w) = k[w]/(w^2 + b*w + c)` for a quadratic without roots in `k`.
/// Works over any base field, including `F_{p^2}`.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    base: FiniteField,
    b: FieldElem,
    c: FieldElem,
}

/// `x0 + x1*w` in a [`QuadraticExtension`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadElem(pub FieldElem, pub FieldElem);

impl QuadraticExtension {
    pub fn new(base: &FiniteField, b: FieldElem, c: FieldElem) -> Result<Self> {
        if !quad_roots(base, base.one(), b, c)?.is_empty() {
            return Err(Error::InvalidInput("quadratic has a root in the base field".into()));
        }
        Ok(QuadraticExtension { base: base.clone(), b, c })
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn mul(&self, x: QuadElem, y: QuadElem) -> QuadElem {
        let k = &self.base;
        let top = k.mul(x.1, y.1);
        let c0 = k.sub(k.mul(x.0, y.0), k.mul(self.c, top));
        let c1 = k.sub(k.add(k.mul(x.0, y.1), k.mul(x.1, y.0)), k.mul(self.b, top));
        QuadElem(c0, c1)
    }

    pub fn is_zero(&self, x: QuadElem) -> bool {
        x.0 == self.base.zero() && x.1 == self.base.zero()
    }

    pub fn one(&self) -> QuadElem {
        QuadElem(self.base.one(), self.base.zero())
    }

    /// Canonical representative of the class of `x` in `k(w)^x / k^x`.
    pub fn projective(&self, x: QuadElem) -> QuadElem {
        let k = &self.base;
        let lead = if !k.is_zero(x.1) { x.1 } else { x.0 };
        let s = k.inv(lead).expect("projective class of zero");
        QuadElem(k.mul(x.0, s), k.mul(x.1, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<FiniteField> {
        vec![
            FiniteField::new(2, 1).unwrap(),
            FiniteField::new(3, 1).unwrap(),
            FiniteField::new(2, 2).unwrap(),
            FiniteField::new(5, 1).unwrap(),
            FiniteField::new(7, 1).unwrap(),
            FiniteField::new(3, 2).unwrap(),
            FiniteField::new(5, 2).unwrap(),
        ]
    }

    #[test]
    fn make_field_examples() {
        let f5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(f5.order(), 5);
        let f4 = FiniteField::new(2, 2).unwrap();
        let (b, c) = f4.modulus().unwrap();
        assert_eq!((b.index(), c.index()), (1, 1));
        let f25 = FiniteField::new(5, 2).unwrap();
        assert_eq!((f25.order() * f25.order() - 1) / (f25.order() - 1), 26);
        assert_eq!((f25.order() - 1) / (f5.order() - 1), 6);
        assert_eq!(FiniteField::new(6, 1).unwrap_err(), Error::NotPrime(6));
        assert_eq!(FiniteField::new(5, 3).unwrap_err(), Error::UnsupportedDegree(3));
    }

    #[test]
    fn parse_specs() {
        assert_eq!(FiniteField::parse("5").unwrap().order(), 5);
        assert_eq!(FiniteField::parse("2^2").unwrap().order(), 4);
        assert_eq!(FiniteField::parse("4").unwrap().order(), 4);
        assert_eq!(FiniteField::parse("25").unwrap().degree(), 2);
        assert!(FiniteField::parse("8").is_err());
        assert!(FiniteField::parse("x").is_err());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for k in small_fields() {
            let els: Vec<_> = k.elements().collect();
            for &a in &els {
                assert_eq!(k.add(a, k.neg(a)), k.zero());
                if a != k.zero() {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), k.one(), "{k:?} {a:?}");
                }
                for &b in &els {
                    assert_eq!(k.add(a, b), k.add(b, a));
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    for &c in &els {
                        assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
                        assert_eq!(k.add(k.add(a, b), c), k.add(a, k.add(b, c)));
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for k in small_fields() {
            let n = k.order() - 1;
            for a in k.units() {
                assert_eq!(n % k.multiplicative_order(a).unwrap(), 0);
            }
            let g = k.primitive_element();
            assert_eq!(k.multiplicative_order(g), Some(n));
        }
    }

    #[test]
    fn quad_roots_examples() {
        let k = FiniteField::new(5, 1).unwrap();
        let one = k.one();
        let roots = quad_roots(&k, one, k.zero(), k.from_int(-1)).unwrap();
        assert_eq!(roots, vec![k.from_int(1), k.from_int(4)]);
        assert!(quad_roots(&k, one, k.zero(), k.from_int(-2)).unwrap().is_empty());
        let f2 = FiniteField::new(2, 1).unwrap();
        assert_eq!(quad_roots(&f2, f2.one(), f2.one(), f2.zero()).unwrap().len(), 2);
        assert_eq!(quad_roots(&k, k.zero(), one, one).unwrap_err(), Error::LeadingZero);
    }

    #[test]
    fn rootless_quadratics_split_in_extension() {
        for p in [2u64, 3, 5, 7] {
            let k = FiniteField::new(p, 1).unwrap();
            let ext = FiniteField::new(p, 2).unwrap();
            for b in k.elements() {
                for c in k.elements() {
                    let roots = quad_roots(&k, k.one(), b, c).unwrap();
                    assert!(roots.len() <= 2);
                    if roots.is_empty() {
                        // F_p sits inside F_{p^2} with the same encoding.
                        let ext_roots = quad_roots(&ext, ext.one(), b, c).unwrap();
                        assert_eq!(ext_roots.len(), 2, "p={p} b={b:?} c={c:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn quadratic_extension_is_a_field() {
        let k = FiniteField::new(5, 1).unwrap();
        // w^2 = 3
        let ext = QuadraticExtension::new(&k, k.zero(), k.from_int(-3)).unwrap();
        let all: Vec<_> = k
            .elements()
            .flat_map(|a| k.elements().map(move |b| QuadElem(a, b)))
            .filter(|x| !ext.is_zero(*x))
            .collect();
        for &x in &all {
            assert!(all.iter().any(|&y| ext.mul(x, y) == ext.one()));
        }
        let classes: std::collections::BTreeSet<_> = all.iter().map(|&x| ext.projective(x)).collect();
        assert_eq!(classes.len(), 6);
    }
}
