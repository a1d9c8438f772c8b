//! Weierstrass cubics `F(x,y) = y^2 + a1*x*y + a3*y - x^3 - a2*x^2 - a4*x - a6`
//! over a finite field, and the classification of the vertical lines `x = l`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{quad_roots, FieldElem, FiniteField, QuadraticExtension};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    field: FiniteField,
    /// `[a1, a2, a3, a4, a6]`
    a: [FieldElem; 5],
    smooth: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Affine { l: FieldElem, m: FieldElem },
    Infinity,
}

/// A vertical line `x = l`, including the line at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineLabel {
    Finite(FieldElem),
    Infinity,
}

/// How `F(l, y) = 0` factors over `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberCase {
    /// No root in `k`; `w^2 + b*w + c` is the (monic) polynomial `F(l, w)`.
    NoSolution { b: FieldElem, c: FieldElem },
    Unique(CurvePoint),
    Two(CurvePoint, CurvePoint),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    NoSolution,
    Unique,
    Two,
}

impl FiberCase {
    pub fn kind(&self) -> CaseKind {
        match self {
            FiberCase::NoSolution { .. } => CaseKind::NoSolution,
            FiberCase::Unique(_) => CaseKind::Unique,
            FiberCase::Two(..) => CaseKind::Two,
        }
    }

    /// Paper-style case number: 1 (no solution), 2 (unique), 3 (two).
    pub fn number(&self) -> u8 {
        match self.kind() {
            CaseKind::NoSolution => 1,
            CaseKind::Unique => 2,
            CaseKind::Two => 3,
        }
    }

    pub fn points(&self) -> Vec<CurvePoint> {
        match *self {
            FiberCase::NoSolution { .. } => vec![],
            FiberCase::Unique(p) => vec![p],
            FiberCase::Two(p, q) => vec![p, q],
        }
    }
}

impl CaseKind {
    pub fn number(self) -> u8 {
        match self {
            CaseKind::NoSolution => 1,
            CaseKind::Unique => 2,
            CaseKind::Two => 3,
        }
    }
}

impl WeierstrassCurve {
    pub fn new(field: &FiniteField, a: [FieldElem; 5]) -> Self {
        let mut curve = WeierstrassCurve { field: field.clone(), a, smooth: true };
        curve.smooth = curve.singular_point_scan().is_none();
        debug_assert_eq!(curve.smooth, !field.is_zero(curve.discriminant()));
        curve
    }

    /// Coefficients given as integers, reduced into the prime subfield.
    pub fn from_ints(field: &FiniteField, a: [i64; 5]) -> Self {
        Self::new(field, a.map(|c| field.from_int(c)))
    }

    /// Parses `"a1,a2,a3,a4,a6"`.
    pub fn parse(field: &FiniteField, spec: &str) -> Result<Self> {
        let parts: Vec<_> = spec.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::InvalidInput(format!("curve needs 5 coefficients, got {spec:?}")));
        }
        let mut a = [0i64; 5];
        for (slot, s) in a.iter_mut().zip(&parts) {
            *slot = s.parse().map_err(|_| Error::InvalidInput(format!("bad coefficient {s:?}")))?;
        }
        Ok(Self::from_ints(field, a))
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn a1(&self) -> FieldElem {
        self.a[0]
    }
    pub fn a2(&self) -> FieldElem {
        self.a[1]
    }
    pub fn a3(&self) -> FieldElem {
        self.a[2]
    }
    pub fn a4(&self) -> FieldElem {
        self.a[3]
    }
    pub fn a6(&self) -> FieldElem {
        self.a[4]
    }

    pub fn coefficients(&self) -> [FieldElem; 5] {
        self.a
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    pub fn eval(&self, l: FieldElem, m: FieldElem) -> FieldElem {
        eval_in(&self.field, &self.a, l, m)
    }

    /// `(F_x(l,m), F_y(l,m))`.
    pub fn partials(&self, l: FieldElem, m: FieldElem) -> (FieldElem, FieldElem) {
        partials_in(&self.field, &self.a, l, m)
    }

    pub fn contains(&self, p: CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { l, m } => self.field.is_zero(self.eval(l, m)),
        }
    }

    /// `p` in `E1`: `F_y(p) = 0`, or `p` at infinity.
    pub fn in_e1(&self, p: CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { l, m } => self.contains(p) && self.field.is_zero(self.partials(l, m).1),
        }
    }

    pub fn is_singular_at(&self, p: CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => false,
            CurvePoint::Affine { l, m } => {
                let k = &self.field;
                let (fx, fy) = self.partials(l, m);
                k.is_zero(self.eval(l, m)) && k.is_zero(fx) && k.is_zero(fy)
            }
        }
    }

    /// The singular point over `k`, if any.
    pub fn singular_point(&self) -> Option<CurvePoint> {
        if self.smooth {
            return None;
        }
        let k = &self.field;
        k.elements()
            .flat_map(|l| k.elements().map(move |m| CurvePoint::Affine { l, m }))
            .find(|&p| self.is_singular_at(p))
    }

    /// Exhaustive search for a point with `F = F_x = F_y = 0`, over the
    /// quadratic extension when `k` is a prime field and over `k` otherwise.
    fn singular_point_scan(&self) -> Option<(FieldElem, FieldElem)> {
        let a = self.a;
        let scan = if self.field.degree() == 1 {
            // F_p embeds in F_{p^2} with the same encoding
            FiniteField::new(self.field.characteristic(), 2).expect("prime characteristic")
        } else {
            self.field.clone()
        };
        let k = &scan;
        let two = k.from_int(2);
        for x in k.elements() {
            let lin = k.add(k.mul(a[0], x), a[2]);
            let ys: Vec<FieldElem> = if !k.is_zero(two) {
                vec![k.neg(k.div(lin, two).unwrap())]
            } else if k.is_zero(lin) {
                k.elements().collect()
            } else {
                vec![]
            };
            for y in ys {
                let (fx, fy) = partials_in(k, &a, x, y);
                if k.is_zero(eval_in(k, &a, x, y)) && k.is_zero(fx) && k.is_zero(fy) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Textbook discriminant; nonzero iff the curve is smooth.
    pub fn discriminant(&self) -> FieldElem {
        let k = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let c = |n: i64| k.from_int(n);
        let m = |x, y| k.mul(x, y);
        let b2 = k.add(m(a1, a1), m(c(4), a2));
        let b4 = k.add(m(c(2), a4), m(a1, a3));
        let b6 = k.add(m(a3, a3), m(c(4), a6));
        let b8 = [
            m(m(a1, a1), a6),
            m(c(4), m(a2, a6)),
            k.neg(m(a1, m(a3, a4))),
            m(a2, m(a3, a3)),
            k.neg(m(a4, a4)),
        ]
        .into_iter()
        .fold(k.zero(), |s, t| k.add(s, t));
        [
            k.neg(m(m(b2, b2), b8)),
            k.neg(m(c(8), m(b4, m(b4, b4)))),
            k.neg(m(c(27), m(b6, b6))),
            m(c(9), m(b2, m(b4, b6))),
        ]
        .into_iter()
        .fold(k.zero(), |s, t| k.add(s, t))
    }

    /// All rational points: affine ones ordered by `(l, m)`, then infinity.
    pub fn points(&self) -> Vec<CurvePoint> {
        let k = &self.field;
        let mut pts: Vec<CurvePoint> = k
            .elements()
            .flat_map(|l| k.elements().map(move |m| (l, m)))
            .filter(|&(l, m)| k.is_zero(self.eval(l, m)))
            .map(|(l, m)| CurvePoint::Affine { l, m })
            .collect();
        pts.push(CurvePoint::Infinity);
        pts
    }

    /// `F(l, y)` as the monic quadratic `y^2 + b*y + c`.
    pub fn fiber_quadratic(&self, l: FieldElem) -> (FieldElem, FieldElem) {
        let k = &self.field;
        let b = k.add(k.mul(self.a1(), l), self.a3());
        (b, self.eval(l, k.zero()))
    }

    pub fn classify_fiber(&self, line: LineLabel) -> FiberCase {
        let l = match line {
            LineLabel::Infinity => return FiberCase::Unique(CurvePoint::Infinity),
            LineLabel::Finite(l) => l,
        };
        let k = &self.field;
        let (b, c) = self.fiber_quadratic(l);
        let roots = quad_roots(k, k.one(), b, c).expect("monic");
        match roots[..] {
            [] => FiberCase::NoSolution { b, c },
            [m] => FiberCase::Unique(CurvePoint::Affine { l, m }),
            [m, m2] => FiberCase::Two(CurvePoint::Affine { l, m }, CurvePoint::Affine { l, m: m2 }),
            _ => unreachable!("quadratic with more than two roots"),
        }
    }

    /// All lines `x = l` for `l` in `k`, followed by the line at infinity.
    pub fn lines(&self) -> Vec<LineLabel> {
        let mut v: Vec<_> = self.field.elements().map(LineLabel::Finite).collect();
        v.push(LineLabel::Infinity);
        v
    }

    /// `k(w)` for a line with no rational solution.
    pub fn fiber_extension(&self, case: &FiberCase) -> Option<QuadraticExtension> {
        match *case {
            FiberCase::NoSolution { b, c } => QuadraticExtension::new(&self.field, b, c).ok(),
            _ => None,
        }
    }

    /// The curve `F(x + l, y + m) = 0` in standard form. With `m = None`
    /// only `x` is translated.
    pub fn shift(&self, l: FieldElem, m: Option<FieldElem>) -> Result<WeierstrassCurve> {
        let k = &self.field;
        if let Some(m) = m {
            if !k.is_zero(self.eval(l, m)) {
                return Err(Error::PointNotOnCurve { l: k.format(l), m: k.format(m) });
            }
        }
        Ok(self.translate(l, m.unwrap_or(k.zero())))
    }

    /// `F(x + l, y + m)` in standard form, for any `(l, m)`.
    pub fn translate(&self, l: FieldElem, m: FieldElem) -> WeierstrassCurve {
        let k = &self.field;
        let (fx, fy) = self.partials(l, m);
        let a2 = k.add(self.a2(), k.mul(k.from_int(3), l));
        let a6 = k.neg(self.eval(l, m));
        WeierstrassCurve::new(k, [self.a1(), a2, fy, k.neg(fx), a6])
    }

    pub fn format_point(&self, p: CurvePoint) -> String {
        match p {
            CurvePoint::Infinity => "inf".to_string(),
            CurvePoint::Affine { l, m } => format!("({},{})", self.field.format(l), self.field.format(m)),
        }
    }

    pub fn format_line(&self, line: LineLabel) -> String {
        match line {
            LineLabel::Infinity => "inf".to_string(),
            LineLabel::Finite(l) => self.field.format(l),
        }
    }

    pub fn describe(&self) -> String {
        let k = &self.field;
        let a: Vec<_> = self.a.iter().map(|&c| k.format(c)).collect();
        format!("[{}] over F_{}", a.join(","), k.spec())
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn eval_in(k: &FiniteField, a: &[FieldElem; 5], l: FieldElem, m: FieldElem) -> FieldElem {
    let [a1, a2, a3, a4, a6] = *a;
    // y^2 + a1 x y + a3 y - (x^3 + a2 x^2 + a4 x + a6)
    let lhs = k.mul(m, k.add(k.add(m, k.mul(a1, l)), a3));
    let rhs = k.add(k.mul(k.add(k.mul(k.add(l, a2), l), a4), l), a6);
    k.sub(lhs, rhs)
}

fn partials_in(k: &FiniteField, a: &[FieldElem; 5], l: FieldElem, m: FieldElem) -> (FieldElem, FieldElem) {
    let [a1, a2, a3, a4, _] = *a;
    let fx = k.sub(
        k.mul(a1, m),
        k.add(k.add(k.mul(k.from_int(3), k.mul(l, l)), k.mul(k.from_int(2), k.mul(a2, l))), a4),
    );
    let fy = k.add(k.add(k.mul(k.from_int(2), m), k.mul(a1, l)), a3);
    (fx, fy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FiniteField {
        FiniteField::new(5, 1).unwrap()
    }

    #[test]
    fn eval_examples() {
        let k = f5();
        let e = WeierstrassCurve::from_ints(&k, [0, 0, 0, -1, 0]);
        assert_eq!(e.eval(k.zero(), k.zero()), k.zero());
        assert_eq!(e.eval(k.from_int(2), k.from_int(1)), k.zero());
        assert_eq!(e.eval(k.from_int(1), k.from_int(1)), k.from_int(1));
    }

    #[test]
    fn partials_examples() {
        let k = f5();
        let e = WeierstrassCurve::from_ints(&k, [0, 0, 0, -1, 0]);
        assert_eq!(e.partials(k.zero(), k.zero()), (k.from_int(1), k.zero()));
        let cusp = WeierstrassCurve::from_ints(&k, [0, 0, 0, 0, 0]);
        assert_eq!(cusp.partials(k.zero(), k.zero()), (k.zero(), k.zero()));
        let e2 = WeierstrassCurve::from_ints(&k, [0, 0, 0, 1, 1]);
        assert_eq!(e2.partials(k.zero(), k.one()), (k.from_int(4), k.from_int(2)));
    }

    #[test]
    fn smoothness() {
        let k = f5();
        assert!(WeierstrassCurve::from_ints(&k, [0, 0, 0, -1, 0]).is_smooth());
        assert!(!WeierstrassCurve::from_ints(&k, [0, 0, 0, 0, 0]).is_smooth());
        assert!(WeierstrassCurve::from_ints(&k, [0, 0, 0, 1, 1]).is_smooth());
        // node y^2 = x^3 + x^2
        let node = WeierstrassCurve::from_ints(&k, [0, 1, 0, 0, 0]);
        assert!(!node.is_smooth());
        assert_eq!(node.singular_point(), Some(CurvePoint::Affine { l: k.zero(), m: k.zero() }));
    }

    #[test]
    fn scan_agrees_with_discriminant_everywhere_small() {
        for (p, e) in [(2, 1), (3, 1), (2, 2)] {
            let k = FiniteField::new(p, e).unwrap();
            let els: Vec<_> = k.elements().collect();
            for &a1 in &els {
                for &a3 in &els {
                    for &a2 in &els {
                        for &a4 in &els {
                            for &a6 in &els {
                                let c = WeierstrassCurve::new(&k, [a1, a2, a3, a4, a6]);
                                assert_eq!(c.is_smooth(), !k.is_zero(c.discriminant()), "{c}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn point_counts() {
        let k = f5();
        assert_eq!(WeierstrassCurve::from_ints(&k, [0, 0, 0, -1, 0]).points().len(), 8);
        assert_eq!(WeierstrassCurve::from_ints(&k, [0, 0, 0, 1, 1]).points().len(), 9);
        assert_eq!(WeierstrassCurve::from_ints(&k, [0, 0, 0, 1, 1]).points().last(), Some(&CurvePoint::Infinity));
    }

    #[test]
    fn classify_examples() {
        let k = f5();
        let e = WeierstrassCurve::from_ints(&k, [0, 0, 0, -1, 0]);
        let pt = |l, m| CurvePoint::Affine { l: k.from_int(l), m: k.from_int(m) };
        assert_eq!(e.classify_fiber(LineLabel::Finite(k.zero())), FiberCase::Unique(pt(0, 0)));
        assert_eq!(e.classify_fiber(LineLabel::Finite(k.from_int(2))), FiberCase::Two(pt(2, 1), pt(2, 4)));
        assert_eq!(e.classify_fiber(LineLabel::Infinity), FiberCase::Unique(CurvePoint::Infinity));
        let e2 = WeierstrassCurve::from_ints(&k, [0, 0, 0, 1, 1]);
        match e2.classify_fiber(LineLabel::Finite(k.one())) {
            FiberCase::NoSolution { b, c } => {
                assert_eq!(b, k.zero());
                assert_eq!(k.neg(c), k.from_int(3)); // w^2 = 3
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shift_examples() {
        let k = f5();
        let e = WeierstrassCurve::from_ints(&k, [0, 0, 0, -1, 0]);
        assert_eq!(e.shift(k.zero(), Some(k.zero())).unwrap(), e);
        let s = e.shift(k.from_int(2), None).unwrap();
        // (x+2)^3 - (x+2) = x^3 + 6x^2 + 11x + 6
        assert_eq!(s.coefficients(), [0, 1, 0, 1, 1].map(|c| k.from_int(c)));
        for l in k.elements() {
            for m in k.elements() {
                assert_eq!(e.shift(l, None).unwrap().eval(k.zero(), m), e.eval(l, m));
            }
        }
        assert!(matches!(e.shift(k.one(), Some(k.one())), Err(Error::PointNotOnCurve { .. })));
    }

    #[test]
    fn shift_inverse_is_identity() {
        let k = FiniteField::new(7, 1).unwrap();
        let e = WeierstrassCurve::from_ints(&k, [1, 2, 3, 4, 5]);
        for p in e.points() {
            if let CurvePoint::Affine { l, m } = p {
                let s = e.shift(l, Some(m)).unwrap();
                let back = s.translate(k.neg(l), k.neg(m));
                assert_eq!(back, e);
            }
        }
    }

    #[test]
    fn partition_and_point_count_identities() {
        for p in [2u64, 3, 5, 7] {
            let k = FiniteField::new(p, 1).unwrap();
            for a in [[0, 0, 0, -1, 0], [0, 0, 0, 1, 1], [1, 0, 1, 0, 0], [0, 0, 1, 1, 0]] {
                let e = WeierstrassCurve::from_ints(&k, a);
                let mut counts = [0usize; 3];
                for l in k.elements() {
                    let case = e.classify_fiber(LineLabel::Finite(l));
                    counts[case.number() as usize - 1] += 1;
                    if let FiberCase::Unique(pt) = case {
                        assert!(e.in_e1(pt));
                    }
                }
                assert_eq!(counts.iter().sum::<usize>() as u64, p);
                assert_eq!(e.points().len(), 1 + counts[1] + 2 * counts[2]);
            }
        }
    }
}
