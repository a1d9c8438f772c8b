//! Conjugation certificates: matrices `g` in `GL2(F)` with `g G g^-1`
//! inside `GL2(k)` for a finite stabilizer `G`, checked member by member in
//! exact fraction-field arithmetic.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::coordring::{AElem, AFrac, CoordRing, FunctionField, Mat2, RingOps};
use crate::curve::{CurvePoint, FiberCase, LineLabel, WeierstrassCurve};
use crate::domain::{DomainContext, DomainTag};
use crate::error::{Error, Result};
use crate::field::{quad_roots, FieldElem, FiniteField, QuadElem, QuadraticExtension};
use crate::stabilizers::{cyclic_subgroup, m2, m4, torus_generator, GroupDescriptor, StabilizerGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetGroup {
    /// The group already consists of constant matrices.
    AlreadyConstant,
    /// `{N2(r1, r2)}`, a copy of `k(w)^x` inside `GL2(k)`.
    QuadraticTorus,
    /// `{N2(r1, r2)}` before refinement.
    ConstantSubgroup,
    /// Diagonal matrices `D(k)`.
    Diagonal,
    /// Contained in the upper triangular group `B(k)`.
    ContainedInBorel,
    FullGL2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "state", content = "reason", rename_all = "snake_case")]
pub enum Verdict {
    Unverified,
    Verified,
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct ConjugationCertificate {
    /// Label of the vertex whose stabilizer is conjugated.
    pub subject: String,
    pub source: GroupDescriptor,
    pub target: TargetGroup,
    /// The full conjugator.
    pub g: Mat2<AFrac>,
    /// Projective classes of `g * member * g^-1`, sorted.
    pub image: Vec<Mat2<FieldElem>>,
    pub members: usize,
    pub verdict: Verdict,
}

impl ConjugationCertificate {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    pub fn to_json(&self, ring: &CoordRing) -> Value {
        let k = ring.field();
        let entry = |f: &AFrac| json!([ring.format(&f.num), ring.format(&f.den)]);
        let mat = |m: &Mat2<FieldElem>| json!([[k.format(m.a), k.format(m.b)], [k.format(m.c), k.format(m.d)]]);
        json!({
            "subject": self.subject,
            "source": self.source.describe(),
            "target": self.target,
            "conjugator": [[entry(&self.g.a), entry(&self.g.b)], [entry(&self.g.c), entry(&self.g.d)]],
            "members": self.members,
            "image_order": self.image.len(),
            "image_sample": self.image.iter().take(4).map(mat).collect::<Vec<_>>(),
            "verdict": self.verdict,
        })
    }
}

// ---------------------------------------------------------------------------
// exact conjugation

fn frac_matrix(ff: &FunctionField, m: &Mat2<AElem>) -> Mat2<AFrac> {
    m.map(|e| ff.from_elem(e))
}

fn const_matrix(ff: &FunctionField, m: &Mat2<FieldElem>) -> Mat2<AFrac> {
    m.map(|&c| ff.constant(c))
}

pub fn inverse(ff: &FunctionField, g: &Mat2<AFrac>) -> Result<Mat2<AFrac>> {
    let det = g.det(ff);
    if ff.is_zero(&det) {
        return Err(Error::Singular);
    }
    let inv = ff.inv(&det)?;
    Ok(g.adjugate(ff).map(|e| ff.mul(e, &inv)))
}

/// `g m g^-1` when all four entries are constants.
pub fn conjugate_to_constant(ff: &FunctionField, g: &Mat2<AFrac>, ginv: &Mat2<AFrac>, m: &Mat2<AElem>) -> Option<Mat2<FieldElem>> {
    let prod = g.mul(&frac_matrix(ff, m), ff).mul(ginv, ff);
    prod.try_map(|e| ff.constant_value(e).ok_or(())).ok()
}

/// Conjugates every member and records the image, failing on the first
/// member whose conjugate is not constant or changes the determinant.
fn verify_members(
    ring: &CoordRing,
    subject: String,
    source: GroupDescriptor,
    target: TargetGroup,
    g: Mat2<AFrac>,
    members: &[Mat2<AElem>],
) -> Result<ConjugationCertificate> {
    let ff = FunctionField::new(ring);
    let k = ring.field();
    let ginv = inverse(&ff, &g)?;
    let images: Vec<std::result::Result<Mat2<FieldElem>, String>> = members
        .par_iter()
        .map(|m| {
            let n = conjugate_to_constant(&ff, &g, &ginv, m).ok_or_else(|| format!("non-constant conjugate of {}", Mat2::from(m.format(ring))))?;
            let det_m = m.unit_det(ring).ok_or("member is not invertible")?;
            if n.det(k) != det_m {
                return Err("determinant changed under conjugation".to_string());
            }
            Ok(n.projective(k))
        })
        .collect();
    let mut image = BTreeSet::new();
    let mut verdict = Verdict::Verified;
    for r in images {
        match r {
            Ok(n) => {
                image.insert(n);
            }
            Err(e) => {
                verdict = Verdict::Failed(e);
                break;
            }
        }
    }
    if verdict == Verdict::Verified && image.len() != members.len() {
        verdict = Verdict::Failed(format!("image has {} classes for {} members", image.len(), members.len()));
    }
    Ok(ConjugationCertificate { subject, source, target, g, image: image.into_iter().collect(), members: members.len(), verdict })
}

impl From<[String; 4]> for Mat2<String> {
    fn from([a, b, c, d]: [String; 4]) -> Self {
        Mat2::new(a, b, c, d)
    }
}

fn fail(cert: &ConjugationCertificate) -> Result<()> {
    match &cert.verdict {
        Verdict::Failed(e) => Err(Error::IdentityFailure(format!("{}: {e}", cert.subject))),
        _ => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// the base identities at the origin

/// `(x, -y; 0, 1)`.
pub fn g_v0(ring: &CoordRing) -> Mat2<AFrac> {
    let ff = FunctionField::new(ring);
    Mat2::new(ff.from_elem(&ring.x()), ff.from_elem(&ring.neg(&ring.y())), ff.zero(), ff.one())
}

/// `N2(r1, r2) = (r1, a6 r2; r2, r1 - a3 r2)`.
pub fn n2(curve: &WeierstrassCurve, r1: FieldElem, r2: FieldElem) -> Mat2<FieldElem> {
    let k = curve.field();
    Mat2::new(r1, k.mul(curve.a6(), r2), r2, k.sub(r1, k.mul(curve.a3(), r2)))
}

/// `(x, -y; 0, 1) M2(r1, r2) (x, -y; 0, 1)^-1 = N2(r1, r2)` for every
/// nondegenerate pair, on a curve whose line of interest is `x = 0`.
pub fn certificate_v0(curve: &WeierstrassCurve) -> Result<ConjugationCertificate> {
    let ring = CoordRing::new(curve);
    let ff = FunctionField::new(&ring);
    let k = curve.field();
    let g = g_v0(&ring);
    let ginv = inverse(&ff, &g)?;
    let mut members = Vec::new();
    let mut image = BTreeSet::new();
    for r1 in k.elements() {
        for r2 in k.elements() {
            let m = m2(&ring, r1, r2);
            if m.unit_det(&ring).is_none() {
                continue;
            }
            let expect = n2(curve, r1, r2);
            match conjugate_to_constant(&ff, &g, &ginv, &m) {
                Some(n) if n == expect => {
                    let p = m.projective(&ring);
                    if !members.contains(&p) {
                        members.push(p);
                        image.insert(n.projective(k));
                    }
                }
                _ => {
                    return Err(Error::IdentityFailure(format!(
                        "g M2({}, {}) g^-1 != N2 on {}",
                        k.format(r1),
                        k.format(r2),
                        curve.describe()
                    )))
                }
            }
        }
    }
    let source = descriptor_at_zero(curve);
    Ok(ConjugationCertificate {
        subject: "v(0)".into(),
        source,
        target: TargetGroup::ConstantSubgroup,
        g,
        image: image.into_iter().collect(),
        members: members.len(),
        verdict: Verdict::Verified,
    })
}

fn descriptor_at_zero(curve: &WeierstrassCurve) -> GroupDescriptor {
    crate::stabilizers::expected_descriptor(curve, DomainTag::V(LineLabel::Finite(curve.field().zero())))
}

/// Isomorphism data from a finite group to an abstract target.
#[derive(Clone, Debug, Serialize)]
pub struct IsoWitness {
    pub target: WitnessTarget,
    pub order: usize,
    pub verified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessTarget {
    Trivial,
    /// `k(w)^x / k^x`
    QuadraticTorus,
    /// `k`
    Additive,
    /// `k^x`
    Multiplicative,
    /// `PGL2(k)`
    Pgl2,
    /// `(k^x x k^x |x k^n) / k^x`
    Borel,
}

/// Checks that `images` defines an injective homomorphism on `group`.
fn is_injective_hom<T: Clone + Send + Sync>(
    ring: &CoordRing,
    group: &StabilizerGroup,
    images: &[T],
    mul: impl Fn(&T, &T) -> T + Sync,
    eq: impl Fn(&T, &T) -> bool + Sync,
) -> bool {
    let n = images.len();
    let injective = (0..n).into_par_iter().all(|i| (i + 1..n).all(|j| !eq(&images[i], &images[j])));
    let hom = (0..n).into_par_iter().all(|i| {
        (0..n).all(|j| match group.product(ring, i, j) {
            Some(p) => eq(&mul(&images[i], &images[j]), &images[p]),
            None => false,
        })
    });
    injective && hom
}

/// `N2(r1, r2) -> r1 + r2 w` onto `k(w)^x / k^x`.
pub fn refine_case1(curve: &WeierstrassCurve, cert: &ConjugationCertificate) -> Result<IsoWitness> {
    let k = curve.field();
    let ext = QuadraticExtension::new(k, curve.a3(), k.neg(curve.a6()))
        .map_err(|_| Error::WitnessFailure("F(0, y) has a rational root".into()))?;
    let images: Vec<QuadElem> = cert.image.iter().map(|n| ext.projective(QuadElem(n.a, n.c))).collect();
    let distinct: BTreeSet<_> = images.iter().collect();
    let closed = images.iter().all(|&a| images.iter().all(|&b| distinct.contains(&ext.projective(ext.mul(a, b)))));
    let ok = distinct.len() == images.len() && images.len() as u64 == k.order() + 1 && closed;
    // the map respects products: N2 multiplies like r1 + r2 w
    let hom = cert.image.iter().all(|x| {
        cert.image.iter().all(|y| {
            let prod = x.mul(y, k).projective(k);
            ext.projective(QuadElem(prod.a, prod.c)) == ext.projective(ext.mul(QuadElem(x.a, x.c), QuadElem(y.a, y.c)))
        })
    });
    if !(ok && hom) {
        return Err(Error::WitnessFailure("N2 -> k(w)^x/k^x is not an isomorphism".into()));
    }
    Ok(IsoWitness { target: WitnessTarget::QuadraticTorus, order: images.len(), verified: true })
}

fn refined(cert: &ConjugationCertificate, ring: &CoordRing, h: &Mat2<FieldElem>, target: TargetGroup) -> ConjugationCertificate {
    let ff = FunctionField::new(ring);
    let k = ring.field();
    let hinv = h.inverse(k).expect("invertible refinement");
    let image: BTreeSet<_> = cert.image.iter().map(|n| h.mul(n, k).mul(&hinv, k).projective(k)).collect();
    ConjugationCertificate {
        subject: cert.subject.clone(),
        source: cert.source,
        target,
        g: const_matrix(&ff, h).mul(&cert.g, &ff),
        image: image.into_iter().collect(),
        members: cert.members,
        verdict: cert.verdict.clone(),
    }
}

/// `(u, uv; -1/(u(u-v)), -1/(u-v))` diagonalizes `{N2}`; needs `u != 0`.
pub fn case3_refinement(k: &FiniteField, u: FieldElem, v: FieldElem) -> Result<Mat2<FieldElem>> {
    let uv = k.sub(u, v);
    let inv = |x| k.inv(x).ok_or_else(|| Error::InvalidInput("case (3) refinement needs u != 0 and u != v".into()));
    let c = k.neg(inv(k.mul(u, uv))?);
    let d = k.neg(inv(uv)?);
    Ok(Mat2::new(u, k.mul(u, v), c, d))
}

pub fn refine_case3(curve: &WeierstrassCurve, cert: &ConjugationCertificate, u: FieldElem, v: FieldElem) -> Result<ConjugationCertificate> {
    let ring = CoordRing::new(curve);
    let k = curve.field();
    let h = case3_refinement(k, u, v)?;
    let out = refined(cert, &ring, &h, TargetGroup::Diagonal);
    let diagonal = out.image.iter().all(|n| k.is_zero(n.b) && k.is_zero(n.c));
    if !diagonal || out.image.len() as u64 != k.order() - 1 {
        return Err(Error::IdentityFailure(format!("{}: image is not D(k) modulo scalars", cert.subject)));
    }
    Ok(out)
}

pub fn refine_case2(curve: &WeierstrassCurve, cert: &ConjugationCertificate, u: FieldElem) -> Result<ConjugationCertificate> {
    let ring = CoordRing::new(curve);
    let k = curve.field();
    let h = Mat2::new(k.zero(), k.neg(k.one()), k.one(), u);
    let out = refined(cert, &ring, &h, TargetGroup::ContainedInBorel);
    if !out.image.iter().all(|n| k.is_zero(n.c)) {
        return Err(Error::IdentityFailure(format!("{}: image leaves B(k)", cert.subject)));
    }
    Ok(out)
}

/// `(x, -y; y/a4, 1 - y^2/(a4 x))`, for `(0, 0)` in `E1` with `a4 != 0`.
pub fn g_e0(ring: &CoordRing) -> Result<Mat2<AFrac>> {
    let c = ring.curve();
    let k = ring.field();
    if !k.is_zero(c.a3()) || !k.is_zero(c.a6()) {
        return Err(Error::NotInE1("(0,0)".into()));
    }
    let a4inv = k.inv(c.a4()).ok_or_else(|| Error::SingularPoint("(0,0)".into()))?;
    let ff = FunctionField::new(ring);
    let y = ring.y();
    let yy = ring.mul(&y, &y);
    let d = ff.frac(ring.sub(&ring.scale(c.a4(), &ring.x()), &yy), ring.scale(c.a4(), &ring.x()))?;
    Ok(Mat2::new(ff.from_elem(&ring.x()), ff.from_elem(&ring.neg(&y)), ff.from_elem(&ring.scale(a4inv, &y)), d))
}

/// Conjugates the full `M4` family at the origin into `GL2(k)`.
pub fn certificate_e(curve: &WeierstrassCurve) -> Result<ConjugationCertificate> {
    let ring = CoordRing::new(curve);
    let k = curve.field();
    let g = g_e0(&ring)?;
    let els: Vec<FieldElem> = k.elements().collect();
    let mut members = BTreeSet::new();
    for &r1 in &els {
        for &r2 in &els {
            for &r3 in &els {
                for &r4 in &els {
                    let m = m4(&ring, [r1, r2, r3, r4]);
                    if m.unit_det(&ring).is_some() {
                        members.insert(m.projective(&ring));
                    }
                }
            }
        }
    }
    let members: Vec<_> = members.into_iter().collect();
    let cert = verify_members(&ring, "e((0,0))".into(), GroupDescriptor::FullPGL2, TargetGroup::FullGL2, g, &members)?;
    fail(&cert)?;
    let q = k.order();
    if cert.image.len() as u64 != q * q * q - q {
        return Err(Error::IdentityFailure(format!("image of e((0,0)) has order {}", cert.image.len())));
    }
    Ok(cert)
}

// ---------------------------------------------------------------------------
// arbitrary lines and points, through the coordinate shift

fn translate_matrix(ring: &CoordRing, g: &Mat2<AFrac>, l: FieldElem, m: FieldElem) -> Mat2<AFrac> {
    let ff = FunctionField::new(ring);
    g.map(|e| ff.translate_from_shifted(e, l, m))
}

/// Certificate for `Gamma_v(l)`, checked on every member of `group`.
pub fn certificate_for_line(ctx: &DomainContext, line: LineLabel, group: &StabilizerGroup) -> Result<ConjugationCertificate> {
    let curve = ctx.curve();
    let ring = ctx.ring();
    let k = curve.field();
    let subject = DomainTag::V(line).label(curve);
    let l = match line {
        LineLabel::Infinity => {
            let ff = ctx.function_field();
            let cert = verify_members(ring, subject, group.iso, TargetGroup::AlreadyConstant, Mat2::identity(ff), &group.reps)?;
            fail(&cert)?;
            return Ok(cert);
        }
        LineLabel::Finite(l) => l,
    };
    let shifted = curve.shift(l, None)?;
    let base = certificate_v0(&shifted)?;
    let case = curve.classify_fiber(line);
    let (h, target) = match case {
        FiberCase::NoSolution { .. } => (Mat2::identity(k), TargetGroup::QuadraticTorus),
        FiberCase::Two(..) => {
            let roots = quad_roots(k, k.one(), shifted.a3(), k.neg(shifted.a6()))?;
            let (u, v) = if k.is_zero(roots[0]) { (roots[1], roots[0]) } else { (roots[0], roots[1]) };
            (case3_refinement(k, u, v)?, TargetGroup::Diagonal)
        }
        FiberCase::Unique(_) => {
            let u = quad_roots(k, k.one(), shifted.a3(), k.neg(shifted.a6()))?[0];
            (Mat2::new(k.zero(), k.neg(k.one()), k.one(), u), TargetGroup::ContainedInBorel)
        }
    };
    let ff = ctx.function_field();
    let g = const_matrix(ff, &h).mul(&translate_matrix(ring, &base.g, l, k.zero()), ff);
    let cert = verify_members(ring, subject, group.iso, target, g, &group.reps)?;
    fail(&cert)?;
    let shape_ok = match target {
        TargetGroup::Diagonal => cert.image.iter().all(|n| k.is_zero(n.b) && k.is_zero(n.c)),
        TargetGroup::ContainedInBorel => cert.image.iter().all(|n| k.is_zero(n.c)),
        _ => true,
    };
    if !shape_ok {
        return Err(Error::IdentityFailure(format!("{}: image has the wrong shape", cert.subject)));
    }
    Ok(cert)
}

/// Certificate for `Gamma_e(p)`, checked on every member of `group`.
pub fn certificate_for_point(ctx: &DomainContext, p: CurvePoint, group: &StabilizerGroup) -> Result<ConjugationCertificate> {
    let curve = ctx.curve();
    let ring = ctx.ring();
    let subject = DomainTag::E(p).label(curve);
    let g = match p {
        CurvePoint::Infinity => Mat2::identity(ctx.function_field()),
        CurvePoint::Affine { l, m } => {
            if !curve.in_e1(p) {
                return Err(Error::NotInE1(curve.format_point(p)));
            }
            let shifted = curve.shift(l, Some(m))?;
            translate_matrix(ring, &g_e0(&CoordRing::new(&shifted))?, l, m)
        }
    };
    let target = if p == CurvePoint::Infinity { TargetGroup::AlreadyConstant } else { TargetGroup::FullGL2 };
    let cert = verify_members(ring, subject, group.iso, target, g, &group.reps)?;
    fail(&cert)?;
    Ok(cert)
}

/// Eigenvector of `m` for the constant eigenvalue `lam`, as a column over `A`.
fn eigenvector(ring: &CoordRing, m: &Mat2<AElem>, lam: FieldElem, first: bool) -> (AElem, AElem) {
    let l = ring.constant(lam);
    if !m.b.is_zero() {
        (m.b.clone(), ring.sub(&l, &m.a))
    } else if !m.c.is_zero() {
        (ring.sub(&l, &m.d), m.c.clone())
    } else if first {
        (ring.one(), ring.zero())
    } else {
        (ring.zero(), ring.one())
    }
}

/// Diagonalizes the cyclic torus of a cusp stabilizer. Used for the
/// singular point, whose contribution is `k^x` instead of `PGL2(k)`.
pub fn torus_certificate(ctx: &DomainContext, group: &StabilizerGroup) -> Result<ConjugationCertificate> {
    let ring = ctx.ring();
    let k = ring.field();
    let ff = ctx.function_field();
    let subject = format!("torus of {}", group.tag.label(ctx.curve()));
    let gen = torus_generator(ring, group).ok_or_else(|| {
        let exponent = (0..group.order()).map(|i| group.element_order(ring, i)).max().unwrap_or(1);
        Error::WitnessFailure(format!("{subject}: no element of order q-1 (order {}, exponent {exponent})", group.order()))
    })?;
    let m = &group.reps[gen];
    let tr = ring.add(&m.a, &m.d);
    let tr = ring.constant_value(&tr).ok_or_else(|| Error::WitnessFailure(format!("{subject}: trace is not constant")))?;
    let det = m.unit_det(ring).unwrap();
    let roots = quad_roots(k, k.one(), k.neg(tr), det)?;
    let [l1, l2] = roots[..] else {
        return Err(Error::WitnessFailure(format!("{subject}: eigenvalues are not distinct and rational")));
    };
    let (p11, p21) = eigenvector(ring, m, l1, true);
    let (p12, p22) = eigenvector(ring, m, l2, false);
    let p = frac_matrix(ff, &Mat2::new(p11, p12, p21, p22));
    let g = inverse(ff, &p)?;
    let members: Vec<_> = cyclic_subgroup(ring, group, gen).into_iter().map(|i| group.reps[i].clone()).collect();
    let cert = verify_members(ring, subject, GroupDescriptor::CyclicOfOrder(k.order() - 1), TargetGroup::Diagonal, g, &members)?;
    fail(&cert)?;
    if !cert.image.iter().all(|n| k.is_zero(n.b) && k.is_zero(n.c)) {
        return Err(Error::IdentityFailure(format!("{}: torus image is not diagonal", cert.subject)));
    }
    Ok(cert)
}

// ---------------------------------------------------------------------------
// isomorphism witnesses

/// An explicit isomorphism from a stabilizer onto its abstract type,
/// verified on all pairs.
pub fn iso_witness(ctx: &DomainContext, group: &StabilizerGroup) -> Result<IsoWitness> {
    let ring = ctx.ring();
    let k = ring.field();
    let curve = ctx.curve();
    let n = group.order();
    let fail = || Error::WitnessFailure(format!("{} is not {}", group.tag.label(curve), group.iso.describe()));
    let witness = |target, ok: bool| if ok { Ok(IsoWitness { target, order: n, verified: true }) } else { Err(fail()) };
    match group.tag {
        DomainTag::O => witness(WitnessTarget::Trivial, n == 1),
        DomainTag::V(line) => {
            let cert = certificate_for_line(ctx, line, group)?;
            let ff = ctx.function_field();
            let ginv = inverse(ff, &cert.g)?;
            let images: Vec<Mat2<FieldElem>> = group
                .reps
                .iter()
                .map(|m| conjugate_to_constant(ff, &cert.g, &ginv, m).map(|x| x.projective(k)))
                .collect::<Option<_>>()
                .ok_or_else(fail)?;
            match cert.target {
                TargetGroup::QuadraticTorus => {
                    let LineLabel::Finite(l) = line else { return Err(fail()) };
                    let shifted = curve.shift(l, None)?;
                    let ext = QuadraticExtension::new(k, shifted.a3(), k.neg(shifted.a6()))?;
                    let imgs: Vec<QuadElem> = images.iter().map(|x| ext.projective(QuadElem(x.a, x.c))).collect();
                    let ok = is_injective_hom(ring, group, &imgs, |a, b| ext.projective(ext.mul(*a, *b)), |a, b| a == b);
                    witness(WitnessTarget::QuadraticTorus, ok && n as u64 == k.order() + 1)
                }
                TargetGroup::Diagonal => {
                    let imgs: Vec<FieldElem> = images.iter().map(|x| k.div(x.a, x.d).unwrap()).collect();
                    let ok = is_injective_hom(ring, group, &imgs, |a, b| k.mul(*a, *b), |a, b| a == b);
                    witness(WitnessTarget::Multiplicative, ok && n as u64 == k.order() - 1)
                }
                TargetGroup::ContainedInBorel | TargetGroup::AlreadyConstant => {
                    let unipotent = images.iter().all(|x| k.is_zero(x.c) && x.a == x.d);
                    let imgs: Vec<FieldElem> = images.iter().map(|x| k.div(x.b, x.a).unwrap()).collect();
                    let ok = unipotent && is_injective_hom(ring, group, &imgs, |a, b| k.add(*a, *b), |a, b| a == b);
                    witness(WitnessTarget::Additive, ok && n as u64 == k.order())
                }
                _ => Err(fail()),
            }
        }
        DomainTag::E(p) => {
            let cert = certificate_for_point(ctx, p, group)?;
            let ff = ctx.function_field();
            let ginv = inverse(ff, &cert.g)?;
            let imgs: Vec<Mat2<FieldElem>> = group
                .reps
                .iter()
                .map(|m| conjugate_to_constant(ff, &cert.g, &ginv, m).map(|x| x.projective(k)))
                .collect::<Option<_>>()
                .ok_or_else(fail)?;
            let ok = is_injective_hom(ring, group, &imgs, |a, b| a.mul(b, k).projective(k), |a, b| a == b);
            let q = k.order();
            witness(WitnessTarget::Pgl2, ok && n as u64 == q * q * q - q)
        }
        DomainTag::C(p, dim) => borel_witness(ctx, group, p, dim),
    }
}

/// Conjugating by `h = (1, s; 0, 1)` with `s` the end of the cusp ray makes
/// every member lower triangular `(a, 0; b, d)`; the witness is
/// `(a/d, b/d)` with the law `(s, b)(s', b') = (s s', b s' + b')`.
fn borel_witness(ctx: &DomainContext, group: &StabilizerGroup, p: CurvePoint, dim: u32) -> Result<IsoWitness> {
    let ring = ctx.ring();
    let ff = ctx.function_field();
    let k = ring.field();
    let fail = |why: &str| Error::WitnessFailure(format!("{}: {why}", group.tag.label(ctx.curve())));
    let h = match p {
        CurvePoint::Infinity => Mat2::new(ff.zero(), ff.one(), ff.one(), ff.zero()),
        CurvePoint::Affine { l, m } => Mat2::new(ff.one(), ctx.cusp_function(l, m), ff.zero(), ff.one()),
    };
    let hinv = inverse(ff, &h)?;
    let mut imgs: Vec<(FieldElem, AFrac)> = Vec::with_capacity(group.order());
    for m in &group.reps {
        let c = hinv.mul(&frac_matrix(ff, m), ff).mul(&h, ff);
        if !ff.is_zero(&c.b) {
            return Err(fail("member does not fix the end of the cusp"));
        }
        let a = ff.constant_value(&c.a).ok_or_else(|| fail("diagonal entry not constant"))?;
        let d = ff.constant_value(&c.d).ok_or_else(|| fail("diagonal entry not constant"))?;
        let dinv = k.inv(d).ok_or_else(|| fail("singular member"))?;
        imgs.push((k.mul(a, dinv), ff.mul(&c.c, &ff.constant(dinv))));
    }
    let eq = |x: &(FieldElem, AFrac), y: &(FieldElem, AFrac)| x.0 == y.0 && ff.eq(&x.1, &y.1);
    let mul = |x: &(FieldElem, AFrac), y: &(FieldElem, AFrac)| (k.mul(x.0, y.0), ff.add(&ff.mul(&x.1, &ff.constant(y.0)), &y.1));
    let ok = is_injective_hom(ring, group, &imgs, mul, eq);
    let torus: BTreeSet<FieldElem> = imgs.iter().map(|x| x.0).collect();
    let unipotent: Vec<&AFrac> = imgs.iter().filter(|x| x.0 == k.one()).map(|x| &x.1).collect();
    let q = k.order();
    let scaled_closed = unipotent
        .iter()
        .all(|b| k.units().all(|c| unipotent.iter().any(|b2| ff.eq(&ff.mul(b, &ff.constant(c)), b2))));
    let sizes = torus.len() as u64 == q - 1 && unipotent.len() as u64 == q.pow(dim);
    if ok && sizes && scaled_closed {
        Ok(IsoWitness { target: WitnessTarget::Borel, order: group.order(), verified: true })
    } else {
        Err(fail("not (k^x x| k^n)"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordring::DEFAULT_BUDGET;
    use crate::stabilizers::stabilizer;

    fn ctx(a: [i64; 5]) -> DomainContext {
        let k = FiniteField::new(5, 1).unwrap();
        DomainContext::new(&WeierstrassCurve::from_ints(&k, a), 48).unwrap()
    }

    fn stab(c: &DomainContext, tag: DomainTag) -> StabilizerGroup {
        stabilizer(c, &c.vertex(tag).unwrap(), None, DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn v0_identity() {
        let c = ctx([0, 0, 0, -1, 0]);
        let k = c.ring().field().clone();
        let cert = certificate_v0(c.curve()).unwrap();
        assert!(cert.is_verified());
        assert_eq!(cert.image.len(), 5);
        assert!(cert.image.contains(&Mat2::identity(&k)));
        assert_eq!(n2(c.curve(), k.one(), k.zero()), Mat2::identity(&k));
    }

    #[test]
    fn case1_witness() {
        let c = ctx([0, 0, 0, 1, 1]);
        let k = c.ring().field().clone();
        let shifted = c.curve().shift(k.one(), None).unwrap();
        let cert = certificate_v0(&shifted).unwrap();
        let w = refine_case1(&shifted, &cert).unwrap();
        assert_eq!(w.order, 6);
        let g = stab(&c, DomainTag::V(LineLabel::Finite(k.one())));
        assert_eq!(iso_witness(&c, &g).unwrap().target, WitnessTarget::QuadraticTorus);
    }

    #[test]
    fn case3_and_case2_refinements() {
        let c = ctx([0, 0, 0, -1, 0]);
        let k = c.ring().field().clone();
        let shifted = c.curve().shift(k.from_int(2), None).unwrap();
        let cert = certificate_v0(&shifted).unwrap();
        let d = refine_case3(&shifted, &cert, k.one(), k.from_int(4)).unwrap();
        assert_eq!(d.image.len(), 4);
        assert!(d.image.contains(&Mat2::identity(&k)));

        let cert0 = certificate_v0(c.curve()).unwrap();
        let b = refine_case2(c.curve(), &cert0, k.zero()).unwrap();
        assert_eq!(b.image.len(), 5);
        assert!(b.image.iter().all(|n| n.a == n.d));
        assert!(b.image.iter().any(|n| !k.is_zero(n.b)));
    }

    #[test]
    fn e_certificate_is_surjective() {
        let c = ctx([0, 0, 0, -1, 0]);
        let cert = certificate_e(c.curve()).unwrap();
        assert_eq!(cert.image.len(), 120);
        let k = c.ring().field().clone();
        let p = CurvePoint::Affine { l: k.one(), m: k.zero() };
        let g = stab(&c, DomainTag::E(p));
        let cert = certificate_for_point(&c, p, &g).unwrap();
        assert_eq!(cert.image.len(), 120);
        assert_eq!(iso_witness(&c, &g).unwrap().target, WitnessTarget::Pgl2);
        let cusp = ctx([0, 0, 0, 0, 0]);
        assert!(matches!(certificate_e(cusp.curve()), Err(Error::SingularPoint(_))));
    }

    #[test]
    fn every_line_is_certified() {
        for a in [[0, 0, 0, -1, 0], [0, 0, 0, 1, 1]] {
            let c = ctx(a);
            for line in c.curve().lines() {
                let g = stab(&c, DomainTag::V(line));
                let cert = certificate_for_line(&c, line, &g).unwrap();
                assert!(cert.is_verified());
                assert_eq!(cert.image.len(), g.order());
                iso_witness(&c, &g).unwrap();
            }
        }
    }

    #[test]
    fn cusp_witnesses_and_torus() {
        let c = ctx([0, 0, 0, -1, 0]);
        let k = c.ring().field().clone();
        for p in [CurvePoint::Infinity, CurvePoint::Affine { l: k.from_int(2), m: k.one() }] {
            for n in 1..=2 {
                let g = stab(&c, DomainTag::C(p, n));
                assert_eq!(iso_witness(&c, &g).unwrap().target, WitnessTarget::Borel);
                let t = torus_certificate(&c, &g).unwrap();
                assert_eq!(t.image.len(), 4);
            }
        }
    }
}
