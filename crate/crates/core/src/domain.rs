//! Takahashi's fundamental domain for `GL2(A)` acting on the tree,
//! truncated at a finite cusp depth.
//!
//! The domain is a subtree with center `o`, one branch vertex `v(l)` per
//! line `x = l` (including `l = inf`), a cusp ray `c(p,1), c(p,2), ...` per
//! rational point `p`, and a terminal vertex `e(p)` for each `p` with
//! `F_y(p) = 0`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::coordring::{AFrac, CoordRing, FunctionField, RingOps};
use crate::curve::{CaseKind, CurvePoint, FiberCase, LineLabel, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::laurent::{Embedding, LaurentSeries, DEFAULT_PRECISION};
use crate::tree::{distance, phi, TreeVertex};

pub const DEFAULT_DEPTH: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainTag {
    O,
    V(LineLabel),
    C(CurvePoint, u32),
    E(CurvePoint),
}

impl DomainTag {
    pub fn label(&self, curve: &WeierstrassCurve) -> String {
        match *self {
            DomainTag::O => "o".into(),
            DomainTag::V(l) => format!("v({})", curve.format_line(l)),
            DomainTag::C(p, n) => format!("c({},{n})", curve.format_point(p)),
            DomainTag::E(p) => format!("e({})", curve.format_point(p)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainVertex {
    pub tag: DomainTag,
    pub vertex: TreeVertex,
    /// The `phi(f1, f2)` expression the vertex was built from.
    pub provenance: String,
}

/// Curve data plus a Laurent embedding, enough to place domain vertices.
#[derive(Clone, Debug)]
pub struct DomainContext {
    ring: CoordRing,
    field: FunctionField,
    emb: Embedding,
}

impl DomainContext {
    pub fn new(curve: &WeierstrassCurve, precision: usize) -> Result<Self> {
        let ring = CoordRing::new(curve);
        let field = FunctionField::new(&ring);
        let emb = Embedding::new(&ring, precision)?;
        Ok(DomainContext { ring, field, emb })
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        self.ring.curve()
    }

    pub fn ring(&self) -> &CoordRing {
        &self.ring
    }

    pub fn function_field(&self) -> &FunctionField {
        &self.field
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    fn t_pow(&self, e: i64) -> LaurentSeries {
        let k = self.ring.field();
        LaurentSeries::monomial(k, k.one(), e)
    }

    /// `(y - m) / (x - l)`.
    pub fn cusp_function(&self, l: FieldElem, m: FieldElem) -> AFrac {
        let r = &self.ring;
        let num = r.sub(&r.y(), &r.constant(m));
        let den = r.sub(&r.x(), &r.constant(l));
        AFrac { num, den }
    }

    fn affine_e1(&self, p: CurvePoint) -> Result<(FieldElem, FieldElem)> {
        let c = self.curve();
        match p {
            CurvePoint::Affine { l, m } if c.in_e1(p) => Ok((l, m)),
            _ => Err(Error::NotInE1(c.format_point(p))),
        }
    }

    pub fn vertex(&self, tag: DomainTag) -> Result<DomainVertex> {
        let k = self.ring.field();
        let c = self.curve();
        let lr = self.emb.laurent();
        let t_inv = self.t_pow(-1);
        let (vertex, provenance) = match tag {
            DomainTag::O => (phi(k, &self.t_pow(1), &t_inv)?, "phi(t, t^-1)".to_string()),
            DomainTag::V(LineLabel::Infinity) => (phi(k, &self.t_pow(0), &t_inv)?, "phi(1, t^-1)".to_string()),
            DomainTag::V(LineLabel::Finite(l)) => {
                let f2 = lr.add(&t_inv, &LaurentSeries::monomial(k, l, 1));
                (phi(k, &self.t_pow(2), &f2)?, format!("phi(t^2, t^-1 + {}*t)", k.format(l)))
            }
            DomainTag::C(p, n) => {
                if n == 0 {
                    return Err(Error::InvalidInput("cusp index starts at 1".into()));
                }
                match p {
                    CurvePoint::Infinity => (phi(k, &self.t_pow(-(n as i64)), &LaurentSeries::zero())?, format!("phi(t^-{n}, 0)")),
                    CurvePoint::Affine { l, m } => {
                        if !c.contains(p) {
                            return Err(Error::PointNotOnCurve { l: k.format(l), m: k.format(m) });
                        }
                        let s = self.emb.embed_frac(&self.cusp_function(l, m))?;
                        let prov = format!("phi(t^{}, (y-{})/(x-{}))", n + 2, k.format(m), k.format(l));
                        (phi(k, &self.t_pow(n as i64 + 2), &s)?, prov)
                    }
                }
            }
            DomainTag::E(CurvePoint::Infinity) => (phi(k, &self.t_pow(0), &LaurentSeries::zero())?, "phi(1, 0)".to_string()),
            DomainTag::E(p) => {
                let (l, m) = self.affine_e1(p)?;
                let (fx, _) = c.partials(l, m);
                let s = self.emb.embed_frac(&self.cusp_function(l, m))?;
                let y_m = self.ring.sub(&self.ring.y(), &self.ring.constant(m));
                let corr = self.emb.embed_frac(&AFrac { num: self.ring.constant(fx), den: y_m })?;
                let prov = format!("phi(t^4, (y-{m})/(x-{l}) + {fx}/(y-{m}))", m = k.format(m), l = k.format(l), fx = k.format(fx));
                (phi(k, &self.t_pow(4), &lr.add(&s, &corr))?, prov)
            }
        };
        Ok(DomainVertex { tag, vertex, provenance })
    }
}

#[derive(Clone, Debug)]
pub struct Component {
    pub line: LineLabel,
    pub case: FiberCase,
    pub tags: Vec<DomainTag>,
}

#[derive(Clone, Debug)]
pub struct DomainGraph {
    pub curve: WeierstrassCurve,
    pub depth: u32,
    pub vertices: Vec<DomainVertex>,
    pub edges: Vec<(DomainTag, DomainTag)>,
    pub components: Vec<Component>,
    /// For a singular curve, `e(p) = c(p,2)` at the singular point.
    pub aliases: Vec<(DomainTag, DomainTag)>,
    index: HashMap<TreeVertex, usize>,
}

pub fn build_domain(curve: &WeierstrassCurve, depth: u32) -> Result<DomainGraph> {
    let ctx = DomainContext::new(curve, DEFAULT_PRECISION.max(depth as usize + 16))?;
    build_domain_with(&ctx, depth)
}

pub fn build_domain_with(ctx: &DomainContext, depth: u32) -> Result<DomainGraph> {
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()));
    }
    let curve = ctx.curve().clone();
    let singular = curve.singular_point();
    let mut vertices: Vec<DomainVertex> = vec![ctx.vertex(DomainTag::O)?];
    let mut edges = Vec::new();
    let mut components = Vec::new();
    let mut aliases = Vec::new();

    for line in curve.lines() {
        let case = curve.classify_fiber(line);
        let v = ctx.vertex(DomainTag::V(line))?;
        let mut tags = vec![v.tag];
        edges.push((DomainTag::O, v.tag));
        vertices.push(v);
        for p in case.points() {
            let mut prev = DomainTag::V(line);
            let mut ray = Vec::new();
            for n in 1..=depth {
                let cv = ctx.vertex(DomainTag::C(p, n))?;
                edges.push((prev, cv.tag));
                prev = cv.tag;
                tags.push(cv.tag);
                ray.push(cv.clone());
                vertices.push(cv);
            }
            if case.kind() != CaseKind::Unique {
                continue;
            }
            let ev = ctx.vertex(DomainTag::E(p))?;
            if singular == Some(p) {
                let alias = ray.get(1).filter(|c| c.vertex == ev.vertex).ok_or_else(|| {
                    Error::Domain(format!("e{} differs from c({},2) at the singular point", curve.format_point(p), curve.format_point(p)))
                })?;
                aliases.push((ev.tag, alias.tag));
                continue;
            }
            let k = curve.field();
            let anchor = ray.iter().find(|c| distance(k, &c.vertex, &ev.vertex) == 1).ok_or_else(|| {
                Error::Domain(format!("{} is not adjacent to its cusp", ev.tag.label(&curve)))
            })?;
            edges.push((anchor.tag, ev.tag));
            tags.push(ev.tag);
            vertices.push(ev);
        }
        components.push(Component { line, case, tags });
    }

    let mut index = HashMap::new();
    for (i, v) in vertices.iter().enumerate() {
        if let Some(j) = index.insert(v.vertex.clone(), i) {
            return Err(Error::Domain(format!(
                "{} and {} have the same tree vertex",
                vertices[j].tag.label(&curve),
                v.tag.label(&curve)
            )));
        }
    }
    let g = DomainGraph { curve, depth, vertices, edges, components, aliases, index };
    for &(a, b) in &g.edges {
        let (va, vb) = (g.vertex(a).unwrap(), g.vertex(b).unwrap());
        if distance(g.curve.field(), &va.vertex, &vb.vertex) != 1 {
            return Err(Error::Domain(format!("{} and {} are not adjacent", a.label(&g.curve), b.label(&g.curve))));
        }
    }
    Ok(g)
}

impl DomainGraph {
    pub fn vertex(&self, tag: DomainTag) -> Option<&DomainVertex> {
        self.vertices.iter().find(|v| v.tag == tag)
    }

    /// The domain vertex sitting at a tree vertex, if any.
    pub fn locate(&self, v: &TreeVertex) -> Option<&DomainVertex> {
        self.index.get(v).map(|&i| &self.vertices[i])
    }

    pub fn component(&self, line: LineLabel) -> Option<&Component> {
        self.components.iter().find(|c| c.line == line)
    }

    pub fn neighbors_in_domain(&self, tag: DomainTag) -> Vec<DomainTag> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == tag {
                    Some(b)
                } else if b == tag {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let c = &self.curve;
        let color = |tag: DomainTag| -> &'static str {
            let line = match tag {
                DomainTag::O => return "black",
                DomainTag::V(l) => l,
                DomainTag::C(CurvePoint::Affine { l, .. }, _) | DomainTag::E(CurvePoint::Affine { l, .. }) => LineLabel::Finite(l),
                DomainTag::C(CurvePoint::Infinity, _) | DomainTag::E(CurvePoint::Infinity) => LineLabel::Infinity,
            };
            match c.classify_fiber(line).kind() {
                CaseKind::NoSolution => "red",
                CaseKind::Unique => "blue",
                CaseKind::Two => "darkgreen",
            }
        };
        let mut s = String::new();
        let _ = writeln!(s, "graph domain {{");
        let _ = writeln!(s, "  label=\"{} depth {}\";", c.describe(), self.depth);
        for v in &self.vertices {
            let id = v.tag.label(c);
            let _ = writeln!(s, "  \"{id}\" [label=\"{id}\", color={}];", color(v.tag));
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  \"{}\" -- \"{}\";", a.label(c), b.label(c));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Value {
        let c = &self.curve;
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|v| json!({ "id": v.tag.label(c), "tree": v.vertex, "phi": v.provenance }))
            .collect();
        let edges: Vec<Value> = self.edges.iter().map(|(a, b)| json!([a.label(c), b.label(c)])).collect();
        let components: Vec<Value> = self
            .components
            .iter()
            .map(|comp| json!({ "line": c.format_line(comp.line), "case": comp.case.number(), "vertices": comp.tags.iter().map(|t| t.label(c)).collect::<Vec<_>>() }))
            .collect();
        let aliases: Vec<Value> = self.aliases.iter().map(|(a, b)| json!([a.label(c), b.label(c)])).collect();
        json!({
            "curve": c.describe(),
            "depth": self.depth,
            "vertices": vertices,
            "edges": edges,
            "components": components,
            "aliases": aliases,
        })
    }
}

/// One cusp per rational point of the projective curve.
pub fn cusps(domain: &DomainGraph) -> Vec<(String, CurvePoint)> {
    let mut out: BTreeMap<CurvePoint, String> = BTreeMap::new();
    for v in &domain.vertices {
        if let DomainTag::C(p, 1) = v.tag {
            out.insert(p, format!("cusp{}", domain.curve.format_point(p)));
        }
    }
    out.into_iter().map(|(p, id)| (id, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    fn curve5(a: [i64; 5]) -> WeierstrassCurve {
        WeierstrassCurve::from_ints(&FiniteField::new(5, 1).unwrap(), a)
    }

    #[test]
    fn special_vertices() {
        let e = curve5([0, 0, 0, -1, 0]);
        let k = e.field().clone();
        let ctx = DomainContext::new(&e, 40).unwrap();
        for n in 1..5u32 {
            let v = ctx.vertex(DomainTag::C(CurvePoint::Infinity, n)).unwrap();
            assert_eq!(v.vertex, TreeVertex::new(-(n as i64), BTreeMap::new()));
        }
        assert_eq!(ctx.vertex(DomainTag::E(CurvePoint::Infinity)).unwrap().vertex, TreeVertex::base());
        let o = ctx.vertex(DomainTag::O).unwrap().vertex;
        for l in e.lines() {
            assert_eq!(distance(&k, &o, &ctx.vertex(DomainTag::V(l)).unwrap().vertex), 1);
        }
        let bad = CurvePoint::Affine { l: k.from_int(2), m: k.from_int(1) };
        assert!(matches!(ctx.vertex(DomainTag::E(bad)), Err(Error::NotInE1(_))));
    }

    #[test]
    fn component_shapes() {
        let e = curve5([0, 0, 0, 1, 1]);
        let d = build_domain(&e, 2).unwrap();
        let k = e.field();
        let c1 = d.component(LineLabel::Finite(k.one())).unwrap();
        assert_eq!(c1.case.kind(), CaseKind::NoSolution);
        assert_eq!(c1.tags, vec![DomainTag::V(LineLabel::Finite(k.one()))]);
        assert_eq!(d.component(LineLabel::Infinity).unwrap().case.kind(), CaseKind::Unique);

        let e = curve5([0, 0, 0, -1, 0]);
        let d = build_domain(&e, 2).unwrap();
        let c2 = d.component(LineLabel::Finite(e.field().from_int(2))).unwrap();
        assert_eq!(c2.case.kind(), CaseKind::Two);
        assert_eq!(c2.tags.iter().filter(|t| matches!(t, DomainTag::C(_, 1))).count(), 2);
    }

    #[test]
    fn cusp_bijection_and_paths() {
        for (a, expect) in [([0, 0, 0, -1, 0], 8), ([0, 0, 0, 1, 1], 9)] {
            let e = curve5(a);
            let d = build_domain(&e, 4).unwrap();
            assert_eq!(cusps(&d).len(), e.points().len());
            assert_eq!(cusps(&d).len(), expect);
            let k = e.field();
            for (_, p) in cusps(&d) {
                for n in 1..4 {
                    let a = &d.vertex(DomainTag::C(p, n)).unwrap().vertex;
                    let b = &d.vertex(DomainTag::C(p, n + 1)).unwrap().vertex;
                    assert_eq!(distance(k, a, b), 1);
                }
            }
        }
    }

    #[test]
    fn terminal_vertex_hangs_off_first_cusp_vertex() {
        let e = curve5([0, 0, 0, -1, 0]);
        let d = build_domain(&e, 3).unwrap();
        for p in e.points().into_iter().filter(|&p| e.in_e1(p)) {
            assert!(d.edges.contains(&(DomainTag::C(p, 1), DomainTag::E(p))));
        }
    }

    #[test]
    fn singular_curve_identifies_terminal_vertex() {
        let e = curve5([0, 0, 0, 0, 0]);
        let d = build_domain(&e, 3).unwrap();
        let k = e.field();
        let s = CurvePoint::Affine { l: k.zero(), m: k.zero() };
        assert_eq!(d.aliases, vec![(DomainTag::E(s), DomainTag::C(s, 2))]);
        assert!(d.vertex(DomainTag::E(s)).is_none());
    }

    #[test]
    fn dot_export_is_stable() {
        let e = curve5([0, 0, 0, -1, 0]);
        let a = build_domain(&e, 3).unwrap().to_dot();
        let b = build_domain(&e, 3).unwrap().to_dot();
        assert_eq!(a, b);
        assert!(a.contains("\"o\" -- \"v(0)\""));
    }
}
