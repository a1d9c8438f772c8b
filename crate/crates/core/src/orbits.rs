//! Empirical checks that the domain meets every orbit exactly once.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coordring::{enumerate_bounded_gl2a, AElem, Mat2};
use crate::domain::{DomainContext, DomainGraph, DomainTag};
use crate::error::{Error, Result};
use crate::laurent::LaurentSeries;
use crate::stabilizers::stabilizer;
use crate::tree::{act, ball, distance, neighbors, TreeVertex};

#[derive(Clone, Debug, Serialize)]
pub struct SpotcheckReport {
    pub method: &'static str,
    pub radius: u32,
    pub pole_bound: u32,
    pub samples: usize,
    pub reached: usize,
    /// Sampled vertices that could not be moved into the domain.
    pub unreached: Vec<String>,
    pub budget_failures: usize,
    /// Pairs of distinct domain vertices related by an enumerated element.
    pub identified: Vec<(String, String)>,
    pub group_elements: usize,
}

impl SpotcheckReport {
    pub fn pass(&self) -> bool {
        self.reached == self.samples && self.budget_failures == 0 && self.identified.is_empty()
    }
}

/// Projective classes of `GL2(A)` with entries in `L(p inf)`.
pub fn bounded_units(ctx: &DomainContext, p: u32, budget: u128) -> Result<Vec<Mat2<AElem>>> {
    let ring = ctx.ring();
    let search = enumerate_bounded_gl2a(ring, p, budget)?;
    let mut out: Vec<Mat2<AElem>> = (0..search.raw_count())
        .into_par_iter()
        .filter_map(|i| {
            let m = search.candidate(i);
            m.unit_det(ring)?;
            (m.projective(ring) == m).then_some(m)
        })
        .collect();
    out.sort();
    Ok(out)
}

fn embed(ctx: &DomainContext, m: &Mat2<AElem>) -> Mat2<LaurentSeries> {
    m.map(|e| ctx.embedding().embed(e))
}

/// Pairs of distinct vertices among `within` that some element of `gammas`
/// relates.
pub fn identified_pairs(ctx: &DomainContext, domain: &DomainGraph, gammas: &[Mat2<AElem>], within: &[DomainTag]) -> Result<Vec<(String, String)>> {
    let lr = ctx.embedding().laurent();
    let curve = ctx.curve();
    let verts: Vec<&TreeVertex> = within.iter().filter_map(|t| domain.vertex(*t)).map(|d| &d.vertex).collect();
    let found: Result<Vec<Vec<(String, String)>>> = gammas
        .par_iter()
        .map(|g| {
            let gl = embed(ctx, g);
            let mut out = Vec::new();
            for (tag, v) in within.iter().zip(&verts) {
                let w = act(lr, &gl, v)?;
                if let Some(d) = domain.locate(&w) {
                    if d.tag != *tag {
                        out.push((tag.label(curve), d.tag.label(curve)));
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut pairs: Vec<_> = found?.into_iter().flatten().collect();
    pairs.sort();
    pairs.dedup();
    Ok(pairs)
}

/// Exhaustive check over a small field: every vertex of the radius ball
/// around `o` is `g d` for some enumerated `g` and domain vertex `d`, and
/// no enumerated element relates two distinct domain vertices.
pub fn orbit_spotcheck_exhaustive(ctx: &DomainContext, domain: &DomainGraph, radius: u32, pole_bound: u32, budget: u128) -> Result<SpotcheckReport> {
    if domain.depth <= radius + pole_bound {
        return Err(Error::InvalidInput(format!("domain depth {} must exceed radius + pole bound", domain.depth)));
    }
    let k = ctx.ring().field();
    let lr = ctx.embedding().laurent();
    let gammas = bounded_units(ctx, pole_bound, budget)?;
    let o = origin(domain)?;
    let target: HashSet<TreeVertex> = ball(k, o, radius, budget)?.into_iter().collect();
    let images: Result<Vec<Vec<TreeVertex>>> = gammas
        .par_iter()
        .map(|g| {
            let gl = embed(ctx, g);
            domain
                .vertices
                .iter()
                .map(|d| act(lr, &gl, &d.vertex))
                .filter(|w| w.as_ref().map_or(true, |w| target.contains(w)))
                .collect()
        })
        .collect();
    let reached: HashSet<TreeVertex> = images?.into_iter().flatten().collect();
    let mut unreached: Vec<String> = target.iter().filter(|v| !reached.contains(*v)).map(|v| v.format(k)).collect();
    unreached.sort();
    let tags: Vec<DomainTag> = domain.vertices.iter().map(|d| d.tag).collect();
    let identified = identified_pairs(ctx, domain, &gammas, &tags)?;
    Ok(SpotcheckReport {
        method: "exhaustive",
        radius,
        pole_bound,
        samples: target.len(),
        reached: target.len() - unreached.len(),
        unreached,
        budget_failures: 0,
        identified,
        group_elements: gammas.len(),
    })
}

/// A uniformly random non-backtracking path from `start` of length at most
/// `radius`.
pub fn random_path(k: &crate::field::FiniteField, start: &TreeVertex, radius: u32, rng: &mut impl Rng) -> Vec<TreeVertex> {
    let len = rng.gen_range(0..=radius);
    let mut path = vec![start.clone()];
    for i in 0..len as usize {
        let prev = if i == 0 { None } else { Some(path[i - 1].clone()) };
        let options: Vec<TreeVertex> = neighbors(k, &path[i]).into_iter().filter(|w| Some(w) != prev.as_ref()).collect();
        path.push(options.choose(rng).expect("q + 1 > 1").clone());
    }
    path
}

fn origin(domain: &DomainGraph) -> Result<&TreeVertex> {
    domain.vertex(DomainTag::O).map(|d| &d.vertex).ok_or_else(|| Error::Domain("domain has no o".into()))
}

struct Folder<'a> {
    ctx: &'a DomainContext,
    domain: &'a DomainGraph,
    budget: u128,
    stabs: HashMap<DomainTag, Vec<Mat2<LaurentSeries>>>,
}

impl Folder<'_> {
    fn stab(&mut self, tag: DomainTag) -> Result<&[Mat2<LaurentSeries>]> {
        if !self.stabs.contains_key(&tag) {
            let dv = self.domain.vertex(tag).ok_or_else(|| Error::Domain(format!("{tag:?} not in domain")))?;
            let g = stabilizer(self.ctx, dv, None, self.budget)?;
            let reps = g.reps.iter().map(|m| embed(self.ctx, m)).collect();
            self.stabs.insert(tag, reps);
        }
        Ok(&self.stabs[&tag])
    }

    /// Moves the endpoint of `path` into the domain, one step at a time.
    fn fold(&mut self, path: &[TreeVertex]) -> Result<Option<DomainTag>> {
        let lr = self.ctx.embedding().laurent();
        let mut g = Mat2::identity(lr);
        let mut cur = DomainTag::O;
        for x in &path[1..] {
            let w = act(lr, &g, x)?;
            if let Some(d) = self.domain.locate(&w) {
                cur = d.tag;
                continue;
            }
            let domain = self.domain;
            let mut next = None;
            for delta in self.stab(cur)? {
                let u = act(lr, delta, &w)?;
                if let Some(d) = domain.locate(&u) {
                    next = Some((delta.clone(), d.tag));
                    break;
                }
            }
            let Some((delta, tag)) = next else { return Ok(None) };
            g = delta.mul(&g, lr);
            cur = tag;
        }
        Ok(Some(cur))
    }
}

/// Samples vertices within `radius` of `o` and folds each into the domain
/// using stabilizers of domain vertices along its geodesic. Also checks
/// that no element with entries in `L(pole_bound inf)` relates two domain
/// vertices within distance 2 of `o`.
pub fn orbit_spotcheck_sampled(
    ctx: &DomainContext,
    domain: &DomainGraph,
    samples: usize,
    radius: u32,
    pole_bound: u32,
    seed: u64,
    budget: u128,
) -> Result<SpotcheckReport> {
    if domain.depth <= radius {
        return Err(Error::InvalidInput(format!("domain depth {} must exceed the radius", domain.depth)));
    }
    let k = ctx.ring().field();
    let o = origin(domain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folder = Folder { ctx, domain, budget, stabs: HashMap::new() };
    let mut reached = 0;
    let mut unreached = Vec::new();
    let mut budget_failures = 0;
    for _ in 0..samples {
        let path = random_path(k, o, radius, &mut rng);
        match folder.fold(&path) {
            Ok(Some(_)) => reached += 1,
            Ok(None) => unreached.push(path.last().unwrap().format(k)),
            Err(Error::BudgetExceeded { .. }) => budget_failures += 1,
            Err(e) => return Err(e),
        }
    }
    let gammas = bounded_units(ctx, pole_bound, budget)?;
    let near: Vec<DomainTag> = domain.vertices.iter().filter(|d| distance(k, o, &d.vertex) <= 2).map(|d| d.tag).collect();
    let identified = identified_pairs(ctx, domain, &gammas, &near)?;
    Ok(SpotcheckReport {
        method: "folding",
        radius,
        pole_bound,
        samples,
        reached,
        unreached,
        budget_failures,
        identified,
        group_elements: gammas.len(),
    })
}
