//! Oracle checks on random Weierstrass curves, including ones with
//! `a1, a3 != 0` that the fixed examples never exercise.

use btquot::conjugation::{certificate_for_line, certificate_for_point};
use btquot::coordring::DEFAULT_BUDGET;
use btquot::curve::{CaseKind, WeierstrassCurve};
use btquot::domain::{build_domain_with, cusps, DomainContext, DomainTag};
use btquot::field::FiniteField;
use btquot::stabilizers::{expected_order, stabilizer};
use proptest::prelude::*;

fn smooth_curve(p: u64, a: [i64; 5]) -> Option<WeierstrassCurve> {
    let c = WeierstrassCurve::from_ints(&FiniteField::new(p, 1).unwrap(), a);
    c.is_smooth().then_some(c)
}

fn brute_points(c: &WeierstrassCurve) -> usize {
    let k = c.field();
    1 + k.elements().flat_map(|x| k.elements().map(move |y| (x, y))).filter(|&(x, y)| k.is_zero(c.eval(x, y))).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cusps_match_points(p in prop::sample::select(vec![2u64, 3, 5, 7]), a in prop::array::uniform5(0i64..7)) {
        let Some(c) = smooth_curve(p, a) else { return Ok(()) };
        let ctx = DomainContext::new(&c, 48).unwrap();
        let d = build_domain_with(&ctx, 2).unwrap();
        prop_assert_eq!(cusps(&d).len(), brute_points(&c));
        prop_assert_eq!(d.components.len() as u64, c.field().order() + 1);
        for comp in &d.components {
            prop_assert_eq!(comp.case.clone(), c.classify_fiber(comp.line));
        }
    }

    #[test]
    fn branch_stabilizers_and_certificates(p in prop::sample::select(vec![2u64, 3, 5]), a in prop::array::uniform5(0i64..5)) {
        let Some(c) = smooth_curve(p, a) else { return Ok(()) };
        let ctx = DomainContext::new(&c, 48).unwrap();
        for line in c.lines() {
            let tag = DomainTag::V(line);
            let g = stabilizer(&ctx, &ctx.vertex(tag).unwrap(), None, DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(g.order() as u64, expected_order(&c, tag));
            let cert = certificate_for_line(&ctx, line, &g).unwrap();
            prop_assert!(cert.is_verified());
            prop_assert_eq!(cert.image.len(), g.order());
            let case = c.classify_fiber(line);
            if case.kind() == CaseKind::Unique {
                let pt = case.points()[0];
                let e = stabilizer(&ctx, &ctx.vertex(DomainTag::E(pt)).unwrap(), None, DEFAULT_BUDGET).unwrap();
                let q = c.field().order() as usize;
                prop_assert_eq!(e.order(), q * q * q - q);
                let cert = certificate_for_point(&ctx, pt, &e).unwrap();
                prop_assert_eq!(cert.image.len(), q * q * q - q);
            }
        }
    }
}
