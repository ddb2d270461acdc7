use super::*;
use crate::bmp::BmpCategory;

fn names(ctx: &BmpCtx, c: &BmpComplex) -> Vec<(i32, String, i32)> {
    let g = ctx.cat.group();
    c.label_multiset()
        .into_iter()
        .map(|(i, (x, a))| (i, g.name(x), a))
        .collect()
}

#[test]
fn delta_and_nabla_on_a1() {
    let cat = BmpCategory::parse_type("A1").unwrap();
    let ctx = BmpCtx::new(&cat).unwrap();
    let d = delta(&ctx, 1).unwrap();
    assert_eq!(
        names(&ctx, &d),
        vec![(0, "s".into(), 0), (1, "1".into(), 1)]
    );
    let n = nabla(&ctx, 1).unwrap();
    assert_eq!(
        names(&ctx, &n),
        vec![(-1, "1".into(), -1), (0, "s".into(), 0)]
    );
    let js = standard(&ctx, 1).unwrap();
    assert_eq!(names(&ctx, &js), names(&ctx, &d));
    let jst = costandard(&ctx, 1).unwrap();
    assert_eq!(names(&ctx, &jst), names(&ctx, &n));
}

#[test]
fn letters_and_peeling_agree_on_terms_s3() {
    let cat = BmpCategory::parse_type("A2").unwrap();
    let ctx = BmpCtx::new(&cat).unwrap();
    for w in 0..cat.len() {
        let d = delta(&ctx, w).unwrap();
        let s = standard(&ctx, w).unwrap();
        assert_eq!(
            names(&ctx, &d),
            names(&ctx, &s),
            "Δ_{}",
            cat.group().name(w)
        );
        let n = nabla(&ctx, w).unwrap();
        let c = costandard(&ctx, w).unwrap();
        assert_eq!(
            names(&ctx, &n),
            names(&ctx, &c),
            "∇_{}",
            cat.group().name(w)
        );
    }
    let w0 = cat.group().longest();
    let d = delta(&ctx, w0).unwrap();
    assert_eq!(d.terms.len(), 4);
    assert_eq!(d.term(0), &[(w0, 0)]);
}

fn a1() -> BmpCategory {
    BmpCategory::parse_type("A1").unwrap()
}

#[test]
fn hom_delta_nabla_a1() {
    let cat = a1();
    let ctx = BmpCtx::new(&cat).unwrap();
    for x in 0..2 {
        for w in 0..2 {
            let (d, n) = (delta(&ctx, x).unwrap(), nabla(&ctx, w).unwrap());
            for j in -2..=2 {
                for dl in -4..=4 {
                    let expect = if x == w && j == 0 {
                        khom::r_dim(1, dl)
                    } else {
                        0
                    };
                    assert_eq!(
                        khom(&ctx, &d, &n, j, dl).unwrap(),
                        expect,
                        "x={x} w={w} j={j} δ={dl}"
                    );
                }
                let f = forget_hom(&ctx, &d, &n, j, -4, 4).unwrap();
                assert!(f.free);
                assert_eq!(f.total(), usize::from(x == w && j == 0));
            }
        }
    }
}

#[test]
fn perversity_on_a1() {
    let cat = a1();
    let ctx = BmpCtx::new(&cat).unwrap();
    for c in [
        delta(&ctx, 1).unwrap(),
        nabla(&ctx, 1).unwrap(),
        rouquier::unit_object(&ctx),
    ] {
        assert!(perversity_check(&ctx, &c, false).unwrap().heart);
    }
    let shifted = Ops(&ctx).shift(&rouquier::unit_object(&ctx), 1);
    let r = perversity_check(&ctx, &shifted, false).unwrap();
    assert!(r.le0 && !r.ge0);
    assert!(!r.strata[0].ge0);
    let t = tilting_s(&ctx, 0).unwrap();
    assert!(perversity_check(&ctx, &t, true).unwrap().heart);
}

#[test]
fn stalks_of_delta_s() {
    let cat = a1();
    let ctx = BmpCtx::new(&cat).unwrap();
    let d = delta(&ctx, 1).unwrap();
    assert_eq!(stalk_complex(&ctx, &d, 1).label_multiset(), vec![(0, 1)]);
    assert!(stalk_complex(&ctx, &d, 0).is_empty());
    assert_eq!(
        costalk_complex(&ctx, &d, 0).unwrap().label_multiset(),
        vec![(0, -1), (1, 1)]
    );
    let n = nabla(&ctx, 1).unwrap();
    assert!(costalk_complex(&ctx, &n, 0).unwrap().is_empty());
}

#[test]
fn braid_relation_a2() {
    let cat = BmpCategory::parse_type("A2").unwrap();
    let ctx = BmpCtx::new(&cat).unwrap();
    let a = rouquier(&ctx, &[0, 1, 0], LetterKind::F).unwrap();
    let b = rouquier(&ctx, &[1, 0, 1], LetterKind::F).unwrap();
    let v = is_homotopy_equiv(&ctx, &a, &b, 7).unwrap();
    assert!(v.is_equivalent());
    assert!(matches!(
        rouquier(&ctx, &[0, 0], LetterKind::F),
        Err(crate::Error::NotReduced(_))
    ));
}

#[test]
fn delta_and_nabla_are_not_equivalent() {
    let cat = a1();
    let ctx = BmpCtx::new(&cat).unwrap();
    let v = is_homotopy_equiv(&ctx, &delta(&ctx, 1).unwrap(), &nabla(&ctx, 1).unwrap(), 1).unwrap();
    assert!(!v.is_equivalent());
}

#[test]
fn cone_of_identity_is_contractible() {
    let cat = BmpCategory::parse_type("A2").unwrap();
    let ctx = BmpCtx::new(&cat).unwrap();
    let ops = Ops(&ctx);
    let c = delta(&ctx, 3).unwrap();
    let z = ops.cone(&c, &c, &ops.identity_map(&c));
    ops.check_d2(&z).unwrap();
    assert!(ops.minimize(&z).is_empty());
    let sum = ops.direct_sum(&c, &z);
    assert!(is_homotopy_equiv(&ctx, &sum, &c, 3)
        .unwrap()
        .is_equivalent());
}

#[test]
fn reduction_data_is_a_homotopy_equivalence() {
    let cat = BmpCategory::parse_type("A2").unwrap();
    let ctx = BmpCtx::new(&cat).unwrap();
    let ops = Ops(&ctx);
    let s = cat.group().word(1)[0];
    let c = f_letter(&ctx, &delta(&ctx, 1).unwrap(), s).unwrap();
    let r = ops.minimize_tracked(&c);
    assert!(r.complex.len() < c.len());
    assert!(ops.is_chain_map(&c, &r.complex, &r.f));
    assert!(ops.is_chain_map(&r.complex, &c, &r.g));
    let fg = ops.compose_maps(&r.f, &r.g, &r.complex, &c, &r.complex);
    assert!(ops.is_homotopy(
        &fg,
        &ops.identity_map(&r.complex),
        &ChainMap {
            degree: -1,
            blocks: Default::default()
        },
        &r.complex,
        &r.complex
    ));
    let gf = ops.compose_maps(&r.g, &r.f, &c, &r.complex, &c);
    assert!(ops.is_homotopy(&gf, &ops.identity_map(&c), &r.h, &c, &c));
    assert_eq!(ops.minimize(&r.complex), r.complex);
}

#[test]
fn tate_twice() {
    let cat = a1();
    let ctx = BmpCtx::new(&cat).unwrap();
    let ops = Ops(&ctx);
    let c = delta(&ctx, 1).unwrap();
    assert_eq!(ops.tate(&ops.tate(&c)), ops.shift(&ops.twist(&c, -2), 2));
}

mod props {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn cat() -> &'static BmpCategory {
        static CAT: OnceLock<BmpCategory> = OnceLock::new();
        CAT.get_or_init(|| BmpCategory::parse_type("A2").unwrap())
    }

    // direct sums of shifted and twisted standard, costandard and contractible pieces
    fn build(ctx: &BmpCtx, parts: &[(usize, u8, i32, i32)]) -> BmpComplex {
        let ops = Ops(ctx);
        let mut out = Complex::zero();
        for &(w, kind, m, n) in parts {
            let c = match kind % 3 {
                0 => delta(ctx, w).unwrap(),
                1 => nabla(ctx, w).unwrap(),
                _ => {
                    let d = delta(ctx, w).unwrap();
                    ops.cone(&d, &d, &ops.identity_map(&d))
                }
            };
            out = ops.direct_sum(&out, &ops.twist(&ops.shift(&c, m), n));
        }
        out
    }

    fn parts() -> impl Strategy<Value = Vec<(usize, u8, i32, i32)>> {
        prop::collection::vec((0usize..6, 0u8..3, -2i32..=2, -2i32..=2), 1..3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn minimize_is_idempotent_and_keeps_hom(p in parts(), j in -2i32..=2, dl in -3i32..=3) {
            let ctx = BmpCtx::new(cat()).unwrap();
            let ops = Ops(&ctx);
            let c = build(&ctx, &p);
            ops.check_d2(&c).unwrap();
            let m = ops.minimize(&c);
            prop_assert_eq!(ops.minimize(&m), m.clone());
            let probe = nabla(&ctx, p[0].0).unwrap();
            prop_assert_eq!(khom(&ctx, &c, &probe, j, dl).unwrap(), khom(&ctx, &m, &probe, j, dl).unwrap());
        }

        #[test]
        fn shift_and_twist_laws(p in parts(), a in -3i32..=3, b in -3i32..=3) {
            let ctx = BmpCtx::new(cat()).unwrap();
            let ops = Ops(&ctx);
            let c = build(&ctx, &p);
            prop_assert_eq!(ops.shift(&ops.shift(&c, a), b), ops.shift(&c, a + b));
            prop_assert_eq!(ops.twist(&ops.twist(&c, a), b), ops.twist(&c, a + b));
            prop_assert_eq!(ops.shift(&ops.twist(&c, a), b), ops.twist(&ops.shift(&c, b), a));
            ops.check_d2(&ops.shift(&c, a)).unwrap();
        }

        #[test]
        fn perversity_is_shift_sensitive(w in 0usize..6, m in -2i32..=2) {
            let ctx = BmpCtx::new(cat()).unwrap();
            let ops = Ops(&ctx);
            let r = perversity_check(&ctx, &ops.shift(&standard(&ctx, w).unwrap(), m), false).unwrap();
            prop_assert_eq!(r.heart, m == 0);
            prop_assert_eq!(r.le0, m >= 0);
            prop_assert_eq!(r.ge0, m <= 0);
        }
    }
}
