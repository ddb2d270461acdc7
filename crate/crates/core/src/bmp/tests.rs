use super::localize::{det, is_vertexwise_iso, mult, unit};
use super::*;
use crate::polyalg::PolyMatrix;
use crate::sheaf::ops::{mask, sections_in_degree};
use crate::sheaf::{hom_dim, verify_bmp, Sheaf, SheafMorphism};

fn cat(t: &str) -> BmpCategory {
    BmpCategory::parse_type(t).unwrap()
}

#[test]
fn sections_of_e_s_on_a2() {
    let c = cat("A2");
    let g = c.graph().clone();
    let s = g.vertex("s").unwrap();
    let es = c.object(s).unwrap();
    let set = mask(g.len(), &[g.vertex("1").unwrap(), s]);
    assert_eq!(sections_in_degree(&es, &set, 1).len(), 3);
}

#[test]
fn translating_e_1() {
    let c = cat("A1");
    let s = c.graph().vertex("s").unwrap();
    let t = c.translation(0, 0).unwrap();
    assert_eq!(t.dec.summands, vec![(s, -1)]);
    assert!(verify_bmp(t.translated.sheaf(), -2, 6).unwrap().passed());
    // relative to T̂E_1 = E_s{−1}: T̂T̂E_1 = E_s{0} ⊕ E_s{−2}
    let tt = translate(t.translated.sheaf(), c.group(), 0).unwrap();
    let mut d: Vec<(usize, i32)> = decompose(tt.sheaf(), &c)
        .unwrap()
        .summands
        .iter()
        .map(|&(y, n)| (y, n + 1))
        .collect();
    d.sort();
    assert_eq!(d, vec![(s, -2), (s, 0)]);
}

#[test]
fn translation_of_e_t_is_e_ts() {
    let c = cat("A2");
    let g = c.graph();
    let (t, ts) = (g.vertex("t").unwrap(), g.vertex("ts").unwrap());
    let data = c.translation(t, 0).unwrap();
    assert_eq!(data.dec.summands, vec![(ts, -1)]);
}

#[test]
fn decompose_direct_sum() {
    let c = cat("A1");
    let s = c.graph().vertex("s").unwrap();
    let es = c.object(s).unwrap();
    assert_eq!(decompose(&es, &c).unwrap().summands, vec![(s, 0)]);
    let sum = Sheaf::direct_sum(c.graph(), &[(*es).clone(), c.object(0).unwrap().shift(2)]);
    let mut d = decompose(&sum, &c).unwrap().summands;
    d.sort();
    assert_eq!(d, vec![(0, 2), (s, 0)]);
}

#[test]
fn round_trip_through_sections() {
    let c = cat("A2");
    for w in 0..c.len() {
        let f = c.object(w).unwrap();
        let m = SectionsBimodule::new(&f, c.group()).unwrap();
        let r = crate::polyalg::Poly::var(2, 1);
        for (d, gen) in &m.gens {
            assert!(m.contains(&m.right(gen, &r), d + 2));
        }
        let loc = localize(&m.presented()).unwrap();
        let l = &loc.sheaf;
        let mats: Vec<PolyMatrix> = (0..c.len())
            .map(|z| {
                PolyMatrix::from_columns(
                    f.rank(z),
                    2,
                    &loc.stalk_gens[z]
                        .iter()
                        .map(|g| g.1.clone())
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let phi = SheafMorphism::from_vertices(l, &f, 0, mats);
        phi.check(l, &f).unwrap();
        assert!(is_vertexwise_iso(&phi), "{w}");
    }
}

#[test]
fn natural_maps() {
    let c = cat("A2");
    let g = c.graph().clone();
    let (s, st) = (g.vertex("s").unwrap(), g.vertex("st").unwrap());
    for (x, y) in [(0, s), (s, st), (s, 0)] {
        for phi in c.hom_basis(x, y, 1).unwrap().iter() {
            for t in 0..2 {
                let (tx, ty) = (c.translation(x, t).unwrap(), c.translation(y, t).unwrap());
                let tphi =
                    translate_morphism(phi, &tx.translated, &ty.translated, c.group()).unwrap();
                tphi.check(tx.translated.sheaf(), ty.translated.sheaf())
                    .unwrap();
                let lhs = mult(&ty.translated).compose_in(&tphi, &g);
                let rhs = phi.compose_in(&mult(&tx.translated), &g);
                assert_eq!(lhs, rhs);
                let lhs = unit(&ty.translated, c.group()).unwrap().compose_in(phi, &g);
                let rhs = tphi.compose_in(&unit(&tx.translated, c.group()).unwrap(), &g);
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn translation_is_self_adjoint_on_homs() {
    let c = cat("A2");
    for (x, y) in [(0, 0), (1, 0), (0, 2), (1, 3)] {
        let (f, g) = (c.object(x).unwrap(), c.object(y).unwrap());
        let tf = translate(&f, c.group(), 0).unwrap();
        let tg = translate(&g, c.group(), 0).unwrap();
        assert_eq!(
            hom_dim(tf.sheaf(), &g, 0, None),
            hom_dim(&f, tg.sheaf(), 2, None),
            "{x} {y}"
        );
    }
}

#[test]
fn determinant() {
    let m = PolyMatrix::identity(3, 2);
    assert!(det(&m).constant_term().is_one());
}
