use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::exactalg::{parse_poly, Field, Poly, Ring, Var};

fn ring(names: &[(&str, i32)]) -> Arc<Ring> {
    Ring::new(
        Field::Rational,
        names.iter().map(|(n, w)| Var::new(n, 0, *w)).collect(),
    )
    .unwrap()
}

fn p(r: &Arc<Ring>, s: &str) -> Poly {
    parse_poly(r, s).unwrap()
}

fn two_term(r: &Arc<Ring>, f: &str, shift: i64) -> FiniteComplex {
    let m = PolyMatrix::from_rows(r, vec![vec![p(r, f)]], 1);
    FiniteComplex::new(
        r,
        Grading::Z { lo: 0 },
        vec![FreeModule::new(vec![0]), FreeModule::new(vec![0])],
        vec![m],
        shift,
    )
    .unwrap()
}

#[test]
fn check_complex_reports_offending_entry() {
    let r = ring(&[("x", 1)]);
    let x = PolyMatrix::from_rows(&r, vec![vec![p(&r, "x")]], 1);
    let ms = vec![FreeModule::new(vec![0]); 3];
    let cx = FiniteComplex::assemble(
        &r,
        Grading::Z { lo: 0 },
        ms.clone(),
        vec![x.clone(), x.clone()],
        1,
        Poly::zero(&r),
    )
    .unwrap();
    let rep = check_complex(&cx);
    assert!(!rep.valid);
    assert_eq!(rep.offense.unwrap().value, "x^2");
    assert!(matches!(
        FiniteComplex::new(&r, Grading::Z { lo: 0 }, ms, vec![x.clone(), x], 1),
        Err(HomError::NotAComplex(_))
    ));
    assert!(check_complex(&koszul(&r, &[p(&r, "x")]).unwrap()).valid);
    let z = PolyMatrix::zero(&r, 1, 1);
    let zc = FiniteComplex::new(
        &r,
        Grading::Z { lo: 0 },
        vec![FreeModule::new(vec![0]); 3],
        vec![z.clone(), z],
        0,
    )
    .unwrap();
    assert!(check_complex(&zc).valid);
}

#[test]
fn inhomogeneous_entry_rejected() {
    let r = ring(&[("x", 1)]);
    let m = PolyMatrix::from_rows(&r, vec![vec![p(&r, "x+1")]], 1);
    let e = FiniteComplex::new(
        &r,
        Grading::Z { lo: 0 },
        vec![FreeModule::new(vec![0]); 2],
        vec![m],
        1,
    );
    assert!(matches!(e, Err(HomError::NotHomogeneous { .. })));
}

#[test]
fn tensor_of_koszul_complexes_is_koszul() {
    let r = ring(&[("x", 1), ("y", 2)]);
    let (x, y) = (p(&r, "x"), p(&r, "y"));
    let t = tensor(
        &koszul(&r, std::slice::from_ref(&x)).unwrap(),
        &koszul(&r, std::slice::from_ref(&y)).unwrap(),
    )
    .unwrap();
    let k = koszul(&r, &[x, y]).unwrap();
    assert_eq!(t.positions(), k.positions());
    assert_eq!(t.modules(), k.modules());
    assert_eq!(t.diffs(), k.diffs());
}

#[test]
fn tensor_with_unit_complex_is_identity() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let k = koszul(&r, &[p(&r, "x"), p(&r, "y^2")]).unwrap();
    let unit = FiniteComplex::new(
        &r,
        Grading::Z { lo: 0 },
        vec![FreeModule::new(vec![0])],
        vec![],
        0,
    )
    .unwrap();
    assert_eq!(tensor(&k, &unit).unwrap(), k);
    assert_eq!(tensor(&unit, &k).unwrap(), k);
}

#[test]
fn identity_is_a_cycle_in_end() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let k = koszul(&r, &[p(&r, "x"), p(&r, "x*y")]).unwrap();
    let hom = hom_complex(&k, &k).unwrap();
    assert!(check_complex(&hom.complex).valid);
    let id = ChainMap::identity(&k);
    let v = hom.pack(&id);
    let d = hom.complex.diff_from(0);
    for i in 0..d.rows() {
        let mut acc = Poly::zero(&r);
        for (j, vj) in v.iter().enumerate() {
            acc = acc.add(&d.get(i, j).mul(vj));
        }
        assert!(acc.is_zero());
    }
    assert_eq!(hom.unpack(0, 0, &v), id);
}

#[test]
fn hom_matrix_agrees_with_direct_formula() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let m = koszul(&r, &[p(&r, "x"), p(&r, "y")]).unwrap();
    let n = koszul(&r, &[p(&r, "x^2")]).unwrap();
    let hom = hom_complex(&m, &n).unwrap();
    for deg in hom.complex.positions() {
        let rank = hom.complex.module(deg).rank();
        let v: Vec<Poly> = (0..rank)
            .map(|k| Poly::from_i64(&r, k as i64 + 1))
            .collect();
        // weights are inhomogeneous here; only the linear algebra is under test
        let g = hom.unpack(deg, 0, &v);
        let direct = hom_differential(&m, &n, &g);
        let d = hom.complex.diff_from(deg);
        let mut via_matrix = vec![Poly::zero(&r); d.rows()];
        for (i, out) in via_matrix.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                *out = out.add(&d.get(i, j).mul(vj));
            }
        }
        if hom.complex.index_of(deg + 1).is_some() {
            assert_eq!(hom.pack(&direct), via_matrix, "degree {deg}");
        }
    }
}

#[test]
fn cone_of_identity_is_acyclic() {
    let r = ring(&[("x", 2)]);
    let cx = two_term(&r, "x", 2);
    let c = cone(&ChainMap::identity(&cx), &cx, &cx).unwrap();
    assert!(check_complex(&c).valid);
    assert!(cohomology_window(&c, (-4, 10)).unwrap().is_zero());
    let h = find_null_homotopy(&c, &ChainMap::identity(&c), 0).unwrap();
    assert!(h.is_some());
}

#[test]
fn cone_rejects_non_chain_maps() {
    let r = ring(&[("x", 1)]);
    let cx = two_term(&r, "x", 1);
    let mut f = ChainMap::identity(&cx);
    f.components[1] = PolyMatrix::zero(&r, 1, 1);
    assert!(matches!(cone(&f, &cx, &cx), Err(HomError::NotChainMap(_))));
}

#[test]
fn shift_by_two_is_periodic_in_z2() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let d0 = PolyMatrix::from_rows(
        &r,
        vec![vec![p(&r, "x"), p(&r, "y")], vec![p(&r, "-y"), p(&r, "x")]],
        2,
    );
    let d1 = PolyMatrix::from_rows(
        &r,
        vec![vec![p(&r, "x"), p(&r, "-y")], vec![p(&r, "y"), p(&r, "x")]],
        2,
    );
    let mf = FiniteComplex::new_curved(
        &r,
        [FreeModule::new(vec![0, 0]), FreeModule::new(vec![0, 0])],
        [d0, d1],
        1,
        p(&r, "x^2+y^2"),
    )
    .unwrap();
    assert_eq!(shift(&mf, 2), mf);
    let s1 = shift(&mf, 1);
    assert!(check_complex(&s1).valid);
    assert_eq!(shift(&s1, 1), mf);
}

#[test]
fn fold_keeps_slices() {
    let r = ring(&[("x", 2)]);
    // Q[x] -> Q[x]·dx by x^3, dx of weight 2
    let m = PolyMatrix::from_rows(&r, vec![vec![p(&r, "x^3")]], 1);
    let cx = FiniteComplex::new(
        &r,
        Grading::Z { lo: 0 },
        vec![FreeModule::new(vec![0]), FreeModule::new(vec![2])],
        vec![m],
        8,
    )
    .unwrap();
    let f = fold_z2(&cx).unwrap();
    assert_eq!(f.grading(), Grading::Z2);
    assert_eq!(f.modules(), cx.modules());
    let a = cohomology_window(&cx, (0, 12)).unwrap();
    let b = cohomology_window(&f, (0, 12)).unwrap();
    assert_eq!(a.parity_totals(), b.entries);
    assert_eq!(b.support(), vec![((1, 2), 1), ((1, 4), 1), ((1, 6), 1)]);
}

#[test]
fn null_homotopy_examples() {
    let r = ring(&[("x", 2)]);
    let cx = two_term(&r, "x", 2);
    for bound in 0..4 {
        assert!(find_null_homotopy(&cx, &ChainMap::identity(&cx), bound)
            .unwrap()
            .is_none());
    }
    let xid = ChainMap::scalar(&cx, &p(&r, "x"));
    let h = find_null_homotopy(&cx, &xid, 0).unwrap().unwrap();
    assert_eq!(h.h.components[0], PolyMatrix::zero(&r, 0, 1));
    assert_eq!(h.h.components[1], PolyMatrix::identity(&r, 1));
    let mut bad = ChainMap::identity(&cx);
    bad.components[1] = PolyMatrix::zero(&r, 1, 1);
    assert_eq!(find_null_homotopy(&cx, &bad, 0), Err(HomError::NotACycle));
}

#[test]
fn json_roundtrip() {
    let r = ring(&[("x", 1), ("y", 2)]);
    let k = koszul(&r, &[p(&r, "x^2"), p(&r, "y")]).unwrap();
    let j = complex_to_json(&k);
    let s = serde_json::to_string(&j).unwrap();
    let back = complex_from_json(&serde_json::from_str(&s).unwrap()).unwrap();
    assert_eq!(back, k);
}

#[test]
fn koszul_dual_on_regular_sequence() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let k = koszul_dual(&r, &[p(&r, "x"), p(&r, "y")]).unwrap();
    let t = cohomology_window(&k, (-4, 4)).unwrap();
    // H^2 = A/(x,y) placed at weight -2
    assert_eq!(t.support(), vec![((2, -2), 1)]);
}

fn arb_poly(r: Arc<Ring>, weight: i64) -> impl Strategy<Value = Poly> {
    let monos = if weight < 0 {
        Vec::new()
    } else {
        r.monomials_of_weight(weight).unwrap()
    };
    let n = monos.len();
    prop::collection::vec(-2i64..3, n).prop_map(move |cs| {
        let f = &r.field;
        Poly::from_terms(
            &r,
            monos
                .iter()
                .cloned()
                .zip(cs.iter().map(|&c| f.from_i64(c)))
                .collect(),
        )
    })
}

fn arb_map(
    r: Arc<Ring>,
    src: Vec<i64>,
    tgt: Vec<i64>,
    shift: i64,
) -> impl Strategy<Value = PolyMatrix> {
    let cells: Vec<BoxedStrategy<Poly>> = tgt
        .iter()
        .flat_map(|&wi| src.iter().map(move |&wj| wj - wi + shift))
        .map(|w| arb_poly(r.clone(), w).boxed())
        .collect();
    let (rows, cols) = (tgt.len(), src.len());
    cells.prop_map(move |es| {
        let mut m = PolyMatrix::zero(&r, rows, cols);
        for (k, e) in es.into_iter().enumerate() {
            m.set(k / cols, k % cols, e);
        }
        m
    })
}

fn arb_two_term() -> impl Strategy<Value = FiniteComplex> {
    let r = ring(&[("x", 1), ("y", 1)]);
    (
        prop::collection::vec(0i64..3, 1..3),
        prop::collection::vec(0i64..3, 1..3),
        1i64..3,
    )
        .prop_flat_map(move |(a, b, s)| {
            let r2 = r.clone();
            arb_map(r.clone(), a.clone(), b.clone(), s).prop_map(move |m| {
                FiniteComplex::new(
                    &r2,
                    Grading::Z { lo: 0 },
                    vec![FreeModule::new(a.clone()), FreeModule::new(b.clone())],
                    vec![m],
                    s,
                )
                .unwrap()
            })
        })
}

fn arb_complex() -> impl Strategy<Value = FiniteComplex> {
    (arb_two_term(), arb_two_term()).prop_filter_map("shifts differ", |(a, b)| tensor(&a, &b).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn euler_characteristic_per_slice(cx in arb_complex()) {
        let s = cx.shift();
        prop_assume!(s != 0);
        let t = cohomology_window(&cx, (0, 5)).unwrap();
        // exact statement: along each diagonal {(p, m0 + p*s)} the alternating sum of slice
        // ranks equals that of cohomology
        let lo = cx.positions()[0];
        let hi = *cx.positions().last().unwrap();
        for m0 in -10..=10i64 {
            let diag: Vec<(i64, i64)> = (lo..=hi).map(|p| (p, m0 + (p - lo) * s)).collect();
            if diag.iter().any(|&(_, m)| !(0..=5).contains(&m)) {
                continue;
            }
            let sign = |p: i64| if p.rem_euclid(2) == 0 { 1 } else { -1 };
            let chi_c: i64 = diag.iter().map(|&(p, m)| sign(p) * slice_basis(cx.ring(), &cx.module(p), m, None).unwrap().len() as i64).sum();
            let chi_h: i64 = diag.iter().map(|&(p, m)| sign(p) * t.get(p, m).unwrap() as i64).sum();
            prop_assert_eq!(chi_c, chi_h);
        }
    }

    #[test]
    fn cone_fits_long_exact_sequence(cx in arb_two_term(), e in 0u32..2) {
        let r = cx.ring().clone();
        let f = ChainMap::scalar(&cx, &Poly::var(&r, 0).pow(e));
        let c = cone(&f, &cx, &cx).unwrap();
        let twist = f.shift - cx.shift();
        let w = (0, 6);
        let hc = cohomology_window(&c, w).unwrap();
        let hm = cohomology_window(&cx, (w.0 - twist - 2, w.1 + 2)).unwrap();
        for (&(q, m), &d) in &hc.entries {
            let a = hm.get(q, m).unwrap_or(0);
            let b = hm.get(q + 1, m - twist).unwrap_or(0);
            prop_assert!(d <= a + b, "slice ({}, {}): {} > {} + {}", q, m, d, a, b);
        }
    }

    #[test]
    fn fold_preserves_parity_totals(cx in arb_complex()) {
        let a = cohomology_window(&cx, (0, 5)).unwrap();
        let b = cohomology_window(&fold_z2(&cx).unwrap(), (0, 5)).unwrap();
        prop_assert_eq!(a.parity_totals(), b.entries);
    }

    #[test]
    fn homotopy_implies_acyclic(cx in arb_two_term()) {
        if let Some(h) = find_null_homotopy(&cx, &ChainMap::identity(&cx), 2).unwrap() {
            prop_assert!(cohomology_window(&cx, (0, 6)).unwrap().is_zero());
            prop_assert_eq!(hom_differential(&cx, &cx, &h.h).components, ChainMap::identity(&cx).components);
        }
    }
}
