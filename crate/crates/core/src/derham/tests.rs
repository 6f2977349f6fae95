use super::*;
use crate::curved::Ground;
use crate::exactalg::{parse_poly, Field};
use crate::homcx::check_complex;
use proptest::prelude::*;

fn alg(field: Field, names: &[(&str, i32)], w: &str) -> CurvedAlgebra {
    let mut vars: Vec<Var> = names.iter().map(|(n, wt)| Var::new(n, 0, *wt)).collect();
    vars.push(Var::laurent("t", 2));
    let r = Ring::new(field, vars).unwrap();
    CurvedAlgebra::new(&r, Ground::Laurent, parse_poly(&r, w).unwrap()).unwrap()
}

#[test]
fn cubic_one_variable() {
    let a = alg(Field::Rational, &[("x", 2)], "x^3*t");
    let tdr = twisted_derham(&a).unwrap();
    assert!(check_complex(&tdr.complex).valid);
    let h = twisted_cohomology(&tdr, CohomologyMode::RegularSequence).unwrap();
    assert_eq!(h.parity, 1);
    assert_eq!(h.milnor.dim, Some(2));
    assert_eq!(h.table.even_odd(), (0, 2));
    // Q[x]dx / (x^2 dx): dx and x dx, at weights 2 and 4
    let win = twisted_cohomology(&tdr, CohomologyMode::Window(0, 8)).unwrap();
    assert_eq!(win.table.support(), vec![((1, 2), 1), ((1, 4), 1)]);
}

#[test]
fn two_cubics() {
    let a = alg(Field::Rational, &[("x", 2), ("y", 2)], "(x^3+y^3)*t");
    let tdr = twisted_derham(&a).unwrap();
    assert!(check_complex(&tdr.complex).valid);
    let h = twisted_cohomology(&tdr, CohomologyMode::RegularSequence).unwrap();
    assert_eq!(h.table.even_odd(), (4, 0));
    let win = twisted_cohomology(&tdr, CohomologyMode::Window(0, 12)).unwrap();
    assert_eq!(win.table.even_odd(), (4, 0));
}

#[test]
fn characteristic_p_kills_the_differential() {
    let a = alg(Field::prime(3).unwrap(), &[("x", 2)], "x^3*t");
    let tdr = twisted_derham(&a).unwrap();
    assert!(tdr.dw.is_zero());
    assert!(tdr
        .complex
        .diffs()
        .iter()
        .all(|d| d.entries().all(|(_, _, e)| e.is_zero())));
    assert_eq!(
        twisted_cohomology(&tdr, CohomologyMode::RegularSequence).unwrap_err(),
        DerhamError::NotRegularSequence
    );
}

#[test]
fn loci() {
    let a = alg(Field::Rational, &[("x", 1)], "x^2*t");
    assert_eq!(sing_locus(&a).unwrap().strings(), vec!["x"]);
    assert_eq!(nonreg_locus(&a).unwrap().strings(), vec!["x"]);
    let a = alg(Field::Rational, &[("x", 2), ("y", 0)], "(x*y + x)*t");
    // J = (y + 1, x) and w ∈ J
    assert_eq!(nonreg_locus(&a).unwrap().gens().len(), 2);
    let a = alg(Field::Rational, &[("x", 2)], "x*t");
    assert!(nonreg_locus(&a).unwrap().gens()[0].is_one());
    let z = alg(Field::Rational, &[("x", 2)], "0");
    assert_eq!(nonreg_locus(&z).unwrap_err(), DerhamError::ZeroCurvature);
    let imp = alg(Field::rational_function(3).unwrap(), &[("x", 2)], "x*t");
    assert!(matches!(
        nonreg_locus(&imp),
        Err(DerhamError::ImperfectGroundField(_))
    ));
}

#[test]
fn tilde_examples() {
    let q = Ring::new(
        Field::Rational,
        vec![Var::new("x", 0, 1), Var::new("y", 0, 1)],
    )
    .unwrap();
    let f = parse_poly(&q, "x^2 - y^3").unwrap();
    let a = tilde_construction(&q, &[f], TildeBase::Field).unwrap();
    assert_eq!(a.w(), &parse_poly(a.ring(), "x^2*t - y^3*t").unwrap());
    assert_eq!(
        a.ring()
            .vars
            .iter()
            .map(|v| v.name.as_str())
            .collect::<Vec<_>>(),
        vec!["x", "y", "t"]
    );
    assert_eq!(a.ring().vars[2].degree, 2);
    assert!(a.w().weight().is_some());
    let fs = [parse_poly(&q, "x").unwrap(), parse_poly(&q, "y").unwrap()];
    let b = tilde_construction(&q, &fs, TildeBase::Polynomial).unwrap();
    assert_eq!(b.relative_vars(), vec![0, 1]);
    assert!(b.is_ground_var(2) && b.is_ground_var(3));
    let graded = Ring::new(Field::Rational, vec![Var::new("u", 2, 1)]).unwrap();
    let bad = parse_poly(&graded, "u").unwrap();
    assert!(matches!(
        tilde_construction(&graded, &[bad], TildeBase::Field),
        Err(DerhamError::NonzeroWeightInput(_))
    ));
}

#[test]
fn wedge_signs() {
    let r = Ring::new(
        Field::Rational,
        vec![Var::new("x", 0, 1), Var::new("y", 0, 1)],
    )
    .unwrap();
    let rel = [0, 1];
    let dx = DifferentialForm::basis(&r, &rel, vec![0]);
    let dy = DifferentialForm::basis(&r, &rel, vec![1]);
    assert!(dx.wedge(&dy).add(&dy.wedge(&dx)).is_zero());
    assert!(dx.wedge(&dx).is_zero());
    let f = parse_poly(&r, "x*y").unwrap();
    let df = derham_d(&DifferentialForm::function(&r, &rel, f));
    assert_eq!(df.to_string(), "(y)*dx + (x)*dy");
}

proptest! {
    #[test]
    fn d_squared_vanishes(cs in prop::collection::vec(-3i64..4, 9)) {
        let r = Ring::new(Field::Rational, vec![Var::new("x", 0, 1), Var::new("y", 0, 1), Var::new("z", 0, 1)]).unwrap();
        let rel = [0, 1, 2];
        let monos = ["1", "x", "y*z", "x^2*y", "z^3", "x*y*z", "y^2", "x*z^2", "x^3*y^2*z"];
        let mut f = Poly::zero(&r);
        for (c, m) in cs.iter().zip(monos) {
            f = f.add(&parse_poly(&r, m).unwrap().scale(&Field::Rational.from_i64(*c)));
        }
        let one = DifferentialForm::function(&r, &rel, f);
        prop_assert!(derham_d(&derham_d(&one)).is_zero());
        let dy = DifferentialForm::basis(&r, &rel, vec![1]);
        let two = derham_d(&one).wedge(&dy);
        prop_assert!(derham_d(&derham_d(&two)).is_zero());
    }
}
