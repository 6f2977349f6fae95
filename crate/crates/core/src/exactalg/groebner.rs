use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::linalg;
use super::poly::{mono_div, mono_divides, mono_lcm, Mono, MonomialOrder, Poly, Ring, Var};
use super::scalar::Scalar;
use super::AlgError;

/// Generators of an ideal in a fixed ambient ring; zeros and duplicates are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    ring: Arc<Ring>,
    gens: Vec<Poly>,
}

impl IdealBasis {
    pub fn new(ring: &Arc<Ring>, gens: Vec<Poly>) -> Result<IdealBasis, AlgError> {
        let mut out: Vec<Poly> = Vec::new();
        for g in gens {
            if !Ring::same(g.ring(), ring) {
                return Err(AlgError::MixedAmbient);
            }
            if !g.is_zero() && !out.contains(&g) {
                out.push(g);
            }
        }
        Ok(IdealBasis {
            ring: ring.clone(),
            gens: out,
        })
    }

    pub fn zero(ring: &Arc<Ring>) -> IdealBasis {
        IdealBasis {
            ring: ring.clone(),
            gens: Vec::new(),
        }
    }

    pub fn unit(ring: &Arc<Ring>) -> IdealBasis {
        IdealBasis {
            ring: ring.clone(),
            gens: vec![Poly::one(ring)],
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn sum(&self, o: &IdealBasis) -> Result<IdealBasis, AlgError> {
        IdealBasis::new(
            &self.ring,
            self.gens.iter().chain(&o.gens).cloned().collect(),
        )
    }

    pub fn strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.to_string()).collect()
    }
}

impl fmt::Display for IdealBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.strings().join(", "))
    }
}

/// Reduced Gröbner basis together with its staircase (leading monomials).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    basis: Vec<Poly>,
    staircase: Vec<Mono>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn staircase(&self) -> &[Mono] {
        &self.staircase
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, f: &Poly) -> Result<bool, AlgError> {
        Ok(normal_form(f, self)?.is_zero())
    }

    pub fn to_ideal(&self) -> IdealBasis {
        IdealBasis {
            ring: self.ring.clone(),
            gens: self.basis.clone(),
        }
    }

    pub fn strings(&self) -> Vec<String> {
        self.basis.iter().map(|g| g.to_string()).collect()
    }
}

fn check_ideal(ideal: &IdealBasis) -> Result<(), AlgError> {
    for g in &ideal.gens {
        if !Ring::same(g.ring(), &ideal.ring) {
            return Err(AlgError::MixedAmbient);
        }
        if let Some(l) = ideal.ring.laurent_index() {
            if g.uses_var(l) {
                return Err(AlgError::LaurentVariablePresent(
                    ideal.ring.vars[l].name.clone(),
                ));
            }
        }
    }
    Ok(())
}

/// Reduced Gröbner basis by Buchberger's algorithm with the normal selection strategy
/// (smallest lcm degree, then smallest pair index) and the coprime and chain criteria.
pub fn buchberger(ideal: &IdealBasis, order: MonomialOrder) -> Result<GroebnerBasis, AlgError> {
    check_ideal(ideal)?;
    let ring = if ideal.ring.order == order {
        ideal.ring.clone()
    } else {
        ideal.ring.reorder(order)
    };
    let mut g: Vec<Poly> = Vec::new();
    let mut pairs: BTreeSet<(i64, usize, usize)> = BTreeSet::new();
    let lcm_deg = |a: &Mono, b: &Mono| mono_lcm(a, b).iter().map(|&e| e as i64).sum::<i64>();

    let add = |g: &mut Vec<Poly>, pairs: &mut BTreeSet<(i64, usize, usize)>, p: Poly| {
        let p = p.monic();
        let j = g.len();
        let lm = p.leading_mono().unwrap().clone();
        for (i, h) in g.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            pairs.insert((lcm_deg(h.leading_mono().unwrap(), &lm), i, j));
        }
        g.push(p);
    };

    for f in &ideal.gens {
        let f = f.reorder(&ring);
        let r = reduce_by(&f, &g);
        if !r.is_zero() {
            add(&mut g, &mut pairs, r);
        }
    }

    while let Some(&(d, i, j)) = pairs.iter().next() {
        pairs.remove(&(d, i, j));
        let (lmi, lmj) = (
            g[i].leading_mono().unwrap().clone(),
            g[j].leading_mono().unwrap().clone(),
        );
        if lmi.iter().zip(&lmj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let l = mono_lcm(&lmi, &lmj);
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && !g[k].is_zero()
                && mono_divides(g[k].leading_mono().unwrap(), &l)
                && !pairs.contains(&(
                    lcm_deg(&lmi, g[k].leading_mono().unwrap()),
                    i.min(k),
                    i.max(k),
                ))
                && !pairs.contains(&(
                    lcm_deg(&lmj, g[k].leading_mono().unwrap()),
                    j.min(k),
                    j.max(k),
                ))
        });
        if chain {
            continue;
        }
        let one = ring.field.one();
        let s = g[i]
            .mul_term(&mono_div(&l, &lmi), &one)
            .sub(&g[j].mul_term(&mono_div(&l, &lmj), &one));
        let r = reduce_by(&s, &g);
        if !r.is_zero() {
            add(&mut g, &mut pairs, r);
        }
    }

    Ok(GroebnerBasis::from_generating(ring, g))
}

impl GroebnerBasis {
    /// Minimalise and interreduce a Gröbner basis.
    fn from_generating(ring: Arc<Ring>, g: Vec<Poly>) -> GroebnerBasis {
        let g: Vec<Poly> = g.into_iter().filter(|p| !p.is_zero()).collect();
        let mut keep: Vec<Poly> = Vec::new();
        for (i, p) in g.iter().enumerate() {
            let lm = p.leading_mono().unwrap();
            let redundant = g.iter().enumerate().any(|(k, q)| {
                let lq = q.leading_mono().unwrap();
                k != i && mono_divides(lq, lm) && (lq != lm || k < i)
            });
            if !redundant {
                keep.push(p.clone());
            }
        }
        let mut reduced = Vec::with_capacity(keep.len());
        for (i, p) in keep.iter().enumerate() {
            let others: Vec<Poly> = keep
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, q)| q.clone())
                .collect();
            let lead = Poly::from_terms(&ring, vec![p.terms()[0].clone()]);
            let tail = reduce_by(&p.sub(&lead), &others);
            reduced.push(lead.add(&tail).monic());
        }
        let order = ring.order;
        reduced.sort_by(|a, b| order.cmp(a.leading_mono().unwrap(), b.leading_mono().unwrap()));
        let staircase = reduced
            .iter()
            .map(|p| p.leading_mono().unwrap().clone())
            .collect();
        GroebnerBasis {
            ring,
            basis: reduced,
            staircase,
        }
    }
}

/// Full multivariate division remainder of `f` by `g` (list need not be a Gröbner basis).
fn reduce_by(f: &Poly, g: &[Poly]) -> Poly {
    let ring = f.ring().clone();
    let mut p = f.clone();
    let mut rem: Vec<(Mono, Scalar)> = Vec::new();
    'outer: while let Some((m, c)) = p.terms().first().cloned() {
        for h in g {
            if h.is_zero() {
                continue;
            }
            let lm = h.leading_mono().unwrap();
            if mono_divides(lm, &m) {
                let q = c.div(h.leading_coeff().unwrap()).unwrap();
                p = p.sub(&h.mul_term(&mono_div(&m, lm), &q));
                continue 'outer;
            }
        }
        rem.push((m.clone(), c.clone()));
        p = p.sub(&Poly::monomial(&ring, m, c));
    }
    Poly::from_terms(&ring, rem)
}

/// Remainder of `f` modulo a Gröbner basis; zero iff `f` lies in the ideal.
pub fn normal_form(f: &Poly, gb: &GroebnerBasis) -> Result<Poly, AlgError> {
    if f.ring().vars != gb.ring.vars || f.ring().field != gb.ring.field {
        return Err(AlgError::MixedAmbient);
    }
    let f = f.reorder(&gb.ring);
    Ok(reduce_by(&f, &gb.basis))
}

/// Dimension of `R/I` as read off the staircase.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuotientDimension {
    Finite {
        dim: usize,
        hilbert: BTreeMap<i64, usize>,
        basis: Vec<Mono>,
    },
    Infinite {
        window: (i64, i64),
        hilbert: BTreeMap<i64, usize>,
    },
}

impl QuotientDimension {
    pub fn dim(&self) -> Option<usize> {
        match self {
            QuotientDimension::Finite { dim, .. } => Some(*dim),
            QuotientDimension::Infinite { .. } => None,
        }
    }

    pub fn hilbert(&self) -> &BTreeMap<i64, usize> {
        match self {
            QuotientDimension::Finite { hilbert, .. }
            | QuotientDimension::Infinite { hilbert, .. } => hilbert,
        }
    }
}

/// Standard monomials of a Gröbner basis: finite count when every variable has a pure power
/// among the leading monomials, otherwise per-weight counts on the supplied window.
pub fn quotient_dimension(
    gb: &GroebnerBasis,
    window: Option<(i64, i64)>,
) -> Result<QuotientDimension, AlgError> {
    let ring = &gb.ring;
    let n = ring.nvars();
    let standard = |m: &[i32]| !gb.staircase.iter().any(|s| mono_divides(s, m));
    let mut bounds = vec![None; n];
    for s in &gb.staircase {
        let nz: Vec<usize> = (0..n).filter(|&i| s[i] != 0).collect();
        if nz.len() == 1 {
            let i = nz[0];
            bounds[i] = Some(bounds[i].map_or(s[i], |b: i32| b.min(s[i])));
        }
        if nz.is_empty() {
            return Ok(QuotientDimension::Finite {
                dim: 0,
                hilbert: BTreeMap::new(),
                basis: Vec::new(),
            });
        }
    }
    if bounds.iter().all(|b| b.is_some()) {
        let bounds: Vec<i32> = bounds.into_iter().map(|b| b.unwrap()).collect();
        let mut basis = Vec::new();
        let mut cur = vec![0i32; n];
        loop {
            if standard(&cur) {
                basis.push(cur.clone());
            }
            let mut k = 0;
            while k < n {
                cur[k] += 1;
                if cur[k] < bounds[k] {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        basis.sort_by(|a, b| ring.order.cmp(a, b));
        let mut hilbert = BTreeMap::new();
        for m in &basis {
            *hilbert.entry(ring.mono_weight(m)).or_insert(0) += 1;
        }
        return Ok(QuotientDimension::Finite {
            dim: basis.len(),
            hilbert,
            basis,
        });
    }
    let (lo, hi) = window.ok_or(AlgError::WindowRequired)?;
    let mut hilbert = BTreeMap::new();
    for w in lo..=hi {
        let c = ring
            .monomials_of_weight(w)?
            .iter()
            .filter(|m| standard(m))
            .count();
        hilbert.insert(w, c);
    }
    Ok(QuotientDimension::Infinite {
        window: (lo, hi),
        hilbert,
    })
}

fn fresh_name(ring: &Ring, base: &str) -> String {
    let mut name = base.to_string();
    while ring.vars.iter().any(|v| v.name == name) {
        name.push('\'');
    }
    name
}

/// `(I : f^inf)` by adjoining `z`, adding `z f - 1` and eliminating `z`.
/// The result is returned as the reduced grevlex basis of the saturation.
pub fn saturate(ideal: &IdealBasis, f: &Poly) -> Result<IdealBasis, AlgError> {
    if f.is_zero() {
        return Err(AlgError::ZeroDivisorInput);
    }
    check_ideal(ideal)?;
    let ring = ideal.ring.clone();
    let mut vars = vec![Var::new(&fresh_name(&ring, "z"), 0, 0)];
    vars.extend(ring.vars.iter().cloned());
    let big = Ring::with_order(ring.field.clone(), vars, MonomialOrder::Block(1))?;
    let shift: Vec<Option<usize>> = (0..ring.nvars()).map(|i| Some(i + 1)).collect();
    let mut gens = Vec::new();
    for g in &ideal.gens {
        gens.push(g.map_into(&big, &shift)?);
    }
    let z = Poly::var(&big, 0);
    gens.push(z.mul(&f.map_into(&big, &shift)?).sub(&Poly::one(&big)));
    let gb = buchberger(&IdealBasis::new(&big, gens)?, MonomialOrder::Block(1))?;
    let back: Vec<Option<usize>> = std::iter::once(None)
        .chain((0..ring.nvars()).map(Some))
        .collect();
    let mut out = Vec::new();
    for g in gb.basis() {
        if !g.uses_var(0) {
            out.push(g.map_into(&ring, &back)?);
        }
    }
    let gb = buchberger(&IdealBasis::new(&ring, out)?, ring.order)?;
    Ok(gb.to_ideal())
}

/// `I ∩ J` as the `u`-free part of `u·I + (1 - u)·J`.
pub fn intersect(a: &IdealBasis, b: &IdealBasis) -> Result<IdealBasis, AlgError> {
    if !Ring::same(&a.ring, &b.ring) {
        return Err(AlgError::MixedAmbient);
    }
    check_ideal(a)?;
    let ring = a.ring.clone();
    let mut vars = vec![Var::new(&fresh_name(&ring, "u"), 0, 0)];
    vars.extend(ring.vars.iter().cloned());
    let big = Ring::with_order(ring.field.clone(), vars, MonomialOrder::Block(1))?;
    let shift: Vec<Option<usize>> = (0..ring.nvars()).map(|i| Some(i + 1)).collect();
    let u = Poly::var(&big, 0);
    let v = Poly::one(&big).sub(&u);
    let mut gens = Vec::new();
    for g in &a.gens {
        gens.push(g.map_into(&big, &shift)?.mul(&u));
    }
    for g in &b.gens {
        gens.push(g.map_into(&big, &shift)?.mul(&v));
    }
    let gb = buchberger(&IdealBasis::new(&big, gens)?, MonomialOrder::Block(1))?;
    let back: Vec<Option<usize>> = std::iter::once(None)
        .chain((0..ring.nvars()).map(Some))
        .collect();
    let mut out = Vec::new();
    for g in gb.basis() {
        if !g.uses_var(0) {
            out.push(g.map_into(&ring, &back)?);
        }
    }
    Ok(buchberger(&IdealBasis::new(&ring, out)?, ring.order)?.to_ideal())
}

/// `(I : Z^∞)` for `Z = (z_1, ..., z_r)`, as the intersection of the principal saturations.
pub fn saturate_ideal(ideal: &IdealBasis, z: &[Poly]) -> Result<IdealBasis, AlgError> {
    let mut out = IdealBasis::unit(&ideal.ring);
    for g in z.iter().filter(|g| !g.is_zero()) {
        out = intersect(&out, &saturate(ideal, g)?)?;
    }
    Ok(out)
}

/// Ideal of partial derivatives of `w` along the listed variables.
pub fn jacobian_ideal(w: &Poly, relative_vars: &[usize]) -> Result<IdealBasis, AlgError> {
    let ring = w.ring().clone();
    let mut gens = Vec::new();
    for &i in relative_vars {
        if i >= ring.nvars() {
            return Err(AlgError::UnknownVariable(format!("#{i}")));
        }
        gens.push(w.derivative(i));
    }
    IdealBasis::new(&ring, gens)
}

/// Search for cofactors `c_i` with `sum c_i g_i = f`, each `c_i` of total degree at most
/// `degree_bound`; exact linear solve over the coefficient space.
pub fn express_in(gens: &[Poly], f: &Poly, degree_bound: i32) -> Option<Vec<Poly>> {
    let ring = f.ring().clone();
    let n = ring.nvars();
    let mut monos: Vec<Mono> = Vec::new();
    let mut cur = vec![0i32; n];
    fn rec(i: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Mono>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, degree_bound, &mut cur, &mut monos);
    let mut index: BTreeMap<Mono, usize> = BTreeMap::new();
    let key = |m: Mono, index: &mut BTreeMap<Mono, usize>| {
        let k = index.len();
        *index.entry(m).or_insert(k)
    };
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        for m in &monos {
            let prod = g.mul_term(m, &ring.field.one());
            let col = prod
                .into_terms()
                .into_iter()
                .map(|(mm, c)| (key(mm, &mut index), c))
                .collect();
            cols.push(linalg::normalize(col));
            labels.push((gi, m.clone()));
        }
    }
    let rhs = linalg::normalize(
        f.terms()
            .iter()
            .map(|(m, c)| (key(m.clone(), &mut index), c.clone()))
            .collect(),
    );
    let x = linalg::solve(&ring.field, &cols, &rhs)?;
    let mut out: Vec<Vec<(Mono, Scalar)>> = vec![Vec::new(); gens.len()];
    for (k, c) in x.into_iter().enumerate() {
        if !c.is_zero() {
            let (gi, m) = &labels[k];
            out[*gi].push((m.clone(), c));
        }
    }
    Some(
        out.into_iter()
            .map(|t| Poly::from_terms(&ring, t))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, Field};
    use proptest::prelude::*;

    fn ring(names: &[&str]) -> Arc<Ring> {
        Ring::new(
            Field::Rational,
            names.iter().map(|n| Var::new(n, 0, 1)).collect(),
        )
        .unwrap()
    }

    fn ideal(r: &Arc<Ring>, gens: &[&str]) -> IdealBasis {
        IdealBasis::new(r, gens.iter().map(|g| parse_poly(r, g).unwrap()).collect()).unwrap()
    }

    fn gb_strings(r: &Arc<Ring>, gens: &[&str], order: MonomialOrder) -> Vec<String> {
        buchberger(&ideal(r, gens), order).unwrap().strings()
    }

    #[test]
    fn monomial_ideals_are_their_own_bases() {
        let r = ring(&["x", "y"]);
        assert_eq!(
            gb_strings(&r, &["x", "y"], MonomialOrder::Grevlex),
            vec!["y", "x"]
        );
        assert_eq!(
            gb_strings(&r, &["x^2", "y^3"], MonomialOrder::Grevlex),
            vec!["x^2", "y^3"]
        );
    }

    /// Hand division oracle: x^3 - x = x * (x^2 - 1), so the pair reduces to {x^2 - 1}.
    #[test]
    fn redundant_generator_is_dropped() {
        let r = ring(&["x"]);
        let x = Poly::var(&r, 0);
        let g = parse_poly(&r, "x^2 - 1").unwrap();
        assert_eq!(x.mul(&g), parse_poly(&r, "x^3 - x").unwrap());
        assert_eq!(
            gb_strings(&r, &["x^2 - 1", "x^3 - x"], MonomialOrder::Lex),
            vec!["x^2 - 1"]
        );
    }

    #[test]
    fn intersections() {
        let r = ring(&["x", "y"]);
        let i = intersect(&ideal(&r, &["x"]), &ideal(&r, &["y"])).unwrap();
        assert_eq!(i.strings(), vec!["x*y"]);
        let i = intersect(&ideal(&r, &["x^2", "y"]), &ideal(&r, &["x^3"])).unwrap();
        assert_eq!(
            buchberger(&i, MonomialOrder::Grevlex).unwrap().strings(),
            vec!["x^3"]
        );
        assert!(
            intersect(&IdealBasis::unit(&r), &ideal(&r, &["x"]))
                .unwrap()
                .strings()
                == vec!["x"]
        );
        let s = saturate_ideal(
            &ideal(&r, &["x*y"]),
            &[parse_poly(&r, "x").unwrap(), parse_poly(&r, "y").unwrap()],
        )
        .unwrap();
        // (xy : x^∞) = (y), (xy : y^∞) = (x), meet = (xy)
        assert_eq!(s.strings(), vec!["x*y"]);
    }

    #[test]
    fn normal_forms() {
        let r = ring(&["x"]);
        let gb = buchberger(&ideal(&r, &["x^2"]), MonomialOrder::Grevlex).unwrap();
        assert!(normal_form(&parse_poly(&r, "x^3").unwrap(), &gb)
            .unwrap()
            .is_zero());
        let gb = buchberger(&ideal(&r, &["x^2 - 1"]), MonomialOrder::Grevlex).unwrap();
        // x^3 = x*(x^2 - 1) + x
        assert_eq!(
            normal_form(&parse_poly(&r, "x^3").unwrap(), &gb)
                .unwrap()
                .to_string(),
            "x"
        );
        let gb = buchberger(&ideal(&r, &["x"]), MonomialOrder::Grevlex).unwrap();
        assert_eq!(normal_form(&Poly::one(&r), &gb).unwrap().to_string(), "1");
    }

    #[test]
    fn laurent_generators_rejected() {
        let r = Ring::new(
            Field::Rational,
            vec![Var::new("x", 0, 1), Var::laurent("t", 2)],
        )
        .unwrap();
        let i = ideal(&r, &["x*t"]);
        assert!(matches!(
            buchberger(&i, MonomialOrder::Grevlex),
            Err(AlgError::LaurentVariablePresent(_))
        ));
    }

    #[test]
    fn quotient_dimensions() {
        let r = ring(&["x"]);
        let qd = |r: &Arc<Ring>, g: &[&str]| {
            quotient_dimension(
                &buchberger(&ideal(r, g), MonomialOrder::Grevlex).unwrap(),
                None,
            )
            .unwrap()
            .dim()
        };
        assert_eq!(qd(&r, &["x"]), Some(1));
        assert_eq!(qd(&r, &["3*x^2"]), Some(2));
        let r2 = ring(&["x", "y"]);
        assert_eq!(qd(&r2, &["x^2", "y^3"]), Some(6));
        let gb = buchberger(&ideal(&r2, &["x^2"]), MonomialOrder::Grevlex).unwrap();
        let inf = quotient_dimension(&gb, Some((0, 3))).unwrap();
        assert_eq!(inf.dim(), None);
        assert_eq!(
            inf.hilbert().values().copied().collect::<Vec<_>>(),
            vec![1, 2, 2, 2]
        );
    }

    #[test]
    fn saturation_examples() {
        let r = ring(&["x"]);
        let x = Poly::var(&r, 0);
        assert_eq!(
            saturate(&ideal(&r, &["x^2"]), &x).unwrap().to_string(),
            "(1)"
        );
        assert_eq!(
            saturate(&ideal(&r, &["x^2 - 1"]), &x).unwrap().to_string(),
            "(x^2 - 1)"
        );
        assert!(saturate(&IdealBasis::zero(&r), &x).unwrap().is_zero());
        assert!(matches!(
            saturate(&IdealBasis::zero(&r), &Poly::zero(&r)),
            Err(AlgError::ZeroDivisorInput)
        ));
        let r2 = ring(&["x", "y"]);
        // (x y^2, x^2 y) : y^inf = (x)
        let s = saturate(
            &ideal(&r2, &["x*y^2", "x^2*y"]),
            &parse_poly(&r2, "y").unwrap(),
        )
        .unwrap();
        assert_eq!(s.to_string(), "(x)");
    }

    #[test]
    fn jacobians() {
        let r = ring(&["x"]);
        let j = jacobian_ideal(&parse_poly(&r, "x^3").unwrap(), &[0]).unwrap();
        assert_eq!(j.to_string(), "(3*x^2)");
        let rp = Ring::new(Field::Prime(3), vec![Var::new("x", 0, 1)]).unwrap();
        assert!(jacobian_ideal(&parse_poly(&rp, "x^3").unwrap(), &[0])
            .unwrap()
            .is_zero());
        let rs = Ring::new(
            Field::rational_function(3).unwrap(),
            vec![Var::new("x", 0, 1), Var::new("y", 0, 1)],
        )
        .unwrap();
        let j = jacobian_ideal(&parse_poly(&rs, "y*(x^3 - s)").unwrap(), &[0, 1]).unwrap();
        assert_eq!(j.to_string(), "(x^3 - s)");
    }

    #[test]
    fn cofactors() {
        let r = ring(&["x", "y"]);
        let g = vec![
            parse_poly(&r, "2*x").unwrap(),
            parse_poly(&r, "2*y").unwrap(),
        ];
        let f = parse_poly(&r, "x^2 + y^2").unwrap();
        let c = express_in(&g, &f, 1).unwrap();
        assert_eq!(c[0].mul(&g[0]).add(&c[1].mul(&g[1])), f);
        assert!(express_in(&g, &Poly::one(&r), 3).is_none());
    }

    /// Brute-force membership oracle for monomial ideals.
    fn brute_standard_count(gens: &[Mono], bound: i32, n: usize) -> usize {
        let mut count = 0;
        let mut cur = vec![0i32; n];
        loop {
            if !gens.iter().any(|g| mono_divides(g, &cur)) {
                count += 1;
            }
            let mut k = 0;
            while k < n {
                cur[k] += 1;
                if cur[k] <= bound {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
            if k == n {
                return count;
            }
        }
    }

    proptest! {
        #[test]
        fn reduced_basis_is_idempotent_and_kills_members(
            a in prop::collection::vec((-3i64..4, 0i32..3, 0i32..3), 1..4),
            b in prop::collection::vec((-3i64..4, 0i32..3, 0i32..3), 1..4),
            m in prop::collection::vec((-2i64..3, 0i32..2, 0i32..2), 1..3),
        ) {
            let r = ring(&["x", "y"]);
            let mk = |t: &[(i64, i32, i32)]| Poly::from_terms(&r, t.iter().map(|&(c, i, j)| (vec![i, j], r.field.from_i64(c))).collect());
            let (f, g, h) = (mk(&a), mk(&b), mk(&m));
            let id = IdealBasis::new(&r, vec![f.clone(), g.clone()]).unwrap();
            let gb = buchberger(&id, MonomialOrder::Grevlex).unwrap();
            let again = buchberger(&gb.to_ideal(), MonomialOrder::Grevlex).unwrap();
            prop_assert_eq!(&again, &gb);
            let member = f.mul(&h).add(&g);
            prop_assert!(normal_form(&member, &gb).unwrap().is_zero());
            let two = normal_form(&f.add(&member), &gb).unwrap();
            prop_assert!(two.is_zero());
        }

        #[test]
        fn saturation_is_a_fixed_point(
            a in prop::collection::vec((-2i64..3, 0i32..3, 0i32..3), 1..3),
            e in 1i32..3,
        ) {
            let r = ring(&["x", "y"]);
            let f = Poly::from_terms(&r, a.iter().map(|&(c, i, j)| (vec![i, j], r.field.from_i64(c))).collect());
            let g = Poly::monomial(&r, vec![e, 0], r.field.one());
            let id = IdealBasis::new(&r, vec![f]).unwrap();
            let s1 = saturate(&id, &g).unwrap();
            let s2 = saturate(&s1, &g).unwrap();
            prop_assert_eq!(s1, s2);
        }

        #[test]
        fn frobenius_kills_derivatives(a in prop::collection::vec((0i64..5, 0i32..3, 0i32..3), 1..4)) {
            let r = Ring::new(Field::Prime(5), vec![Var::new("x", 0, 1), Var::new("y", 0, 1)]).unwrap();
            let f = Poly::from_terms(&r, a.iter().map(|&(c, i, j)| (vec![i, j], r.field.from_i64(c))).collect());
            prop_assert!(jacobian_ideal(&f.pow(5), &[0, 1]).unwrap().is_zero());
        }

        #[test]
        fn staircase_count_matches_brute_force(
            gens in prop::collection::vec(prop::collection::vec(0i32..5, 3), 1..5),
        ) {
            let r = ring(&["x", "y", "z"]);
            let mut gens = gens;
            // pure powers keep the quotient finite
            gens.push(vec![4, 0, 0]);
            gens.push(vec![0, 4, 0]);
            gens.push(vec![0, 0, 4]);
            let id = IdealBasis::new(&r, gens.iter().map(|m| Poly::monomial(&r, m.clone(), r.field.one())).collect()).unwrap();
            let gb = buchberger(&id, MonomialOrder::Grevlex).unwrap();
            let dim = quotient_dimension(&gb, None).unwrap().dim().unwrap();
            prop_assert_eq!(dim, brute_standard_count(&gens, 4, 3));
        }
    }
}
