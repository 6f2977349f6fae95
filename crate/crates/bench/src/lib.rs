//! Fixtures shared by the benchmarks in `benches/`.

use std::sync::Arc;

use mfwb::curved::{koszul_curved, CurvedAlgebra, Ground};
use mfwb::exactalg::parse_poly;
use mfwb::hochschild::HochschildAlgebra;
use mfwb::{Field, Poly, Ring, Var};

/// `Q[vars][t, 1/t]` with every variable of weight `weight`.
pub fn laurent_ring(vars: &[&str], weight: i32) -> Arc<Ring> {
    let mut v: Vec<Var> = vars.iter().map(|n| Var::new(n, 0, weight)).collect();
    v.push(Var::laurent("t", 2));
    Ring::new(Field::Rational, v).unwrap()
}

pub fn poly(ring: &Arc<Ring>, s: &str) -> Poly {
    parse_poly(ring, s).unwrap()
}

/// The curved algebra `(Q[x, y, z][t, 1/t], f·t)` for a cubic `f`.
pub fn cubic_surface(f: &str) -> CurvedAlgebra {
    let r = laurent_ring(&["x", "y", "z"], 2);
    CurvedAlgebra::new(&r, Ground::Laurent, poly(&r, &format!("({f})*t"))).unwrap()
}

/// `End(Koszul(x; x t))` over `(Q[x][t, 1/t], x^2 t)`.
pub fn koszul_end() -> HochschildAlgebra {
    let r = laurent_ring(&["x"], 1);
    let alg = CurvedAlgebra::new(&r, Ground::Laurent, poly(&r, "x^2*t")).unwrap();
    let k = koszul_curved(&alg, &[poly(&r, "x")], &[poly(&r, "x*t")]).unwrap();
    HochschildAlgebra::endomorphism(&k).unwrap()
}
