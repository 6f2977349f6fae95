use serde::Serialize;

use super::{CurvedError, CurvedModule};
use crate::homcx::{
    check_complex, cohomology_window, hom_complex, hom_differential, strip_laurent, ChainMap,
    CohomologyTable, FiniteComplex, HomComplex,
};

/// `End(X)` as a dg algebra over the Laurent-stripped ring: matrix units as a basis,
/// composition as product, `∂g = d g - (-1)^{|g|} g d` as differential.
#[derive(Clone, Debug)]
pub struct EndomorphismDga {
    pub module: CurvedModule,
    pub complex: FiniteComplex,
    pub hom: HomComplex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DgaReport {
    pub rank: usize,
    pub d_squared_zero: bool,
    pub leibniz: bool,
    pub identity_closed: bool,
}

pub fn endomorphism_dga(x: &CurvedModule) -> Result<EndomorphismDga, CurvedError> {
    let complex = strip_laurent(&x.to_complex());
    let hom = hom_complex(&complex, &complex)?;
    Ok(EndomorphismDga {
        module: x.clone(),
        complex,
        hom,
    })
}

impl EndomorphismDga {
    pub fn rank(&self) -> usize {
        self.hom.complex.total_rank()
    }

    /// Matrix units, each homogeneous in parity and weight.
    pub fn basis(&self) -> Vec<ChainMap> {
        let ring = self.complex.ring();
        let mut out = Vec::new();
        for deg in [0, 1] {
            let m = self.hom.complex.module(deg);
            for k in 0..m.rank() {
                let mut v = vec![crate::exactalg::Poly::zero(ring); m.rank()];
                v[k] = crate::exactalg::Poly::one(ring);
                out.push(self.hom.unpack(deg, m.weights[k], &v));
            }
        }
        out
    }

    pub fn multiply(&self, f: &ChainMap, g: &ChainMap) -> ChainMap {
        f.compose(g, &self.complex)
    }

    pub fn differential(&self, g: &ChainMap) -> ChainMap {
        hom_differential(&self.complex, &self.complex, g)
    }

    pub fn identity(&self) -> ChainMap {
        ChainMap::identity(&self.complex)
    }

    /// Verify `∂² = 0`, the Leibniz rule on all basis pairs, and `∂(id) = 0`.
    pub fn check(&self) -> DgaReport {
        let basis = self.basis();
        let diffs: Vec<ChainMap> = basis.iter().map(|b| self.differential(b)).collect();
        let d_squared_zero = check_complex(&self.hom.complex).valid
            && diffs.iter().all(|d| self.differential(d).is_zero());
        let mut leibniz = true;
        'outer: for (f, df) in basis.iter().zip(&diffs) {
            for (g, dg) in basis.iter().zip(&diffs) {
                let lhs = self.differential(&self.multiply(f, g));
                let a = self.multiply(df, g);
                let b = self.multiply(f, dg);
                let odd = f.degree.rem_euclid(2) == 1;
                let rhs: Vec<_> = a
                    .components
                    .iter()
                    .zip(&b.components)
                    .map(|(x, y)| x.add(&y.signed(odd)))
                    .collect();
                if lhs.components != rhs {
                    leibniz = false;
                    break 'outer;
                }
            }
        }
        DgaReport {
            rank: self.rank(),
            d_squared_zero,
            leibniz,
            identity_closed: self.differential(&self.identity()).is_zero(),
        }
    }

    pub fn cohomology(&self, window: (i64, i64)) -> Result<CohomologyTable, CurvedError> {
        Ok(cohomology_window(&self.hom.complex, window)?)
    }
}
