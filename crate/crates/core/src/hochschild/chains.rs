//! Normalized Hochschild chains `a_0[a_1|…|a_n]` and the operators on them.
//!
//! Signs follow the Koszul rule on the suspension `V = sA`, where `|sa| = |a| + 1`; a chain is
//! read as `sa_0 ⊗ sa_1 ⊗ … ⊗ sa_n`. The bar operations are
//!
//! - `b_0 = -s h` (curvature),
//! - `b_1(sa) = -s(da)`,
//! - `b_2(sa, sb) = (-1)^{|a|} s(ab)`,
//!
//! and the Hochschild differential applies them to every cyclically consecutive block, moving
//! wrapped blocks to the front with their Koszul sign. Curvature is inserted in the `n + 1`
//! gaps after `a_0`. Connes' operator is `B = s1 ⊗ Σ (cyclic rotations)`, again with Koszul
//! signs. With these choices `ch ∘ b = dw ∧ ch` and `ch ∘ B = d ∘ ch` hold on the nose.
//!
//! Bar positions are taken modulo the unit: `E_00·1` never appears there and is rewritten
//! as `-Σ_{i>0} E_ii`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::{BasisElem, HochschildAlgebra, HochschildError};
use crate::derham::DifferentialForm;
use crate::exactalg::{Poly, Scalar};

pub type Chain = Vec<BasisElem>;
pub type ChainVec = BTreeMap<Chain, Scalar>;

fn sign(odd: bool, c: &Scalar) -> Scalar {
    if odd {
        c.neg()
    } else {
        c.clone()
    }
}

impl HochschildAlgebra {
    pub fn chain_weight(&self, c: &[BasisElem]) -> i64 {
        c.iter().map(|b| self.weight(b)).sum()
    }

    /// `Σ weight - δ·n`.
    pub fn chain_kappa(&self, c: &[BasisElem]) -> i64 {
        self.chain_weight(c) - self.delta() * (c.len() as i64 - 1)
    }

    /// `Σ deg - n`, or its parity when the algebra is only Z/2-graded.
    pub fn chain_position(&self, c: &[BasisElem]) -> i64 {
        let p = c.iter().map(|b| self.degree(b)).sum::<i64>() - (c.len() as i64 - 1);
        if self.z_graded() {
            p
        } else {
            p.rem_euclid(2)
        }
    }

    pub fn next_position(&self, p: i64) -> i64 {
        if self.z_graded() {
            p + 1
        } else {
            (p + 1).rem_euclid(2)
        }
    }

    fn suspended_parity(&self, b: &BasisElem) -> bool {
        self.parity(b) == 0
    }

    /// Add `coeff · chain` to `out`, rewriting `E_00·1` in bar positions.
    pub fn push_normalized(&self, out: &mut ChainVec, chain: Chain, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        if let Some(k) = (1..chain.len()).find(|&k| self.is_pivot_unit(&chain[k])) {
            for i in 1..self.rank() {
                let mut c = chain.clone();
                c[k] = BasisElem {
                    row: i as u16,
                    col: i as u16,
                    mono: chain[k].mono.clone(),
                };
                self.push_normalized(out, c, coeff.neg());
            }
            return;
        }
        match out.entry(chain) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&coeff);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// The full differential `b_0 + b_1 + b_2` on one chain (no truncation).
    pub fn hochschild_d(&self, chain: &[BasisElem]) -> ChainVec {
        let mut out = ChainVec::new();
        let one = self.ring().field.one();
        let n = chain.len() - 1;
        let par: Vec<bool> = chain.iter().map(|b| self.suspended_parity(b)).collect();
        let mut prefix = vec![false; n + 2];
        for k in 0..=n {
            prefix[k + 1] = prefix[k] ^ par[k];
        }
        for k in 0..=n {
            for (db, c) in self.differential(&chain[k]) {
                let mut next = chain.to_vec();
                next[k] = db;
                self.push_normalized(&mut out, next, sign(!prefix[k], &c));
            }
        }
        for k in 0..n {
            if let Some(p) = self.multiply(&chain[k], &chain[k + 1]) {
                let mut next = chain[..k].to_vec();
                next.push(p);
                next.extend_from_slice(&chain[k + 2..]);
                let odd = prefix[k] ^ (self.parity(&chain[k]) == 1);
                self.push_normalized(&mut out, next, sign(odd, &one));
            }
        }
        if n >= 1 {
            if let Some(p) = self.multiply(&chain[n], &chain[0]) {
                let mut next = vec![p];
                next.extend_from_slice(&chain[1..n]);
                let odd = (par[n] && prefix[n]) ^ (self.parity(&chain[n]) == 1);
                self.push_normalized(&mut out, next, sign(odd, &one));
            }
        }
        for g in 1..=n + 1 {
            for (h, c) in self.curvature_terms() {
                let mut next = chain[..g].to_vec();
                next.push(h);
                next.extend_from_slice(&chain[g..]);
                self.push_normalized(&mut out, next, sign(!prefix[g], &c));
            }
        }
        out
    }

    /// Connes' operator on one chain.
    pub fn connes_b(&self, chain: &[BasisElem]) -> ChainVec {
        let mut out = ChainVec::new();
        let one = self.ring().field.one();
        let n = chain.len() - 1;
        let par: Vec<bool> = chain.iter().map(|b| self.suspended_parity(b)).collect();
        for i in 0..=n {
            let head = par[..i].iter().fold(false, |a, &b| a ^ b);
            let tail = par[i..].iter().fold(false, |a, &b| a ^ b);
            for u in self.unit_terms() {
                let mut next = vec![u];
                next.extend_from_slice(&chain[i..]);
                next.extend_from_slice(&chain[..i]);
                self.push_normalized(&mut out, next, sign(head && tail, &one));
            }
        }
        out
    }

    pub fn apply<F: Fn(&[BasisElem]) -> ChainVec>(&self, v: &ChainVec, f: F) -> ChainVec {
        let mut out = ChainVec::new();
        for (c, x) in v {
            for (d, y) in f(c) {
                self.push_normalized(&mut out, d, x.mul(&y));
            }
        }
        out
    }

    /// `ch(a_0[a_1|…|a_n]) = a_0 da_1 ∧ … ∧ da_n / n!`, for commutative one-object algebras.
    pub fn chern(&self, chain: &[BasisElem]) -> Result<DifferentialForm, HochschildError> {
        let ring = self.ring();
        let p = ring.field.characteristic();
        if p != 0 {
            return Err(HochschildError::PositiveCharacteristic(p));
        }
        if self.rank() != 1 {
            return Err(HochschildError::Unsupported(
                "the Chern character is defined here for one-object algebras".into(),
            ));
        }
        let rel: Vec<usize> = (0..ring.nvars()).collect();
        let poly = |b: &BasisElem| Poly::monomial(ring, b.mono.clone(), ring.field.one());
        let mut form = DifferentialForm::function(ring, &rel, poly(&chain[0]));
        for b in &chain[1..] {
            form = form.wedge(&crate::derham::derham_d(&DifferentialForm::function(
                ring,
                &rel,
                poly(b),
            )));
        }
        let mut fact = BigInt::one();
        for k in 2..chain.len() as u64 {
            fact *= k;
        }
        let inv = ring
            .field
            .from_bigint(&fact)
            .inv()
            .expect("characteristic 0");
        Ok(form.scale(&Poly::constant(ring, inv)))
    }

    pub fn chern_vec(&self, v: &ChainVec) -> Result<DifferentialForm, HochschildError> {
        let ring = self.ring();
        let rel: Vec<usize> = (0..ring.nvars()).collect();
        let mut out = DifferentialForm::zero(ring, &rel);
        for (c, x) in v {
            out = out.add(&self.chern(c)?.scale(&Poly::constant(ring, x.clone())));
        }
        Ok(out)
    }

    pub fn chain_to_string(&self, c: &[BasisElem]) -> String {
        let parts: Vec<String> = c.iter().map(|b| self.elem_to_string(b)).collect();
        if parts.len() == 1 {
            parts[0].clone()
        } else {
            format!("{}[{}]", parts[0], parts[1..].join("|"))
        }
    }
}
