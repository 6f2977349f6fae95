use std::sync::Arc;

use super::complex::{FiniteComplex, FreeModule, Grading};
use super::matrix::PolyMatrix;
use super::HomError;
use crate::exactalg::{Poly, Ring};

/// A graded map between two complexes: `components[k]` acts on the `k`-th module of the source
/// and lands `degree` positions higher. Entries carry weight `w_src - w_tgt + shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub degree: i64,
    pub shift: i64,
    pub components: Vec<PolyMatrix>,
}

impl ChainMap {
    pub fn identity(cx: &FiniteComplex) -> ChainMap {
        ChainMap {
            degree: 0,
            shift: 0,
            components: cx
                .modules()
                .iter()
                .map(|m| PolyMatrix::identity(cx.ring(), m.rank()))
                .collect(),
        }
    }

    /// `p · id` for a homogeneous polynomial `p`.
    pub fn scalar(cx: &FiniteComplex, p: &Poly) -> ChainMap {
        ChainMap {
            degree: 0,
            shift: p.weight().unwrap_or(0),
            components: cx
                .modules()
                .iter()
                .map(|m| PolyMatrix::scalar_identity(p, m.rank()))
                .collect(),
        }
    }

    pub fn zero(src: &FiniteComplex, tgt: &FiniteComplex, degree: i64, shift: i64) -> ChainMap {
        let components = src
            .positions()
            .iter()
            .map(|&p| {
                PolyMatrix::zero(
                    src.ring(),
                    tgt.module(p + degree).rank(),
                    src.module(p).rank(),
                )
            })
            .collect();
        ChainMap {
            degree,
            shift,
            components,
        }
    }

    /// Component acting on position `p` of `src`; zero outside the support.
    pub fn at(&self, src: &FiniteComplex, tgt: &FiniteComplex, p: i64) -> PolyMatrix {
        match src.index_of(p) {
            Some(k) if k < self.components.len() => self.components[k].clone(),
            _ => PolyMatrix::zero(
                src.ring(),
                tgt.module(p + self.degree).rank(),
                src.module(p).rank(),
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &ChainMap) -> ChainMap {
        ChainMap {
            degree: self.degree,
            shift: self.shift,
            components: self
                .components
                .iter()
                .zip(&o.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    /// `self ∘ g` for endomorphisms of one complex.
    pub fn compose(&self, g: &ChainMap, cx: &FiniteComplex) -> ChainMap {
        let components = cx
            .positions()
            .iter()
            .map(|&p| self.at(cx, cx, p + g.degree).mul(&g.at(cx, cx, p)))
            .collect();
        ChainMap {
            degree: self.degree + g.degree,
            shift: self.shift + g.shift,
            components,
        }
    }

    /// Check that `∂f = 0` in the Hom complex.
    pub fn check(&self, src: &FiniteComplex, tgt: &FiniteComplex) -> Result<(), HomError> {
        let d = hom_differential(src, tgt, self);
        if d.is_zero() {
            Ok(())
        } else {
            let p = src.positions()[d.components.iter().position(|c| !c.is_zero()).unwrap()];
            Err(HomError::NotChainMap(format!("∂f ≠ 0 on position {p}")))
        }
    }
}

/// `∂g = d_N ∘ g - (-1)^{|g|} g ∘ d_M`, computed directly on components.
pub fn hom_differential(src: &FiniteComplex, tgt: &FiniteComplex, g: &ChainMap) -> ChainMap {
    let n = g.degree;
    let components = src
        .positions()
        .iter()
        .map(|&p| {
            let left = tgt.diff_from(p + n).mul(&g.at(src, tgt, p));
            let right = g.at(src, tgt, p + 1).mul(&src.diff_from(p));
            left.sub(&right.signed(n.rem_euclid(2) == 1))
        })
        .collect();
    ChainMap {
        degree: n + 1,
        shift: g.shift + src.shift(),
        components,
    }
}

fn same_ambient(a: &FiniteComplex, b: &FiniteComplex) -> Result<(), HomError> {
    if !Ring::same(a.ring(), b.ring()) {
        return Err(HomError::AmbientMismatch);
    }
    if a.shift() != b.shift() {
        return Err(HomError::ShiftMismatch(a.shift(), b.shift()));
    }
    Ok(())
}

/// Set the Laurent variable to one and drop it from the ring.
pub fn strip_laurent(cx: &FiniteComplex) -> FiniteComplex {
    let Some(l) = cx.ring().laurent_index() else {
        return cx.clone();
    };
    let ring = cx.ring().without(&[l]);
    strip_into(cx, &ring)
}

pub(crate) fn strip_into(cx: &FiniteComplex, ring: &Arc<Ring>) -> FiniteComplex {
    let diffs = cx
        .diffs()
        .iter()
        .map(|d| d.map_into(ring, |p| p.strip_laurent(ring)))
        .collect();
    FiniteComplex::assemble(
        ring,
        cx.grading(),
        cx.modules().to_vec(),
        diffs,
        cx.shift(),
        cx.curvature().strip_laurent(ring),
    )
    .expect("stripping a Laurent variable preserves shape and weights")
}

pub(crate) fn strip_map(f: &ChainMap, ring: &Arc<Ring>) -> ChainMap {
    ChainMap {
        degree: f.degree,
        shift: f.shift,
        components: f
            .components
            .iter()
            .map(|c| c.map_into(ring, |p| p.strip_laurent(ring)))
            .collect(),
    }
}

/// `Σⁿ`: positions move down by `n` and the differential picks up `(-1)^n`.
pub fn shift(cx: &FiniteComplex, n: i64) -> FiniteComplex {
    let odd = n.rem_euclid(2) == 1;
    let diffs: Vec<PolyMatrix> = cx.diffs().iter().map(|d| d.signed(odd)).collect();
    let (grading, modules, diffs) = match cx.grading() {
        Grading::Z { lo } => (Grading::Z { lo: lo - n }, cx.modules().to_vec(), diffs),
        Grading::Z2 if odd => {
            let m = cx.modules();
            (
                Grading::Z2,
                vec![m[1].clone(), m[0].clone()],
                vec![diffs[1].clone(), diffs[0].clone()],
            )
        }
        Grading::Z2 => (Grading::Z2, cx.modules().to_vec(), diffs),
    };
    // Σ of a curved pair has curvature (-1)^n w · (-1)^n = w: both maps flip sign together.
    FiniteComplex::assemble(
        cx.ring(),
        grading,
        modules,
        diffs,
        cx.shift(),
        cx.curvature().clone(),
    )
    .expect("shift preserves shape")
}

/// Mapping cone `N ⊕ ΣM` of a degree-0 chain map `f: M → N`, with
/// `d = [[d_N, f], [0, -d_M]]`. The `ΣM` generators are re-weighted by `f.shift - s`.
pub fn cone(
    f: &ChainMap,
    src: &FiniteComplex,
    tgt: &FiniteComplex,
) -> Result<FiniteComplex, HomError> {
    same_ambient(src, tgt)?;
    if src.grading() != tgt.grading()
        && (src.grading() == Grading::Z2 || tgt.grading() == Grading::Z2)
    {
        return Err(HomError::ShapeMismatch(
            "cone needs matching gradings".into(),
        ));
    }
    if src.curvature() != tgt.curvature() {
        return Err(HomError::NotChainMap(
            "source and target curvatures differ".into(),
        ));
    }
    if f.degree != 0 {
        return Err(HomError::NotChainMap(format!(
            "map has degree {}",
            f.degree
        )));
    }
    f.check(src, tgt)?;
    let ring = src.ring();
    let twist = f.shift - src.shift();
    let positions: Vec<i64> = match tgt.grading() {
        Grading::Z2 => vec![0, 1],
        Grading::Z { .. } => {
            let (sp, tp) = (src.positions(), tgt.positions());
            let lo = tp[0].min(sp[0] - 1);
            let hi = tp[tp.len() - 1].max(sp[sp.len() - 1] - 1);
            (lo..=hi).collect()
        }
    };
    let module = |p: i64| FreeModule::concat(&[&tgt.module(p), &src.module(p + 1).twist(twist)]);
    let modules: Vec<FreeModule> = positions.iter().map(|&p| module(p)).collect();
    let ndiffs = if tgt.grading() == Grading::Z2 {
        2
    } else {
        positions.len() - 1
    };
    let mut diffs = Vec::new();
    for &p in &positions[..ndiffs] {
        let (a, b) = (module(p), module(p + 1));
        let nt = tgt.module(p).rank();
        let nt1 = tgt.module(p + 1).rank();
        let mut d = PolyMatrix::zero(ring, b.rank(), a.rank());
        d.put_block(0, 0, &tgt.diff_from(p));
        d.put_block(0, nt, &f.at(src, tgt, p + 1));
        d.put_block(nt1, nt, &src.diff_from(p + 1).neg());
        diffs.push(d);
    }
    let grading = match tgt.grading() {
        Grading::Z2 => Grading::Z2,
        Grading::Z { .. } => Grading::Z { lo: positions[0] },
    };
    FiniteComplex::assemble(
        ring,
        grading,
        modules,
        diffs,
        src.shift(),
        tgt.curvature().clone(),
    )
}

/// Sum the positions of a Z-graded complex by parity.
pub fn fold_z2(cx: &FiniteComplex) -> Result<FiniteComplex, HomError> {
    if cx.grading() == Grading::Z2 {
        return Err(HomError::ShapeMismatch(
            "fold needs a Z-graded complex".into(),
        ));
    }
    let ring = cx.ring();
    let parts: [Vec<i64>; 2] = [0, 1].map(|e| {
        cx.positions()
            .into_iter()
            .filter(|p| p.rem_euclid(2) == e)
            .collect()
    });
    let offsets = |e: usize| {
        let mut off = Vec::new();
        let mut acc = 0;
        for &p in &parts[e] {
            off.push((p, acc));
            acc += cx.module(p).rank();
        }
        (off, acc)
    };
    let modules: Vec<FreeModule> = parts
        .iter()
        .map(|ps| FreeModule::new(ps.iter().flat_map(|&p| cx.module(p).weights).collect()))
        .collect();
    let mut diffs = Vec::new();
    for e in 0..2 {
        let (src_off, n_src) = offsets(e);
        let (tgt_off, n_tgt) = offsets(1 - e);
        let mut d = PolyMatrix::zero(ring, n_tgt, n_src);
        for &(p, c0) in &src_off {
            if let Some(&(_, r0)) = tgt_off.iter().find(|(q, _)| *q == p + 1) {
                d.put_block(r0, c0, &cx.diff_from(p));
            }
        }
        diffs.push(d);
    }
    FiniteComplex::assemble(
        ring,
        Grading::Z2,
        modules,
        diffs,
        cx.shift(),
        Poly::zero(ring),
    )
}

fn match_gradings(
    a: &FiniteComplex,
    b: &FiniteComplex,
) -> Result<(FiniteComplex, FiniteComplex), HomError> {
    same_ambient(a, b)?;
    Ok(match (a.grading(), b.grading()) {
        (Grading::Z2, Grading::Z { .. }) => (a.clone(), fold_z2(b)?),
        (Grading::Z { .. }, Grading::Z2) => (fold_z2(a)?, b.clone()),
        _ => (a.clone(), b.clone()),
    })
}

fn total_positions(
    a: &FiniteComplex,
    b: &FiniteComplex,
    combine: impl Fn(i64, i64) -> i64,
) -> Vec<i64> {
    if a.grading() == Grading::Z2 {
        return vec![0, 1];
    }
    let mut out: Vec<i64> = a
        .positions()
        .iter()
        .flat_map(|&p| b.positions().into_iter().map(move |q| (p, q)))
        .map(|(p, q)| combine(p, q))
        .collect();
    out.sort_unstable();
    out.dedup();
    let (lo, hi) = (out[0], out[out.len() - 1]);
    (lo..=hi).collect()
}

fn norm(cx: &FiniteComplex, p: i64) -> i64 {
    if cx.grading() == Grading::Z2 {
        p.rem_euclid(2)
    } else {
        p
    }
}

/// Total tensor complex with `d(m⊗n) = dm⊗n + (-1)^{|m|} m⊗dn`. Generators of `M_p ⊗ N_q`
/// are ordered `j * rank(N_q) + k`; blocks run over increasing `p`. Curvatures add.
pub fn tensor(a: &FiniteComplex, b: &FiniteComplex) -> Result<FiniteComplex, HomError> {
    let (a, b) = match_gradings(a, b)?;
    let ring = a.ring();
    let z2 = a.grading() == Grading::Z2;
    let totals = total_positions(&a, &b, |p, q| p + q);
    let blocks = |t: i64| -> Vec<(i64, i64, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for p in a.positions() {
            let q = norm(&b, t - p);
            if b.index_of(q).is_some() {
                out.push((p, q, off));
                off += a.module(p).rank() * b.module(q).rank();
            }
        }
        out
    };
    let module = |t: i64| {
        let mut w = Vec::new();
        for (p, q, _) in blocks(t) {
            for &x in &a.module(p).weights {
                for &y in &b.module(q).weights {
                    w.push(x + y);
                }
            }
        }
        FreeModule::new(w)
    };
    let modules: Vec<FreeModule> = totals.iter().map(|&t| module(t)).collect();
    let ndiffs = if z2 { 2 } else { totals.len() - 1 };
    let mut diffs = Vec::new();
    for &t in &totals[..ndiffs] {
        let (src, tgt) = (blocks(t), blocks(norm(&a, t + 1)));
        let mut d = PolyMatrix::zero(ring, module(norm(&a, t + 1)).rank(), module(t).rank());
        for &(p, q, c0) in &src {
            let ida = PolyMatrix::identity(ring, a.module(p).rank());
            let idb = PolyMatrix::identity(ring, b.module(q).rank());
            if let Some(&(_, _, r0)) = tgt
                .iter()
                .find(|(pp, qq, _)| *pp == norm(&a, p + 1) && *qq == q)
            {
                d.put_block(r0, c0, &a.diff_from(p).kron(&idb));
            }
            if let Some(&(_, _, r0)) = tgt
                .iter()
                .find(|(pp, qq, _)| *pp == p && *qq == norm(&b, q + 1))
            {
                d.put_block(
                    r0,
                    c0,
                    &ida.kron(&b.diff_from(q)).signed(p.rem_euclid(2) == 1),
                );
            }
        }
        diffs.push(d);
    }
    let grading = if z2 {
        Grading::Z2
    } else {
        Grading::Z { lo: totals[0] }
    };
    FiniteComplex::assemble(
        ring,
        grading,
        modules,
        diffs,
        a.shift(),
        a.curvature().add(b.curvature()),
    )
}

/// Hom complex `Hom(M, N)` as a complex of free modules, with the packing needed to move
/// between chain maps and module elements.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub complex: FiniteComplex,
    pub source: FiniteComplex,
    pub target: FiniteComplex,
    layout: Layout,
}

/// Per Hom degree: the module and its blocks `(source position, offset)`. Entry `(i, j)` of
/// a block sits at `offset + i * rank(M_p) + j`.
type Layout = Vec<(i64, FreeModule, Vec<(i64, usize)>)>;

fn pack(src: &FiniteComplex, tgt: &FiniteComplex, layout: &Layout, g: &ChainMap) -> Vec<Poly> {
    let deg = norm(src, g.degree);
    let (_, module, blocks) = layout
        .iter()
        .find(|(d, _, _)| *d == deg)
        .expect("degree inside the Hom complex");
    let mut out = vec![Poly::zero(src.ring()); module.rank()];
    for &(p, off) in blocks {
        let c = g.at(src, tgt, p);
        let cols = c.cols();
        for (i, j, e) in c.entries() {
            out[off + i * cols + j] = e.clone();
        }
    }
    out
}

impl HomComplex {
    /// Coordinates of a map of degree `n` in the Hom module at position `n`.
    pub fn pack(&self, g: &ChainMap) -> Vec<Poly> {
        pack(&self.source, &self.target, &self.layout, g)
    }

    pub fn unpack(&self, n: i64, shift: i64, v: &[Poly]) -> ChainMap {
        let deg = norm(&self.source, n);
        let blocks = &self
            .layout
            .iter()
            .find(|(d, _, _)| *d == deg)
            .expect("degree inside the Hom complex")
            .2;
        let mut g = ChainMap::zero(&self.source, &self.target, n, shift);
        for &(p, off) in blocks {
            let c = &mut g.components[self.source.index_of(p).unwrap()];
            let cols = c.cols();
            for i in 0..c.rows() {
                for j in 0..cols {
                    c.set(i, j, v[off + i * cols + j].clone());
                }
            }
        }
        g
    }
}

/// `Hom(M, N)` with `∂g = d_N g - (-1)^{|g|} g d_M`. The basis map `E_ij: e_j ↦ e_i` has weight
/// `w_N(i) - w_M(j)`, so an element's weight equals the weight shift of the map it encodes.
pub fn hom_complex(m: &FiniteComplex, n: &FiniteComplex) -> Result<HomComplex, HomError> {
    let (m, n) = match_gradings(m, n)?;
    let ring = m.ring().clone();
    let z2 = m.grading() == Grading::Z2;
    let degrees = total_positions(&m, &n, |p, q| q - p);
    let layout: Layout = degrees
        .iter()
        .map(|&d| {
            let mut off = 0;
            let mut blocks = Vec::new();
            let mut w = Vec::new();
            for p in m.positions() {
                let q = norm(&n, p + d);
                if n.index_of(q).is_none() {
                    continue;
                }
                blocks.push((p, off));
                off += m.module(p).rank() * n.module(q).rank();
                for &x in &n.module(q).weights {
                    for &y in &m.module(p).weights {
                        w.push(x - y);
                    }
                }
            }
            (d, FreeModule::new(w), blocks)
        })
        .collect();
    let ndiffs = if z2 { 2 } else { degrees.len() - 1 };
    let mut diffs = Vec::new();
    for k in 0..ndiffs {
        let (d, module, blocks) = &layout[k];
        let rows = layout[(k + 1) % layout.len()].1.rank();
        let mut mat = PolyMatrix::zero(&ring, rows, module.rank());
        let mut col = 0;
        for &(p, _) in blocks {
            let (r, c) = (n.module(p + d).rank(), m.module(p).rank());
            for i in 0..r {
                for j in 0..c {
                    let mut g = ChainMap::zero(&m, &n, *d, 0);
                    g.components[m.index_of(p).unwrap()].set(i, j, Poly::one(&ring));
                    let image = hom_differential(&m, &n, &g);
                    for (row, v) in pack(&m, &n, &layout, &image).into_iter().enumerate() {
                        mat.set(row, col, v);
                    }
                    col += 1;
                }
            }
        }
        diffs.push(mat);
    }
    let grading = if z2 {
        Grading::Z2
    } else {
        Grading::Z { lo: degrees[0] }
    };
    let modules = layout.iter().map(|(_, md, _)| md.clone()).collect();
    let complex = FiniteComplex::assemble(
        &ring,
        grading,
        modules,
        diffs,
        m.shift(),
        n.curvature().sub(m.curvature()),
    )?;
    Ok(HomComplex {
        complex,
        source: m,
        target: n,
        layout,
    })
}

/// Coordinates of `g` inside `hom`.
pub fn hom_element(hom: &HomComplex, g: &ChainMap) -> Vec<Poly> {
    hom.pack(g)
}
