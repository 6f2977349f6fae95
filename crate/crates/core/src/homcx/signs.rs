//! Sign conventions used throughout the crate.
//!
//! Two rules are primary:
//!
//! * Suspension: `(Σⁿ M)^p = M^{p+n}` with differential `(-1)^n d_M`.
//! * Hom: for `g` of degree `|g|`, `∂g = d_N ∘ g - (-1)^{|g|} g ∘ d_M`.
//!
//! Everything else is derived from them:
//!
//! * Cone of `f: M → N` (degree 0): `N ⊕ ΣM` with `d(n, m) = (d_N n + f m, -d_M m)`.
//! * Tensor: `d(m ⊗ n) = d_M m ⊗ n + (-1)^{|m|} m ⊗ d_N n`; curvatures add.
//! * Null homotopies: `h` of degree -1 with `∂h = d h + h d`.
//! * Dual module: `d_{M*}(φ) = -(-1)^{|φ|} φ ∘ d_M`, curvature `-w`.
//! * Koszul complex: `d(e_{i_1} ∧ … ∧ e_{i_k}) = Σ_r (-1)^{r-1} g_{i_r} e_{… î_r …}`.
//! * Dual Koszul complex: `d(e_I) = Σ_{i ∉ I} g_i e_i ∧ e_I`.
//! * Hochschild chains `a_0[a_1|…|a_n]` use the shifted parity `|a_i| + 1` for `i ≥ 1`
//!   (see the `hochschild` module for the individual terms).
//!
//! In Z/2-folded complexes positions are read mod 2 and the same formulas apply with parities.

/// `(-1)^n` as a boolean "negate".
pub fn negate(n: i64) -> bool {
    n.rem_euclid(2) == 1
}
