//! Permutation criterion, closed-form compositional inverse, involution
//! test and fixed-point count for cyclotomic mapping specs — each paired
//! with an independent brute-force oracle over the full value table.
//!
//! A spec permutes `F_q` iff every `gcd(r_i, s) = 1` and the induced coset
//! map `φ(i) = (k_i + i·r_i) mod ell` is a bijection of `[0, ell)`. Writing
//! `g_i = r_i^{-1} mod s` (canonical in `[1, s]`) with exact Bezout
//! cofactor `t_i = (1 - r_i g_i)/s`, the inverse spec is
//! `rr_{φ(i)} = g_i`, `kk_{φ(i)} = (-k_i g_i + i(1 - r_i g_i)) mod (q-1)`.
//! All checks are pure integer arithmetic mod `q-1`.

use crate::cyclo::{self, CycloSpec};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// The integer data behind the closed-form inverse of a permutation spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseData {
    /// Induced coset permutation `φ(i) = (k_i + i·r_i) mod ell`.
    pub phi: Vec<i64>,
    /// `g_i = r_i^{-1} mod s`, canonical in `[1, s]`.
    pub g: Vec<i64>,
    /// Exact Bezout cofactor: `r_i·g_i + s·t_i = 1` as integers.
    pub t: Vec<i64>,
    /// Inverse branch exponents, `rr_{φ(i)} = g_i`.
    pub rr: Vec<i64>,
    /// Inverse coefficient logs, `kk_{φ(i)} = (-k_i g_i + i(1 - r_i g_i)) mod (q-1)`.
    pub kk: Vec<i64>,
}

/// The induced coset map `φ(i) = (k_i + i·r_i) mod ell` (a permutation of
/// `[0, ell)` exactly when the spec is a permutation).
pub fn phi_map(spec: &CycloSpec) -> Vec<i64> {
    let ell = spec.ell();
    (0..ell)
        .map(|i| (spec.k()[i as usize] + i * spec.r()[i as usize]).rem_euclid(ell))
        .collect()
}

/// Permutation criterion: `gcd(r_i, s) = 1` for all branches and `φ`
/// bijective.
pub fn is_permutation(spec: &CycloSpec) -> bool {
    if spec.r().iter().any(|&ri| gcd(ri, spec.s()) != 1) {
        return false;
    }
    let mut seen = vec![false; spec.ell() as usize];
    for i in phi_map(spec) {
        if std::mem::replace(&mut seen[i as usize], true) {
            return false;
        }
    }
    true
}

/// Computes `φ`, the canonical modular inverses `g`, the Bezout cofactors
/// `t`, and the inverse exponent vectors.
pub fn inverse_data(ctx: &FieldCtx, spec: &CycloSpec) -> Result<InverseData> {
    if !is_permutation(spec) {
        return Err(Error::NotAPermutation);
    }
    let ell = spec.ell();
    let s = spec.s();
    let order = ctx.order();
    let phi = phi_map(spec);
    let mut g = Vec::with_capacity(ell as usize);
    let mut t = Vec::with_capacity(ell as usize);
    let mut rr = vec![0i64; ell as usize];
    let mut kk = vec![0i64; ell as usize];
    for i in 0..ell as usize {
        let ri = spec.r()[i];
        let ki = spec.k()[i];
        let gi = inverse_mod_canonical(ri, s);
        let ti = (1 - ri * gi) / s;
        debug_assert_eq!(ri * gi + s * ti, 1);
        rr[phi[i] as usize] = gi;
        kk[phi[i] as usize] = (-ki * gi + i as i64 * (1 - ri * gi)).rem_euclid(order);
        g.push(gi);
        t.push(ti);
    }
    Ok(InverseData { phi, g, t, rr, kk })
}

/// Closed-form compositional inverse of a permutation spec. The result is
/// itself a canonical permutation spec.
pub fn invert(ctx: &FieldCtx, spec: &CycloSpec) -> Result<CycloSpec> {
    let data = inverse_data(ctx, spec)?;
    cyclo::canonicalize(ctx, spec.ell(), &data.rr, &data.kk)
}

/// True iff the spec is a permutation equal to its own inverse. Non-
/// permutations return false rather than erroring, so the search loop can
/// filter with this directly.
pub fn is_involution(ctx: &FieldCtx, spec: &CycloSpec) -> bool {
    match invert(ctx, spec) {
        Ok(inverse) => &inverse == spec,
        Err(_) => false,
    }
}

/// Involution test stated directly on the branch data, for cross-checking
/// against the inverse route: `r_{φ(i)} ≡ r_i^{-1} (mod s)` and
/// `k_{φ(i)} ≡ -k_i g_i + i(1 - r_i g_i) (mod q-1)` for every `i`. Always
/// agrees with [`is_involution`]; kept as an independent second route.
pub fn is_involution_by_conditions(ctx: &FieldCtx, spec: &CycloSpec) -> bool {
    if !is_permutation(spec) {
        return false;
    }
    let s = spec.s();
    let order = ctx.order();
    let phi = phi_map(spec);
    (0..spec.ell() as usize).all(|i| {
        let ri = spec.r()[i];
        let ki = spec.k()[i];
        let gi = inverse_mod_canonical(ri, s);
        let fi = phi[i] as usize;
        spec.r()[fi].rem_euclid(s) == gi % s
            && spec.k()[fi] == (-ki * gi + i as i64 * (1 - ri * gi)).rem_euclid(order)
    })
}

/// Specialized involution test for `ell = 2` with unit coefficients:
/// `x^{r_0}` on squares and `x^{r_1}` on non-squares is an involution iff
/// `s | r_0² - 1` and `2s | r_1² - 1`. Requires odd `q`.
pub fn corollary_ell2(ctx: &FieldCtx, r0: i64, r1: i64) -> Result<bool> {
    if ctx.q() % 2 == 0 {
        return Err(Error::EvenCharacteristic);
    }
    let s = ctx.order() / 2;
    Ok((r0 * r0 - 1).rem_euclid(s) == 0 && (r1 * r1 - 1).rem_euclid(2 * s) == 0)
}

/// Number of nonzero fixed points, by the linear-congruence reduction:
/// only branches with `φ(i) = i` can fix points, and for such a branch,
/// writing `k_i + i(r_i - 1) ≡ ell·t (mod q-1)`, the fixed points in `C_i`
/// correspond to solutions of `t + j(r_i - 1) ≡ 0 (mod s)` with
/// `j ∈ [0, s)`: there are `gcd(r_i - 1, s)` of them iff that gcd divides
/// `t`, else none. Zero is always fixed and excluded from the count.
pub fn count_fixed_points(ctx: &FieldCtx, spec: &CycloSpec) -> i64 {
    let ell = spec.ell();
    let s = spec.s();
    let order = ctx.order();
    let mut total = 0;
    for i in 0..ell {
        let ri = spec.r()[i as usize];
        let ki = spec.k()[i as usize];
        let v = (ki + i * (ri - 1)).rem_euclid(order);
        if v % ell != 0 {
            continue; // φ(i) ≠ i
        }
        let t = v / ell;
        let d = gcd(ri - 1, s);
        let d = if d == 0 { s } else { d };
        if t % d == 0 {
            total += d;
        }
    }
    total
}

/// A value table over the canonical element order `0, γ^0, …, γ^{q-2}`:
/// `entry(pos)` is the image of the element at `pos`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MapTable {
    images: Vec<u32>,
}

impl MapTable {
    pub(crate) fn from_codes(images: Vec<u32>) -> MapTable {
        MapTable { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of the element at canonical position `pos`.
    pub fn entry(&self, ctx: &FieldCtx, pos: usize) -> FieldElem {
        ctx.elem_from_code(self.images[pos])
    }

    /// Image of an arbitrary element.
    pub fn image_of(&self, ctx: &FieldCtx, x: &FieldElem) -> FieldElem {
        self.entry(ctx, ctx.canonical_pos(x))
    }

    pub(crate) fn codes(&self) -> &[u32] {
        &self.images
    }

    /// True iff this is the identity table.
    pub fn is_identity(&self, ctx: &FieldCtx) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(pos, &code)| code == ctx.code_at_pos(pos))
    }
}

/// Brute-force evaluation of the mapping at every point of `F_q`.
pub fn oracle_eval_table(ctx: &FieldCtx, spec: &CycloSpec) -> MapTable {
    let q = ctx.q() as usize;
    let mut images = Vec::with_capacity(q);
    images.push(0); // 0 ↦ 0
    let ell = spec.ell();
    let order = ctx.order();
    for u in 0..order {
        let i = (u % ell) as usize;
        let e = (spec.k()[i] + spec.r()[i] * u).rem_euclid(order);
        images.push(ctx.code_at_pos(1 + e as usize));
    }
    MapTable { images }
}

/// Bijectivity by pigeonhole over the table values.
pub fn oracle_is_permutation(ctx: &FieldCtx, table: &MapTable) -> bool {
    let mut seen = vec![false; ctx.q() as usize];
    for &code in &table.images {
        if std::mem::replace(&mut seen[ctx.pos_of_code(code)], true) {
            return false;
        }
    }
    true
}

/// Pointwise inversion of a bijective table.
pub fn oracle_invert(ctx: &FieldCtx, table: &MapTable) -> Result<MapTable> {
    if !oracle_is_permutation(ctx, table) {
        return Err(Error::NotBijective);
    }
    let mut images = vec![0u32; table.images.len()];
    for (pos, &code) in table.images.iter().enumerate() {
        images[ctx.pos_of_code(code)] = ctx.code_at_pos(pos);
    }
    Ok(MapTable { images })
}

/// True iff the table composed with itself is the identity.
pub fn oracle_is_involution(ctx: &FieldCtx, table: &MapTable) -> bool {
    if !oracle_is_permutation(ctx, table) {
        return false;
    }
    table
        .images
        .iter()
        .enumerate()
        .all(|(pos, &code)| table.images[ctx.pos_of_code(code)] == ctx.code_at_pos(pos))
}

/// Number of nonzero fixed points of the table.
pub fn oracle_fixed_points(ctx: &FieldCtx, table: &MapTable) -> i64 {
    table
        .images
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(pos, &code)| code == ctx.code_at_pos(pos))
        .count() as i64
}

/// True iff `second(first(x)) = x` for every `x`: direct table-level
/// composition check, no polynomial expansion involved.
pub fn tables_compose_to_identity(ctx: &FieldCtx, first: &MapTable, second: &MapTable) -> bool {
    first.codes().iter().enumerate().all(|(pos, &code)| {
        second.codes()[ctx.pos_of_code(code)] == ctx.code_at_pos(pos)
    })
}

/// Coefficient-level identity behind the inverse formula: for the branch
/// `i` mapped to coset `coset = φ(i)`, returns
/// `A_i^{-(r'_coset + j·s)} · ζ^{-i·(t + j·r_i)}` with `t = (r_i g_i - 1)/s`,
/// which equals `B_coset · ζ^{-j·coset}` computed from [`InverseData`].
pub fn zyp_coefficient(ctx: &FieldCtx, spec: &CycloSpec, coset: i64, j: i64) -> Result<FieldElem> {
    let data = inverse_data(ctx, spec)?;
    let i = data
        .phi
        .iter()
        .position(|&f| f == coset)
        .ok_or(Error::NotAPermutation)? as i64;
    let s = spec.s();
    let ri = spec.r()[i as usize];
    let ki = spec.k()[i as usize];
    let gi = data.g[i as usize];
    let t = (ri * gi - 1) / s;
    // A_i = γ^{k_i}, ζ = γ^s: everything reduces to one exponent mod q-1.
    let e = -(gi + j * s) * ki - i * (t + j * ri) * s;
    Ok(ctx.pow_gamma(e))
}

/// `B_coset · ζ^{-j·coset}` straight from the inverse data; the other side
/// of the coefficient identity checked by [`zyp_coefficient`].
pub fn inverse_coefficient(ctx: &FieldCtx, spec: &CycloSpec, coset: i64, j: i64) -> Result<FieldElem> {
    let data = inverse_data(ctx, spec)?;
    let e = data.kk[coset as usize] - j * coset * spec.s();
    Ok(ctx.pow_gamma(e))
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `r^{-1} mod s` canonicalized into `[1, s]`; for `s = 1` this is 1 (with
/// Bezout cofactor `1 - r`).
fn inverse_mod_canonical(r: i64, s: i64) -> i64 {
    if s == 1 {
        return 1;
    }
    let (g, x, _) = egcd(r, s);
    debug_assert_eq!(g, 1);
    let m = x.rem_euclid(s);
    if m == 0 {
        s
    } else {
        m
    }
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}
