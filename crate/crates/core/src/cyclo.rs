//! Cyclotomic cosets of index `ell` and the piecewise mapping specs over
//! them.
//!
//! For `ell | q-1` the nonzero `ell`-th powers form the subgroup `C_0` of
//! `F_q^*` and the cosets `C_i = γ^i C_0` partition `F_q^*`. A spec with
//! monomial branches sends `0 ↦ 0` and `x ∈ C_i ↦ γ^{k_i} · x^{r_i}`; it is
//! fully determined by the two integer vectors `r` (branch exponents,
//! canonical in `[1, s]`) and `k` (coefficient logs, canonical in
//! `[0, q-2]`), where `s = (q-1)/ell`.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use std::fmt;

/// A generalized cyclotomic mapping with monomial branches, in canonical
/// form. Construct via [`canonicalize`] or [`parse_spec`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycloSpec {
    ell: i64,
    s: i64,
    r: Vec<i64>,
    k: Vec<i64>,
}

impl CycloSpec {
    pub fn ell(&self) -> i64 {
        self.ell
    }

    /// Coset size `s = (q-1)/ell`.
    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn r(&self) -> &[i64] {
        &self.r
    }

    pub fn k(&self) -> &[i64] {
        &self.k
    }

    /// Canonical-by-construction constructor for values already in range;
    /// used by the enumerator.
    pub(crate) fn from_canonical(ell: i64, s: i64, r: Vec<i64>, k: Vec<i64>) -> CycloSpec {
        debug_assert!(r.iter().all(|&ri| 1 <= ri && ri <= s));
        debug_assert!(k.iter().all(|&ki| 0 <= ki && ki < ell * s));
        CycloSpec { ell, s, r, k }
    }
}

impl fmt::Display for CycloSpec {
    /// The spec text grammar: `ell=2 r=1,7 k=0,10`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ell={} r={} k={}", self.ell, join(&self.r), join(&self.k))
    }
}

fn join(v: &[i64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Checks `ell | q-1` and returns `s = (q-1)/ell`.
pub fn coset_size(ctx: &FieldCtx, ell: i64) -> Result<i64> {
    let order = ctx.order();
    if ell < 1 || order % ell != 0 {
        return Err(Error::EllDoesNotDivide { ell, group_order: order });
    }
    Ok(order / ell)
}

/// Index of the coset containing `x`: `x ∈ C_i` iff `ind_γ(x) ≡ i (mod ell)`.
pub fn coset_index(ctx: &FieldCtx, ell: i64, x: &FieldElem) -> Result<i64> {
    coset_size(ctx, ell)?;
    if x.is_zero() {
        return Err(Error::ZeroHasNoCoset);
    }
    Ok(ctx.dlog(x)? % ell)
}

/// Reduces raw exponent vectors into canonical form: each `r_i` mod `s`
/// into `[1, s]` (residue 0 maps to `s`, so branch monomials are never
/// `x^0`), each `k_i` mod `q-1`.
pub fn canonicalize(ctx: &FieldCtx, ell: i64, r_raw: &[i64], k_raw: &[i64]) -> Result<CycloSpec> {
    let s = coset_size(ctx, ell)?;
    if r_raw.len() != ell as usize || k_raw.len() != ell as usize {
        return Err(Error::LengthMismatch);
    }
    let r = r_raw
        .iter()
        .map(|&ri| {
            let m = ri.rem_euclid(s);
            if m == 0 {
                s
            } else {
                m
            }
        })
        .collect();
    let k = k_raw.iter().map(|&ki| ki.rem_euclid(ctx.order())).collect();
    Ok(CycloSpec { ell, s, r, k })
}

/// Evaluates the mapping at one point: `0 ↦ 0`, and `x ∈ C_i ↦ γ^{k_i} x^{r_i}`.
pub fn apply_map(ctx: &FieldCtx, spec: &CycloSpec, x: &FieldElem) -> FieldElem {
    if x.is_zero() {
        return ctx.zero();
    }
    let u = ctx.dlog(x).expect("nonzero");
    let i = (u % spec.ell) as usize;
    ctx.pow_gamma(spec.k[i] + spec.r[i] * u)
}

/// `ζ = γ^s`, a primitive `ell`-th root of unity.
pub fn zeta(ctx: &FieldCtx, ell: i64) -> Result<FieldElem> {
    let s = coset_size(ctx, ell)?;
    Ok(ctx.pow_gamma(s))
}

/// Parses the spec text grammar `ell=2 r=1,7 k=0,2` (whitespace-separated
/// key=value pairs, comma-separated integer lists) and canonicalizes.
pub fn parse_spec(ctx: &FieldCtx, text: &str) -> Result<CycloSpec> {
    let mut ell = None;
    let mut r = None;
    let mut k = None;
    for token in text.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {token:?}")))?;
        match key {
            "ell" => {
                ell = Some(
                    value
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad ell {value:?}")))?,
                )
            }
            "r" => r = Some(parse_list(value)?),
            "k" => k = Some(parse_list(value)?),
            _ => return Err(Error::Parse(format!("unknown key {key:?}"))),
        }
    }
    let ell = ell.ok_or_else(|| Error::Parse("missing ell=".into()))?;
    let r = r.ok_or_else(|| Error::Parse("missing r=".into()))?;
    let k = k.ok_or_else(|| Error::Parse("missing k=".into()))?;
    canonicalize(ctx, ell, &r, &k)
}

fn parse_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
        })
        .collect()
}

/// A mapping with arbitrary monic polynomial branches: `0 ↦ 0`,
/// `x ∈ C_i ↦ A_i · R_i(x)`. Only the polynomial expansion is supported for
/// these; permutation analysis is restricted to monomial branches.
#[derive(Clone, Debug)]
pub struct BranchPolySpec {
    ell: i64,
    a: Vec<FieldElem>,
    branches: Vec<Vec<FieldElem>>,
}

impl BranchPolySpec {
    /// Validates `ell | q-1`, equal lengths, and monic branches. `A_i = 0`
    /// is allowed and scales that branch to zero.
    pub fn new(
        ctx: &FieldCtx,
        ell: i64,
        a: Vec<FieldElem>,
        branches: Vec<Vec<FieldElem>>,
    ) -> Result<BranchPolySpec> {
        coset_size(ctx, ell)?;
        if a.len() != ell as usize || branches.len() != ell as usize {
            return Err(Error::LengthMismatch);
        }
        for branch in &branches {
            match branch.last() {
                Some(lead) if *lead == ctx.one() => {}
                _ => return Err(Error::Parse("branch polynomials must be monic".into())),
            }
        }
        Ok(BranchPolySpec { ell, a, branches })
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn coefficients(&self) -> &[FieldElem] {
        &self.a
    }

    pub fn branches(&self) -> &[Vec<FieldElem>] {
        &self.branches
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f25() -> FieldCtx {
        FieldCtx::preset("F25").unwrap()
    }

    #[test]
    fn coset_index_examples() {
        let f = f25();
        let a = f.elem(&[0, 1]).unwrap();
        assert_eq!(coset_index(&f, 2, &a).unwrap(), 1);
        assert_eq!(coset_index(&f, 2, &f.one()).unwrap(), 0);
        assert_eq!(coset_index(&f, 2, &f.mul(&a, &a)).unwrap(), 0);
        assert_eq!(
            coset_index(&f, 2, &f.zero()).unwrap_err(),
            Error::ZeroHasNoCoset
        );
        assert_eq!(
            coset_index(&f, 5, &a).unwrap_err(),
            Error::EllDoesNotDivide { ell: 5, group_order: 24 }
        );
    }

    #[test]
    fn cosets_partition_the_group() {
        for (f, ells) in [
            (f25(), vec![1, 2, 3, 4, 6, 8, 12, 24]),
            (FieldCtx::preset("F64").unwrap(), vec![1, 3, 7, 9, 21, 63]),
        ] {
            for ell in ells {
                let s = coset_size(&f, ell).unwrap();
                let mut sizes = vec![0i64; ell as usize];
                for x in f.elements().filter(|x| !x.is_zero()) {
                    sizes[coset_index(&f, ell, &x).unwrap() as usize] += 1;
                }
                assert!(sizes.iter().all(|&n| n == s));
            }
        }
    }

    #[test]
    fn canonicalize_examples() {
        let f = f25();
        let spec = canonicalize(&f, 2, &[13, 19], &[24, 26]).unwrap();
        assert_eq!((spec.r(), spec.k()), (&[1, 7][..], &[0, 2][..]));

        // already canonical stays put; residue 0 mod s maps to s
        let spec = canonicalize(&f, 2, &[12, 7], &[0, 0]).unwrap();
        assert_eq!((spec.r(), spec.k()), (&[12, 7][..], &[0, 0][..]));
        let spec = canonicalize(&f, 2, &[0, 24], &[0, 0]).unwrap();
        assert_eq!(spec.r(), &[12, 12]);

        assert_eq!(
            canonicalize(&f, 2, &[1], &[0, 0]).unwrap_err(),
            Error::LengthMismatch
        );
        assert!(matches!(
            canonicalize(&f, 5, &[1; 5], &[0; 5]).unwrap_err(),
            Error::EllDoesNotDivide { ell: 5, .. }
        ));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let f = f25();
        for raw_r in [[13, 19], [0, 5], [-3, 100]] {
            for raw_k in [[24, 26], [-1, 50], [0, 0]] {
                let once = canonicalize(&f, 2, &raw_r, &raw_k).unwrap();
                let twice = canonicalize(&f, 2, once.r(), once.k()).unwrap();
                assert_eq!(once, twice);
            }
        }
    }

    #[test]
    fn k_reduction_preserves_the_mapping() {
        // reducing k mod q-1 never changes the map; reducing r mod s is a
        // pure representative choice, exact on C_0 and on all of F_q^* when
        // r is already in range
        let f = f25();
        let canon = canonicalize(&f, 2, &[1, 7], &[24 + 3, -5]).unwrap();
        let reference = canonicalize(&f, 2, &[1, 7], &[3, 19]).unwrap();
        for x in f.elements() {
            assert_eq!(apply_map(&f, &canon, &x), apply_map(&f, &reference, &x));
        }
    }

    #[test]
    fn r_reduction_twists_by_a_root_of_unity_off_coset_zero() {
        // On C_i, x^{r + δs} = ζ^{iδ} x^r: the canonical representative
        // agrees on C_0 and differs by exactly that factor elsewhere.
        let f = f25();
        let z = zeta(&f, 2).unwrap();
        let raw = [13i64, 19];
        let canon = canonicalize(&f, 2, &raw, &[0, 0]).unwrap();
        for x in f.elements().filter(|x| !x.is_zero()) {
            let i = coset_index(&f, 2, &x).unwrap();
            let delta = (raw[i as usize] - canon.r()[i as usize]) / canon.s();
            let twist = f.pow(&z, i * delta).unwrap();
            let raw_value = f.mul(
                &f.pow_gamma(canon.k()[i as usize]),
                &f.pow(&x, raw[i as usize]).unwrap(),
            );
            assert_eq!(raw_value, f.mul(&twist, &apply_map(&f, &canon, &x)));
        }
    }

    #[test]
    fn apply_map_examples() {
        let f = f25();
        let spec = canonicalize(&f, 2, &[1, 7], &[0, 0]).unwrap();
        assert!(apply_map(&f, &spec, &f.zero()).is_zero());
        assert_eq!(apply_map(&f, &spec, &f.one()), f.one());
        let a = f.elem(&[0, 1]).unwrap();
        assert_eq!(apply_map(&f, &spec, &a), f.pow_gamma(7));
    }

    #[test]
    fn map_sends_coset_i_into_coset_phi_i() {
        let f = f25();
        for (r, k) in [([1, 7], [0, 2]), ([5, 11], [3, 8]), ([2, 9], [7, 7])] {
            let spec = canonicalize(&f, 2, &r, &k).unwrap();
            for x in f.elements().filter(|x| !x.is_zero()) {
                let i = coset_index(&f, 2, &x).unwrap();
                let expected = (spec.k()[i as usize] + i * spec.r()[i as usize]).rem_euclid(2);
                let y = apply_map(&f, &spec, &x);
                assert_eq!(coset_index(&f, 2, &y).unwrap(), expected);
            }
        }
    }

    #[test]
    fn zeta_examples() {
        let f = f25();
        assert_eq!(zeta(&f, 2).unwrap(), f.scalar(4));
        assert_eq!(zeta(&f, 1).unwrap(), f.one());

        let f64 = FieldCtx::preset("F64").unwrap();
        let z = zeta(&f64, 21).unwrap();
        assert_eq!(z, f64.pow_gamma(3));
        // multiplicative order exactly 21
        let mut cur = z.clone();
        let mut order = 1;
        while cur != f64.one() {
            cur = f64.mul(&cur, &z);
            order += 1;
        }
        assert_eq!(order, 21);
    }

    #[test]
    fn spec_grammar_roundtrip() {
        let f = f25();
        let spec = parse_spec(&f, "ell=2 r=1,7 k=0,10").unwrap();
        assert_eq!(spec.to_string(), "ell=2 r=1,7 k=0,10");
        // raw values canonicalize on parse
        let spec = parse_spec(&f, "ell=2 r=13,19 k=24,26").unwrap();
        assert_eq!(spec.to_string(), "ell=2 r=1,7 k=0,2");
        assert!(parse_spec(&f, "ell=2 r=1,7").is_err());
        assert!(parse_spec(&f, "ell=2 r=1,7 k=0,x").is_err());
        assert!(parse_spec(&f, "nonsense").is_err());
    }

    #[test]
    fn branch_spec_validation() {
        let f = f25();
        let x_branch = vec![f.zero(), f.one()];
        let ok = BranchPolySpec::new(&f, 2, vec![f.one(), f.one()], vec![x_branch.clone(); 2]);
        assert!(ok.is_ok());
        // non-monic branch
        let bad = vec![f.zero(), f.scalar(2)];
        assert!(BranchPolySpec::new(&f, 2, vec![f.one(), f.one()], vec![x_branch, bad]).is_err());
        // length mismatch
        assert!(BranchPolySpec::new(&f, 2, vec![f.one()], vec![vec![f.one()]; 2]).is_err());
    }
}
