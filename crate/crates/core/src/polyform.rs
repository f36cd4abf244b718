//! Dense polynomials of degree `< q` mod `x^q - x`: the unique polynomial
//! form of a cyclotomic mapping, plus evaluation, composition tables,
//! Lagrange interpolation and rendering.
//!
//! A spec of index `ell` expands to
//! `P(x) = (1/ell) Σ_i Σ_j A_i ζ^{-ji} x^{r_i + js}` with `i, j` ranging
//! over `[0, ell)`; all exponents `r_i + js` stay below `q` because
//! `r_i ≤ s`. The scalar `1/ell` lives in the prime subfield — `ell | q-1`
//! forces `gcd(ell, p) = 1`.

use crate::cyclo::{BranchPolySpec, CycloSpec};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::permcheck::MapTable;

/// Coefficient vector of length exactly `q`; `coeff(d)` is the coefficient
/// of `x^d` in the canonical reduced form mod `x^q - x`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DensePoly {
    coeffs: Vec<FieldElem>,
}

impl DensePoly {
    pub fn zero(ctx: &FieldCtx) -> DensePoly {
        DensePoly { coeffs: vec![ctx.zero(); ctx.q() as usize] }
    }

    /// The monomial `x`.
    pub fn identity(ctx: &FieldCtx) -> DensePoly {
        let mut poly = DensePoly::zero(ctx);
        poly.coeffs[1] = ctx.one();
        poly
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> &FieldElem {
        &self.coeffs[d]
    }

    /// Degree of the reduced form, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Exponents carrying nonzero coefficients, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, _)| d)
            .collect()
    }
}

/// Expands a monomial-branch spec into its unique reduced polynomial.
pub fn expand(ctx: &FieldCtx, spec: &CycloSpec) -> DensePoly {
    let mut poly = DensePoly::zero(ctx);
    let ell = spec.ell();
    let s = spec.s();
    let inv_ell_log = ctx
        .dlog(&ctx.inv(&ctx.scalar(ell)).expect("ell coprime to p"))
        .expect("nonzero");
    for i in 0..ell {
        for j in 0..ell {
            let d = (spec.r()[i as usize] + j * s) as usize;
            // (1/ell) · A_i · ζ^{-ji} = γ^{log(1/ell) + k_i - j·i·s}
            let c = ctx.pow_gamma(inv_ell_log + spec.k()[i as usize] - j * i * s);
            poly.coeffs[d] = ctx.add(&poly.coeffs[d], &c);
        }
    }
    poly
}

/// Expands a general-branch spec: `(1/ell) Σ_i Σ_j A_i ζ^{-ji} R_i(x) x^{js}`,
/// reduced mod `x^q - x`. Agrees with [`expand`] when every branch is the
/// monomial `x^{r_i}`.
pub fn expand_branches(ctx: &FieldCtx, bspec: &BranchPolySpec) -> DensePoly {
    let ell = bspec.ell();
    let s = ctx.order() / ell;
    let inv_ell = ctx.inv(&ctx.scalar(ell)).expect("ell coprime to p");
    let zeta = ctx.pow_gamma(s);
    let max_deg = bspec
        .branches()
        .iter()
        .map(|b| b.len().saturating_sub(1))
        .max()
        .unwrap_or(0);
    let mut raw = vec![ctx.zero(); max_deg + ((ell - 1) * s) as usize + 1];
    for i in 0..ell {
        let a = &bspec.coefficients()[i as usize];
        if a.is_zero() {
            continue;
        }
        for j in 0..ell {
            let scale = ctx.mul(
                &ctx.mul(&inv_ell, a),
                &ctx.pow(&zeta, -(j * i)).expect("zeta nonzero"),
            );
            let shift = (j * s) as usize;
            for (d, c) in bspec.branches()[i as usize].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let slot = d + shift;
                raw[slot] = ctx.add(&raw[slot], &ctx.mul(&scale, c));
            }
        }
    }
    reduce_mod_xq_x(ctx, &raw)
}

/// Folds an arbitrary coefficient sequence into the canonical form of
/// degree `< q`: exponent `d ≥ 1` goes to `((d-1) mod (q-1)) + 1` (so
/// `x^q ↦ x`, never `x^0`), exponent 0 stays put. The pointwise function
/// on `F_q` is preserved, including at 0.
pub fn reduce_mod_xq_x(ctx: &FieldCtx, raw: &[FieldElem]) -> DensePoly {
    let order = ctx.order() as usize;
    let mut poly = DensePoly::zero(ctx);
    for (d, c) in raw.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let slot = if d == 0 { 0 } else { (d - 1) % order + 1 };
        poly.coeffs[slot] = ctx.add(&poly.coeffs[slot], c);
    }
    poly
}

/// Horner evaluation.
pub fn evaluate(ctx: &FieldCtx, poly: &DensePoly, x: &FieldElem) -> FieldElem {
    let mut acc = ctx.zero();
    for c in poly.coeffs.iter().rev() {
        acc = ctx.add(&ctx.mul(&acc, x), c);
    }
    acc
}

/// Value table of the composition `x ↦ f(g(x))` over all of `F_q`.
pub fn compose_tables(ctx: &FieldCtx, f: &DensePoly, g: &DensePoly) -> MapTable {
    let codes = (0..ctx.q() as usize)
        .map(|pos| {
            let inner = evaluate(ctx, g, &ctx.elem_at_pos(pos));
            ctx.code(&evaluate(ctx, f, &inner)) as u32
        })
        .collect();
    MapTable::from_codes(codes)
}

/// Lagrange interpolation through all `q` points of a value table: the
/// unique polynomial of degree `< q` matching the table pointwise.
/// Quadratic in `q`; an oracle, not a hot path.
pub fn interpolate(ctx: &FieldCtx, table: &MapTable) -> Result<DensePoly> {
    let q = ctx.q() as usize;
    if table.len() != q {
        return Err(Error::LengthMismatch);
    }
    // master product Π_v (x - x_v) = x^q - x, kept generic
    let mut master = vec![ctx.zero(); q + 1];
    master[0] = ctx.one();
    let mut deg = 0;
    for pos in 0..q {
        let node = ctx.elem_at_pos(pos);
        let neg = ctx.neg(&node);
        // multiply by (x - node)
        for d in (0..=deg).rev() {
            let shifted = master[d].clone();
            master[d + 1] = ctx.add(&master[d + 1], &shifted);
            master[d] = ctx.mul(&master[d], &neg);
        }
        deg += 1;
    }

    let mut poly = DensePoly::zero(ctx);
    for pos in 0..q {
        let y = table.entry(ctx, pos);
        if y.is_zero() {
            continue;
        }
        let node = ctx.elem_at_pos(pos);
        // synthetic division of the master product by (x - node)
        let mut quotient = vec![ctx.zero(); q];
        let mut carry = master[q].clone();
        for d in (0..q).rev() {
            quotient[d] = carry.clone();
            carry = ctx.add(&master[d], &ctx.mul(&carry, &node));
        }
        let denom = {
            let mut acc = ctx.zero();
            for c in quotient.iter().rev() {
                acc = ctx.add(&ctx.mul(&acc, &node), c);
            }
            acc
        };
        let scale = ctx.mul(&y, &ctx.inv(&denom)?);
        for d in 0..q {
            if !quotient[d].is_zero() {
                poly.coeffs[d] = ctx.add(&poly.coeffs[d], &ctx.mul(&scale, &quotient[d]));
            }
        }
    }
    Ok(poly)
}

/// Renders terms in strictly descending exponent order: zero coefficients
/// omitted, unit coefficients suppressed on nonconstant terms, multi-term
/// field coefficients parenthesized, `x^1` as `x`. The zero polynomial is
/// `"0"`. Output is deterministic byte-for-byte.
pub fn format_poly(ctx: &FieldCtx, poly: &DensePoly) -> String {
    let mut terms = Vec::new();
    for d in (0..poly.coeffs.len()).rev() {
        let c = &poly.coeffs[d];
        if c.is_zero() {
            continue;
        }
        let cs = ctx.format_elem(c);
        let term = if d == 0 {
            cs
        } else {
            let xs = if d == 1 { "x".to_string() } else { format!("x^{d}") };
            if *c == ctx.one() {
                xs
            } else if cs.contains(" + ") {
                format!("({cs}){xs}")
            } else {
                format!("{cs}{xs}")
            }
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{self, canonicalize};
    use crate::permcheck::{invert, oracle_eval_table};

    fn f25() -> FieldCtx {
        FieldCtx::preset("F25").unwrap()
    }

    #[test]
    fn expand_examples() {
        let f = f25();
        let spec = canonicalize(&f, 2, &[1, 7], &[0, 0]).unwrap();
        assert_eq!(format_poly(&f, &expand(&f, &spec)), "2x^19 + 3x^13 + 3x^7 + 3x");
        let identity = canonicalize(&f, 1, &[1], &[0]).unwrap();
        assert_eq!(format_poly(&f, &expand(&f, &identity)), "x");
    }

    #[test]
    fn expand_support_lies_on_the_exponent_grid() {
        let f = f25();
        let spec = canonicalize(&f, 2, &[5, 11], &[3, 8]).unwrap();
        let poly = expand(&f, &spec);
        assert!(poly.degree().unwrap() < f.q() as usize);
        let grid: Vec<usize> = (0..2)
            .flat_map(|i| (0..2).map(move |j| (spec.r()[i as usize] + j * spec.s()) as usize))
            .collect();
        assert!(poly.support().iter().all(|d| grid.contains(d)));
    }

    #[test]
    fn expand_matches_pointwise_map() {
        let f = f25();
        for (r, k) in [([1, 7], [0, 2]), ([5, 5], [1, 19]), ([2, 9], [7, 7])] {
            let spec = canonicalize(&f, 2, &r, &k).unwrap();
            let poly = expand(&f, &spec);
            for x in f.elements() {
                assert_eq!(evaluate(&f, &poly, &x), cyclo::apply_map(&f, &spec, &x));
            }
        }
    }

    #[test]
    fn branch_expansion_specializes_to_monomials() {
        let f = f25();
        let spec = canonicalize(&f, 2, &[1, 7], &[0, 2]).unwrap();
        let monomial = |r: i64| {
            let mut b = vec![f.zero(); r as usize + 1];
            b[r as usize] = f.one();
            b
        };
        let bspec = BranchPolySpec::new(
            &f,
            2,
            vec![f.pow_gamma(0), f.pow_gamma(2)],
            vec![monomial(1), monomial(7)],
        )
        .unwrap();
        assert_eq!(expand_branches(&f, &bspec), expand(&f, &spec));
    }

    #[test]
    fn branch_expansion_single_coset_reduces_branch() {
        // ell = 1 with A_0 = 1 is just R_0 reduced mod x^q - x
        let f = f25();
        let mut branch = vec![f.zero(); 30];
        branch[0] = f.scalar(3);
        branch[26] = f.scalar(2);
        branch[29] = f.one();
        let bspec = BranchPolySpec::new(&f, 1, vec![f.one()], vec![branch.clone()]).unwrap();
        assert_eq!(expand_branches(&f, &bspec), reduce_mod_xq_x(&f, &branch));
    }

    #[test]
    fn branch_expansion_matches_pointwise_map() {
        let f = f25();
        let x_branch = vec![f.zero(), f.one()];
        let bspec = BranchPolySpec::new(
            &f,
            2,
            vec![f.one(), f.gamma().clone()],
            vec![x_branch.clone(), x_branch],
        )
        .unwrap();
        let spec = canonicalize(&f, 2, &[1, 1], &[0, 1]).unwrap();
        let poly = expand_branches(&f, &bspec);
        for x in f.elements() {
            assert_eq!(evaluate(&f, &poly, &x), cyclo::apply_map(&f, &spec, &x));
        }
    }

    #[test]
    fn exponent_folding() {
        let f = f25();
        let q = f.q() as usize;
        let mut raw = vec![f.zero(); q + 1];
        raw[q] = f.one();
        let poly = reduce_mod_xq_x(&f, &raw);
        assert_eq!(format_poly(&f, &poly), "x");

        let mut raw = vec![f.zero(); 2 * q];
        raw[2 * q - 1] = f.one();
        assert_eq!(format_poly(&f, &reduce_mod_xq_x(&f, &raw)), "x");

        let raw = vec![f.scalar(3)];
        assert_eq!(format_poly(&f, &reduce_mod_xq_x(&f, &raw)), "3");
    }

    #[test]
    fn folding_preserves_values() {
        let f = FieldCtx::new(3, 2, &[2, 1, 1], &[0, 1]).unwrap();
        let mut raw = vec![f.zero(); 25];
        raw[0] = f.scalar(2);
        raw[9] = f.one();
        raw[17] = f.elem(&[1, 1]).unwrap();
        raw[24] = f.scalar(2);
        let poly = reduce_mod_xq_x(&f, &raw);
        for x in f.elements() {
            let mut direct = f.zero();
            for (d, c) in raw.iter().enumerate() {
                direct = f.add(&direct, &f.mul(c, &f.pow(&x, d as i64).unwrap()));
            }
            assert_eq!(evaluate(&f, &poly, &x), direct);
        }
    }

    #[test]
    fn evaluate_examples() {
        let f = f25();
        let identity = expand(&f, &canonicalize(&f, 1, &[1], &[0]).unwrap());
        for x in f.elements() {
            assert_eq!(evaluate(&f, &identity, &x), x);
        }
        let spec = canonicalize(&f, 2, &[1, 7], &[0, 0]).unwrap();
        assert!(evaluate(&f, &expand(&f, &spec), &f.zero()).is_zero());
    }

    #[test]
    fn composition_with_inverse_is_identity() {
        let f = f25();
        for (r, k) in [([1, 7], [0, 2]), ([1, 7], [1, 1]), ([5, 11], [3, 8])] {
            let spec = canonicalize(&f, 2, &r, &k).unwrap();
            let fp = expand(&f, &spec);
            let gp = expand(&f, &invert(&f, &spec).unwrap());
            assert!(compose_tables(&f, &fp, &gp).is_identity(&f));
            assert!(compose_tables(&f, &gp, &fp).is_identity(&f));
        }
        let id = DensePoly::identity(&f);
        assert!(compose_tables(&f, &id, &id).is_identity(&f));
    }

    #[test]
    fn interpolation_examples() {
        let f = f25();
        let identity = canonicalize(&f, 1, &[1], &[0]).unwrap();
        let t = oracle_eval_table(&f, &identity);
        assert_eq!(format_poly(&f, &interpolate(&f, &t).unwrap()), "x");

        let zero_table = compose_tables(&f, &DensePoly::zero(&f), &DensePoly::zero(&f));
        assert_eq!(format_poly(&f, &interpolate(&f, &zero_table).unwrap()), "0");

        let spec = canonicalize(&f, 2, &[1, 7], &[0, 2]).unwrap();
        let t = oracle_eval_table(&f, &spec);
        assert_eq!(
            format_poly(&f, &interpolate(&f, &t).unwrap()),
            "(2a + 1)x^19 + 3x^13 + (3a + 4)x^7 + 3x"
        );
    }

    #[test]
    fn interpolation_roundtrips_expansion() {
        let f = f25();
        for (r, k) in [([1, 7], [0, 2]), ([5, 5], [1, 19]), ([3, 8], [2, 2])] {
            let spec = canonicalize(&f, 2, &r, &k).unwrap();
            let poly = expand(&f, &spec);
            let table = oracle_eval_table(&f, &spec);
            assert_eq!(interpolate(&f, &table).unwrap(), poly);
        }
    }

    #[test]
    fn format_examples() {
        let f = f25();
        let spec = canonicalize(&f, 2, &[1, 7], &[0, 2]).unwrap();
        assert_eq!(
            format_poly(&f, &expand(&f, &spec)),
            "(2a + 1)x^19 + 3x^13 + (3a + 4)x^7 + 3x"
        );
        assert_eq!(format_poly(&f, &DensePoly::zero(&f)), "0");
        assert_eq!(format_poly(&f, &DensePoly::identity(&f)), "x");
        // single-symbol coefficients attach without parentheses
        let spec = canonicalize(&f, 2, &[1, 7], &[1, 1]).unwrap();
        assert_eq!(
            format_poly(&f, &expand(&f, &spec)),
            "2ax^19 + 3ax^13 + 3ax^7 + 3ax"
        );
    }
}
