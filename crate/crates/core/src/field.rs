//! Small finite fields `F_q`, `q = p^m`, with exact arithmetic backed by
//! exp/log tables over a fixed primitive element `γ`.
//!
//! Elements are canonical coefficient vectors over `F_p` of length `m`
//! (little-endian in powers of the generator symbol `a`). Multiplication and
//! inversion go through the discrete-log tables; addition is coefficientwise.
//! The tables are built by repeated schoolbook multiply-and-reduce, and the
//! distinctness of the `q-1` powers certifies in one pass both that `γ` is
//! primitive and that the quotient ring is a field (a reducible modulus
//! yields a unit group of order `< q-1`, hence a collision).

use crate::error::{Error, Result};
use std::fmt;

/// Default cap on `q`: exp/log tables are `O(q)` memory.
pub const DEFAULT_TABLE_BUDGET: i64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// An element of `F_q` in canonical reduced form. Equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem {
    coeffs: Vec<i64>,
}

impl FieldElem {
    /// Coefficients of `1, a, a^2, …, a^{m-1}`, each in `[0, p-1]`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Immutable context for one finite field: modulus, primitive element,
/// exp/log tables. Safe to share across threads; all operations are pure.
pub struct FieldCtx {
    p: i64,
    m: usize,
    q: i64,
    modulus: Vec<i64>,
    gamma: FieldElem,
    /// `exp[e]` = code of `γ^e`, for `e` in `[0, q-2]`.
    exp: Vec<u32>,
    /// `log[code]` = discrete log, `NO_LOG` at the zero element.
    log: Vec<u32>,
}

impl FieldCtx {
    /// Builds `F_{p^m}` from a monic degree-`m` modulus (little-endian
    /// coefficients, length `m+1`) and a primitive element `gamma`
    /// (little-endian coefficients, length at most `m`).
    pub fn new(p: i64, m: usize, modulus: &[i64], gamma: &[i64]) -> Result<FieldCtx> {
        Self::with_budget(p, m, modulus, gamma, DEFAULT_TABLE_BUDGET)
    }

    /// Like [`FieldCtx::new`] with an explicit cap on `q`.
    pub fn with_budget(
        p: i64,
        m: usize,
        modulus: &[i64],
        gamma: &[i64],
        budget: i64,
    ) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 || modulus.len() != m + 1 {
            return Err(Error::NonMonicModulus);
        }
        let modulus: Vec<i64> = modulus.iter().map(|c| c.rem_euclid(p)).collect();
        if modulus[m] != 1 {
            return Err(Error::NonMonicModulus);
        }
        let q = checked_pow(p, m, budget)?;

        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            gamma: FieldElem { coeffs: vec![0; m] },
            exp: Vec::with_capacity((q - 1) as usize),
            log: vec![NO_LOG; q as usize],
        };
        let gamma = ctx.elem(gamma)?;
        if gamma.is_zero() {
            return Err(Error::GammaNotPrimitive);
        }
        ctx.gamma = gamma.clone();

        // Walk γ^0, γ^1, …: any repeated or zero code before q-1 steps means
        // γ is not primitive (or the quotient is not a field).
        let mut cur = ctx.one();
        for e in 0..(q - 1) as u32 {
            let code = ctx.code(&cur);
            if code == 0 || ctx.log[code] != NO_LOG {
                return Err(Error::GammaNotPrimitive);
            }
            ctx.log[code] = e;
            ctx.exp.push(code as u32);
            cur = ctx.mul_schoolbook(&cur, &gamma);
        }
        if cur != ctx.one() {
            return Err(Error::GammaNotPrimitive);
        }
        Ok(ctx)
    }

    /// Built-in presets: `F25` is `F_5[a]/(a² + 4a + 2)` and `F64` is
    /// `F_2[a]/(a⁶ + a⁴ + a³ + a + 1)`, both with `γ = a`.
    pub fn preset(name: &str) -> Option<FieldCtx> {
        match name {
            "F25" => Some(FieldCtx::new(5, 2, &[2, 4, 1], &[0, 1]).expect("F25 preset")),
            "F64" => {
                Some(FieldCtx::new(2, 6, &[1, 1, 0, 1, 1, 0, 1], &[0, 1, 0, 0, 0, 0])
                    .expect("F64 preset"))
            }
            _ => None,
        }
    }

    /// Parses one field-preset line: `p m modulus_coeffs_csv gamma_coeffs_csv`,
    /// e.g. `5 2 2,4,1 0,1`.
    pub fn parse_field_line(line: &str) -> Result<FieldCtx> {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected `p m modulus_csv gamma_csv`, got {:?}",
                line
            )));
        }
        let p = parse_int(parts[0])?;
        let m = parse_int(parts[1])? as usize;
        let modulus = parse_csv(parts[2])?;
        let gamma = parse_csv(parts[3])?;
        FieldCtx::new(p, m, &modulus, &gamma)
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Order of the multiplicative group, `q - 1`.
    pub fn order(&self) -> i64 {
        self.q - 1
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    pub fn gamma(&self) -> &FieldElem {
        &self.gamma
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![0; self.m] }
    }

    pub fn one(&self) -> FieldElem {
        self.scalar(1)
    }

    /// The prime-subfield constant `c mod p`.
    pub fn scalar(&self, c: i64) -> FieldElem {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = c.rem_euclid(self.p);
        FieldElem { coeffs }
    }

    /// Canonicalizes a coefficient slice (length at most `m`) into an element.
    pub fn elem(&self, coeffs: &[i64]) -> Result<FieldElem> {
        if coeffs.len() > self.m {
            return Err(Error::LengthMismatch);
        }
        let mut c = vec![0; self.m];
        for (i, &v) in coeffs.iter().enumerate() {
            c[i] = v.rem_euclid(self.p);
        }
        Ok(FieldElem { coeffs: c })
    }

    pub fn add(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(a, b)| (a + b) % self.p)
            .collect();
        FieldElem { coeffs }
    }

    pub fn neg(&self, x: &FieldElem) -> FieldElem {
        let coeffs = x.coeffs.iter().map(|a| (-a).rem_euclid(self.p)).collect();
        FieldElem { coeffs }
    }

    pub fn sub(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        self.add(x, &self.neg(y))
    }

    /// Table multiplication: log addition mod `q-1` when both factors are
    /// nonzero, zero otherwise.
    pub fn mul(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        if x.is_zero() || y.is_zero() {
            return self.zero();
        }
        let e = (self.log_of(x) + self.log_of(y)) % self.order();
        self.elem_from_code(self.exp[e as usize])
    }

    pub fn inv(&self, x: &FieldElem) -> Result<FieldElem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_gamma(-self.log_of(x)))
    }

    /// `x^e` with any integer exponent; negative exponents invert.
    pub fn pow(&self, x: &FieldElem, e: i64) -> Result<FieldElem> {
        if x.is_zero() {
            return match e {
                0 => Ok(self.one()),
                _ if e > 0 => Ok(self.zero()),
                _ => Err(Error::DivisionByZero),
            };
        }
        Ok(self.pow_gamma(self.log_of(x) * e))
    }

    /// `γ^e` for any integer `e`, reduced mod `q-1`.
    pub fn pow_gamma(&self, e: i64) -> FieldElem {
        let e = e.rem_euclid(self.order());
        self.elem_from_code(self.exp[e as usize])
    }

    /// Discrete logarithm `ind_γ(x)`, canonical in `[0, q-2]`.
    pub fn dlog(&self, x: &FieldElem) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::LogOfZero);
        }
        Ok(self.log_of(x))
    }

    fn log_of(&self, x: &FieldElem) -> i64 {
        self.log[self.code(x)] as i64
    }

    /// Direct schoolbook polynomial product reduced by the modulus. Used to
    /// build the tables; also serves as the independent arithmetic route the
    /// table path is checked against.
    pub fn mul_schoolbook(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let m = self.m;
        let mut prod = vec![0i64; 2 * m - 1];
        for (i, &xi) in x.coeffs.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % self.p;
            }
        }
        for d in (m..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for t in 0..=m {
                prod[d - m + t] = (prod[d - m + t] - c * self.modulus[t]).rem_euclid(self.p);
            }
        }
        prod.truncate(m);
        FieldElem { coeffs: prod }
    }

    /// Dense integer code of an element: `Σ c_i p^i`, a bijection onto `[0, q)`.
    pub fn code(&self, x: &FieldElem) -> usize {
        let mut code = 0i64;
        for &c in x.coeffs.iter().rev() {
            code = code * self.p + c;
        }
        code as usize
    }

    pub fn elem_from_code(&self, code: u32) -> FieldElem {
        let mut c = code as i64;
        let mut coeffs = vec![0; self.m];
        for slot in coeffs.iter_mut() {
            *slot = c % self.p;
            c /= self.p;
        }
        FieldElem { coeffs }
    }

    /// Position of `x` in the canonical enumeration `0, γ^0, …, γ^{q-2}`.
    pub fn canonical_pos(&self, x: &FieldElem) -> usize {
        if x.is_zero() {
            0
        } else {
            1 + self.log_of(x) as usize
        }
    }

    pub fn elem_at_pos(&self, pos: usize) -> FieldElem {
        if pos == 0 {
            self.zero()
        } else {
            self.elem_from_code(self.exp[pos - 1])
        }
    }

    pub(crate) fn code_at_pos(&self, pos: usize) -> u32 {
        if pos == 0 {
            0
        } else {
            self.exp[pos - 1]
        }
    }

    pub(crate) fn pos_of_code(&self, code: u32) -> usize {
        if code == 0 {
            0
        } else {
            1 + self.log[code as usize] as usize
        }
    }

    /// All field elements in canonical enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q as usize).map(|pos| self.elem_at_pos(pos))
    }

    /// Renders an element in descending powers of the generator symbol,
    /// e.g. `2a + 1`, `a^5 + a`, `3`, `0`. Unit coefficients on powers of
    /// `a` are suppressed.
    pub fn format_elem(&self, x: &FieldElem) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for d in (0..self.m).rev() {
            let c = x.coeffs[d];
            if c == 0 {
                continue;
            }
            let term = match d {
                0 => c.to_string(),
                1 if c == 1 => "a".to_string(),
                1 => format!("{c}a"),
                _ if c == 1 => format!("a^{d}"),
                _ => format!("{c}a^{d}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_pow(p: i64, m: usize, budget: i64) -> Result<i64> {
    let mut q: i64 = 1;
    for _ in 0..m {
        q = q
            .checked_mul(p)
            .filter(|&q| q <= budget)
            .ok_or(Error::FieldTooLarge { q: i64::MAX, budget })?;
    }
    if q > budget {
        return Err(Error::FieldTooLarge { q, budget });
    }
    Ok(q)
}

fn parse_int(s: &str) -> Result<i64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

fn parse_csv(s: &str) -> Result<Vec<i64>> {
    s.split(',').map(parse_int).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f25() -> FieldCtx {
        FieldCtx::preset("F25").unwrap()
    }

    fn f9() -> FieldCtx {
        FieldCtx::new(3, 2, &[2, 1, 1], &[0, 1]).unwrap()
    }

    #[test]
    fn presets_build() {
        let f = f25();
        assert_eq!((f.p(), f.m(), f.q()), (5, 2, 25));
        let f = FieldCtx::preset("F64").unwrap();
        assert_eq!((f.p(), f.m(), f.q()), (2, 6, 64));
        assert!(FieldCtx::preset("F49").is_none());
    }

    #[test]
    fn gamma_must_be_primitive() {
        // the unit 1 has order 1
        assert_eq!(
            FieldCtx::new(5, 2, &[2, 4, 1], &[1]).unwrap_err(),
            Error::GammaNotPrimitive
        );
        // 4 = -1 has order 2
        assert_eq!(
            FieldCtx::new(5, 2, &[2, 4, 1], &[4]).unwrap_err(),
            Error::GammaNotPrimitive
        );
        // reducible modulus x^2 - 1 = (x-1)(x+1) shows up the same way
        assert_eq!(
            FieldCtx::new(5, 2, &[4, 0, 1], &[0, 1]).unwrap_err(),
            Error::GammaNotPrimitive
        );
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            FieldCtx::new(4, 2, &[2, 4, 1], &[0, 1]).unwrap_err(),
            Error::NotPrime(4)
        );
        assert_eq!(
            FieldCtx::new(5, 2, &[2, 4, 2], &[0, 1]).unwrap_err(),
            Error::NonMonicModulus
        );
        assert_eq!(
            FieldCtx::new(5, 2, &[2, 4], &[0, 1]).unwrap_err(),
            Error::NonMonicModulus
        );
        assert!(matches!(
            FieldCtx::with_budget(5, 2, &[2, 4, 1], &[0, 1], 24).unwrap_err(),
            Error::FieldTooLarge { .. }
        ));
    }

    #[test]
    fn exp_log_invariants() {
        for f in [f25(), f9(), FieldCtx::preset("F64").unwrap()] {
            let order = f.order();
            // q-1 pairwise distinct nonzero powers, γ^0 = 1, γ^{q-1} = 1
            let mut seen = std::collections::HashSet::new();
            for e in 0..order {
                let x = f.pow_gamma(e);
                assert!(!x.is_zero());
                assert!(seen.insert(f.code(&x)));
                assert_eq!(f.dlog(&x).unwrap(), e);
            }
            assert_eq!(f.pow_gamma(0), f.one());
            assert_eq!(f.pow_gamma(order), f.one());
        }
    }

    #[test]
    fn a_squared_reduces() {
        let f = f25();
        let a = f.elem(&[0, 1]).unwrap();
        // a^2 = a + 3 modulo a^2 + 4a + 2 over F_5
        assert_eq!(f.mul(&a, &a), f.elem(&[3, 1]).unwrap());
    }

    #[test]
    fn additive_and_multiplicative_inverses() {
        let f = f25();
        for x in f.elements() {
            assert!(f.add(&x, &f.neg(&x)).is_zero());
            if !x.is_zero() {
                assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
            }
        }
        assert_eq!(f.inv(&f.zero()).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn pow_gamma_examples() {
        let f = f25();
        assert_eq!(f.pow_gamma(0), f.one());
        assert_eq!(f.pow_gamma(24), f.one());
        assert_eq!(f.pow_gamma(1), f.elem(&[0, 1]).unwrap());
        assert_eq!(f.pow_gamma(-1), f.pow_gamma(23));
    }

    #[test]
    fn dlog_examples() {
        let f = f25();
        assert_eq!(f.dlog(&f.one()).unwrap(), 0);
        assert_eq!(f.dlog(&f.elem(&[0, 1]).unwrap()).unwrap(), 1);
        // 4 = -1 has order 2, so its index is (q-1)/2 = 12
        assert_eq!(f.dlog(&f.scalar(4)).unwrap(), 12);
        assert_eq!(f.dlog(&f.zero()).unwrap_err(), Error::LogOfZero);
    }

    #[test]
    fn dlog_is_multiplicative() {
        let f = f9();
        let order = f.order();
        for x in f.elements().filter(|x| !x.is_zero()) {
            for y in f.elements().filter(|y| !y.is_zero()) {
                let lhs = f.dlog(&f.mul(&x, &y)).unwrap();
                let rhs = (f.dlog(&x).unwrap() + f.dlog(&y).unwrap()) % order;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn table_mul_matches_schoolbook_on_all_pairs() {
        for f in [f25(), f9()] {
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(f.mul(&x, &y), f.mul_schoolbook(&x, &y));
                }
            }
        }
    }

    #[test]
    fn ring_axioms_exhaustive() {
        // associativity and distributivity over all triples of F_9 and F_25
        for f in [f9(), f25()] {
            let els: Vec<FieldElem> = f.elements().collect();
            for x in &els {
                for y in &els {
                    for z in &els {
                        assert_eq!(f.mul(&f.mul(x, y), z), f.mul(x, &f.mul(y, z)));
                        assert_eq!(
                            f.mul(x, &f.add(y, z)),
                            f.add(&f.mul(x, y), &f.mul(x, z))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn format_elem_examples() {
        let f = f25();
        assert_eq!(f.format_elem(&f.elem(&[1, 2]).unwrap()), "2a + 1");
        assert_eq!(f.format_elem(&f.zero()), "0");
        assert_eq!(f.format_elem(&f.scalar(3)), "3");
        assert_eq!(f.format_elem(&f.elem(&[0, 1]).unwrap()), "a");
        let f64 = FieldCtx::preset("F64").unwrap();
        let x = f64.elem(&[0, 1, 0, 0, 0, 1]).unwrap();
        assert_eq!(f64.format_elem(&x), "a^5 + a");
    }

    #[test]
    fn preset_line_roundtrip() {
        let f = FieldCtx::parse_field_line("5 2 2,4,1 0,1").unwrap();
        assert_eq!(f.q(), 25);
        assert_eq!(f.gamma(), &f.elem(&[0, 1]).unwrap());
        assert!(FieldCtx::parse_field_line("5 2 2,4,1").is_err());
        assert!(FieldCtx::parse_field_line("5 2 2,x,1 0,1").is_err());
    }

    #[test]
    fn degree_one_extension_is_prime_field() {
        let f = FieldCtx::new(3, 1, &[0, 1], &[2]).unwrap();
        assert_eq!(f.q(), 3);
        assert_eq!(f.dlog(&f.scalar(2)).unwrap(), 1);
        assert_eq!(f.mul(&f.scalar(2), &f.scalar(2)), f.one());
    }

    #[test]
    fn canonical_positions_roundtrip() {
        let f = f9();
        for pos in 0..f.q() as usize {
            let x = f.elem_at_pos(pos);
            assert_eq!(f.canonical_pos(&x), pos);
        }
    }
}
