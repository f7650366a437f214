//! Functions on `V = GF(q)^4` as reduced polynomials in `x0..x3`.
//!
//! Every function `V -> GF(q)` has a unique polynomial representative in
//! which each variable has degree at most `q - 1`; that is the form a
//! [`PolyFn`] is kept in. Characteristic functions of points and lines are
//! built as products of factors `1 - f^(q-1)` over linear forms `f` cutting
//! the subspace out.

mod digits;
mod echelon;
mod kernel;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::{FieldElem, FieldSpec};
use crate::geometry::{Quadrangle, Vec4};
use crate::gf2::BitVec;

pub use digits::{digitize_monomial, in_span_beta, BetaBasis, DigitTuple, BETA_DIGITS};
pub use echelon::FqEchelon;
pub use kernel::{kernel_normal_form, NormalForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("q = {0} is not a power of two")]
    NotBinary(u32),
    #[error("exponent {exponent} of {monomial} exceeds q - 1 = {max}")]
    ExponentTooLarge { monomial: Monomial, exponent: u32, max: u32 },
    #[error("vector is not in ker(restriction) ∩ C(P,L)")]
    NotInKernel,
    #[error("normal form violated: {0}")]
    NormalFormViolation(String),
}

/// Exponent vector of `x0^e0 x1^e1 x2^e2 x3^e3`; ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn var(i: usize) -> Monomial {
        let mut e = [0; 4];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([0, 1, 2, 3].map(|i| self.0[i] + other.0[i]))
    }

    /// Position in the lexicographic order of reduced monomials.
    pub fn dense_index(&self, q: u32) -> usize {
        self.0.iter().fold(0usize, |acc, &e| acc * q as usize + e as usize)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            match e {
                1 => write!(f, "x{i}")?,
                _ => write!(f, "x{i}^{e}")?,
            }
        }
        Ok(())
    }
}

/// Reduces one exponent using `x^q = x`.
#[inline]
pub fn reduce_exponent(e: u32, q: u32) -> u32 {
    if e < q {
        e
    } else {
        (e - 1) % (q - 1) + 1
    }
}

/// A polynomial with nonzero coefficients in GF(q).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyFn {
    terms: BTreeMap<Monomial, FieldElem>,
}

impl PolyFn {
    pub fn zero() -> Self {
        PolyFn::default()
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(FieldElem::ONE)
    }

    /// `c * m`, taken as given (exponents are not reduced).
    pub fn monomial(m: Monomial, c: FieldElem) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        PolyFn { terms }
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial::var(i), FieldElem::ONE)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> PolyFn {
        PolyFn { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (*m, *c)).collect() }
    }

    fn add_term(&mut self, field: &FieldSpec, m: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert(FieldElem::ZERO);
        *entry = field.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }
}

impl fmt::Display for PolyFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (c.value(), m.is_constant()) {
                (1, _) => write!(f, "{m}")?,
                (_, true) => write!(f, "{c}")?,
                _ => write!(f, "{c}*{m}")?,
            }
        }
        Ok(())
    }
}

/// Arithmetic on [`PolyFn`] modulo the ideal `(x_i^q - x_i)`.
#[derive(Debug, Clone)]
pub struct PolyRing {
    field: FieldSpec,
}

impl PolyRing {
    pub fn new(field: FieldSpec) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn reduce_monomial(&self, m: &Monomial) -> Monomial {
        Monomial(m.0.map(|e| reduce_exponent(e, self.q())))
    }

    /// The reduced representative: exponents folded by `x^q = x`, like
    /// terms merged.
    pub fn reduce(&self, f: &PolyFn) -> PolyFn {
        let mut out = PolyFn::zero();
        for (m, c) in f.terms() {
            out.add_term(&self.field, self.reduce_monomial(m), *c);
        }
        out
    }

    pub fn add(&self, a: &PolyFn, b: &PolyFn) -> PolyFn {
        let mut out = a.clone();
        for (m, c) in b.terms() {
            out.add_term(&self.field, *m, *c);
        }
        out
    }

    pub fn sub(&self, a: &PolyFn, b: &PolyFn) -> PolyFn {
        self.add(a, &self.scale(&b.clone(), self.field.neg(FieldElem::ONE)))
    }

    pub fn scale(&self, a: &PolyFn, c: FieldElem) -> PolyFn {
        let mut out = PolyFn::zero();
        for (m, x) in a.terms() {
            out.add_term(&self.field, *m, self.field.mul(*x, c));
        }
        out
    }

    /// Product, reduced.
    pub fn mul(&self, a: &PolyFn, b: &PolyFn) -> PolyFn {
        let mut out = PolyFn::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                out.add_term(&self.field, self.reduce_monomial(&ma.mul(mb)), self.field.mul(*ca, *cb));
            }
        }
        out
    }

    pub fn pow(&self, a: &PolyFn, mut n: u64) -> PolyFn {
        let mut result = PolyFn::one();
        let mut base = self.reduce(a);
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(&result, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// `sum c * prod v_i^e_i`, with `0^0 = 1`.
    pub fn evaluate(&self, f: &PolyFn, v: &Vec4) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        for (m, c) in f.terms() {
            let mut term = *c;
            for i in 0..4 {
                term = self.field.mul(term, self.field.pow(v[i], m.0[i] as u64));
            }
            acc = self.field.add(acc, term);
        }
        acc
    }

    /// `sum coeffs_i x_i`.
    pub fn linear_form(&self, coeffs: &Vec4) -> PolyFn {
        let mut out = PolyFn::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            out.add_term(&self.field, Monomial::var(i), c);
        }
        out
    }

    /// `1 - f^(q-1)`: one where the linear form vanishes, zero elsewhere.
    pub fn zero_indicator(&self, form: &PolyFn) -> PolyFn {
        let power = self.pow(form, self.q() as u64 - 1);
        self.sub(&PolyFn::one(), &power)
    }

    /// Characteristic polynomial of a line: the product of the zero
    /// indicators of the two forms `x -> (b_i, x)` over its basis.
    pub fn delta_line(&self, quad: &Quadrangle, l: usize) -> PolyFn {
        let space = quad.space();
        let [r0, r1] = quad.lines()[l].basis;
        let a = self.linear_form(&space.dual_form(&r0));
        let b = self.linear_form(&space.dual_form(&r1));
        self.mul(&self.zero_indicator(&a), &self.zero_indicator(&b))
    }

    /// Characteristic polynomial of a point: zero indicators of three forms
    /// spanning its annihilator.
    pub fn delta_point(&self, quad: &Quadrangle, p: usize) -> PolyFn {
        let v = quad.points()[p].coords;
        let lead = v.iter().position(|c| !c.is_zero()).expect("nonzero point");
        let mut out = PolyFn::one();
        for j in (0..4).filter(|&j| j != lead) {
            // x_j - v_j x_lead, with v_lead = 1
            let mut coeffs = [FieldElem::ZERO; 4];
            coeffs[j] = FieldElem::ONE;
            coeffs[lead] = self.field.neg(v[j]);
            out = self.mul(&out, &self.zero_indicator(&self.linear_form(&coeffs)));
        }
        out
    }

    /// Lifts a 0/1 function on the points to the sum of the point
    /// characteristic polynomials over its support.
    pub fn interpolate(&self, quad: &Quadrangle, c: &BitVec) -> PolyFn {
        c.ones_iter().fold(PolyFn::zero(), |acc, p| self.add(&acc, &self.delta_point(quad, p)))
    }

    /// Coefficients in the dense lexicographic monomial order (`q^4` slots).
    pub fn to_dense(&self, f: &PolyFn) -> Vec<FieldElem> {
        let q = self.q();
        let mut out = vec![FieldElem::ZERO; (q as usize).pow(4)];
        for (m, c) in f.terms() {
            out[m.dense_index(q)] = *c;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(q: u64) -> PolyRing {
        PolyRing::new(FieldSpec::with_order(q).unwrap())
    }

    #[test]
    fn reduction_examples() {
        let r = ring(2);
        let x3sq = PolyFn::monomial(Monomial([0, 0, 0, 2]), FieldElem::ONE);
        assert_eq!(r.reduce(&x3sq), PolyFn::var(3));
        assert_eq!(r.reduce(&PolyFn::one()), PolyFn::one());
        let r = ring(4);
        let x1_7 = PolyFn::monomial(Monomial([0, 7, 0, 0]), FieldElem::ONE);
        assert_eq!(r.reduce(&x1_7), PolyFn::var(1));
        assert_eq!(reduce_exponent(4, 4), 1);
        assert_eq!(reduce_exponent(6, 4), 3);
        assert_eq!(reduce_exponent(3, 4), 3);
    }

    #[test]
    fn reduction_preserves_values() {
        let r = ring(4);
        let f = r.field().clone();
        let x1_7 = PolyFn::monomial(Monomial([0, 7, 0, 0]), FieldElem::ONE);
        for a in f.elements() {
            let v = [FieldElem::ZERO, a, FieldElem::ZERO, FieldElem::ZERO];
            assert_eq!(r.evaluate(&x1_7, &v), r.evaluate(&r.reduce(&x1_7), &v));
        }
    }

    #[test]
    fn ell0_characteristic_polynomial() {
        for q in [2u64, 4, 8] {
            let g = Quadrangle::new(FieldSpec::with_order(q).unwrap());
            let r = PolyRing::new(g.field().clone());
            let qm1 = q as u32 - 1;
            let expect = r.mul(
                &r.add(&PolyFn::one(), &PolyFn::monomial(Monomial([0, 0, qm1, 0]), FieldElem::ONE)),
                &r.add(&PolyFn::one(), &PolyFn::monomial(Monomial([0, 0, 0, qm1]), FieldElem::ONE)),
            );
            assert_eq!(r.delta_line(&g, g.ell0()), expect, "q = {q}");
            let e = |i: usize| {
                let mut v = [FieldElem::ZERO; 4];
                v[i] = FieldElem::ONE;
                v
            };
            assert_eq!(r.evaluate(&expect, &e(0)), FieldElem::ONE);
            assert_eq!(r.evaluate(&expect, &e(2)), FieldElem::ZERO);
        }
    }

    #[test]
    fn display() {
        let r = ring(4);
        let f = r.add(&PolyFn::var(0), &PolyFn::monomial(Monomial([0, 2, 0, 1]), r.field().elem(3)));
        assert_eq!(f.to_string(), "3*x1^2*x3 + x0");
        assert_eq!(PolyFn::zero().to_string(), "0");
    }
}
