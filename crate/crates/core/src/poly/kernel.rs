//! Normal form of codewords supported off `P1`.
//!
//! A word of `C(P,L)` vanishing on `P1` is supported on the perp of `p0`,
//! i.e. on `x3 = 0`. Its interpolant factors as `(1 + x3^(q-1)) h` with `h`
//! free of `x3`; `h` is moreover built from monomials whose digits are all
//! `x1` or `x2`, apart from the constant.

use crate::field::FieldElem;
use crate::geometry::Quadrangle;
use crate::gf2::{BitVec, Subspace};

use super::digits::digitize_monomial;
use super::{Monomial, PolyError, PolyFn, PolyRing};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    /// Interpolant of the codeword.
    pub r: PolyFn,
    /// The `x3`-free cofactor.
    pub h: PolyFn,
}

/// Computes and validates the normal form of `c`, which must lie in `code`
/// (taken to be `C(P,L)`) and vanish on `P1`.
pub fn kernel_normal_form(
    ring: &PolyRing,
    quad: &Quadrangle,
    code: &Subspace,
    c: &BitVec,
) -> Result<NormalForm, PolyError> {
    let p1 = quad.restricted_sets().p1;
    if !code.contains(c) || p1.iter().any(|&p| c.get(p)) {
        return Err(PolyError::NotInKernel);
    }
    let q = ring.q();
    let r = ring.interpolate(quad, c);
    let h = r.filter_terms(|m| m.0[3] == 0);
    let factor = ring.add(&PolyFn::one(), &PolyFn::monomial(Monomial([0, 0, 0, q - 1]), FieldElem::ONE));
    if ring.mul(&factor, &h) != r {
        return Err(PolyError::NormalFormViolation(format!("interpolant {r} is not (1 + x3^{}) * ({h})", q - 1)));
    }
    for m in h.monomials().filter(|m| !m.is_constant()) {
        let digits = digitize_monomial(ring, m)?;
        if digits.degrees().iter().any(|&d| d != 1) {
            return Err(PolyError::NormalFormViolation(format!("monomial {m} of h has a digit of degree != 1")));
        }
        let allowed = [Monomial::var(1), Monomial::var(2)];
        if !digits.digits.iter().all(|d| allowed.contains(d)) {
            return Err(PolyError::NormalFormViolation(format!("monomial {m} of h has a digit outside {{x1, x2}}")));
        }
    }
    Ok(NormalForm { r, h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::incidence::full_code;

    #[test]
    fn ell0_normal_form() {
        for q in [2u64, 4] {
            let g = Quadrangle::new(FieldSpec::with_order(q).unwrap());
            let ring = PolyRing::new(g.field().clone());
            let code = full_code(&g);
            let nf = kernel_normal_form(&ring, &g, &code, &g.line_vector(g.ell0())).unwrap();
            let expect = ring.add(&PolyFn::one(), &PolyFn::monomial(Monomial([0, 0, q as u32 - 1, 0]), FieldElem::ONE));
            assert_eq!(nf.h, expect);
        }
    }

    #[test]
    fn rejects_words_meeting_p1() {
        let g = Quadrangle::new(FieldSpec::with_order(2).unwrap());
        let ring = PolyRing::new(g.field().clone());
        let code = full_code(&g);
        let l = g.restricted_sets().l1[0];
        assert_eq!(kernel_normal_form(&ring, &g, &code, &g.line_vector(l)), Err(PolyError::NotInKernel));
    }
}
