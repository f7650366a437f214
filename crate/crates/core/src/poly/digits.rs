//! Binary digit decomposition of monomials and the span of `β`.
//!
//! For `q = 2^t` a reduced monomial `m` factors uniquely as
//! `m = prod_j d_j^(2^j)` where each digit `d_j` is squarefree: `x_i`
//! appears in `d_j` exactly when bit `j` of its exponent is set.

use crate::exec::Exec;
use crate::field::FieldElem;

use super::echelon::FqEchelon;
use super::{Monomial, PolyError, PolyFn, PolyRing};

/// The digits composing `β`: `1, x0, x1, x2, x3, x0x1, x0x2, x1x3, x2x3`
/// and `x0x3 + x1x2`, each a list of squarefree monomials.
pub const BETA_DIGITS: [&[[u32; 4]]; 10] = [
    &[[0, 0, 0, 0]],
    &[[1, 0, 0, 0]],
    &[[0, 1, 0, 0]],
    &[[0, 0, 1, 0]],
    &[[0, 0, 0, 1]],
    &[[1, 1, 0, 0]],
    &[[1, 0, 1, 0]],
    &[[0, 1, 0, 1]],
    &[[0, 0, 1, 1]],
    &[[1, 0, 0, 1], [0, 1, 1, 0]],
];

/// Digits `d_0, .., d_(t-1)` of a monomial, least significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitTuple {
    pub digits: Vec<Monomial>,
}

impl DigitTuple {
    pub fn degrees(&self) -> Vec<u32> {
        self.digits.iter().map(Monomial::degree).collect()
    }

    /// `prod_j d_j^(2^j)`.
    pub fn compose(&self) -> Monomial {
        let mut e = [0u32; 4];
        for (j, d) in self.digits.iter().enumerate() {
            for i in 0..4 {
                e[i] += d.0[i] << j;
            }
        }
        Monomial(e)
    }
}

fn binary_t(ring: &PolyRing) -> Result<u32, PolyError> {
    if ring.field().p() != 2 {
        return Err(PolyError::NotBinary(ring.q()));
    }
    Ok(ring.field().t())
}

/// Splits a reduced monomial into its `t` binary digits.
pub fn digitize_monomial(ring: &PolyRing, m: &Monomial) -> Result<DigitTuple, PolyError> {
    let t = binary_t(ring)?;
    let max = ring.q() - 1;
    if let Some(&exponent) = m.0.iter().find(|&&e| e > max) {
        return Err(PolyError::ExponentTooLarge { monomial: *m, exponent, max });
    }
    let digits = (0..t).map(|j| Monomial(m.0.map(|e| (e >> j) & 1))).collect();
    Ok(DigitTuple { digits })
}

/// The `10^t` products `prod_j g_j^(2^j)` with each `g_j` drawn from
/// [`BETA_DIGITS`], and an echelon basis of their GF(q)-span.
#[derive(Debug, Clone)]
pub struct BetaBasis {
    elements: Vec<PolyFn>,
    echelon: FqEchelon,
    q: u32,
}

impl BetaBasis {
    pub fn new(ring: &PolyRing, exec: Exec) -> Result<Self, PolyError> {
        let t = binary_t(ring)?;
        let count = 10usize.pow(t);
        let elements = exec.map_range(count, |idx| beta_element(ring, t, idx));
        let mut echelon = FqEchelon::new(ring.field().clone());
        let q = ring.q();
        for f in &elements {
            echelon.insert(sparse(f, q));
        }
        Ok(BetaBasis { elements, echelon, q })
    }

    pub fn elements(&self) -> &[PolyFn] {
        &self.elements
    }

    /// Dimension of the span over GF(q).
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn contains(&self, f: &PolyFn) -> bool {
        self.echelon.contains(sparse(f, self.q))
    }
}

/// Element number `idx`, read as `t` base-10 digits, least significant first.
fn beta_element(ring: &PolyRing, t: u32, mut idx: usize) -> PolyFn {
    let mut out = PolyFn::one();
    for j in 0..t {
        let choice = BETA_DIGITS[idx % 10];
        idx /= 10;
        // Frobenius is additive in characteristic two, so g^(2^j) is termwise.
        let mut g = PolyFn::zero();
        for e in choice {
            let lifted = PolyFn::monomial(ring.reduce_monomial(&Monomial(e.map(|x| x << j))), FieldElem::ONE);
            g = ring.add(&g, &lifted);
        }
        out = ring.mul(&out, &g);
    }
    debug_assert!(out.terms().all(|(_, c)| c.value() == 1));
    out
}

fn sparse(f: &PolyFn, q: u32) -> Vec<(usize, FieldElem)> {
    f.terms().map(|(m, c)| (m.dense_index(q), *c)).collect()
}

/// Whether `f` lies in the GF(q)-span of `β`.
pub fn in_span_beta(beta: &BetaBasis, f: &PolyFn) -> bool {
    beta.contains(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn ring(q: u64) -> PolyRing {
        PolyRing::new(FieldSpec::with_order(q).unwrap())
    }

    fn digits_of(r: &PolyRing, e: [u32; 4]) -> Vec<Monomial> {
        digitize_monomial(r, &Monomial(e)).unwrap().digits
    }

    #[test]
    fn worked_examples() {
        let r = ring(8);
        assert_eq!(
            digits_of(&r, [3, 1, 0, 6]),
            vec![Monomial([1, 1, 0, 0]), Monomial([1, 0, 0, 1]), Monomial([0, 0, 0, 1])]
        );
        assert_eq!(
            digits_of(&r, [1, 3, 2, 4]),
            vec![Monomial([1, 1, 0, 0]), Monomial([0, 1, 1, 0]), Monomial([0, 0, 0, 1])]
        );
        let r = ring(4);
        assert_eq!(digits_of(&r, [3, 2, 0, 0]), vec![Monomial([1, 0, 0, 0]), Monomial([1, 1, 0, 0])]);
    }

    #[test]
    fn round_trip_all_monomials() {
        for q in [2u32, 4, 8] {
            let r = ring(q as u64);
            for a in 0..q {
                for b in 0..q {
                    for c in 0..q {
                        for d in 0..q {
                            let m = Monomial([a, b, c, d]);
                            let t = digitize_monomial(&r, &m).unwrap();
                            assert_eq!(t.compose(), m);
                            assert!(t.degrees().iter().all(|&d| d <= 4));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let r = ring(4);
        assert!(matches!(
            digitize_monomial(&r, &Monomial([4, 0, 0, 0])),
            Err(PolyError::ExponentTooLarge { exponent: 4, max: 3, .. })
        ));
        assert_eq!(digitize_monomial(&ring(3), &Monomial::ONE), Err(PolyError::NotBinary(3)));
    }

    #[test]
    fn beta_contains_line_polynomials_at_q2() {
        let r = ring(2);
        let beta = BetaBasis::new(&r, Exec::Sequential).unwrap();
        assert_eq!(beta.elements().len(), 10);
        assert_eq!(beta.rank(), 10);
        assert!(beta.contains(&PolyFn::one()));
        assert!(!beta.contains(&PolyFn::monomial(Monomial([1, 1, 1, 0]), FieldElem::ONE)));
    }
}
