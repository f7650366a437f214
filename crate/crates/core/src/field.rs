//! Arithmetic in GF(p^t) under a fixed polynomial presentation.
//!
//! Elements are stored as integers in `0..q` whose base-`p` digits are the
//! coefficients of the element in the polynomial basis `1, x, ..., x^(t-1)`,
//! least significant digit first. Multiplication goes through log/antilog
//! tables built once at construction, so a [`FieldSpec`] is cheap to share
//! and every operation on it is pure.

use std::fmt;

use thiserror::Error;

/// Largest field order for which tables are built.
const MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrimeP(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{t} is too large")]
    TooLarge { p: u32, t: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("polynomial {coeffs:?} must be monic of degree {degree} with coefficients below {p}")]
    MalformedPolynomial { coeffs: Vec<u32>, degree: u32, p: u32 },
    #[error("polynomial {coeffs:?} is reducible over GF({p})")]
    ReduciblePolynomial { coeffs: Vec<u32>, p: u32 },
    #[error("no default irreducible polynomial for GF({p}^{t}); pass one explicitly")]
    NoDefaultIrreducible { p: u32, t: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// An element of a finite field, as its integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// GF(p^t) with a chosen irreducible polynomial.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    t: u32,
    q: u32,
    /// Monic irreducible, constant term first, length `t + 1`.
    irreducible: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("t", &self.t)
            .field("q", &self.q)
            .field("irreducible", &self.irreducible)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.t == other.t && self.irreducible == other.irreducible
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, t)` with `q = p^t`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        // q itself is prime
        p = q;
    }
    let mut rest = q;
    let mut t = 0;
    while rest % p == 0 {
        rest /= p;
        t += 1;
    }
    (rest == 1).then_some((p as u32, t))
}

// ---------------------------------------------------------------------------
// Polynomials over GF(p), coefficient vectors with the constant term first.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is small; Fermat.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Remainder of `a` divided by `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        let shift = dr - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = c * mi % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    trim(out)
}

fn digits(mut v: u32, p: u32, t: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(t as usize);
    for _ in 0..t {
        out.push(v % p);
        v /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// True iff the monic polynomial `f` of degree `t` has no monic factor of
/// degree between 1 and `t / 2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    let t = f.len().saturating_sub(1) as u32;
    if t == 0 {
        return false;
    }
    for d in 1..=t / 2 {
        for low in 0..p.pow(d) {
            let mut g = digits(low, p, d);
            g.push(1);
            if poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Monic irreducible of degree `t` with the smallest base-`p` encoding
/// (constant term least significant). Available for `p <= 7`, `t <= 5`, and
/// for every prime with `t = 1`, where it is `x`.
pub fn default_irreducible(p: u32, t: u32) -> Result<Vec<u32>, FieldError> {
    if t == 1 && is_prime(p as u64) {
        return Ok(vec![0, 1]);
    }
    if !matches!(p, 2 | 3 | 5 | 7) || !(1..=5).contains(&t) {
        return Err(FieldError::NoDefaultIrreducible { p, t });
    }
    (0..p.pow(t))
        .map(|low| {
            let mut f = digits(low, p, t);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .ok_or(FieldError::NoDefaultIrreducible { p, t })
}

/// Parses a comma-separated coefficient list, constant term first.
pub fn parse_coefficients(s: &str) -> Result<Vec<u32>, std::num::ParseIntError> {
    s.split(',').map(|c| c.trim().parse::<u32>()).collect()
}

impl FieldSpec {
    /// Builds GF(p^t). Without `irreducible` the default table is used.
    pub fn new(p: u32, t: u32, irreducible: Option<&[u32]>) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NonPrimeP(p));
        }
        if t == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q64 = (p as u64).checked_pow(t).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER {
            return Err(FieldError::TooLarge { p, t });
        }
        let q = q64 as u32;
        let irreducible = match irreducible {
            Some(f) => {
                let ok = f.len() == t as usize + 1
                    && f.last() == Some(&1)
                    && f.iter().all(|&c| c < p);
                if !ok {
                    return Err(FieldError::MalformedPolynomial {
                        coeffs: f.to_vec(),
                        degree: t,
                        p,
                    });
                }
                if !is_irreducible(f, p) {
                    return Err(FieldError::ReduciblePolynomial { coeffs: f.to_vec(), p });
                }
                f.to_vec()
            }
            None => default_irreducible(p, t)?,
        };

        let slow_mul = |a: u32, b: u32| -> u32 {
            let prod = poly_mul(&trim(digits(a, p, t)), &trim(digits(b, p, t)), p);
            let mut r = poly_rem(&prod, &irreducible, p);
            r.resize(t as usize, 0);
            undigits(&r, p)
        };

        // Find a generator of the multiplicative group.
        let order = q - 1;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut found = false;
        for g in 1..q {
            let mut seen = vec![false; q as usize];
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..order {
                if seen[x as usize] {
                    ok = false;
                    break;
                }
                seen[x as usize] = true;
                exp[i as usize] = x;
                x = slow_mul(x, g);
            }
            if ok {
                found = true;
                break;
            }
        }
        debug_assert!(found, "multiplicative group of a field is cyclic");
        for i in 0..order as usize {
            exp[i + order as usize] = exp[i];
            log[exp[i] as usize] = i as u32;
        }

        Ok(FieldSpec { p, t, q, irreducible, exp, log })
    }

    /// Builds GF(q) for a prime power `q` with the default presentation.
    pub fn with_order(q: u64) -> Result<Self, FieldError> {
        let (p, t) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, t, None)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn irreducible(&self) -> &[u32] {
        &self.irreducible
    }

    #[inline]
    pub fn elem(&self, v: u32) -> FieldElem {
        debug_assert!(v < self.q, "{v} out of range for GF({})", self.q);
        FieldElem(v)
    }

    /// Elements in integer order `0, 1, ..., q-1`.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.q).map(FieldElem)
    }

    /// The class of `n` in the prime subfield.
    pub fn from_int(&self, n: u64) -> FieldElem {
        FieldElem((n % self.p as u64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        FieldElem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let order = self.q - 1;
        Ok(FieldElem(self.exp[((order - self.log[a.0 as usize]) % order) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n` by square-and-multiply, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElem, mut n: u64) -> FieldElem {
        let mut result = FieldElem::ONE;
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_gf2() {
        let f = FieldSpec::new(2, 1, None).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.elements().map(FieldElem::value).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn gf4_table_entries() {
        let f = FieldSpec::new(2, 2, Some(&[1, 1, 1])).unwrap();
        let x = f.elem(2);
        assert_eq!(f.mul(x, x), f.elem(3));
        assert_eq!(f.mul(FieldElem::ONE, x), x);
        assert_eq!(f.inv(x).unwrap(), f.elem(3));
        assert_eq!(f.pow(x, 3), FieldElem::ONE);
    }

    #[test]
    fn reducible_rejected() {
        let err = FieldSpec::new(2, 2, Some(&[0, 1, 1])).unwrap_err();
        assert!(matches!(err, FieldError::ReduciblePolynomial { .. }));
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(FieldSpec::new(4, 1, None).unwrap_err(), FieldError::NonPrimeP(4));
        assert_eq!(FieldSpec::new(2, 0, None).unwrap_err(), FieldError::ZeroDegree);
        assert_eq!(
            FieldSpec::new(11, 2, None).unwrap_err(),
            FieldError::NoDefaultIrreducible { p: 11, t: 2 }
        );
        assert!(FieldSpec::new(11, 2, Some(&[1, 0, 1])).is_ok());
        assert!(matches!(
            FieldSpec::new(2, 2, Some(&[1, 1])).unwrap_err(),
            FieldError::MalformedPolynomial { .. }
        ));
    }

    #[test]
    fn inverse_of_zero() {
        let f = FieldSpec::with_order(8).unwrap();
        assert_eq!(f.inv(FieldElem::ZERO), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn default_table_for_binary_fields() {
        assert_eq!(default_irreducible(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(default_irreducible(2, 3).unwrap(), vec![1, 1, 0, 1]);
        assert_eq!(default_irreducible(2, 4).unwrap(), vec![1, 1, 0, 0, 1]);
        assert_eq!(default_irreducible(2, 5).unwrap(), vec![1, 0, 1, 0, 0, 1]);
        assert_eq!(default_irreducible(3, 2).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn pow_conventions() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
            let f = FieldSpec::with_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, 0), FieldElem::ONE);
                assert_eq!(f.pow(a, q), a);
                if !a.is_zero() {
                    assert_eq!(f.pow(a, q - 1), FieldElem::ONE);
                }
            }
        }
    }

    #[test]
    fn parse_irr_flag() {
        assert_eq!(parse_coefficients("1,1,0,1").unwrap(), vec![1, 1, 0, 1]);
        assert!(parse_coefficients("1,x").is_err());
    }
}
