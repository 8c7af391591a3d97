//! Table-driven arithmetic in GF(p^e).
//!
//! An element is identified with its coefficient vector over GF(p), read as a
//! base-p integer (constant term least significant). The modulus is the
//! lexicographically smallest primitive polynomial, so `x` (or, for e = 1, the
//! root of `x + c0`) is the designated primitive element.

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^e` with `p` prime, or returns `None`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    e: u32,
    order: u32,
    /// Monic modulus, coefficients from the constant term up (length e+1).
    modulus: Vec<u32>,
    primitive: u32,
    /// `exp[k] = primitive^k` for k in 0..order-1.
    exp: Vec<u32>,
    /// `log[x]` for nonzero x; `log[0]` is unused.
    log: Vec<u32>,
}

/// Multiplies the element `a` by `x` modulo the monic polynomial with low
/// coefficients `low` (length e).
fn times_x(a: u32, p: u32, low: &[u32]) -> u32 {
    let e = low.len();
    let mut digits = vec![0u32; e + 1];
    let mut t = a;
    for d in digits.iter_mut().skip(1) {
        *d = t % p;
        t /= p;
    }
    // x^e = -(c_0 + c_1 x + ... ), fold the overflow digit back down.
    let top = digits[e];
    let mut out = 0u32;
    for i in (0..e).rev() {
        let v = (digits[i] + (p - low[i] % p) * top) % p;
        out = out * p + v;
    }
    out
}

/// If `x` generates the multiplicative group modulo the candidate, returns
/// the power table.
fn primitive_powers(p: u32, order: u32, low: &[u32]) -> Option<Vec<u32>> {
    let mut exp = Vec::with_capacity(order as usize - 1);
    // The element "x" itself; for e == 1 it reduces to -c0.
    let mut cur = 1u32;
    for k in 0..order - 1 {
        if k > 0 && cur == 1 {
            return None;
        }
        exp.push(cur);
        cur = times_x(cur, p, low);
        if cur == 0 {
            return None;
        }
    }
    (cur == 1).then_some(exp)
}

pub fn field_make(p: u32, e: u32) -> Result<FiniteField> {
    if !is_prime(u64::from(p)) {
        return Err(Error::NotPrime(u64::from(p)));
    }
    if e == 0 {
        return Err(Error::InvalidParameter(
            "field exponent must be at least 1".into(),
        ));
    }
    let order = u64::from(p)
        .checked_pow(e)
        .filter(|&o| o <= MAX_ORDER)
        .ok_or(Error::FieldTooLarge(u64::from(p).saturating_pow(e)))?;
    let order = order as u32;

    for idx in 0..order {
        let mut low = Vec::with_capacity(e as usize);
        let mut t = idx;
        for _ in 0..e {
            low.push(t % p);
            t /= p;
        }
        if low[0] == 0 {
            continue;
        }
        if let Some(exp) = primitive_powers(p, order, &low) {
            let mut log = vec![0u32; order as usize];
            for (k, &x) in exp.iter().enumerate() {
                log[x as usize] = k as u32;
            }
            let mut modulus = low;
            modulus.push(1);
            let primitive = if order == 2 { 1 } else { exp[1] };
            return Ok(FiniteField {
                p,
                e,
                order,
                modulus,
                primitive,
                exp,
                log,
            });
        }
    }
    Err(Error::NoPrimitivePolynomial { p, e })
}

impl FiniteField {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    /// Size of the multiplicative group.
    pub fn units(&self) -> u32 {
        self.order - 1
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.order
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] + self.log[b as usize]) % self.units();
        self.exp[k as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        let l = self.dlog(a)?;
        Ok(self.exp[((self.units() - l) % self.units()) as usize])
    }

    /// `primitive^k`, for any k.
    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % u64::from(self.units())) as usize]
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if a == 0 {
            return u32::from(k == 0);
        }
        let l = u64::from(self.log[a as usize]);
        self.exp((l * (k % u64::from(self.units()))) % u64::from(self.units()))
    }

    pub fn dlog(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroLog);
        }
        Ok(self.log[a as usize])
    }

    /// Inner product of two coordinate vectors.
    pub fn dot(&self, x: &[u32], y: &[u32]) -> u32 {
        x.iter()
            .zip(y)
            .fold(0, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }
}

/// All vectors of length `len` over `0..order`, first coordinate most
/// significant (lexicographic order).
pub fn vectors(order: u32, len: usize) -> Vec<Vec<u32>> {
    let count = (order as usize).pow(len as u32);
    (0..count)
        .map(|mut idx| {
            let mut v = vec![0u32; len];
            for slot in v.iter_mut().rev() {
                *slot = (idx % order as usize) as u32;
                idx /= order as usize;
            }
            v
        })
        .collect()
}

/// A field together with a subfield embedded in it, for the relative trace.
#[derive(Debug, Clone)]
pub struct Extension {
    pub big: FiniteField,
    pub sub: FiniteField,
    /// Degree of `big` over `sub`, i.e. m+1.
    degree: u32,
    embed: Vec<u32>,
    /// Inverse of `embed`; `u32::MAX` off the subfield.
    project: Vec<u32>,
}

impl Extension {
    pub fn new(big: FiniteField, sub: FiniteField) -> Result<Self> {
        if big.p != sub.p || !big.e.is_multiple_of(sub.e) || big.e == sub.e {
            return Err(Error::IncompatibleFields(format!(
                "GF({}^{}) is not a proper extension of GF({}^{})",
                big.p, big.e, sub.p, sub.e
            )));
        }
        let degree = big.e / sub.e;
        let r = u64::from(big.units() / sub.units());
        // Find a root of the subfield modulus among the generators of the
        // copy of GF(q)* inside the big field.
        let eval = |beta: u32| {
            sub.modulus
                .iter()
                .rev()
                .fold(0, |acc, &c| big.add(big.mul(acc, beta), c))
        };
        let beta = (1..u64::from(sub.units()))
            .chain(std::iter::once(0))
            .map(|s| big.exp(r * s))
            .find(|&b| eval(b) == 0)
            .ok_or_else(|| Error::IncompatibleFields("subfield modulus has no root".into()))?;

        let mut embed = Vec::with_capacity(sub.order as usize);
        for a in sub.elements() {
            let (mut t, mut acc, mut pw) = (a, 0, 1);
            while t > 0 {
                let c = t % sub.p;
                acc = big.add(acc, big.mul(c, pw));
                pw = big.mul(pw, beta);
                t /= sub.p;
            }
            embed.push(acc);
        }
        let mut project = vec![u32::MAX; big.order as usize];
        for (a, &b) in embed.iter().enumerate() {
            project[b as usize] = a as u32;
        }
        if project.iter().filter(|&&x| x != u32::MAX).count() != sub.order as usize {
            return Err(Error::IncompatibleFields(
                "embedding is not injective".into(),
            ));
        }
        Ok(Extension {
            big,
            sub,
            degree,
            embed,
            project,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn embed(&self, a: u32) -> u32 {
        self.embed[a as usize]
    }

    /// Maps an element of the embedded subfield back to its subfield index.
    pub fn project(&self, b: u32) -> Option<u32> {
        match self.project[b as usize] {
            u32::MAX => None,
            a => Some(a),
        }
    }

    /// `T(x) = x + x^q + ... + x^{q^m}` as a subfield element.
    pub fn trace(&self, x: u32) -> Result<u32> {
        let q = u64::from(self.sub.order);
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.degree {
            acc = self.big.add(acc, y);
            y = self.big.pow(y, q);
        }
        self.project(acc)
            .ok_or_else(|| Error::IncompatibleFields("trace left the subfield".into()))
    }
}

pub fn relative_trace(ext: &Extension, x: u32) -> Result<u32> {
    ext.trace(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        let f3 = field_make(3, 1).unwrap();
        assert_eq!(f3.primitive(), 2);
        let f9 = field_make(3, 2).unwrap();
        // x^2 + x + 2
        assert_eq!(f9.modulus(), &[2, 1, 1]);
        assert_eq!(f9.primitive(), 3);
        assert!(matches!(field_make(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(field_make(2, 21), Err(Error::FieldTooLarge(_))));
        assert_eq!(field_make(2, 1).unwrap().primitive(), 1);
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn axioms_exhaustive() {
        for (p, e) in [(2, 1), (2, 3), (3, 1), (3, 2), (5, 2), (3, 4), (7, 2)] {
            let f = field_make(p, e).unwrap();
            let n = f.order();
            assert_eq!(f.pow(f.primitive(), u64::from(f.units())), 1);
            for k in 1..f.units() {
                assert_ne!(f.pow(f.primitive(), u64::from(k)), 1);
            }
            for a in 0..n {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!(f.exp(u64::from(f.dlog(a).unwrap())), a);
                }
                for b in 0..n {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    if n <= 27 {
                        for c in 0..n {
                            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                            assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        let f = field_make(3, 2).unwrap();
        assert_eq!(f.dlog(1).unwrap(), 0);
        assert_eq!(f.dlog(f.primitive()).unwrap(), 1);
        assert!(matches!(f.dlog(0), Err(Error::ZeroLog)));
        for x in 1..9 {
            for y in 1..9 {
                let lhs = f.dlog(f.mul(x, y)).unwrap();
                let rhs = (f.dlog(x).unwrap() + f.dlog(y).unwrap()) % 8;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn trace_gf9_over_gf3() {
        let ext = Extension::new(field_make(3, 2).unwrap(), field_make(3, 1).unwrap()).unwrap();
        assert_eq!(ext.trace(0).unwrap(), 0);
        let mut zeros = 0;
        for x in 0..9 {
            let t = ext.trace(x).unwrap();
            // x + x^3 computed directly must already lie in the prime field.
            let direct = ext.big.add(x, ext.big.pow(x, 3));
            assert!(direct < 3);
            assert_eq!(ext.embed(t), direct);
            zeros += usize::from(t == 0);
        }
        assert_eq!(zeros, 3);
    }

    #[test]
    fn trace_is_linear_and_frobenius_invariant() {
        let ext = Extension::new(field_make(3, 4).unwrap(), field_make(3, 2).unwrap()).unwrap();
        let (big, sub) = (&ext.big, &ext.sub);
        for x in big.elements() {
            assert_eq!(ext.trace(big.pow(x, 9)).unwrap(), ext.trace(x).unwrap());
        }
        for a in sub.elements() {
            for x in (0..81).step_by(7) {
                for y in (0..81).step_by(5) {
                    let b = (a * 5 + 2) % 9;
                    let lhs = big.add(big.mul(ext.embed(a), x), big.mul(ext.embed(b), y));
                    let rhs = sub.add(
                        sub.mul(a, ext.trace(x).unwrap()),
                        sub.mul(b, ext.trace(y).unwrap()),
                    );
                    assert_eq!(ext.trace(lhs).unwrap(), rhs);
                }
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let ext = Extension::new(field_make(3, 6).unwrap(), field_make(3, 2).unwrap()).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(
                    ext.embed(ext.sub.add(a, b)),
                    ext.big.add(ext.embed(a), ext.embed(b))
                );
                assert_eq!(
                    ext.embed(ext.sub.mul(a, b)),
                    ext.big.mul(ext.embed(a), ext.embed(b))
                );
            }
        }
        let kernel = (0..729).filter(|&x| ext.trace(x).unwrap() == 0).count();
        assert_eq!(kernel, 81);
    }

    #[test]
    fn incompatible_pairs_are_rejected() {
        let f9 = field_make(3, 2).unwrap();
        let f27 = field_make(3, 3).unwrap();
        let f25 = field_make(5, 2).unwrap();
        assert!(Extension::new(f27, f9.clone()).is_err());
        assert!(Extension::new(f25, f9.clone()).is_err());
        assert!(Extension::new(f9.clone(), f9).is_err());
    }
}
