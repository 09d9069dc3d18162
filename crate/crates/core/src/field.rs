use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A coefficient field: either the rationals or a finite field GF(p^k).
///
/// Descriptors are shared behind an `Arc`; every `Scalar`, `Poly` and
/// `Matrix` carries one, and mixed-field arithmetic panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDescriptor {
    kind: FieldKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    /// GF(p^k). For k >= 2, `modulus` holds the monic irreducible modulus
    /// polynomial over GF(p), coefficients ascending, length k + 1.
    /// For k = 1 the modulus is empty.
    Finite { p: u64, k: usize, modulus: Vec<u64> },
}

pub type Field = Arc<FieldDescriptor>;

impl FieldDescriptor {
    pub fn rationals() -> Field {
        Arc::new(FieldDescriptor { kind: FieldKind::Rationals })
    }

    /// GF(p) for a prime p.
    pub fn prime_field(p: u64) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Arc::new(FieldDescriptor { kind: FieldKind::Finite { p, k: 1, modulus: Vec::new() } }))
    }

    /// GF(p^k) presented as GF(p)[x]/(modulus). The modulus is given by its
    /// coefficients in ascending order (degree = length - 1, which fixes k)
    /// and must be monic and irreducible over GF(p).
    pub fn extension_field(p: u64, modulus: &[u64]) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let mut m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        while m.last() == Some(&0) {
            m.pop();
        }
        if m.len() < 3 || *m.last().unwrap() != 1 {
            return Err(Error::BadModulus);
        }
        if !fp_is_irreducible(&m, p) {
            return Err(Error::ReducibleModulus);
        }
        let k = m.len() - 1;
        Ok(Arc::new(FieldDescriptor { kind: FieldKind::Finite { p, k, modulus: m } }))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    /// 0 for the rationals, p for GF(p^k).
    pub fn characteristic(&self) -> u64 {
        match &self.kind {
            FieldKind::Rationals => 0,
            FieldKind::Finite { p, .. } => *p,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match &self.kind {
            FieldKind::Rationals => None,
            FieldKind::Finite { p, k, .. } => p.checked_pow(*k as u32),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, FieldKind::Finite { .. })
    }

    pub fn extension_degree(&self) -> Option<usize> {
        match &self.kind {
            FieldKind::Rationals => None,
            FieldKind::Finite { k, .. } => Some(*k),
        }
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        match &self.kind {
            FieldKind::Finite { k, modulus, .. } if *k >= 2 => Some(modulus),
            _ => None,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Finite { p, k: 1, .. } => write!(f, "GF({p})"),
            FieldKind::Finite { p, k, .. } => write!(f, "GF({p}^{k})"),
        }
    }
}

/// Enumerate all elements of a finite field in a fixed order (coefficient
/// vectors counted in base p, lowest limb fastest). Errors on the rationals.
pub fn field_elements(field: &Field) -> Result<Vec<Scalar>> {
    match field.kind() {
        FieldKind::Rationals => Err(Error::EnumerationBound),
        FieldKind::Finite { p, k, .. } => {
            let order = field.order().ok_or(Error::EnumerationBound)?;
            let mut out = Vec::with_capacity(order as usize);
            let mut counter = vec![0u64; *k];
            loop {
                out.push(Scalar { field: field.clone(), repr: Repr::Finite(counter.clone()) });
                let mut i = 0;
                loop {
                    if i == *k {
                        return Ok(out);
                    }
                    counter[i] += 1;
                    if counter[i] < *p {
                        break;
                    }
                    counter[i] = 0;
                    i += 1;
                }
            }
        }
    }
}

/// One element of a `FieldDescriptor`, in canonical form: a reduced
/// arbitrary-precision fraction over the rationals, or a coefficient vector
/// of length k with limbs in [0, p) over GF(p^k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    field: Field,
    repr: Repr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Rational(BigRational),
    Finite(Vec<u64>),
}

impl Scalar {
    pub fn zero(field: &Field) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: &Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    /// The image of an integer under the canonical ring map Z -> F.
    pub fn from_i64(field: &Field, v: i64) -> Scalar {
        let repr = match field.kind() {
            FieldKind::Rationals => Repr::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldKind::Finite { p, k, .. } => {
                let r = v.rem_euclid(*p as i64) as u64;
                let mut coeffs = vec![0u64; *k];
                coeffs[0] = r;
                Repr::Finite(coeffs)
            }
        };
        Scalar { field: field.clone(), repr }
    }

    pub fn from_rational(field: &Field, value: BigRational) -> Result<Scalar> {
        match field.kind() {
            FieldKind::Rationals => Ok(Scalar { field: field.clone(), repr: Repr::Rational(value) }),
            FieldKind::Finite { .. } => Err(Error::FieldMismatch),
        }
    }

    /// An element of GF(p^k) from its coefficient vector (ascending powers of
    /// the modulus root, at most k entries, each reduced mod p).
    pub fn from_coeffs(field: &Field, coeffs: &[u64]) -> Result<Scalar> {
        match field.kind() {
            FieldKind::Rationals => Err(Error::FieldMismatch),
            FieldKind::Finite { p, k, .. } => {
                if coeffs.len() > *k {
                    return Err(Error::ShapeMismatch(format!(
                        "coefficient vector of length {} in a degree-{} extension",
                        coeffs.len(),
                        k
                    )));
                }
                let mut v = vec![0u64; *k];
                for (i, c) in coeffs.iter().enumerate() {
                    v[i] = c % p;
                }
                Ok(Scalar { field: field.clone(), repr: Repr::Finite(v) })
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.is_zero(),
            Repr::Finite(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.is_one(),
            Repr::Finite(v) => v[0] == 1 && v[1..].iter().all(|&c| c == 0),
        }
    }

    pub fn rational_value(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(r) => Some(r),
            Repr::Finite(_) => None,
        }
    }

    pub fn finite_coeffs(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Rational(_) => None,
            Repr::Finite(v) => Some(v),
        }
    }

    fn same_field(&self, other: &Scalar) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "scalar arithmetic across different fields"
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.same_field(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a + b),
            (Repr::Finite(a), Repr::Finite(b)) => {
                let p = self.field.characteristic();
                Repr::Finite(a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
            }
            _ => unreachable!(),
        };
        Scalar { field: self.field.clone(), repr }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        let repr = match &self.repr {
            Repr::Rational(a) => Repr::Rational(-a),
            Repr::Finite(a) => {
                let p = self.field.characteristic();
                Repr::Finite(a.iter().map(|&x| (p - x) % p).collect())
            }
        };
        Scalar { field: self.field.clone(), repr }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.same_field(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a * b),
            (Repr::Finite(a), Repr::Finite(b)) => {
                let p = self.field.characteristic();
                match self.field.kind() {
                    FieldKind::Finite { k: 1, .. } => Repr::Finite(vec![mulmod(a[0], b[0], p)]),
                    FieldKind::Finite { k, modulus, .. } => {
                        let prod = fp_mul(a, b, p);
                        let mut red = fp_rem(&prod, modulus, p);
                        red.resize(*k, 0);
                        Repr::Finite(red)
                    }
                    FieldKind::Rationals => unreachable!(),
                }
            }
            _ => unreachable!(),
        };
        Scalar { field: self.field.clone(), repr }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Rational(a) => Repr::Rational(a.recip()),
            Repr::Finite(a) => {
                let p = self.field.characteristic();
                match self.field.kind() {
                    FieldKind::Finite { k: 1, .. } => Repr::Finite(vec![invmod(a[0], p)]),
                    FieldKind::Finite { k, modulus, .. } => {
                        let mut inv = fp_invmod_poly(a, modulus, p);
                        inv.resize(*k, 0);
                        Repr::Finite(inv)
                    }
                    FieldKind::Rationals => unreachable!(),
                }
            }
        };
        Ok(Scalar { field: self.field.clone(), repr })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// True when the element lies in the prime field and equals n mod p
    /// (0 <= n < p), or equals the integer n over the rationals.
    pub fn equals_i64(&self, n: i64) -> bool {
        *self == Scalar::from_i64(&self.field, n)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else if r.is_negative() {
                    write!(f, "-{}/{}", r.numer().magnitude(), r.denom())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Finite(v) => {
                if v.len() == 1 {
                    write!(f, "{}", v[0])
                } else {
                    write!(f, "[")?;
                    for (i, c) in v.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{c}")?;
                    }
                    write!(f, "]")
                }
            }
        }
    }
}

// --- u64 modular arithmetic ---

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    // extended Euclid over signed 128-bit intermediates
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inverse of a non-unit");
    s0.rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin, valid for all u64 inputs.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// --- raw polynomial arithmetic over GF(p) (coefficients ascending, trimmed) ---

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (a, b): (Vec<u64>, Vec<u64>) = (a.to_vec(), b.to_vec());
    let mut at = a;
    let mut bt = b;
    fp_trim(&mut at);
    fp_trim(&mut bt);
    if at.is_empty() || bt.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; at.len() + bt.len() - 1];
    for (i, &x) in at.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in bt.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    fp_trim(&mut out);
    out
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    fp_trim(&mut out);
    out
}

/// Remainder of a by m (m need not be monic; its leading coefficient is
/// inverted).
fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut m = m.to_vec();
    fp_trim(&mut m);
    assert!(!m.is_empty(), "division by the zero polynomial");
    let lead_inv = invmod(*m.last().unwrap(), p);
    let mut r = a.to_vec();
    fp_trim(&mut r);
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        let scaled: Vec<u64> = std::iter::repeat(0)
            .take(shift)
            .chain(m.iter().map(|&x| mulmod(x, c, p)))
            .collect();
        r = fp_sub(&r, &scaled, p);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let li = invmod(l, p);
        for c in &mut a {
            *c = mulmod(*c, li, p);
        }
    }
    a
}

/// Inverse of a modulo m in GF(p)[x], assuming gcd(a, m) = 1.
fn fp_invmod_poly(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r0 = m.to_vec();
    let mut r1 = fp_rem(a, m, p);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    fp_trim(&mut r0);
    while !r1.is_empty() {
        // r0 = q*r1 + r2
        let q = fp_div(&r0, &r1, p);
        let r2 = fp_sub(&r0, &fp_mul(&q, &r1, p), p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    debug_assert_eq!(r0.len(), 1, "inverse of a non-unit modulo m");
    let li = invmod(r0[0], p);
    let mut out: Vec<u64> = s0.iter().map(|&c| mulmod(c, li, p)).collect();
    out = fp_rem(&out, m, p);
    out
}

fn fp_div(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut b = b.to_vec();
    fp_trim(&mut b);
    assert!(!b.is_empty());
    let lead_inv = invmod(*b.last().unwrap(), p);
    let mut r = a.to_vec();
    fp_trim(&mut r);
    if r.len() < b.len() {
        return Vec::new();
    }
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        q[shift] = c;
        let scaled: Vec<u64> = std::iter::repeat(0)
            .take(shift)
            .chain(b.iter().map(|&x| mulmod(x, c, p)))
            .collect();
        r = fp_sub(&r, &scaled, p);
        if r.is_empty() {
            break;
        }
    }
    q
}

/// x^(p^steps) mod m, computed by iterated p-th powering.
fn fp_frobenius_iter(steps: usize, m: &[u64], p: u64) -> Vec<u64> {
    let mut t = fp_rem(&[0, 1], m, p); // x mod m
    for _ in 0..steps {
        t = fp_powmod(&t, p, m, p);
    }
    t
}

fn fp_powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = fp_rem(a, m, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_rem(&fp_mul(&acc, &base, p), m, p);
        }
        base = fp_rem(&fp_mul(&base, &base, p), m, p);
        e >>= 1;
    }
    acc
}

/// Rabin's irreducibility test over GF(p): m of degree k is irreducible iff
/// x^(p^k) = x mod m and gcd(x^(p^(k/r)) - x, m) = 1 for each prime r | k.
fn fp_is_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    let xk = fp_frobenius_iter(k, m, p);
    let x = fp_rem(&[0, 1], m, p);
    if fp_sub(&xk, &x, p) != Vec::<u64>::new() {
        return false;
    }
    let mut rest = k;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= rest {
        if rest % d == 0 {
            primes.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }
    for r in primes {
        let u = fp_frobenius_iter(k / r, m, p);
        let g = fp_gcd(&fp_sub(&u, &x, p), m, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Field {
        FieldDescriptor::extension_field(2, &[1, 1, 1]).unwrap()
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(is_prime_u64(5));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(4));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(matches!(FieldDescriptor::prime_field(6), Err(Error::NotPrime(6))));
    }

    #[test]
    fn modulus_validation() {
        // t^2 + 1 is reducible over GF(2): (t+1)^2
        assert!(matches!(
            FieldDescriptor::extension_field(2, &[1, 0, 1]),
            Err(Error::ReducibleModulus)
        ));
        // t^2 + t + 1 is irreducible over GF(2)
        assert!(FieldDescriptor::extension_field(2, &[1, 1, 1]).is_ok());
        // t^2 + 1 is irreducible over GF(3)
        assert!(FieldDescriptor::extension_field(3, &[1, 0, 1]).is_ok());
        // t^3 + t + 1 irreducible over GF(2), t^3 + t^2 + t + 1 = (t+1)(t^2+1) not
        assert!(FieldDescriptor::extension_field(2, &[1, 1, 0, 1]).is_ok());
        assert!(matches!(
            FieldDescriptor::extension_field(2, &[1, 1, 1, 1]),
            Err(Error::ReducibleModulus)
        ));
        assert!(matches!(FieldDescriptor::extension_field(2, &[1, 1]), Err(Error::BadModulus)));
    }

    #[test]
    fn rational_arithmetic_is_exact_and_reduced() {
        let q = FieldDescriptor::rationals();
        let a = Scalar::from_i64(&q, 2).div(&Scalar::from_i64(&q, 4)).unwrap();
        let b = Scalar::from_i64(&q, 1).div(&Scalar::from_i64(&q, 2)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1/2");
        assert_eq!(a.add(&b).to_string(), "1");
        assert_eq!(a.sub(&b).to_string(), "0");
        assert_eq!(Scalar::from_i64(&q, -3).div(&Scalar::from_i64(&q, 6)).unwrap().to_string(), "-1/2");
        assert!(Scalar::from_i64(&q, 1).div(&Scalar::zero(&q)).is_err());
    }

    #[test]
    fn gf5_field_ops() {
        let f = FieldDescriptor::prime_field(5).unwrap();
        let three = Scalar::from_i64(&f, 3);
        let four = Scalar::from_i64(&f, 4);
        assert_eq!(three.add(&four), Scalar::from_i64(&f, 2));
        assert_eq!(three.mul(&four), Scalar::from_i64(&f, 2));
        assert_eq!(three.inv().unwrap(), Scalar::from_i64(&f, 2));
        assert_eq!(Scalar::from_i64(&f, -1), Scalar::from_i64(&f, 4));
        assert_eq!(f.characteristic(), 5);
        assert_eq!(f.order(), Some(5));
    }

    #[test]
    fn gf4_exhaustive_inverses_and_axioms() {
        let f = gf4();
        assert_eq!(f.order(), Some(4));
        let elems = field_elements(&f).unwrap();
        assert_eq!(elems.len(), 4);
        for a in &elems {
            if a.is_zero() {
                assert!(a.inv().is_err());
                continue;
            }
            let ai = a.inv().unwrap();
            assert!(a.mul(&ai).is_one());
        }
        // w^2 = w + 1 under t^2 + t + 1
        let w = Scalar::from_coeffs(&f, &[0, 1]).unwrap();
        let w2 = w.mul(&w);
        assert_eq!(w2, Scalar::from_coeffs(&f, &[1, 1]).unwrap());
        // distributivity spot check over every triple
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
                }
            }
        }
    }

    #[test]
    fn gf8_frobenius_fixed_field() {
        let f = FieldDescriptor::extension_field(2, &[1, 1, 0, 1]).unwrap();
        for a in field_elements(&f).unwrap() {
            // a^8 = a for all of GF(8)
            assert_eq!(a.pow(8), a);
        }
    }

    #[test]
    fn characteristic_wraps() {
        let f = FieldDescriptor::prime_field(2).unwrap();
        let one = Scalar::one(&f);
        assert!(one.add(&one).is_zero());
        assert_eq!(one.neg(), one);
    }
}
