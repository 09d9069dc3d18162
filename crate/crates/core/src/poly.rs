use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Whether a polynomial lies in F[t^2] (even), in t*F[t^2] (odd), or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Neither,
}

/// A univariate polynomial with exact coefficients, stored in ascending
/// order with no trailing zeros. The empty coefficient vector is the zero
/// polynomial, whose degree is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(Scalar::one(field))
    }

    pub fn constant(c: Scalar) -> Poly {
        let field = c.field().clone();
        let mut p = Poly { field, coeffs: vec![c] };
        p.trim();
        p
    }

    /// t^degree
    pub fn monomial(field: &Field, degree: usize) -> Poly {
        let mut coeffs = vec![Scalar::zero(field); degree + 1];
        coeffs[degree] = Scalar::one(field);
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<Scalar>) -> Poly {
        for c in &coeffs {
            assert!(c.field() == field, "polynomial coefficient from a different field");
        }
        let mut p = Poly { field: field.clone(), coeffs };
        p.trim();
        p
    }

    pub fn from_i64(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(field, coeffs.iter().map(|&c| Scalar::from_i64(field, c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, Scalar::is_one)
    }

    /// Coefficient of t^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Scalar::zero(&self.field))
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i).add(&other.coeff(i)));
        }
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { field: self.field.clone(), coeffs: self.coeffs.iter().map(Scalar::neg).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut coeffs = vec![Scalar::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn mul_scalar(&self, c: &Scalar) -> Poly {
        Poly::from_coeffs(&self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Multiply by t^k.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Scalar::zero(&self.field); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; errors when dividing by zero.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = divisor.degree().unwrap();
        let lead_inv = divisor.leading().unwrap().inv()?;
        let mut rem = self.clone();
        let mut quo = Poly::zero(&self.field);
        while let Some(r) = rem.degree() {
            if r < d {
                break;
            }
            let c = rem.leading().unwrap().mul(&lead_inv);
            let term = Poly::monomial(&self.field, r - d).mul_scalar(&c);
            quo = quo.add(&term);
            rem = rem.sub(&term.mul(divisor));
        }
        Ok((quo, rem))
    }

    pub fn divides(&self, other: &Poly) -> bool {
        match other.div_rem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.into_monic()
    }

    /// Scale by the inverse of the leading coefficient (identity on zero).
    pub fn into_monic(self) -> Poly {
        match self.leading() {
            None => self,
            Some(l) if l.is_one() => self,
            Some(l) => {
                let li = l.inv().expect("nonzero leading coefficient");
                self.mul_scalar(&li)
            }
        }
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// p(g(t)) by Horner's rule over F[t].
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// For monic p, the monic polynomial whose roots are the roots of p
    /// divided by alpha: alpha^(-deg p) * p(alpha t). The characteristic
    /// polynomial of alpha^(-1) A rescales this way.
    pub fn rescale(&self, alpha: &Scalar) -> Result<Poly> {
        if alpha.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let n = self.coeffs.len() - 1;
        let shrink = alpha.inv()?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.mul(&shrink.pow((n - i) as u64)))
            .collect();
        Ok(Poly::from_coeffs(&self.field, coeffs))
    }

    /// p(t^k).
    pub fn inflate(&self, k: usize) -> Poly {
        assert!(k >= 1);
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Scalar::zero(&self.field); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&Scalar::from_i64(&self.field, i as i64)))
            .collect();
        Poly::from_coeffs(&self.field, coeffs)
    }

    /// The trace of a monic polynomial: writing p = t^n - sum a_k t^k, the
    /// trace is a_{n-1}, which equals the trace of the companion matrix.
    pub fn trace(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("trace"));
        }
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let n = self.degree().unwrap();
        if n == 0 {
            return Ok(Scalar::zero(&self.field));
        }
        Ok(self.coeff(n - 1).neg())
    }

    /// Parity by exponent support; errors on the zero polynomial.
    pub fn parity(&self) -> Result<Parity> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("parity class"));
        }
        let mut even = true;
        let mut odd = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i % 2 == 0 {
                odd = false;
            } else {
                even = false;
            }
        }
        Ok(match (even, odd) {
            (true, _) => Parity::Even,
            (_, true) => Parity::Odd,
            _ => Parity::Neither,
        })
    }

    /// For an even polynomial p, the unique v with v(t^2) = p.
    pub fn even_witness(&self) -> Result<Poly> {
        if self.parity()? != Parity::Even {
            return Err(Error::Precondition("polynomial is not even".into()));
        }
        let coeffs = self.coeffs.iter().step_by(2).cloned().collect();
        Ok(Poly::from_coeffs(&self.field, coeffs))
    }

    /// Multiplicity of t as a factor (0 when p(0) != 0); errors on zero.
    pub fn t_multiplicity(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("t-multiplicity"));
        }
        Ok(self.coeffs.iter().position(|c| !c.is_zero()).unwrap())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let unit = mag == "1" || c.is_one();
            match (i, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    fn q() -> Field {
        FieldDescriptor::rationals()
    }

    #[test]
    fn degree_and_zero_sentinel() {
        let f = q();
        assert_eq!(Poly::zero(&f).degree(), None);
        assert_eq!(Poly::one(&f).degree(), Some(0));
        assert_eq!(Poly::from_i64(&f, &[0, 0, 3]).degree(), Some(2));
        assert_eq!(Poly::from_i64(&f, &[5, 0, 0]).degree(), Some(0));
    }

    #[test]
    fn trace_reads_subleading_coefficient() {
        let f = q();
        // t^3 + 5 t^2 + 1 has trace -5
        let p = Poly::from_i64(&f, &[1, 0, 5, 1]);
        assert_eq!(p.trace().unwrap(), Scalar::from_i64(&f, -5));
        assert!(Poly::from_i64(&f, &[1, 2]).trace().is_err()); // not monic
        assert!(Poly::zero(&f).trace().is_err());
        // product rule: trace(fg) = trace f + trace g for monic f, g
        let a = Poly::from_i64(&f, &[2, -1, 1]);
        let b = Poly::from_i64(&f, &[-3, 4, 0, 1]);
        assert_eq!(
            a.mul(&b).trace().unwrap(),
            a.trace().unwrap().add(&b.trace().unwrap())
        );
    }

    #[test]
    fn parity_classes() {
        let f = q();
        assert_eq!(Poly::from_i64(&f, &[0, 0, 2, 0, 1]).parity().unwrap(), Parity::Even);
        assert_eq!(Poly::from_i64(&f, &[-1, 0, 1]).parity().unwrap(), Parity::Even);
        assert_eq!(Poly::from_i64(&f, &[0, -1, 0, 1]).parity().unwrap(), Parity::Odd);
        assert_eq!(Poly::from_i64(&f, &[0, 1]).parity().unwrap(), Parity::Odd);
        assert_eq!(Poly::from_i64(&f, &[0, 1, 1]).parity().unwrap(), Parity::Neither);
        assert_eq!(Poly::one(&f).parity().unwrap(), Parity::Even);
        assert!(Poly::zero(&f).parity().is_err());
        // products: even*even and odd*odd are even, even*odd is odd
        let e = Poly::from_i64(&f, &[1, 0, 1]);
        let o = Poly::from_i64(&f, &[0, 2, 0, 1]);
        assert_eq!(e.mul(&e).parity().unwrap(), Parity::Even);
        assert_eq!(o.mul(&o).parity().unwrap(), Parity::Even);
        assert_eq!(e.mul(&o).parity().unwrap(), Parity::Odd);
    }

    #[test]
    fn compose_and_inflate() {
        let f = q();
        let sq = Poly::from_i64(&f, &[0, 0, 1]);
        let lin = Poly::from_i64(&f, &[-1, 1]);
        // (t-1)^2 = t^2 - 2t + 1
        assert_eq!(sq.compose(&lin), Poly::from_i64(&f, &[1, -2, 1]));
        let p = Poly::from_i64(&f, &[3, 0, 1]);
        assert_eq!(p.inflate(2), Poly::from_i64(&f, &[3, 0, 0, 0, 1]));
        assert_eq!(p.compose(&sq), p.inflate(2));
        let even = Poly::from_i64(&f, &[4, 0, -2, 0, 1]);
        let v = even.even_witness().unwrap();
        assert_eq!(v, Poly::from_i64(&f, &[4, -2, 1]));
        assert_eq!(v.inflate(2), even);
    }

    #[test]
    fn rescale_divides_roots() {
        let f = q();
        let p = Poly::from_i64(&f, &[-4, 0, 1]);
        let two = Scalar::from_i64(&f, 2);
        assert_eq!(p.rescale(&two).unwrap(), Poly::from_i64(&f, &[-1, 0, 1]));
        for root in [2i64, -2] {
            let r = Scalar::from_i64(&f, root);
            assert!(p.eval(&r).is_zero());
            assert!(p.rescale(&two).unwrap().eval(&r.mul(&two.inv().unwrap())).is_zero());
        }
        assert!(p.rescale(&Scalar::zero(&f)).is_err());
        assert!(Poly::from_i64(&f, &[1, 2]).rescale(&two).is_err());
    }

    #[test]
    fn division_and_gcd() {
        let f = q();
        let a = Poly::from_i64(&f, &[-1, 0, 0, 0, 1]); // t^4 - 1
        let b = Poly::from_i64(&f, &[-1, 0, 1]); // t^2 - 1
        let (qt, r) = a.div_rem(&b).unwrap();
        assert_eq!(qt, Poly::from_i64(&f, &[1, 0, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&b), b);
        let c = Poly::from_i64(&f, &[1, 1]); // t + 1
        assert_eq!(b.gcd(&c), c);
        assert!(a.div_rem(&Poly::zero(&f)).is_err());
        // non-monic divisor
        let d = Poly::from_i64(&f, &[2, 2]);
        let (qt, r) = b.div_rem(&d).unwrap();
        assert_eq!(qt.mul(&d).add(&r), b);
    }

    #[test]
    fn t_multiplicity_strip() {
        let f = FieldDescriptor::prime_field(3).unwrap();
        let p = Poly::from_i64(&f, &[0, 0, 0, 2, 0, 1]);
        assert_eq!(p.t_multiplicity().unwrap(), 3);
        assert_eq!(Poly::from_i64(&f, &[1, 1]).t_multiplicity().unwrap(), 0);
    }

    #[test]
    fn display_rendering() {
        let f = q();
        assert_eq!(Poly::from_i64(&f, &[1, 0, 5, 1]).to_string(), "t^3 + 5*t^2 + 1");
        assert_eq!(Poly::from_i64(&f, &[0, -1, 0, 1]).to_string(), "t^3 - t");
        assert_eq!(Poly::zero(&f).to_string(), "0");
        assert_eq!(Poly::from_i64(&f, &[-2]).to_string(), "-2");
        let g = FieldDescriptor::prime_field(2).unwrap();
        assert_eq!(Poly::from_i64(&g, &[1, 1]).to_string(), "t + 1");
    }
}
