//! Polynomial factorization over finite fields: squarefree decomposition,
//! distinct-degree splitting, and equal-degree splitting by deterministic
//! enumeration of monic candidates. Output order is deterministic.

use crate::error::{Error, Result};
use crate::field::{field_elements, Field, Scalar};
use crate::poly::Poly;

/// base^e mod m by repeated squaring; m must have positive degree.
pub fn powmod(base: &Poly, mut e: u64, modulus: &Poly) -> Result<Poly> {
    if modulus.degree().is_none_or(|d| d == 0) {
        return Err(Error::ZeroPolynomial("powmod modulus"));
    }
    let f = base.field();
    let mut acc = Poly::one(f);
    let mut b = base.div_rem(modulus)?.1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b).div_rem(modulus)?.1;
        }
        b = b.mul(&b).div_rem(modulus)?.1;
        e >>= 1;
    }
    Ok(acc)
}

/// Inverse of the Frobenius map on GF(p^k): the unique c with c^p = self.
fn frobenius_inverse(c: &Scalar) -> Result<Scalar> {
    let field = c.field();
    let p = field.characteristic();
    let k = field.extension_degree().ok_or(Error::UnsupportedFactorization)? as u32;
    let e = p.checked_pow(k - 1).ok_or(Error::UnsupportedFactorization)?;
    Ok(c.pow(e))
}

/// For f with f' = 0 over GF(p^k), the unique g with g^p = f.
fn pth_root(f: &Poly) -> Result<Poly> {
    let field = f.field();
    let p = field.characteristic() as usize;
    let n = f.degree().unwrap_or(0);
    let mut coeffs = Vec::with_capacity(n / p + 1);
    for i in (0..=n).step_by(p) {
        coeffs.push(frobenius_inverse(&f.coeff(i))?);
    }
    Ok(Poly::from_coeffs(field, coeffs))
}

/// Monic squarefree parts of a monic polynomial with their multiplicities,
/// sorted like [`factor_finite`]. Works over any field of the library;
/// in characteristic p a vanishing derivative is handled through p-th roots.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("squarefree decomposition"));
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let mut parts = squarefree_rec(f)?;
    sort_factors(&mut parts);
    Ok(parts)
}

fn squarefree_rec(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return Ok(out);
    }
    let deriv = f.derivative();
    if deriv.is_zero() {
        for (g, m) in squarefree_rec(&pth_root(f)?)? {
            out.push((g, m * f.field().characteristic() as usize));
        }
        return Ok(out);
    }
    let mut c = f.gcd(&deriv);
    let mut w = f.div_rem(&c)?.0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_rem(&y)?.0;
        if !z.is_one() {
            out.push((z, i));
        }
        w = y;
        c = c.div_rem(&w)?.0;
        i += 1;
    }
    if !c.is_one() {
        for (g, m) in squarefree_rec(&pth_root(&c)?)? {
            out.push((g, m * f.field().characteristic() as usize));
        }
    }
    Ok(out)
}

/// Splits a monic squarefree polynomial into (product, d) pairs, where each
/// product collects all irreducible factors of degree exactly d.
fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let field = f.field();
    let q = field.order().ok_or(Error::UnsupportedFactorization)?;
    let t = Poly::monomial(field, 1);
    let mut rest = f.clone();
    let mut h = t.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while rest.degree().map_or(false, |n| n >= 2 * (d + 1)) {
        d += 1;
        h = powmod(&h, q, &rest)?;
        let g = rest.gcd(&h.sub(&t));
        if !g.is_one() {
            rest = rest.div_rem(&g)?.0;
            h = h.div_rem(&rest)?.1;
            out.push((g, d));
        }
    }
    if let Some(n) = rest.degree().filter(|&n| n > 0) {
        out.push((rest, n));
    }
    Ok(out)
}

/// All monic polynomials of degree d, in lexicographic order of their
/// coefficient tuples (constant term varies fastest).
fn monic_candidates(field: &Field, d: usize) -> Result<impl Iterator<Item = Poly>> {
    let elems = field_elements(field)?;
    let field = field.clone();
    let mut idx = vec![0usize; d];
    let mut done = false;
    Ok(std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut coeffs: Vec<Scalar> = idx.iter().map(|&i| elems[i].clone()).collect();
        coeffs.push(Scalar::one(&field));
        let next = Poly::from_coeffs(&field, coeffs);
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                done = true;
                break;
            }
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        Some(next)
    }))
}

/// Splits a product of distinct monic irreducibles of common degree d by
/// trial division over all monic candidates of degree d.
fn equal_degree(f: &Poly, d: usize) -> Result<Vec<Poly>> {
    let mut rest = f.clone();
    let mut out = Vec::new();
    for cand in monic_candidates(f.field(), d)? {
        if rest.degree() == Some(0) {
            break;
        }
        if rest.degree() == Some(d) {
            out.push(rest.clone());
            rest = Poly::one(f.field());
            break;
        }
        if cand.divides(&rest) {
            rest = rest.div_rem(&cand)?.0;
            out.push(cand);
        }
    }
    if !rest.is_one() {
        return Err(Error::Defect("equal-degree split left an unfactored part".into()));
    }
    Ok(out)
}

/// Complete factorization of a monic polynomial over a finite field into
/// monic irreducibles with multiplicities, sorted by degree and then by
/// coefficient tuples (constant term first).
pub fn factor_finite(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    if !f.field().is_finite() {
        return Err(Error::UnsupportedFactorization);
    }
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(f)? {
        for (block, d) in distinct_degree(&part)? {
            for irred in equal_degree(&block, d)? {
                out.push((irred, mult));
            }
        }
    }
    sort_factors(&mut out);
    Ok(out)
}

fn poly_key(p: &Poly) -> (usize, Vec<Vec<u64>>) {
    let deg = p.degree().map_or(0, |d| d + 1);
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| c.finite_coeffs().map_or_else(Vec::new, <[u64]>::to_vec))
        .collect();
    (deg, coeffs)
}

fn sort_factors(factors: &mut [(Poly, usize)]) {
    factors.sort_by_key(|(p, _)| poly_key(p));
}
