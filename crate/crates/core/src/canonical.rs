//! Canonical forms under similarity: Smith normal form of tI - A over F[t],
//! invariant factors, the rational canonical form with an explicit change of
//! basis, similarity witnesses, Roth-style block merging, the Fitting
//! decomposition, and conjugation to a zero-diagonal matrix.

use crate::error::{Error, Result};
use crate::factor::factor_finite;
use crate::field::{Field, Scalar};
use crate::matrix::{linear_solve, Matrix};
use crate::poly::Poly;

/// An invertible T with T * source * T^-1 = target. The identity is checked
/// on construction, so a witness in hand is always valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityWitness {
    source: Matrix,
    target: Matrix,
    transform: Matrix,
    transform_inv: Matrix,
}

impl SimilarityWitness {
    pub fn new(source: Matrix, target: Matrix, transform: Matrix) -> Result<SimilarityWitness> {
        let transform_inv = transform.inverse().map_err(|_| Error::BadWitness)?;
        SimilarityWitness::from_parts(source, target, transform, transform_inv)
    }

    pub(crate) fn from_parts(
        source: Matrix,
        target: Matrix,
        transform: Matrix,
        transform_inv: Matrix,
    ) -> Result<SimilarityWitness> {
        let n = source.size().map_err(|_| Error::BadWitness)?;
        if target.size().map_err(|_| Error::BadWitness)? != n
            || transform.rows() != n
            || transform.cols() != n
            || !transform.mul(&transform_inv).is_identity()
        {
            return Err(Error::BadWitness);
        }
        if transform.mul(&source).mul(&transform_inv) != target {
            return Err(Error::BadWitness);
        }
        Ok(SimilarityWitness { source, target, transform, transform_inv })
    }

    pub fn identity(m: &Matrix) -> Result<SimilarityWitness> {
        let n = m.size()?;
        let id = Matrix::identity(m.field(), n);
        SimilarityWitness::from_parts(m.clone(), m.clone(), id.clone(), id)
    }

    pub fn source(&self) -> &Matrix {
        &self.source
    }

    pub fn target(&self) -> &Matrix {
        &self.target
    }

    pub fn transform(&self) -> &Matrix {
        &self.transform
    }

    pub fn transform_inv(&self) -> &Matrix {
        &self.transform_inv
    }

    /// The reverse witness, from target back to source.
    pub fn invert(&self) -> SimilarityWitness {
        SimilarityWitness {
            source: self.target.clone(),
            target: self.source.clone(),
            transform: self.transform_inv.clone(),
            transform_inv: self.transform.clone(),
        }
    }

    /// Chains self (source -> target) with `then` (whose source must equal
    /// self's target), giving a witness source -> then.target.
    pub fn compose(&self, then: &SimilarityWitness) -> Result<SimilarityWitness> {
        if self.target != then.source {
            return Err(Error::Defect("witness composition endpoints do not meet".into()));
        }
        SimilarityWitness::from_parts(
            self.source.clone(),
            then.target.clone(),
            then.transform.mul(&self.transform),
            self.transform_inv.mul(&then.transform_inv),
        )
    }

    /// T m T^-1, carrying any matrix along the source -> target conjugation.
    pub fn apply(&self, m: &Matrix) -> Matrix {
        self.transform.mul(m).mul(&self.transform_inv)
    }

    /// T^-1 m T, the inverse conjugation.
    pub fn unapply(&self, m: &Matrix) -> Matrix {
        self.transform_inv.mul(m).mul(&self.transform)
    }

    pub fn direct_sum(&self, other: &SimilarityWitness) -> Result<SimilarityWitness> {
        SimilarityWitness::from_parts(
            self.source.direct_sum(&other.source),
            self.target.direct_sum(&other.target),
            self.transform.direct_sum(&other.transform),
            self.transform_inv.direct_sum(&other.transform_inv),
        )
    }
}

/// The rational canonical form of a matrix: a direct sum of companion blocks
/// of the invariant factors, ordered so that the first factor is the minimal
/// polynomial and each later factor divides the one before it.
#[derive(Debug, Clone)]
pub struct RationalCanonicalForm {
    pub factors: Vec<Poly>,
    pub form: Matrix,
    pub witness: SimilarityWitness,
}

fn char_matrix(a: &Matrix) -> Vec<Vec<Poly>> {
    let f = a.field();
    let n = a.rows();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = a.get(i, j).neg();
                    if i == j {
                        Poly::from_coeffs(f, vec![c, Scalar::one(f)])
                    } else {
                        Poly::constant(c)
                    }
                })
                .collect()
        })
        .collect()
}

fn col_swap(m: &mut [Vec<Poly>], i: usize, j: usize) {
    for row in m {
        row.swap(i, j);
    }
}

/// col_dst += q * col_src
fn col_add(m: &mut [Vec<Poly>], dst: usize, src: usize, q: &Poly) {
    for row in m {
        row[dst] = row[dst].add(&row[src].mul(q));
    }
}

/// row_dst += q * row_src
fn row_add(m: &mut [Vec<Poly>], dst: usize, src: usize, q: &Poly) {
    let src_row = m[src].clone();
    for (d, s) in m[dst].iter_mut().zip(&src_row) {
        *d = d.add(&s.mul(q));
    }
}

fn col_scale(m: &mut [Vec<Poly>], j: usize, c: &Scalar) {
    for row in m {
        row[j] = row[j].mul_scalar(c);
    }
}

/// Diagonalizes a square polynomial matrix by unimodular row and column
/// operations, tracking the inverse of the accumulated row operations:
/// returns (diagonal d_0 | d_1 | ... monic, U^-1) with U M V = diag.
fn smith_with_left_inverse(mut m: Vec<Vec<Poly>>, field: &Field) -> Result<(Vec<Poly>, Vec<Vec<Poly>>)> {
    let n = m.len();
    let mut uinv: Vec<Vec<Poly>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Poly::one(field) } else { Poly::zero(field) }).collect())
        .collect();
    for k in 0..n {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if let Some(d) = m[i][j].degree() {
                        if best.map_or(true, |(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                break;
            };
            if pi != k {
                m.swap(pi, k);
                col_swap(&mut uinv, pi, k);
            }
            if pj != k {
                col_swap(&mut m, pj, k);
            }
            let pivot = m[k][k].clone();
            let mut clean = true;
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let (q, r) = m[i][k].div_rem(&pivot)?;
                row_add(&mut m, i, k, &q.neg());
                col_add(&mut uinv, k, i, &q);
                if !r.is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let (q, r) = m[k][j].div_rem(&pivot)?;
                col_add(&mut m, j, k, &q.neg());
                if !r.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offender = (k + 1..n)
                .flat_map(|i| (k + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !m[k][k].divides(&m[i][j]));
            match offender {
                Some((i, _)) => {
                    let one = Poly::one(field);
                    row_add(&mut m, k, i, &one);
                    col_add(&mut uinv, i, k, &one.neg());
                }
                None => break,
            }
        }
        if let Some(lead) = m[k][k].leading().cloned() {
            if !lead.is_one() {
                let inv = lead.inv()?;
                for j in 0..n {
                    m[k][j] = m[k][j].mul_scalar(&inv);
                }
                col_scale(&mut uinv, k, &lead);
            }
        }
    }
    let diag = (0..n).map(|k| m[k][k].clone()).collect();
    Ok((diag, uinv))
}

fn smith_of_char_matrix(a: &Matrix) -> Result<(Vec<Poly>, Vec<Vec<Poly>>)> {
    a.size()?;
    let f = a.field();
    let (diag, uinv) = smith_with_left_inverse(char_matrix(a), f)?;
    let mut product = Poly::one(f);
    for (k, d) in diag.iter().enumerate() {
        if d.is_zero() || !d.is_monic() {
            return Err(Error::Defect("Smith diagonal of tI - A is not monic".into()));
        }
        if k > 0 && !diag[k - 1].divides(d) {
            return Err(Error::Defect("Smith diagonal violates the divisibility chain".into()));
        }
        product = product.mul(d);
    }
    if product != a.char_poly()? {
        return Err(Error::Defect("Smith diagonal does not multiply to the characteristic polynomial".into()));
    }
    Ok((diag, uinv))
}

/// Invariant factors, largest first: the first entry is the minimal
/// polynomial and each subsequent entry divides the previous one.
pub fn invariant_factors(a: &Matrix) -> Result<Vec<Poly>> {
    let (diag, _) = smith_of_char_matrix(a)?;
    Ok(diag
        .into_iter()
        .rev()
        .filter(|d| d.degree().map_or(false, |deg| deg >= 1))
        .collect())
}

/// Rational canonical form with an explicit similarity witness. The cyclic
/// generators are read off the tracked left transform of the Smith form.
pub fn rcf(a: &Matrix) -> Result<RationalCanonicalForm> {
    let n = a.size()?;
    let f = a.field().clone();
    let (diag, uinv) = smith_of_char_matrix(a)?;
    let mut factors = Vec::new();
    let mut cols: Vec<Matrix> = Vec::new();
    let mut pows = vec![Matrix::identity(&f, n)];
    for k in (0..n).rev() {
        let d = diag[k].degree().unwrap();
        if d == 0 {
            continue;
        }
        factors.push(diag[k].clone());
        let mut v = Matrix::zeros(&f, n, 1);
        for i in 0..n {
            for (e, c) in uinv[i][k].coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                while pows.len() <= e {
                    let next = a.mul(pows.last().unwrap());
                    pows.push(next);
                }
                v = v.add(&pows[e].column(i).scale(c));
            }
        }
        let mut w = v;
        for _ in 0..d {
            cols.push(w.clone());
            w = a.mul(&w);
        }
    }
    let basis = Matrix::from_columns(&f, n, &cols);
    let transform = basis
        .inverse()
        .map_err(|_| Error::Defect("cyclic generators from the Smith form do not span".into()))?;
    let blocks: Vec<Matrix> = factors.iter().map(Matrix::companion).collect::<Result<_>>()?;
    let form = Matrix::direct_sum_all(&f, &blocks);
    let witness = SimilarityWitness::new(a.clone(), form.clone(), transform)?;
    Ok(RationalCanonicalForm { factors, form, witness })
}

/// Similarity witness between two matrices with equal rational canonical
/// forms, obtained by composing their canonical witnesses.
pub fn witness_similar(a: &Matrix, b: &Matrix) -> Result<SimilarityWitness> {
    let ra = rcf(a)?;
    let rb = rcf(b)?;
    if ra.form != rb.form {
        return Err(Error::NotSimilar);
    }
    ra.witness.compose(&rb.witness.invert())
}

/// Elementary divisors p^e as (p, e) pairs, with repetitions. Over finite
/// fields every invariant factor is factored completely; over the rationals
/// only powers of t and monic linear factors with rational roots are split
/// off, and any remaining nonlinear part is reported unfactored with the
/// multiplicity it carries.
pub fn elementary_divisors(a: &Matrix) -> Result<Vec<(Poly, usize)>> {
    let field = a.field().clone();
    let mut out = Vec::new();
    for s in invariant_factors(a)? {
        if field.is_finite() {
            out.extend(factor_finite(&s)?);
        } else {
            out.extend(rational_parts(&s)?);
        }
    }
    out.sort_by_key(|(p, e)| (p.degree().unwrap_or(0), *e, p.to_string()));
    Ok(out)
}

pub(crate) fn rational_parts(s: &Poly) -> Result<Vec<(Poly, usize)>> {
    let f = s.field();
    let mut out = Vec::new();
    for (g, m) in crate::factor::squarefree_decomposition(s)? {
        let mut g = g;
        if g.coeff(0).is_zero() {
            let t = Poly::monomial(f, 1);
            g = g.div_rem(&t)?.0;
            out.push((t, m));
        }
        for r in rational_roots(&g) {
            let lin = Poly::from_coeffs(f, vec![r.neg(), Scalar::one(f)]);
            g = g.div_rem(&lin)?.0;
            out.push((lin, m));
        }
        if g.degree().map_or(false, |d| d >= 1) {
            out.push((g, m));
        }
    }
    Ok(out)
}

/// Rational roots of a monic squarefree polynomial over Q with nonzero
/// constant term. Candidates come from the rational root theorem; searches
/// with numerator or denominator bounds beyond 10^12 are skipped.
fn rational_roots(g: &Poly) -> Vec<Scalar> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    let f = g.field();
    if g.degree().map_or(true, |d| d == 0) {
        return Vec::new();
    }
    let mut denom_lcm = BigInt::one();
    for c in g.coeffs() {
        denom_lcm = denom_lcm.lcm(c.rational_value().unwrap().denom());
    }
    let scaled_const = g.coeff(0).rational_value().unwrap() * BigRational::from(denom_lcm.clone());
    debug_assert!(scaled_const.is_integer());
    let b0 = scaled_const.to_integer().abs();
    if b0.is_zero() {
        return Vec::new();
    }
    const BOUND: u64 = 1_000_000_000_000;
    let (Some(b0), Some(dl)) = (b0.to_u64(), denom_lcm.to_u64()) else {
        return Vec::new();
    };
    if b0 > BOUND || dl > BOUND {
        return Vec::new();
    }
    let mut roots = Vec::new();
    for p in divisors(b0) {
        for q in divisors(dl) {
            for sign in [1i64, -1] {
                let r = BigRational::new(BigInt::from(sign) * BigInt::from(p), BigInt::from(q));
                let cand = Scalar::from_rational(f, r).unwrap();
                if g.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

fn divisors(m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= m {
        if m % i == 0 {
            out.push(i);
            if i != m / i {
                out.push(m / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

/// Number of size-1 Jordan cells of A at lambda,
/// n - 2 rank(A - lambda I) + rank((A - lambda I)^2).
pub fn jordan_size1_count(a: &Matrix, lambda: &Scalar) -> Result<usize> {
    let n = a.size()?;
    let shifted = a.sub(&Matrix::scalar_matrix(lambda, n));
    let r1 = shifted.rank() as isize;
    let r2 = shifted.mul(&shifted).rank() as isize;
    let count = n as isize - 2 * r1 + r2;
    if count < 0 {
        return Err(Error::Defect("negative Jordan cell count".into()));
    }
    Ok(count as usize)
}

/// Fitting decomposition: a conjugation of A to N + A_inv (block diagonal)
/// with N nilpotent and A_inv invertible, split along ker(A^n) + im(A^n).
#[derive(Debug, Clone)]
pub struct Fitting {
    pub witness: SimilarityWitness,
    pub nilpotent: Matrix,
    pub invertible: Matrix,
}

pub fn fitting(a: &Matrix) -> Result<Fitting> {
    let n = a.size()?;
    let f = a.field();
    let b = a.pow(n);
    let mut cols = b.kernel_basis();
    let k = cols.len();
    for j in b.column_basis() {
        cols.push(b.column(j));
    }
    let p = Matrix::from_columns(f, n, &cols);
    let transform = p
        .inverse()
        .map_err(|_| Error::Defect("kernel and image of A^n do not span".into()))?;
    let c = transform.mul(a).mul(&p);
    if !c.block(0, k, k, n).is_zero_matrix() || !c.block(k, 0, n, k).is_zero_matrix() {
        return Err(Error::Defect("Fitting blocks are not invariant".into()));
    }
    let nilpotent = c.block(0, 0, k, k);
    let invertible = c.block(k, k, n, n);
    if !nilpotent.pow(k).is_zero_matrix() {
        return Err(Error::Defect("Fitting kernel block is not nilpotent".into()));
    }
    if invertible.det()?.is_zero() {
        return Err(Error::Defect("Fitting image block is not invertible".into()));
    }
    let witness = SimilarityWitness::new(a.clone(), c, transform)?;
    Ok(Fitting { witness, nilpotent, invertible })
}

/// For block upper triangular [[A, C], [0, B]] with coprime characteristic
/// polynomials, produces the witness [[I, X], [0, I]] onto A + B (block
/// diagonal) through the Sylvester equation A X - X B = C.
pub fn roth_merge(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<SimilarityWitness> {
    let n = a.size()?;
    let p = b.size()?;
    if c.rows() != n || c.cols() != p {
        return Err(Error::ShapeMismatch(format!(
            "connector must be {}x{}, got {}x{}",
            n,
            p,
            c.rows(),
            c.cols()
        )));
    }
    let f = a.field();
    let g = a.char_poly()?.gcd(&b.char_poly()?);
    if !g.is_one() {
        return Err(Error::NotCoprime { gcd_degree: g.degree().unwrap() });
    }
    let unknowns = n * p;
    let mut sys = Matrix::zeros(f, unknowns, unknowns);
    let mut rhs = Matrix::zeros(f, unknowns, 1);
    for r in 0..n {
        for s in 0..p {
            let eq = r * p + s;
            for k in 0..n {
                let v = sys.get(eq, k * p + s).add(a.get(r, k));
                sys.set(eq, k * p + s, v);
            }
            for k in 0..p {
                let v = sys.get(eq, r * p + k).sub(b.get(k, s));
                sys.set(eq, r * p + k, v);
            }
            rhs.set(eq, 0, c.get(r, s).clone());
        }
    }
    let sol = linear_solve(&sys, &rhs)?;
    let x = sol
        .particular
        .ok_or_else(|| Error::Defect("coprime Sylvester equation has no solution".into()))?;
    let mut xm = Matrix::zeros(f, n, p);
    for r in 0..n {
        for s in 0..p {
            xm.set(r, s, x.get(r * p + s, 0).clone());
        }
    }
    let mut source = a.direct_sum(b);
    source.set_block(0, n, c);
    let mut transform = Matrix::identity(f, n + p);
    transform.set_block(0, n, &xm);
    SimilarityWitness::new(source, a.direct_sum(b), transform)
}

/// Witness from a good cyclic matrix onto the companion matrix of its
/// characteristic polynomial, through the Krylov basis of e_1.
pub fn good_cyclic_to_companion(m: &Matrix) -> Result<SimilarityWitness> {
    if !m.is_good_cyclic() {
        return Err(Error::NotGoodCyclic);
    }
    let n = m.rows();
    let f = m.field();
    let mut cols = Vec::with_capacity(n);
    if n > 0 {
        let mut v = Matrix::unit_column(f, n, 0);
        for _ in 0..n {
            cols.push(v.clone());
            v = m.mul(&v);
        }
    }
    let basis = Matrix::from_columns(f, n, &cols);
    let target = Matrix::companion(&m.char_poly()?)?;
    SimilarityWitness::new(m.clone(), target, basis.inverse()?)
}

/// Conjugates a trace-zero matrix onto one whose diagonal vanishes
/// identically. Fails with `ScalarInput` exactly on nonzero scalar matrices
/// (which are fixed by conjugation).
pub fn zero_diagonal_similarity(a: &Matrix) -> Result<SimilarityWitness> {
    let _ = a.size()?;
    if !a.trace()?.is_zero() {
        return Err(Error::TraceMismatch("zero-diagonal form requires trace zero".into()));
    }
    if has_zero_diagonal(a) {
        return SimilarityWitness::identity(a);
    }
    if a.is_scalar_matrix() {
        return Err(Error::ScalarInput);
    }
    let w = zero_diagonal_worker(a)?;
    for i in 0..w.target().rows() {
        if !w.target().get(i, i).is_zero() {
            return Err(Error::Defect("zero-diagonal recursion left a nonzero diagonal entry".into()));
        }
    }
    Ok(w)
}

fn non_eigenvector(a: &Matrix) -> Option<Matrix> {
    let n = a.rows();
    let f = a.field();
    let units: Vec<Matrix> = (0..n).map(|i| Matrix::unit_column(f, n, i)).collect();
    let mut candidates = units.clone();
    for i in 0..n {
        for j in i + 1..n {
            candidates.push(units[i].add(&units[j]));
        }
    }
    candidates.into_iter().find(|v| {
        let pair = Matrix::from_columns(f, n, &[v.clone(), a.mul(v)]);
        pair.rank() == 2
    })
}

fn extend_to_basis(f: &Field, n: usize, seed: &[Matrix]) -> Result<Matrix> {
    let mut cols = seed.to_vec();
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let cand = Matrix::unit_column(f, n, i);
        let mut trial = cols.clone();
        trial.push(cand.clone());
        if Matrix::from_columns(f, n, &trial).rank() == cols.len() + 1 {
            cols.push(cand);
        }
    }
    if cols.len() != n {
        return Err(Error::Defect("could not extend to a basis".into()));
    }
    Ok(Matrix::from_columns(f, n, &cols))
}

fn has_zero_diagonal(a: &Matrix) -> bool {
    (0..a.rows()).all(|i| a.get(i, i).is_zero())
}

fn zero_diagonal_worker(a: &Matrix) -> Result<SimilarityWitness> {
    let n = a.rows();
    let f = a.field().clone();
    if has_zero_diagonal(a) {
        return SimilarityWitness::identity(a);
    }
    let v = non_eigenvector(a)
        .ok_or_else(|| Error::Defect("scalar block reached the zero-diagonal recursion".into()))?;
    let av = a.mul(&v);
    let basis = extend_to_basis(&f, n, &[v, av])?;
    let binv = basis.inverse()?;
    let mut current = binv.mul(a).mul(&basis);
    let mut wit = SimilarityWitness::from_parts(a.clone(), current.clone(), binv, basis)?;
    if !current.get(0, 0).is_zero() {
        return Err(Error::Defect("Krylov pair did not clear the leading diagonal entry".into()));
    }
    let mut tail = current.block(1, 1, n, n);
    if tail.is_scalar_matrix() && !tail.is_zero_matrix() {
        if n - 1 < 2 {
            return Err(Error::Defect("nonzero scalar tail of size one".into()));
        }
        let w_r = current.block(0, 1, 1, n);
        let mut l = Matrix::identity(&f, n);
        if w_r.is_zero_matrix() {
            let mut x = Matrix::zeros(&f, 1, n - 1);
            x.set(0, 1, Scalar::one(&f));
            l.set_block(0, 1, &x);
        } else {
            let k0 = (0..n - 1).find(|&j| !w_r.get(0, j).is_zero()).unwrap();
            let j = if k0 == 0 { 1 } else { 0 };
            let mut u = Matrix::zeros(&f, n - 1, 1);
            u.set(j, 0, Scalar::one(&f));
            u.set(k0, 0, w_r.get(0, j).div(w_r.get(0, k0))?.neg());
            l.set_block(1, 0, &u);
        }
        let l_inv = l.inverse()?;
        let stirred = l.mul(&current).mul(&l_inv);
        let step = SimilarityWitness::from_parts(current, stirred.clone(), l, l_inv)?;
        wit = wit.compose(&step)?;
        current = stirred;
        if !current.get(0, 0).is_zero() {
            return Err(Error::Defect("stir disturbed the leading diagonal entry".into()));
        }
        tail = current.block(1, 1, n, n);
        if tail.is_scalar_matrix() && !tail.is_zero_matrix() {
            return Err(Error::Defect("stir left a scalar tail".into()));
        }
    }
    let sub = zero_diagonal_worker(&tail)?;
    let one = Matrix::identity(&f, 1);
    let lift = one.direct_sum(sub.transform());
    let lift_inv = one.direct_sum(sub.transform_inv());
    let target = lift.mul(&current).mul(&lift_inv);
    let step = SimilarityWitness::from_parts(current, target, lift, lift_inv)?;
    wit.compose(&step)
}
