use crate::canonical::{elementary_divisors, witness_similar, SimilarityWitness};
use crate::certify::{cert_conjugate, cert_direct_sum, Certificate, SummandKind};
use crate::cyclicfit::{wp_from_matrix, wp_subtract_idempotent};
use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Scalar};
use crate::matrix::{linear_solve, Matrix};
use crate::poly::Poly;

/// Outcome of the even-multiplicity test: in characteristic 2 a matrix is a
/// sum of two idempotents exactly when every elementary divisor over an
/// irreducible other than t and t - 1 appears with an even exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoIdempotentVerdict {
    pub decomposable: bool,
    pub offending: Option<(Poly, usize)>,
}

fn require_char2(field: &Field) -> Result<()> {
    if field.characteristic() != 2 {
        return Err(Error::WrongCharacteristic { expected: 2, found: field.characteristic() });
    }
    Ok(())
}

fn exempt_bases(field: &Field) -> (Poly, Poly) {
    (Poly::from_i64(field, &[0, 1]), Poly::from_i64(field, &[1, 1]))
}

fn idem(parts: Vec<Matrix>) -> Vec<(SummandKind, Matrix)> {
    parts.into_iter().map(|m| (SummandKind::Idempotent, m)).collect()
}

pub fn decide_two_idempotents_char2(a: &Matrix) -> Result<TwoIdempotentVerdict> {
    require_char2(a.field())?;
    let (t, t1) = exempt_bases(a.field());
    for (p, e) in elementary_divisors(a)? {
        if p != t && p != t1 && e % 2 == 1 {
            return Ok(TwoIdempotentVerdict { decomposable: false, offending: Some((p, e)) });
        }
    }
    Ok(TwoIdempotentVerdict { decomposable: true, offending: None })
}

/// Particular solution of the linear condition X P + P X = X^2 + X for a
/// companion matrix X. The companion shifts basis vectors, so the columns
/// obey p_{j+1} = X p_j - b_j starting from any first column, and
/// Cayley-Hamilton settles the last column whenever the condition is
/// solvable at all.
fn sylvester_particular(x: &Matrix) -> Result<Matrix> {
    let field = x.field().clone();
    let n = x.rows();
    let b = x.mul(x).add(x);
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    cols.push(vec![Scalar::zero(&field); n]);
    for j in 0..n.saturating_sub(1) {
        let mut next = Vec::with_capacity(n);
        for r in 0..n {
            let mut acc = b.get(r, j).neg();
            for c in 0..n {
                let xv = x.get(r, c);
                if !xv.is_zero() && !cols[j][c].is_zero() {
                    acc = acc.add(&xv.mul(&cols[j][c]));
                }
            }
            next.push(acc);
        }
        cols.push(next);
    }
    let p0 = Matrix::from_fn(&field, n, n, |r, c| cols[c][r].clone());
    if x.mul(&p0).add(&p0.mul(x)) != b {
        return Err(Error::Defect("linear exchange condition has no solution at this block".into()));
    }
    Ok(p0)
}

/// Searches the affine solution space p0 + F[X] of the linear condition for
/// an idempotent element. Powers of X commute, so squaring is
/// Frobenius-linear on the space and idempotency becomes a GF(2)-linear
/// system in the GF(2)-coordinates of the coefficients.
fn idempotent_in_affine_space(x: &Matrix, p0: &Matrix) -> Result<Matrix> {
    let field = x.field().clone();
    let n = x.rows();
    let k = field
        .extension_degree()
        .ok_or_else(|| Error::Precondition("the pair solver needs a finite coefficient field".into()))?;
    let gf2 = FieldDescriptor::prime_field(2)?;
    let mut basis = Vec::with_capacity(k);
    for s in 0..k {
        let mut v = vec![0u64; s + 1];
        v[s] = 1;
        basis.push(Scalar::from_coeffs(&field, &v)?);
    }
    let mut powers = Vec::with_capacity(2 * n);
    let mut acc = Matrix::identity(&field, n);
    for _ in 0..2 * n {
        powers.push(acc.clone());
        acc = acc.mul(x);
    }
    let rhs_mat = p0.mul(p0).add(p0);
    let mut sys = Matrix::zeros(&gf2, n * n * k, n * k);
    let mut rhs = Matrix::zeros(&gf2, n * n * k, 1);
    let one = Scalar::one(&gf2);
    for i in 0..n {
        let linear = p0.mul(&powers[i]).add(&powers[i].mul(p0)).add(&powers[i]);
        for s in 0..k {
            let square = basis[s].mul(&basis[s]);
            let contrib = powers[2 * i].scale(&square).add(&linear.scale(&basis[s]));
            for r in 0..n {
                for c in 0..n {
                    let coords = contrib.get(r, c).finite_coeffs().unwrap();
                    for (u, limb) in coords.iter().enumerate() {
                        if *limb == 1 {
                            sys.set((r * n + c) * k + u, i * k + s, one.clone());
                        }
                    }
                }
            }
        }
    }
    for r in 0..n {
        for c in 0..n {
            let coords = rhs_mat.get(r, c).finite_coeffs().unwrap();
            for (u, limb) in coords.iter().enumerate() {
                if *limb == 1 {
                    rhs.set((r * n + c) * k + u, 0, one.clone());
                }
            }
        }
    }
    let solution = linear_solve(&sys, &rhs)?;
    let Some(y) = solution.particular else {
        return Err(Error::Defect("no idempotent in the affine solution space".into()));
    };
    let mut p = p0.clone();
    for i in 0..n {
        let mut coeff = Scalar::zero(&field);
        for s in 0..k {
            if !y.get(i * k + s, 0).is_zero() {
                coeff = coeff.add(&basis[s]);
            }
        }
        if !coeff.is_zero() {
            p = p.add(&powers[i].scale(&coeff));
        }
    }
    Ok(p)
}

fn solve_idempotent_pair(x: &Matrix) -> Result<(Matrix, Matrix)> {
    let p0 = sylvester_particular(x)?;
    let p = idempotent_in_affine_space(x, &p0)?;
    let q = x.sub(&p);
    if !p.is_idempotent() || !q.is_idempotent() {
        return Err(Error::Defect("solved pair fails the idempotency check".into()));
    }
    Ok((p, q))
}

/// Stored splittings of the nilpotent cell C(t^e) into two idempotents for
/// the small sizes, with the solver taking over beyond them.
fn nilpotent_pattern(field: &Field, e: usize) -> Result<(Matrix, Matrix)> {
    match e {
        1 => Ok((Matrix::zeros(field, 1, 1), Matrix::zeros(field, 1, 1))),
        2 => Ok((
            Matrix::from_i64(field, &[&[1, 0], &[1, 0]]),
            Matrix::from_i64(field, &[&[1, 0], &[0, 0]]),
        )),
        3 => Ok((
            Matrix::from_i64(field, &[&[0, 0, 0], &[1, 1, 0], &[0, 0, 0]]),
            Matrix::from_i64(field, &[&[0, 0, 0], &[0, 1, 0], &[0, 1, 0]]),
        )),
        _ => solve_idempotent_pair(&Matrix::companion(&Poly::monomial(field, e))?),
    }
}

/// Two idempotents for the frame of one elementary divisor. Cells at the
/// eigenvalue 1 reuse the nilpotent split, shifted by the identity on one
/// summand; the remaining cells go through the pair solver.
fn block_split(p: &Poly, e: usize) -> Result<Certificate> {
    let field = p.field().clone();
    let (t, t1) = exempt_bases(&field);
    if *p == t {
        let frame = Matrix::companion(&Poly::monomial(&field, e))?;
        let (a, b) = nilpotent_pattern(&field, e)?;
        return Certificate::checked(frame, idem(vec![a, b]));
    }
    if *p == t1 {
        let eye = Matrix::identity(&field, e);
        let frame = eye.add(&Matrix::companion(&Poly::monomial(&field, e))?);
        let (a, b) = nilpotent_pattern(&field, e)?;
        return Certificate::checked(frame, idem(vec![a.add(&eye), b]));
    }
    let frame = Matrix::companion(&p.pow(e))?;
    let (a, b) = solve_idempotent_pair(&frame)?;
    Certificate::checked(frame, idem(vec![a, b]))
}

pub fn construct_two_idempotents_char2(a: &Matrix) -> Result<Certificate> {
    require_char2(a.field())?;
    let verdict = decide_two_idempotents_char2(a)?;
    if let Some((p, e)) = verdict.offending {
        return Err(Error::NotDecomposable(format!(
            "elementary divisor {p} has odd exponent {e} away from t and t - 1"
        )));
    }
    let eldivs = elementary_divisors(a)?;
    if eldivs.is_empty() {
        return Certificate::checked(a.clone(), idem(vec![a.clone(), a.clone()]));
    }
    let parts = eldivs
        .iter()
        .map(|(p, e)| block_split(p, *e))
        .collect::<Result<Vec<_>>>()?;
    let cert = cert_direct_sum(&parts)?;
    if cert.target == *a {
        return Ok(cert);
    }
    let w = witness_similar(a, &cert.target)?;
    cert_conjugate(&cert, &w.invert())
}

/// The rank-n idempotent A = [[I, 0], [I, 0]] and square-zero S with
/// A - S similar to the companion of p(t(t-1)), for monic p of degree n.
pub fn idem_minus_squarezero(p: &Poly) -> Result<(Matrix, Matrix, SimilarityWitness)> {
    let field = p.field().clone();
    let n = p.degree().ok_or(Error::ZeroPolynomial("projector block"))?;
    let eye = Matrix::identity(&field, n);
    let mut a = Matrix::zeros(&field, 2 * n, 2 * n);
    a.set_block(0, 0, &eye);
    a.set_block(n, 0, &eye);
    let mut s = Matrix::zeros(&field, 2 * n, 2 * n);
    s.set_block(0, n, &Matrix::companion(p)?.neg());
    let diff = a.sub(&s);
    let composed = p.compose(&Poly::from_i64(&field, &[0, -1, 1]));
    let witness = witness_similar(&diff, &Matrix::companion(&composed)?)?;
    Ok((a, s, witness))
}

fn three_from_idempotent(target: Matrix, first: Matrix) -> Result<Certificate> {
    let diff = target.sub(&first);
    let verdict = decide_two_idempotents_char2(&diff)?;
    if let Some((p, e)) = verdict.offending {
        return Err(Error::Defect(format!(
            "residue after idempotent subtraction keeps the odd elementary divisor {p} at exponent {e}"
        )));
    }
    let rest = construct_two_idempotents_char2(&diff)?;
    let mut parts = vec![first];
    parts.extend(rest.summands);
    Certificate::checked(target, idem(parts))
}

fn pad_idem_with_zero(c: Certificate) -> Result<Certificate> {
    let z = Matrix::zeros(c.target.field(), c.target.rows(), c.target.cols());
    let mut parts = c.summands;
    parts.push(z);
    Certificate::checked(c.target, idem(parts))
}

fn zero_idem_certificate(field: &Field, n: usize, count: usize) -> Result<Certificate> {
    let z = Matrix::zeros(field, n, n);
    Certificate::checked(z.clone(), idem(vec![z; count]))
}

/// Three idempotents for alpha I_2 + 0_1 when alpha avoids 0 and 1: the
/// padded pair is similar to a frame from which one projector subtraction
/// leaves C(t - 1) + C((t - alpha)^2).
pub fn alpha_pair_idem3(alpha: &Scalar) -> Result<Certificate> {
    let field = alpha.field().clone();
    require_char2(&field)?;
    if alpha.is_zero() || alpha.is_one() {
        return Err(Error::Precondition("the paired eigenvalue must avoid 0 and 1".into()));
    }
    let target = Matrix::scalar_matrix(alpha, 2).direct_sum(&Matrix::zeros(&field, 1, 1));
    let mut frame = Matrix::zeros(&field, 3, 3);
    frame.set(0, 0, alpha.clone());
    frame.set(1, 0, Scalar::one(&field));
    frame.set(2, 2, alpha.clone());
    let first = Matrix::from_i64(&field, &[&[0, 0, 0], &[0, 1, 0], &[0, 1, 0]]);
    let cert = three_from_idempotent(frame, first)?;
    let w = witness_similar(&cert.target, &target)?;
    cert_conjugate(&cert, &w)
}

/// The paired connector of the power-of-one-irreducible case: the residue is
/// two companion blocks with adjusted last columns joined by one subdiagonal
/// unit, and the connector is the column difference it leaves behind.  The
/// connector is idempotent because its block corners carry the trace gap
/// between `p^m` and the adjusted polynomial, which is 1 for odd `m`.
fn pair_join(p: &Poly, d: usize, k: usize, l: usize) -> Result<(Matrix, Matrix, Poly)> {
    let field = p.field().clone();
    let (g_k, g_l, claimed) = if d >= 2 {
        let base = p.add(&Poly::monomial(&field, d - 1));
        (base.pow(k), base.pow(l), base.pow(k + l))
    } else {
        let shifted = p.add(&Poly::one(&field));
        (
            p.pow(k - 1).mul(&shifted),
            p.pow(l - 1).mul(&shifted),
            p.pow(k + l - 2).mul(&shifted.pow(2)),
        )
    };
    let joined = Matrix::companion(&p.pow(k))?.direct_sum(&Matrix::companion(&p.pow(l))?);
    let mut residue = Matrix::companion(&g_k)?.direct_sum(&Matrix::companion(&g_l)?);
    residue.set(k * d, k * d - 1, Scalar::one(&field));
    let s = joined.sub(&residue);
    Ok((joined, s, claimed))
}

pub fn primary_power_idem3(a: &Matrix) -> Result<Certificate> {
    require_char2(a.field())?;
    let field = a.field().clone();
    a.size()?;
    let tr = a.trace()?;
    if !tr.is_zero() && !tr.is_one() {
        return Err(Error::Precondition(format!("trace {tr} is neither 0 nor 1")));
    }
    let eldivs = elementary_divisors(a)?;
    let mut bases: Vec<Poly> = Vec::new();
    for (p, _) in &eldivs {
        if !bases.contains(p) {
            bases.push(p.clone());
        }
    }
    if bases.len() != 1 {
        return Err(Error::Precondition(
            "minimal polynomial is not a power of one irreducible polynomial".into(),
        ));
    }
    let p = &bases[0];
    let d = p.degree().unwrap();
    let ptr = p.trace()?;
    let mut evens = Vec::new();
    let mut odds = Vec::new();
    for (_, e) in &eldivs {
        if e % 2 == 0 {
            evens.push(*e);
        } else {
            odds.push(*e);
        }
    }
    odds.sort_unstable();
    let mut parts = Vec::new();
    for &e in &evens {
        parts.push(pad_idem_with_zero(construct_two_idempotents_char2(&Matrix::companion(
            &p.pow(e),
        )?)?)?);
    }
    if ptr.is_zero() || ptr.is_one() {
        for &k in &odds {
            let frame = Matrix::companion(&p.pow(k))?;
            let corner = Scalar::from_i64(&field, k as i64).mul(&ptr).sub(&Scalar::one(&field));
            let q_poly = if corner.is_zero() {
                Poly::monomial(&field, k * d)
            } else {
                Poly::monomial(&field, k * d - 1).mul(&Poly::from_i64(&field, &[-1, 1]))
            };
            let strip = frame.sub(&Matrix::companion(&q_poly)?);
            parts.push(three_from_idempotent(frame, strip)?);
        }
    } else {
        if odds.len() % 2 != 0 {
            return Err(Error::Defect("oddly many odd powers despite an admissible trace".into()));
        }
        for pair in odds.chunks(2) {
            let (k, l) = (pair[0], pair[1]);
            if d == 1 && k == 1 && l == 1 {
                return Err(Error::Precondition(
                    "a pair of size-1 cells at an eigenvalue outside {0, 1} needs the padded route"
                        .into(),
                ));
            }
            let (joined, s, claimed) = pair_join(p, d, k, l)?;
            let diff = joined.sub(&s);
            if !diff.is_good_cyclic() || diff.char_poly()? != claimed {
                return Err(Error::Defect(
                    "idempotent pair join is not good cyclic with the claimed characteristic polynomial"
                        .into(),
                ));
            }
            parts.push(three_from_idempotent(joined, s)?);
        }
    }
    let cert = cert_direct_sum(&parts)?;
    if cert.target == *a {
        return Ok(cert);
    }
    let w = witness_similar(a, &cert.target)?;
    cert_conjugate(&cert, &w.invert())
}

/// Three idempotents for a matrix with at most one size-1 Jordan cell per
/// eigenvalue, in characteristic 2.
fn idem_core(nm: &Matrix) -> Result<Certificate> {
    let field = nm.field().clone();
    let n = nm.rows();
    if n == 0 {
        return zero_idem_certificate(&field, 0, 3);
    }
    if decide_two_idempotents_char2(nm)?.decomposable {
        return pad_idem_with_zero(construct_two_idempotents_char2(nm)?);
    }
    let eldivs = elementary_divisors(nm)?;
    let mut bases: Vec<Poly> = Vec::new();
    for (p, _) in &eldivs {
        if !bases.contains(p) {
            bases.push(p.clone());
        }
    }
    if bases.len() == 1 {
        return primary_power_idem3(nm);
    }
    let (wp, witness) = wp_from_matrix(nm)?;
    let blocks = Scalar::from_i64(&field, (wp.block_count() - 1) as i64);
    let lambda = nm.trace()?.sub(&blocks);
    if !lambda.is_zero() && !lambda.is_one() {
        return Err(Error::Defect(format!("adjusted trace {lambda} escapes {{0, 1}}")));
    }
    let r_poly = if lambda.is_zero() {
        Poly::monomial(&field, n)
    } else {
        Poly::monomial(&field, n - 1).mul(&Poly::from_i64(&field, &[-1, 1]))
    };
    let (first, _) = wp_subtract_idempotent(&wp, &Scalar::one(&field), &r_poly)?;
    let cert = three_from_idempotent(wp.matrix(), first)?;
    cert_conjugate(&cert, &witness.invert())
}

pub fn pad_three_idempotents_char2(a: &Matrix) -> Result<Certificate> {
    require_char2(a.field())?;
    let n = a.size()?;
    let field = a.field().clone();
    let tr = a.trace()?;
    if !tr.is_zero() && !tr.is_one() {
        return Err(Error::Precondition(format!("trace {tr} is neither 0 nor 1")));
    }
    let m = a.direct_sum(&Matrix::zeros(&field, n, n));
    if decide_two_idempotents_char2(&m)?.decomposable {
        return pad_idem_with_zero(construct_two_idempotents_char2(&m)?);
    }
    let (t, t1) = exempt_bases(&field);
    let eldivs = elementary_divisors(&m)?;
    let mut zero_cells = 0usize;
    let mut one_pairs = 0usize;
    let mut pair_alphas: Vec<Scalar> = Vec::new();
    let mut leftovers: Vec<(Poly, usize)> = Vec::new();
    let mut i = 0;
    while i < eldivs.len() {
        let (p, e) = &eldivs[i];
        if *e == 1 && p.degree() == Some(1) {
            let mut count = 1;
            while i + count < eldivs.len() && eldivs[i + count] == eldivs[i] {
                count += 1;
            }
            if *p == t {
                zero_cells += count;
            } else if *p == t1 {
                one_pairs += count / 2;
                if count % 2 == 1 {
                    leftovers.push((p.clone(), 1));
                }
            } else {
                for _ in 0..count / 2 {
                    pair_alphas.push(p.coeff(0).neg());
                }
                if count % 2 == 1 {
                    leftovers.push((p.clone(), 1));
                }
            }
            i += count;
        } else {
            leftovers.push((p.clone(), *e));
            i += 1;
        }
    }
    if zero_cells < pair_alphas.len() {
        return Err(Error::Defect("fewer padding zeros than paired eigenvalues".into()));
    }
    let spare_zeros = zero_cells - pair_alphas.len();
    if spare_zeros % 2 == 1 {
        leftovers.push((t.clone(), 1));
    }
    let blocks = leftovers
        .iter()
        .map(|(p, e)| Matrix::companion(&p.pow(*e)))
        .collect::<Result<Vec<_>>>()?;
    let core = Matrix::direct_sum_all(&field, &blocks);
    let mut parts = vec![idem_core(&core)?];
    for alpha in &pair_alphas {
        parts.push(alpha_pair_idem3(alpha)?);
    }
    let eye = Matrix::identity(&field, 2);
    let z2 = Matrix::zeros(&field, 2, 2);
    for _ in 0..one_pairs {
        parts.push(Certificate::checked(
            eye.clone(),
            idem(vec![eye.clone(), z2.clone(), z2.clone()]),
        )?);
    }
    for _ in 0..spare_zeros / 2 {
        parts.push(zero_idem_certificate(&field, 2, 3)?);
    }
    let cert = cert_direct_sum(&parts)?;
    if cert.target == m {
        return Ok(cert);
    }
    let w = witness_similar(&m, &cert.target)?;
    cert_conjugate(&cert, &w.invert())
}
