use crate::canonical::{
    elementary_divisors, invariant_factors, rcf, witness_similar, zero_diagonal_similarity,
    SimilarityWitness,
};
use crate::certify::{cert_conjugate, cert_direct_sum, cert_scale, Certificate, SummandKind};
use crate::cyclicfit::{wp_extract, wp_from_matrix, wp_subtract_squarezero, WellPartitioned};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::idempotent2::idem_minus_squarezero;
use crate::matrix::Matrix;
use crate::poly::{Parity, Poly};

/// Outcome of the parity test on the invariant factors: a matrix is a sum of
/// two square-zero matrices exactly when every invariant factor is an even or
/// an odd polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSquareZeroVerdict {
    pub decomposable: bool,
    pub failing_factor: Option<Poly>,
}

pub fn decide_two_squarezero(a: &Matrix) -> Result<TwoSquareZeroVerdict> {
    for s in invariant_factors(a)? {
        if s.parity()? == Parity::Neither {
            return Ok(TwoSquareZeroVerdict { decomposable: false, failing_factor: Some(s) });
        }
    }
    Ok(TwoSquareZeroVerdict { decomposable: true, failing_factor: None })
}

fn sz(parts: Vec<Matrix>) -> Vec<(SummandKind, Matrix)> {
    parts.into_iter().map(|m| (SummandKind::SquareZero, m)).collect()
}

/// The alternating subdiagonal patterns splitting C(t^n) into two square-zero
/// summands: ones at rows 1, 3, 5, ... go into the first, the rest into the
/// second.
fn nilpotent_split(field: &Field, n: usize) -> Result<Certificate> {
    let mut a = Matrix::zeros(field, n, n);
    let mut b = Matrix::zeros(field, n, n);
    let one = Scalar::one(field);
    for i in 1..n {
        if i % 2 == 1 {
            a.set(i, i - 1, one.clone());
        } else {
            b.set(i, i - 1, one.clone());
        }
    }
    let target = Matrix::companion(&Poly::monomial(field, n))?;
    Certificate::checked(target, sz(vec![a, b]))
}

/// Splits C(s) for even s = v(t^2) as the interleaving-permutation transport
/// of [[0, C(v)], [I, 0]] = [[0, 0], [I, 0]] + [[0, C(v)], [0, 0]].
fn even_split(s: &Poly) -> Result<Certificate> {
    let field = s.field().clone();
    let v = s.even_witness()?;
    let m = v.degree().ok_or(Error::ZeroPolynomial("even part"))?;
    let n = 2 * m;
    let cv = Matrix::companion(&v)?;
    let mut s1 = Matrix::zeros(&field, n, n);
    s1.set_block(m, 0, &Matrix::identity(&field, m));
    let mut s2 = Matrix::zeros(&field, n, n);
    s2.set_block(0, m, &cv);
    let frame = s1.add(&s2);
    let mut q = Matrix::zeros(&field, n, n);
    for j in 0..m {
        q.set(j, 2 * j, Scalar::one(&field));
        q.set(m + j, 2 * j + 1, Scalar::one(&field));
    }
    let witness = SimilarityWitness::new(frame.clone(), Matrix::companion(s)?, q.transpose())?;
    let cert = Certificate::checked(frame, sz(vec![s1, s2]))?;
    cert_conjugate(&cert, &witness)
}

/// Splits C(s) for one even-or-odd invariant factor s.
fn companion_split_two(s: &Poly) -> Result<Certificate> {
    let field = s.field().clone();
    let n = s.degree().ok_or(Error::ZeroPolynomial("invariant factor"))?;
    let k = s.t_multiplicity()?;
    if k == n {
        return nilpotent_split(&field, n);
    }
    match s.parity()? {
        Parity::Even => even_split(s),
        Parity::Odd => {
            let power = Poly::monomial(&field, k);
            let (rest, rem) = s.div_rem(&power)?;
            if !rem.is_zero() {
                return Err(Error::Defect("t-power does not divide its own multiple".into()));
            }
            let parts = vec![nilpotent_split(&field, k)?, even_split(&rest)?];
            let cert = cert_direct_sum(&parts)?;
            let witness = witness_similar(&cert.target, &Matrix::companion(s)?)?;
            cert_conjugate(&cert, &witness)
        }
        Parity::Neither => Err(Error::Defect("mixed-parity factor reached the split".into())),
    }
}

pub fn construct_two_squarezero(a: &Matrix) -> Result<Certificate> {
    let verdict = decide_two_squarezero(a)?;
    if let Some(s) = verdict.failing_factor {
        return Err(Error::NotDecomposable(format!(
            "invariant factor {s} is neither even nor odd"
        )));
    }
    let canon = rcf(a)?;
    if canon.factors.is_empty() {
        return Certificate::checked(a.clone(), sz(vec![a.clone(), a.clone()]));
    }
    let parts = canon
        .factors
        .iter()
        .map(companion_split_two)
        .collect::<Result<Vec<_>>>()?;
    let cert = cert_direct_sum(&parts)?;
    if cert.target == *a {
        return Ok(cert);
    }
    cert_conjugate(&cert, &canon.witness.invert())
}

fn strict_upper(b: &Matrix) -> Matrix {
    let n = b.rows();
    Matrix::from_fn(b.field(), n, n, |i, j| {
        if j > i {
            b.get(i, j).clone()
        } else {
            Scalar::zero(b.field())
        }
    })
}

fn zero_certificate(field: &Field, n: usize, count: usize) -> Result<Certificate> {
    let z = Matrix::zeros(field, n, n);
    Certificate::checked(z.clone(), sz(vec![z; count]))
}

pub fn sum_four_squarezero(a: &Matrix) -> Result<Certificate> {
    let n = a.size()?;
    let field = a.field().clone();
    let tr = a.trace()?;
    if !tr.is_zero() {
        return Err(Error::TraceMismatch(format!("trace {tr} is nonzero")));
    }
    if a.is_zero_matrix() {
        return zero_certificate(&field, n, 4);
    }
    if !a.is_scalar_matrix() {
        let witness = zero_diagonal_similarity(a)?;
        let b = witness.target().clone();
        let upper = strict_upper(&b);
        let lower = b.sub(&upper);
        let cu = construct_two_squarezero(&upper)?;
        let cl = construct_two_squarezero(&lower)?;
        let mut parts = cu.summands;
        parts.extend(cl.summands);
        let cert = Certificate::checked(b, sz(parts))?;
        return cert_conjugate(&cert, &witness.invert());
    }
    let p = field.characteristic() as usize;
    if p == 0 || n % p != 0 {
        return Err(Error::Defect("nonzero scalar matrix with zero trace outside p | n".into()));
    }
    let lambda = a.get(0, 0);
    let r = if p == 2 {
        Poly::monomial(&field, 2)
    } else {
        Poly::monomial(&field, p).sub(&Poly::monomial(&field, 1))
    };
    let t_minus_one = Poly::from_i64(&field, &[-1, 1]);
    let shifted = r.compose(&t_minus_one);
    let src = Matrix::identity(&field, p).add(&Matrix::companion(&r)?);
    let witness = witness_similar(&src, &Matrix::companion(&shifted)?)?;
    let ca = cert_conjugate(&construct_two_squarezero(&Matrix::companion(&shifted)?)?, &witness.invert())?;
    let cb = cert_scale(
        &construct_two_squarezero(&Matrix::companion(&r)?)?,
        &Scalar::one(&field).neg(),
    )?;
    let mut parts = ca.summands;
    parts.extend(cb.summands);
    let tile = Certificate::checked(Matrix::identity(&field, p), sz(parts))?;
    let tiled = cert_direct_sum(&vec![tile; n / p])?;
    cert_scale(&tiled, &lambda)
}

/// The rank-n idempotent A = [[I, 0], [I, 0]] and a square-zero S with
/// A - S similar to C(p(t(t-1))), witnessed.
pub fn pair_padding_subtract(q: usize, field: &Field) -> Result<(Matrix, SimilarityWitness)> {
    if field.characteristic() == 2 {
        return Err(Error::Precondition(
            "pairing subtraction needs a field of characteristic other than 2".into(),
        ));
    }
    if q == 0 {
        let void = Matrix::zeros(field, 0, 0);
        return Ok((void.clone(), SimilarityWitness::identity(&void)?));
    }
    let one = Scalar::one(field);
    let i2z2 = Matrix::identity(field, 2).direct_sum(&Matrix::zeros(field, 2, 2));
    let mut blocks = Vec::new();
    let mut witnesses: Vec<SimilarityWitness> = Vec::new();
    for k in 1..=q {
        let kk = Scalar::from_i64(field, k as i64);
        let km1 = Scalar::from_i64(field, k as i64 - 1);
        let root = kk.mul(&km1);
        let linear = Poly::from_coeffs(field, vec![root.neg(), one.clone()]);
        let target = Matrix::companion(&Poly::from_coeffs(
            field,
            vec![kk.mul(&kk), kk.add(&kk).neg(), one.clone()],
        ))?
        .direct_sum(&Matrix::companion(&Poly::from_coeffs(
            field,
            vec![km1.mul(&km1), km1.add(&km1), one.clone()],
        ))?);
        if kk.add(&kk) != one {
            let squared = linear.mul(&linear);
            let (a, s_raw, into_comp) = idem_minus_squarezero(&squared)?;
            let v = witness_similar(&a, &i2z2)?;
            let s_k = v.apply(&s_raw);
            let frame_diff = i2z2.sub(&s_k);
            let carry = SimilarityWitness::new(
                frame_diff,
                a.sub(&s_raw),
                v.transform_inv().clone(),
            )?;
            let rest = witness_similar(into_comp.target(), &target)?;
            blocks.push(s_k);
            witnesses.push(carry.compose(&into_comp)?.compose(&rest)?);
        } else {
            let (a2, t_raw, _) = idem_minus_squarezero(&linear)?;
            let i1z1 = Matrix::identity(field, 1).direct_sum(&Matrix::zeros(field, 1, 1));
            let v2 = witness_similar(&a2, &i1z1)?;
            let t_k = v2.apply(&t_raw);
            let doubled = t_k.direct_sum(&t_k);
            let frame4 = i1z1.direct_sum(&i1z1);
            let u = witness_similar(&frame4, &i2z2)?;
            let s_k = u.apply(&doubled);
            let frame_diff = i2z2.sub(&s_k);
            let carry = SimilarityWitness::new(
                frame_diff,
                frame4.sub(&doubled),
                u.transform_inv().clone(),
            )?;
            let rest = witness_similar(&frame4.sub(&doubled), &target)?;
            blocks.push(s_k);
            witnesses.push(carry.compose(&rest)?);
        }
    }
    let frame_total = Matrix::direct_sum_all(field, &vec![i2z2.clone(); q]);
    let s_total = Matrix::direct_sum_all(field, &blocks);
    let mut joined = witnesses[0].clone();
    for w in &witnesses[1..] {
        joined = joined.direct_sum(w)?;
    }
    let padded = Matrix::identity(field, 2 * q).direct_sum(&Matrix::zeros(field, 2 * q, 2 * q));
    let g = witness_similar(&padded, &frame_total)?;
    let s = g.unapply(&s_total);
    if !s.is_square_zero() {
        return Err(Error::Defect("assembled pairing connector is not square-zero".into()));
    }
    let carry = SimilarityWitness::new(
        padded.sub(&s),
        frame_total.sub(&s_total),
        g.transform().clone(),
    )?;
    Ok((s, carry.compose(&joined)?))
}

/// Wraps a two-summand certificate on `diff = target - s0` into a
/// three-summand certificate on `target`; a negative residue verdict means a
/// broken pipeline invariant, not bad input.
fn three_from_connector(target: Matrix, s0: Matrix) -> Result<Certificate> {
    let diff = target.sub(&s0);
    let verdict = decide_two_squarezero(&diff)?;
    if !verdict.decomposable {
        return Err(Error::Defect(format!(
            "residue after connector subtraction has mixed-parity factor {}",
            verdict.failing_factor.unwrap()
        )));
    }
    let rest = construct_two_squarezero(&diff)?;
    let mut parts = vec![s0];
    parts.extend(rest.summands);
    Certificate::checked(target, sz(parts))
}

fn pad_two_with_zero(c: Certificate) -> Result<Certificate> {
    let z = Matrix::zeros(c.target.field(), c.target.rows(), c.target.cols());
    let mut parts = c.summands;
    parts.push(z);
    Certificate::checked(c.target, sz(parts))
}

/// Three square-zero summands for core + I_2q + 0_2q, following the trace
/// case split of the padded-form proposition.
fn proposition_three(
    core: &Matrix,
    structure: Option<&WellPartitioned>,
    q: usize,
) -> Result<Certificate> {
    let field = core.field().clone();
    let p_sz = core.rows();
    let padded = Matrix::identity(&field, 2 * q).direct_sum(&Matrix::zeros(&field, 2 * q, 2 * q));
    let (s_pad, _) = pair_padding_subtract(q, &field)?;
    if core.trace()?.is_zero() {
        let cert_core = match structure {
            None => pad_two_with_zero(construct_two_squarezero(core)?)?,
            Some(wp) => {
                let (s_n, _) = wp_subtract_squarezero(wp, &Poly::monomial(&field, p_sz))?;
                three_from_connector(core.clone(), s_n)?
            }
        };
        if q == 0 {
            return Ok(cert_core);
        }
        let cert_pad = three_from_connector(padded, s_pad)?;
        return cert_direct_sum(&[cert_core, cert_pad]);
    }
    let Some(wp) = structure else {
        return Err(Error::Defect("nonzero-trace core without block structure".into()));
    };
    if p_sz < 2 {
        return Err(Error::Defect("nonzero-trace core smaller than 2x2".into()));
    }
    let qq = Scalar::from_i64(&field, q as i64);
    let square = Poly::from_coeffs(
        &field,
        vec![qq.mul(&qq), qq.add(&qq), Scalar::one(&field)],
    );
    let r_poly = Poly::monomial(&field, p_sz - 2).mul(&square);
    let (s_n, _) = wp_subtract_squarezero(wp, &r_poly)?;
    three_from_connector(core.direct_sum(&padded), s_n.direct_sum(&s_pad))
}

pub fn pad_three_squarezero(a: &Matrix) -> Result<Certificate> {
    let n = a.size()?;
    let field = a.field().clone();
    let tr = a.trace()?;
    if !tr.is_zero() {
        return Err(Error::TraceMismatch(format!("trace {tr} is nonzero")));
    }
    let m = a.direct_sum(&Matrix::zeros(&field, n, n));
    if field.characteristic() == 2 {
        return three_squarezero_char2(&m);
    }
    if decide_two_squarezero(&m)?.decomposable {
        return pad_two_with_zero(construct_two_squarezero(&m)?);
    }
    let ext = wp_extract(&m)?;
    let inv = ext.alpha.inv()?;
    let core_scaled = ext.n.scale(&inv);
    let (core, core_witness, rescaled) = match &ext.structure {
        None => (core_scaled.clone(), SimilarityWitness::identity(&core_scaled)?, None),
        Some(wp) => {
            let rescaled = wp.rescale(&ext.alpha)?;
            let target = rescaled.matrix();
            let w = witness_similar(&core_scaled, &target)?;
            (target, w, Some(rescaled))
        }
    };
    let cert_prop = proposition_three(&core, rescaled.as_ref(), ext.q)?;
    let cert_frame = if ext.r > 2 * ext.q {
        let zeros = zero_certificate(&field, ext.r - 2 * ext.q, 3)?;
        cert_direct_sum(&[cert_prop, zeros])?
    } else {
        cert_prop
    };
    let mut big = core_witness;
    if 2 * ext.q + ext.r > 0 {
        let tail = Matrix::identity(&field, 2 * ext.q)
            .direct_sum(&Matrix::zeros(&field, ext.r, ext.r));
        big = big.direct_sum(&SimilarityWitness::identity(&tail)?)?;
    }
    let cert_scaled_frame = cert_conjugate(&cert_frame, &big.invert())?;
    let scaled_witness = SimilarityWitness::new(
        m.scale(&inv),
        ext.witness.target().scale(&inv),
        ext.witness.transform().clone(),
    )?;
    let cert_scaled = cert_conjugate(&cert_scaled_frame, &scaled_witness.invert())?;
    cert_scale(&cert_scaled, &ext.alpha)
}

/// Per-invariant-factor constructions for a primary-power minimal polynomial
/// in characteristic 2.
fn char2_primary(nm: &Matrix, p: &Poly) -> Result<Certificate> {
    let field = nm.field().clone();
    let canon = rcf(nm)?;
    let d = p.degree().ok_or(Error::ZeroPolynomial("primary base"))?;
    if p.trace()?.is_zero() {
        let parts = canon
            .factors
            .iter()
            .map(|s| {
                let size = s.degree().unwrap();
                let comp = Matrix::companion(s)?;
                let mut strip = Matrix::zeros(&field, size, size);
                for i in 0..size {
                    strip.set(i, size - 1, comp.get(i, size - 1).clone());
                }
                let diff = comp.sub(&strip);
                if diff != Matrix::companion(&Poly::monomial(&field, size))? {
                    return Err(Error::Defect("stripped companion is not the plain shift".into()));
                }
                if !strip.is_square_zero() {
                    return Err(Error::Defect("stripped column is not square-zero".into()));
                }
                three_from_connector(comp, strip)
            })
            .collect::<Result<Vec<_>>>()?;
        let cert = cert_direct_sum(&parts)?;
        if cert.target == *nm {
            return Ok(cert);
        }
        return cert_conjugate(&cert, &canon.witness.invert());
    }
    let mut evens = Vec::new();
    let mut odds = Vec::new();
    for s in &canon.factors {
        let k = s.degree().unwrap() / d;
        if k % 2 == 0 {
            evens.push(k);
        } else {
            odds.push(k);
        }
    }
    if odds.len() % 2 != 0 {
        return Err(Error::Defect("oddly many odd powers despite zero trace".into()));
    }
    let mut parts = Vec::new();
    for &k in &evens {
        parts.push(pad_two_with_zero(construct_two_squarezero(&Matrix::companion(
            &p.pow(k),
        )?)?)?);
    }
    for pair in odds.chunks(2) {
        let (k, l) = (pair[0], pair[1]);
        let joined = Matrix::companion(&p.pow(k))?
            .direct_sum(&Matrix::companion(&p.pow(l))?);
        let mut s = Matrix::zeros(&field, (k + l) * d, (k + l) * d);
        s.set(k * d, k * d - 1, Scalar::one(&field));
        let diff = joined.sub(&s);
        if !diff.is_good_cyclic() || diff.char_poly()? != p.pow(k + l) {
            return Err(Error::Defect(
                "odd-pair join is not good cyclic with the claimed characteristic polynomial".into(),
            ));
        }
        parts.push(three_from_connector(joined, s)?);
    }
    let cert = cert_direct_sum(&parts)?;
    if cert.target == *nm {
        return Ok(cert);
    }
    let w = witness_similar(nm, &cert.target)?;
    cert_conjugate(&cert, &w.invert())
}

/// Three square-zero summands for a matrix with at most one size-1 Jordan
/// cell per eigenvalue, in characteristic 2.
fn char2_core(nm: &Matrix) -> Result<Certificate> {
    let field = nm.field().clone();
    let n = nm.rows();
    if n == 0 {
        return zero_certificate(&field, 0, 3);
    }
    if decide_two_squarezero(nm)?.decomposable {
        return pad_two_with_zero(construct_two_squarezero(nm)?);
    }
    let eldivs = elementary_divisors(nm)?;
    let mut bases: Vec<Poly> = Vec::new();
    for (p, _) in &eldivs {
        if !bases.contains(p) {
            bases.push(p.clone());
        }
    }
    if bases.len() == 1 {
        return char2_primary(nm, &bases[0]);
    }
    let (wp, witness) = wp_from_matrix(nm)?;
    let (s, _) = wp_subtract_squarezero(&wp, &Poly::monomial(&field, n))?;
    let cert = three_from_connector(wp.matrix(), s)?;
    cert_conjugate(&cert, &witness.invert())
}

pub fn three_squarezero_char2(a: &Matrix) -> Result<Certificate> {
    a.size()?;
    let field = a.field().clone();
    if field.characteristic() != 2 {
        return Err(Error::WrongCharacteristic { expected: 2, found: field.characteristic() });
    }
    let tr = a.trace()?;
    if !tr.is_zero() {
        return Err(Error::TraceMismatch(format!("trace {tr} is nonzero")));
    }
    if decide_two_squarezero(a)?.decomposable {
        return pad_two_with_zero(construct_two_squarezero(a)?);
    }
    let eldivs = elementary_divisors(a)?;
    let mut leftovers: Vec<(Poly, usize)> = Vec::new();
    let mut pair_alphas: Vec<Scalar> = Vec::new();
    let mut i = 0;
    while i < eldivs.len() {
        let (p, e) = &eldivs[i];
        if *e == 1 && p.degree() == Some(1) {
            let mut count = 1;
            while i + count < eldivs.len() && eldivs[i + count] == eldivs[i] {
                count += 1;
            }
            for _ in 0..count / 2 {
                pair_alphas.push(p.coeff(0).neg());
            }
            if count % 2 == 1 {
                leftovers.push((p.clone(), 1));
            }
            i += count;
        } else {
            leftovers.push((p.clone(), *e));
            i += 1;
        }
    }
    let blocks = leftovers
        .iter()
        .map(|(p, e)| Matrix::companion(&p.pow(*e)))
        .collect::<Result<Vec<_>>>()?;
    let core = Matrix::direct_sum_all(&field, &blocks);
    let mut parts = vec![char2_core(&core)?];
    for alpha in &pair_alphas {
        let target = Matrix::scalar_matrix(alpha, 2);
        let mut s1 = Matrix::zeros(&field, 2, 2);
        s1.set(0, 1, Scalar::one(&field));
        parts.push(three_from_connector(target, s1)?);
    }
    let cert = cert_direct_sum(&parts)?;
    if cert.target == *a {
        return Ok(cert);
    }
    let w = witness_similar(a, &cert.target)?;
    cert_conjugate(&cert, &w.invert())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::fitting;
    use crate::certify::{enumerate_matrices, oracle_two_squarezero, random_trace_zero, SeededRng};
    use crate::field::FieldDescriptor;

    fn rationals() -> Field {
        FieldDescriptor::rationals()
    }

    fn gf(p: u64) -> Field {
        FieldDescriptor::prime_field(p).unwrap()
    }

    fn gf4() -> Field {
        FieldDescriptor::extension_field(2, &[1, 1, 1]).unwrap()
    }

    fn poly(f: &Field, coeffs: &[i64]) -> Poly {
        Poly::from_i64(f, coeffs)
    }

    #[test]
    fn decide_matches_oracle_on_all_gf2_2x2() {
        let f = gf(2);
        for m in enumerate_matrices(&f, 2, 2).unwrap() {
            let verdict = decide_two_squarezero(&m).unwrap();
            let oracle = oracle_two_squarezero(&m).unwrap();
            assert_eq!(verdict.decomposable, oracle.is_some(), "disagreement on {m:?}");
            assert_eq!(verdict.decomposable, verdict.failing_factor.is_none());
            if verdict.decomposable {
                let cert = construct_two_squarezero(&m).unwrap();
                assert!(cert.verify().passed());
                assert_eq!(cert.summands.len(), 2);
            } else {
                assert!(matches!(
                    construct_two_squarezero(&m),
                    Err(Error::NotDecomposable(_))
                ));
            }
        }
    }

    #[test]
    fn decide_names_the_failing_factor() {
        let f = gf(2);
        let verdict = decide_two_squarezero(&Matrix::identity(&f, 2)).unwrap();
        assert!(!verdict.decomposable);
        assert_eq!(verdict.failing_factor.unwrap().to_string(), "t + 1");

        let q = rationals();
        assert!(decide_two_squarezero(&Matrix::companion(&poly(&q, &[-1, 0, 1])).unwrap())
            .unwrap()
            .decomposable);
        assert!(decide_two_squarezero(&Matrix::from_i64(&q, &[&[0, 1], &[0, 0]]))
            .unwrap()
            .decomposable);
    }

    #[test]
    fn construct_matches_the_printed_patterns() {
        let q = rationals();
        let c3 = Matrix::companion(&poly(&q, &[0, 0, 0, 1])).unwrap();
        let cert = construct_two_squarezero(&c3).unwrap();
        assert!(cert.verify().passed());
        let mut e21 = Matrix::zeros(&q, 3, 3);
        e21.set(1, 0, Scalar::one(&q));
        let mut e32 = Matrix::zeros(&q, 3, 3);
        e32.set(2, 1, Scalar::one(&q));
        assert_eq!(cert.summands, vec![e21, e32]);

        let even = Matrix::companion(&poly(&q, &[-1, 0, 1])).unwrap();
        let cert = construct_two_squarezero(&even).unwrap();
        assert!(cert.verify().passed());
        assert_eq!(
            cert.summands,
            vec![
                Matrix::from_i64(&q, &[&[0, 0], &[1, 0]]),
                Matrix::from_i64(&q, &[&[0, 1], &[0, 0]]),
            ]
        );

        let zero = Matrix::zeros(&q, 2, 2);
        let cert = construct_two_squarezero(&zero).unwrap();
        assert_eq!(cert.summands, vec![zero.clone(), zero]);
    }

    #[test]
    fn construct_splits_odd_factors_through_the_coprime_route() {
        for f in [rationals(), gf(5)] {
            let s = poly(&f, &[0, -1, 0, 0, 0, 1]);
            let cert = construct_two_squarezero(&Matrix::companion(&s).unwrap()).unwrap();
            assert!(cert.verify().passed());
        }
    }

    #[test]
    fn four_squarezero_spec_shapes() {
        let q = rationals();
        let a = Matrix::from_i64(&q, &[&[1, 0], &[0, -1]]);
        let cert = sum_four_squarezero(&a).unwrap();
        assert!(cert.verify().passed());
        assert_eq!(cert.summands.len(), 4);
        assert_eq!(cert.summands.iter().filter(|s| s.is_zero_matrix()).count(), 2);

        let zero = Matrix::zeros(&q, 3, 3);
        let cert = sum_four_squarezero(&zero).unwrap();
        assert_eq!(cert.summands.len(), 4);
        assert!(cert.summands.iter().all(|s| s.is_zero_matrix()));

        let f2 = gf(2);
        let cert = sum_four_squarezero(&Matrix::identity(&f2, 2)).unwrap();
        assert!(cert.verify().passed());
        assert_eq!(cert.summands.len(), 4);

        assert!(matches!(
            sum_four_squarezero(&Matrix::identity(&q, 2)),
            Err(Error::TraceMismatch(_))
        ));
    }

    #[test]
    fn four_squarezero_scalar_tiles() {
        let f3 = gf(3);
        let cert = sum_four_squarezero(&Matrix::scalar_matrix(&Scalar::from_i64(&f3, 2), 3))
            .unwrap();
        assert!(cert.verify().passed());

        let f4 = gf4();
        let omega = Scalar::from_coeffs(&f4, &[0, 1]).unwrap();
        let cert = sum_four_squarezero(&Matrix::scalar_matrix(&omega, 4)).unwrap();
        assert!(cert.verify().passed());
        assert_eq!(cert.target, Matrix::scalar_matrix(&omega, 4));
    }

    #[test]
    fn pad_three_spec_shapes() {
        let q = rationals();
        let cert = pad_three_squarezero(&Matrix::zeros(&q, 1, 1)).unwrap();
        assert_eq!(cert.target, Matrix::zeros(&q, 2, 2));
        assert!(cert.summands.iter().all(|s| s.is_zero_matrix()));
        assert_eq!(cert.summands.len(), 3);

        let jog = Matrix::from_i64(&q, &[&[0, 1], &[0, 0]]);
        let cert = pad_three_squarezero(&jog).unwrap();
        assert!(cert.verify().passed());
        assert_eq!(cert.target.rows(), 4);
        assert_eq!(cert.summands.len(), 3);
        assert!(cert.summands.iter().any(|s| s.is_zero_matrix()));

        let diag = Matrix::from_i64(&q, &[&[1, 0], &[0, -1]]);
        let cert = pad_three_squarezero(&diag).unwrap();
        assert!(cert.verify().passed());
        assert_eq!(cert.target, diag.direct_sum(&Matrix::zeros(&q, 2, 2)));
        assert_eq!(cert.summands.len(), 3);
    }

    #[test]
    fn pad_three_runs_the_full_pipeline() {
        let q = rationals();
        let a = Matrix::from_fn(&q, 4, 4, |i, j| {
            if i != j {
                Scalar::zero(&q)
            } else if i < 3 {
                Scalar::from_i64(&q, 3)
            } else {
                Scalar::from_i64(&q, -9)
            }
        });
        let cert = pad_three_squarezero(&a).unwrap();
        assert!(cert.verify().passed());
        assert_eq!(cert.target.rows(), 8);

        let f5 = gf(5);
        let b = Matrix::from_fn(&f5, 4, 4, |i, j| {
            if i != j {
                Scalar::zero(&f5)
            } else if i < 3 {
                Scalar::from_i64(&f5, 3)
            } else {
                Scalar::one(&f5)
            }
        });
        let cert = pad_three_squarezero(&b).unwrap();
        assert!(cert.verify().passed());

        let c = Matrix::from_fn(&q, 3, 3, |i, j| {
            if i != j {
                Scalar::zero(&q)
            } else if i < 2 {
                Scalar::one(&q)
            } else {
                Scalar::from_i64(&q, -2)
            }
        });
        let cert = pad_three_squarezero(&c).unwrap();
        assert!(cert.verify().passed());
        assert_eq!(cert.target.rows(), 6);
    }

    #[test]
    fn pair_padding_matches_the_stated_similarity() {
        let q = rationals();
        let (s, w) = pair_padding_subtract(1, &q).unwrap();
        assert!(s.is_square_zero());
        let padded = Matrix::identity(&q, 2).direct_sum(&Matrix::zeros(&q, 2, 2));
        let diff = padded.sub(&s);
        assert_eq!(w.source(), &diff);
        assert_eq!(
            diff.char_poly().unwrap(),
            poly(&q, &[0, 0, 1]).mul(&poly(&q, &[1, -2, 1]))
        );
        assert_eq!(
            w.target(),
            &Matrix::companion(&poly(&q, &[1, -2, 1]))
                .unwrap()
                .direct_sum(&Matrix::companion(&poly(&q, &[0, 0, 1])).unwrap())
        );

        let (void, _) = pair_padding_subtract(0, &q).unwrap();
        assert_eq!(void.rows(), 0);

        assert!(matches!(pair_padding_subtract(1, &gf(2)), Err(Error::Precondition(_))));
    }

    #[test]
    fn pair_padding_takes_the_halved_branch() {
        let f3 = gf(3);
        let (s, w) = pair_padding_subtract(2, &f3).unwrap();
        assert!(s.is_square_zero());
        assert_eq!(s.rows(), 8);
        let padded = Matrix::identity(&f3, 4).direct_sum(&Matrix::zeros(&f3, 4, 4));
        assert_eq!(w.source(), &padded.sub(&s));
        for f in [rationals(), gf(5), gf(7)] {
            let (s, w) = pair_padding_subtract(3, &f).unwrap();
            assert!(s.is_square_zero());
            assert_eq!(w.source(), &Matrix::identity(&f, 6)
                .direct_sum(&Matrix::zeros(&f, 6, 6))
                .sub(&s));
        }
    }

    #[test]
    fn char2_spec_shapes() {
        let f2 = gf(2);
        let cert = three_squarezero_char2(&Matrix::identity(&f2, 2)).unwrap();
        assert!(cert.verify().passed());
        assert_eq!(cert.summands.len(), 3);
        assert_eq!(cert.summands[0], Matrix::from_i64(&f2, &[&[0, 1], &[0, 0]]));

        let p = poly(&f2, &[1, 1, 1]);
        let block = Matrix::companion(&p).unwrap();
        let a = block.direct_sum(&block);
        let cert = three_squarezero_char2(&a).unwrap();
        assert!(cert.verify().passed());
        let mut connector = Matrix::zeros(&f2, 4, 4);
        connector.set(2, 1, Scalar::one(&f2));
        assert_eq!(cert.summands[0], connector);

        let cert = three_squarezero_char2(&Matrix::zeros(&f2, 1, 1)).unwrap();
        assert!(cert.summands.iter().all(|s| s.is_zero_matrix()));
        assert_eq!(cert.summands.len(), 3);

        assert!(matches!(
            three_squarezero_char2(&Matrix::identity(&rationals(), 2)),
            Err(Error::WrongCharacteristic { .. })
        ));
        let mut odd = Matrix::zeros(&f2, 1, 1);
        odd.set(0, 0, Scalar::one(&f2));
        assert!(matches!(three_squarezero_char2(&odd), Err(Error::TraceMismatch(_))));
    }

    #[test]
    fn char2_handles_every_primary_route() {
        let f2 = gf(2);
        let trace_zero_base = poly(&f2, &[1, 1, 0, 1]);
        let a = Matrix::companion(&trace_zero_base).unwrap();
        let cert = three_squarezero_char2(&a).unwrap();
        assert!(cert.verify().passed());

        let ones = poly(&f2, &[1, 1, 1]);
        let mixed = Matrix::companion(&ones.pow(2)).unwrap()
            .direct_sum(&Matrix::companion(&ones).unwrap())
            .direct_sum(&Matrix::companion(&ones).unwrap());
        let cert = three_squarezero_char2(&mixed).unwrap();
        assert!(cert.verify().passed());
        assert_eq!(cert.target, mixed);

        let f4 = gf4();
        let omega = Scalar::from_coeffs(&f4, &[0, 1]).unwrap();
        let cert = three_squarezero_char2(&Matrix::scalar_matrix(&omega, 2)).unwrap();
        assert!(cert.verify().passed());
    }

    #[test]
    fn char2_routes_composite_minimal_polynomials_through_blocks() {
        let f2 = gf(2);
        let a = Matrix::companion(&poly(&f2, &[0, 1, 1, 0, 1])).unwrap();
        assert!(!decide_two_squarezero(&a).unwrap().decomposable);
        let cert = three_squarezero_char2(&a).unwrap();
        assert!(cert.verify().passed());
        assert_eq!(cert.target, a);

        let f4 = gf4();
        let omega = Scalar::from_coeffs(&f4, &[0, 1]).unwrap();
        let mut b = Matrix::zeros(&f4, 3, 3);
        b.set(0, 0, omega.clone());
        b.set(1, 1, omega.mul(&omega));
        b.set(2, 2, Scalar::one(&f4));
        assert!(b.trace().unwrap().is_zero());
        let cert = three_squarezero_char2(&b).unwrap();
        assert!(cert.verify().passed());
        assert_eq!(cert.target, b);
    }

    #[test]
    fn certified_targets_keep_parity_factors_and_fitting_parts() {
        let mut seed = 901;
        let mut tested = 0;
        for f in [rationals(), gf(2), gf(3), gf(5)] {
            for n in 1..=4 {
                for _ in 0..6 {
                    seed += 1;
                    let m = random_trace_zero(&f, n, seed).unwrap();
                    if !decide_two_squarezero(&m).unwrap().decomposable {
                        continue;
                    }
                    let cert = construct_two_squarezero(&m).unwrap();
                    assert!(cert.verify().passed());
                    for s in invariant_factors(&m).unwrap() {
                        assert_ne!(s.parity().unwrap(), Parity::Neither);
                    }
                    let parts = fitting(&m).unwrap();
                    assert!(decide_two_squarezero(&parts.invertible).unwrap().decomposable);
                    tested += 1;
                }
            }
        }
        assert!(tested > 20);
    }

    #[test]
    fn square_zero_pairs_commute_with_their_square() {
        let mut rng = SeededRng::new(4242);
        let fields = [rationals(), gf(2), gf(3), gf(5)];
        for round in 0..200 {
            let f = &fields[round % fields.len()];
            let n = 2 + (round / fields.len()) % 3;
            let a = random_square_zero(f, n, &mut rng);
            let b = random_square_zero(f, n, &mut rng);
            let sum_sq = a.add(&b).pow(2);
            assert_eq!(sum_sq.mul(&a), a.mul(&sum_sq));
            assert_eq!(sum_sq.mul(&b), b.mul(&sum_sq));
            assert_eq!(sum_sq, a.mul(&b).add(&b.mul(&a)));
        }
    }

    fn random_square_zero(f: &Field, n: usize, rng: &mut SeededRng) -> Matrix {
        let k = 1 + (rng.below(n as u64 - 1)) as usize;
        let block = Matrix::from_fn(f, k, n - k, |_, _| rng.scalar(f));
        let mut raw = Matrix::zeros(f, n, n);
        raw.set_block(0, k, &block);
        loop {
            let t = Matrix::from_fn(f, n, n, |_, _| rng.scalar(f));
            if let Ok(tinv) = t.inverse() {
                let out = t.mul(&raw).mul(&tinv);
                assert!(out.is_square_zero());
                return out;
            }
        }
    }

    #[test]
    fn pad_three_output_is_twice_the_input_size() {
        let mut seed = 7000;
        for f in [rationals(), gf(3), gf(2)] {
            for n in 1..=3 {
                for _ in 0..3 {
                    seed += 1;
                    let a = random_trace_zero(&f, n, seed).unwrap();
                    let cert = pad_three_squarezero(&a).unwrap();
                    assert!(cert.verify().passed(), "failed for {a:?}");
                    assert_eq!(cert.target.rows(), 2 * n);
                    assert_eq!(cert.summands.len(), 3);
                    assert_eq!(cert.target, a.direct_sum(&Matrix::zeros(&f, n, n)));
                }
            }
        }
    }
}
