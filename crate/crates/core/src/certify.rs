//! The certificate data model: a target matrix, its summands with their
//! polynomial kinds, combinators for conjugation, direct sums and scaling,
//! brute-force oracles on small matrices, and a reproducible generator for
//! randomized suites.

use crate::canonical::SimilarityWitness;
use crate::error::{Error, Result};
use crate::field::{field_elements, Field, Scalar};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummandKind {
    SquareZero,
    Idempotent,
}

impl SummandKind {
    pub fn holds_for(&self, m: &Matrix) -> bool {
        match self {
            SummandKind::SquareZero => m.is_square_zero(),
            SummandKind::Idempotent => m.is_idempotent(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SummandKind::SquareZero => "square-zero",
            SummandKind::Idempotent => "idempotent",
        }
    }
}

/// A decomposition target = sum of coefficient_i * summand_i where each
/// summand satisfies its kind's polynomial identity. The witness chain is
/// optional provenance recording how the decomposition was transported.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub target: Matrix,
    pub summands: Vec<Matrix>,
    pub kinds: Vec<SummandKind>,
    pub coefficients: Vec<Scalar>,
    pub witnesses: Vec<SimilarityWitness>,
}

/// Outcome of exact verification; on failure the first violated identity is
/// named.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub failure: Option<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    fn pass() -> VerifyReport {
        VerifyReport { failure: None }
    }

    fn fail(msg: String) -> VerifyReport {
        VerifyReport { failure: Some(msg) }
    }
}

impl Certificate {
    /// Certificate with unit coefficients and no witness chain.
    pub fn from_summands(target: Matrix, parts: Vec<(SummandKind, Matrix)>) -> Certificate {
        let one = Scalar::one(target.field());
        let mut summands = Vec::with_capacity(parts.len());
        let mut kinds = Vec::with_capacity(parts.len());
        for (kind, m) in parts {
            kinds.push(kind);
            summands.push(m);
        }
        let coefficients = vec![one; summands.len()];
        Certificate { target, summands, kinds, coefficients, witnesses: Vec::new() }
    }

    /// Like [`Certificate::from_summands`] but verifies immediately; a
    /// failure is a construction bug, reported as a defect.
    pub fn checked(target: Matrix, parts: Vec<(SummandKind, Matrix)>) -> Result<Certificate> {
        let cert = Certificate::from_summands(target, parts);
        match cert.verify().failure {
            None => Ok(cert),
            Some(msg) => Err(Error::Defect(format!("constructed certificate is invalid: {msg}"))),
        }
    }

    pub fn verify(&self) -> VerifyReport {
        let n = self.target.rows();
        if !self.target.is_square() {
            return VerifyReport::fail("target is not square".into());
        }
        if self.summands.len() != self.kinds.len() || self.summands.len() != self.coefficients.len() {
            return VerifyReport::fail("summand, kind and coefficient counts differ".into());
        }
        let mut sum = Matrix::zeros(self.target.field(), n, n);
        for (i, s) in self.summands.iter().enumerate() {
            if s.field() != self.target.field() {
                return VerifyReport::fail(format!("summand {i} lives in a different field"));
            }
            if s.rows() != n || s.cols() != n {
                return VerifyReport::fail(format!("summand {i} has the wrong shape"));
            }
            if !self.kinds[i].holds_for(s) {
                return VerifyReport::fail(format!("summand {i} is not {}", self.kinds[i].name()));
            }
            sum = sum.add(&s.scale(&self.coefficients[i]));
        }
        if sum != self.target {
            return VerifyReport::fail("sum mismatch".into());
        }
        VerifyReport::pass()
    }
}

/// Transports a certificate along a similarity witness whose source is the
/// certificate's target; every summand is conjugated, kinds are preserved.
pub fn cert_conjugate(c: &Certificate, w: &SimilarityWitness) -> Result<Certificate> {
    if w.source() != &c.target {
        return Err(Error::Precondition(
            "witness source does not match the certificate target".into(),
        ));
    }
    let mut witnesses = c.witnesses.clone();
    witnesses.push(w.clone());
    Ok(Certificate {
        target: w.target().clone(),
        summands: c.summands.iter().map(|s| w.apply(s)).collect(),
        kinds: c.kinds.clone(),
        coefficients: c.coefficients.clone(),
        witnesses,
    })
}

/// Blockwise direct sum of certificates sharing the same summand count,
/// kind sequence and coefficient sequence.
pub fn cert_direct_sum(cs: &[Certificate]) -> Result<Certificate> {
    let Some(first) = cs.first() else {
        return Err(Error::Precondition("direct sum of no certificates".into()));
    };
    let field = first.target.field().clone();
    let count = first.summands.len();
    for (j, c) in cs.iter().enumerate() {
        if c.summands.len() != count {
            return Err(Error::Precondition(format!(
                "certificate {j} has {} summands, expected {count}",
                c.summands.len()
            )));
        }
        if c.kinds != first.kinds {
            return Err(Error::Precondition(format!("certificate {j} has a different kind sequence")));
        }
        if c.coefficients != first.coefficients {
            return Err(Error::Precondition(format!(
                "certificate {j} has a different coefficient sequence"
            )));
        }
    }
    let target = Matrix::direct_sum_all(&field, &cs.iter().map(|c| c.target.clone()).collect::<Vec<_>>());
    let summands = (0..count)
        .map(|i| {
            Matrix::direct_sum_all(&field, &cs.iter().map(|c| c.summands[i].clone()).collect::<Vec<_>>())
        })
        .collect();
    Ok(Certificate {
        target,
        summands,
        kinds: first.kinds.clone(),
        coefficients: first.coefficients.clone(),
        witnesses: Vec::new(),
    })
}

/// Scales a certificate by a nonzero scalar. Only square-zero summands
/// survive scaling, so any idempotent kind is rejected.
pub fn cert_scale(c: &Certificate, alpha: &Scalar) -> Result<Certificate> {
    if alpha.is_zero() {
        return Err(Error::Precondition("scaling a certificate by zero".into()));
    }
    if c.kinds.iter().any(|k| *k != SummandKind::SquareZero) {
        return Err(Error::Precondition(
            "idempotency is not scale-invariant: only all-square-zero certificates can be scaled".into(),
        ));
    }
    Ok(Certificate {
        target: c.target.scale(alpha),
        summands: c.summands.iter().map(|s| s.scale(alpha)).collect(),
        kinds: c.kinds.clone(),
        coefficients: c.coefficients.clone(),
        witnesses: c.witnesses.clone(),
    })
}

const ENUMERATION_LIMIT: u64 = 65_536;

/// All rows x cols matrices over a small finite field in a fixed order
/// (entry (0,0) varies fastest). Errors beyond 65536 matrices.
pub fn enumerate_matrices(field: &Field, rows: usize, cols: usize) -> Result<Vec<Matrix>> {
    let elems = field_elements(field)?;
    let cells = rows * cols;
    let mut total: u64 = 1;
    for _ in 0..cells {
        total = total
            .checked_mul(elems.len() as u64)
            .filter(|&t| t <= ENUMERATION_LIMIT)
            .ok_or(Error::EnumerationBound)?;
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; cells];
    loop {
        out.push(Matrix::from_fn(field, rows, cols, |i, j| {
            elems[idx[i * cols + j]].clone()
        }));
        let mut pos = 0;
        loop {
            if pos == cells {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// All square-zero n x n matrices over a small finite field, deterministic
/// order. At n = 3 the space is cut down by enumerating rank-one products
/// u v^T with v^T u = 0 (square-zero forces rank <= 1 at that size).
fn square_zero_matrices(field: &Field, n: usize) -> Result<Vec<Matrix>> {
    if n <= 2 {
        return Ok(enumerate_matrices(field, n, n)?
            .into_iter()
            .filter(Matrix::is_square_zero)
            .collect());
    }
    if n != 3 {
        return Err(Error::EnumerationBound);
    }
    let vectors = enumerate_matrices(field, n, 1)?;
    let mut out = vec![Matrix::zeros(field, n, n)];
    for u in &vectors {
        if u.is_zero_matrix() {
            continue;
        }
        for v in &vectors {
            if v.is_zero_matrix() || !v.transpose().mul(u).is_zero_matrix() {
                continue;
            }
            let x = u.mul(&v.transpose());
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// Exhaustive search for a two-square-zero decomposition; returns the first
/// pair found in enumeration order, or None when no pair exists.
pub fn oracle_two_squarezero(a: &Matrix) -> Result<Option<(Matrix, Matrix)>> {
    let n = a.size()?;
    for x in square_zero_matrices(a.field(), n)? {
        let y = a.sub(&x);
        if y.is_square_zero() {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

/// Exhaustive search for a two-idempotent decomposition over a small finite
/// field; returns the first pair found, or None.
pub fn oracle_two_idempotents(a: &Matrix) -> Result<Option<(Matrix, Matrix)>> {
    let n = a.size()?;
    for x in enumerate_matrices(a.field(), n, n)? {
        if !x.is_idempotent() {
            continue;
        }
        let y = a.sub(&x);
        if y.is_idempotent() {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

/// xorshift64* generator: shifts 12, 25, 27 and multiplier
/// 0x2545F4914F6CDD1D, so corpora are replayable across implementations.
pub struct SeededRng {
    state: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> SeededRng {
        SeededRng { state: if seed == 0 { 0x9E37_79B9_7F4A_7C15 } else { seed } }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform-ish value in [0, bound) by modulo reduction (bound > 0).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Random scalar: a uniform field element over finite fields, a small
    /// integer in [-5, 5] over the rationals.
    pub fn scalar(&mut self, field: &Field) -> Scalar {
        match field.extension_degree() {
            None => Scalar::from_i64(field, self.below(11) as i64 - 5),
            Some(k) => {
                let p = field.characteristic();
                let coeffs: Vec<u64> = (0..k).map(|_| self.below(p)).collect();
                Scalar::from_coeffs(field, &coeffs).expect("limbs are reduced")
            }
        }
    }
}

/// Deterministic pseudo-random n x n matrix with trace forced to zero by
/// adjusting the last diagonal entry.
pub fn random_trace_zero(field: &Field, n: usize, seed: u64) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::Precondition("random matrix needs n >= 1".into()));
    }
    let mut rng = SeededRng::new(seed);
    let mut m = Matrix::from_fn(field, n, n, |_, _| rng.scalar(field));
    let mut partial = Scalar::zero(field);
    for i in 0..n - 1 {
        partial = partial.add(m.get(i, i));
    }
    m.set(n - 1, n - 1, partial.neg());
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    fn g2() -> Field {
        FieldDescriptor::prime_field(2).unwrap()
    }

    #[test]
    fn verify_names_first_violation() {
        let f = FieldDescriptor::rationals();
        let j2 = Matrix::from_i64(&f, &[&[0, 1], &[0, 0]]);
        let zero = Matrix::zeros(&f, 2, 2);
        let good = Certificate::from_summands(
            j2.clone(),
            vec![(SummandKind::SquareZero, j2.clone()), (SummandKind::SquareZero, zero.clone())],
        );
        assert!(good.verify().passed());

        let wrong_kind = Certificate::from_summands(
            j2.clone(),
            vec![(SummandKind::SquareZero, zero.clone()), (SummandKind::Idempotent, j2.clone())],
        );
        assert_eq!(wrong_kind.verify().failure.unwrap(), "summand 1 is not idempotent");

        let wrong_sum = Certificate::from_summands(
            j2,
            vec![(SummandKind::SquareZero, zero.clone()), (SummandKind::SquareZero, zero)],
        );
        assert_eq!(wrong_sum.verify().failure.unwrap(), "sum mismatch");
    }

    #[test]
    fn conjugate_preserves_verification() {
        let f = FieldDescriptor::rationals();
        let j2 = Matrix::from_i64(&f, &[&[0, 1], &[0, 0]]);
        let cert = Certificate::checked(
            j2.clone(),
            vec![(SummandKind::SquareZero, j2.clone()), (SummandKind::SquareZero, Matrix::zeros(&f, 2, 2))],
        )
        .unwrap();
        let t = Matrix::from_i64(&f, &[&[1, 1], &[0, 1]]);
        let target = t.mul(&j2).mul(&t.inverse().unwrap());
        let w = SimilarityWitness::new(j2, target, t).unwrap();
        let moved = cert_conjugate(&cert, &w).unwrap();
        assert!(moved.verify().passed());
        assert_eq!(moved.witnesses.len(), 1);

        let other = Matrix::zeros(&f, 2, 2);
        let idw = SimilarityWitness::identity(&other).unwrap();
        assert!(matches!(cert_conjugate(&cert, &idw), Err(Error::Precondition(_))));
    }

    #[test]
    fn direct_sum_and_scale() {
        let f = FieldDescriptor::rationals();
        let z1 = Matrix::zeros(&f, 1, 1);
        let c1 = Certificate::from_summands(
            z1.clone(),
            vec![(SummandKind::SquareZero, z1.clone()), (SummandKind::SquareZero, z1.clone())],
        );
        let joined = cert_direct_sum(&[c1.clone(), c1.clone()]).unwrap();
        assert_eq!(joined.target, Matrix::zeros(&f, 2, 2));
        assert!(joined.verify().passed());

        let single = Certificate::from_summands(z1.clone(), vec![(SummandKind::SquareZero, z1.clone())]);
        assert!(matches!(cert_direct_sum(&[c1.clone(), single]), Err(Error::Precondition(_))));

        let j2 = Matrix::from_i64(&f, &[&[0, 1], &[0, 0]]);
        let cert = Certificate::from_summands(
            j2.clone(),
            vec![(SummandKind::SquareZero, j2.clone()), (SummandKind::SquareZero, Matrix::zeros(&f, 2, 2))],
        );
        let two = Scalar::from_i64(&f, 2);
        let scaled = cert_scale(&cert, &two).unwrap();
        assert!(scaled.verify().passed());
        assert_eq!(scaled.target, j2.scale(&two));

        let idem = Certificate::from_summands(z1.clone(), vec![(SummandKind::Idempotent, z1)]);
        assert!(matches!(cert_scale(&idem, &two), Err(Error::Precondition(_))));
    }

    #[test]
    fn squarezero_oracle_matches_known_cases() {
        let f = g2();
        assert!(oracle_two_squarezero(&Matrix::identity(&f, 2)).unwrap().is_none());
        let j2 = Matrix::from_i64(&f, &[&[0, 1], &[0, 0]]);
        let (x, y) = oracle_two_squarezero(&j2).unwrap().unwrap();
        assert!(x.is_square_zero() && y.is_square_zero());
        assert_eq!(x.add(&y), j2);
        assert!(oracle_two_squarezero(&Matrix::zeros(&f, 2, 2)).unwrap().is_some());

        // 3x3 path goes through the rank-one enumeration
        let c3 = Matrix::from_i64(&f, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let (x, y) = oracle_two_squarezero(&c3).unwrap().unwrap();
        assert!(x.is_square_zero() && y.is_square_zero());
        assert_eq!(x.add(&y), c3);
        assert!(oracle_two_squarezero(&Matrix::identity(&f, 3)).unwrap().is_none());
    }

    #[test]
    fn idempotent_oracle_matches_known_cases() {
        let f = g2();
        let d = Matrix::from_i64(&f, &[&[1, 0], &[0, 0]]);
        assert!(oracle_two_idempotents(&d).unwrap().is_some());
        let j2 = Matrix::from_i64(&f, &[&[0, 1], &[0, 0]]);
        let (p, q) = oracle_two_idempotents(&j2).unwrap().unwrap();
        assert!(p.is_idempotent() && q.is_idempotent());
        assert_eq!(p.add(&q), j2);

        let g4 = FieldDescriptor::extension_field(2, &[1, 1, 1]).unwrap();
        let omega = Matrix::from_rows(&g4, vec![vec![Scalar::from_coeffs(&g4, &[0, 1]).unwrap()]]);
        assert!(oracle_two_idempotents(&omega).unwrap().is_none());
    }

    #[test]
    fn enumeration_bound_enforced() {
        let f = FieldDescriptor::prime_field(5).unwrap();
        assert!(matches!(enumerate_matrices(&f, 3, 3), Err(Error::EnumerationBound)));
        assert!(matches!(
            oracle_two_squarezero(&Matrix::identity(&f, 4)),
            Err(Error::EnumerationBound)
        ));
        assert!(matches!(
            enumerate_matrices(&FieldDescriptor::rationals(), 1, 1),
            Err(Error::EnumerationBound)
        ));
    }

    #[test]
    fn random_matrices_are_reproducible() {
        let f = FieldDescriptor::prime_field(3).unwrap();
        let a = random_trace_zero(&f, 4, 7).unwrap();
        let b = random_trace_zero(&f, 4, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.trace().unwrap().is_zero());
        let c = random_trace_zero(&f, 4, 8).unwrap();
        assert_ne!(a, c);

        let g2 = g2();
        assert_eq!(random_trace_zero(&g2, 1, 99).unwrap(), Matrix::zeros(&g2, 1, 1));

        let q = FieldDescriptor::rationals();
        let m = random_trace_zero(&q, 5, 123).unwrap();
        assert!(m.trace().unwrap().is_zero());
    }
}
