//! Well-partitioned block forms and the polynomial-fitting solver: given two
//! good cyclic blocks joined by a single connector, a corner block D can be
//! chosen so the join has any prescribed characteristic polynomial with the
//! right trace. On top of that sit the subtraction lemmas producing a
//! square-zero (or scaled idempotent) connector matrix S with A - S similar
//! to a prescribed companion matrix.

use crate::canonical::{
    elementary_divisors, good_cyclic_to_companion, invariant_factors, jordan_size1_count,
    rational_parts, roth_merge, witness_similar, SimilarityWitness,
};
use crate::error::{Error, Result};
use crate::factor::factor_finite;
use crate::field::{Field, Scalar};
use crate::matrix::{linear_solve, Matrix};
use crate::poly::Poly;

/// Block-diagonal direct sum C(p_1) + ... + C(p_r) + C(q_1) + ... + C(q_s)
/// where only p_1 and the last q may have degree 1 and every p is coprime to
/// every q.
#[derive(Debug, Clone)]
pub struct WellPartitioned {
    ps: Vec<Poly>,
    qs: Vec<Poly>,
}

/// Validates the four well-partitioned clauses and wraps the lists.
pub fn wp_structure(ps: Vec<Poly>, qs: Vec<Poly>) -> Result<WellPartitioned> {
    if ps.is_empty() || qs.is_empty() {
        return Err(Error::Precondition(
            "a well-partitioned form needs at least one p block and one q block".into(),
        ));
    }
    let field = ps[0].field().clone();
    for p in ps.iter().chain(qs.iter()) {
        if p.field() != &field {
            return Err(Error::FieldMismatch);
        }
        if !p.is_monic() {
            return Err(Error::NotMonic);
        }
        if p.degree() == Some(0) {
            return Err(Error::Precondition("constant block polynomial".into()));
        }
    }
    for (i, p) in ps.iter().enumerate().skip(1) {
        if p.degree() < Some(2) {
            return Err(Error::Precondition(format!(
                "p{} has degree 1 but only p1 may",
                i + 1
            )));
        }
    }
    for (j, q) in qs.iter().enumerate() {
        if j + 1 < qs.len() && q.degree() < Some(2) {
            return Err(Error::Precondition(format!(
                "q{} has degree 1 but only q{} may",
                j + 1,
                qs.len()
            )));
        }
    }
    for p in &ps {
        for q in &qs {
            let g = p.gcd(q);
            if g.degree() != Some(0) {
                return Err(Error::Precondition(format!("{p} and {q} are not coprime")));
            }
        }
    }
    Ok(WellPartitioned { ps, qs })
}

impl WellPartitioned {
    pub fn field(&self) -> &Field {
        self.ps[0].field()
    }

    pub fn ps(&self) -> &[Poly] {
        &self.ps
    }

    pub fn qs(&self) -> &[Poly] {
        &self.qs
    }

    pub fn block_count(&self) -> usize {
        self.ps.len() + self.qs.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.ps
            .iter()
            .chain(self.qs.iter())
            .map(|p| p.degree().expect("blocks are nonconstant"))
            .collect()
    }

    pub fn p_size(&self) -> usize {
        self.ps.iter().map(|p| p.degree().unwrap_or(0)).sum()
    }

    pub fn q_size(&self) -> usize {
        self.qs.iter().map(|q| q.degree().unwrap_or(0)).sum()
    }

    pub fn size(&self) -> usize {
        self.p_size() + self.q_size()
    }

    pub fn is_very_well_partitioned(&self) -> bool {
        let firsts = usize::from(self.ps[0].degree() == Some(1))
            + usize::from(self.qs[self.qs.len() - 1].degree() == Some(1));
        firsts <= 1
    }

    pub fn p_matrix(&self) -> Matrix {
        companions(self.field(), &self.ps)
    }

    pub fn q_matrix(&self) -> Matrix {
        companions(self.field(), &self.qs)
    }

    pub fn matrix(&self) -> Matrix {
        self.p_matrix().direct_sum(&self.q_matrix())
    }

    /// The well-partitioned form of alpha^(-1) * self.matrix(): every block
    /// polynomial has its roots divided by alpha.
    pub fn rescale(&self, alpha: &Scalar) -> Result<WellPartitioned> {
        let ps = self.ps.iter().map(|p| p.rescale(alpha)).collect::<Result<Vec<_>>>()?;
        let qs = self.qs.iter().map(|q| q.rescale(alpha)).collect::<Result<Vec<_>>>()?;
        wp_structure(ps, qs)
    }
}

fn companions(field: &Field, polys: &[Poly]) -> Matrix {
    let blocks: Vec<Matrix> = polys
        .iter()
        .map(|p| Matrix::companion(p).expect("blocks are monic"))
        .collect();
    Matrix::direct_sum_all(field, &blocks)
}

/// Row indices where one diagonal block ends and the next begins.
fn joints(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut acc = 0;
    for s in &sizes[..sizes.len() - 1] {
        acc += s;
        out.push(acc);
    }
    out
}

/// -1 at every block joint, just below the diagonal. Square-zero because
/// interior blocks have size >= 2.
fn connector_square_zero(field: &Field, sizes: &[usize]) -> Matrix {
    let n: usize = sizes.iter().sum();
    let mut s = Matrix::zeros(field, n, n);
    let minus = Scalar::one(field).neg();
    for t in joints(sizes) {
        s.set(t, t - 1, minus.clone());
    }
    s
}

/// 1 on the diagonal at the first row of each block after the first, mu just
/// left of it. Idempotent because interior blocks have size >= 2.
fn connector_idempotent(field: &Field, sizes: &[usize], mu: &Scalar) -> Matrix {
    let n: usize = sizes.iter().sum();
    let mut p = Matrix::zeros(field, n, n);
    for t in joints(sizes) {
        p.set(t, t, Scalar::one(field));
        p.set(t, t - 1, mu.clone());
    }
    p
}

/// Solves for the corner block D making [[A, D], [H, B]] good cyclic with
/// characteristic polynomial exactly p, where H carries a single 1 at its
/// top-right. Requires tr p = tr A + tr B; existence is then guaranteed, so
/// an inconsistent linear system is a defect.
pub fn cyclic_fit(a: &Matrix, b: &Matrix, p: &Poly) -> Result<Matrix> {
    let n = a.size()?;
    let m = b.size()?;
    let field = a.field().clone();
    if b.field() != &field || p.field() != &field {
        return Err(Error::FieldMismatch);
    }
    if n == 0 || m == 0 {
        return Err(Error::Precondition("cyclic fit needs nonempty blocks".into()));
    }
    if !a.is_good_cyclic() || !b.is_good_cyclic() {
        return Err(Error::NotGoodCyclic);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    if p.degree() != Some(n + m) {
        return Err(Error::Precondition(format!(
            "target polynomial must have degree {}",
            n + m
        )));
    }
    let want = p.trace()?;
    let have = a.trace()?.add(&b.trace()?);
    if want != have {
        return Err(Error::TraceMismatch(format!(
            "target trace {want} differs from block trace sum {have}"
        )));
    }

    // Leading-minor chain of the join, tracked as an affine function of the
    // unknown entries of D: component 0 is the constant part, component
    // 1 + j*n + r multiplies D[r][j]. Column j of D perturbs the Hessenberg
    // recurrence at step n + j by the chain polynomial of its row.
    let chain = a.good_cyclic_minor_chain()?;
    let nvars = n * m;
    let zero_aff = || vec![Poly::zero(&field); nvars + 1];
    let mut history: Vec<Vec<Poly>> = Vec::with_capacity(m + 1);
    let mut start = zero_aff();
    start[0] = chain[n].clone();
    history.push(start);
    for j in 1..=m {
        let linear = Poly::from_coeffs(
            &field,
            vec![b.get(j - 1, j - 1).neg(), Scalar::one(&field)],
        );
        let mut next = zero_aff();
        for u in 0..=nvars {
            next[u] = history[j - 1][u].mul(&linear);
            for (ib, past) in history.iter().enumerate().take(j - 1) {
                let c = b.get(ib, j - 1);
                if !c.is_zero() {
                    next[u] = next[u].sub(&past[u].mul_scalar(c));
                }
            }
        }
        for r in 0..n {
            let u = 1 + (j - 1) * n + r;
            next[u] = next[u].sub(&chain[r]);
        }
        history.push(next);
    }

    let last = &history[m];
    let rows = n + m + 1;
    let system = Matrix::from_fn(&field, rows, nvars, |k, u| last[u + 1].coeff(k));
    let rhs = Matrix::from_fn(&field, rows, 1, |k, _| p.coeff(k).sub(&last[0].coeff(k)));
    let solution = linear_solve(&system, &rhs)?;
    let x = solution
        .particular
        .ok_or_else(|| Error::Defect("cyclic fit system is inconsistent".into()))?;
    let d = Matrix::from_fn(&field, n, m, |r, j| x.get(j * n + r, 0).clone());

    let join = join_with_corner(a, b, &d);
    if !join.is_good_cyclic() || join.char_poly()? != *p {
        return Err(Error::Defect("cyclic fit produced the wrong polynomial".into()));
    }
    Ok(d)
}

fn join_with_corner(a: &Matrix, b: &Matrix, d: &Matrix) -> Matrix {
    let n = a.rows();
    let m = b.rows();
    let field = a.field();
    let mut join = Matrix::zeros(field, n + m, n + m);
    join.set_block(0, 0, a);
    join.set_block(0, n, d);
    join.set_block(n, n, b);
    join.set(n, n - 1, Scalar::one(field));
    join
}

fn subtract_core(
    wp: &WellPartitioned,
    raw: &Matrix,
    coeff: &Scalar,
    r_poly: &Poly,
) -> Result<(Matrix, SimilarityWitness)> {
    let field = wp.field().clone();
    let a_mat = wp.matrix();
    let n = wp.size();
    let b = wp.p_size();

    let adjusted = a_mat.sub(&raw.scale(coeff));
    let x1 = adjusted.block(0, 0, b, b);
    let x2 = adjusted.block(b, b, n, n);
    let mut two_block = Matrix::zeros(&field, n, n);
    two_block.set_block(0, 0, &x1);
    two_block.set_block(b, b, &x2);
    two_block.set(b, b - 1, Scalar::one(&field));
    if two_block != adjusted {
        return Err(Error::Defect("connector did not reduce to the two-block form".into()));
    }

    let d = cyclic_fit(&x1, &x2, r_poly)?;
    let join = join_with_corner(&x1, &x2, &d);
    let to_companion = good_cyclic_to_companion(&join)?;
    let merge = roth_merge(&wp.p_matrix(), &wp.q_matrix(), &d)?;
    let out = merge.apply(raw);
    let diff = a_mat.sub(&out.scale(coeff));
    let into_join = SimilarityWitness::from_parts(
        diff,
        join,
        merge.transform_inv().clone(),
        merge.transform().clone(),
    )?;
    let witness = into_join.compose(&to_companion)?;
    Ok((out, witness))
}

/// Square-zero S built from -1 connectors at the block joints, transported
/// through the Roth witness so that A - S is similar to C(R); the returned
/// witness carries A - S onto the companion matrix of R.
pub fn wp_subtract_squarezero(
    wp: &WellPartitioned,
    r_poly: &Poly,
) -> Result<(Matrix, SimilarityWitness)> {
    let a_mat = wp.matrix();
    let want = r_poly.trace()?;
    let have = a_mat.trace()?;
    if want != have {
        return Err(Error::TraceMismatch(format!(
            "target trace {want} differs from matrix trace {have}"
        )));
    }
    let raw = connector_square_zero(wp.field(), &wp.sizes());
    let one = Scalar::one(wp.field());
    let (s, witness) = subtract_core(wp, &raw, &one, r_poly)?;
    if !s.is_square_zero() {
        return Err(Error::Defect("transported connector is not square-zero".into()));
    }
    Ok((s, witness))
}

/// Idempotent P with A - lambda P similar to C(R), for nonzero lambda and
/// tr R = tr A - (m-1) lambda where m is the block count.
pub fn wp_subtract_idempotent(
    wp: &WellPartitioned,
    lambda: &Scalar,
    r_poly: &Poly,
) -> Result<(Matrix, SimilarityWitness)> {
    if lambda.is_zero() {
        return Err(Error::Precondition("lambda must be nonzero".into()));
    }
    let field = wp.field().clone();
    let a_mat = wp.matrix();
    let blocks = Scalar::from_i64(&field, (wp.block_count() - 1) as i64);
    let expected = a_mat.trace()?.sub(&blocks.mul(lambda));
    let want = r_poly.trace()?;
    if want != expected {
        return Err(Error::TraceMismatch(format!(
            "target trace {want} differs from adjusted trace {expected}"
        )));
    }
    let mu = lambda.inv()?.neg();
    let raw = connector_idempotent(&field, &wp.sizes(), &mu);
    let (p, witness) = subtract_core(wp, &raw, lambda, r_poly)?;
    if !p.is_idempotent() {
        return Err(Error::Defect("transported connector is not idempotent".into()));
    }
    Ok((p, witness))
}

/// Splits every invariant factor along one factor of the minimal polynomial
/// and reassembles A as a well-partitioned matrix, with witness. Requires
/// the minimal polynomial to have at least two coprime parts and at most one
/// size-1 Jordan cell per eigenvalue in the field.
pub fn wp_from_matrix(a: &Matrix) -> Result<(WellPartitioned, SimilarityWitness)> {
    let field = a.field().clone();
    let invs = invariant_factors(a)?;
    let Some(minimal) = invs.first() else {
        return Err(Error::Precondition("the void matrix has no well-partitioned form".into()));
    };

    let mut linear_seen: Vec<Poly> = Vec::new();
    for (p, e) in elementary_divisors(a)? {
        if e == 1 && p.degree() == Some(1) {
            if linear_seen.contains(&p) {
                return Err(Error::Precondition(format!(
                    "two Jordan cells of size 1 share the root of {p}"
                )));
            }
            linear_seen.push(p);
        }
    }

    let candidates: Vec<Poly> = if field.is_finite() {
        factor_finite(minimal)?.into_iter().map(|(p, _)| p).collect()
    } else {
        rational_parts(minimal)?.into_iter().map(|(p, _)| p).collect()
    };
    if candidates.len() <= 1 {
        let only_linear = candidates.first().map_or(false, |c| c.degree() == Some(1));
        if field.is_finite() || only_linear {
            return Err(Error::Precondition(
                "minimal polynomial is a power of one irreducible polynomial".into(),
            ));
        }
        return Err(Error::UnsupportedFactorization);
    }
    let t_poly = Poly::monomial(&field, 1);
    let split = if candidates.contains(&t_poly) { t_poly } else { candidates[0].clone() };

    let mut bs = Vec::with_capacity(invs.len());
    let mut cs = Vec::with_capacity(invs.len());
    for s in &invs {
        let mut c = s.clone();
        let mut b = Poly::one(&field);
        loop {
            let g = c.gcd(&split);
            if g.degree() == Some(0) {
                break;
            }
            b = b.mul(&g);
            c = c.div_rem(&g)?.0;
        }
        bs.push(b);
        cs.push(c);
    }
    let ps: Vec<Poly> = bs
        .into_iter()
        .filter(|b| b.degree() > Some(0))
        .rev()
        .collect();
    let qs: Vec<Poly> = cs.into_iter().filter(|c| c.degree() > Some(0)).collect();
    if ps.is_empty() || qs.is_empty() {
        return Err(Error::Defect("invariant factor split lost a side".into()));
    }
    let wp = wp_structure(ps, qs)
        .map_err(|e| Error::Defect(format!("split violates the checked hypotheses: {e}")))?;
    let witness = match witness_similar(a, &wp.matrix()) {
        Err(Error::NotSimilar) => {
            return Err(Error::Defect("reassembled blocks are not similar to the input".into()))
        }
        other => other?,
    };
    Ok((wp, witness))
}

/// Outcome of extracting a nilpotent-or-well-partitioned core from a padded
/// matrix: the input is similar to n + alpha I_2q + 0_r with r >= 2q.
#[derive(Debug, Clone)]
pub struct WpExtract {
    pub n: Matrix,
    pub structure: Option<WellPartitioned>,
    pub alpha: Scalar,
    pub q: usize,
    pub r: usize,
    pub witness: SimilarityWitness,
}

/// Case analysis on the invariant factors of a 2n x 2n matrix with at least
/// n size-1 Jordan cells at 0. Every inequality the argument relies on is
/// re-checked at runtime.
pub fn wp_extract(m: &Matrix) -> Result<WpExtract> {
    let field = m.field().clone();
    let size = m.size()?;
    if size % 2 != 0 {
        return Err(Error::Precondition("extraction needs an even-sized matrix".into()));
    }
    let half = size / 2;
    let cells = jordan_size1_count(m, &Scalar::zero(&field))?;
    if cells < half {
        return Err(Error::Precondition(format!(
            "needs at least {half} size-1 Jordan cells at 0, found {cells}"
        )));
    }

    let one = Scalar::one(&field);
    if m.char_poly()? == Poly::monomial(&field, size) {
        return Ok(WpExtract {
            n: m.clone(),
            structure: None,
            alpha: one,
            q: 0,
            r: 0,
            witness: SimilarityWitness::identity(m)?,
        });
    }

    let invs = invariant_factors(m)?;
    let count = invs.len();
    let mut t_powers = Vec::with_capacity(count);
    let mut rests = Vec::with_capacity(count);
    for s in &invs {
        let e = s.t_multiplicity()?;
        t_powers.push(e);
        rests.push(s.div_rem(&Poly::monomial(&field, e))?.0);
    }
    let a0 = t_powers
        .iter()
        .position(|&e| e == 1)
        .ok_or_else(|| Error::Defect("no size-1 cell at 0 despite the precondition".into()))?;
    if t_powers[a0..].iter().any(|&e| e != 1) {
        return Err(Error::Defect("t-multiplicities do not end in a run of ones".into()));
    }
    let r0 = count - a0 - 1;
    if r0 + 1 != cells {
        return Err(Error::Defect("size-1 cell count disagrees with the invariant factors".into()));
    }
    let deg = |p: &Poly| p.degree().unwrap_or(0);
    let sum_q: usize = rests.iter().map(deg).sum();

    let rev_powers = |upto: usize| -> Vec<Poly> {
        (0..upto).rev().map(|k| Poly::monomial(&field, t_powers[k])).collect()
    };

    let (blocks, structure, alpha, qq, rr);
    if rests.iter().all(|q| deg(q) != 1) {
        let b0 = rests
            .iter()
            .rposition(|q| deg(q) > 0)
            .ok_or_else(|| Error::Defect("non-nilpotent matrix with trivial rests".into()))?;
        if rests[..=b0].iter().any(|q| deg(q) < 2) {
            return Err(Error::Defect("nonconstant rests are not a prefix".into()));
        }
        blocks = (rev_powers(a0 + 1), rests[..=b0].to_vec());
        structure = Some(wp_structure(blocks.0.clone(), blocks.1.clone())?);
        alpha = one.clone();
        qq = 0;
        rr = r0;
    } else {
        let c0 = rests.iter().position(|q| deg(q) == 1).unwrap();
        let d0 = rests.iter().rposition(|q| deg(q) == 1).unwrap();
        let root = rests[c0].coeff(0).neg();
        if root.is_zero() {
            return Err(Error::Defect("rest polynomial divisible by t".into()));
        }
        if rests[c0..=d0].iter().any(|q| *q != rests[c0])
            || rests[..c0].iter().any(|q| deg(q) < 2)
            || rests[d0 + 1..].iter().any(|q| deg(q) != 0)
        {
            return Err(Error::Defect("linear rests are not a uniform middle run".into()));
        }
        let dc = d0 - c0;
        let audit = |claims: &[(i64, i64)]| -> Result<()> {
            for (lhs, rhs) in claims {
                if lhs > rhs {
                    return Err(Error::Defect(format!(
                        "inequality audit failed: {lhs} > {rhs}"
                    )));
                }
            }
            Ok(())
        };
        if dc % 2 == 0 {
            audit(&[
                (dc as i64, sum_q as i64 - 1),
                (sum_q as i64 - 1, size as i64 - r0 as i64 - 2),
                (size as i64 - r0 as i64 - 2, r0 as i64),
            ])?;
            blocks = (rev_powers(a0 + 1), rests[..=c0].to_vec());
            structure = Some(wp_structure(blocks.0.clone(), blocks.1.clone())?);
            alpha = if dc == 0 { one.clone() } else { root };
            qq = dc / 2;
            rr = r0;
        } else if c0 > 0 {
            let q1 = deg(&rests[0]) as i64;
            audit(&[
                (dc as i64 + 1, half as i64 - q1),
                (half as i64 - q1, half as i64 - 2),
                (half as i64 - 2, r0 as i64),
            ])?;
            blocks = (rev_powers(a0 + 1), rests[..c0].to_vec());
            structure = Some(wp_structure(blocks.0.clone(), blocks.1.clone())?);
            alpha = root;
            qq = (dc + 1) / 2;
            rr = r0;
        } else {
            audit(&[
                (dc as i64 + 1, size as i64 - (r0 as i64 + 1)),
                (size as i64 - (r0 as i64 + 1), r0 as i64 + 1),
            ])?;
            blocks = (rev_powers(a0), Vec::new());
            structure = None;
            alpha = root;
            qq = (dc + 1) / 2;
            rr = r0 + 1;
        }
    }

    let core = match &structure {
        Some(wp) => wp.matrix(),
        None => companions(&field, &blocks.0),
    };
    if core.rows() + 2 * qq + rr != size {
        return Err(Error::Defect("extracted part sizes do not add up".into()));
    }
    let scaled = Matrix::identity(&field, 2 * qq).scale(&alpha);
    let target = Matrix::direct_sum_all(
        &field,
        &[core.clone(), scaled, Matrix::zeros(&field, rr, rr)],
    );
    let witness = match witness_similar(m, &target) {
        Err(Error::NotSimilar) => {
            return Err(Error::Defect("extraction target is not similar to the input".into()))
        }
        other => other?,
    };
    Ok(WpExtract { n: core, structure, alpha, q: qq, r: rr, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::SeededRng;
    use crate::field::FieldDescriptor;

    fn q() -> Field {
        FieldDescriptor::rationals()
    }

    fn g2() -> Field {
        FieldDescriptor::prime_field(2).unwrap()
    }

    fn poly(f: &Field, c: &[i64]) -> Poly {
        Poly::from_i64(f, c)
    }

    #[test]
    fn cyclic_fit_known_corners() {
        let f = q();
        let a = Matrix::companion(&poly(&f, &[0, 0, 1])).unwrap();
        let b = Matrix::companion(&poly(&f, &[0, 1])).unwrap();
        let d = cyclic_fit(&a, &b, &poly(&f, &[0, 0, 0, 1])).unwrap();
        assert_eq!(d, Matrix::zeros(&f, 2, 1));
        let d = cyclic_fit(&a, &b, &poly(&f, &[0, -1, 0, 1])).unwrap();
        assert_eq!(d, Matrix::from_i64(&f, &[&[0], &[1]]));

        let a1 = Matrix::from_i64(&f, &[&[2]]);
        let b1 = Matrix::from_i64(&f, &[&[3]]);
        let d = cyclic_fit(&a1, &b1, &poly(&f, &[6, -5, 1])).unwrap();
        assert_eq!(d, Matrix::zeros(&f, 1, 1));

        assert!(matches!(
            cyclic_fit(&a, &b, &poly(&f, &[0, 0, -1, 1])),
            Err(Error::TraceMismatch(_))
        ));
    }

    #[test]
    fn cyclic_fit_hits_random_targets() {
        for field in [q(), FieldDescriptor::prime_field(5).unwrap()] {
            let mut rng = SeededRng::new(2024);
            for round in 0..40 {
                let n = 1 + (round % 4) as usize;
                let m = 1 + (round % 3) as usize;
                let a = random_good_cyclic(&field, n, &mut rng);
                let b = random_good_cyclic(&field, m, &mut rng);
                let mut coeffs: Vec<Scalar> =
                    (0..n + m).map(|_| rng.scalar(&field)).collect();
                coeffs.push(Scalar::one(&field));
                coeffs[n + m - 1] = a.trace().unwrap().add(&b.trace().unwrap()).neg();
                let p = Poly::from_coeffs(&field, coeffs);
                let d = cyclic_fit(&a, &b, &p).unwrap();
                let join = join_with_corner(&a, &b, &d);
                assert!(join.is_good_cyclic());
                assert_eq!(join.char_poly().unwrap(), p);
            }
        }
    }

    fn random_good_cyclic(field: &Field, n: usize, rng: &mut SeededRng) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, rng.scalar(field));
            }
            if i + 1 < n {
                m.set(i + 1, i, Scalar::one(field));
            }
        }
        m
    }

    #[test]
    fn wp_structure_enforces_clauses() {
        let f = q();
        let wp = wp_structure(vec![poly(&f, &[0, 1])], vec![poly(&f, &[-1, 1])]).unwrap();
        assert_eq!(wp.size(), 2);
        assert_eq!(wp.block_count(), 2);
        assert!(!wp.is_very_well_partitioned());
        assert_eq!(wp.matrix(), Matrix::from_i64(&f, &[&[0, 0], &[0, 1]]));

        let very = wp_structure(vec![poly(&f, &[0, 1])], vec![poly(&f, &[1, 0, 1])]).unwrap();
        assert!(very.is_very_well_partitioned());

        assert!(wp_structure(
            vec![poly(&f, &[0, 1]), poly(&f, &[0, 1])],
            vec![poly(&f, &[-1, 1])]
        )
        .is_err());
        assert!(wp_structure(vec![poly(&f, &[0, 0, 1])], vec![poly(&f, &[0, -1, 1])]).is_err());
        assert!(wp_structure(vec![], vec![poly(&f, &[-1, 1])]).is_err());
    }

    #[test]
    fn wp_from_matrix_splits_along_t() {
        let f = q();
        let a = Matrix::from_i64(&f, &[&[0, 0], &[0, 1]]);
        let (wp, w) = wp_from_matrix(&a).unwrap();
        assert_eq!(wp.ps(), &[poly(&f, &[0, 1])]);
        assert_eq!(wp.qs(), &[poly(&f, &[-1, 1])]);
        assert_eq!(w.source(), &a);
        assert_eq!(w.target(), &wp.matrix());

        let big = Matrix::companion(&poly(&f, &[0, 0, -1, 0, 1])).unwrap();
        let (wp, _) = wp_from_matrix(&big).unwrap();
        assert_eq!(wp.ps(), &[poly(&f, &[0, 0, 1])]);
        assert_eq!(wp.qs(), &[poly(&f, &[-1, 0, 1])]);

        let primary = Matrix::companion(&poly(&f, &[0, 0, 0, 1])).unwrap();
        assert!(matches!(wp_from_matrix(&primary), Err(Error::Precondition(_))));

        let dup = Matrix::identity(&g2(), 2);
        assert!(matches!(wp_from_matrix(&dup), Err(Error::Precondition(_))));

        let f3 = FieldDescriptor::prime_field(3).unwrap();
        let fin = Matrix::from_i64(&f3, &[&[0, 0], &[0, 1]]);
        let (wp, _) = wp_from_matrix(&fin).unwrap();
        assert_eq!(wp.ps(), &[poly(&f3, &[0, 1])]);
        assert_eq!(wp.qs(), &[poly(&f3, &[-1, 1])]);
    }

    #[test]
    fn wp_extract_spec_cases() {
        let f = q();
        let nilp = Matrix::from_i64(&f, &[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        let out = wp_extract(&nilp).unwrap();
        assert_eq!(out.n, nilp);
        assert_eq!((out.q, out.r), (0, 0));
        assert!(out.alpha.is_one());
        assert!(out.structure.is_none());

        let halves = Matrix::from_i64(&f, &[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let out = wp_extract(&halves).unwrap();
        assert_eq!(out.n.rows(), 0);
        assert_eq!((out.q, out.r), (1, 2));
        assert!(out.alpha.is_one());
        assert_eq!(out.witness.source(), &halves);

        let spread = Matrix::from_i64(&f, &[&[2, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        let out = wp_extract(&spread).unwrap();
        assert_eq!(out.n, Matrix::from_i64(&f, &[&[0, 0], &[0, 2]]));
        assert_eq!((out.q, out.r), (0, 2));
        let wp = out.structure.unwrap();
        assert_eq!(wp.ps(), &[poly(&f, &[0, 1])]);
        assert_eq!(wp.qs(), &[poly(&f, &[-2, 1])]);

        let tall = Matrix::identity(&f, 4);
        assert!(matches!(wp_extract(&tall), Err(Error::Precondition(_))));
    }

    #[test]
    fn wp_extract_odd_middle_run() {
        let f = q();
        let s1 = Matrix::companion(&poly(&f, &[0, 1, -2, 1])).unwrap();
        let s2 = Matrix::companion(&poly(&f, &[0, -1, 1])).unwrap();
        let s3 = s2.clone();
        let s4 = Matrix::zeros(&f, 1, 1);
        let m = Matrix::direct_sum_all(&f, &[s1, s2, s3, s4]);
        let out = wp_extract(&m).unwrap();
        assert_eq!((out.q, out.r), (1, 3));
        assert!(out.alpha.is_one());
        let wp = out.structure.unwrap();
        assert_eq!(wp.ps(), &[poly(&f, &[0, 1])]);
        assert_eq!(wp.qs(), &[poly(&f, &[1, -2, 1])]);
        assert_eq!(out.n.rows() + 2 * out.q + out.r, 8);
    }

    #[test]
    fn subtract_squarezero_matches_spec() {
        let f = q();
        let wp = wp_structure(vec![poly(&f, &[0, 1])], vec![poly(&f, &[-1, 1])]).unwrap();
        let (s, w) = wp_subtract_squarezero(&wp, &poly(&f, &[0, -1, 1])).unwrap();
        assert_eq!(s, Matrix::from_i64(&f, &[&[0, 0], &[-1, 0]]));
        let diff = wp.matrix().sub(&s);
        assert_eq!(diff, Matrix::from_i64(&f, &[&[0, 0], &[1, 1]]));
        assert_eq!(w.source(), &diff);
        assert_eq!(w.target(), &Matrix::companion(&poly(&f, &[0, -1, 1])).unwrap());

        let wp = wp_structure(vec![poly(&f, &[0, 1])], vec![poly(&f, &[1, -2, 1])]).unwrap();
        let r = poly(&f, &[0, 1, -2, 1]);
        let (s, w) = wp_subtract_squarezero(&wp, &r).unwrap();
        assert_eq!(s, Matrix::from_i64(&f, &[&[0, 0, 0], &[-1, 0, 0], &[0, 0, 0]]));
        assert_eq!(wp.matrix().sub(&s).char_poly().unwrap(), r);
        assert_eq!(w.target(), &Matrix::companion(&r).unwrap());

        let f2 = g2();
        let wp = wp_structure(vec![poly(&f2, &[0, 1])], vec![poly(&f2, &[1, 1])]).unwrap();
        let (s, _) = wp_subtract_squarezero(&wp, &poly(&f2, &[0, 1, 1])).unwrap();
        assert_eq!(s, Matrix::from_i64(&f2, &[&[0, 0], &[1, 0]]));

        assert!(matches!(
            wp_subtract_squarezero(&wp, &poly(&f2, &[0, 0, 1])),
            Err(Error::TraceMismatch(_))
        ));
    }

    #[test]
    fn subtract_squarezero_exhaustive_small_shapes() {
        let f = g2();
        let mut runs = 0;
        for total in 2..=4usize {
            for p_total in 1..total {
                let q_total = total - p_total;
                for ps in p_degree_splits(p_total) {
                    for qs in q_degree_splits(q_total) {
                        for p_polys in poly_choices(&f, &ps) {
                            for q_polys in poly_choices(&f, &qs) {
                                let Ok(wp) = wp_structure(p_polys.clone(), q_polys.clone())
                                else {
                                    continue;
                                };
                                let tr = wp.matrix().trace().unwrap();
                                for r_poly in monic_polys(&f, total) {
                                    if r_poly.trace().unwrap() != tr {
                                        continue;
                                    }
                                    let (s, w) = wp_subtract_squarezero(&wp, &r_poly).unwrap();
                                    assert!(s.is_square_zero());
                                    let diff = wp.matrix().sub(&s);
                                    assert_eq!(diff.char_poly().unwrap(), r_poly);
                                    assert_eq!(w.source(), &diff);
                                    runs += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(runs > 100, "only {runs} shape/target combinations were exercised");
    }

    fn p_degree_splits(total: usize) -> Vec<Vec<usize>> {
        fn tails(total: usize) -> Vec<Vec<usize>> {
            if total == 0 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for first in 2..=total {
                for mut rest in tails(total - first) {
                    let mut v = vec![first];
                    v.append(&mut rest);
                    out.push(v);
                }
            }
            out
        }
        let mut out = Vec::new();
        for first in 1..=total {
            for mut rest in tails(total - first) {
                let mut v = vec![first];
                v.append(&mut rest);
                out.push(v);
            }
        }
        out
    }

    fn q_degree_splits(total: usize) -> Vec<Vec<usize>> {
        p_degree_splits(total)
            .into_iter()
            .map(|mut v| {
                v.reverse();
                v
            })
            .collect()
    }

    fn monic_polys(f: &Field, deg: usize) -> Vec<Poly> {
        let mut out = Vec::new();
        for bits in 0..(1u32 << deg) {
            let mut coeffs: Vec<i64> = (0..deg).map(|k| ((bits >> k) & 1) as i64).collect();
            coeffs.push(1);
            out.push(Poly::from_i64(f, &coeffs));
        }
        out
    }

    fn poly_choices(f: &Field, degs: &[usize]) -> Vec<Vec<Poly>> {
        let mut out: Vec<Vec<Poly>> = vec![Vec::new()];
        for &d in degs {
            let opts = monic_polys(f, d);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    opts.iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.push(p.clone());
                        v
                    }).collect::<Vec<_>>()
                })
                .collect();
        }
        out
    }

    #[test]
    fn subtract_idempotent_matches_spec() {
        let f = q();
        let wp = wp_structure(vec![poly(&f, &[0, 1])], vec![poly(&f, &[-1, 1])]).unwrap();
        let one = Scalar::one(&f);
        let (p, w) = wp_subtract_idempotent(&wp, &one, &poly(&f, &[0, 0, 1])).unwrap();
        assert_eq!(p, Matrix::from_i64(&f, &[&[0, 0], &[-1, 1]]));
        let diff = wp.matrix().sub(&p);
        assert_eq!(diff, Matrix::from_i64(&f, &[&[0, 0], &[1, 0]]));
        assert_eq!(w.source(), &diff);

        let (p, _) = wp_subtract_idempotent(&wp, &one, &poly(&f, &[-1, 0, 1])).unwrap();
        assert!(p.is_idempotent());
        let diff = wp.matrix().sub(&p);
        assert_eq!(diff.char_poly().unwrap(), poly(&f, &[-1, 0, 1]));

        assert!(matches!(
            wp_subtract_idempotent(&wp, &Scalar::zero(&f), &poly(&f, &[0, 0, 1])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            wp_subtract_idempotent(&wp, &one, &poly(&f, &[0, -1, 1])),
            Err(Error::TraceMismatch(_))
        ));
    }

    #[test]
    fn connector_idempotent_on_every_legal_shape() {
        let fields = [q(), FieldDescriptor::prime_field(3).unwrap()];
        for field in &fields {
            let mus = [Scalar::one(field).neg(), Scalar::from_i64(field, 7)];
            for total in 2..=5usize {
                for p_total in 1..total {
                    for ps in p_degree_splits(p_total) {
                        for qs in q_degree_splits(total - p_total) {
                            let sizes: Vec<usize> =
                                ps.iter().chain(qs.iter()).copied().collect();
                            for mu in &mus {
                                let p = connector_idempotent(field, &sizes, mu);
                                assert!(p.is_idempotent(), "sizes {sizes:?}");
                            }
                            let s = connector_square_zero(field, &sizes);
                            assert!(s.is_square_zero(), "sizes {sizes:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rescaled_structure_tracks_scaled_matrix() {
        let f = q();
        let wp = wp_structure(vec![poly(&f, &[0, 0, 1])], vec![poly(&f, &[-4, 1])]).unwrap();
        let two = Scalar::from_i64(&f, 2);
        let scaled = wp.rescale(&two).unwrap();
        assert_eq!(scaled.qs(), &[poly(&f, &[-2, 1])]);
        let shrunk = wp.matrix().scale(&two.inv().unwrap());
        let w = witness_similar(&shrunk, &scaled.matrix()).unwrap();
        assert_eq!(w.target(), &scaled.matrix());
    }
}
