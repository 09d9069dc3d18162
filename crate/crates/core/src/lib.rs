//! Exact linear algebra over the rationals and finite fields, built around
//! decompositions of square matrices into sums of square-zero matrices and
//! (in characteristic 2) sums of idempotents, with machine-checkable
//! similarity certificates for every construction.

pub mod error;
pub mod field;
pub mod poly;
pub mod matrix;
pub mod factor;
pub mod canonical;
pub mod certify;
pub mod cyclicfit;
pub mod idempotent2;
pub mod squarezero;

pub use canonical::{
    elementary_divisors, fitting, good_cyclic_to_companion, invariant_factors, jordan_size1_count,
    rcf, roth_merge, witness_similar, zero_diagonal_similarity, Fitting, RationalCanonicalForm,
    SimilarityWitness,
};
pub use certify::{
    cert_conjugate, cert_direct_sum, cert_scale, enumerate_matrices, oracle_two_idempotents,
    oracle_two_squarezero, random_trace_zero, Certificate, SeededRng, SummandKind, VerifyReport,
};
pub use cyclicfit::{
    cyclic_fit, wp_extract, wp_from_matrix, wp_structure, wp_subtract_idempotent,
    wp_subtract_squarezero, WellPartitioned, WpExtract,
};
pub use error::{Error, Result};
pub use field::{Field, FieldDescriptor, FieldKind, Scalar};
pub use idempotent2::{
    alpha_pair_idem3, construct_two_idempotents_char2, decide_two_idempotents_char2,
    idem_minus_squarezero, pad_three_idempotents_char2, primary_power_idem3, TwoIdempotentVerdict,
};
pub use matrix::{linear_solve, LinearSolution, Matrix};
pub use poly::{Parity, Poly};
pub use squarezero::{
    construct_two_squarezero, decide_two_squarezero, pad_three_squarezero, pair_padding_subtract,
    sum_four_squarezero, three_squarezero_char2, TwoSquareZeroVerdict,
};
