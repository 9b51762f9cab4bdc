//! Words, noncommutative polynomials in X and Y, tensors and derivations.

mod parse;
mod poly;
mod tensor;
mod word;

pub use parse::parse_poly;
pub use poly::{constant_matrix, letter_matrix, lift_matrix, NCPolynomial, PolyMatrix};
pub use tensor::{
    amplified_diff, derive, derive_word, ldelta, odot, partial_diff, partial_diff_k, rdelta, tensor_matrix_mul_left,
    tensor_matrix_mul_right, Derivation, Tensor, TensorMatrix, TensorPoly,
};
pub use word::{Letter, Word};
