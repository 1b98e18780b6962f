//! Conway normal forms as Hahn series with rational coefficients.

mod nf;
mod render;
mod truncated;
mod value;

pub use nf::{coeff, ratio, Coeff, Exponent, Nf, Term};
pub use render::{nf_json, render_nf, render_terms, render_text, terms_json};
pub use truncated::{max_floor, Truncated};
pub use value::{
    additive_decompose, archimedean_relate, binomial, embed_ordinal, multiplicative_decompose, nf_add, nf_agree,
    nf_compare, nf_div, nf_invert, nf_mul, nf_neg, nf_pow_int, nf_scale, nf_sub, nth_root, omega_map, sum_of_stream,
    Asymptotic, Comparison, Decomposition, MultDecomposition, Prefix, SurrealNF, DEFAULT_DEPTH,
};
