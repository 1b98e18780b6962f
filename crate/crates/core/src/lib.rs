//! Exact computer algebra on a computable fragment of the surreal numbers.

pub mod cut;
pub mod derivation;
pub mod dyadic;
pub mod error;
pub mod explog;
pub mod oracle;
pub mod ordinal;
pub mod series;

pub use cut::{canonical_cut, genetic_add, genetic_leq, genetic_mul, genetic_neg, is_cofinal, simplest_between, CutExpr, GeneticEngine};
pub use dyadic::{compare_lex, decode_sign, dyadic_add, dyadic_mul, dyadic_neg, encode_sign, is_simpler, Dyadic, Sign, SignSeq};
pub use error::{Error, Result};
pub use ordinal::{compare_ordinal, natural_product, natural_sum, omega_pow_ordinal, OrdExponent, OrdTerm, OrdinalCnf};
pub use series::{Coeff, Exponent, Nf, SurrealNF, Term, Truncated};
pub use derivation::{asymptotic_integrate, check_derivation_axioms, d_log_atomic, derive, log_derivative, AxiomReport, DerivationResult, Integral};
pub use explog::{exp_nf, g_map, h_map, is_log_atomic, lambda_of_level, log_nf, same_explog_class, same_level, LogAtomic};
