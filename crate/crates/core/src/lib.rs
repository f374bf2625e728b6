//! Numerical engine for merged regularization products of one-dimensional
//! distributions.
//!
//! A product `(S ⊗ T)_(α,β)` pairs the mollifier regularization of one factor
//! (`S * δ_n`, with `δ_n(x) = n^β Φ(n^β x)`) with the analytic boundary-value
//! regularization of the other (`T_red(x, n^-α)`), symmetrizes, and takes
//! `n → ∞`. The crate provides each ingredient, the limit machinery, the
//! closed-form table for products of `δ` and its first two derivatives, and
//! the point-interaction scattering problem that the `δ⊗δ` product induces.

pub mod analytic;
pub mod bump;
pub mod distribution;
pub mod error;
pub mod mollifier;
pub mod numerics;
pub mod poly;
pub mod product;
pub mod quantum;
pub mod regularize;
pub mod test_function;

pub use analytic::{
    cauchy, delta_red, kernel_for, pair_delta_red, red_continuous, red_from_cauchy, RationalKernel,
};
pub use distribution::{exact_pairing, ContinuousFn, Distribution};
pub use error::{Error, Result};
pub use mollifier::{Mollifier, Moment};
pub use numerics::{
    adaptive_quad, decay_exponent, extrapolate, Divergence, LimitEstimate, QuadConfig, QuadResult,
    Schedule,
};
pub use product::{
    closed_form, continuous_consistency, critical_alpha, direct_product_integral, product_limit,
    product_term, sequential_only_divergence, verify_entry, verify_table, ClosedForm,
    ConsistencyReport, Coverage, CrossCheck, ProductQuery, Regime, Source, TableReport, TableRow,
};
pub use quantum::{
    effective_coupling, generalized_coupling, scattering_coefficients, scattering_state, solve,
    verify_matching, CouplingSource, MatchingReport, PointInteraction, ScatteringSolution, Side,
};
pub use regularize::{conv_delta_deriv, conv_function, delta_seq, SeqParams};
pub use test_function::TestFunction;
