//! Univariate polynomials, finite-field factorization and truncated power series.

mod factor;
mod series;
mod uni;

pub use factor::{poly_order, EXHAUSTIVE_ROOT_LIMIT};
pub use series::{eval_bivariate, series_newton_solve, PowerSeries};
pub use uni::UniPoly;
