//! Numerical kernel shared by the rest of the crate: distribution functions,
//! quantiles, bracketing root finding and adaptive quadrature.

mod cauchy;
mod gamma;
mod normal;
mod quad;
mod roots;
mod stable;

pub use cauchy::{cauchy_cdf, cauchy_quantile};
pub(crate) use cauchy::cauchy_quantile_unchecked;
pub use gamma::{chisq_quantile, chisq_upper_quantile, gamma_p, gamma_q, ln_gamma};
pub use normal::{erf, erfc, normal_cdf, normal_pdf, normal_quantile, normal_sf};
pub(crate) use normal::normal_quantile_unchecked;
pub use quad::integrate;
pub use roots::{bisect, find_root, RootBracket};
pub use stable::{stable_quantile, StableLaw};
