//! Exact arithmetic over ℚ(i) and the Laurent ring ℚ(i)[z, z⁻¹].

pub(crate) mod dense;
mod gaussian;
mod laurent;

pub use gaussian::{ratio_to_f64, rational_to_f64, GaussianRational, Rational};
pub(crate) use gaussian::ldexp;
pub use laurent::{rat, LaurentPoly};
