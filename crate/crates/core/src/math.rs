//! Float helpers that work without `std`.

/// Natural logarithm.
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

/// `base^exp` for real exponents.
pub(crate) fn powf(base: f64, exp: f64) -> f64 {
    libm::pow(base, exp)
}

/// Logarithm of `x` in the given base.
pub(crate) fn log(base: f64, x: f64) -> f64 {
    libm::log(x) / libm::log(base)
}
