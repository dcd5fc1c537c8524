//! Second routes to `log` and `exp`, independent of the coefficient recurrences.
//!
//! `log1p_by_integration` integrates `u' / (1 + u)`; `exp_by_newton` doubles
//! precision with `g ← g·(1 + u − log g)` on top of it. The recurrence-based
//! [`Series::log1p`] and [`Series::exp`] never call into this file.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Series, SeriesError};

/// `log(1 + u) = ∫ u' / (1 + u)`.
pub fn log1p_by_integration(u: &Series) -> Result<Series, SeriesError> {
    if !u.coeff(0).is_zero() {
        return Err(SeriesError::Domain("log1p of a series with nonzero constant term"));
    }
    let order = u.order();
    if order == 0 {
        return Ok(Series::zero(0));
    }
    let one_plus_u = &Series::one(order) + u;
    let quotient = u.derivative().mul(&one_plus_u.reciprocal()?);
    Ok(quotient.integral())
}

/// `exp(u)` by Newton iteration, doubling the number of correct coefficients each step.
pub fn exp_by_newton(u: &Series) -> Result<Series, SeriesError> {
    if !u.coeff(0).is_zero() {
        return Err(SeriesError::Domain("exp of a series with nonzero constant term"));
    }
    let order = u.order();
    let mut g = Series::one(0);
    let mut precision = 0;
    while precision < order {
        precision = (2 * precision + 1).min(order);
        let mut lifted = g.clone().into_coeffs();
        lifted.resize(precision + 1, BigRational::zero());
        let g_lifted = Series::new(lifted);
        let one_minus_log = &Series::one(precision) - &log1p_by_integration(&(&g_lifted - &Series::one(precision)))?;
        let correction = &one_minus_log + &u.truncate(precision);
        g = g_lifted.mul(&correction);
    }
    debug_assert!(g.coeff(0).is_one());
    Ok(g)
}
