use crate::error::{Error, Result};
use num_complex::Complex64 as C;

const MAX_TERMS: usize = 200_000;

/// Sum `Σ a_n x^n`, stopping once the geometric tail bound
/// `|a_n x^n|·ρ/(1−ρ)` drops below `tol`. The caller guarantees that
/// consecutive terms shrink at least by the factor `majorant_ratio = ρ`.
pub fn sum_power_series<F>(coeff: F, x: C, tol: f64, majorant_ratio: f64) -> Result<C>
where
    F: Fn(usize) -> C,
{
    if !(0.0..1.0).contains(&majorant_ratio) {
        return Err(Error::NoConvergence(format!(
            "majorant ratio {majorant_ratio} is not below 1"
        )));
    }
    let mut sum = C::new(0.0, 0.0);
    let mut power = C::new(1.0, 0.0);
    let factor = majorant_ratio / (1.0 - majorant_ratio);
    for n in 0..MAX_TERMS {
        let term = coeff(n) * power;
        sum += term;
        if term.norm() * factor < tol {
            return Ok(sum);
        }
        power *= x;
    }
    Err(Error::NoConvergence(format!(
        "tail bound still above {tol:e} after {MAX_TERMS} terms"
    )))
}
