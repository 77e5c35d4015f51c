use num_complex::Complex64;

use super::{loop_integral, vanishing_loop, CriticalPoint, Tolerances};
use crate::error::{Error, Result};
use crate::foliation::RationalFirstIntegral;
use crate::poly::DifferentialForm;

/// First Melnikov function `M₁(t) = −t ∫_{δ_t} ω₁ / (PQ)` of a deformation `ω₁`
/// of the foliation defined by `f`, with `δ_t` the vanishing cycle at `center`.
///
/// For a pull-back foliation `f` is the pulled-back first integral and
/// `center` a tangency critical point.
pub fn melnikov1(
    f: &RationalFirstIntegral,
    center: &CriticalPoint,
    omega1: &DifferentialForm,
    ts: &[Complex64],
    tol: &Tolerances,
) -> Result<Vec<Complex64>> {
    if omega1.degree() != 1 || omega1.nvars() != 2 || !omega1.is_polynomial() {
        return Err(Error::Invalid("ω₁ must be a polynomial 1-form in x, y".into()));
    }
    let form = DifferentialForm::rational(omega1.clone(), &(f.p_affine() * f.q_affine()), 1);
    ts.iter()
        .map(|&t| {
            let gamma = vanishing_loop(f, center, t, tol)?;
            Ok(-t * loop_integral(&form, &gamma)?.value)
        })
        .collect()
}
