use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::FiberLoop;
use crate::error::{Error, Result};
use crate::poly::DifferentialForm;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LoopIntegral {
    pub value: Complex64,
    /// Difference to the same rule on every other node.
    pub error: f64,
}

/// `dz/dθ` of equally spaced periodic samples by spectral differentiation.
fn spectral_derivative(z: &[Complex64]) -> Vec<Complex64> {
    let n = z.len();
    let mut planner = FftPlanner::new();
    let mut buf = z.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let freq = if k < n / 2 {
            k as f64
        } else if k == n / 2 && n.is_multiple_of(2) {
            0.0
        } else {
            k as f64 - n as f64
        };
        *c *= Complex64::new(0.0, freq) / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf
}

fn trapezoid(omega: &DifferentialForm, nodes: &[[Complex64; 2]]) -> Result<Complex64> {
    let n = nodes.len();
    let dx = spectral_derivative(&nodes.iter().map(|z| z[0]).collect::<Vec<_>>());
    let dy = spectral_derivative(&nodes.iter().map(|z| z[1]).collect::<Vec<_>>());
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, z) in nodes.iter().enumerate() {
        if !omega.is_polynomial() {
            let den = omega.divisor().eval_complex(z);
            let scale: f64 = omega.divisor().terms().map(|(_, c)| crate::poly::rat_to_f64(c).abs()).sum::<f64>() * (1.0 + z[0].norm() + z[1].norm()).powi(omega.divisor().degree().unwrap_or(0) as i32);
            if den.norm() <= 1e-12 * scale {
                return Err(Error::Numeric(format!("loop passes through a pole at node {k}")));
            }
        }
        let c = omega.eval_complex(z);
        acc += c[0] * dx[k] + c[1] * dy[k];
    }
    Ok(acc * (2.0 * PI / n as f64))
}

/// `∫_γ ω` for a rational 1-form in two variables by the periodic trapezoid
/// rule with spectrally differentiated node coordinates.
pub fn loop_integral(omega: &DifferentialForm, gamma: &FiberLoop) -> Result<LoopIntegral> {
    if omega.degree() != 1 || omega.nvars() != 2 {
        return Err(Error::Invalid("loop integrals need a 1-form in x, y".into()));
    }
    if gamma.nodes.len() < 8 {
        return Err(Error::Invalid("loop has too few nodes".into()));
    }
    let full = trapezoid(omega, &gamma.nodes)?;
    let half: Vec<[Complex64; 2]> = gamma.nodes.iter().step_by(2).copied().collect();
    let coarse = trapezoid(omega, &half)?;
    Ok(LoopIntegral { value: full, error: (full - coarse).norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periods::circle_loop;
    use crate::poly::{DifferentialForm, Poly, Vars};

    #[test]
    fn exact_form_integrates_to_zero() {
        let v = Vars::new(&["x", "y"]);
        let g = v.parse("x^3*y - 2*x*y^2 + 5").unwrap();
        let w = DifferentialForm::function(g).d().unwrap();
        let gamma = circle_loop(Complex64::new(0.3, 0.1), 1.7, Complex64::new(0.5, -0.2), 128);
        assert!(loop_integral(&w, &gamma).unwrap().value.norm() < 1e-8);
    }

    #[test]
    fn residue_of_dx_over_x() {
        let x = Poly::var(2, 0);
        let w = DifferentialForm::rational(DifferentialForm::one_form(vec![Poly::one(2), Poly::zero(2)]), &x, 1);
        let gamma = circle_loop(Complex64::new(0.0, 0.0), 1.0, Complex64::new(0.0, 0.0), 64);
        let r = loop_integral(&w, &gamma).unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-8);
        assert!(r.error < 1e-8);
    }

    #[test]
    fn pole_on_path_is_reported() {
        let x = Poly::var(2, 0);
        let w = DifferentialForm::rational(DifferentialForm::one_form(vec![Poly::one(2), Poly::zero(2)]), &x, 1);
        let gamma = circle_loop(Complex64::new(1.0, 0.0), 1.0, Complex64::new(0.0, 0.0), 64);
        assert!(loop_integral(&w, &gamma).is_err());
    }
}
