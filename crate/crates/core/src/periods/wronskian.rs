use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{loop_integral, transport_loop, FiberLoop, Tolerances};
use crate::error::Result;
use crate::foliation::RationalFirstIntegral;
use crate::poly::DifferentialForm;

#[derive(Clone, Debug, Serialize)]
pub struct PeriodSample {
    pub t: Complex64,
    /// Row `i`, column `j`: `∫_{γ_i} α_j`.
    pub matrix: Vec<Vec<Complex64>>,
    /// Determinant when the matrix is square.
    pub det: Option<Complex64>,
}

/// Integrals of every form over every loop, one row per loop.
pub fn period_matrix(forms: &[DifferentialForm], loops: &[FiberLoop]) -> Result<Vec<Vec<Complex64>>> {
    loops
        .par_iter()
        .map(|g| forms.iter().map(|w| Ok(loop_integral(w, g)?.value)).collect::<Result<Vec<_>>>())
        .collect()
}

pub(crate) fn determinant(m: &[Vec<Complex64>]) -> Option<Complex64> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return None;
    }
    Some(DMatrix::from_fn(n, n, |i, j| m[i][j]).determinant())
}

/// Period matrices and determinants at each `t`, with every loop transported
/// from its own base point.
pub fn wronskian_samples(
    f: &RationalFirstIntegral,
    forms: &[DifferentialForm],
    loops: &[FiberLoop],
    ts: &[Complex64],
    tol: &Tolerances,
) -> Result<Vec<PeriodSample>> {
    ts.iter()
        .map(|&t| {
            let moved: Vec<FiberLoop> = loops.par_iter().map(|g| transport_loop(f, g, t, tol)).collect::<Result<_>>()?;
            let matrix = period_matrix(forms, &moved)?;
            let det = determinant(&matrix);
            Ok(PeriodSample { t, matrix, det })
        })
        .collect()
}
