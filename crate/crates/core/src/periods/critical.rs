use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::roots::poly_roots_complex;
use super::Tolerances;
use crate::error::{Error, Result};
use crate::foliation::RationalFirstIntegral;
use crate::poly::{rat, rat_to_f64, Poly, Rat};

#[derive(Clone, Debug, Serialize)]
pub struct CriticalPoint {
    pub point: [Complex64; 2],
    pub value: Complex64,
    /// Relative residual of the critical equations after polishing.
    pub residual: f64,
    /// Determinant of the Jacobian of the critical equations (nonzero at Morse points).
    pub hessian: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalValue {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Affine critical points of `f` off the polar and zero divisors, and their values.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalData {
    pub points: Vec<CriticalPoint>,
    pub values: Vec<CriticalValue>,
    /// `(m+n−1)² − mn` for comparison with the number of points found.
    pub milnor: u64,
}

impl CriticalData {
    pub fn count(&self) -> usize {
        self.values.iter().map(|v| v.multiplicity).sum()
    }

    pub fn count_matches_milnor(&self) -> bool {
        self.count() as u64 == self.milnor
    }

    /// Smallest distance between two distinct critical values.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.values.iter().enumerate() {
            for b in &self.values[i + 1..] {
                best = best.min((a.value - b.value).norm());
            }
        }
        best
    }

    /// `Δ(t) = Π (t − t_i)^{μ_i}` evaluated at `t`.
    pub fn delta(&self, t: Complex64) -> Complex64 {
        self.values.iter().fold(Complex64::new(1.0, 0.0), |acc, v| acc * (t - v.value).powu(v.multiplicity as u32))
    }

    /// Ascending coefficients of `Δ(t)`.
    pub fn delta_coefficients(&self) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for v in &self.values {
            for _ in 0..v.multiplicity {
                let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
                for (k, a) in c.iter().enumerate() {
                    next[k + 1] += a;
                    next[k] -= a * v.value;
                }
                c = next;
            }
        }
        c
    }
}

/// Coefficients in `y` of `h(x0, y)`.
fn specialize_x<T, F>(h: &Poly, x0: T, zero: T, conv: F) -> Vec<T>
where
    T: Clone + std::ops::Mul<Output = T> + std::ops::AddAssign + One,
    F: Fn(&Rat) -> T,
{
    let dy = h.degree_in(1).unwrap_or(0) as usize;
    let mut out = vec![zero; dy + 1];
    for (m, c) in h.terms() {
        let mut v = conv(c);
        for _ in 0..m.exp(0) {
            v = v * x0.clone();
        }
        out[m.exp(1) as usize] += v;
    }
    out
}

fn det(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rat::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

/// Sylvester resultant of two univariate polynomials with formal degrees `len − 1`.
fn sylvester(a: &[Rat], b: &[Rat]) -> Rat {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let n = da + db;
    if n == 0 {
        return Rat::one();
    }
    let mut m = vec![vec![Rat::zero(); n]; n];
    for i in 0..db {
        for (k, c) in a.iter().rev().enumerate() {
            m[i][i + k] = c.clone();
        }
    }
    for i in 0..da {
        for (k, c) in b.iter().rev().enumerate() {
            m[db + i][i + k] = c.clone();
        }
    }
    det(m)
}

/// `Res_y(h1, h2)` as ascending coefficients in `x`, by exact evaluation and interpolation.
pub(crate) fn resultant_y(h1: &Poly, h2: &Poly) -> Vec<Rat> {
    let bound = (h1.degree().unwrap_or(0) * h2.degree().unwrap_or(0)) as i64;
    let xs: Vec<Rat> = (0..=bound).map(rat).collect();
    let conv = |c: &Rat| c.clone();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|x0| sylvester(&specialize_x(h1, x0.clone(), Rat::zero(), conv), &specialize_x(h2, x0.clone(), Rat::zero(), conv)))
        .collect();
    interpolate(&xs, &ys)
}

/// Newton divided differences, expanded to ascending monomial coefficients.
fn interpolate(xs: &[Rat], ys: &[Rat]) -> Vec<Rat> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut c = vec![Rat::zero(); n];
    for k in (0..n).rev() {
        // c ← c·(x − x_k) + dd[k]
        let mut next = vec![Rat::zero(); n];
        for i in 0..n - 1 {
            next[i + 1] += &c[i];
            next[i] -= &c[i] * &xs[k];
        }
        next[0] += &dd[k];
        c = next;
    }
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    c
}

fn rel_residual(h: &Poly, pt: &[Complex64]) -> f64 {
    let scale: f64 = h
        .terms()
        .map(|(m, c)| rat_to_f64(c).abs() * pt[0].norm().powi(m.exp(0) as i32) * pt[1].norm().powi(m.exp(1) as i32))
        .sum();
    h.eval_complex(pt).norm() / scale.max(f64::MIN_POSITIVE)
}

fn newton2(h: [&Poly; 2], jac: &[[Poly; 2]; 2], mut pt: [Complex64; 2], iters: usize) -> [Complex64; 2] {
    for _ in 0..iters {
        let f = [h[0].eval_complex(&pt), h[1].eval_complex(&pt)];
        let j: Vec<Complex64> = jac.iter().flatten().map(|p| p.eval_complex(&pt)).collect();
        let d = j[0] * j[3] - j[1] * j[2];
        if d.norm() == 0.0 || !d.is_finite() {
            break;
        }
        let dx = (f[0] * j[3] - f[1] * j[1]) / d;
        let dy = (j[0] * f[1] - j[2] * f[0]) / d;
        pt = [pt[0] - dx, pt[1] - dy];
        if dx.norm() + dy.norm() < 1e-16 * (1.0 + pt[0].norm() + pt[1].norm()) {
            break;
        }
    }
    pt
}

/// Common zeros of `a` and `b` in `C²` from the resultant in `y`, polished by
/// Newton steps and kept when both relative residuals are below `tol`.
/// Nearby duplicates are merged.
pub(crate) fn common_zeros(a: &Poly, b: &Poly, tol: f64) -> Result<Vec<([Complex64; 2], f64)>> {
    let res = resultant_y(a, b);
    if res.iter().all(Zero::is_zero) {
        return Err(Error::Genericity("equations share a common factor (resultant vanishes)".into()));
    }
    let maxc = res.iter().map(|c| c.abs()).max().unwrap();
    let xc: Vec<Complex64> = res.iter().map(|c| Complex64::new(rat_to_f64(&(c / &maxc)), 0.0)).collect();
    let jac = [[a.derivative(0), a.derivative(1)], [b.derivative(0), b.derivative(1)]];
    let mut out: Vec<([Complex64; 2], f64)> = Vec::new();
    for x0 in poly_roots_complex(&xc) {
        let yc = specialize_x(a, x0, Complex64::new(0.0, 0.0), |c| Complex64::new(rat_to_f64(c), 0.0));
        for y0 in poly_roots_complex(&yc) {
            let pt = newton2([a, b], &jac, [x0, y0], 40);
            let residual = rel_residual(a, &pt).max(rel_residual(b, &pt));
            if !(residual < tol) {
                continue;
            }
            let scale = 1.0 + pt[0].norm() + pt[1].norm();
            if out.iter().any(|(q, _)| (q[0] - pt[0]).norm() + (q[1] - pt[1]).norm() < 1e-7 * scale) {
                continue;
            }
            out.push((pt, residual));
        }
    }
    Ok(out)
}

/// Critical point record for a polished zero of the critical numerators.
pub(crate) fn critical_point(f: &RationalFirstIntegral, pt: [Complex64; 2], residual: f64) -> CriticalPoint {
    let (h1, h2) = f.critical_numerators();
    let j = [h1.derivative(0), h1.derivative(1), h2.derivative(0), h2.derivative(1)].map(|p| p.eval_complex(&pt));
    CriticalPoint { point: pt, value: f.eval_complex(&pt), residual, hessian: j[0] * j[3] - j[1] * j[2] }
}

pub(crate) fn relative_residual(h: &Poly, pt: &[Complex64]) -> f64 {
    rel_residual(h, pt)
}

pub(crate) fn polish(h: [&Poly; 2], pt: [Complex64; 2]) -> [Complex64; 2] {
    let jac = [[h[0].derivative(0), h[0].derivative(1)], [h[1].derivative(0), h[1].derivative(1)]];
    newton2(h, &jac, pt, 40)
}

/// Affine critical points of `f` with `PQ ≠ 0`, found from the resultant of the
/// critical equations, and their critical values with multiplicities.
pub fn critical_values(f: &RationalFirstIntegral, tol: &Tolerances) -> Result<CriticalData> {
    let (h1, h2) = f.critical_numerators();
    let mut points: Vec<CriticalPoint> = common_zeros(&h1, &h2, tol.newton)?
        .into_iter()
        .filter(|(pt, _)| rel_residual(f.p_affine(), pt) >= 1e-6 && rel_residual(f.q_affine(), pt) >= 1e-6)
        .map(|(pt, r)| critical_point(f, pt, r))
        .collect();
    points.sort_by(|a, b| (a.value.re, a.value.im).partial_cmp(&(b.value.re, b.value.im)).unwrap());
    let mut values: Vec<CriticalValue> = Vec::new();
    for p in &points {
        match values.iter_mut().find(|v| (v.value - p.value).norm() <= tol.merge * p.value.norm().max(1.0)) {
            Some(v) => v.multiplicity += 1,
            None => values.push(CriticalValue { value: p.value, multiplicity: 1 }),
        }
    }
    Ok(CriticalData { points, values, milnor: f.milnor() })
}
