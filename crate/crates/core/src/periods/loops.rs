use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{CriticalPoint, Tolerances};
use crate::error::{Error, Result};
use crate::foliation::RationalFirstIntegral;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum LoopKind {
    /// Built from the quadratic model at a Morse point with this critical value.
    Vanishing { critical_value: Complex64 },
    /// A vanishing loop carried along a path in the `t`-plane.
    LiftedCircle { critical_value: Complex64 },
    /// A coordinate circle in the `x`-plane (not on a fiber); for tests of the quadrature.
    Chart,
}

/// Closed loop sampled at equally spaced parameter values `θ_k = 2πk/N`;
/// the node after the last one is the first.
#[derive(Clone, Debug, Serialize)]
pub struct FiberLoop {
    pub t: Complex64,
    pub nodes: Vec<[Complex64; 2]>,
    pub kind: LoopKind,
    /// Largest relative on-fiber residual over the nodes.
    pub max_residual: f64,
}

impl FiberLoop {
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.nodes {
            for b in &self.nodes {
                d = d.max(((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt());
            }
        }
        d
    }
}

/// `F_t = P^q − t Q^p` and its gradient, evaluated in floating point.
pub(crate) struct FiberEquation {
    p: Poly,
    q: Poly,
    dp: [Poly; 2],
    dq: [Poly; 2],
    pe: u32,
    qe: u32,
}

impl FiberEquation {
    pub(crate) fn new(f: &RationalFirstIntegral) -> Self {
        let (p, q) = (f.p_affine().clone(), f.q_affine().clone());
        FiberEquation { dp: [p.derivative(0), p.derivative(1)], dq: [q.derivative(0), q.derivative(1)], p, q, pe: f.p(), qe: f.q() }
    }

    /// `(F_t, ∇F_t, Q^p, scale)` where `scale = |P|^q + |t||Q|^p`.
    fn eval(&self, z: &[Complex64; 2], t: Complex64) -> (Complex64, [Complex64; 2], Complex64, f64) {
        let p = self.p.eval_complex(z);
        let q = self.q.eval_complex(z);
        let pq1 = p.powu(self.qe - 1);
        let qp1 = q.powu(self.pe - 1);
        let (pq, qp) = (pq1 * p, qp1 * q);
        let grad = [0, 1].map(|i| {
            pq1 * self.dp[i].eval_complex(z) * self.qe as f64 - t * qp1 * self.dq[i].eval_complex(z) * self.pe as f64
        });
        (pq - t * qp, grad, qp, pq.norm() + t.norm() * qp.norm())
    }

    pub(crate) fn residual(&self, z: &[Complex64; 2], t: Complex64) -> f64 {
        let (v, _, _, s) = self.eval(z, t);
        v.norm() / s.max(f64::MIN_POSITIVE)
    }

    /// Minimum-norm Newton steps onto `F_t = 0`.
    pub(crate) fn correct(&self, mut z: [Complex64; 2], t: Complex64, tol: f64, iters: usize) -> ([Complex64; 2], f64) {
        let mut res = self.residual(&z, t);
        for _ in 0..iters {
            if res < tol * 1e-3 {
                break;
            }
            let (v, g, _, _) = self.eval(&z, t);
            let n2 = g[0].norm_sqr() + g[1].norm_sqr();
            if n2 == 0.0 {
                break;
            }
            z = [z[0] - v * g[0].conj() / n2, z[1] - v * g[1].conj() / n2];
            res = self.residual(&z, t);
        }
        (z, res)
    }

    /// Velocity `dz/dt` of the minimum-norm lift of a moving fiber.
    fn velocity(&self, z: &[Complex64; 2], t: Complex64) -> [Complex64; 2] {
        let (_, g, qp, _) = self.eval(z, t);
        let n2 = g[0].norm_sqr() + g[1].norm_sqr();
        [qp * g[0].conj() / n2, qp * g[1].conj() / n2]
    }
}

/// Hessian of `f` at a critical point: `f/(PQ)` times the Jacobian of the
/// critical numerators.
fn hessian(f: &RationalFirstIntegral, c: &CriticalPoint) -> [[Complex64; 2]; 2] {
    let (h1, h2) = f.critical_numerators();
    let z = &c.point;
    let s = c.value / (f.p_affine().eval_complex(z) * f.q_affine().eval_complex(z));
    let j = [[h1.derivative(0), h1.derivative(1)], [h2.derivative(0), h2.derivative(1)]].map(|r| r.map(|p| p.eval_complex(z) * s));
    let b = (j[0][1] + j[1][0]) * 0.5;
    [[j[0][0], b], [b, j[1][1]]]
}

/// Vanishing loop on the fiber `f = t` near the Morse point `c`: the real
/// circle of the diagonalized quadratic model, pushed onto the fiber by Newton steps.
pub fn vanishing_loop(f: &RationalFirstIntegral, c: &CriticalPoint, t: Complex64, tol: &Tolerances) -> Result<FiberLoop> {
    let h = hessian(f, c);
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let size = h.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
    if det.norm() <= 1e-12 * size * size {
        return Err(Error::Numeric(format!("critical point with value {} is not Morse", c.value)));
    }
    // v^T H v = a (v_i + (b/a) v_j)^2 + (det/a) v_j^2 with the larger diagonal entry as pivot
    let (i, j) = if h[0][0].norm() >= h[1][1].norm() { (0, 1) } else { (1, 0) };
    let (a, b) = (h[i][i], h[0][1]);
    if a.norm() <= 1e-14 * size {
        return Err(Error::Numeric("degenerate quadratic model (zero diagonal)".into()));
    }
    let (sa, sd) = (a.sqrt(), (det / a).sqrt());
    let r = (2.0 * (t - c.value)).sqrt();
    let eq = FiberEquation::new(f);
    let n = tol.nodes;
    let mut nodes = Vec::with_capacity(n);
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let th = 2.0 * PI * k as f64 / n as f64;
        let (w1, w2) = (r * th.cos(), r * th.sin());
        let vj = w2 / sd;
        let vi = w1 / sa - b / a * vj;
        let mut z = c.point;
        z[i] += vi;
        z[j] += vj;
        let (z, res) = eq.correct(z, t, tol.fiber, 30);
        if !(res <= tol.fiber) {
            return Err(Error::Numeric(format!("Newton correction failed at node {k}: residual {res:.3e}")));
        }
        worst = worst.max(res);
        nodes.push(z);
    }
    Ok(FiberLoop { t, nodes, kind: LoopKind::Vanishing { critical_value: c.value }, max_residual: worst })
}

/// Carries a fiber loop from `γ.t` to `t_new` along the straight segment by
/// predictor–corrector continuation with step halving.
pub fn transport_loop(f: &RationalFirstIntegral, gamma: &FiberLoop, t_new: Complex64, tol: &Tolerances) -> Result<FiberLoop> {
    let eq = FiberEquation::new(f);
    let mut nodes = gamma.nodes.clone();
    let (t0, total) = (gamma.t, t_new - gamma.t);
    let (mut s, mut h) = (0.0f64, 1.0f64 / 16.0);
    let mut steps = 0usize;
    while s < 1.0 {
        if steps >= tol.max_steps {
            return Err(Error::Numeric(format!("continuation exceeded {} steps at s = {s:.4}", tol.max_steps)));
        }
        steps += 1;
        let h_eff = h.min(1.0 - s);
        let (ta, tb) = (t0 + total * s, t0 + total * (s + h_eff));
        let dt = tb - ta;
        let mut next = Vec::with_capacity(nodes.len());
        let mut ok = true;
        for z in &nodes {
            let v = eq.velocity(z, ta);
            let pred = [z[0] + v[0] * dt, z[1] + v[1] * dt];
            let (zc, res) = eq.correct(pred, tb, tol.fiber, 6);
            // reject steps whose correction moves a node far from its prediction
            let jump = ((zc[0] - pred[0]).norm() + (zc[1] - pred[1]).norm()) / (1.0 + (v[0].norm() + v[1].norm()) * dt.norm());
            if !(res <= tol.fiber) || jump > 0.1 * (1.0 + z[0].norm() + z[1].norm()) * h_eff.sqrt() {
                ok = false;
                break;
            }
            next.push(zc);
        }
        if ok {
            nodes = next;
            s += h_eff;
            h = (h * 1.5).min(0.25);
        } else {
            h *= 0.5;
            if h < 1e-12 {
                return Err(Error::Numeric(format!("continuation step underflow at s = {s:.4}")));
            }
        }
    }
    let max_residual = nodes.iter().map(|z| eq.residual(z, t_new)).fold(0.0, f64::max);
    let kind = match &gamma.kind {
        LoopKind::Vanishing { critical_value } | LoopKind::LiftedCircle { critical_value } => LoopKind::LiftedCircle { critical_value: *critical_value },
        LoopKind::Chart => LoopKind::Chart,
    };
    Ok(FiberLoop { t: t_new, nodes, kind, max_residual })
}

/// Vanishing loop born at `c` and carried out to the base point `t`.
pub fn lifted_circle(f: &RationalFirstIntegral, c: &CriticalPoint, t: Complex64, start_radius: f64, tol: &Tolerances) -> Result<FiberLoop> {
    let dir = t - c.value;
    let t_start = if dir.norm() <= start_radius { t } else { c.value + dir / dir.norm() * start_radius };
    let born = vanishing_loop(f, c, t_start, tol)?;
    if t_start == t {
        return Ok(born);
    }
    transport_loop(f, &born, t, tol)
}

/// Circle `|x − center| = radius` in the plane `y = y0`.
pub fn circle_loop(center: Complex64, radius: f64, y0: Complex64, nodes: usize) -> FiberLoop {
    let nodes = (0..nodes)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / nodes as f64;
            [center + Complex64::from_polar(radius, th), y0]
        })
        .collect();
    FiberLoop { t: Complex64::new(0.0, 0.0), nodes, kind: LoopKind::Chart, max_residual: 0.0 }
}
