//! Morphisms `F = [R : S : T]` of the projective plane, pull-back foliations,
//! the tangent vectors `ω_W`, `ω_pl`, `ω_e`, and the rank bookkeeping for
//! `ker F_*`.

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::brieskorn::{decompose_many, hf_basis, p1q1_form, relative_module, DecomposeOptions};
use crate::error::{Error, Result};
use crate::foliation::{alpha0, milnor_f, projective_zero_chart, random_form, RationalFirstIntegral};
use crate::periods::{CriticalPoint, Tolerances};
use crate::poly::{rat, DifferentialForm, Poly};

/// `[x : y : z] ↦ [R : S : T]` with homogeneous components of a common degree `s ≥ 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    components: [Poly; 3],
    s: u32,
}

impl Morphism {
    /// Checks homogeneity, the common degree, `det J_F ≢ 0` and that the
    /// components have no common zero (hence no common factor).
    pub fn new(r: Poly, s_: Poly, t: Poly) -> Result<Self> {
        let components = [r, s_, t];
        if components.iter().any(|c| c.nvars() != 3) {
            return Err(Error::Dimension("morphism components must be polynomials in x, y, z".into()));
        }
        if components.iter().any(|c| c.is_zero() || !c.is_homogeneous()) {
            return Err(Error::Invalid("morphism components must be nonzero and homogeneous".into()));
        }
        let s = components[0].degree().unwrap();
        if components.iter().any(|c| c.degree() != Some(s)) {
            return Err(Error::Invalid("morphism components must share one degree".into()));
        }
        if s < 2 {
            return Err(Error::Invalid(format!("morphism degree must be at least 2, got {s}")));
        }
        Self::checked(components, s)
    }

    fn checked(components: [Poly; 3], s: u32) -> Result<Self> {
        let f = Morphism { components, s };
        if f.jacobian_det().is_zero() {
            return Err(Error::Genericity("det J_F vanishes identically".into()));
        }
        if projective_zero_chart(&f.components).is_some() {
            return Err(Error::Genericity("R, S, T have a common zero".into()));
        }
        Ok(f)
    }

    /// Degree-`s` morphism with integer coefficients in `[-bound, bound]`.
    /// Rejects and redraws up to `attempts` times.
    pub fn random<R: Rng>(s: u32, bound: i64, attempts: u32, rng: &mut R) -> Result<Self> {
        let mut last = None;
        for _ in 0..attempts {
            let c = [0; 3].map(|_| random_form(3, s, bound, rng));
            let [a, b, c] = c;
            match Morphism::new(a, b, c) {
                Ok(f) => return Ok(f),
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap_or_else(|| Error::Invalid("no attempts".into())))
    }

    /// Any degree, including the identity; only for tests of the transport formulas.
    #[cfg(test)]
    pub(crate) fn any_degree(r: Poly, s_: Poly, t: Poly) -> Result<Self> {
        let s = r.degree().unwrap_or(0);
        Self::checked([r, s_, t], s)
    }

    pub fn components(&self) -> &[Poly; 3] {
        &self.components
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// `F*(g) = g(R, S, T)`.
    pub fn pull(&self, g: &Poly) -> Poly {
        g.substitute(&self.components)
    }

    /// `F*(ω)` for a form in `(X, Y, Z)`.
    pub fn pull_form(&self, w: &DifferentialForm) -> Result<DifferentialForm> {
        w.pullback(&self.components)
    }

    /// `J_F[i][j] = ∂F_i/∂x_j`.
    pub fn jacobian(&self) -> [[Poly; 3]; 3] {
        self.components.clone().map(|c| [0, 1, 2].map(|j| c.derivative(j)))
    }

    pub fn jacobian_det(&self) -> Poly {
        let j = self.jacobian();
        let minor = |a: usize, b: usize, c: usize, d: usize| &(&j[1][a] * &j[2][b]) - &(&j[1][c] * &j[2][d]);
        &(&(&j[0][0] * &minor(1, 2, 2, 1)) - &(&j[0][1] * &minor(0, 2, 2, 0))) + &(&j[0][2] * &minor(0, 1, 1, 0))
    }
}

/// Jacobian matrix, its determinant (the critical divisor `D`) and the ideal
/// `J` of its 2×2 minors.
#[derive(Clone, Debug)]
pub struct JacobianData {
    pub jacobian: [[Poly; 3]; 3],
    pub discriminant: Poly,
    pub minors: Vec<Poly>,
}

pub fn jacobian_data(morphism: &Morphism) -> JacobianData {
    let j = morphism.jacobian();
    let mut minors = Vec::with_capacity(9);
    for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
        for (c1, c2) in [(0, 1), (0, 2), (1, 2)] {
            minors.push(&(&j[r1][c1] * &j[r2][c2]) - &(&j[r1][c2] * &j[r2][c1]));
        }
    }
    JacobianData { discriminant: morphism.jacobian_det(), jacobian: j, minors }
}

/// First-order deformation `F_ε = F + εF₁`, `α_ε = α + εα₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationDirection {
    pub f1: [Poly; 3],
    pub alpha1: Option<DifferentialForm>,
}

impl DeformationDirection {
    /// Checks that `F₁` is homogeneous of degree `s` and `α₁` a homogeneous
    /// 1-form in `(X, Y, Z)` with coefficients of degree `a + 1` (zero parts allowed).
    pub fn new(f1: [Poly; 3], alpha1: Option<DifferentialForm>, s: u32, a: u32) -> Result<Self> {
        for c in &f1 {
            if c.nvars() != 3 || !(c.is_zero() || (c.is_homogeneous() && c.degree() == Some(s))) {
                return Err(Error::Degree(format!("F₁ components must be homogeneous of degree {s} in x, y, z")));
            }
        }
        if let Some(w) = &alpha1 {
            check_homogeneous_form(w, a + 1, "α₁")?;
        }
        Ok(DeformationDirection { f1, alpha1 })
    }

    pub fn zero() -> Self {
        DeformationDirection { f1: [Poly::zero(3), Poly::zero(3), Poly::zero(3)], alpha1: None }
    }

    /// Dense random `F₁` and, when `with_alpha1`, a random `α₁` satisfying the Euler condition.
    pub fn random<R: Rng>(s: u32, a: u32, bound: i64, with_alpha1: bool, rng: &mut R) -> Self {
        let f1 = [0; 3].map(|_| random_form(3, s, bound, rng));
        let alpha1 = with_alpha1.then(|| random_euler_form(a + 1, bound, rng));
        DeformationDirection { f1, alpha1 }
    }
}

/// `U(Y dZ − Z dY) + V(Z dX − X dZ) + W(X dY − Y dX)` with random `U, V, W` of
/// degree `d − 1`: a polynomial 1-form with coefficients of degree `d` and
/// `XA + YB + ZC ≡ 0`.
pub fn random_euler_form<R: Rng>(d: u32, bound: i64, rng: &mut R) -> DifferentialForm {
    let [u, v, w] = [0; 3].map(|_| random_form(3, d - 1, bound, rng));
    let x = |i| Poly::var(3, i);
    let a = &(&v * &x(2)) - &(&w * &x(1));
    let b = &(&w * &x(0)) - &(&u * &x(2));
    let c = &(&u * &x(1)) - &(&v * &x(0));
    DifferentialForm::one_form(vec![a, b, c])
}

fn check_homogeneous_form(w: &DifferentialForm, d: u32, what: &str) -> Result<()> {
    if w.degree() != 1 || w.nvars() != 3 || !w.is_polynomial() {
        return Err(Error::Degree(format!("{what} must be a polynomial 1-form in X, Y, Z")));
    }
    if w.coeffs().iter().any(|c| !(c.is_zero() || (c.is_homogeneous() && c.degree() == Some(d)))) {
        return Err(Error::Degree(format!("{what} must have homogeneous coefficients of degree {d}")));
    }
    Ok(())
}

/// `F*(f) = F*(P)^q / F*(Q)^p`.
pub fn pulled_first_integral(f: &RationalFirstIntegral, morphism: &Morphism) -> Result<RationalFirstIntegral> {
    RationalFirstIntegral::new(morphism.pull(f.p_homogeneous()), morphism.pull(f.q_homogeneous()), f.p(), f.q())
}

/// `ω_W = Σ F*(A_i) dF₁ᵢ + Σ (Σ_k F₁ₖ F*(∂_k A_i)) dF_i + F*(α₁)` for `α = Σ A_i dX_i`.
pub fn omega_w(morphism: &Morphism, dir: &DeformationDirection, alpha: &DifferentialForm) -> Result<DifferentialForm> {
    let d = alpha.zero_divisor_degree().unwrap_or(0);
    check_homogeneous_form(alpha, d, "α")?;
    for c in &dir.f1 {
        if !(c.is_zero() || c.degree() == Some(morphism.s())) {
            return Err(Error::Degree(format!("F₁ must have degree {}", morphism.s())));
        }
    }
    let comps = morphism.components();
    let mut acc = vec![Poly::zero(3); 3];
    for (i, a) in alpha.coeffs().iter().enumerate() {
        let fa = morphism.pull(a);
        let mut chain = Poly::zero(3);
        for (k, f1k) in dir.f1.iter().enumerate() {
            if !f1k.is_zero() {
                chain += &(f1k * &morphism.pull(&a.derivative(k)));
            }
        }
        let (d1, d0) = (dir.f1[i].gradient(), comps[i].gradient());
        for j in 0..3 {
            acc[j] += &(&fa * &d1[j]);
            acc[j] += &(&chain * &d0[j]);
        }
    }
    let mut out = DifferentialForm::one_form(acc);
    if let Some(a1) = &dir.alpha1 {
        if !a1.is_zero() {
            check_homogeneous_form(a1, d, "α₁")?;
            out = out.add(&morphism.pull_form(a1)?);
        }
    }
    Ok(out)
}

/// `⟨F₁, F*(grad g)⟩`.
fn directional(morphism: &Morphism, f1: &[Poly; 3], g: &Poly) -> Poly {
    let mut acc = Poly::zero(3);
    for (k, c) in f1.iter().enumerate() {
        if !c.is_zero() {
            acc += &(c * &morphism.pull(&g.derivative(k)));
        }
    }
    acc
}

/// `P₁ = ⟨F₁, F*(grad P)⟩` as written next to `ω_pl`.
pub fn p1_remark(f: &RationalFirstIntegral, morphism: &Morphism, f1: &[Poly; 3]) -> Poly {
    directional(morphism, f1, f.p_homogeneous())
}

/// `Q₁ = ⟨F₁, F*(grad Q)⟩` as written next to `ω_pl`.
pub fn q1_remark(f: &RationalFirstIntegral, morphism: &Morphism, f1: &[Poly; 3]) -> Poly {
    directional(morphism, f1, f.q_homogeneous())
}

/// `P₁ = q⟨F₁, F*(grad P)⟩ = q · p1_remark`, the convention of `ω_e`.
pub fn p1_lemma(f: &RationalFirstIntegral, morphism: &Morphism, f1: &[Poly; 3]) -> Poly {
    p1_remark(f, morphism, f1).scale(&rat(f.q() as i64))
}

/// `Q₁ = p⟨F₁, F*(grad Q)⟩ = p · q1_remark`, the convention of `ω_e`.
pub fn q1_lemma(f: &RationalFirstIntegral, morphism: &Morphism, f1: &[Poly; 3]) -> Poly {
    q1_remark(f, morphism, f1).scale(&rat(f.p() as i64))
}

/// `ω_pl = qF*(Q)dP₁ − pP₁dF*(Q) − qQ₁dF*(P) + pF*(P)dQ₁` with `P₁, Q₁` from
/// [`p1_remark`], [`q1_remark`].
///
/// The first-order term of `F_ε*(α₀)` is this form with `Q₁` replaced by `−Q₁`;
/// see [`omega_w`] tests.
pub fn omega_pl(f: &RationalFirstIntegral, morphism: &Morphism, f1: &[Poly; 3]) -> DifferentialForm {
    p1q1_form(f, morphism, &p1_remark(f, morphism, f1), &q1_remark(f, morphism, f1))
}

/// `ω_e = qF*(Q)dP₁ − pP₁dF*(Q) − qQ₁dF*(P) + pF*(P)dQ₁` with `P₁, Q₁` from
/// [`p1_lemma`], [`q1_lemma`].
pub fn omega_e(f: &RationalFirstIntegral, morphism: &Morphism, f1: &[Poly; 3]) -> DifferentialForm {
    p1q1_form(f, morphism, &p1_lemma(f, morphism, f1), &q1_lemma(f, morphism, f1))
}

/// `c₀ + c₁ε` modulo `ε²`.
#[derive(Clone, Debug)]
struct Eps {
    c0: Poly,
    c1: Poly,
}

impl Eps {
    fn mul(&self, o: &Eps) -> Eps {
        Eps { c0: &self.c0 * &o.c0, c1: &(&self.c0 * &o.c1) + &(&self.c1 * &o.c0) }
    }

    fn pow(&self, e: u32) -> Eps {
        let mut acc = Eps { c0: Poly::one(self.c0.nvars()), c1: Poly::zero(self.c0.nvars()) };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn d(&self) -> [Eps; 3] {
        [0, 1, 2].map(|i| Eps { c0: self.c0.derivative(i), c1: self.c1.derivative(i) })
    }

    fn sub(&self, o: &Eps) -> Eps {
        Eps { c0: &self.c0 - &o.c0, c1: &self.c1 - &o.c1 }
    }
}

/// Both sides of the first-order identity behind the tangent vectors.
#[derive(Clone, Debug)]
pub struct Identity332 {
    /// `ε¹` coefficient of the numerator of `d((P₀+εP₁)^q / (Q₀−εQ₁)^p)` after
    /// removing the common factor `(P₀+εP₁)^{q−1} (Q₀−εQ₁)^{p−1}`.
    pub lhs: DifferentialForm,
    /// `pq (qQ dP̃ − pP̃ dQ − qQ̃ dP + pP dQ̃)` with `P̃ = ⟨F₁, F*(grad P)⟩`,
    /// `Q̃ = ⟨F₁, F*(grad Q)⟩` and `P, Q` pulled back.
    pub rhs: DifferentialForm,
}

/// Expands both sides with `P₀ = qF*(P)`, `Q₀ = pF*(Q)`,
/// `P₁ = ⟨F₁, F*(grad P₀)⟩`, `Q₁ = ⟨F₁, F*(grad Q₀)⟩`. The `ε`-series are
/// truncated after `ε¹` and never inverted: the cleared numerator
/// `D dN − N dD` is divided exactly by the common factor.
pub fn identity_3_32(f: &RationalFirstIntegral, morphism: &Morphism, f1: &[Poly; 3]) -> Result<Identity332> {
    let (p, q) = (f.p(), f.q());
    let (pr, qr) = (rat(p as i64), rat(q as i64));
    let big_p = morphism.pull(f.p_homogeneous());
    let big_q = morphism.pull(f.q_homogeneous());
    let (pt, qt) = (p1_remark(f, morphism, f1), q1_remark(f, morphism, f1));
    let base_p = Eps { c0: big_p.scale(&qr), c1: pt.scale(&qr) };
    let base_q = Eps { c0: big_q.scale(&pr), c1: -&qt.scale(&pr) };
    let num = base_p.pow(q);
    let den = base_q.pow(p);
    let (dn, dd) = (num.d(), den.d());
    let common = base_p.pow(q - 1).mul(&base_q.pow(p - 1));
    let mut lhs = Vec::with_capacity(3);
    for i in 0..3 {
        let x = den.mul(&dn[i]).sub(&num.mul(&dd[i]));
        let b0 = x.c0.div_exact(&common.c0).ok_or_else(|| Error::Verification("ε⁰ numerator not divisible by the common factor".into()))?;
        let b1 = (&x.c1 - &(&common.c1 * &b0))
            .div_exact(&common.c0)
            .ok_or_else(|| Error::Verification("ε¹ numerator not divisible by the common factor".into()))?;
        lhs.push(b1);
    }
    let (dp, dq, dpt, dqt) = (big_p.gradient(), big_q.gradient(), pt.gradient(), qt.gradient());
    let pq = rat((p * q) as i64);
    let rhs = (0..3)
        .map(|i| {
            let mut c = (&big_q * &dpt[i]).scale(&qr);
            c -= &(&pt * &dq[i]).scale(&pr);
            c -= &(&qt * &dp[i]).scale(&qr);
            c += &(&big_p * &dqt[i]).scale(&pr);
            c.scale(&pq)
        })
        .collect();
    Ok(Identity332 { lhs: DifferentialForm::one_form(lhs), rhs: DifferentialForm::one_form(rhs) })
}

/// Exact equality of the two sides of [`identity_3_32`].
pub fn verify_identity_3_32(f: &RationalFirstIntegral, morphism: &Morphism, f1: &[Poly; 3]) -> Result<bool> {
    let id = identity_3_32(f, morphism, f1)?;
    Ok(id.lhs == id.rhs)
}

/// `λ` with `α₀ = Σ λ_i dX_i`, and `ρ = (F*λ)·J_F`, after checking
/// `F*(α₀) = Σ ρ_j dx_j` exactly.
pub fn jacobian_transport(f: &RationalFirstIntegral, morphism: &Morphism) -> Result<(Vec<Poly>, Vec<Poly>)> {
    let a0 = alpha0(f);
    let lambda = a0.coeffs().to_vec();
    let j = morphism.jacobian();
    let pulled: Vec<Poly> = lambda.iter().map(|l| morphism.pull(l)).collect();
    let rho: Vec<Poly> = (0..3)
        .map(|c| {
            let mut acc = Poly::zero(3);
            for r in 0..3 {
                acc += &(&pulled[r] * &j[r][c]);
            }
            acc
        })
        .collect();
    if morphism.pull_form(&a0)? != DifferentialForm::one_form(rho.clone()) {
        return Err(Error::Verification("F*(α₀) differs from ρ dx".into()));
    }
    Ok((lambda, rho))
}

/// `V(J) ∩ V(I₁) = ∅` with `J` the 2×2 minors of `J_F` and `I₁ = ⟨F*(λ_i)⟩`,
/// decided by Gröbner bases on the three affine charts.
pub fn morphism_is_generic(f: &RationalFirstIntegral, morphism: &Morphism) -> bool {
    let mut gens = jacobian_data(morphism).minors;
    gens.extend(alpha0(f).coeffs().iter().map(|l| morphism.pull(l)));
    gens.retain(|g| !g.is_zero());
    projective_zero_chart(&gens).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankAccount {
    pub mu_f: u64,
    pub mu: u64,
    pub rho_d: u64,
    pub ker_rank: u64,
    /// `(s² − 1) μ_f + ρ_D`.
    pub h_rank: u64,
}

/// `μ = s²μ_f + ρ_D`, `ker_rank = μ − μ_f`, `H-rank = (s² − 1)μ_f + ρ_D`, with
/// `μ` the global Milnor number for degrees `(ms, ns)`. A given `ρ_D` must agree.
pub fn rank_account(m: u32, n: u32, s: u32, rho_d: Option<u64>) -> Result<RankAccount> {
    if s < 2 {
        return Err(Error::Invalid(format!("rank accounting needs s ≥ 2, got {s}")));
    }
    let mu_f = milnor_f(m, n)?;
    let mu = milnor_f(m * s, n * s)?;
    let s2 = (s as u64).pow(2);
    let derived = mu as i64 - (s2 * mu_f) as i64;
    if derived < 0 {
        return Err(Error::Invalid(format!("derived ρ_D = {derived} is negative")));
    }
    let rho_d = match rho_d {
        Some(r) if r as i64 != derived => {
            return Err(Error::Invalid(format!("ρ_D = {r} contradicts μ = s²μ_f + ρ_D (which gives {derived})")))
        }
        _ => derived as u64,
    };
    let ker_rank = mu - mu_f;
    let h_rank = (s2 - 1) * mu_f + rho_d;
    if h_rank != ker_rank {
        return Err(Error::Verification(format!("H-rank {h_rank} ≠ ker rank {ker_rank}")));
    }
    Ok(RankAccount { mu_f, mu, rho_d, ker_rank, h_rank })
}

/// `a(Z dX − X dZ) + b(Z dY − Y dZ)` with `a, b` homogenized to the degree of
/// the form: a homogeneous 1-form restricting to `a dx + b dy` on `Z = 1`.
pub fn homogenize_form(alpha: &DifferentialForm) -> Result<DifferentialForm> {
    if alpha.degree() != 1 || alpha.nvars() != 2 || !alpha.is_polynomial() {
        return Err(Error::Invalid("homogenize_form needs a polynomial 1-form in x, y".into()));
    }
    let d = alpha.zero_divisor_degree().unwrap_or(0);
    let (a, b) = (alpha.coeff(0).homogenize(d), alpha.coeff(1).homogenize(d));
    let x = |i| Poly::var(3, i);
    let c = -&(&(&a * &x(0)) + &(&b * &x(1)));
    Ok(DifferentialForm::one_form(vec![&a * &x(2), &b * &x(2), c]))
}

/// Restriction of a homogeneous 1-form in `(x, y, z)` to `z = 1`.
pub fn dehomogenize_form(w: &DifferentialForm) -> DifferentialForm {
    DifferentialForm::one_form(vec![w.coeff(0).dehomogenize(2), w.coeff(1).dehomogenize(2)])
}

/// `F*(α)` of an affine polynomial form, through [`homogenize_form`], the
/// homogeneous pull-back and restriction to `z = 1`.
pub fn affine_pullback(alpha: &DifferentialForm, morphism: &Morphism) -> Result<DifferentialForm> {
    Ok(dehomogenize_form(&morphism.pull_form(&homogenize_form(alpha)?)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct InjectionReport {
    /// Dimension of the relative module of `F*(f)`.
    pub pulled_dimension: usize,
    pub expected_pulled_dimension: u64,
    pub mu_f: u64,
    /// Every pulled-back basis form decomposed with constant coordinates.
    pub constant: bool,
    /// Rank of the matrix of constant coordinates.
    pub rank: usize,
    /// Failures of individual decompositions.
    pub errors: Vec<String>,
    pub pass: bool,
}

/// Decomposes `F*(α_j)` for every basis form of `H_f` in the basis of
/// `H_{F*(f)}` and checks that the coordinates are constants of rank `μ_f`.
pub fn hf_injection_check(f: &RationalFirstIntegral, morphism: &Morphism, opts: &DecomposeOptions) -> Result<InjectionReport> {
    let basis = hf_basis(&relative_module(f)?)?;
    let pulled = pulled_first_integral(f, morphism)?;
    let pmodule = relative_module(&pulled)?;
    let pbasis = hf_basis(&pmodule)?;
    let forms = basis.forms.iter().map(|a| affine_pullback(a, morphism)).collect::<Result<Vec<_>>>()?;
    let mu_f = milnor_f(f.m(), f.n())?;
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    let mut constant = true;
    for (j, r) in decompose_many(&forms, &pulled, &pbasis, opts).into_iter().enumerate() {
        match r {
            Ok(d) => {
                constant &= d.coordinates_constant();
                rows.push(d.constant_terms());
            }
            Err(e) => errors.push(format!("F*(α_{}): {e}", j + 1)),
        }
    }
    let rank = if rows.is_empty() { 0 } else { crate::linalg::rank(&rows) };
    let pass = errors.is_empty() && constant && rank as u64 == mu_f && basis.len() as u64 == mu_f;
    Ok(InjectionReport {
        pulled_dimension: pmodule.dimension,
        expected_pulled_dimension: milnor_f(pulled.m(), pulled.n())?,
        mu_f,
        constant: constant && errors.is_empty(),
        rank,
        errors,
        pass,
    })
}

/// Tangency centers of the pull-back foliation: critical points of `F*(f)` in the
/// chart `z = 1` lying on `det J_F = 0`, off `F*(PQ) = 0`.
pub fn tangency_centers(f: &RationalFirstIntegral, morphism: &Morphism, tol: &Tolerances) -> Result<Vec<CriticalPoint>> {
    use crate::periods::critical::{common_zeros, critical_point, polish, relative_residual};
    let pulled = pulled_first_integral(f, morphism)?;
    let (h1, h2) = pulled.critical_numerators();
    let det = morphism.jacobian_det().dehomogenize(2);
    let mut out: Vec<CriticalPoint> = Vec::new();
    for (pt, _) in common_zeros(&det, &h1, 1e-9)? {
        if relative_residual(&h2, &pt) > 1e-6 {
            continue;
        }
        let pt = polish([&h1, &h2], pt);
        let residual = relative_residual(&h1, &pt).max(relative_residual(&h2, &pt));
        if !(residual < tol.newton) || relative_residual(&det, &pt) > 1e-6 {
            continue;
        }
        if relative_residual(pulled.p_affine(), &pt) < 1e-6 || relative_residual(pulled.q_affine(), &pt) < 1e-6 {
            continue;
        }
        let scale = 1.0 + pt[0].norm() + pt[1].norm();
        if out.iter().any(|c| (c.point[0] - pt[0]).norm() + (c.point[1] - pt[1]).norm() < 1e-7 * scale) {
            continue;
        }
        out.push(critical_point(&pulled, pt, residual));
    }
    Ok(out)
}

/// `t` values on a small circle around a critical value, for Melnikov samples.
pub fn sample_ts(center: Complex64, radius: f64, k: usize) -> Vec<Complex64> {
    (0..k).map(|i| center + Complex64::from_polar(radius, 0.3 + 2.0 * std::f64::consts::PI * i as f64 / k as f64)).collect()
}

/// A random Euler form with the coefficient degree of `like`, scaled to the same
/// largest coefficient magnitude, as a non-tangent reference direction.
pub fn comparable_witness<R: Rng>(like: &DifferentialForm, rng: &mut R) -> DifferentialForm {
    let d = like.zero_divisor_degree().unwrap_or(1).max(1);
    let w = random_euler_form(d, 3, rng);
    let size = |f: &DifferentialForm| f.coeffs().iter().flat_map(|c| c.terms().map(|(_, a)| a.abs())).max().unwrap_or_else(|| rat(1));
    let (a, b) = (size(like), size(&w));
    if b.is_zero() {
        return w;
    }
    w.scale(&(a / b).round().max(rat(1)))
}

/// `M₁(t)` of the pull-back foliation for the tangent direction `ω_W(α₀)`,
/// with `δ_t` the vanishing cycle at a tangency center.
#[derive(Clone, Debug, Serialize)]
pub struct TangentMelnikov {
    pub center: CriticalPoint,
    pub ts: Vec<Complex64>,
    pub values: Vec<Complex64>,
}

impl TangentMelnikov {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Samples `t` on a circle of radius `radius · max(1, |c|)` around the value `c`
/// of the first tangency center and evaluates `M₁` for `dehomogenized ω₁`.
pub fn melnikov_at_tangency(
    f: &RationalFirstIntegral,
    morphism: &Morphism,
    omega1: &DifferentialForm,
    samples: usize,
    radius: f64,
    tol: &Tolerances,
) -> Result<TangentMelnikov> {
    let pulled = pulled_first_integral(f, morphism)?;
    let centers = tangency_centers(f, morphism, tol)?;
    let center = centers
        .into_iter()
        .find(|c| c.hessian.norm() > 1e-8)
        .ok_or_else(|| Error::Numeric("no Morse tangency center found".into()))?;
    let ts = sample_ts(center.value, radius * center.value.norm().max(1.0), samples);
    let affine = dehomogenize_form(omega1);
    let values = crate::periods::melnikov1(&pulled, &center, &affine, &ts, tol)?;
    Ok(TangentMelnikov { center, ts, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::euler_check;
    use crate::poly::Vars;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn xyz(s: &str) -> Poly {
        Vars::new(&["x", "y", "z"]).parse(s).unwrap()
    }

    fn setup(seed: u64) -> (RationalFirstIntegral, Morphism, ChaCha8Rng) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = RationalFirstIntegral::random(3, 2, 3, &mut rng).unwrap();
        let morphism = Morphism::random(2, 3, 20, &mut rng).unwrap();
        (f, morphism, rng)
    }

    #[test]
    fn morphism_validation() {
        assert!(Morphism::new(xyz("x^2"), xyz("y^2"), xyz("z^2")).is_ok());
        // common zero [0:0:1]
        assert!(matches!(Morphism::new(xyz("x^2"), xyz("x*y"), xyz("y^2")), Err(Error::Genericity(_))));
        assert!(Morphism::new(xyz("x"), xyz("y"), xyz("z")).is_err());
        assert!(Morphism::new(xyz("x^2"), xyz("y^3"), xyz("z^2")).is_err());
    }

    #[test]
    fn omega_w_special_cases() {
        let (f, morphism, mut rng) = setup(3);
        let a0 = alpha0(&f);
        let a = f.m() + f.n() - 2;
        assert!(omega_w(&morphism, &DeformationDirection::zero(), &a0).unwrap().is_zero());
        let a1 = random_euler_form(a + 1, 3, &mut rng);
        let dir = DeformationDirection::new([Poly::zero(3), Poly::zero(3), Poly::zero(3)], Some(a1.clone()), 2, a).unwrap();
        assert_eq!(omega_w(&morphism, &dir, &a0).unwrap(), morphism.pull_form(&a1).unwrap());
    }

    #[test]
    fn omega_w_at_alpha0_is_first_order_pullback() {
        let (f, morphism, mut rng) = setup(4);
        let a = f.m() + f.n() - 2;
        let dir = DeformationDirection::random(2, a, 3, true, &mut rng);
        let w = omega_w(&morphism, &dir, &alpha0(&f)).unwrap();
        let pl = omega_pl(&f, &morphism, &dir.f1);
        let pulled_a1 = morphism.pull_form(dir.alpha1.as_ref().unwrap()).unwrap();
        // with Q₁ as printed the Q₁ terms enter with the wrong sign
        assert!(!w.equals(&pl.add(&pulled_a1)));
        let flipped = p1q1_form(&f, &morphism, &p1_remark(&f, &morphism, &dir.f1), &-&q1_remark(&f, &morphism, &dir.f1));
        assert!(w.equals(&flipped.add(&pulled_a1)));
        assert!(euler_check(&w).unwrap());
    }

    #[test]
    fn omega_w_is_linear() {
        let (f, morphism, mut rng) = setup(5);
        let a = f.m() + f.n() - 2;
        let u = DeformationDirection::random(2, a, 3, true, &mut rng);
        let v = DeformationDirection::random(2, a, 3, true, &mut rng);
        let (x, y) = (rat(3), rat(-2));
        let combo = DeformationDirection {
            f1: [0, 1, 2].map(|i| &u.f1[i].scale(&x) + &v.f1[i].scale(&y)),
            alpha1: Some(u.alpha1.as_ref().unwrap().scale(&x).add(&v.alpha1.as_ref().unwrap().scale(&y))),
        };
        let a0 = alpha0(&f);
        let lhs = omega_w(&morphism, &combo, &a0).unwrap();
        let rhs = omega_w(&morphism, &u, &a0).unwrap().scale(&x).add(&omega_w(&morphism, &v, &a0).unwrap().scale(&y));
        assert!(lhs.equals(&rhs));
    }

    #[test]
    fn conventions_differ_by_p_and_q() {
        let (f, morphism, mut rng) = setup(6);
        let dir = DeformationDirection::random(2, 3, 3, false, &mut rng);
        assert_eq!(p1_lemma(&f, &morphism, &dir.f1), p1_remark(&f, &morphism, &dir.f1).scale(&rat(f.q() as i64)));
        assert_eq!(q1_lemma(&f, &morphism, &dir.f1), q1_remark(&f, &morphism, &dir.f1).scale(&rat(f.p() as i64)));
    }

    #[test]
    fn omega_e_cases() {
        let (f, morphism, mut rng) = setup(7);
        let zero = [Poly::zero(3), Poly::zero(3), Poly::zero(3)];
        assert!(omega_e(&f, &morphism, &zero).is_zero());
        // radial direction: P₁ = qm F*(P), Q₁ = pn F*(Q), and qm = pn cancels everything
        let radial = morphism.components().clone();
        assert!(omega_e(&f, &morphism, &radial).is_zero());
        let dir = DeformationDirection::random(2, 3, 3, false, &mut rng);
        let w = omega_e(&f, &morphism, &dir.f1);
        assert!(euler_check(&w).unwrap());
        let (p1, q1) = crate::brieskorn::extract_p1q1(&w, &f, &morphism).unwrap();
        assert!(p1q1_form(&f, &morphism, &p1, &q1).equals(&w));
    }

    #[test]
    fn identity_3_32_holds() {
        for seed in 0..3 {
            let (f, morphism, mut rng) = setup(10 + seed);
            let dir = DeformationDirection::random(2, 3, 4, false, &mut rng);
            assert!(verify_identity_3_32(&f, &morphism, &dir.f1).unwrap());
            let zero = [Poly::zero(3), Poly::zero(3), Poly::zero(3)];
            let id = identity_3_32(&f, &morphism, &zero).unwrap();
            assert!(id.lhs.is_zero() && id.rhs.is_zero());
        }
        let f = RationalFirstIntegral::fermat(3, 2).unwrap();
        let squares = Morphism::new(xyz("x^2"), xyz("y^2"), xyz("z^2")).unwrap();
        let f1 = [xyz("x*y"), xyz("z^2 - y*z"), xyz("x^2 + 3*y*z")];
        assert!(verify_identity_3_32(&f, &squares, &f1).unwrap());
    }

    #[test]
    fn transport_through_the_jacobian() {
        let (f, morphism, _) = setup(8);
        let (lambda, rho) = jacobian_transport(&f, &morphism).unwrap();
        assert_eq!(lambda.len(), 3);
        assert_eq!(rho.len(), 3);

        let id = Morphism::any_degree(xyz("x"), xyz("y"), xyz("z")).unwrap();
        let (lambda, rho) = jacobian_transport(&f, &id).unwrap();
        assert_eq!(lambda, rho);

        let squares = Morphism::new(xyz("x^2"), xyz("y^2"), xyz("z^2")).unwrap();
        let (lambda, rho) = jacobian_transport(&f, &squares).unwrap();
        for (i, v) in ["x", "y", "z"].iter().enumerate() {
            let expect = &xyz(&format!("2*{v}")) * &squares.pull(&lambda[i]);
            assert_eq!(rho[i], expect);
        }
    }

    #[test]
    fn rank_formulas() {
        let r = rank_account(3, 2, 2, None).unwrap();
        assert_eq!((r.mu_f, r.mu, r.rho_d, r.ker_rank, r.h_rank), (10, 57, 17, 47, 47));
        let r = rank_account(4, 3, 2, None).unwrap();
        assert_eq!((r.mu_f, r.mu, r.rho_d, r.ker_rank), (24, 121, 25, 97));
        assert!(rank_account(3, 2, 1, None).is_err());
        assert!(rank_account(3, 2, 2, Some(16)).is_err());
        assert!(rank_account(3, 2, 2, Some(17)).is_ok());
    }

    #[test]
    fn homogenized_forms_restrict_back() {
        let v = Vars::new(&["x", "y"]);
        let w = DifferentialForm::one_form(vec![v.parse("x^2*y - 1").unwrap(), v.parse("y^3 + x").unwrap()]);
        let h = homogenize_form(&w).unwrap();
        assert!(euler_check(&h).unwrap());
        assert_eq!(dehomogenize_form(&h), w);
    }

    #[test]
    fn tangency_centers_lie_on_the_fold() {
        let (f, morphism, _) = setup(9);
        let centers = tangency_centers(&f, &morphism, &Tolerances::default()).unwrap();
        assert!(!centers.is_empty());
        let det = morphism.jacobian_det().dehomogenize(2);
        for c in &centers {
            let scale: f64 = det.terms().map(|(_, a)| crate::poly::rat_to_f64(a).abs()).sum::<f64>() * (1.0 + c.point[0].norm() + c.point[1].norm()).powi(3);
            assert!(det.eval_complex(&c.point).norm() < 1e-6 * scale);
            assert!(c.hessian.norm() > 0.0);
        }
    }

    #[test]
    fn melnikov_vanishes_on_tangent_directions() {
        let (f, morphism, mut rng) = setup(11);
        let a = f.m() + f.n() - 2;
        let tol = Tolerances::default();
        let dir = DeformationDirection::random(2, a, 3, true, &mut rng);
        let w = omega_w(&morphism, &dir, &alpha0(&f)).unwrap();
        let tangent = melnikov_at_tangency(&f, &morphism, &w, 3, 1e-3, &tol).unwrap();
        let generic = random_euler_form((a + 2) * 2 - 1, 3, &mut rng);
        let witness = melnikov_at_tangency(&f, &morphism, &generic, 3, 1e-3, &tol).unwrap();
        eprintln!("tangent {:e} generic {:e}", tangent.max_abs(), witness.max_abs());
        assert!(tangent.max_abs() < 1e-6 * witness.max_abs().max(1e-12));
    }
}
