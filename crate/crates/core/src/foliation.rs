//! The rational first integral `f = P^q / Q^p`, its genericity report, the
//! canonical forms `α₀` and `ω₀`, and the degree and Milnor bookkeeping.

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{buchberger, Ideal};
use crate::periods::{critical_values, Tolerances};
use crate::poly::{rat, DifferentialForm, Monomial, MonomialOrder, Poly, Rat, Vars};

/// `f = P^q / Q^p` with `deg P = m`, `deg Q = n`.
///
/// Both the homogeneous polynomials in `(X, Y, Z)` and their affine
/// restrictions to `Z = 1` are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFirstIntegral {
    p_hom: Poly,
    q_hom: Poly,
    p_aff: Poly,
    q_aff: Poly,
    p: u32,
    q: u32,
    m: u32,
    n: u32,
}

/// Exponents `(p, q)` forced by the degrees: `p = m / g`, `q = n / g` with `g = gcd(m, n)`.
pub fn exponents_for(m: u32, n: u32) -> (u32, u32) {
    let g = m.gcd(&n);
    (m / g, n / g)
}

impl RationalFirstIntegral {
    /// From homogeneous `P, Q` in three variables.
    pub fn new(p_hom: Poly, q_hom: Poly, p: u32, q: u32) -> Result<Self> {
        if p_hom.nvars() != 3 || q_hom.nvars() != 3 {
            return Err(Error::Dimension("P and Q must be polynomials in X, Y, Z".into()));
        }
        if !p_hom.is_homogeneous() || !q_hom.is_homogeneous() {
            return Err(Error::Invalid("P and Q must be homogeneous".into()));
        }
        let m = p_hom.degree().ok_or_else(|| Error::Invalid("P is zero".into()))?;
        let n = q_hom.degree().ok_or_else(|| Error::Invalid("Q is zero".into()))?;
        if p == 0 || q == 0 || p.gcd(&q) != 1 {
            return Err(Error::Invalid(format!("exponents p={p}, q={q} must be positive and coprime")));
        }
        if m * q != n * p {
            return Err(Error::Invalid(format!("degree condition m*q = n*p fails: {m}*{q} != {n}*{p}")));
        }
        if !(m > n && n >= 2) {
            return Err(Error::Invalid(format!("need deg P > deg Q >= 2, got m={m}, n={n}")));
        }
        let p_aff = p_hom.dehomogenize(2);
        let q_aff = q_hom.dehomogenize(2);
        Ok(RationalFirstIntegral { p_hom, q_hom, p_aff, q_aff, p, q, m, n })
    }

    /// From affine `P(x, y)`, `Q(x, y)`, homogenized at their total degrees.
    pub fn from_affine(p_aff: Poly, q_aff: Poly, p: u32, q: u32) -> Result<Self> {
        if p_aff.nvars() != 2 || q_aff.nvars() != 2 {
            return Err(Error::Dimension("affine P and Q must be polynomials in x, y".into()));
        }
        let m = p_aff.degree().ok_or_else(|| Error::Invalid("P is zero".into()))?;
        let n = q_aff.degree().ok_or_else(|| Error::Invalid("Q is zero".into()))?;
        Self::new(p_aff.homogenize(m), q_aff.homogenize(n), p, q)
    }

    /// `P = X^m + Y^m + Z^m`, `Q = X^n + 2Y^n + 3Z^n`.
    pub fn fermat(m: u32, n: u32) -> Result<Self> {
        let v = Vars::new(&["X", "Y", "Z"]);
        let (p, q) = exponents_for(m, n);
        let big_p = v.parse(&format!("X^{m} + Y^{m} + Z^{m}"))?;
        let big_q = v.parse(&format!("X^{n} + 2*Y^{n} + 3*Z^{n}"))?;
        Self::new(big_p, big_q, p, q)
    }

    /// Dense homogeneous `P, Q` with integer coefficients drawn from `[-bound, bound]`.
    pub fn random<R: Rng>(m: u32, n: u32, bound: i64, rng: &mut R) -> Result<Self> {
        let (p, q) = exponents_for(m, n);
        Self::new(random_form(3, m, bound, rng), random_form(3, n, bound, rng), p, q)
    }

    pub fn p_homogeneous(&self) -> &Poly {
        &self.p_hom
    }

    pub fn q_homogeneous(&self) -> &Poly {
        &self.q_hom
    }

    /// Affine `P(x, y, 1)`.
    pub fn p_affine(&self) -> &Poly {
        &self.p_aff
    }

    /// Affine `Q(x, y, 1)`.
    pub fn q_affine(&self) -> &Poly {
        &self.q_aff
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Affine `f` as a rational 0-form `P^q / Q^p`.
    pub fn function(&self) -> DifferentialForm {
        DifferentialForm::rational(DifferentialForm::function(self.p_aff.pow(self.q)), &self.q_aff, self.p)
    }

    /// Numerators `qQP_x − pPQ_x` and `qQP_y − pPQ_y` of `df / f` times `PQ`.
    pub fn critical_numerators(&self) -> (Poly, Poly) {
        let (qr, pr) = (rat(self.q as i64), rat(self.p as i64));
        let h = |i: usize| {
            &(&self.q_aff * &self.p_aff.derivative(i)).scale(&qr) - &(&self.p_aff * &self.q_aff.derivative(i)).scale(&pr)
        };
        (h(0), h(1))
    }

    /// Affine value `P^q / Q^p` at a complex point.
    pub fn eval_complex(&self, pt: &[num_complex::Complex64]) -> num_complex::Complex64 {
        self.p_aff.eval_complex(pt).powu(self.q) / self.q_aff.eval_complex(pt).powu(self.p)
    }

    pub fn degree_ledger(&self, s: u32) -> Result<DegreeLedger> {
        DegreeLedger::new(self.m, self.n, s)
    }

    pub fn milnor(&self) -> u64 {
        milnor_f(self.m, self.n).expect("invariants checked at construction")
    }
}

pub(crate) fn random_form<R: Rng>(nvars: usize, d: u32, bound: i64, rng: &mut R) -> Poly {
    let mut out = Poly::zero(nvars);
    for m in monomials_of_degree(nvars, d) {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            out.add_term(m, rat(c));
        }
    }
    if out.is_zero() {
        let mut e = vec![0u32; nvars];
        e[0] = d;
        out.add_term(Monomial::from_exponents(&e), Rat::one());
    }
    out
}

/// All monomials of total degree `d` in `nvars` variables, lexicographically.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut e = vec![0u32; nvars];
    fn rec(i: usize, left: u32, e: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == e.len() {
            e[i] = left;
            out.push(Monomial::from_exponents(e));
            return;
        }
        for k in (0..=left).rev() {
            e[i] = k;
            rec(i + 1, left - k, e, out);
        }
    }
    if nvars == 0 {
        return out;
    }
    rec(0, d, &mut e, &mut out);
    out
}

/// Degrees attached to `f` and a pull-back of degree `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeLedger {
    pub m: u32,
    pub n: u32,
    /// Degree of the foliation defined by `α₀`: `a = n + m − 2`.
    pub a: u32,
    pub s: u32,
    /// Degree of the pulled-back foliation: `d = s(a + 2) − 2`.
    pub d: u32,
}

impl DegreeLedger {
    pub fn new(m: u32, n: u32, s: u32) -> Result<Self> {
        check_mn(m, n)?;
        if s < 2 {
            return Err(Error::Invalid(format!("pull-back degree s={s} must be at least 2")));
        }
        let a = n + m - 2;
        Ok(DegreeLedger { m, n, a, s, d: s * (a + 2) - 2 })
    }
}

fn check_mn(m: u32, n: u32) -> Result<()> {
    if m > n && n >= 2 {
        Ok(())
    } else {
        Err(Error::Invalid(format!("need m > n >= 2, got m={m}, n={n}")))
    }
}

/// Global Milnor number `(m+n−1)² − mn`.
pub fn milnor_f(m: u32, n: u32) -> Result<u64> {
    check_mn(m, n)?;
    let (m, n) = (m as u64, n as u64);
    Ok((m + n - 1).pow(2) - m * n)
}

/// Milnor number of the pull-back by a degree-`s` map: `(s(m+n)−1)² − s²mn`.
pub fn milnor_pullback(m: u32, n: u32, s: u32) -> Result<u64> {
    check_mn(m, n)?;
    if s < 2 {
        return Err(Error::Invalid(format!("pull-back degree s={s} must be at least 2")));
    }
    let (m, n, s) = (m as u64, n as u64, s as u64);
    Ok((s * (m + n) - 1).pow(2) - s * s * m * n)
}

/// Homogeneous `α₀ = qQ dP − pP dQ` in `(X, Y, Z)`.
pub fn alpha0(f: &RationalFirstIntegral) -> DifferentialForm {
    log_numerator(&f.p_hom, &f.q_hom, f.p, f.q)
}

/// `α₀` restricted to the chart `Z = 1` (a 1-form in `x, y`).
pub fn alpha0_affine(f: &RationalFirstIntegral) -> DifferentialForm {
    log_numerator(&f.p_aff, &f.q_aff, f.p, f.q)
}

fn log_numerator(big_p: &Poly, big_q: &Poly, p: u32, q: u32) -> DifferentialForm {
    let (qr, pr) = (rat(q as i64), rat(p as i64));
    let coeffs = (0..big_p.nvars())
        .map(|i| &(big_q * &big_p.derivative(i)).scale(&qr) - &(big_p * &big_q.derivative(i)).scale(&pr))
        .collect();
    DifferentialForm::one_form(coeffs)
}

/// `ω₀ = df / f = q dP/P − p dQ/Q = α₀ / (PQ)` in the affine chart.
pub fn omega0(f: &RationalFirstIntegral) -> DifferentialForm {
    DifferentialForm::rational(alpha0_affine(f), &(&f.p_aff * &f.q_aff), 1)
}

/// Homogeneous `ω₀ = α₀ / (PQ)` in `(X, Y, Z)`.
pub fn omega0_homogeneous(f: &RationalFirstIntegral) -> DifferentialForm {
    DifferentialForm::rational(alpha0(f), &(&f.p_hom * &f.q_hom), 1)
}

/// Euler condition `XA + YB + ZC ≡ 0` for a homogeneous polynomial 1-form in `(X, Y, Z)`.
pub fn euler_check(alpha: &DifferentialForm) -> Result<bool> {
    if alpha.degree() != 1 || alpha.nvars() != 3 {
        return Err(Error::Invalid("Euler condition needs a 1-form in X, Y, Z".into()));
    }
    if !alpha.is_polynomial() {
        return Err(Error::Invalid("Euler condition needs a polynomial form".into()));
    }
    let degs: Vec<u32> = alpha.coeffs().iter().filter_map(Poly::degree).collect();
    if alpha.coeffs().iter().any(|c| !c.is_homogeneous()) || degs.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Invalid("Euler condition needs homogeneous coefficients of equal degree".into()));
    }
    let radial: Vec<Poly> = (0..3).map(|i| Poly::var(3, i)).collect();
    Ok(alpha.contract(&radial)?.is_zero())
}

/// One decided condition with the evidence behind it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionFlag {
    pub holds: bool,
    /// `groebner`, `numeric` or `assumed`.
    pub method: String,
    pub detail: String,
}

impl ConditionFlag {
    fn exact(holds: bool, detail: String) -> Self {
        ConditionFlag { holds, method: "groebner".into(), detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenericityReport {
    #[serde(rename = "smooth_P")]
    pub smooth_p: ConditionFlag,
    #[serde(rename = "smooth_Q")]
    pub smooth_q: ConditionFlag,
    #[serde(rename = "transversal_PQ")]
    pub transversal_pq: ConditionFlag,
    pub transversal_infinity: ConditionFlag,
    pub critical_points_affine: ConditionFlag,
    pub critical_values_distinct: ConditionFlag,
    pub non_composite: ConditionFlag,
}

impl GenericityReport {
    /// All decided flags hold (the assumed one is not counted).
    pub fn all_hold(&self) -> bool {
        self.flags().iter().all(|(_, f)| f.holds)
    }

    pub fn flags(&self) -> [(&'static str, &ConditionFlag); 7] {
        [
            ("smooth_P", &self.smooth_p),
            ("smooth_Q", &self.smooth_q),
            ("transversal_PQ", &self.transversal_pq),
            ("transversal_infinity", &self.transversal_infinity),
            ("critical_points_affine", &self.critical_points_affine),
            ("critical_values_distinct", &self.critical_values_distinct),
            ("non_composite", &self.non_composite),
        ]
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.flags().iter().filter(|(_, f)| !f.holds).map(|(n, _)| *n).collect()
    }
}

/// Decides whether homogeneous generators have a common projective zero by
/// checking every affine chart for the unit ideal. Returns the first chart
/// with a zero, if any.
pub fn projective_zero_chart(gens: &[Poly]) -> Option<usize> {
    let n = gens.first().map(Poly::nvars).unwrap_or(0);
    (0..n).find(|&i| {
        let affine: Vec<Poly> = gens.iter().map(|g| g.dehomogenize(i)).collect();
        !buchberger(&Ideal::new(affine, MonomialOrder::GradedRevLex)).is_unit()
    })
}

fn emptiness_flag(gens: &[Poly], what: &str) -> ConditionFlag {
    match projective_zero_chart(gens) {
        None => ConditionFlag::exact(true, format!("{what}: unit ideal on every affine chart")),
        Some(i) => ConditionFlag::exact(false, format!("{what}: common zero in chart {} = 1", ["X", "Y", "Z"].get(i).unwrap_or(&"?"))),
    }
}

/// Decides the genericity conditions for `f`.
///
/// Smoothness and transversality are exact emptiness certificates; distinct
/// critical values are decided numerically; non-compositeness is assumed.
pub fn check_conditions(f: &RationalFirstIntegral) -> GenericityReport {
    check_conditions_with(f, &Tolerances::default())
}

pub fn check_conditions_with(f: &RationalFirstIntegral, tol: &Tolerances) -> GenericityReport {
    let (bp, bq) = (&f.p_hom, &f.q_hom);
    let with_gradient = |g: &Poly| -> Vec<Poly> {
        let mut v = vec![g.clone()];
        v.extend(g.gradient());
        v
    };
    let smooth_p = emptiness_flag(&with_gradient(bp), "<P, grad P>");
    let smooth_q = emptiness_flag(&with_gradient(bq), "<Q, grad Q>");

    let (gp, gq) = (bp.gradient(), bq.gradient());
    let mut gens = vec![bp.clone(), bq.clone()];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        gens.push(&(&gp[i] * &gq[j]) - &(&gp[j] * &gq[i]));
    }
    let transversal_pq = emptiness_flag(&gens, "<P, Q, 2x2 minors of (grad P, grad Q)>");

    // leading forms on Z = 0 (terms free of Z, so dropping Z is exact): each square-free, and coprime to each other
    let lead = |g: &Poly| g.homogeneous_part(g.degree().unwrap()).dehomogenize(2);
    let (lp, lq) = (lead(bp), lead(bq));
    let sqfree = |g: &Poly| projective_zero_chart(&with_gradient(g)).is_none();
    let coprime = projective_zero_chart(&[lp.clone(), lq.clone()]).is_none();
    let (sp, sq) = (sqfree(&lp), sqfree(&lq));
    let transversal_infinity = ConditionFlag::exact(
        sp && sq && coprime,
        format!("leading forms on Z=0: P square-free {sp}, Q square-free {sq}, coprime {coprime}"),
    );

    let critical_points_affine = affine_critical_flag(f);

    let critical_values_distinct = match critical_values(f, tol) {
        Ok(data) => {
            let repeated = data.values.iter().filter(|v| v.multiplicity > 1).count();
            ConditionFlag {
                holds: repeated == 0 && !data.values.is_empty(),
                method: "numeric".into(),
                detail: format!(
                    "{} critical points, {} distinct values, minimum separation {:.3e}, merge tolerance {:.1e}",
                    data.points.len(),
                    data.values.len(),
                    data.min_separation(),
                    tol.merge
                ),
            }
        }
        Err(e) => ConditionFlag { holds: false, method: "numeric".into(), detail: e.to_string() },
    };

    GenericityReport {
        smooth_p,
        smooth_q,
        transversal_pq,
        transversal_infinity,
        critical_points_affine,
        critical_values_distinct,
        non_composite: ConditionFlag { holds: true, method: "assumed".into(), detail: "generic fibers taken irreducible".into() },
    }
}

/// Affine critical points of `f` away from `Q = 0` form a finite set of Morse points:
/// `<ζQ − 1, h_x, h_y>` is zero-dimensional and the Hessian determinant of
/// `(h_x, h_y)` is invertible in the quotient (its multiplication matrix on the
/// standard monomials has full rank).
fn affine_critical_flag(f: &RationalFirstIntegral) -> ConditionFlag {
    let (h1, h2) = f.critical_numerators();
    let lift = |g: &Poly| g.embed(3, &[0, 1]);
    let zeta = Poly::var(3, 2);
    let base = vec![&(&zeta * &lift(&f.q_aff)) - &Poly::one(3), lift(&h1), lift(&h2)];
    let gb = buchberger(&Ideal::new(base, MonomialOrder::BlockElimination { eliminate: vec![2] }));
    if gb.is_unit() {
        return ConditionFlag::exact(false, "no affine critical points".into());
    }
    let basis = match gb.standard_monomials() {
        Ok(b) => b.monomials,
        Err(e) => return ConditionFlag::exact(false, format!("critical locus not finite: {e}")),
    };
    let hess = lift(&(&(&h1.derivative(0) * &h2.derivative(1)) - &(&h1.derivative(1) * &h2.derivative(0))));
    let rows: Vec<Vec<Rat>> = basis
        .iter()
        .map(|b| {
            let r = gb.normal_form(&hess.mul_monomial(b, &Rat::one()));
            basis.iter().map(|m| r.coeff(m)).collect()
        })
        .collect();
    let count = basis.len();
    let morse = crate::linalg::rank(&rows) == count;
    ConditionFlag::exact(
        morse,
        format!("{count} critical points counted with multiplicity; Hessian invertible on the quotient: {morse}"),
    )
}

/// Samples `f` of degrees `(m, n)` with bounded random coefficients until the
/// genericity report holds, trying at most `attempts` times. Returns the
/// instance and one log line per attempt.
pub fn sample_generic<R: Rng>(m: u32, n: u32, bound: i64, attempts: u32, rng: &mut R) -> Result<(RationalFirstIntegral, Vec<String>)> {
    let mut log = Vec::new();
    for k in 1..=attempts {
        let f = RationalFirstIntegral::random(m, n, bound, rng)?;
        let report = check_conditions(&f);
        if report.all_hold() {
            log.push(format!("attempt {k}: accepted"));
            return Ok((f, log));
        }
        log.push(format!("attempt {k}: rejected ({})", report.failures().join(", ")));
    }
    Err(Error::Genericity(format!("no generic instance of degrees ({m}, {n}) in {attempts} attempts: {}", log.join("; "))))
}

/// `(x, y) ↦ f(x, y)` evaluated exactly, `None` on the polar locus.
pub fn eval_exact(f: &RationalFirstIntegral, pt: &[Rat]) -> Option<Rat> {
    let den = f.q_aff.eval(pt);
    if den.is_zero() {
        return None;
    }
    Some(num_traits::pow(f.p_aff.eval(pt), f.q as usize) / num_traits::pow(den, f.p as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn xyz() -> Vars {
        Vars::new(&["X", "Y", "Z"])
    }

    fn sample() -> RationalFirstIntegral {
        let v = xyz();
        RationalFirstIntegral::new(v.parse("X^3 + Y^3 + Z^3").unwrap(), v.parse("X^2 + Y^2 + 2*Z^2").unwrap(), 3, 2).unwrap()
    }

    #[test]
    fn invariants_enforced() {
        let v = xyz();
        let cubic = v.parse("X^3 + Y^3 + Z^3").unwrap();
        let conic = v.parse("X^2 + Y^2 + Z^2").unwrap();
        assert!(RationalFirstIntegral::new(cubic.clone(), conic.clone(), 2, 3).is_err());
        assert!(RationalFirstIntegral::new(cubic.clone(), conic.clone(), 6, 4).is_err());
        assert!(RationalFirstIntegral::new(conic.clone(), cubic.clone(), 2, 3).is_err());
        assert!(RationalFirstIntegral::new(cubic, conic, 3, 2).is_ok());
    }

    #[test]
    fn milnor_numbers() {
        assert_eq!(milnor_f(3, 2).unwrap(), 10);
        assert_eq!(milnor_f(4, 3).unwrap(), 24);
        assert_eq!(milnor_pullback(3, 2, 2).unwrap(), 57);
        assert!(milnor_f(2, 2).is_err());
        assert!(milnor_pullback(3, 2, 1).is_err());
    }

    #[test]
    fn degree_ledger() {
        let l = DegreeLedger::new(3, 2, 2).unwrap();
        assert_eq!((l.a, l.d), (3, 8));
    }

    #[test]
    fn alpha0_expansion_and_euler() {
        let f = sample();
        let a = alpha0(&f);
        // direct expansion of 2Q dP − 3P dQ
        let v = xyz();
        let q = v.parse("X^2 + Y^2 + 2*Z^2").unwrap();
        let p = v.parse("X^3 + Y^3 + Z^3").unwrap();
        let expect: Vec<Poly> = (0..3).map(|i| &(&q * &p.derivative(i)).scale(&rat(2)) - &(&p * &q.derivative(i)).scale(&rat(3))).collect();
        assert_eq!(a.coeffs(), expect.as_slice());
        assert_eq!(a.coeffs()[0].degree(), Some(4));
        assert!(euler_check(&a).unwrap());
    }

    #[test]
    fn euler_examples() {
        let v = xyz();
        let dx = DifferentialForm::one_form(vec![Poly::one(3), Poly::zero(3), Poly::zero(3)]);
        assert!(!euler_check(&dx).unwrap());
        let rot = DifferentialForm::one_form(vec![v.parse("Y").unwrap(), v.parse("-X").unwrap(), Poly::zero(3)]);
        assert!(euler_check(&rot).unwrap());
        let bad = DifferentialForm::one_form(vec![v.parse("Y + 1").unwrap(), Poly::zero(3), Poly::zero(3)]);
        assert!(euler_check(&bad).is_err());
    }

    #[test]
    fn omega0_relations() {
        let f = sample();
        let w = omega0(&f);
        // PQ ω₀ = α₀
        assert_eq!(w.mul_poly(&(f.p_affine() * f.q_affine())), alpha0_affine(&f));
        assert!(w.d().unwrap().is_zero());
        // df ∧ α₀ = 0 and df = f ω₀
        let df = f.function().d().unwrap();
        assert!(df.wedge(&alpha0_affine(&f)).unwrap().is_zero());
        assert!(df.equals(&w.mul_function(&f.function())));
    }

    #[test]
    fn sample_instance_certificates() {
        let r = check_conditions(&sample());
        assert!(r.smooth_p.holds && r.smooth_q.holds && r.transversal_pq.holds, "{r:?}");
        assert!(r.transversal_infinity.holds && r.critical_points_affine.holds, "{r:?}");
        // X <-> Y symmetry pairs up critical points with equal values
        assert!(!r.critical_values_distinct.holds, "{r:?}");
    }

    #[test]
    fn seeded_instance_is_generic() {
        let (f, _) = sample_generic(3, 2, 5, 20, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(check_conditions(&f).all_hold());
    }

    #[test]
    fn triple_line_is_singular() {
        let v = xyz();
        let f = RationalFirstIntegral::new(v.parse("X^3").unwrap(), v.parse("X^2 + Y^2 + 2*Z^2").unwrap(), 3, 2).unwrap();
        let r = check_conditions(&f);
        assert!(!r.smooth_p.holds);
        assert!(!r.all_hold());
    }

    #[test]
    fn cone_conic_is_flagged() {
        let v = xyz();
        let f = RationalFirstIntegral::new(v.parse("X^3 + Y^3 + Z^3").unwrap(), v.parse("X^2 + Y^2").unwrap(), 3, 2).unwrap();
        let r = check_conditions(&f);
        assert!(!r.smooth_q.holds);
        assert!(!r.all_hold());
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let a = sample_generic(3, 2, 5, 20, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = sample_generic(3, 2, 5, 20, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(2, 4).len(), 5);
    }
}
