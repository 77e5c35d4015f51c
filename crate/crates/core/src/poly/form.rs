use num_traits::One;

use super::monomial::MonomialOrder;
use super::poly::{rat, Poly, Rat};
use crate::error::{Error, Result};

/// Rational differential form `numerator / divisor^pole_order` in `n` variables.
///
/// 0-forms carry one coefficient, 1-forms one per `dx_i`, 2-forms one per
/// `dx_i ∧ dx_j` with `i < j` in lexicographic pair order. The divisor is kept
/// primitive; the representation is normalized so that the numerator
/// coefficients are not all divisible by the divisor when `pole_order > 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    degree: u8,
    coeffs: Vec<Poly>,
    divisor: Poly,
    pole_order: u32,
}

impl std::fmt::Debug for DifferentialForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Form{}({:?}", self.degree, self.coeffs)?;
        if self.pole_order > 0 {
            write!(f, " / ({:?})^{}", self.divisor, self.pole_order)?;
        }
        write!(f, ")")
    }
}

fn n_coeffs(nvars: usize, degree: u8) -> usize {
    match degree {
        0 => 1,
        1 => nvars,
        2 => nvars * (nvars.saturating_sub(1)) / 2,
        _ => 0,
    }
}

/// Index of `dx_i ∧ dx_j` (`i < j`) among the 2-form coefficients.
pub fn pair_index(nvars: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < nvars);
    // number of pairs (a, b) with a < i, plus offset within row i
    i * (2 * nvars - i - 1) / 2 + (j - i - 1)
}

impl DifferentialForm {
    fn build(degree: u8, coeffs: Vec<Poly>, divisor: Poly, pole_order: u32) -> Self {
        let mut f = DifferentialForm { degree, coeffs, divisor, pole_order };
        f.normalize();
        f
    }

    pub fn zero(nvars: usize, degree: u8) -> Self {
        DifferentialForm {
            degree,
            coeffs: vec![Poly::zero(nvars); n_coeffs(nvars, degree)],
            divisor: Poly::one(nvars),
            pole_order: 0,
        }
    }

    pub fn function(g: Poly) -> Self {
        let n = g.nvars();
        DifferentialForm { degree: 0, coeffs: vec![g], divisor: Poly::one(n), pole_order: 0 }
    }

    /// Polynomial 1-form `Σ coeffs[i] dx_i`.
    pub fn one_form(coeffs: Vec<Poly>) -> Self {
        let n = coeffs.len();
        DifferentialForm { degree: 1, coeffs, divisor: Poly::one(n), pole_order: 0 }
    }

    /// Polynomial 2-form in the plane: `c dx ∧ dy`.
    pub fn area(c: Poly) -> Self {
        assert_eq!(c.nvars(), 2);
        DifferentialForm { degree: 2, coeffs: vec![c], divisor: Poly::one(2), pole_order: 0 }
    }

    pub fn two_form(coeffs: Vec<Poly>, nvars: usize) -> Self {
        assert_eq!(coeffs.len(), n_coeffs(nvars, 2));
        DifferentialForm { degree: 2, coeffs, divisor: Poly::one(nvars), pole_order: 0 }
    }

    /// `numerator / divisor^order`, normalized.
    pub fn rational(numerator: DifferentialForm, divisor: &Poly, order: u32) -> Self {
        assert_eq!(numerator.pole_order, 0, "numerator must be polynomial");
        if order == 0 || divisor.is_constant() {
            let c = if divisor.is_zero() { Rat::one() } else { divisor.constant_term() };
            let scale = if order == 0 { Rat::one() } else { num_traits::pow(c.recip(), order as usize) };
            return numerator.scale(&scale);
        }
        let o = MonomialOrder::GradedRevLex;
        let prim = divisor.primitive(&o);
        // divisor = k * prim; fold k^-order into the numerator
        let k = divisor.leading_term(&o).map(|(_, c)| c.clone()).unwrap() / prim.leading_term(&o).map(|(_, c)| c.clone()).unwrap();
        let num = numerator.scale(&num_traits::pow(k.recip(), order as usize));
        Self::build(num.degree, num.coeffs, prim, order)
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.divisor.nvars()
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    pub fn divisor(&self) -> &Poly {
        &self.divisor
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    pub fn is_polynomial(&self) -> bool {
        self.pole_order == 0
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Numerator as a polynomial form (drops the denominator).
    pub fn numerator(&self) -> DifferentialForm {
        DifferentialForm {
            degree: self.degree,
            coeffs: self.coeffs.clone(),
            divisor: Poly::one(self.nvars()),
            pole_order: 0,
        }
    }

    /// Degree of the zero divisor: max total degree of the numerator coefficients.
    pub fn zero_divisor_degree(&self) -> Option<u32> {
        self.coeffs.iter().filter_map(Poly::degree).max()
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.pole_order = 0;
        }
        if self.pole_order == 0 {
            self.divisor = Poly::one(self.nvars());
            return;
        }
        while self.pole_order > 0 {
            let divided: Option<Vec<Poly>> = self.coeffs.iter().map(|c| c.div_exact(&self.divisor)).collect();
            match divided {
                Some(cs) => {
                    self.coeffs = cs;
                    self.pole_order -= 1;
                }
                None => break,
            }
        }
        if self.pole_order == 0 {
            self.divisor = Poly::one(self.nvars());
        }
    }

    /// Rewrites `self` and `other` over a shared denominator.
    fn common(&self, other: &DifferentialForm) -> (Vec<Poly>, Vec<Poly>, Poly, u32) {
        if other.pole_order == 0 || self.divisor == other.divisor {
            let l = self.pole_order.max(other.pole_order);
            let d = if self.pole_order > 0 { self.divisor.clone() } else { other.divisor.clone() };
            let fa = d.pow(l - self.pole_order);
            let fb = d.pow(l - other.pole_order);
            let a = self.coeffs.iter().map(|c| c * &fa).collect();
            let b = other.coeffs.iter().map(|c| c * &fb).collect();
            return (a, b, d, l);
        }
        if self.pole_order == 0 {
            let (b, a, d, l) = other.common(self);
            return (a, b, d, l);
        }
        let d = &self.divisor * &other.divisor;
        let l = self.pole_order.max(other.pole_order);
        let fa = &self.divisor.pow(l - self.pole_order) * &other.divisor.pow(l);
        let fb = &other.divisor.pow(l - other.pole_order) * &self.divisor.pow(l);
        let a = self.coeffs.iter().map(|c| c * &fa).collect();
        let b = other.coeffs.iter().map(|c| c * &fb).collect();
        (a, b, d, l)
    }

    pub fn add(&self, other: &DifferentialForm) -> DifferentialForm {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let (a, b, d, l) = self.common(other);
        let coeffs = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        Self::build(self.degree, coeffs, d, l)
    }

    pub fn sub(&self, other: &DifferentialForm) -> DifferentialForm {
        self.add(&other.scale(&-Rat::one()))
    }

    /// Equality as rational forms, whatever the stored divisors.
    pub fn equals(&self, other: &DifferentialForm) -> bool {
        self.degree == other.degree && self.sub(other).is_zero()
    }

    pub fn scale(&self, c: &Rat) -> DifferentialForm {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|p| p.scale(c)).collect();
        out.normalize();
        out
    }

    pub fn mul_poly(&self, g: &Poly) -> DifferentialForm {
        let coeffs = self.coeffs.iter().map(|p| p * g).collect();
        Self::build(self.degree, coeffs, self.divisor.clone(), self.pole_order)
    }

    /// Multiplication by a rational 0-form.
    pub fn mul_function(&self, g: &DifferentialForm) -> DifferentialForm {
        assert_eq!(g.degree, 0);
        let numer = self.mul_poly(&g.coeffs[0]);
        if g.pole_order == 0 {
            return numer;
        }
        let extra = DifferentialForm::rational(DifferentialForm::function(Poly::one(self.nvars())), &g.divisor, g.pole_order);
        // numer * (1 / g.divisor^k): combine denominators through `common`
        let (a, b, d, l) = numer.common(&extra);
        // a/d^l * b0/d^l where b0 is the single 0-form numerator
        let coeffs = a.iter().map(|c| c * &b[0]).collect();
        Self::build(self.degree, coeffs, d, 2 * l)
    }

    /// Exterior derivative with the quotient rule across the pole order.
    pub fn d(&self) -> Result<DifferentialForm> {
        let n = self.nvars();
        match self.degree {
            0 => {
                let g = &self.coeffs[0];
                if self.pole_order == 0 {
                    return Ok(DifferentialForm::one_form(g.gradient()));
                }
                let q = &self.divisor;
                let l = rat(self.pole_order as i64);
                let coeffs = (0..n).map(|i| &(q * &g.derivative(i)) - &(&q.derivative(i) * g).scale(&l)).collect();
                Ok(Self::build(1, coeffs, q.clone(), self.pole_order + 1))
            }
            1 => {
                let exterior = |c: &[Poly]| -> Vec<Poly> {
                    let mut out = vec![Poly::zero(n); n_coeffs(n, 2)];
                    for i in 0..n {
                        for j in (i + 1)..n {
                            out[pair_index(n, i, j)] = &c[j].derivative(i) - &c[i].derivative(j);
                        }
                    }
                    out
                };
                if self.pole_order == 0 {
                    return Ok(DifferentialForm { degree: 2, coeffs: exterior(&self.coeffs), divisor: Poly::one(n), pole_order: 0 });
                }
                // d(N / q^l) = (q dN - l dq ∧ N) / q^{l+1}
                let q = &self.divisor;
                let l = rat(self.pole_order as i64);
                let dn = exterior(&self.coeffs);
                let dq = q.gradient();
                let mut coeffs = vec![Poly::zero(n); n_coeffs(n, 2)];
                for i in 0..n {
                    for j in (i + 1)..n {
                        let wedge = &(&dq[i] * &self.coeffs[j]) - &(&dq[j] * &self.coeffs[i]);
                        coeffs[pair_index(n, i, j)] = &(q * &dn[pair_index(n, i, j)]) - &wedge.scale(&l);
                    }
                }
                Ok(Self::build(2, coeffs, q.clone(), self.pole_order + 1))
            }
            _ => Err(Error::Degree("exterior derivative of a 2-form".into())),
        }
    }

    pub fn wedge(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        let n = self.nvars();
        if self.degree + other.degree > 2 {
            return Err(Error::Degree(format!("wedge of degrees {} and {}", self.degree, other.degree)));
        }
        // numerators multiply; denominators multiply
        let coeffs = match (self.degree, other.degree) {
            (0, _) => other.coeffs.iter().map(|c| c * &self.coeffs[0]).collect(),
            (_, 0) => self.coeffs.iter().map(|c| c * &other.coeffs[0]).collect(),
            (1, 1) => {
                let mut out = vec![Poly::zero(n); n_coeffs(n, 2)];
                for i in 0..n {
                    for j in (i + 1)..n {
                        out[pair_index(n, i, j)] = &(&self.coeffs[i] * &other.coeffs[j]) - &(&self.coeffs[j] * &other.coeffs[i]);
                    }
                }
                out
            }
            _ => unreachable!(),
        };
        let numer = DifferentialForm { degree: self.degree + other.degree, coeffs, divisor: Poly::one(n), pole_order: 0 };
        let mut acc = numer;
        for f in [self, other] {
            if f.pole_order > 0 {
                let inv = DifferentialForm::rational(DifferentialForm::function(Poly::one(n)), &f.divisor, f.pole_order);
                acc = acc.mul_function(&inv);
            }
        }
        Ok(acc)
    }

    /// Pull-back along the polynomial map whose `i`-th component is `images[i]`.
    pub fn pullback(&self, images: &[Poly]) -> Result<DifferentialForm> {
        let n = self.nvars();
        if images.len() != n {
            return Err(Error::Dimension(format!("map has {} components, form lives in {} variables", images.len(), n)));
        }
        let m = images[0].nvars();
        let jac: Vec<Vec<Poly>> = images.iter().map(|f| f.gradient()).collect();
        let pulled: Vec<Poly> = self.coeffs.iter().map(|c| c.substitute(images)).collect();
        let coeffs = match self.degree {
            0 => pulled,
            1 => (0..m)
                .map(|j| {
                    let mut acc = Poly::zero(m);
                    for i in 0..n {
                        acc += &(&pulled[i] * &jac[i][j]);
                    }
                    acc
                })
                .collect(),
            _ => {
                let mut out = vec![Poly::zero(m); n_coeffs(m, 2)];
                for a in 0..n {
                    for b in (a + 1)..n {
                        let c = &pulled[pair_index(n, a, b)];
                        if c.is_zero() {
                            continue;
                        }
                        for i in 0..m {
                            for j in (i + 1)..m {
                                let minor = &(&jac[a][i] * &jac[b][j]) - &(&jac[a][j] * &jac[b][i]);
                                out[pair_index(m, i, j)] += &(c * &minor);
                            }
                        }
                    }
                }
                out
            }
        };
        let numer = DifferentialForm { degree: self.degree, coeffs, divisor: Poly::one(m), pole_order: 0 };
        if self.pole_order == 0 {
            return Ok(numer);
        }
        Ok(DifferentialForm::rational(numer, &self.divisor.substitute(images), self.pole_order))
    }

    /// Contraction of a polynomial 1-form numerator with a vector field.
    pub fn contract(&self, field: &[Poly]) -> Result<Poly> {
        if self.degree != 1 {
            return Err(Error::Degree("contraction needs a 1-form".into()));
        }
        let mut acc = Poly::zero(self.nvars());
        for (c, v) in self.coeffs.iter().zip(field) {
            acc += &(c * v);
        }
        Ok(acc)
    }

    /// Same form with the numerator multiplied so that its denominator is `divisor^order`.
    /// Requires `self.divisor^self.pole_order` to divide `divisor^order`.
    pub fn numerator_over(&self, divisor: &Poly, order: u32) -> Option<Vec<Poly>> {
        let target = divisor.pow(order);
        let own = if self.pole_order == 0 { Poly::one(self.nvars()) } else { self.divisor.pow(self.pole_order) };
        let factor = target.div_exact(&own)?;
        Some(self.coeffs.iter().map(|c| c * &factor).collect())
    }

    /// Evaluates the coefficient functions (numerator divided by denominator) at a complex point.
    pub fn eval_complex(&self, point: &[num_complex::Complex64]) -> Vec<num_complex::Complex64> {
        let den = if self.pole_order == 0 {
            num_complex::Complex64::new(1.0, 0.0)
        } else {
            self.divisor.eval_complex(point).powu(self.pole_order)
        };
        self.coeffs.iter().map(|c| c.eval_complex(point) / den).collect()
    }
}
