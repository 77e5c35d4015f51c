//! The relative module `M(*D)`, the Brieskorn/Petrov basis of `H_f`, and
//! decompositions of rational 1-forms in it.
//!
//! Decomposition is a bounded-ansatz linear solve: the coordinates `C_j`,
//! `ζ₁ = A/Q^N` and `ζ₂ = B/Q^N` are unknown coefficient vectors, the defining
//! identity is cleared of denominators and compared coefficient by
//! coefficient. The pole cap `N` is escalated by doubling.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foliation::{alpha0_affine, monomials_of_degree, omega0, RationalFirstIntegral};
use crate::groebner::{buchberger, GroebnerBasis, Ideal};
use crate::linalg;
use crate::poly::{rat, DifferentialForm, Monomial, MonomialOrder, Poly, Rat};
use crate::pullback::Morphism;

/// `C[x, y, ζ] / ⟨ζQ − 1, qP_x − pζQ_xP, qP_y − pζQ_yP⟩` on the affine chart.
#[derive(Clone, Debug)]
pub struct RelativeModule {
    pub ideal: Ideal,
    pub groebner: GroebnerBasis,
    /// Standard monomials in `(x, y, ζ)` under the block order eliminating `ζ`.
    pub standard: Vec<Monomial>,
    /// A `ζ`-free monomial basis of the quotient in `(x, y)`, increasing.
    pub basis: Vec<Monomial>,
    pub dimension: usize,
}

/// Builds the relative module. A positive-dimensional quotient is a genericity
/// failure and carries the leading monomials that prove it.
pub fn relative_module(f: &RationalFirstIntegral) -> Result<RelativeModule> {
    let lift = |g: &Poly| g.embed(3, &[0, 1]);
    let (bp, bq) = (lift(f.p_affine()), lift(f.q_affine()));
    let zeta = Poly::var(3, 2);
    let (pr, qr) = (rat(f.p() as i64), rat(f.q() as i64));
    let gen = |i: usize| &bp.derivative(i).scale(&qr) - &(&(&zeta * &bq.derivative(i)) * &bp).scale(&pr);
    let ideal = Ideal::new(
        vec![&(&zeta * &bq) - &Poly::one(3), gen(0), gen(1)],
        MonomialOrder::BlockElimination { eliminate: vec![2] },
    );
    let groebner = buchberger(&ideal);
    let standard = groebner
        .standard_monomials()
        .map_err(|e| Error::Genericity(format!("M(*D) is not finite dimensional ({e})")))?
        .monomials;
    let basis = zeta_free_basis(&groebner, &standard)?;
    Ok(RelativeModule { dimension: standard.len(), ideal, groebner, standard, basis })
}

/// Rows in reduced echelon form, for greedy independence tests.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Echelon {
    /// Inserts `v` if it is independent of the rows so far.
    fn insert(&mut self, mut v: Vec<Rat>) -> bool {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &c * y;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[p].recip();
        v.iter_mut().for_each(|x| *x *= &inv);
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    *x -= &c * y;
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// `x^i y^j` whose classes form a basis, chosen greedily in increasing degree.
fn zeta_free_basis(gb: &GroebnerBasis, standard: &[Monomial]) -> Result<Vec<Monomial>> {
    let order = MonomialOrder::GradedRevLex;
    let mut out: Vec<Monomial>;
    if standard.iter().all(|m| m.exp(2) == 0) {
        out = standard.iter().map(|m| Monomial::from_exponents(&m.exponents()[..2])).collect();
    } else {
        let dim = standard.len();
        let index: HashMap<&Monomial, usize> = standard.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ech = Echelon::default();
        out = Vec::new();
        // classes of x^i y^j span the quotient (ζ is Q^{-1}); the degree bound is generous
        let limit = 2 * dim as u32 + 4;
        'outer: for d in 0..=limit {
            for m in monomials_of_degree(2, d) {
                let nf = gb.normal_form(&Poly::monomial(Monomial::from_exponents(&[m.exp(0), m.exp(1), 0]), Rat::one()));
                let mut v = vec![Rat::zero(); dim];
                for (t, c) in nf.terms() {
                    v[index[t]] = c.clone();
                }
                if ech.insert(v) {
                    out.push(m);
                    if out.len() == dim {
                        break 'outer;
                    }
                }
            }
        }
        if out.len() < dim {
            return Err(Error::Genericity(format!("only {} of {dim} classes are represented by x^i y^j up to degree {limit}", out.len())));
        }
    }
    out.sort_by(|a, b| order.cmp(a, b));
    Ok(out)
}

/// Forms `α_j = (∫ m_j dx) dy` with `dα_j = m_j dx ∧ dy`.
#[derive(Clone, Debug)]
pub struct BrieskornBasis {
    pub monomials: Vec<Monomial>,
    pub forms: Vec<DifferentialForm>,
}

impl BrieskornBasis {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// `deg Z(α_j) = deg m_j + 1`.
    pub fn zero_degrees(&self) -> Vec<u32> {
        self.monomials.iter().map(|m| m.degree() + 1).collect()
    }
}

/// The basis forms for the monomials of a relative module.
pub fn hf_basis(module: &RelativeModule) -> Result<BrieskornBasis> {
    basis_from_monomials(&module.basis)
}

/// `α = (∫ m dx) dy` for each monomial, with `dα = m dx ∧ dy` checked exactly.
pub fn basis_from_monomials(monomials: &[Monomial]) -> Result<BrieskornBasis> {
    let forms = monomials
        .iter()
        .map(|m| {
            let mp = Poly::monomial(m.clone(), Rat::one());
            let form = DifferentialForm::one_form(vec![Poly::zero(2), mp.integrate(0)]);
            if form.d()? != DifferentialForm::area(mp) {
                return Err(Error::Verification(format!("dα ≠ m dx∧dy for m = {m:?}")));
            }
            Ok(form)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BrieskornBasis { monomials: monomials.to_vec(), forms })
}

/// Search limits for [`decompose`] and [`is_relatively_exact`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DecomposeOptions {
    /// First pole cap for `ζ₁, ζ₂`; `p + 1` when absent.
    pub initial_pole_cap: Option<u32>,
    /// Number of caps tried; the cap doubles between rounds.
    pub rounds: u32,
    /// Extra degree allowed for the numerators beyond the balancing degree.
    pub degree_slack: u32,
    /// Escalation stops before a round whose system has more than this many
    /// `rows × columns` entries (the modular elimination is dense, 8 bytes each).
    pub max_system_entries: u64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { initial_pole_cap: None, rounds: 4, degree_slack: 2, max_system_entries: 120_000_000 }
    }
}

/// `α = Σ C_j(f) α_j + ζ₁ df + dζ₂`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// `C_j` as polynomials in one variable `t`.
    pub coefficients: Vec<Poly>,
    pub zeta1: DifferentialForm,
    pub zeta2: DifferentialForm,
    /// Re-expansion minus the input; zero by construction.
    pub residual: DifferentialForm,
    /// Bound on `deg C_j`; negative means `C_j` must vanish.
    pub degree_bounds: Vec<i64>,
    pub pole_cap: u32,
    pub round: u32,
    /// Rows and columns of the solved system.
    pub system: (usize, usize),
}

impl Decomposition {
    pub fn degree_bound_holds(&self) -> bool {
        self.coefficients.iter().zip(&self.degree_bounds).all(|(c, &b)| match c.degree() {
            None => true,
            Some(d) => (d as i64) <= b,
        })
    }

    pub fn coordinates_vanish(&self) -> bool {
        self.coefficients.iter().all(Poly::is_zero)
    }

    pub fn coordinates_constant(&self) -> bool {
        self.coefficients.iter().all(Poly::is_constant)
    }

    /// `C_j(0)`.
    pub fn constant_terms(&self) -> Vec<Rat> {
        self.coefficients.iter().map(Poly::constant_term).collect()
    }

    /// `Σ C_j(f) α_j + ζ₁ df + dζ₂`, expanded with form arithmetic.
    pub fn reassemble(&self, f: &RationalFirstIntegral, basis: &BrieskornBasis) -> Result<DifferentialForm> {
        let mut acc = DifferentialForm::zero(2, 1);
        for (c, a) in self.coefficients.iter().zip(&basis.forms) {
            if !c.is_zero() {
                acc = acc.add(&a.mul_function(&compose_with_f(c, f)));
            }
        }
        let df = f.function().d()?;
        acc = acc.add(&df.mul_function(&self.zeta1));
        Ok(acc.add(&self.zeta2.d()?))
    }
}

/// `C(f)` as a rational 0-form with denominator `Q^{p·deg C}`.
fn compose_with_f(c: &Poly, f: &RationalFirstIntegral) -> DifferentialForm {
    let k = c.degree().unwrap_or(0);
    let (pq, qp) = (f.p_affine().pow(f.q()), f.q_affine().pow(f.p()));
    let mut num = Poly::zero(2);
    for (m, a) in c.terms() {
        let e = m.exp(0);
        num += &(&pq.pow(e) * &qp.pow(k - e)).scale(a);
    }
    DifferentialForm::rational(DifferentialForm::function(num), f.q_affine(), f.p() * k)
}

/// Monomials of total degree `≤ d`, grouped by increasing degree.
fn monomials_up_to(nvars: usize, d: i64) -> Vec<Monomial> {
    (0..=d.max(-1)).flat_map(|k| monomials_of_degree(nvars, k as u32)).collect()
}

/// Sparse coefficient-matching system assembled column by column.
struct Builder {
    rows: HashMap<(usize, Monomial), usize>,
    cols: Vec<Vec<(usize, Rat)>>,
}

impl Builder {
    fn new() -> Self {
        Builder { rows: HashMap::new(), cols: Vec::new() }
    }

    fn row(&mut self, comp: usize, m: Monomial) -> usize {
        let n = self.rows.len();
        *self.rows.entry((comp, m)).or_insert(n)
    }

    /// Adds `scale · shift · p` in component `comp` to `col`.
    fn add(&mut self, col: &mut Vec<(usize, Rat)>, comp: usize, p: &Poly, shift: &Monomial, scale: &Rat) {
        for (m, c) in p.terms() {
            let r = self.row(comp, m.mul(shift));
            col.push((r, c * scale));
        }
    }

    fn sparse(&mut self, coeffs: &[Poly]) -> Vec<(usize, Rat)> {
        let mut v = Vec::new();
        let one = Monomial::one(coeffs[0].nvars());
        for (i, p) in coeffs.iter().enumerate() {
            self.add(&mut v, i, p, &one, &Rat::one());
        }
        v
    }

    /// Row-major system plus dense right-hand sides.
    fn finish(self, rhs: Vec<Vec<(usize, Rat)>>) -> (usize, Vec<Vec<(usize, Rat)>>, Vec<Vec<Rat>>) {
        let nrows = self.rows.len();
        let mut rows = vec![Vec::new(); nrows];
        for (j, col) in self.cols.into_iter().enumerate() {
            for (r, c) in col {
                if !c.is_zero() {
                    rows[r].push((j, c));
                }
            }
        }
        let ncols = rows.iter().flatten().map(|(j, _)| j + 1).max().unwrap_or(0);
        let dense = rhs
            .into_iter()
            .map(|s| {
                let mut v = vec![Rat::zero(); nrows];
                for (r, c) in s {
                    v[r] += c;
                }
                v
            })
            .collect();
        (ncols, rows, dense)
    }
}

/// Numerator over `Q^L` with the smallest such `L`.
fn clear_q(alpha: &DifferentialForm, f: &RationalFirstIntegral) -> Result<(u32, Vec<Poly>)> {
    if alpha.degree() != 1 || alpha.nvars() != 2 {
        return Err(Error::Invalid("decompose needs a 1-form in x, y".into()));
    }
    if alpha.is_polynomial() {
        return Ok((0, alpha.coeffs().to_vec()));
    }
    let q = f.q_affine();
    let dq = q.degree().unwrap();
    let dd = alpha.divisor().degree().unwrap_or(0);
    if dd.is_multiple_of(dq) {
        let l = alpha.pole_order() * (dd / dq);
        if let Some(num) = alpha.numerator_over(q, l) {
            return Ok((l, num));
        }
    }
    Err(Error::Invalid("α has poles outside V(Q)".into()))
}

/// Decomposes one form; see [`decompose_many`].
pub fn decompose(alpha: &DifferentialForm, f: &RationalFirstIntegral, basis: &BrieskornBasis, opts: &DecomposeOptions) -> Result<Decomposition> {
    decompose_many(std::slice::from_ref(alpha), f, basis, opts).pop().unwrap()
}

/// Decomposes each form in the basis. Forms sharing their pole order and
/// zero-divisor degree share one elimination per round.
///
/// Among the solutions of the ansatz, the one returned has its free unknowns
/// set to zero, with columns ordered `C_j`, then `ζ₂`, then `ζ₁` monomials by
/// increasing degree, so low-degree `ζ₂` and then `ζ₁` are preferred.
pub fn decompose_many(
    alphas: &[DifferentialForm],
    f: &RationalFirstIntegral,
    basis: &BrieskornBasis,
    opts: &DecomposeOptions,
) -> Vec<Result<Decomposition>> {
    let mut out: Vec<Option<Result<Decomposition>>> = (0..alphas.len()).map(|_| None).collect();
    let mut groups: Vec<((u32, u32), Vec<(usize, Vec<Poly>)>)> = Vec::new();
    for (i, a) in alphas.iter().enumerate() {
        match clear_q(a, f) {
            Err(e) => out[i] = Some(Err(e)),
            Ok((l, num)) => {
                let dz = num.iter().filter_map(Poly::degree).max();
                let Some(dz) = dz else {
                    out[i] = Some(Ok(zero_decomposition(basis, f, 0)));
                    continue;
                };
                match groups.iter_mut().find(|(k, _)| *k == (l, dz)) {
                    Some((_, g)) => g.push((i, num)),
                    None => groups.push(((l, dz), vec![(i, num)])),
                }
            }
        }
    }
    for ((l, dz), members) in groups {
        for (i, r) in decompose_group(l, dz, members, f, basis, opts) {
            out[i] = Some(r);
        }
    }
    out.into_iter().map(Option::unwrap).collect()
}

fn degree_bounds(dz: u32, f: &RationalFirstIntegral, basis: &BrieskornBasis) -> Vec<i64> {
    let mq = (f.m() * f.q()) as i64;
    basis.zero_degrees().iter().map(|&dj| (dz as i64 + f.n() as i64 - dj as i64 - 1).div_euclid(mq)).collect()
}

fn zero_decomposition(basis: &BrieskornBasis, f: &RationalFirstIntegral, dz: u32) -> Decomposition {
    Decomposition {
        coefficients: vec![Poly::zero(1); basis.len()],
        zeta1: DifferentialForm::function(Poly::zero(2)),
        zeta2: DifferentialForm::function(Poly::zero(2)),
        residual: DifferentialForm::zero(2, 1),
        degree_bounds: degree_bounds(dz, f, basis),
        pole_cap: 0,
        round: 0,
        system: (0, 0),
    }
}

fn decompose_group(
    l: u32,
    dz: u32,
    members: Vec<(usize, Vec<Poly>)>,
    f: &RationalFirstIntegral,
    basis: &BrieskornBasis,
    opts: &DecomposeOptions,
) -> Vec<(usize, Result<Decomposition>)> {
    let (p, n) = (f.p(), f.n() as i64);
    let bounds = degree_bounds(dz, f, basis);
    let kmax = bounds.iter().copied().max().unwrap_or(-1).max(0) as u32;
    let first = opts.initial_pole_cap.unwrap_or(p + 1).max(1);
    let mut pending = members;
    let mut done = Vec::new();
    let mut last = (0u32, 0i64, (0usize, 0usize));
    let mut oversized = None;
    for round in 0..opts.rounds {
        let cap_n = first << round;
        let big_m = l.max(p * kmax).max(cap_n + p + 1);
        let zdeg = dz as i64 + 1 + opts.degree_slack as i64 + n * (cap_n as i64 - l as i64);
        let (ncols, rows, rhs, layout) = assemble(f, basis, &bounds, cap_n, big_m, zdeg, l, &pending);
        if rows.len() as u64 * ncols as u64 > opts.max_system_entries {
            oversized = Some((cap_n, rows.len(), ncols));
            break;
        }
        last = (cap_n, zdeg, (rows.len(), ncols));
        let sols = linalg::solve_many(ncols, &rows, &rhs);
        let mut still = Vec::new();
        for ((i, num), sol) in pending.into_iter().zip(sols) {
            match sol {
                None => still.push((i, num)),
                Some(x) => {
                    let alpha = DifferentialForm::rational(DifferentialForm::one_form(num.clone()), f.q_affine(), l);
                    let r = finish(&x, &layout, &alpha, f, basis, &bounds, cap_n, round, (rows.len(), ncols));
                    done.push((i, r));
                }
            }
        }
        pending = still;
        if pending.is_empty() {
            break;
        }
    }
    let (cap_n, zdeg, (nr, nc)) = last;
    let budget = oversized
        .map(|(n, r, c)| format!("; pole cap {n} needs a {r}×{c} system, over the budget of {} entries", opts.max_system_entries))
        .unwrap_or_default();
    for (i, _) in pending {
        let detail = if nr == 0 {
            format!("the first round already exceeds the system budget{budget}")
        } else {
            format!(
                "no solution with pole order ≤ {cap_n}, numerator degree ≤ {zdeg}, deg C_j ≤ {bounds:?}; \
                 the {nr}×{nc} system is inconsistent modulo two primes, so the last residual is the whole right-hand side{budget}"
            )
        };
        done.push((i, Err(Error::EscalationCap { rounds: opts.rounds, pole_cap: cap_n, detail })));
    }
    done
}

/// Column ranges of the unknowns.
struct Layout {
    /// `(j, k)` for each `C_j` coefficient column.
    c: Vec<(usize, u32)>,
    b: Vec<Monomial>,
    a: Vec<Monomial>,
}

/// Cleared identity, multiplied through by `Q^M`:
///
/// `Σ c_jk P^{qk} Q^{M−pk} α_j + A P^{q−1} Q^{M−N−p−1} α₀ + Q^{M−N−1}(Q dB − N B dQ) = α_num Q^{M−L}`.
#[allow(clippy::too_many_arguments, clippy::type_complexity)]
fn assemble(
    f: &RationalFirstIntegral,
    basis: &BrieskornBasis,
    bounds: &[i64],
    cap_n: u32,
    big_m: u32,
    zdeg: i64,
    l: u32,
    members: &[(usize, Vec<Poly>)],
) -> (usize, Vec<Vec<(usize, Rat)>>, Vec<Vec<Rat>>, Layout) {
    let (big_p, big_q) = (f.p_affine(), f.q_affine());
    let (p, q) = (f.p(), f.q());
    let mut bld = Builder::new();
    let mut layout = Layout { c: Vec::new(), b: Vec::new(), a: Vec::new() };
    let one = Rat::one();

    let kmax = bounds.iter().copied().max().unwrap_or(-1);
    let weights: Vec<Poly> = (0..=kmax.max(-1)).map(|k| &big_p.pow(q * k as u32) * &big_q.pow(big_m - p * k as u32)).collect();
    for (j, form) in basis.forms.iter().enumerate() {
        for k in 0..=bounds[j].max(-1) {
            let g = &form.coeffs()[1];
            let mut col = Vec::new();
            bld.add(&mut col, 1, &(g * &weights[k as usize]), &Monomial::one(2), &one);
            bld.cols.push(col);
            layout.c.push((j, k as u32));
        }
    }

    let unknowns = monomials_up_to(2, zdeg);
    let qmn = big_q.pow(big_m - cap_n);
    let qmn1 = big_q.pow(big_m - cap_n - 1);
    let dq = [big_q.derivative(0), big_q.derivative(1)].map(|d| (&d * &qmn1).scale(&rat(-(cap_n as i64))));
    for b in &unknowns {
        let mut col = Vec::new();
        for i in 0..2 {
            let e = b.exp(i);
            if e > 0 {
                let shift = b.with_exp(i, e - 1);
                bld.add(&mut col, i, &qmn, &shift, &rat(e as i64));
            }
            bld.add(&mut col, i, &dq[i], b, &one);
        }
        bld.cols.push(col);
        layout.b.push(b.clone());
    }
    let a0 = alpha0_affine(f);
    let weight = &big_p.pow(q - 1) * &big_q.pow(big_m - cap_n - p - 1);
    let ga: Vec<Poly> = a0.coeffs().iter().map(|c| c * &weight).collect();
    for a in &unknowns {
        let mut col = Vec::new();
        for (i, g) in ga.iter().enumerate() {
            bld.add(&mut col, i, g, a, &one);
        }
        bld.cols.push(col);
        layout.a.push(a.clone());
    }

    let lift = big_q.pow(big_m - l);
    let rhs: Vec<Vec<(usize, Rat)>> = members
        .iter()
        .map(|(_, num)| {
            let cleared: Vec<Poly> = num.iter().map(|c| c * &lift).collect();
            bld.sparse(&cleared)
        })
        .collect();
    let ncols_expected = bld.cols.len();
    let (ncols, rows, rhs) = bld.finish(rhs);
    debug_assert!(ncols <= ncols_expected);
    (ncols_expected.max(ncols), rows, rhs, layout)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    x: &[Rat],
    layout: &Layout,
    alpha: &DifferentialForm,
    f: &RationalFirstIntegral,
    basis: &BrieskornBasis,
    bounds: &[i64],
    cap_n: u32,
    round: u32,
    system: (usize, usize),
) -> Result<Decomposition> {
    let mut coefficients = vec![Poly::zero(1); basis.len()];
    let mut col = 0;
    for &(j, k) in &layout.c {
        coefficients[j].add_term(Monomial::from_exponents(&[k]), x[col].clone());
        col += 1;
    }
    let mut take = |ms: &[Monomial]| {
        let mut p = Poly::zero(2);
        for m in ms {
            p.add_term(m.clone(), x[col].clone());
            col += 1;
        }
        p
    };
    let b = take(&layout.b);
    let a = take(&layout.a);
    let q = f.q_affine();
    let mut d = Decomposition {
        coefficients,
        zeta1: DifferentialForm::rational(DifferentialForm::function(a), q, cap_n),
        zeta2: DifferentialForm::rational(DifferentialForm::function(b), q, cap_n),
        residual: DifferentialForm::zero(2, 1),
        degree_bounds: bounds.to_vec(),
        pole_cap: cap_n,
        round,
        system,
    };
    d.residual = d.reassemble(f, basis)?.sub(alpha);
    if !d.residual.is_zero() {
        return Err(Error::Verification("re-expanded decomposition differs from the input".into()));
    }
    Ok(d)
}

/// `ω = dg + T ω₀` with `g, T` having poles along `V(P)` and `V(Q)`.
#[derive(Clone, Debug)]
pub struct ExactnessCertificate {
    pub g: DifferentialForm,
    pub t: DifferentialForm,
    pub valid: bool,
    /// Pole orders `(a, b)` of the denominators `P^a Q^b` of `g` and `T`; for an
    /// invalid certificate, the largest orders searched.
    pub pole_orders: (u32, u32),
}

/// Splits a primitive divisor as `P^i Q^j` (up to a constant).
fn pq_multiplicities(d: &Poly, f: &RationalFirstIntegral) -> Option<(u32, u32)> {
    let mut rest = d.clone();
    let mut count = |g: &Poly| {
        let mut k = 0;
        while let Some(r) = rest.div_exact(g).filter(|_| !rest.is_constant()) {
            rest = r;
            k += 1;
        }
        k
    };
    let i = count(f.p_affine());
    let j = count(f.q_affine());
    rest.is_constant().then_some((i, j))
}

/// Searches `(g, T) = (G, H) / (P^a Q^b)` with
/// `PQ dG − aQG dP − bPG dQ + H α₀ = ω_num P^{a+1−a₀} Q^{b+1−b₀}`,
/// raising `a, b` by one per round from the smallest admissible orders.
///
/// `valid = false` means that no certificate exists within the searched
/// orders and degrees.
pub fn is_relatively_exact(omega: &DifferentialForm, f: &RationalFirstIntegral, opts: &DecomposeOptions) -> Result<ExactnessCertificate> {
    if omega.degree() != 1 || omega.nvars() != 2 {
        return Err(Error::Invalid("exactness certificates need a 1-form in x, y".into()));
    }
    let (big_p, big_q) = (f.p_affine(), f.q_affine());
    let (a0, b0) = if omega.is_polynomial() {
        (0, 0)
    } else {
        let (i, j) = pq_multiplicities(omega.divisor(), f).ok_or_else(|| Error::Invalid("ω has poles outside V(P) ∪ V(Q)".into()))?;
        (i * omega.pole_order(), j * omega.pole_order())
    };
    let den0 = &big_p.pow(a0) * &big_q.pow(b0);
    let num = omega.numerator_over(&den0, 1).ok_or_else(|| Error::Invalid("ω has poles outside V(P) ∪ V(Q)".into()))?;
    let zero = |n| DifferentialForm::function(Poly::zero(n));
    let Some(dz) = num.iter().filter_map(Poly::degree).max() else {
        return Ok(ExactnessCertificate { g: zero(2), t: zero(2), valid: true, pole_orders: (0, 0) });
    };
    let (m, n) = (f.m() as i64, f.n() as i64);
    let alpha0 = alpha0_affine(f);
    let pq = big_p * big_q;
    let (dp, dq) = (big_p.gradient(), big_q.gradient());
    let mut last = (0, 0);
    for e in 0..opts.rounds.max(1) {
        let a = a0.max(1) - 1 + e;
        let b = b0.max(1) - 1 + e;
        last = (a, b);
        let lift = &big_p.pow(a + 1 - a0) * &big_q.pow(b + 1 - b0);
        let r = dz as i64 + m * (a + 1 - a0) as i64 + n * (b + 1 - b0) as i64;
        let slack = opts.degree_slack as i64;
        let gs = monomials_up_to(2, r - (m + n) + 1 + slack);
        let hs = monomials_up_to(2, r - (m + n - 1) + slack);
        let mut bld = Builder::new();
        let one = Rat::one();
        let wdp: Vec<Poly> = dp.iter().map(|d| (d * big_q).scale(&rat(-(a as i64)))).collect();
        let wdq: Vec<Poly> = dq.iter().map(|d| (d * big_p).scale(&rat(-(b as i64)))).collect();
        for g in &gs {
            let mut col = Vec::new();
            for i in 0..2 {
                let k = g.exp(i);
                if k > 0 {
                    bld.add(&mut col, i, &pq, &g.with_exp(i, k - 1), &rat(k as i64));
                }
                bld.add(&mut col, i, &wdp[i], g, &one);
                bld.add(&mut col, i, &wdq[i], g, &one);
            }
            bld.cols.push(col);
        }
        for h in &hs {
            let mut col = Vec::new();
            for (i, c) in alpha0.coeffs().iter().enumerate() {
                bld.add(&mut col, i, c, h, &one);
            }
            bld.cols.push(col);
        }
        let ncols = bld.cols.len();
        let cleared: Vec<Poly> = num.iter().map(|c| c * &lift).collect();
        let rhs = vec![bld.sparse(&cleared)];
        let (_, rows, rhs) = bld.finish(rhs);
        if rows.len() as u64 * ncols as u64 > opts.max_system_entries {
            break;
        }
        let Some(x) = linalg::solve_many(ncols, &rows, &rhs).pop().unwrap() else { continue };
        let mut gp = Poly::zero(2);
        let mut hp = Poly::zero(2);
        for (k, mono) in gs.iter().enumerate() {
            gp.add_term(mono.clone(), x[k].clone());
        }
        for (k, mono) in hs.iter().enumerate() {
            hp.add_term(mono.clone(), x[gs.len() + k].clone());
        }
        let den = &big_p.pow(a) * &big_q.pow(b);
        let g = DifferentialForm::rational(DifferentialForm::function(gp), &den, 1);
        let t = DifferentialForm::rational(DifferentialForm::function(hp), &den, 1);
        let rebuilt = g.d()?.add(&omega0(f).mul_function(&t));
        if !rebuilt.equals(omega) {
            return Err(Error::Verification("dg + Tω₀ differs from ω".into()));
        }
        return Ok(ExactnessCertificate { g, t, valid: true, pole_orders: (a, b) });
    }
    Ok(ExactnessCertificate { g: zero(2), t: zero(2), valid: false, pole_orders: last })
}

/// `ω = qF*(Q) dP₁ − pP₁ dF*(Q) − qQ₁ dF*(P) + pF*(P) dQ₁` for pulled-back data.
pub fn p1q1_form(f: &RationalFirstIntegral, morphism: &Morphism, p1: &Poly, q1: &Poly) -> DifferentialForm {
    let (fp, fq) = (morphism.pull(f.p_homogeneous()), morphism.pull(f.q_homogeneous()));
    let (p, q) = (rat(f.p() as i64), rat(f.q() as i64));
    let (dp1, dq1, dfp, dfq) = (p1.gradient(), q1.gradient(), fp.gradient(), fq.gradient());
    let coeffs = (0..3)
        .map(|i| {
            let mut c = (&fq * &dp1[i]).scale(&q);
            c -= &(p1 * &dfq[i]).scale(&p);
            c -= &(q1 * &dfp[i]).scale(&q);
            c += &(&fp * &dq1[i]).scale(&p);
            c
        })
        .collect();
    DifferentialForm::one_form(coeffs)
}

/// Recovers `(P₁, Q₁)` with `ω = p1q1_form(P₁, Q₁)` from a homogeneous polynomial
/// 1-form `ω` in `(x, y, z)`.
///
/// Solves `ω · F*(PQ) = F*(PQ) dB − B dF*(PQ) − A F*(α₀)` for `A, B` of degree
/// `(m+n)s`, then divides `B + qA = (p+q) F*(P) Q₁` and `B − pA = (p+q) F*(Q) P₁`.
/// `(P₁, Q₁)` is defined modulo `(F*(P), F*(Q))`; the representative returned
/// has `Q₁` reduced modulo `F*(Q)`.
pub fn extract_p1q1(omega: &DifferentialForm, f: &RationalFirstIntegral, morphism: &Morphism) -> Result<(Poly, Poly)> {
    if omega.degree() != 1 || omega.nvars() != 3 || !omega.is_polynomial() {
        return Err(Error::Invalid("extract_p1q1 needs a polynomial 1-form in x, y, z".into()));
    }
    if omega.is_zero() {
        return Ok((Poly::zero(3), Poly::zero(3)));
    }
    let (fp, fq) = (morphism.pull(f.p_homogeneous()), morphism.pull(f.q_homogeneous()));
    let (p, q) = (f.p() as i64, f.q() as i64);
    let pq = &fp * &fq;
    let dpq = pq.gradient();
    let (dfp, dfq) = (fp.gradient(), fq.gradient());
    let alpha0: Vec<Poly> = (0..3).map(|i| &(&fq * &dfp[i]).scale(&rat(q)) - &(&fp * &dfq[i]).scale(&rat(p))).collect();
    let deg = (f.m() + f.n()) * morphism.s();
    let unknowns = monomials_of_degree(3, deg);
    let one = Rat::one();
    let mut bld = Builder::new();
    for bm in &unknowns {
        let mut col = Vec::new();
        for i in 0..3 {
            let k = bm.exp(i);
            if k > 0 {
                bld.add(&mut col, i, &pq, &bm.with_exp(i, k - 1), &rat(k as i64));
            }
            bld.add(&mut col, i, &dpq[i], bm, &-one.clone());
        }
        bld.cols.push(col);
    }
    for am in &unknowns {
        let mut col = Vec::new();
        for (i, c) in alpha0.iter().enumerate() {
            bld.add(&mut col, i, c, am, &-one.clone());
        }
        bld.cols.push(col);
    }
    let ncols = bld.cols.len();
    let cleared: Vec<Poly> = omega.coeffs().iter().map(|c| c * &pq).collect();
    let rhs = vec![bld.sparse(&cleared)];
    let (_, rows, rhs) = bld.finish(rhs);
    let x = linalg::solve_many(ncols, &rows, &rhs)
        .pop()
        .unwrap()
        .ok_or_else(|| Error::Verification("no (A, B) with ω·F*(PQ) = F*(PQ)dB − B dF*(PQ) − A F*(α₀): not relatively exact".into()))?;
    let mut b = Poly::zero(3);
    let mut a = Poly::zero(3);
    for (k, mono) in unknowns.iter().enumerate() {
        b.add_term(mono.clone(), x[k].clone());
        a.add_term(mono.clone(), x[unknowns.len() + k].clone());
    }
    let s = rat(p + q).recip();
    let q1 = (&b + &a.scale(&rat(q))).div_exact(&fp).ok_or_else(|| Error::Verification("F*(P) does not divide B + qA".into()))?.scale(&s);
    let p1 = (&b - &a.scale(&rat(p))).div_exact(&fq).ok_or_else(|| Error::Verification("F*(Q) does not divide B − pA".into()))?.scale(&s);
    let (p1, q1) = canonical_p1q1(p1, q1, &fp, &fq);
    if !p1q1_form(f, morphism, &p1, &q1).equals(omega) {
        return Err(Error::Verification("recovered (P₁, Q₁) do not reproduce ω".into()));
    }
    Ok((p1, q1))
}

/// Subtracts the multiple `c·(F*(P), F*(Q))` that removes the leading monomial of `F*(Q)` from `Q₁`.
fn canonical_p1q1(p1: Poly, q1: Poly, fp: &Poly, fq: &Poly) -> (Poly, Poly) {
    let order = MonomialOrder::GradedRevLex;
    let (lm, lc) = fq.leading_term(&order).map(|(m, c)| (m.clone(), c.clone())).unwrap();
    let c = q1.coeff(&lm) / lc;
    if c.is_zero() {
        return (p1, q1);
    }
    (&p1 - &fp.scale(&c), &q1 - &fq.scale(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::sample_generic;
    use crate::periods::{critical_values, Tolerances};
    use crate::poly::Vars;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn instance() -> RationalFirstIntegral {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        sample_generic(3, 2, 3, 20, &mut rng).unwrap().0
    }

    fn xy(s: &str) -> Poly {
        Vars::new(&["x", "y"]).parse(s).unwrap()
    }

    #[test]
    fn module_dimension_matches_critical_point_count() {
        let f = instance();
        let module = relative_module(&f).unwrap();
        let crit = critical_values(&f, &Tolerances::default()).unwrap();
        assert_eq!(module.dimension, crit.count());
        assert_eq!(module.basis.len(), module.dimension);
        assert!(module.basis.iter().all(|m| m.nvars() == 2));
    }

    #[test]
    fn basis_forms_integrate_monomials() {
        let b = basis_from_monomials(&[Monomial::from_exponents(&[0, 0]), Monomial::from_exponents(&[1, 1])]).unwrap();
        assert_eq!(b.forms[0], DifferentialForm::one_form(vec![Poly::zero(2), xy("x")]));
        assert_eq!(b.forms[1], DifferentialForm::one_form(vec![Poly::zero(2), xy("1/2*x^2*y")]));
        assert_eq!(b.forms[1].d().unwrap(), DifferentialForm::area(xy("x*y")));
        assert_eq!(b.zero_degrees(), vec![1, 3]);
    }

    #[test]
    fn cusp_is_a_genericity_failure() {
        // P = y^2 - x^3 has a cusp: a non-isolated or wrong-count quotient
        let f = RationalFirstIntegral::from_affine(xy("y^2 - x^3"), xy("x^2 + 2*y^2 + 1"), 3, 2).unwrap();
        match relative_module(&f) {
            Err(Error::Genericity(_)) => {}
            Ok(m) => assert_ne!(m.dimension as u64, crate::foliation::milnor_f(3, 2).unwrap()),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn basis_elements_are_unit_vectors() {
        let f = instance();
        let basis = hf_basis(&relative_module(&f).unwrap()).unwrap();
        let all = decompose_many(&basis.forms, &f, &basis, &DecomposeOptions::default());
        for (j, d) in all.into_iter().enumerate() {
            let d = d.unwrap();
            for (i, c) in d.coefficients.iter().enumerate() {
                let expect = if i == j { Poly::one(1) } else { Poly::zero(1) };
                assert_eq!(c, &expect);
            }
            assert!(d.zeta1.is_zero() && d.zeta2.is_zero());
            assert!(d.residual.is_zero());
        }
    }

    #[test]
    fn exact_forms_have_zero_coordinates() {
        let f = instance();
        let basis = hf_basis(&relative_module(&f).unwrap()).unwrap();
        let g = xy("x^3*y - 2*x*y^2 + 7*y + 1");
        let d = decompose(&DifferentialForm::function(g.clone()).d().unwrap(), &f, &basis, &DecomposeOptions::default()).unwrap();
        assert!(d.coordinates_vanish());
        assert!(d.zeta1.is_zero());
        // ζ₂ is g up to the constant that d cannot see
        let shift = d.zeta2.sub(&DifferentialForm::function(g));
        assert!(shift.d().unwrap().is_zero());

        let fn_ = f.function();
        let fdf = fn_.d().unwrap().mul_function(&fn_);
        let d = decompose(&fdf, &f, &basis, &DecomposeOptions::default()).unwrap();
        assert!(d.coordinates_vanish());
        assert!(d.residual.is_zero());
    }

    #[test]
    fn decomposition_is_linear_on_the_span() {
        let f = instance();
        let basis = hf_basis(&relative_module(&f).unwrap()).unwrap();
        let opts = DecomposeOptions::default();
        let dg = DifferentialForm::function(xy("x^2*y + y^3")).d().unwrap();
        let a = basis.forms[0].add(&dg);
        let b = basis.forms[basis.len() - 1].scale(&rat(3));
        let (x, y) = (rat(2), rat(-5));
        let combo = a.scale(&x).add(&b.scale(&y));
        let out = decompose_many(&[a, b, combo], &f, &basis, &opts);
        let out: Vec<Decomposition> = out.into_iter().map(Result::unwrap).collect();
        for j in 0..basis.len() {
            let lhs = &out[2].coefficients[j];
            let rhs = &out[0].coefficients[j].scale(&x) + &out[1].coefficients[j].scale(&y);
            assert_eq!(lhs, &rhs);
        }
    }

    #[test]
    fn exactness_certificates() {
        let f = instance();
        let opts = DecomposeOptions::default();
        let q = f.q_affine().clone();
        let inv_q = DifferentialForm::rational(DifferentialForm::function(Poly::one(2)), &q, 1);
        let c = is_relatively_exact(&inv_q.d().unwrap(), &f, &opts).unwrap();
        assert!(c.valid);
        assert!(c.g.equals(&inv_q) && c.t.is_zero());

        let c = is_relatively_exact(&omega0(&f), &f, &opts).unwrap();
        assert!(c.valid);
        assert!(c.g.is_zero() && c.t.equals(&DifferentialForm::function(Poly::one(2))));

        let pq = f.p_affine() * f.q_affine();
        let a1 = DifferentialForm::rational(DifferentialForm::one_form(vec![Poly::zero(2), xy("x")]), &pq, 1);
        assert!(!is_relatively_exact(&a1, &f, &opts).unwrap().valid);
    }

    #[test]
    fn p1q1_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = RationalFirstIntegral::random(3, 2, 3, &mut rng).unwrap();
        let morphism = Morphism::random(2, 2, 10, &mut rng).unwrap();
        let v = Vars::new(&["x", "y", "z"]);
        let p1 = v.parse("x^6 - 2*x^3*y^2*z + y^5*z - 3*z^6").unwrap();
        let q1 = v.parse("x^4 + x*y*z^2 - 5*y^4").unwrap();
        let w = p1q1_form(&f, &morphism, &p1, &q1);
        let (p1r, q1r) = extract_p1q1(&w, &f, &morphism).unwrap();
        assert!(p1q1_form(&f, &morphism, &p1r, &q1r).equals(&w));
        let (cp, cq) = canonical_p1q1(p1, q1, &morphism.pull(f.p_homogeneous()), &morphism.pull(f.q_homogeneous()));
        assert_eq!((p1r, q1r), (cp, cq));

        let fp = morphism.pull(f.p_homogeneous());
        let fq = morphism.pull(f.q_homogeneous());
        assert!(p1q1_form(&f, &morphism, &fp, &fq).is_zero());
        let zero = DifferentialForm::zero(3, 1);
        assert_eq!(extract_p1q1(&zero, &f, &morphism).unwrap(), (Poly::zero(3), Poly::zero(3)));
    }
}
