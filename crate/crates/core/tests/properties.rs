use foliation_kit::brieskorn::{decompose_many, hf_basis, is_relatively_exact, relative_module, DecomposeOptions};
use foliation_kit::foliation::{alpha0, euler_check, monomials_of_degree, omega0, sample_generic, RationalFirstIntegral};
use foliation_kit::groebner::{buchberger, Ideal};
use foliation_kit::periods::{critical_values, loop_integral, transport_loop, vanishing_loop, Tolerances};
use foliation_kit::poly::{rat, DifferentialForm, MonomialOrder, Poly, Vars};
use foliation_kit::pullback::{omega_w, DeformationDirection, Morphism};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn poly_from(nvars: usize, d: u32, coeffs: &[i64]) -> Poly {
    let monos = (0..=d).flat_map(|k| monomials_of_degree(nvars, k));
    Poly::from_terms(nvars, monos.zip(coeffs.iter()).map(|(m, c)| (m, rat(*c))))
}

/// Polynomial in `nvars` variables of degree at most `d` with small coefficients.
fn poly(nvars: usize, d: u32) -> impl Strategy<Value = Poly> {
    let len: usize = (0..=d).map(|k| monomials_of_degree(nvars, k).len()).sum();
    prop::collection::vec(-4i64..=4, len).prop_map(move |c| poly_from(nvars, d, &c))
}

fn one_form(nvars: usize, d: u32) -> impl Strategy<Value = DifferentialForm> {
    prop::collection::vec(poly(nvars, d), nvars).prop_map(DifferentialForm::one_form)
}

fn generic(seed: u64) -> RationalFirstIntegral {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_generic(3, 2, 3, 20, &mut rng).unwrap().0
}

struct Shared {
    f: RationalFirstIntegral,
    basis: foliation_kit::brieskorn::BrieskornBasis,
}

fn shared() -> &'static Shared {
    static CELL: OnceLock<Shared> = OnceLock::new();
    CELL.get_or_init(|| {
        let f = generic(1);
        let basis = hf_basis(&relative_module(&f).unwrap()).unwrap();
        Shared { f, basis }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(g in poly(3, 4), h in poly(2, 5)) {
        let dg = DifferentialForm::function(g).d().unwrap();
        prop_assert!(dg.d().unwrap().is_zero());
        prop_assert!(DifferentialForm::function(h).d().unwrap().d().unwrap().is_zero());
    }

    #[test]
    fn wedge_is_bilinear_and_anticommutative(a in one_form(3, 2), b in one_form(3, 2), c in one_form(3, 2), k in -5i64..=5) {
        let ab = a.wedge(&b).unwrap();
        prop_assert!(ab.add(&b.wedge(&a).unwrap()).is_zero());
        prop_assert!(a.wedge(&a).unwrap().is_zero());
        let lhs = a.scale(&rat(k)).add(&c).wedge(&b).unwrap();
        let rhs = ab.scale(&rat(k)).add(&c.wedge(&b).unwrap());
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn pullback_commutes_with_d(w in one_form(2, 3), u in poly(2, 2), v in poly(2, 2)) {
        let images = [u, v];
        let lhs = w.pullback(&images).unwrap().d().unwrap();
        let rhs = w.d().unwrap().pullback(&images).unwrap();
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn rational_pullback_commutes_with_d(w in one_form(2, 2), den in poly(2, 2), u in poly(2, 2), v in poly(2, 2)) {
        prop_assume!(!den.is_zero() && !den.substitute(&[u.clone(), v.clone()]).is_zero());
        let w = DifferentialForm::rational(w, &den, 1);
        let images = [u, v];
        let lhs = w.pullback(&images).unwrap().d().unwrap();
        let rhs = w.d().unwrap().pullback(&images).unwrap();
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn print_parse_round_trip(p in poly(3, 4), den in 1i64..=9) {
        let p = p.scale(&(rat(1) / rat(den)));
        let v = Vars::new(&["x", "y", "z"]);
        let text = v.format(&p);
        prop_assert_eq!(v.parse(&text).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_form_decides_membership(g1 in poly(2, 2), g2 in poly(2, 2), h1 in poly(2, 2), h2 in poly(2, 2), r in poly(2, 3)) {
        prop_assume!(!g1.is_zero() && !g2.is_zero());
        let order = MonomialOrder::GradedRevLex;
        let gb = buchberger(&Ideal::new(vec![g1.clone(), g2.clone()], order.clone()));
        let member = &(&h1 * &g1) + &(&h2 * &g2);
        prop_assert!(gb.contains(&member));
        prop_assert!(gb.normal_form(&member).is_zero());
        // normal forms are unchanged by adding ideal elements
        prop_assert_eq!(gb.normal_form(&(&r + &member)), gb.normal_form(&r));
        // the normal form of r is in standard form with respect to the basis
        let nf = gb.normal_form(&r);
        let leads = gb.leading_monomials();
        prop_assert!(nf.terms().all(|(m, _)| !leads.iter().any(|l| l.divides(m))));
    }

    #[test]
    fn reduced_basis_is_presentation_independent(g1 in poly(2, 2), g2 in poly(2, 2), k in -3i64..=3, h in poly(2, 1)) {
        prop_assume!(!g1.is_zero() && !g2.is_zero());
        let order = MonomialOrder::GradedRevLex;
        let a = buchberger(&Ideal::new(vec![g1.clone(), g2.clone()], order.clone()));
        // same ideal, other generators and another order of listing
        let g2b = &g2 + &(&h * &g1);
        let g1b = &g1 + &g2b.scale(&rat(k));
        let b = buchberger(&Ideal::new(vec![g2b, g1b, g1], order));
        prop_assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn alpha0_is_pq_times_omega0(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, n) = [(3, 2), (4, 3), (4, 2)][(seed % 3) as usize];
        let f = RationalFirstIntegral::random(m, n, 4, &mut rng).unwrap();
        let pq = f.p_affine() * f.q_affine();
        let lhs = omega0(&f).mul_poly(&pq);
        let a0 = foliation_kit::foliation::alpha0_affine(&f);
        prop_assert!(lhs.equals(&a0));
        prop_assert!(euler_check(&alpha0(&f)).unwrap());
    }

    #[test]
    fn omega_w_is_euler_and_linear(seed in 0u64..1000, x in -4i64..=4, y in -4i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = RationalFirstIntegral::random(3, 2, 4, &mut rng).unwrap();
        let morphism = Morphism::random(2, 3, 20, &mut rng).unwrap();
        let a = f.m() + f.n() - 2;
        let u = DeformationDirection::random(2, a, 3, true, &mut rng);
        let v = DeformationDirection::random(2, a, 3, true, &mut rng);
        let a0 = alpha0(&f);
        let wu = omega_w(&morphism, &u, &a0).unwrap();
        prop_assert!(euler_check(&wu).unwrap());
        let (x, y) = (rat(x), rat(y));
        let combo = DeformationDirection {
            f1: [0, 1, 2].map(|i| &u.f1[i].scale(&x) + &v.f1[i].scale(&y)),
            alpha1: Some(u.alpha1.as_ref().unwrap().scale(&x).add(&v.alpha1.as_ref().unwrap().scale(&y))),
        };
        let lhs = omega_w(&morphism, &combo, &a0).unwrap();
        let rhs = wu.scale(&x).add(&omega_w(&morphism, &v, &a0).unwrap().scale(&y));
        prop_assert!(lhs.equals(&rhs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn decomposition_round_trip_and_linearity(coeffs in prop::collection::vec(-3i64..=3, 7), g in poly(2, 3)) {
        let Shared { f, basis } = shared();
        let opts = DecomposeOptions::default();
        let mut combo = DifferentialForm::function(g).d().unwrap();
        for (c, w) in coeffs.iter().zip(&basis.forms) {
            combo = combo.add(&w.scale(&rat(*c)));
        }
        let d = decompose_many(std::slice::from_ref(&combo), f, basis, &opts).pop().unwrap().unwrap();
        prop_assert!(d.residual.is_zero());
        prop_assert!(d.reassemble(f, basis).unwrap().equals(&combo));
        for (j, c) in d.coefficients.iter().enumerate() {
            let expect = coeffs.get(j).copied().unwrap_or(0);
            prop_assert_eq!(c, &Poly::constant(1, rat(expect)));
        }
    }

    #[test]
    fn exact_plus_multiple_of_omega0_is_certified(g in poly(2, 3), t in poly(2, 1)) {
        let Shared { f, .. } = shared();
        let w = DifferentialForm::function(g).d().unwrap().add(&omega0(f).mul_poly(&t));
        let c = is_relatively_exact(&w, f, &DecomposeOptions::default()).unwrap();
        prop_assert!(c.valid);
        let rebuilt = c.g.d().unwrap().add(&omega0(f).mul_function(&c.t));
        prop_assert!(rebuilt.equals(&w));
    }
}

struct LoopData {
    f: RationalFirstIntegral,
    values: Vec<Complex64>,
    loops: Vec<foliation_kit::periods::FiberLoop>,
}

fn loops() -> &'static LoopData {
    static CELL: OnceLock<LoopData> = OnceLock::new();
    CELL.get_or_init(|| {
        let f = generic(8);
        let tol = Tolerances::default();
        let data = critical_values(&f, &tol).unwrap();
        let values: Vec<Complex64> = data.points.iter().map(|c| c.value).collect();
        let loops = data
            .points
            .iter()
            .filter_map(|c| {
                let r = values.iter().map(|v| (v - c.value).norm()).filter(|d| *d > 1e-12).fold(c.value.norm(), f64::min);
                vanishing_loop(&f, c, c.value + Complex64::new(0.01, 0.01) * r, &tol).ok()
            })
            .collect();
        LoopData { f, values, loops }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn loop_integral_is_linear(a in one_form(2, 3), b in one_form(2, 3), x in -3i64..=3, idx in 0usize..16) {
        let LoopData { loops, .. } = loops();
        prop_assume!(!loops.is_empty());
        let g = &loops[idx % loops.len()];
        let ia = loop_integral(&a, g).unwrap().value;
        let ib = loop_integral(&b, g).unwrap().value;
        let ic = loop_integral(&a.scale(&rat(x)).add(&b), g).unwrap().value;
        let expect = ia * x as f64 + ib;
        prop_assert!((ic - expect).norm() <= 1e-9 * (1.0 + ia.norm() * x.abs() as f64 + ib.norm()));
    }

    #[test]
    fn loop_integral_is_homotopy_invariant(w in one_form(2, 3), idx in 0usize..16, angle in 0.0f64..std::f64::consts::TAU) {
        // out and back along a segment inside a disc free of critical values
        let LoopData { f, values, loops } = loops();
        prop_assume!(!loops.is_empty());
        let tol = Tolerances::default();
        let g = &loops[idx % loops.len()];
        let clearance = values.iter().map(|v| (v - g.t).norm()).fold(f64::INFINITY, f64::min);
        let step = Complex64::from_polar(0.3 * clearance, angle);
        let there = transport_loop(f, g, g.t + step, &tol).unwrap();
        let back = transport_loop(f, &there, g.t, &tol).unwrap();
        let i0 = loop_integral(&w, g).unwrap();
        let i1 = loop_integral(&w, &back).unwrap();
        // equal up to the quadrature error each integral reports
        prop_assert!((i0.value - i1.value).norm() <= 2.0 * (i0.error + i1.error) + 1e-9 * (1.0 + i0.value.norm()));
    }
}
