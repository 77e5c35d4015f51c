//! Seeded fixtures shared by the acceptance run.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use foliation_kit::foliation::{monomials_of_degree, sample_generic, RationalFirstIntegral};
use foliation_kit::poly::{rat, Poly};
use foliation_kit::pullback::Morphism;

/// Random generic `f` of degrees `(m, n)`, resampled up to 20 times.
pub fn instance(m: u32, n: u32, seed: u64) -> RationalFirstIntegral {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_generic(m, n, 5, 20, &mut rng).expect("generic instance").0
}

/// `(f, F)` with `deg P, deg Q = 3, 2`, `f = P²/Q³` and `F` of degree 2.
pub fn pullback_instance(seed: u64) -> (RationalFirstIntegral, Morphism, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (f, _) = sample_generic(3, 2, 5, 20, &mut rng).expect("generic instance");
    let morphism = Morphism::random(2, 3, 20, &mut rng).expect("morphism");
    (f, morphism, rng)
}

/// Dense polynomial in `x, y` of degree `d` with coefficients in `[-3, 3]`.
pub fn random_poly2(d: u32, rng: &mut ChaCha8Rng) -> Poly {
    let terms = (0..=d).flat_map(|k| monomials_of_degree(2, k)).map(|m| (m, rat(rng.gen_range(-3..=3))));
    Poly::from_terms(2, terms)
}

/// Offset from `c` small against its distance to the other critical values and to `0`.
pub fn local_radius(c: Complex64, values: &[Complex64]) -> f64 {
    values.iter().map(|v| (v - c).norm()).filter(|d| *d > 1e-12).fold(c.norm(), f64::min)
}
