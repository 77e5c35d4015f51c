use nalgebra::DMatrix;
use num_complex::Complex64;

/// Roots of `Σ c_k z^k` (ascending coefficients) from the eigenvalues of the
/// companion matrix, each polished by a few Newton steps.
pub fn poly_roots_complex(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    // zero roots split off exactly
    let zeros = c.iter().take_while(|x| x.norm() == 0.0).count();
    let c = &c[zeros..];
    let deg = c.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if deg == 0 {
        return roots;
    }
    let lead = c[deg];
    let mut m = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lead;
    }
    let eig = m.schur().eigenvalues().expect("complex Schur form is triangular");
    for z in eig.iter() {
        roots.push(newton_polish(c, *z));
    }
    roots
}

pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    poly_roots_complex(&c)
}

pub(crate) fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn newton_polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    let (mut best, mut best_res) = (z, horner(c, z).0.norm());
    for _ in 0..8 {
        let (p, dp) = horner(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        z -= p / dp;
        let r = horner(c, z).0.norm();
        if r < best_res {
            best = z;
            best_res = r;
        } else {
            break;
        }
    }
    best
}
