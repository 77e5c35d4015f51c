//! Exact linear systems over the rationals.
//!
//! [`solve_many`] eliminates modulo primes below 2^26.5 in double precision
//! (so that `a + f·b` stays exact below 2^53), lifts the pivot solution by
//! Chinese remaindering and rational reconstruction, and accepts a candidate
//! only after an exact check of every equation over `Q`. [`solve_dense`] is a
//! plain fraction Gauss–Jordan used for small systems and as a test oracle.
//!
//! Free variables are set to zero, so callers control which solution is
//! returned through the column order: earlier columns are preferred as pivots.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::poly::Rat;

/// Sparse system `A x = b` with rational entries.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub ncols: usize,
    pub rows: Vec<Vec<(usize, Rat)>>,
    pub rhs: Vec<Rat>,
}

impl LinearSystem {
    pub fn new(ncols: usize) -> Self {
        LinearSystem { ncols, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<(usize, Rat)>, rhs: Rat) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// `A x − b`, row by row.
    pub fn residual(&self, x: &[Rat]) -> Vec<Rat> {
        residual(&self.rows, &self.rhs, x)
    }

    pub fn is_solution(&self, x: &[Rat]) -> bool {
        self.residual(x).iter().all(Zero::is_zero)
    }
}

fn residual(rows: &[Vec<(usize, Rat)>], rhs: &[Rat], x: &[Rat]) -> Vec<Rat> {
    rows.par_iter()
        .zip(rhs.par_iter())
        .map(|(row, b)| {
            let mut acc = -b.clone();
            for (j, a) in row {
                if !x[*j].is_zero() {
                    acc += a * &x[*j];
                }
            }
            acc
        })
        .collect()
}

/// Largest prime modulus: `p² + p < 2^53`.
const PRIME_CEILING: u64 = 94_906_249;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    true
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Descending primes below the ceiling.
fn primes() -> impl Iterator<Item = u64> {
    (1..PRIME_CEILING / 2).rev().map(|k| 2 * k + 1).filter(|&n| is_prime(n))
}

#[derive(Clone, Copy)]
struct Field {
    p: u64,
    pf: f64,
    pinv: f64,
}

impl Field {
    fn new(p: u64) -> Self {
        Field { p, pf: p as f64, pinv: 1.0 / p as f64 }
    }

    fn inv(&self, a: f64) -> f64 {
        powmod(a as u64, self.p - 2, self.p) as f64
    }

    fn mul(&self, a: f64, b: f64) -> f64 {
        (a as u64 * b as u64 % self.p) as f64
    }

    fn from_bigint(&self, x: &BigInt) -> f64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().unwrap() as f64
    }
}

/// `row ← row + f·piv (mod p)` on canonical residues.
#[inline(always)]
fn axpy_portable(row: &mut [f64], piv: &[f64], f: f64, pf: f64, pinv: f64) {
    // round-to-nearest by the 1.5·2^52 shift; the correction below absorbs the ±1 error
    const SHIFT: f64 = 6_755_399_441_055_744.0;
    for (x, &y) in row.iter_mut().zip(piv) {
        let v = f * y + *x;
        let q = (v * pinv + SHIFT) - SHIFT;
        let r = v - q * pf;
        let r = if r < 0.0 { r + pf } else { r };
        *x = if r >= pf { r - pf } else { r };
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2,fma")]
unsafe fn axpy_avx2(row: &mut [f64], piv: &[f64], f: f64, pf: f64, pinv: f64) {
    for (x, &y) in row.iter_mut().zip(piv) {
        let v = f.mul_add(y, *x);
        let q = (v * pinv).floor();
        let r = (-q).mul_add(pf, v);
        let r = if r < 0.0 { r + pf } else { r };
        *x = if r >= pf { r - pf } else { r };
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f,avx2,fma")]
unsafe fn axpy_avx512(row: &mut [f64], piv: &[f64], f: f64, pf: f64, pinv: f64) {
    for (x, &y) in row.iter_mut().zip(piv) {
        let v = f.mul_add(y, *x);
        let q = (v * pinv).floor();
        let r = (-q).mul_add(pf, v);
        let r = if r < 0.0 { r + pf } else { r };
        *x = if r >= pf { r - pf } else { r };
    }
}

fn axpy(row: &mut [f64], piv: &[f64], f: f64, field: &Field) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx512f") && std::arch::is_x86_feature_detected!("fma") {
            // SAFETY: the required CPU features were just detected.
            unsafe { axpy_avx512(row, piv, f, field.pf, field.pinv) };
            return;
        }
        if std::arch::is_x86_feature_detected!("avx2") && std::arch::is_x86_feature_detected!("fma") {
            // SAFETY: the required CPU features were just detected.
            unsafe { axpy_avx2(row, piv, f, field.pf, field.pinv) };
            return;
        }
    }
    axpy_portable(row, piv, f, field.pf, field.pinv)
}

/// Integer rows: each row and its right-hand sides scaled by the lcm of denominators.
struct IntSystem {
    ncols: usize,
    rows: Vec<Vec<(usize, BigInt)>>,
    rhs: Vec<Vec<BigInt>>,
}

impl IntSystem {
    fn new(ncols: usize, rows: &[Vec<(usize, Rat)>], rhs: &[Vec<Rat>]) -> Self {
        let (rows, rhs) = rows
            .par_iter()
            .enumerate()
            .map(|(i, row)| {
                let mut l = BigInt::one();
                for (_, a) in row {
                    l = l.lcm(a.denom());
                }
                for b in rhs {
                    l = l.lcm(b[i].denom());
                }
                let lr = Rat::from_integer(l);
                let r: Vec<(usize, BigInt)> = row.iter().map(|(j, a)| (*j, (a * &lr).to_integer())).collect();
                let b: Vec<BigInt> = rhs.iter().map(|b| (&b[i] * &lr).to_integer()).collect();
                (r, b)
            })
            .unzip();
        IntSystem { ncols, rows, rhs }
    }

    /// Dense rows `[A | b_k for k in rhs_sel]` mod `p`, restricted to `rows` and optionally to `cols`.
    fn dense_mod(&self, field: &Field, rows: &[usize], cols: Option<&[usize]>, rhs_sel: &[usize]) -> Vec<Vec<f64>> {
        let width = cols.map(|c| c.len()).unwrap_or(self.ncols);
        let colmap: Option<Vec<Option<usize>>> = cols.map(|c| {
            let mut m = vec![None; self.ncols];
            for (k, &j) in c.iter().enumerate() {
                m[j] = Some(k);
            }
            m
        });
        rows.par_iter()
            .map(|&i| {
                let mut v = vec![0f64; width + rhs_sel.len()];
                for (j, a) in &self.rows[i] {
                    let k = match &colmap {
                        Some(m) => match m[*j] {
                            Some(k) => k,
                            None => continue,
                        },
                        None => *j,
                    };
                    v[k] = ((v[k] as u64 + field.from_bigint(a) as u64) % field.p) as f64;
                }
                for (t, &k) in rhs_sel.iter().enumerate() {
                    v[width + t] = field.from_bigint(&self.rhs[i][k]);
                }
                v
            })
            .collect()
    }
}

struct ModEchelon {
    pivots: Vec<usize>,
    pivot_rows: Vec<usize>,
    consistent: Vec<bool>,
    /// One solution vector (length `width`) per right-hand side, free variables zero.
    solutions: Vec<Vec<u64>>,
}

/// Forward elimination on `[A | B]` mod `p` (pivots only among the first `width`
/// columns), then back substitution for each consistent right-hand side.
fn echelon_mod(mut m: Vec<Vec<f64>>, width: usize, field: &Field) -> ModEchelon {
    let nrows = m.len();
    let total = m.first().map(Vec::len).unwrap_or(width);
    let nrhs = total - width;
    let mut ids: Vec<usize> = (0..nrows).collect();
    // upper bound on the last nonzero coefficient column of each row; pivots with
    // the shortest span keep the near-banded structure and limit fill-in
    let mut last: Vec<usize> = m.iter().map(|row| row[..width].iter().rposition(|&v| v != 0.0).unwrap_or(0)).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).filter(|&i| m[i][c] != 0.0).min_by_key(|&i| last[i]) else { continue };
        m.swap(r, pr);
        ids.swap(r, pr);
        last.swap(r, pr);
        let inv = field.inv(m[r][c]);
        let end = last[r].max(c) + 1;
        let (head, rhs) = m[r].split_at_mut(width);
        for v in head[c..end].iter_mut().chain(rhs.iter_mut()) {
            *v = field.mul(*v, inv);
        }
        let (top, bottom) = m.split_at_mut(r + 1);
        let prow = &top[r];
        let span = end;
        bottom.par_iter_mut().zip(last[r + 1..].par_iter_mut()).for_each(|(row, l)| {
            let f = row[c];
            if f != 0.0 {
                let g = field.pf - f;
                axpy(&mut row[c..span], &prow[c..span], g, field);
                axpy(&mut row[width..], &prow[width..], g, field);
                *l = (*l).max(span - 1);
            }
        });
        pivots.push(c);
        r += 1;
    }
    let consistent: Vec<bool> = (0..nrhs).map(|k| m[r..].iter().all(|row| row[width + k] == 0.0)).collect();
    let p = field.p;
    let solutions = (0..nrhs)
        .map(|k| {
            let mut x = vec![0u64; width];
            if consistent[k] {
                for i in (0..r).rev() {
                    let c = pivots[i];
                    let mut acc = m[i][width + k] as u64;
                    for (j, &v) in m[i].iter().enumerate().take(width).skip(c + 1) {
                        if v != 0.0 && x[j] != 0 {
                            acc = (acc + (p - v as u64) * x[j] % p) % p;
                        }
                    }
                    x[c] = acc;
                }
            }
            x
        })
        .collect();
    ModEchelon { pivots, pivot_rows: ids[..r].to_vec(), consistent, solutions }
}

/// Rational `a/b ≡ x (mod m)` with `|a|, b ≤ sqrt(m/2)`.
fn rational_reconstruction(x: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (num, den) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    if num.gcd(&den) != BigInt::one() {
        return None;
    }
    Some(Rat::new(num, den))
}

/// Solves `A x = b` exactly. Returns `None` when the system is inconsistent.
pub fn solve(sys: &LinearSystem) -> Option<Vec<Rat>> {
    solve_many(sys.ncols, &sys.rows, std::slice::from_ref(&sys.rhs)).pop().unwrap()
}

/// Solves `A x = b_k` for every right-hand side `b_k` (given as a column,
/// one entry per row) with a single elimination. `None` marks inconsistent ones.
///
/// Inconsistency is decided modulo two primes; solutions are only returned
/// after exact verification.
pub fn solve_many(ncols: usize, rows: &[Vec<(usize, Rat)>], rhs: &[Vec<Rat>]) -> Vec<Option<Vec<Rat>>> {
    if rows.is_empty() {
        return rhs.iter().map(|_| Some(vec![Rat::zero(); ncols])).collect();
    }
    let isys = IntSystem::new(ncols, rows, rhs);
    let all_rows: Vec<usize> = (0..rows.len()).collect();
    let all_rhs: Vec<usize> = (0..rhs.len()).collect();
    let mut ps = primes();

    let f0 = Field::new(ps.next().unwrap());
    let mut e = echelon_mod(isys.dense_mod(&f0, &all_rows, None, &all_rhs), ncols, &f0);
    let mut field = f0;
    if e.consistent.iter().any(|c| !c) {
        // a second prime confirms inconsistency; a right-hand side consistent for
        // either prime is consistent over Q unless the first prime was unlucky
        let f1 = Field::new(ps.next().unwrap());
        let e1 = echelon_mod(isys.dense_mod(&f1, &all_rows, None, &all_rhs), ncols, &f1);
        if e1.pivots.len() > e.pivots.len() || e1.consistent.iter().filter(|c| **c).count() > e.consistent.iter().filter(|c| **c).count() {
            e = e1;
            field = f1;
        }
    }
    let consistent: Vec<usize> = (0..rhs.len()).filter(|&k| e.consistent[k]).collect();
    let mut out: Vec<Option<Vec<Rat>>> = vec![None; rhs.len()];
    if consistent.is_empty() {
        return out;
    }
    let lifted = lift(rows, rhs, &isys, &e, &consistent, field, ps);
    for (k, x) in consistent.into_iter().zip(lifted) {
        out[k] = x;
    }
    out
}

fn lift(
    rows: &[Vec<(usize, Rat)>],
    rhs: &[Vec<Rat>],
    isys: &IntSystem,
    first: &ModEchelon,
    which: &[usize],
    f0: Field,
    mut ps: impl Iterator<Item = u64>,
) -> Vec<Option<Vec<Rat>>> {
    let pivots = &first.pivots;
    let prow = &first.pivot_rows;
    let mut modulus = BigInt::from(f0.p);
    let mut residues: Vec<Vec<BigInt>> =
        which.iter().map(|&k| pivots.iter().map(|&c| BigInt::from(first.solutions[k][c])).collect()).collect();
    let mut done: Vec<Option<Vec<Rat>>> = vec![None; which.len()];
    let mut pending: Vec<usize> = (0..which.len()).collect();
    let mut rounds = 0usize;
    while !pending.is_empty() {
        rounds += 1;
        pending.retain(|&t| {
            let Some(vals) = residues[t].iter().map(|r| rational_reconstruction(r, &modulus)).collect::<Option<Vec<_>>>() else {
                return true;
            };
            let mut x = vec![Rat::zero(); isys.ncols];
            for (&c, v) in pivots.iter().zip(vals) {
                x[c] = v;
            }
            if residual(rows, &rhs[which[t]], &x).iter().all(Zero::is_zero) {
                done[t] = Some(x);
                false
            } else {
                true
            }
        });
        if pending.is_empty() || rounds > 1 << 14 {
            break;
        }
        let Some(p) = ps.next() else { break };
        let field = Field::new(p);
        let sel: Vec<usize> = pending.iter().map(|&t| which[t]).collect();
        let sub = isys.dense_mod(&field, prow, Some(pivots), &sel);
        let e = echelon_mod(sub, pivots.len(), &field);
        if e.pivots.len() != pivots.len() {
            // unlucky prime for this pivot structure
            continue;
        }
        let pb = BigInt::from(p);
        let inv = BigInt::from(powmod(modulus.mod_floor(&pb).to_u64().unwrap(), p - 2, p));
        for (slot, &t) in pending.iter().enumerate() {
            for (k, r) in residues[t].iter_mut().enumerate() {
                let s = BigInt::from(e.solutions[slot][k]);
                let d = ((&s - &*r) * &inv).mod_floor(&pb);
                *r = &*r + &modulus * d;
            }
        }
        modulus *= pb;
    }
    done
}

/// Fraction Gauss–Jordan elimination; `None` when inconsistent.
pub fn solve_dense(sys: &LinearSystem) -> Option<Vec<Rat>> {
    let n = sys.ncols;
    let mut m: Vec<Vec<Rat>> = sys
        .rows
        .iter()
        .zip(&sys.rhs)
        .map(|(row, b)| {
            let mut v = vec![Rat::zero(); n + 1];
            for (j, a) in row {
                v[*j] += a;
            }
            v[n] = b.clone();
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (k, &c) in pivots.iter().enumerate() {
        x[c] = m[k][n].clone();
    }
    Some(x)
}

/// Rank of a rational matrix given as dense rows (the larger of two modular ranks).
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    if rows.is_empty() || ncols == 0 {
        return 0;
    }
    let sparse: Vec<Vec<(usize, Rat)>> =
        rows.iter().map(|r| r.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(j, a)| (j, a.clone())).collect()).collect();
    let isys = IntSystem::new(ncols, &sparse, &[]);
    let ids: Vec<usize> = (0..rows.len()).collect();
    primes()
        .take(2)
        .map(|p| {
            let field = Field::new(p);
            echelon_mod(isys.dense_mod(&field, &ids, None, &[]), ncols, &field).pivots.len()
        })
        .max()
        .unwrap()
}
