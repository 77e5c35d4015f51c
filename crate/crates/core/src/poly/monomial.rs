use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Exponent vector, one entry per ambient variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    /// The monomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd_is_one(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Copy with the exponent of variable `i` replaced.
    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut m = self.clone();
        m.0[i] = e;
        m
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Admissible monomial orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Total degree, ties broken lexicographically with variable 0 largest.
    GradedLex,
    /// Total degree, ties broken by the reverse-lex rule (smallest last exponent wins).
    GradedRevLex,
    /// The listed variables form a block compared first by graded-reverse-lex;
    /// the remaining variables are compared afterwards, also graded-reverse-lex.
    BlockElimination { eliminate: Vec<usize> },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GradedLex => grlex(a.exponents(), b.exponents()),
            MonomialOrder::GradedRevLex => grevlex(a.exponents(), b.exponents()),
            MonomialOrder::BlockElimination { eliminate } => {
                let (a, b) = (a.exponents(), b.exponents());
                let in_block = |i: &usize| eliminate.contains(i);
                let deg = |m: &[u32], inside: bool| -> u32 {
                    m.iter().enumerate().filter(|(i, _)| in_block(i) == inside).map(|(_, e)| e).sum()
                };
                let revlex = |inside: bool| -> Ordering {
                    for i in (0..a.len()).rev().filter(|i| in_block(i) == inside) {
                        if a[i] != b[i] {
                            return b[i].cmp(&a[i]);
                        }
                    }
                    Ordering::Equal
                };
                deg(a, true)
                    .cmp(&deg(b, true))
                    .then_with(|| revlex(true))
                    .then_with(|| deg(a, false).cmp(&deg(b, false)))
                    .then_with(|| revlex(false))
            }
        }
    }
}

fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}
