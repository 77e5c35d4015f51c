//! Buchberger's algorithm over the rationals.
//!
//! Polynomials are processed as integer-coefficient term lists sorted by the
//! active order; every reduction step is fraction free and followed by
//! content removal. Pairs are selected by the normal strategy (smallest lcm
//! first) and pruned with the Gebauer–Möller update, which subsumes
//! Buchberger's coprime and chain criteria.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Poly, Rat};

/// Generators of a polynomial ideal together with the order used to study it.
#[derive(Clone, Debug)]
pub struct Ideal {
    pub generators: Vec<Poly>,
    pub order: MonomialOrder,
}

impl Ideal {
    pub fn new(generators: Vec<Poly>, order: MonomialOrder) -> Self {
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { generators, order }
    }

    pub fn nvars(&self) -> Option<usize> {
        self.generators.first().map(Poly::nvars)
    }
}

/// Reduced, monic Gröbner basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    elements: Vec<Poly>,
    order: MonomialOrder,
    nvars: usize,
}

/// Monomials outside the leading-term ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardMonomialBasis {
    pub monomials: Vec<Monomial>,
}

impl StandardMonomialBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

// ---------------------------------------------------------------------------
// integer term lists

#[derive(Clone, Debug)]
struct IPoly {
    terms: Vec<(Monomial, BigInt)>,
}

impl IPoly {
    fn from_poly(p: &Poly, order: &MonomialOrder) -> IPoly {
        let prim = p.primitive(order);
        let mut terms: Vec<(Monomial, BigInt)> = prim.terms().map(|(m, c)| (m.clone(), c.to_integer())).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        IPoly { terms }
    }

    fn to_poly(&self, nvars: usize) -> Poly {
        Poly::from_terms(nvars, self.terms.iter().map(|(m, c)| (m.clone(), Rat::from_integer(c.clone()))))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    /// `a * self - b * m * g`, all term lists sorted descending.
    fn combine(&self, a: &BigInt, b: &BigInt, m: &Monomial, g: &IPoly, order: &MonomialOrder, skip: usize) -> IPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = skip;
        let mut j = 0;
        let shifted: Vec<(Monomial, &BigInt)> = g.terms.iter().map(|(gm, gc)| (gm.mul(m), gc)).collect();
        while i < self.terms.len() || j < shifted.len() {
            let ord = if i == self.terms.len() {
                Ordering::Less
            } else if j == shifted.len() {
                Ordering::Greater
            } else {
                order.cmp(&self.terms[i].0, &shifted[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push((self.terms[i].0.clone(), a * &self.terms[i].1));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((shifted[j].0.clone(), -(b * shifted[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a * &self.terms[i].1 - b * shifted[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        IPoly { terms: out }
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn make_primitive(&mut self) -> BigInt {
        let mut g = self.content();
        if g.is_zero() {
            return BigInt::one();
        }
        if self.lc().is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for t in self.terms.iter_mut() {
                t.1 = &t.1 / &g;
            }
        }
        g
    }
}

/// Fully reduces `p` by `basis`. Returns `(r, s)` with `s * p ≡ r` modulo the ideal,
/// where `s` is a nonzero integer scale accumulated by the fraction-free steps.
fn reduce(p: &IPoly, basis: &[&IPoly], order: &MonomialOrder) -> (IPoly, Rat) {
    let mut scale = Rat::one();
    let mut cur = p.clone();
    let mut done: Vec<(Monomial, BigInt)> = Vec::new();
    let mut pos = 0usize;
    let mut steps = 0usize;
    while pos < cur.terms.len() {
        let (m, c) = (&cur.terms[pos].0, &cur.terms[pos].1);
        let divisor = basis.iter().find(|g| g.lm().divides(m));
        match divisor {
            None => {
                pos += 1;
            }
            Some(g) => {
                let q = g.lm().quotient_of(m).expect("divides");
                let gcd = c.gcd(g.lc());
                let a = g.lc() / &gcd;
                let b = c / &gcd;
                // terms before `pos` are irreducible and get scaled by `a`
                for t in cur.terms[..pos].iter_mut() {
                    t.1 = &t.1 * &a;
                }
                let head: Vec<(Monomial, BigInt)> = cur.terms[..pos].to_vec();
                let tail = cur.combine(&a, &b, &q, g, order, pos);
                let mut terms = head;
                terms.extend(tail.terms);
                cur = IPoly { terms };
                scale *= Rat::from_integer(a);
                steps += 1;
                if steps.is_multiple_of(4) || pos == 0 {
                    let g = cur.content();
                    if !g.is_zero() && !g.is_one() {
                        for t in cur.terms.iter_mut() {
                            t.1 = &t.1 / &g;
                        }
                        scale /= Rat::from_integer(g);
                    }
                }
            }
        }
    }
    done.extend(cur.terms);
    let mut r = IPoly { terms: done };
    let g = r.content();
    if !g.is_zero() && !g.is_one() {
        for t in r.terms.iter_mut() {
            t.1 = &t.1 / &g;
        }
        scale /= Rat::from_integer(g);
    }
    (r, scale)
}

fn spoly(f: &IPoly, g: &IPoly, order: &MonomialOrder) -> IPoly {
    let l = f.lm().lcm(g.lm());
    let mf = f.lm().quotient_of(&l).unwrap();
    let mg = g.lm().quotient_of(&l).unwrap();
    let gcd = f.lc().gcd(g.lc());
    let a = g.lc() / &gcd;
    let b = f.lc() / &gcd;
    // a * mf * f - b * mg * g
    let fm = IPoly { terms: f.terms.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect() };
    let mut s = fm.combine(&a, &b, &mg, g, order, 0);
    s.make_primitive();
    s
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Gebauer–Möller update after adding basis element `t`.
fn update(polys: &[IPoly], active: &mut [bool], pairs: &mut Vec<Pair>, t: usize) {
    let lt = polys[t].lm().clone();
    let mut c: Vec<Pair> = (0..t)
        .filter(|&i| active[i])
        .map(|i| Pair { i, j: t, lcm: polys[i].lm().lcm(&lt) })
        .collect();
    let mut d: Vec<Pair> = Vec::new();
    while let Some(p) = c.pop() {
        let coprime = polys[p.i].lm().gcd_is_one(&lt);
        let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
        if coprime || !dominated {
            d.push(p);
        }
    }
    let e: Vec<Pair> = d.into_iter().filter(|p| !polys[p.i].lm().gcd_is_one(&lt)).collect();
    pairs.retain(|p| {
        !(lt.divides(&p.lcm)
            && polys[p.i].lm().lcm(&lt) != p.lcm
            && polys[p.j].lm().lcm(&lt) != p.lcm)
    });
    pairs.extend(e);
    for i in 0..t {
        if active[i] && lt.divides(polys[i].lm()) {
            active[i] = false;
        }
    }
    active[t] = true;
}

/// Reduced Gröbner basis of `ideal`.
pub fn buchberger(ideal: &Ideal) -> GroebnerBasis {
    let order = ideal.order.clone();
    let nvars = ideal.nvars().unwrap_or(0);
    let mut polys: Vec<IPoly> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    // inter-reduce the input generators first, smallest leading term first
    let mut input: Vec<IPoly> = ideal.generators.iter().map(|g| IPoly::from_poly(g, &order)).collect();
    input.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for g in input {
        let basis: Vec<&IPoly> = polys.iter().zip(&active).filter(|(_, a)| **a).map(|(p, _)| p).collect();
        let (mut r, _) = reduce(&g, &basis, &order);
        if r.is_zero() {
            continue;
        }
        r.make_primitive();
        polys.push(r);
        active.push(false);
        let t = polys.len() - 1;
        update(&polys, &mut active, &mut pairs, t);
    }

    while !pairs.is_empty() {
        // normal strategy: minimal lcm
        let k = (0..pairs.len())
            .min_by(|&a, &b| order.cmp(&pairs[a].lcm, &pairs[b].lcm))
            .unwrap();
        let pair = pairs.swap_remove(k);
        let s = spoly(&polys[pair.i], &polys[pair.j], &order);
        if s.is_zero() {
            continue;
        }
        let basis: Vec<&IPoly> = polys.iter().zip(&active).filter(|(_, a)| **a).map(|(p, _)| p).collect();
        let (mut r, _) = reduce(&s, &basis, &order);
        if r.is_zero() {
            continue;
        }
        r.make_primitive();
        polys.push(r);
        active.push(false);
        let t = polys.len() - 1;
        update(&polys, &mut active, &mut pairs, t);
    }

    let minimal: Vec<IPoly> = polys.into_iter().zip(active).filter(|(_, a)| *a).map(|(p, _)| p).collect();
    reduce_basis(minimal, order, nvars)
}

fn reduce_basis(mut minimal: Vec<IPoly>, order: MonomialOrder, nvars: usize) -> GroebnerBasis {
    // drop elements whose leading monomial is divisible by another one
    minimal.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let mut kept: Vec<IPoly> = Vec::new();
    for p in minimal {
        if !kept.iter().any(|k| k.lm().divides(p.lm())) {
            kept.push(p);
        }
    }
    let mut reduced = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<&IPoly> = kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).collect();
        let (r, _) = reduce(&kept[i], &others, &order);
        reduced.push(r.to_poly(nvars).monic(&order));
    }
    reduced.sort_by(|a, b| {
        order.cmp(a.leading_term(&order).unwrap().0, b.leading_term(&order).unwrap().0)
    });
    GroebnerBasis { elements: reduced, order, nvars }
}

impl GroebnerBasis {
    pub fn elements(&self) -> &[Poly] {
        &self.elements
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|g| g.leading_term(&self.order).unwrap().0.clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.iter().any(|g| g.is_constant() && !g.is_zero())
    }

    /// Remainder of `p` on division by the basis; no remaining term is
    /// divisible by a leading monomial.
    pub fn normal_form(&self, p: &Poly) -> Poly {
        if p.is_zero() {
            return p.clone();
        }
        let basis: Vec<IPoly> = self.elements.iter().map(|g| IPoly::from_poly(g, &self.order)).collect();
        let refs: Vec<&IPoly> = basis.iter().collect();
        let ip = IPoly::from_poly(p, &self.order);
        // p = k * prim(p); prim(p) ↦ r / s
        let k = {
            let (m, c) = p.leading_term(&self.order).unwrap();
            c / ip.terms.iter().find(|(mm, _)| mm == m).unwrap().1.clone()
        };
        let (r, s) = reduce(&ip, &refs, &self.order);
        r.to_poly(self.nvars).scale(&(k / s))
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// True when every variable has a pure power among the leading monomials.
    pub fn is_zero_dimensional(&self) -> bool {
        let lms = self.leading_monomials();
        (0..self.nvars).all(|i| {
            lms.iter().any(|m| m.exp(i) > 0 && (0..self.nvars).all(|j| j == i || m.exp(j) == 0))
        })
    }

    /// Standard monomials in increasing order.
    pub fn standard_monomials(&self) -> Result<StandardMonomialBasis> {
        if self.is_unit() {
            return Ok(StandardMonomialBasis { monomials: vec![] });
        }
        if !self.is_zero_dimensional() {
            return Err(Error::PositiveDimensional(format!(
                "leading monomials {:?} miss a pure power",
                self.leading_monomials()
            )));
        }
        let lms = self.leading_monomials();
        let bounds: Vec<u32> = (0..self.nvars)
            .map(|i| {
                lms.iter()
                    .filter(|m| (0..self.nvars).all(|j| j == i || m.exp(j) == 0))
                    .map(|m| m.exp(i))
                    .min()
                    .unwrap()
            })
            .collect();
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.nvars];
        loop {
            let m = Monomial::from_exponents(&exps);
            if !lms.iter().any(|l| l.divides(&m)) {
                out.push(m);
            }
            // odometer over the bounding box
            let mut k = 0;
            loop {
                if k == self.nvars {
                    out.sort_by(|a, b| self.order.cmp(a, b));
                    return Ok(StandardMonomialBasis { monomials: out });
                }
                exps[k] += 1;
                if exps[k] < bounds[k] {
                    break;
                }
                exps[k] = 0;
                k += 1;
            }
        }
    }
}
