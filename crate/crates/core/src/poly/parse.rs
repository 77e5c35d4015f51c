use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, MonomialOrder};
use super::poly::{Poly, Rat};
use crate::error::{Error, Result};

/// Ordered variable names of a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vars(Vec<String>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn generic(n: usize) -> Self {
        match n {
            2 => Vars::new(&["x", "y"]),
            3 => Vars::new(&["x", "y", "z"]),
            _ => Vars((0..n).map(|i| format!("x{i}")).collect()),
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        parse_poly(text, self)
    }

    pub fn display<'a>(&'a self, p: &'a Poly) -> PolyDisplay<'a> {
        PolyDisplay { vars: self, poly: p }
    }

    pub fn format(&self, p: &Poly) -> String {
        self.display(p).to_string()
    }
}

/// Parses polynomial text under the grammar
/// `poly := ('+'|'-')? term (('+'|'-') term)*`, `term := coeff ('*' factor)* | factor ('*' factor)*`,
/// `factor := var ('^' uint)? | '(' poly ')' ('^' uint)?`, `coeff := int | int '/' uint`.
///
/// A leading sign on the first term and a power on a parenthesized factor
/// are also accepted; the printer emits a leading `-` for negative leading terms.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<Poly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
    let out = p.poly()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn poly(&mut self) -> Result<Poly> {
        let n = self.vars.len();
        let mut acc = Poly::zero(n);
        let mut sign = Rat::one();
        if let Some(c @ (b'-' | b'+')) = self.peek() {
            self.pos += 1;
            if c == b'-' {
                sign = -sign;
            }
        }
        loop {
            let t = self.term()?;
            acc += &t.scale(&sign);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rat::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Rat::one();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let n = self.vars.len();
        let mut acc = match self.peek() {
            Some(c) if c.is_ascii_digit() => Poly::constant(n, self.coeff()?),
            _ => self.factor()?,
        };
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn coeff(&mut self) -> Result<Rat> {
        let num = self.uint()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.uint()?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(Rat::new(num, den));
        }
        Ok(Rat::from_integer(num))
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected unsigned integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn power(&mut self) -> Result<u32> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.uint()?;
            return u32::try_from(e).map_err(|_| self.err("exponent too large"));
        }
        Ok(1)
    }

    fn factor(&mut self) -> Result<Poly> {
        let n = self.vars.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                let e = self.power()?;
                Ok(inner.pow(e))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                let idx = self.vars.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
                let e = self.power()?;
                Ok(Poly::monomial(Monomial::var(n, idx), Rat::one()).pow(e))
            }
            Some(c) if c.is_ascii_digit() => Ok(Poly::constant(n, self.coeff()?)),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub struct PolyDisplay<'a> {
    vars: &'a Vars,
    poly: &'a Poly,
}

fn fmt_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let order = MonomialOrder::GradedLex;
        let mut terms: Vec<_> = self.poly.terms().collect();
        terms.sort_by(|a, b| order.cmp(b.0, a.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(fmt_rat(&abs));
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.0[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars.0[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn xy() -> Vars {
        Vars::new(&["x", "y"])
    }

    #[test]
    fn reads_simple_sum() {
        let p = xy().parse("x^2 + 3*y").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&Monomial::from_exponents(&[2, 0])), rat(1));
        assert_eq!(p.coeff(&Monomial::from_exponents(&[0, 1])), rat(3));
    }

    #[test]
    fn zero_literal() {
        assert!(xy().parse("0").unwrap().is_zero());
    }

    #[test]
    fn expansion_matches_naive_product() {
        // naive oracle: (x+y)^2 term by term is x^2 + 2xy + y^2
        let p = xy().parse("(x+y)^2 - x^2 - 2*x*y").unwrap();
        assert_eq!(p, Poly::monomial(Monomial::from_exponents(&[0, 2]), rat(1)));
    }

    #[test]
    fn rational_coefficients() {
        let p = xy().parse("1/2*x - 3/4").unwrap();
        assert_eq!(xy().format(&p), "1/2*x - 3/4");
    }

    #[test]
    fn reports_position_and_unknown_names() {
        match xy().parse("x + * y") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(xy().parse("x + w"), Err(Error::UnknownVariable(n)) if n == "w"));
        assert!(xy().parse("x +").is_err());
        assert!(xy().parse("1/0").is_err());
    }

    #[test]
    fn canonical_print_is_stable() {
        let v = xy();
        for text in ["x^2 + 3*y", "-x*y^2 + 1/3*x - 7", "0", "y"] {
            let p = v.parse(text).unwrap();
            assert_eq!(v.format(&p), text);
        }
    }
}
