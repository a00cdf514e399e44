//! Sparse multivariate polynomials with rational coefficients in at most
//! three variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use super::rat::{fmt_rat, parse_rat, Rat};
use crate::error::{Error, Result};

pub const MAX_VARS: usize = 3;
pub const VAR_NAMES: [&str; MAX_VARS] = ["x", "y", "z"];

pub type Exponent = Vec<u32>;

/// Terms are keyed by exponent vector; the `BTreeMap` key order is lex with
/// the first variable compared first, so the first key is the lex-minimal
/// monomial of the support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rat>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1 && nvars <= MAX_VARS, "1..=3 variables supported");
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rat::one())
    }

    pub fn monomial(nvars: usize, exp: Exponent, c: Rat) -> Self {
        assert_eq!(exp.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Rat)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: Rat) {
        assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &MultiPoly, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            self.add_term(e.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Lowest total degree in the support, i.e. the multiplicity at the origin.
    pub fn order_at_origin(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// Lex-minimal exponent, first variable compared first.
    pub fn lex_min(&self) -> Option<&Exponent> {
        self.terms.keys().next()
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num::pow(x.clone(), k as usize))
            })
            .fold(Rat::zero(), |a, b| a + b)
    }

    /// Exact Taylor shift: returns `q` with `q(u) = self(z + u)`.
    pub fn recenter(&self, z: &[Rat]) -> MultiPoly {
        assert_eq!(z.len(), self.nvars, "center dimension must match variable count");
        if z.iter().all(Zero::is_zero) {
            return self.clone();
        }
        // (z_i + u_i)^k expanded once per variable and exponent
        let mut cache: Vec<BTreeMap<u32, Vec<Rat>>> = vec![BTreeMap::new(); self.nvars];
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let factors: Vec<Vec<Rat>> = e
                .iter()
                .enumerate()
                .map(|(i, &k)| {
                    cache[i]
                        .entry(k)
                        .or_insert_with(|| binomial_expansion(&z[i], k))
                        .clone()
                })
                .collect();
            // iterate over the product of the per-variable expansions
            let mut idx = vec![0u32; self.nvars];
            loop {
                let coef = idx
                    .iter()
                    .enumerate()
                    .fold(c.clone(), |acc, (i, &j)| acc * &factors[i][j as usize]);
                out.add_term(idx.clone(), coef);
                let mut v = 0;
                loop {
                    if v == self.nvars {
                        break;
                    }
                    idx[v] += 1;
                    if idx[v] <= e[v] {
                        break;
                    }
                    idx[v] = 0;
                    v += 1;
                }
                if v == self.nvars {
                    break;
                }
            }
        }
        out
    }

    /// Remainder of division by `d` with respect to graded lex (largest
    /// monomial leads). The map `f -> f mod d` is linear and vanishes
    /// exactly on the multiples of `d`.
    pub fn div_rem(&self, d: &MultiPoly) -> (MultiPoly, MultiPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (lead_e, lead_c) = d.grlex_leading();
        let mut p = self.clone();
        let mut quo = Self::zero(self.nvars);
        let mut rem = Self::zero(self.nvars);
        while !p.is_zero() {
            let (e, c) = p.grlex_leading();
            if e.iter().zip(&lead_e).all(|(a, b)| a >= b) {
                let shift: Exponent = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
                let factor = &c / &lead_c;
                let mono = Self::monomial(self.nvars, shift, factor);
                p = &p - &(&mono * d);
                quo = &quo + &mono;
            } else {
                p.terms.remove(&e);
                rem.add_term(e, c);
            }
        }
        (quo, rem)
    }

    pub fn divides(&self, f: &MultiPoly) -> bool {
        f.div_rem(self).1.is_zero()
    }

    fn grlex_leading(&self) -> (Exponent, Rat) {
        let (e, c) = self
            .terms
            .iter()
            .max_by(|(a, _), (b, _)| {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| a.cmp(b))
            })
            .expect("nonzero polynomial");
        (e.clone(), c.clone())
    }

    /// Parses expressions in `x`, `y`, `z` built from rationals, `+ - * ^`
    /// and parentheses, e.g. `"(x+y-1)^2*y - 1/2*x"`.
    pub fn parse(src: &str, nvars: usize) -> Result<MultiPoly> {
        let mut p = Parser { src: src.as_bytes(), pos: 0, nvars };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Parse(format!("trailing input in polynomial {src:?}")));
        }
        Ok(out)
    }
}

fn binomial_expansion(z: &Rat, k: u32) -> Vec<Rat> {
    // coefficients of u^j in (z + u)^k
    let mut row = vec![Rat::one()];
    for _ in 0..k {
        let mut next = vec![Rat::zero(); row.len() + 1];
        for (j, c) in row.iter().enumerate() {
            next[j] += c * z;
            next[j + 1] += c;
        }
        row = next;
    }
    row
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            let is_const = e.iter().all(|&k| k == 0);
            if !a.is_one() || is_const {
                write!(f, "{}", fmt_rat(&a))?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", VAR_NAMES[v])?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} of polynomial", self.pos))
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = match d.terms.iter().next() {
                        Some((e, c)) if d.len() == 1 && e.iter().all(|&k| k == 0) => c.clone(),
                        _ => return Err(self.err("division by a non-constant")),
                    };
                    acc = acc.scale(&(Rat::one() / c));
                }
                Some(b'(') | Some(b'x') | Some(b'y') | Some(b'z') => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let k: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| self.err("expected exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c @ (b'x' | b'y' | b'z')) => {
                let i = (c - b'x') as usize;
                if i >= self.nvars {
                    return Err(self.err("variable out of range for this model"));
                }
                self.pos += 1;
                Ok(MultiPoly::var(self.nvars, i))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
                {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(MultiPoly::constant(self.nvars, parse_rat(s)?))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{int, rat};
    use proptest::prelude::*;

    fn p2(s: &str) -> MultiPoly {
        MultiPoly::parse(s, 2).unwrap()
    }

    #[test]
    fn recenter_examples() {
        let one = vec![int(1), int(1)];
        assert_eq!(p2("x").recenter(&one), p2("x + 1"));
        assert_eq!(p2("(x-1)^2").recenter(&[int(1), int(0)]), p2("x^2"));
        assert_eq!(p2("x-y").recenter(&one), p2("x - y"));
    }

    #[test]
    fn parse_and_display() {
        let p = p2("(x+y-1)^2*y - 1/2*x");
        assert_eq!(p.eval(&[int(1), int(1)]), rat(1, 2));
        assert_eq!(MultiPoly::parse(&p.to_string(), 2).unwrap(), p);
        assert!(MultiPoly::parse("x + z", 2).is_err());
        assert!(MultiPoly::parse("x +", 2).is_err());
    }

    #[test]
    fn division() {
        let d = p2("x+y-1");
        let f = &d.pow(2) * &p2("y");
        assert!(d.divides(&f));
        assert!(!d.divides(&p2("x*y")));
        let (q, r) = p2("x^2 + 3").div_rem(&p2("x + 1"));
        assert_eq!(r, p2("4"));
        assert_eq!(q, p2("x - 1"));
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u32..4, 0u32..4), -5i64..6), 0..6).prop_map(|ts| {
            MultiPoly::from_terms(2, ts.into_iter().map(|((a, b), c)| (vec![a, b], int(c))))
        })
    }

    proptest! {
        #[test]
        fn recenter_round_trip(p in small_poly(), a in -3i64..4, b in -3i64..4) {
            let z = vec![rat(a, 2), int(b)];
            let mz: Vec<Rat> = z.iter().map(|c| -c).collect();
            prop_assert_eq!(p.recenter(&z).recenter(&mz), p.clone());
            // q(u) = p(z+u) checked at u = (1, 2)
            let u = vec![int(1), int(2)];
            let zu: Vec<Rat> = z.iter().zip(&u).map(|(a, b)| a + b).collect();
            prop_assert_eq!(p.recenter(&z).eval(&u), p.eval(&zu));
        }

        #[test]
        fn division_identity(f in small_poly(), d in small_poly()) {
            prop_assume!(!d.is_zero());
            let (q, r) = f.div_rem(&d);
            prop_assert_eq!(&(&q * &d) + &r, f);
        }
    }
}
