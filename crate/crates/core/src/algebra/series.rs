//! Univariate power series truncated at a fixed order.

use num::{One, Zero};

use super::poly::MultiPoly;
use super::rat::{factorial, Rat};
use crate::error::{Error, Result};

/// Coefficients `c_0 .. c_{T-1}` of a series known modulo `t^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rat>,
}

/// Order of vanishing of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOrder {
    Exact(usize),
    /// The series is zero modulo `t^T`.
    AtLeast(usize),
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Rat::zero(); order] }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        Self { coeffs }
    }

    /// `c * t^k` truncated at `order`.
    pub fn monomial(k: usize, c: Rat, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The parameter `t` itself.
    pub fn param(order: usize) -> Self {
        Self::monomial(1, Rat::one(), order)
    }

    /// `e^t - 1 = t + t^2/2! + ...`
    pub fn exp_minus_one(order: usize) -> Self {
        let coeffs = (0..order)
            .map(|k| {
                if k == 0 {
                    Rat::zero()
                } else {
                    Rat::new(One::one(), factorial(k as u32))
                }
            })
            .collect();
        Self { coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn order(&self) -> SeriesOrder {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => SeriesOrder::Exact(k),
            None => SeriesOrder::AtLeast(self.coeffs.len()),
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order.min(c.len()), Rat::zero());
        Self { coeffs: c }
    }

    /// Index of the only nonzero coefficient, when the series is a monomial.
    fn single_term(&self) -> Option<usize> {
        let mut nz = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
        match (nz.next(), nz.next()) {
            (Some((k, _)), None) => Some(k),
            _ => None,
        }
    }

    pub fn scale(&mut self, c: &Rat) {
        for a in &mut self.coeffs {
            *a *= c;
        }
    }

    pub fn add_scaled(&mut self, other: &TruncSeries, c: &Rat) {
        let n = self.coeffs.len().min(other.coeffs.len());
        self.coeffs.truncate(n);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * c;
        }
    }

    /// Product modulo `t^T` where `T` is the smaller truncation.
    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        if let Some(k) = other.single_term() {
            for i in 0..n.saturating_sub(k) {
                out[i + k] = &self.coeffs[i] * &other.coeffs[k];
            }
            return Self { coeffs: out };
        }
        if let Some(k) = self.single_term() {
            return other.mul(&Self::monomial(k, self.coeffs[k].clone(), n));
        }
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }
}

/// Substitutes a pair of series into bivariate polynomials, caching powers.
pub struct ArcSubstitution {
    order: usize,
    components: [TruncSeries; 2],
    powers: [Vec<TruncSeries>; 2],
}

impl ArcSubstitution {
    pub fn new(gamma: (&TruncSeries, &TruncSeries), order: usize) -> Self {
        let one = TruncSeries::monomial(0, Rat::one(), order);
        Self {
            order,
            components: [gamma.0.truncate(order), gamma.1.truncate(order)],
            powers: [vec![one.clone()], vec![one]],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn power(&mut self, var: usize, k: usize) -> &TruncSeries {
        while self.powers[var].len() <= k {
            let next = self.powers[var].last().unwrap().mul(&self.components[var]);
            self.powers[var].push(next);
        }
        &self.powers[var][k]
    }

    /// `p(gamma_1(t), gamma_2(t)) mod t^T`, zero result allowed.
    pub fn substitute(&mut self, p: &MultiPoly) -> TruncSeries {
        assert_eq!(p.nvars(), 2, "arc substitution needs a bivariate polynomial");
        let mut out = TruncSeries::zero(self.order);
        for (e, c) in p.terms() {
            let a = self.power(0, e[0] as usize).clone();
            let b = self.power(1, e[1] as usize);
            out.add_scaled(&a.mul(b), c);
        }
        out
    }
}

/// `p(gamma(t)) mod t^T`; fails when the result vanishes to order `T`.
pub fn compose_arc(p: &MultiPoly, gamma: (&TruncSeries, &TruncSeries), order: usize) -> Result<TruncSeries> {
    if gamma.0.truncation() < order || gamma.1.truncation() < order {
        return Err(Error::InvalidParameter(format!(
            "arc components truncated below the requested order {order}"
        )));
    }
    let s = ArcSubstitution::new(gamma, order).substitute(p);
    match s.order() {
        SeriesOrder::AtLeast(t) => Err(Error::TruncationExhausted { truncation: t }),
        SeriesOrder::Exact(_) => Ok(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn exp_arc(order: usize) -> (TruncSeries, TruncSeries) {
        (TruncSeries::param(order), TruncSeries::exp_minus_one(order))
    }

    fn coeffs(s: &TruncSeries) -> Vec<Rat> {
        s.coeffs().to_vec()
    }

    #[test]
    fn composition_examples() {
        let (g1, g2) = exp_arc(4);
        let y = MultiPoly::parse("y", 2).unwrap();
        let s = compose_arc(&y, (&g1, &g2), 4).unwrap();
        assert_eq!(coeffs(&s), vec![rat(0, 1), rat(1, 1), rat(1, 2), rat(1, 6)]);

        let p = MultiPoly::parse("y - x", 2).unwrap();
        let s = compose_arc(&p, (&g1, &g2), 4).unwrap();
        assert_eq!(coeffs(&s), vec![rat(0, 1), rat(0, 1), rat(1, 2), rat(1, 6)]);

        let p = MultiPoly::parse("y - x - x^2/2", 2).unwrap();
        let s = compose_arc(&p, (&g1, &g2), 4).unwrap();
        assert_eq!(coeffs(&s), vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 6)]);
        assert_eq!(s.order(), SeriesOrder::Exact(3));
    }

    #[test]
    fn exhausted_truncation_is_reported() {
        let (g1, g2) = exp_arc(3);
        let p = MultiPoly::parse("y - x - x^2/2", 2).unwrap();
        assert_eq!(
            compose_arc(&p, (&g1, &g2), 3),
            Err(Error::TruncationExhausted { truncation: 3 })
        );
    }

    #[test]
    fn ring_map() {
        let (g1, g2) = exp_arc(12);
        let p = MultiPoly::parse("x*y - 3*y^2 + 1/5*x^3", 2).unwrap();
        let q = MultiPoly::parse("y - x + 2*x^2*y", 2).unwrap();
        let mut sub = ArcSubstitution::new((&g1, &g2), 12);
        let lhs = sub.substitute(&(&p * &q));
        let rhs = sub.substitute(&p).mul(&sub.substitute(&q));
        assert_eq!(lhs, rhs);
    }
}
