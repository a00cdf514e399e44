//! Integer images of polynomials along an arc in exponential-generating-function
//! coordinates: the coefficient of `t^k` is stored as `k! c_k`, so products
//! become binomial convolutions and `(t, e^t - 1)` has integer entries.
//! Vanishing orders are unchanged by the rescaling.

use num::{BigInt, Integer, One, Signed, Zero};

use super::poly::MultiPoly;
use super::rat::Rat;
use super::series::TruncSeries;

pub type IntRow = Vec<BigInt>;

/// Index of the first nonzero entry.
pub fn row_order(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|c| !c.is_zero())
}

/// Gcd of the entries (zero for the zero row).
pub fn row_content(row: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in row {
        if !c.is_zero() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

/// Cached integer powers of the two (rescaled) arc components.
pub struct EgfArc {
    order: usize,
    /// `binom[k][l] = C(k, l)`
    binom: Vec<Vec<BigInt>>,
    /// Integer factor `D_i` with `D_i * EGF(gamma_i)` integral.
    scale: [BigInt; 2],
    powers: [Vec<IntRow>; 2],
}

impl EgfArc {
    pub fn new(gamma: (&TruncSeries, &TruncSeries), order: usize) -> Self {
        let mut binom: Vec<Vec<BigInt>> = Vec::with_capacity(order);
        for k in 0..order {
            let mut row = vec![BigInt::one(); k + 1];
            for l in 1..k {
                row[l] = &binom[k - 1][l - 1] + &binom[k - 1][l];
            }
            binom.push(row);
        }
        let mut scale = [BigInt::one(), BigInt::one()];
        let mut rows: [IntRow; 2] = [Vec::new(), Vec::new()];
        for (i, g) in [gamma.0, gamma.1].into_iter().enumerate() {
            let mut fact = BigInt::one();
            let egf: Vec<Rat> = (0..order)
                .map(|k| {
                    if k > 0 {
                        fact *= BigInt::from(k);
                    }
                    g.coeff(k) * Rat::from_integer(fact.clone())
                })
                .collect();
            let d = egf.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            rows[i] = egf.iter().map(|c| (c * Rat::from_integer(d.clone())).to_integer()).collect();
            scale[i] = d;
        }
        let mut one = vec![BigInt::zero(); order];
        if order > 0 {
            one[0] = BigInt::one();
        }
        let [r0, r1] = rows;
        Self { order, binom, scale, powers: [vec![one.clone(), r0], vec![one, r1]] }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `(f g)_k = sum_l C(k, l) f_l g_{k-l}`, skipping zero entries of `f`.
    fn convolve(&self, f: &[BigInt], g: &[BigInt]) -> IntRow {
        let mut out = vec![BigInt::zero(); self.order];
        for (l, fl) in f.iter().enumerate() {
            if fl.is_zero() {
                continue;
            }
            for k in l..self.order {
                let gk = &g[k - l];
                if !gk.is_zero() {
                    out[k] += &self.binom[k][l] * fl * gk;
                }
            }
        }
        out
    }

    fn power(&mut self, var: usize, k: usize) -> &IntRow {
        while self.powers[var].len() <= k {
            let next = self.convolve(self.powers[var].last().unwrap(), &self.powers[var][1]);
            self.powers[var].push(next);
        }
        &self.powers[var][k]
    }

    /// Primitive integer row `r` and positive rational `lambda` with
    /// `r = lambda * EGF(p(gamma(t)) mod t^T)`.
    pub fn image(&mut self, p: &MultiPoly) -> (IntRow, Rat) {
        assert_eq!(p.nvars(), 2, "arcs live on surfaces");
        let d = p.total_degree().unwrap_or(0) as usize;
        // sum_e c_e D1^(d-i) D2^(d-j) (D1 g1)^i (D2 g2)^j = D1^d D2^d p(g)
        let weighted: Vec<(&Vec<u32>, Rat)> = p
            .terms()
            .map(|(e, c)| {
                let f = num::pow(self.scale[0].clone(), d - e[0] as usize)
                    * num::pow(self.scale[1].clone(), d - e[1] as usize);
                (e, c * Rat::from_integer(f))
            })
            .collect();
        let den = weighted.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut row = vec![BigInt::zero(); self.order];
        for (e, c) in weighted {
            let c = (c * Rat::from_integer(den.clone())).to_integer();
            let a = self.power(0, e[0] as usize).clone();
            let b = self.power(1, e[1] as usize).clone();
            for (r, v) in row.iter_mut().zip(self.convolve(&a, &b)) {
                *r += &c * v;
            }
        }
        let mut lambda = Rat::from_integer(
            den * num::pow(self.scale[0].clone(), d) * num::pow(self.scale[1].clone(), d),
        );
        let g = row_content(&row);
        if !g.is_zero() && !g.is_one() {
            for r in &mut row {
                *r /= &g;
            }
            lambda /= Rat::from_integer(g);
        }
        (row, lambda)
    }
}

/// `row <- a row - c pivot` with `a = pivot[k]`, `c = row[k]` reduced by their
/// gcd, applied alike to the attached `tag` rows; then divides both by the
/// common content. Returns the multipliers `(a, c)`.
pub fn eliminate(row: &mut IntRow, tag: &mut IntRow, pivot: &[BigInt], pivot_tag: &[BigInt], k: usize) -> (BigInt, BigInt) {
    let g = pivot[k].gcd(&row[k]);
    let mut a = &pivot[k] / &g;
    let mut c = &row[k] / &g;
    if a.is_negative() {
        a = -a;
        c = -c;
    }
    for (x, y) in row.iter_mut().zip(pivot).chain(tag.iter_mut().zip(pivot_tag)) {
        if !y.is_zero() {
            *x = &a * &*x - &c * y;
        } else if !a.is_one() {
            *x *= &a;
        }
    }
    let content = row_content(row).gcd(&row_content(tag));
    if !content.is_zero() && !content.is_one() {
        for x in row.iter_mut().chain(tag.iter_mut()) {
            *x /= &content;
        }
    }
    (a, c)
}
