//! Ordered Gaussian elimination on polynomials viewed as coefficient vectors.

use std::collections::HashMap;

use num::{One, Zero};

use super::order::MonomialOrder;
use super::poly::{Exponent, MultiPoly};
use super::rat::Rat;

/// One echelon row: a polynomial with leading coefficient 1, its leading
/// (order-minimal) exponent, and a tag transformed by the same row operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonRow {
    pub poly: MultiPoly,
    pub lead: Exponent,
    pub tag: Option<MultiPoly>,
}

/// Incrementally built echelon form with pairwise distinct leading exponents.
#[derive(Clone, Debug)]
pub struct Echelon {
    order: MonomialOrder,
    rows: Vec<EchelonRow>,
    by_lead: HashMap<Exponent, usize>,
}

/// Outcome of inserting a vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    /// A new pivot row was created at this index.
    Pivot(usize),
    /// The vector reduced to zero; carries the reduced tag (a kernel element
    /// when tags are preimages).
    Dependent(Option<MultiPoly>),
}

pub fn leading_exponent(p: &MultiPoly, order: &MonomialOrder) -> Option<Exponent> {
    p.terms()
        .map(|(e, _)| e)
        .min_by(|a, b| order.cmp(a, b))
        .cloned()
}

impl Echelon {
    pub fn new(order: MonomialOrder) -> Self {
        Self { order, rows: Vec::new(), by_lead: HashMap::new() }
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn rows(&self) -> &[EchelonRow] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<EchelonRow> {
        self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn has_lead(&self, e: &[u32]) -> bool {
        self.by_lead.contains_key(e)
    }

    /// Reduces `(poly, tag)` against the current pivots until its leading
    /// exponent is not a pivot or it vanishes.
    pub fn reduce(&self, mut poly: MultiPoly, mut tag: Option<MultiPoly>) -> (MultiPoly, Option<MultiPoly>) {
        while let Some(lead) = leading_exponent(&poly, &self.order) {
            let Some(&i) = self.by_lead.get(&lead) else { break };
            let row = &self.rows[i];
            let c = -poly.coeff(&lead);
            poly.add_scaled(&row.poly, &c);
            if let (Some(t), Some(rt)) = (tag.as_mut(), row.tag.as_ref()) {
                t.add_scaled(rt, &c);
            }
        }
        (poly, tag)
    }

    pub fn contains(&self, poly: &MultiPoly) -> bool {
        self.reduce(poly.clone(), None).0.is_zero()
    }

    pub fn insert(&mut self, poly: MultiPoly, tag: Option<MultiPoly>) -> Insertion {
        let (poly, tag) = self.reduce(poly, tag);
        match leading_exponent(&poly, &self.order) {
            None => Insertion::Dependent(tag),
            Some(lead) => {
                let inv = Rat::one() / poly.coeff(&lead);
                let poly = poly.scale(&inv);
                let tag = tag.map(|t| t.scale(&inv));
                self.by_lead.insert(lead.clone(), self.rows.len());
                self.rows.push(EchelonRow { poly, lead, tag });
                Insertion::Pivot(self.rows.len() - 1)
            }
        }
    }
}

/// Echelon basis of the span of `rows`: pairwise distinct leading exponents,
/// leading coefficients 1, zero rows dropped.
pub fn echelonize(rows: &[MultiPoly], order: &MonomialOrder) -> Vec<(MultiPoly, Exponent)> {
    let mut ech = Echelon::new(order.clone());
    for r in rows {
        ech.insert(r.clone(), None);
    }
    ech.into_rows().into_iter().map(|r| (r.poly, r.lead)).collect()
}

/// Echelon form that also carries each row's preimage under a linear map.
pub fn echelonize_tagged(rows: Vec<(MultiPoly, MultiPoly)>, order: &MonomialOrder) -> Vec<EchelonRow> {
    let mut ech = Echelon::new(order.clone());
    for (v, t) in rows {
        ech.insert(v, Some(t));
    }
    ech.into_rows()
}

/// Basis of `{ sum c_i tag_i : sum c_i image_i = 0 }` for pairs `(image_i, tag_i)`,
/// where the tags are linearly independent.
pub fn kernel(pairs: Vec<(MultiPoly, MultiPoly)>, order: &MonomialOrder) -> Vec<MultiPoly> {
    let mut ech = Echelon::new(order.clone());
    let mut out = Vec::new();
    for (v, t) in pairs {
        if let Insertion::Dependent(Some(t)) = ech.insert(v, Some(t)) {
            if !t.is_zero() {
                out.push(t);
            }
        }
    }
    out
}

/// Rank by plain dense elimination over a coefficient matrix, without any
/// monomial order. Used as an independent cross-check.
pub fn dense_rank(polys: &[MultiPoly]) -> usize {
    let mut cols: Vec<Exponent> = polys.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect();
    cols.sort();
    cols.dedup();
    let mut m: Vec<Vec<Rat>> = polys.iter().map(|p| cols.iter().map(|e| p.coeff(e)).collect()).collect();
    let mut rank = 0;
    for c in 0..cols.len() {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, piv);
        let pr = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pr[c];
            for (x, y) in row.iter_mut().zip(&pr) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::int;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s, 2).unwrap()
    }

    fn leads(rows: &[(MultiPoly, Exponent)]) -> Vec<Exponent> {
        let mut v: Vec<Exponent> = rows.iter().map(|(_, e)| e.clone()).collect();
        v.sort();
        v
    }

    #[test]
    fn echelonize_examples() {
        let lex = MonomialOrder::lex(2);
        let out = echelonize(&[p("x+y"), p("y")], &lex);
        assert_eq!(leads(&out), vec![vec![0, 1], vec![1, 0]]);

        let w = MonomialOrder::rational_weights(&[int(1), int(1)]);
        let out = echelonize(&[p("y^2"), p("x + y^2")], &w);
        assert_eq!(leads(&out), vec![vec![0, 2], vec![1, 0]]);

        let out = echelonize(&[p("x"), p("2*x")], &lex);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0], (p("x"), vec![1, 0]));
    }

    #[test]
    fn idempotent_and_rank_agrees() {
        let lex = MonomialOrder::lex(2);
        let rows = vec![p("x+y+1"), p("x-y"), p("2*x + 1"), p("x^2 + y"), p("x^2 + 2*y + 1")];
        let once = echelonize(&rows, &lex);
        let again = echelonize(&once.iter().map(|(q, _)| q.clone()).collect::<Vec<_>>(), &lex);
        assert_eq!(leads(&once), leads(&again));
        assert_eq!(once.len(), dense_rank(&rows));
        for (q, e) in &once {
            assert_eq!(q.coeff(e), int(1));
        }
    }

    #[test]
    fn kernel_of_evaluation() {
        // polynomials of degree <= 1 vanishing at (1, 0)
        let lex = MonomialOrder::lex(2);
        let basis = [p("1"), p("x"), p("y")];
        let pairs = basis
            .iter()
            .map(|b| (MultiPoly::constant(2, b.eval(&[int(1), int(0)])), b.clone()))
            .collect();
        let ker = kernel(pairs, &lex);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert_eq!(k.eval(&[int(1), int(0)]), int(0));
        }
    }
}
