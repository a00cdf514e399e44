//! Flag valuations, finite-level Okounkov bodies, superlevel bodies and the
//! concave transform.

use std::collections::BTreeMap;

use num::{BigInt, Integer, One, Signed, Zero};

use crate::algebra::rat::int;
use crate::algebra::egf::{eliminate, row_order, IntRow};
use crate::algebra::{Echelon, Exponent, MonomialOrder, MultiPoly, QuadExt, Rat};
use crate::convex::{convex_hull_2d, extremal_function, polygon_area, ConvexBody, Point};
use crate::error::{Error, Result};
use crate::filtration::adapted_basis;
use crate::models::SectionModel;
use crate::valuation::{Divisor, Valuation, Value};

/// Successive vanishing orders along the flag: the lex-minimal exponent in
/// the fixed chart.
pub fn flag_nu(s: &MultiPoly) -> Result<Exponent> {
    s.lex_min().cloned().ok_or(Error::ZeroSection)
}

/// Flag values of one level and their convex hull (scaled by `1/m`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBodyApprox {
    pub m: u32,
    /// Sorted exponent vectors.
    pub points: Vec<Exponent>,
    /// Counterclockwise polygon for surfaces, `[min, max]` for curves.
    pub hull: Vec<Point>,
}

impl LatticeBodyApprox {
    fn from_points(m: u32, mut points: Vec<Exponent>) -> Self {
        points.sort();
        let scaled: Vec<Point> = points.iter().map(|e| scale_exponent(e, m)).collect();
        let hull = match scaled.first().map(Vec::len) {
            None => Vec::new(),
            Some(1) => {
                let lo = scaled.iter().min().unwrap().clone();
                let hi = scaled.iter().max().unwrap().clone();
                if lo == hi { vec![lo] } else { vec![lo, hi] }
            }
            Some(_) => convex_hull_2d(&scaled),
        };
        Self { m, points, hull }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Area (surfaces) or length (curves) of the hull.
    pub fn hull_measure(&self) -> Rat {
        match self.hull.first().map(Vec::len) {
            Some(1) if self.hull.len() == 2 => &self.hull[1][0] - &self.hull[0][0],
            Some(2) => polygon_area(&self.hull),
            _ => Rat::from_integer(0.into()),
        }
    }
}

pub fn scale_exponent(e: &[u32], m: u32) -> Point {
    e.iter().map(|&a| Rat::new(a.into(), m.into())).collect()
}

fn lex_leads<'a>(sections: impl IntoIterator<Item = &'a MultiPoly>, nvars: usize) -> Vec<Exponent> {
    let mut ech = Echelon::new(MonomialOrder::lex(nvars));
    for s in sections {
        ech.insert(s.clone(), None);
    }
    ech.rows().iter().map(|r| r.lead.clone()).collect()
}

pub fn okounkov_points(model: &SectionModel, m: u32) -> Result<LatticeBodyApprox> {
    let space = model.section_basis(m)?;
    Ok(LatticeBodyApprox::from_points(m, lex_leads(&space.basis, model.nvars())))
}

/// Flag values of `{v >= m t}`.
pub fn superlevel_body(model: &SectionModel, m: u32, v: &Valuation, t: &Rat) -> Result<LatticeBodyApprox> {
    if t.is_negative() {
        return Err(Error::InvalidParameter("threshold t must be nonnegative".into()));
    }
    let space = model.section_basis(m)?;
    let basis = adapted_basis(&space, v)?;
    let level = Value::Finite(QuadExt::rational(t * int(m as i64)));
    let keep = basis.iter().filter(|(_, a)| *a >= level).map(|(s, _)| s);
    Ok(LatticeBodyApprox::from_points(m, lex_leads(keep, model.nvars())))
}

/// `G_m(alpha) = (1/m) max{v(s) : nu(s) = alpha}` on the lattice points of level `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcaveTransformTable {
    pub m: u32,
    pub values: BTreeMap<Exponent, QuadExt>,
}

impl ConcaveTransformTable {
    pub fn get(&self, alpha: &[u32]) -> Option<&QuadExt> {
        self.values.get(alpha)
    }

    /// `{m G_m(alpha)}` sorted, to compare with the vanishing sequence.
    pub fn pushforward(&self) -> Vec<QuadExt> {
        let m = Rat::from_integer(self.m.into());
        let mut v: Vec<QuadExt> = self.values.values().map(|g| g.scale(&m)).collect();
        v.sort();
        v
    }
}

/// Sweeps the adapted basis from the largest value down: each new lex pivot
/// appearing at value `w` has `G_m = w / m`. Elimination runs fraction-free on
/// integer coefficient rows whose columns are the monomials in lex order.
pub fn concave_transform(model: &SectionModel, m: u32, v: &Valuation) -> Result<ConcaveTransformTable> {
    let space = model.section_basis(m)?;
    let basis = adapted_basis(&space, v)?;
    let inv = Rat::new(One::one(), m.into());
    let columns: Vec<Exponent> = {
        let mut set = std::collections::BTreeSet::new();
        for b in &space.basis {
            set.extend(b.terms().map(|(e, _)| e.clone()));
        }
        set.into_iter().collect()
    };
    let index: BTreeMap<&Exponent, usize> = columns.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut pivots: BTreeMap<usize, IntRow> = BTreeMap::new();
    let mut values = BTreeMap::new();
    for (s, a) in basis.iter().rev() {
        let Value::Finite(a) = a else { continue };
        let mut row = integer_row(s, &index, columns.len());
        while let Some(k) = row_order(&row) {
            match pivots.get(&k) {
                Some(p) => {
                    eliminate(&mut row, &mut Vec::new(), p, &[], k);
                }
                None => {
                    values.insert(columns[k].clone(), a.scale(&inv));
                    pivots.insert(k, row);
                    break;
                }
            }
        }
    }
    Ok(ConcaveTransformTable { m, values })
}

/// Coefficients of `s` on the given columns, with denominators cleared.
fn integer_row(s: &MultiPoly, index: &BTreeMap<&Exponent, usize>, width: usize) -> IntRow {
    let den = s.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut row = vec![BigInt::zero(); width];
    for (e, c) in s.terms() {
        row[index[e]] = (c * Rat::from_integer(den.clone())).to_integer();
    }
    row
}

/// The divisor of a prime-divisor valuation as a section of `L`.
pub fn divisor_section(v: &Valuation, nvars: usize) -> Result<MultiPoly> {
    match v {
        Valuation::PrimeDivisor(Divisor::FlagLine) => Ok(MultiPoly::var(nvars, 0)),
        Valuation::PrimeDivisor(Divisor::Explicit(d)) => Ok(d.clone()),
        _ => Err(Error::InvalidParameter("expected ordflag or ordpoly:<D> with D a section of L".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalComparison {
    pub apex: Point,
    pub max_deviation: Rat,
    /// `(alpha, G_m(alpha/m), E(alpha/m))`
    pub rows: Vec<(Exponent, Rat, Rat)>,
}

/// `max_alpha |G_m(alpha/m) - E_{D, nu(D)}(alpha/m)|` for `v = ord_D`, where the
/// body is the level-`m` hull.
pub fn extremal_vs_transform_check(model: &SectionModel, m: u32, v: &Valuation) -> Result<ExtremalComparison> {
    if model.nvars() != 2 {
        return Err(Error::ModelMismatch("extremal comparison runs on surfaces".into()));
    }
    let d = divisor_section(v, 2)?;
    if !model.section_basis(1)?.contains(&d) {
        return Err(Error::InvalidParameter("the divisor must be a section of L".into()));
    }
    let apex = scale_exponent(&flag_nu(&d)?, 1);
    let table = concave_transform(model, m, v)?;
    let body = ConvexBody::from_vertices(okounkov_points(model, m)?.hull)?;
    let tol = Rat::from_integer(0.into());
    let mut rows = Vec::new();
    let mut worst = Rat::from_integer(0.into());
    for (alpha, g) in &table.values {
        let g = g.as_rational().cloned().expect("divisorial values are rational");
        let x = scale_exponent(alpha, m);
        let e = extremal_function(&body, &apex, &x, &tol)?.value;
        worst = worst.max((&g - &e).abs());
        rows.push((alpha.clone(), g, e));
    }
    Ok(ExtremalComparison { apex, max_deviation: worst, rows })
}
