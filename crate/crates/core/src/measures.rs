//! Empirical measures of scaled vanishing sequences, exact reference limit
//! measures, Kolmogorov-Smirnov distances and restricted volumes.

use num::{One, Signed, Zero};

use crate::algebra::rat::{fmt_rat, int};
use crate::algebra::{QuadExt, Rat};
use crate::error::{Error, Result};
use crate::filtration::{vanishing_sequence, VanishingSequence};
use crate::models::SectionModel;
use crate::valuation::{Divisor, Valuation};

/// Cumulative distribution functions that can be compared exactly.
pub trait Cdf {
    /// `P(X <= t)`
    fn cdf(&self, t: &Rat) -> Rat;
    /// `P(X < t)`
    fn cdf_left(&self, t: &Rat) -> Rat;
    /// Points off which the CDF is continuous and, between consecutive
    /// points, monotone.
    fn breakpoints(&self) -> Vec<Rat>;
}

/// Finitely many atoms `(location, mass)` with sorted, distinct locations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepMeasure {
    pub atoms: Vec<(Rat, Rat)>,
}

impl StepMeasure {
    pub fn new(mut atoms: Vec<(Rat, Rat)>) -> Result<Self> {
        if atoms.iter().any(|(_, w)| !w.is_positive()) {
            return Err(Error::InvalidParameter("atom masses must be positive".into()));
        }
        atoms.sort();
        let mut merged: Vec<(Rat, Rat)> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            match merged.last_mut() {
                Some((y, v)) if *y == x => *v += w,
                _ => merged.push((x, w)),
            }
        }
        Ok(Self { atoms: merged })
    }

    pub fn total_mass(&self) -> Rat {
        self.atoms.iter().fold(Rat::zero(), |s, (_, w)| s + w)
    }

    /// Mass of the closed interval `[lo, hi]`.
    pub fn mass_in(&self, lo: &Rat, hi: &Rat) -> Rat {
        self.atoms
            .iter()
            .filter(|(x, _)| x >= lo && x <= hi)
            .fold(Rat::zero(), |s, (_, w)| s + w)
    }

    pub fn support(&self) -> Option<(&Rat, &Rat)> {
        Some((&self.atoms.first()?.0, &self.atoms.last()?.0))
    }
}

impl Cdf for StepMeasure {
    fn cdf(&self, t: &Rat) -> Rat {
        self.atoms.iter().take_while(|(x, _)| x <= t).fold(Rat::zero(), |s, (_, w)| s + w)
    }

    fn cdf_left(&self, t: &Rat) -> Rat {
        self.atoms.iter().take_while(|(x, _)| x < t).fold(Rat::zero(), |s, (_, w)| s + w)
    }

    fn breakpoints(&self) -> Vec<Rat> {
        self.atoms.iter().map(|(x, _)| x.clone()).collect()
    }
}

/// `nu_m = (1/N_m) sum_j delta_{a_j / m}`.
pub fn empirical_measure(seq: &VanishingSequence) -> Result<StepMeasure> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let n = Rat::from_integer(seq.len().into());
    let m = Rat::from_integer(seq.m.into());
    let atoms = seq
        .values
        .iter()
        .map(|a| {
            a.as_rational()
                .map(|r| (r / &m, Rat::one() / &n))
                .ok_or_else(|| Error::InvalidParameter(format!("value {a} is not rational")))
        })
        .collect::<Result<Vec<_>>>()?;
    StepMeasure::new(atoms)
}

/// Polynomial in `t`, coefficients by increasing degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(pub Vec<Rat>);

impl UniPoly {
    pub fn eval(&self, t: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c)
    }

    pub fn antiderivative(&self) -> UniPoly {
        let mut out = vec![Rat::zero()];
        out.extend(self.0.iter().enumerate().map(|(k, c)| c / int(k as i64 + 1)));
        UniPoly(out)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly(self.0.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect())
    }

    /// `a t + b`
    fn linear(a: Rat, b: Rat) -> UniPoly {
        UniPoly(vec![b, a])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReferenceKind {
    /// Lebesgue measure on `[0, d]`, normalized.
    CurveUniform { d: Rat },
    /// Pushforward of normalized area on the standard triangle by
    /// `c0 + c1 x + c2 y`.
    SimplexLinearForm { coefficients: [Rat; 3] },
    /// Density `2 (lambda + t) / (1 - lambda^2)` on `[0, 1 - lambda]`.
    BlowupExceptional { lambda: Rat },
    Custom,
}

/// A probability measure with a piecewise-polynomial density on
/// `[start, end]`; the CDF is its exact antiderivative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceCdf {
    pub kind: ReferenceKind,
    /// `(lo, hi, density)` on consecutive intervals.
    pub pieces: Vec<(Rat, Rat, UniPoly)>,
    cdf_pieces: Vec<(Rat, Rat, UniPoly)>,
}

impl ReferenceCdf {
    /// Builds from density pieces, which must be contiguous and integrate to 1.
    pub fn from_density(kind: ReferenceKind, pieces: Vec<(Rat, Rat, UniPoly)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidParameter("reference measure needs a density".into()));
        }
        let mut acc = Rat::zero();
        let mut cdf_pieces = Vec::new();
        for (i, (lo, hi, dens)) in pieces.iter().enumerate() {
            if lo >= hi || (i > 0 && pieces[i - 1].1 != *lo) {
                return Err(Error::InvalidParameter("density pieces must be contiguous and nondegenerate".into()));
            }
            let mut anti = dens.antiderivative();
            // shift so the piece starts at the accumulated mass
            anti.0[0] = &acc - anti.eval(lo);
            acc = anti.eval(hi);
            cdf_pieces.push((lo.clone(), hi.clone(), anti));
        }
        if !acc.is_one() {
            return Err(Error::InvalidParameter(format!("density integrates to {}, not 1", fmt_rat(&acc))));
        }
        Ok(Self { kind, pieces, cdf_pieces })
    }

    pub fn curve_uniform(d: Rat) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::InvalidParameter("degree must be positive".into()));
        }
        let dens = UniPoly(vec![Rat::one() / &d]);
        Self::from_density(ReferenceKind::CurveUniform { d: d.clone() }, vec![(Rat::zero(), d, dens)])
    }

    pub fn simplex_linear_form(coefficients: [Rat; 3]) -> Result<Self> {
        let [c0, c1, c2] = coefficients.clone();
        let mut v = [c0.clone(), &c0 + &c1, &c0 + &c2];
        v.sort();
        let [v0, v1, v2] = v;
        if v0 == v2 {
            return Err(Error::InvalidParameter("constant linear form has no density".into()));
        }
        let two = int(2);
        let span = &v2 - &v0;
        let mut pieces = Vec::new();
        if v0 < v1 {
            // 2 (t - v0) / ((v1 - v0)(v2 - v0))
            let k = &two / ((&v1 - &v0) * &span);
            pieces.push((v0.clone(), v1.clone(), UniPoly::linear(k.clone(), -k * &v0)));
        }
        if v1 < v2 {
            // 2 (v2 - t) / ((v2 - v1)(v2 - v0))
            let k = &two / ((&v2 - &v1) * &span);
            pieces.push((v1.clone(), v2.clone(), UniPoly::linear(-k.clone(), k * &v2)));
        }
        Self::from_density(ReferenceKind::SimplexLinearForm { coefficients }, pieces)
    }

    pub fn blowup_exceptional(lambda: Rat) -> Result<Self> {
        if lambda.is_negative() || lambda >= Rat::one() {
            return Err(Error::InvalidParameter(format!("lambda must lie in [0, 1), got {}", fmt_rat(&lambda))));
        }
        let vol = Rat::one() - &lambda * &lambda;
        let k = int(2) / &vol;
        let dens = UniPoly::linear(k.clone(), k * &lambda);
        Self::from_density(
            ReferenceKind::BlowupExceptional { lambda: lambda.clone() },
            vec![(Rat::zero(), Rat::one() - lambda, dens)],
        )
    }

    pub fn support(&self) -> (&Rat, &Rat) {
        (&self.pieces[0].0, &self.pieces[self.pieces.len() - 1].1)
    }

    pub fn density(&self, t: &Rat) -> Rat {
        self.pieces
            .iter()
            .find(|(lo, hi, _)| t >= lo && t < hi)
            .map_or_else(Rat::zero, |(_, _, d)| d.eval(t))
    }

    /// `int density` over the support, computed piece by piece.
    pub fn total_mass(&self) -> Rat {
        self.pieces.iter().fold(Rat::zero(), |s, (lo, hi, d)| {
            let a = d.antiderivative();
            s + a.eval(hi) - a.eval(lo)
        })
    }
}

impl Cdf for ReferenceCdf {
    fn cdf(&self, t: &Rat) -> Rat {
        let (lo, hi) = self.support();
        if t < lo {
            return Rat::zero();
        }
        if t >= hi {
            return Rat::one();
        }
        let (_, _, f) = self.cdf_pieces.iter().find(|(a, b, _)| t >= a && t < b).expect("inside support");
        f.eval(t)
    }

    fn cdf_left(&self, t: &Rat) -> Rat {
        self.cdf(t)
    }

    fn breakpoints(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.pieces.iter().map(|(lo, _, _)| lo.clone()).collect();
        v.push(self.support().1.clone());
        v
    }
}

/// `sup_t |F_emp(t) - F_ref(t)|`, evaluated at every breakpoint of either
/// CDF and at their left limits.
pub fn ks_distance(emp: &impl Cdf, reference: &impl Cdf) -> Rat {
    let mut pts = emp.breakpoints();
    pts.extend(reference.breakpoints());
    pts.sort();
    pts.dedup();
    pts.iter()
        .flat_map(|t| {
            [
                (emp.cdf(t) - reference.cdf(t)).abs(),
                (emp.cdf_left(t) - reference.cdf_left(t)).abs(),
            ]
        })
        .max()
        .unwrap_or_else(Rat::zero)
}

/// The known limit measure for the golden (model, valuation) pairs.
pub fn golden_reference(model: &SectionModel, v: &Valuation) -> Option<ReferenceCdf> {
    let zero = Rat::zero();
    let one = Rat::one();
    match (model, v) {
        (SectionModel::ProjLine { d }, Valuation::Monomial { weights, .. }) if weights.len() == 1 => {
            let w = weights[0].as_rational()?;
            ReferenceCdf::curve_uniform(Rat::from_integer((*d).into()) * w).ok()
        }
        (SectionModel::ProjLine { d }, Valuation::PrimeDivisor(Divisor::FlagLine)) => {
            ReferenceCdf::curve_uniform(Rat::from_integer((*d).into())).ok()
        }
        (SectionModel::ProjPlane { d: 1 }, Valuation::Monomial { weights, center }) => {
            let unit = weights.iter().all(|w| w.as_rational().is_some_and(Rat::is_one));
            if !unit {
                return None;
            }
            if center.iter().all(Zero::is_zero) {
                ReferenceCdf::simplex_linear_form([zero.clone(), one.clone(), one]).ok()
            } else if !center[0].is_zero() {
                ReferenceCdf::simplex_linear_form([one.clone(), -one, zero]).ok()
            } else {
                None
            }
        }
        (SectionModel::ProjPlane { d: 1 }, Valuation::PrimeDivisor(Divisor::FlagLine)) => {
            ReferenceCdf::simplex_linear_form([zero.clone(), one, zero]).ok()
        }
        (SectionModel::BlowupPlane { lambda, .. }, Valuation::PrimeDivisor(Divisor::ExceptionalF)) => {
            ReferenceCdf::blowup_exceptional(lambda.clone()).ok()
        }
        _ => None,
    }
}

/// `(1/m) (dim F^{mt} - dim F^{mt+1})` for `ord_F` on the blow-up or the flag
/// line on the plane: the rank of restricting `F^{mt}` to the divisor.
pub fn restricted_volume_empirical(model: &SectionModel, divisor: &Valuation, m: u32, t: &Rat) -> Result<Rat> {
    match (model, divisor) {
        (SectionModel::BlowupPlane { .. }, Valuation::PrimeDivisor(Divisor::ExceptionalF))
        | (SectionModel::ProjPlane { .. }, Valuation::PrimeDivisor(Divisor::FlagLine)) => {}
        _ => {
            return Err(Error::ModelMismatch(
                "restricted volumes need (blp2, ordF) or (p2, ordflag)".into(),
            ))
        }
    }
    let level = t * Rat::from_integer(m.into());
    if t.is_negative() || !level.is_integer() {
        return Err(Error::InvalidParameter(format!(
            "non-integral level: m*t = {} must be a nonnegative integer",
            fmt_rat(&level)
        )));
    }
    let seq = vanishing_sequence(model, m, divisor)?;
    let at = |s: Rat| seq.dim_at(&QuadExt::rational(s));
    let rank = at(level.clone()) - at(level + Rat::one());
    Ok(Rat::new(rank.into(), m.into()))
}

/// `max_t |dim F^{mt} / N_m - (1 - CDF_ref(t))|` over the grid.
pub fn dervol_identity_check(model: &SectionModel, v: &Valuation, m: u32, grid: &[Rat], reference: &ReferenceCdf) -> Result<Rat> {
    let seq = vanishing_sequence(model, m, v)?;
    Ok(dervol_deviation(&seq, grid, reference))
}

pub fn dervol_deviation(seq: &VanishingSequence, grid: &[Rat], reference: &ReferenceCdf) -> Rat {
    let n = Rat::from_integer(seq.len().into());
    let m = Rat::from_integer(seq.m.into());
    grid.iter()
        .map(|t| {
            let d = Rat::from_integer(seq.dim_at(&QuadExt::rational(t * &m)).into());
            (d / &n - (Rat::one() - reference.cdf(t))).abs()
        })
        .max()
        .unwrap_or_else(Rat::zero)
}
