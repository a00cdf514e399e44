//! Real valuations evaluated on polynomial sections, valuation ideals and
//! valuation volumes.

use std::fmt;

use num::{One, Zero};

use crate::algebra::rat::{fmt_rat, int, parse_rat};
use crate::algebra::series::SeriesOrder;
use crate::algebra::{ArcSubstitution, Echelon, MonomialOrder, MultiPoly, QuadExt, Rat, TruncSeries};
use crate::error::{Error, Result};
use crate::models::{monomials_up_to, SectionModel};

/// `v(s)`: a finite value in `Q(sqrt 2)` or `+infinity` for `s = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Finite(QuadExt),
    Infinity,
}

impl Value {
    pub fn rational(r: Rat) -> Self {
        Self::Finite(QuadExt::rational(r))
    }

    pub fn finite(&self) -> Option<&QuadExt> {
        match self {
            Self::Finite(q) => Some(q),
            Self::Infinity => None,
        }
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.finite().and_then(QuadExt::as_rational)
    }

    pub fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => Self::Finite(a + b),
            _ => Self::Infinity,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(q) => write!(f, "{q}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divisor {
    /// The flag divisor `{x = 0}` (the flag point on a curve).
    FlagLine,
    /// The exceptional curve of the blow-up.
    ExceptionalF,
    /// `{D = 0}` for a non-constant polynomial `D`, assumed irreducible.
    Explicit(MultiPoly),
}

/// Formal arcs `t -> center + (t, g(t))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcCurve {
    /// `g(t) = e^t - 1`.
    ExpMinusOne,
    /// `g(t) = sum c_k t^k`.
    Polynomial(Vec<Rat>),
}

impl ArcCurve {
    /// Both components truncated at `order`; the first is always `t`.
    pub fn components(&self, order: usize) -> (TruncSeries, TruncSeries) {
        let g = match self {
            Self::ExpMinusOne => TruncSeries::exp_minus_one(order),
            Self::Polynomial(c) => {
                let mut c = c.clone();
                c.resize(order, Rat::zero());
                TruncSeries::from_coeffs(c)
            }
        };
        (TruncSeries::param(order), g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    Monomial { weights: Vec<QuadExt>, center: Vec<Rat> },
    PrimeDivisor(Divisor),
    Arc { curve: ArcCurve, center: Vec<Rat> },
}

/// Truncation schedule for arc valuations: start, then double up to `cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcBudget {
    pub initial: usize,
    pub cap: usize,
}

pub const DEFAULT_TRUNCATION_CAP: usize = 1 << 14;

impl ArcBudget {
    pub fn new(initial: usize) -> Self {
        Self { initial: initial.max(1), cap: DEFAULT_TRUNCATION_CAP }
    }

    /// The level-`m` schedule, starting at `N_m + 8`.
    pub fn for_level(n_m: usize) -> Self {
        Self::new(n_m + 8)
    }
}

impl Default for ArcBudget {
    fn default() -> Self {
        Self::new(16)
    }
}

/// A valuation that is the minimum over the support of a linear weight
/// after a translation, plus a constant shift.
#[derive(Clone, Debug)]
pub(crate) struct MonomialForm {
    pub weights: Vec<QuadExt>,
    pub center: Vec<Rat>,
    pub shift: QuadExt,
}

impl MonomialForm {
    pub fn order(&self) -> MonomialOrder {
        MonomialOrder::weighted(self.weights.clone())
    }

    pub fn value_of_lead(&self, lead: &[u32]) -> Value {
        let w = crate::algebra::order::weight_of(&self.weights, lead);
        Value::Finite(&w + &self.shift)
    }

    pub fn evaluate(&self, s: &MultiPoly) -> Value {
        let local = s.recenter(&self.center);
        local
            .terms()
            .map(|(e, _)| crate::algebra::order::weight_of(&self.weights, e))
            .min()
            .map_or(Value::Infinity, |w| Value::Finite(&w + &self.shift))
    }
}

impl Valuation {
    pub fn monomial(weights: &[Rat], center: &[Rat]) -> Result<Self> {
        Self::monomial_quad(weights.iter().cloned().map(QuadExt::rational).collect(), center.to_vec())
    }

    pub fn monomial_quad(weights: Vec<QuadExt>, center: Vec<Rat>) -> Result<Self> {
        if weights.is_empty() || weights.len() != center.len() {
            return Err(Error::DimensionMismatch { expected: weights.len(), found: center.len() });
        }
        if !weights.iter().all(QuadExt::is_positive) {
            return Err(Error::InvalidParameter("monomial weights must be strictly positive".into()));
        }
        Ok(Self::Monomial { weights, center })
    }

    /// `ord` at a point of the plane: weights `(1, 1)`.
    pub fn ord_at(center: &[Rat]) -> Result<Self> {
        Self::monomial(&vec![int(1); center.len()], center)
    }

    /// Weights `(1, sqrt 2)` at a point of the plane.
    pub fn sqrt2_monomial(center: [Rat; 2]) -> Self {
        Self::Monomial {
            weights: vec![QuadExt::rational(int(1)), QuadExt::sqrt2()],
            center: center.to_vec(),
        }
    }

    pub fn arc_exp() -> Self {
        Self::Arc { curve: ArcCurve::ExpMinusOne, center: vec![Rat::zero(), Rat::zero()] }
    }

    pub fn ord_poly(d: MultiPoly) -> Result<Self> {
        if d.total_degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidParameter("divisor polynomial must be non-constant".into()));
        }
        Ok(Self::PrimeDivisor(Divisor::Explicit(d)))
    }

    /// Parses `mon:<c1>,<c2>@<x>,<y>`, `mon-sqrt2@<x>,<y>`, `ordflag`, `ordF`,
    /// `ordpoly:<poly>` or `arc-exp`. `nvars` is the model's variable count.
    pub fn parse(spec: &str, nvars: usize) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("valuation spec {spec:?}: {why}"));
        let list = |s: &str| -> Result<Vec<Rat>> { s.split(',').map(parse_rat).collect() };
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("mon-sqrt2") {
            let center = match rest.strip_prefix('@') {
                Some(c) => list(c)?,
                None if rest.is_empty() => vec![Rat::zero(); 2],
                None => return Err(bad("expected @<x>,<y>")),
            };
            if center.len() != 2 {
                return Err(bad("sqrt2 weights need a point of the plane"));
            }
            return Ok(Self::sqrt2_monomial([center[0].clone(), center[1].clone()]));
        }
        if let Some(rest) = spec.strip_prefix("mon:") {
            let (w, c) = match rest.split_once('@') {
                Some((w, c)) => (list(w)?, list(c)?),
                None => {
                    let w = list(rest)?;
                    let n = w.len();
                    (w, vec![Rat::zero(); n])
                }
            };
            if w.len() != nvars {
                return Err(bad(&format!("expected {nvars} weight(s)")));
            }
            return Self::monomial(&w, &c);
        }
        if let Some(p) = spec.strip_prefix("ordpoly:") {
            return Self::ord_poly(MultiPoly::parse(p, nvars)?);
        }
        match spec {
            "ordflag" => Ok(Self::PrimeDivisor(Divisor::FlagLine)),
            "ordF" => Ok(Self::PrimeDivisor(Divisor::ExceptionalF)),
            "arc-exp" => Ok(Self::arc_exp()),
            _ => Err(bad("unknown valuation kind")),
        }
    }

    /// Checks that the valuation makes sense on the model.
    pub fn check_model(&self, model: &SectionModel) -> Result<()> {
        let n = model.nvars();
        match self {
            Self::Monomial { weights, .. } if weights.len() != n => {
                Err(Error::DimensionMismatch { expected: n, found: weights.len() })
            }
            Self::PrimeDivisor(Divisor::ExceptionalF) if model.lambda().is_none() => Err(Error::ModelMismatch(
                "ord_F needs the blow-up model".into(),
            )),
            Self::PrimeDivisor(Divisor::Explicit(d)) if d.nvars() != n => {
                Err(Error::DimensionMismatch { expected: n, found: d.nvars() })
            }
            Self::Arc { .. } if n != 2 => Err(Error::ModelMismatch("arc valuations live on surfaces".into())),
            _ => Ok(()),
        }
    }

    /// Monomial-type description, when the valuation is one (with level
    /// dependent shift for `ord_F`).
    pub(crate) fn monomial_form(&self, model: &SectionModel, m: u32) -> Result<Option<MonomialForm>> {
        self.check_model(model)?;
        let n = model.nvars();
        let origin = vec![Rat::zero(); n];
        Ok(match self {
            Self::Monomial { weights, center } => Some(MonomialForm {
                weights: weights.clone(),
                center: center.clone(),
                shift: QuadExt::zero(),
            }),
            Self::PrimeDivisor(Divisor::FlagLine) => {
                let mut w = vec![QuadExt::zero(); n];
                w[0] = QuadExt::rational(int(1));
                Some(MonomialForm { weights: w, center: origin, shift: QuadExt::zero() })
            }
            Self::PrimeDivisor(Divisor::ExceptionalF) => {
                let ml = model.check_level(m)?;
                let q = model.blown_up_point().expect("checked above");
                Some(MonomialForm {
                    weights: vec![QuadExt::rational(int(1)); 2],
                    center: q.to_vec(),
                    shift: QuadExt::rational(-int(ml as i64)),
                })
            }
            _ => None,
        })
    }

    /// `v(s)` for a section `s` of `mL`.
    pub fn evaluate(&self, s: &MultiPoly, model: &SectionModel, m: u32) -> Result<Value> {
        self.evaluate_with(s, model, m, ArcBudget::default())
    }

    pub fn evaluate_with(&self, s: &MultiPoly, model: &SectionModel, m: u32, budget: ArcBudget) -> Result<Value> {
        if let Some(form) = self.monomial_form(model, m)? {
            return Ok(form.evaluate(s));
        }
        if s.is_zero() {
            return Ok(Value::Infinity);
        }
        match self {
            Self::PrimeDivisor(Divisor::Explicit(d)) => {
                let mut k = 0i64;
                let mut cur = s.clone();
                loop {
                    let (q, r) = cur.div_rem(d);
                    if !r.is_zero() {
                        break;
                    }
                    cur = q;
                    k += 1;
                }
                Ok(Value::rational(int(k)))
            }
            Self::Arc { curve, center } => {
                let local = s.recenter(center);
                let mut order = budget.initial;
                loop {
                    let (g1, g2) = curve.components(order);
                    let series = ArcSubstitution::new((&g1, &g2), order).substitute(&local);
                    match series.order() {
                        SeriesOrder::Exact(k) => return Ok(Value::rational(int(k as i64))),
                        SeriesOrder::AtLeast(t) if t * 2 > budget.cap => {
                            return Err(Error::TruncationExhausted { truncation: t })
                        }
                        SeriesOrder::AtLeast(_) => order *= 2,
                    }
                }
            }
            _ => unreachable!("monomial-type valuations handled above"),
        }
    }

    /// Colength of the valuation ideal `{v >= m}` in the local ring at the
    /// center. Monomial: exact lattice count. Arc: number of values `< m`
    /// attained on polynomials of degree `<= degree_cap`, required to be
    /// stable when the cap grows by 2.
    pub fn colength(&self, m: u32, degree_cap: u32) -> Result<usize> {
        match self {
            Self::Monomial { weights, .. } => Ok(monomial_colength(weights, &QuadExt::rational(int(m as i64)))),
            Self::Arc { curve, .. } => {
                let low = arc_values_below(curve, m as usize, degree_cap);
                if low == m as usize {
                    // at most m values lie in [0, m), so the count is final
                    return Ok(low);
                }
                let high = arc_values_below(curve, m as usize, degree_cap + 2);
                if low != high {
                    return Err(Error::DegreeCapUnstable { cap: degree_cap, low, high });
                }
                Ok(low)
            }
            Self::PrimeDivisor(_) => Err(Error::InvalidParameter(
                "colength needs a valuation centered at a closed point".into(),
            )),
        }
    }

    /// `(d! colength(M) / M^d, exact limit if known)` on a surface (or curve
    /// for one-variable monomial valuations).
    pub fn valuation_volume(&self, level: u32) -> Result<VolumeEstimate> {
        if level == 0 {
            return Err(Error::InvalidParameter("evaluation level must be positive".into()));
        }
        let (dim, exact) = match self {
            Self::Monomial { weights, .. } => {
                let prod = weights.iter().fold(QuadExt::rational(int(1)), |a, w| &a * w);
                (weights.len(), prod.recip())
            }
            Self::Arc { .. } => (2, None),
            Self::PrimeDivisor(_) => {
                return Err(Error::InvalidParameter("valuation volume needs a point center".into()))
            }
        };
        let len = self.colength(level, level + 1)?;
        let fact: i64 = (1..=dim as i64).product();
        let estimate = Rat::new((fact * len as i64).into(), num::pow(num::BigInt::from(level), dim));
        Ok(VolumeEstimate { estimate, exact })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeEstimate {
    pub estimate: Rat,
    pub exact: Option<QuadExt>,
}

/// `#{alpha in N^n : <w, alpha> < bound}`.
pub fn monomial_colength(weights: &[QuadExt], bound: &QuadExt) -> usize {
    fn rec(weights: &[QuadExt], remaining: &QuadExt) -> usize {
        let Some((w, rest)) = weights.split_first() else { return 1 };
        let mut count = 0;
        let mut left = remaining.clone();
        while left.is_positive() {
            count += rec(rest, &left);
            left = &left - w;
        }
        count
    }
    if !bound.is_positive() {
        return 0;
    }
    rec(weights, bound)
}

/// Rank of `Poly_{<= cap} -> Q[t]/(t^m)` under the arc, i.e. the number of
/// distinct values `< m`.
fn arc_values_below(curve: &ArcCurve, m: usize, cap: u32) -> usize {
    let (g1, g2) = curve.components(m);
    let mut sub = ArcSubstitution::new((&g1, &g2), m);
    let mut ech = Echelon::new(MonomialOrder::lex(1));
    let mut monos = monomials_up_to(2, cap);
    monos.sort_by_key(|p| p.total_degree());
    for mono in monos {
        let s = sub.substitute(&mono);
        ech.insert(series_as_poly(&s), None);
        if ech.rank() == m {
            break;
        }
    }
    ech.rank()
}

/// A truncated series as a univariate polynomial, so that lex elimination
/// picks the lowest-order term as leading.
pub(crate) fn series_as_poly(s: &TruncSeries) -> MultiPoly {
    MultiPoly::from_terms(
        1,
        s.coeffs().iter().enumerate().map(|(k, c)| (vec![k as u32], c.clone())),
    )
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pt = |c: &[Rat]| c.iter().map(fmt_rat).collect::<Vec<_>>().join(",");
        match self {
            Self::Monomial { weights, center } => {
                let sqrt2 = weights.len() == 2
                    && weights[0] == QuadExt::rational(Rat::one())
                    && weights[1] == QuadExt::sqrt2();
                if sqrt2 {
                    write!(f, "mon-sqrt2@{}", pt(center))
                } else {
                    let w: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                    write!(f, "mon:{}@{}", w.join(","), pt(center))
                }
            }
            Self::PrimeDivisor(Divisor::FlagLine) => write!(f, "ordflag"),
            Self::PrimeDivisor(Divisor::ExceptionalF) => write!(f, "ordF"),
            Self::PrimeDivisor(Divisor::Explicit(d)) => write!(f, "ordpoly:{d}"),
            Self::Arc { curve: ArcCurve::ExpMinusOne, .. } => write!(f, "arc-exp"),
            Self::Arc { curve: ArcCurve::Polynomial(c), center } => {
                let c: Vec<String> = c.iter().map(fmt_rat).collect();
                write!(f, "arc-poly:{}@{}", c.join(","), pt(center))
            }
        }
    }
}
