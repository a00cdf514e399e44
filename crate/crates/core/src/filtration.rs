//! Adapted bases, vanishing sequences and their asymptotics.

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};
use rayon::prelude::*;

use crate::algebra::rat::int;
use crate::algebra::egf::{eliminate, row_order, IntRow};
use crate::algebra::{echelonize_tagged, kernel, EgfArc, Echelon, MonomialOrder, MultiPoly, QuadExt, Rat};
use crate::error::{Error, Result};
use crate::models::{SectionModel, SectionSpace};
use crate::valuation::{ArcBudget, ArcCurve, Divisor, Valuation, Value};

/// A basis together with the value of each element, sorted by value (ties by
/// the lex-minimal exponent of the witness).
pub type AdaptedBasis = Vec<(MultiPoly, Value)>;

/// Basis `b_1..b_N` of the space with `F^t = span{b_i : v(b_i) >= t}` for all `t`.
pub fn adapted_basis(space: &SectionSpace, v: &Valuation) -> Result<AdaptedBasis> {
    if space.dim() == 0 {
        return Err(Error::InvalidParameter("section space is zero".into()));
    }
    let mut out = if let Some(form) = v.monomial_form(&space.model, space.m)? {
        let rows = space.basis.iter().map(|b| (b.recenter(&form.center), b.clone())).collect();
        echelonize_tagged(rows, &form.order())
            .into_iter()
            .map(|r| (r.tag.expect("tagged"), form.value_of_lead(&r.lead)))
            .collect()
    } else {
        match v {
            Valuation::Arc { curve, center } => arc_adapted_basis(space, curve, center, ArcBudget::for_level(space.dim()))?,
            Valuation::PrimeDivisor(Divisor::Explicit(d)) => divisorial_adapted_basis(space, d),
            _ => unreachable!("monomial-type valuations handled above"),
        }
    };
    sort_basis(&mut out);
    Ok(out)
}

fn sort_basis(b: &mut AdaptedBasis) {
    b.sort_by(|(p, a), (q, c)| a.cmp(c).then_with(|| p.lex_min().cmp(&q.lex_min())));
}

/// Incremental elimination on arc series: each section is reduced against the
/// pivot rows at its lowest order until that order is new. Graded pieces of an
/// arc valuation are at most one-dimensional, so the pivot orders are exactly
/// the values and the pivot rows form an adapted basis. Rows live in integer
/// EGF coordinates; each row is the image of the section stored beside it.
fn arc_adapted_basis(space: &SectionSpace, curve: &ArcCurve, center: &[Rat], budget: ArcBudget) -> Result<AdaptedBasis> {
    let n = space.dim();
    let mut order = budget.initial;
    'restart: loop {
        let (g1, g2) = curve.components(order);
        let mut arc = EgfArc::new((&g1, &g2), order);
        // row = EGF image of sum_i tag_i * lambda_i * basis_i
        let mut lambdas = Vec::with_capacity(n);
        let mut pivots: BTreeMap<usize, (IntRow, IntRow)> = BTreeMap::new();
        for (i, b) in space.basis.iter().enumerate() {
            let (mut row, lambda) = arc.image(&b.recenter(center));
            lambdas.push(lambda);
            let mut tag = vec![BigInt::zero(); n];
            tag[i] = BigInt::one();
            loop {
                let Some(k) = row_order(&row) else {
                    order = grow(order, budget)?;
                    continue 'restart;
                };
                match pivots.get(&k) {
                    Some((prow, ptag)) => {
                        eliminate(&mut row, &mut tag, prow, ptag, k);
                    }
                    None => {
                        pivots.insert(k, (row, tag));
                        break;
                    }
                }
            }
        }
        let coeff_row = |tag: &IntRow| -> Vec<Rat> {
            tag.iter().zip(&lambdas).map(|(c, l)| l * Rat::from_integer(c.clone())).collect()
        };
        return Ok(pivots
            .into_iter()
            .map(|(k, (_, tag))| (space.combine(&coeff_row(&tag)), Value::rational(int(k as i64))))
            .collect());
    }
}

fn grow(order: usize, budget: ArcBudget) -> Result<usize> {
    let next = order * 2;
    if next > budget.cap {
        return Err(Error::TruncationExhausted { truncation: order });
    }
    Ok(next)
}

/// `F^k = {s : D^k | s}` is the kernel of the linear map `s -> s mod D^k`;
/// the basis is assembled from the deepest step outwards.
fn divisorial_adapted_basis(space: &SectionSpace, d: &MultiPoly) -> AdaptedBasis {
    let lex = MonomialOrder::lex(space.nvars());
    let mut steps: Vec<Vec<MultiPoly>> = vec![space.basis.clone()];
    let mut power = d.clone();
    loop {
        let pairs = space.basis.iter().map(|b| (b.div_rem(&power).1, b.clone())).collect();
        let ker = kernel(pairs, &lex);
        if ker.is_empty() {
            break;
        }
        steps.push(ker);
        power = &power * d;
    }
    let mut ech = Echelon::new(lex);
    let mut out = Vec::new();
    for (k, step) in steps.iter().enumerate().rev() {
        for s in step {
            if let crate::algebra::Insertion::Pivot(_) = ech.insert(s.clone(), None) {
                out.push((s.clone(), Value::rational(int(k as i64))));
            }
        }
    }
    out
}

/// Sorted values `a_1 <= ... <= a_N` of an adapted basis, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingSequence {
    pub m: u32,
    pub values: Vec<Value>,
    pub witnesses: Vec<MultiPoly>,
}

impl VanishingSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn a_max(&self) -> &QuadExt {
        self.values.last().and_then(Value::finite).expect("nonempty finite sequence")
    }

    pub fn a_min(&self) -> &QuadExt {
        self.values.first().and_then(Value::finite).expect("nonempty finite sequence")
    }

    /// `dim F^t = #{j : a_j >= t}`.
    pub fn dim_at(&self, t: &QuadExt) -> usize {
        let t = Value::Finite(t.clone());
        self.values.len() - self.values.partition_point(|a| *a < t)
    }

    /// Jumping numbers `e_j = a_{N-j}`, largest first.
    pub fn jumping_numbers(&self) -> Vec<Value> {
        self.values.iter().rev().cloned().collect()
    }

    pub fn all_distinct(&self) -> bool {
        self.values.windows(2).all(|w| w[0] != w[1])
    }

    pub fn profile(&self) -> FiltrationProfile {
        let mut jumps: Vec<(QuadExt, usize)> = Vec::new();
        for (j, a) in self.values.iter().enumerate() {
            let a = a.finite().expect("finite values").clone();
            if jumps.last().map(|(t, _)| *t != a).unwrap_or(true) {
                jumps.push((a, self.values.len() - j));
            }
        }
        FiltrationProfile { n: self.values.len(), jumps }
    }
}

pub fn vanishing_sequence(model: &SectionModel, m: u32, v: &Valuation) -> Result<VanishingSequence> {
    let space = model.section_basis(m)?;
    let basis = adapted_basis(&space, v)?;
    let (witnesses, values) = basis.into_iter().unzip();
    Ok(VanishingSequence { m, values, witnesses })
}

/// Right-continuous step function `t -> dim F^t`: equal to `dim` on
/// `(previous jump, jump]`, to `n` for `t <= first jump` and `0` past the last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationProfile {
    pub n: usize,
    pub jumps: Vec<(QuadExt, usize)>,
}

impl FiltrationProfile {
    pub fn dim_at(&self, t: &QuadExt) -> usize {
        match self.jumps.iter().find(|(j, _)| t <= j) {
            Some((_, d)) => *d,
            None => 0,
        }
    }

    /// Point masses of `-d/dt dim F^t`, one per jump, with multiplicities.
    pub fn derivative_atoms(&self) -> Vec<(QuadExt, usize)> {
        self.jumps
            .iter()
            .enumerate()
            .map(|(i, (t, d))| (t.clone(), d - self.jumps.get(i + 1).map_or(0, |(_, e)| *e)))
            .collect()
    }
}

pub fn filtration_dims(model: &SectionModel, m: u32, v: &Valuation) -> Result<FiltrationProfile> {
    Ok(vanishing_sequence(model, m, v)?.profile())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthVerdict {
    Linear,
    Superlinear,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelRow {
    pub m: u32,
    pub n: usize,
    pub a_max: QuadExt,
    pub a_min: QuadExt,
    pub ratio_max: QuadExt,
    pub ratio_min: QuadExt,
    /// `sup` of `a_max/m` over the levels seen so far.
    pub fekete_sup: QuadExt,
    /// `inf` of `a_min/m` over the levels seen so far.
    pub fekete_inf: QuadExt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticsReport {
    pub rows: Vec<LevelRow>,
    pub verdict: GrowthVerdict,
}

/// Per-level extremal values and Fekete bounds, levels taken in increasing order.
pub fn asymptotics(model: &SectionModel, v: &Valuation, m_list: &[u32]) -> Result<AsymptoticsReport> {
    if m_list.is_empty() {
        return Err(Error::InvalidParameter("level list is empty".into()));
    }
    let mut levels = m_list.to_vec();
    levels.sort_unstable();
    levels.dedup();
    let seqs: Vec<VanishingSequence> = levels
        .par_iter()
        .map(|&m| vanishing_sequence(model, m, v))
        .collect::<Result<_>>()?;
    let mut rows: Vec<LevelRow> = Vec::with_capacity(seqs.len());
    for s in seqs {
        let inv = Rat::new(One::one(), s.m.into());
        let ratio_max = s.a_max().scale(&inv);
        let ratio_min = s.a_min().scale(&inv);
        let (fekete_sup, fekete_inf) = match rows.last() {
            Some(r) => (r.fekete_sup.clone().max(ratio_max.clone()), r.fekete_inf.clone().min(ratio_min.clone())),
            None => (ratio_max.clone(), ratio_min.clone()),
        };
        rows.push(LevelRow {
            m: s.m,
            n: s.len(),
            a_max: s.a_max().clone(),
            a_min: s.a_min().clone(),
            ratio_max,
            ratio_min,
            fekete_sup,
            fekete_inf,
        });
    }
    let verdict = growth_verdict(&rows);
    Ok(AsymptoticsReport { rows, verdict })
}

/// Superlinear: last ratio at least 3/2 times the first and the ratios strictly
/// increase over the last (up to) three levels. Linear: every ratio within
/// `1/m` of the last one. Otherwise inconclusive.
pub fn growth_verdict(rows: &[LevelRow]) -> GrowthVerdict {
    let ratios: Vec<&QuadExt> = rows.iter().map(|r| &r.ratio_max).collect();
    let (first, last) = (ratios[0], ratios[ratios.len() - 1]);
    let tail = &ratios[ratios.len().saturating_sub(3)..];
    let increasing = tail.len() >= 2 && tail.windows(2).all(|w| w[0] < w[1]);
    if increasing && *last >= first.scale(&Rat::new(3.into(), 2.into())) && first.signum() >= 0 {
        return GrowthVerdict::Superlinear;
    }
    let constant = rows.iter().all(|r| {
        let diff = &r.ratio_max - last;
        let tol = QuadExt::rational(Rat::new(One::one(), r.m.into()));
        diff <= tol && -&diff <= tol
    });
    if constant {
        GrowthVerdict::Linear
    } else {
        GrowthVerdict::Inconclusive
    }
}

/// `a_min(mL, v) = 0` at every listed level.
pub fn amin_nef_check(model: &SectionModel, v: &Valuation, m_list: &[u32]) -> bool {
    m_list.iter().all(|&m| match vanishing_sequence(model, m, v) {
        Ok(s) => s.a_min().signum() == 0,
        Err(_) => false,
    })
}

/// Pairs of levels `(m, m')` with `m + m'` also present where
/// `a_max` fails superadditivity or `a_min` fails subadditivity.
pub fn additivity_violations(report: &AsymptoticsReport) -> Vec<(u32, u32)> {
    let find = |m: u32| report.rows.iter().find(|r| r.m == m);
    let mut bad = Vec::new();
    for a in &report.rows {
        for b in &report.rows {
            if a.m > b.m {
                continue;
            }
            if let Some(c) = find(a.m + b.m) {
                if c.a_max < &a.a_max + &b.a_max || c.a_min > &a.a_min + &b.a_min {
                    bad.push((a.m, b.m));
                }
            }
        }
    }
    bad
}

/// Rank of the conditions `{Taylor coefficients of weight < t vanish}` on the
/// section space, computed without any adapted basis: returns `dim F^t`.
pub fn monomial_filtration_rank(space: &SectionSpace, weights: &[QuadExt], center: &[Rat], t: &QuadExt) -> usize {
    let order = MonomialOrder::lex(space.nvars());
    let pairs: Vec<(MultiPoly, MultiPoly)> = space
        .basis
        .iter()
        .map(|b| {
            let local = b.recenter(center);
            let low = MultiPoly::from_terms(
                space.nvars(),
                local
                    .terms()
                    .filter(|(e, _)| crate::algebra::order::weight_of(weights, e) < *t)
                    .map(|(e, c)| (e.clone(), c.clone())),
            );
            (low, b.clone())
        })
        .collect();
    kernel(pairs, &order).len()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{binomial, rat};

    fn values(s: &VanishingSequence) -> Vec<i64> {
        s.values
            .iter()
            .map(|v| {
                let r = v.as_rational().unwrap();
                assert!(r.is_integer());
                i64::try_from(r.to_integer()).unwrap()
            })
            .collect()
    }

    fn origin() -> Vec<Rat> {
        vec![int(0), int(0)]
    }

    #[test]
    fn adapted_basis_examples() {
        let v = Valuation::monomial(&[int(1)], &[int(0)]).unwrap();
        let s = vanishing_sequence(&SectionModel::proj_line(2), 1, &v).unwrap();
        assert_eq!(values(&s), vec![0, 1, 2]);

        let v = Valuation::ord_at(&[int(1), int(1)]).unwrap();
        let s = vanishing_sequence(&SectionModel::proj_plane(1), 1, &v).unwrap();
        assert_eq!(values(&s), vec![0, 1, 1]);

        let s = vanishing_sequence(&SectionModel::proj_plane(1), 1, &Valuation::arc_exp()).unwrap();
        assert_eq!(values(&s), vec![0, 1, 2]);
    }

    #[test]
    fn vanishing_sequence_examples() {
        let v = Valuation::ord_at(&origin()).unwrap();
        let s = vanishing_sequence(&SectionModel::proj_plane(1), 2, &v).unwrap();
        assert_eq!(values(&s), vec![0, 1, 1, 2, 2, 2]);

        let bl = SectionModel::blowup(rat(1, 2)).unwrap();
        let s = vanishing_sequence(&bl, 2, &Valuation::PrimeDivisor(Divisor::ExceptionalF)).unwrap();
        assert_eq!(values(&s), vec![0, 0, 1, 1, 1]);

        let v = Valuation::monomial(&[int(1)], &[int(0)]).unwrap();
        let s = vanishing_sequence(&SectionModel::proj_line(3), 1, &v).unwrap();
        assert_eq!(values(&s), vec![0, 1, 2, 3]);
    }

    #[test]
    fn witnesses_realize_values() {
        let plane = SectionModel::proj_plane(1);
        for v in [
            Valuation::ord_at(&[int(1), int(1)]).unwrap(),
            Valuation::arc_exp(),
            Valuation::ord_poly(MultiPoly::parse("x+y-1", 2).unwrap()).unwrap(),
            Valuation::PrimeDivisor(Divisor::FlagLine),
        ] {
            let s = vanishing_sequence(&plane, 3, &v).unwrap();
            assert_eq!(s.len(), 10);
            for (w, a) in s.witnesses.iter().zip(&s.values) {
                assert_eq!(&v.evaluate(w, &plane, 3).unwrap(), a, "{v}");
            }
        }
    }

    #[test]
    fn filtration_dims_examples() {
        let v = Valuation::ord_at(&origin()).unwrap();
        let p = filtration_dims(&SectionModel::proj_plane(1), 3, &v).unwrap();
        let q = |n, d| QuadExt::rational(rat(n, d));
        assert_eq!(p.dim_at(&q(0, 1)), 10);
        for k in 1..=3 {
            assert_eq!(p.dim_at(&q(k, 1)) as i64, 10 - binomial(k + 1, 2));
            assert_eq!(p.dim_at(&q(2 * k - 1, 2)) as i64, 10 - binomial(k + 1, 2));
        }
        assert_eq!(p.dim_at(&q(7, 2)), 0);
        let total: usize = p.derivative_atoms().iter().map(|(_, k)| k).sum();
        assert_eq!(total, 10);
    }

    #[test]
    fn rank_oracle_matches_adapted_basis() {
        let plane = SectionModel::proj_plane(1);
        let center = vec![int(1), int(1)];
        let w = vec![QuadExt::rational(int(1)), QuadExt::rational(int(2))];
        let v = Valuation::monomial_quad(w.clone(), center.clone()).unwrap();
        let space = plane.section_basis(3).unwrap();
        let seq = vanishing_sequence(&plane, 3, &v).unwrap();
        for (t, d) in seq.profile().jumps {
            assert_eq!(monomial_filtration_rank(&space, &w, &center, &t), d);
        }
    }

    #[test]
    fn asymptotics_examples() {
        let plane = SectionModel::proj_plane(1);
        let v = Valuation::ord_at(&origin()).unwrap();
        let r = asymptotics(&plane, &v, &[2, 4, 8]).unwrap();
        assert!(r.rows.iter().all(|row| row.ratio_max == QuadExt::rational(int(1))));
        assert_eq!(r.verdict, GrowthVerdict::Linear);
        assert!(additivity_violations(&r).is_empty());

        let bl = SectionModel::blowup(rat(1, 2)).unwrap();
        let r = asymptotics(&bl, &Valuation::PrimeDivisor(Divisor::ExceptionalF), &[2, 4, 8]).unwrap();
        assert!(r.rows.iter().all(|row| row.ratio_max == QuadExt::rational(rat(1, 2))));
        assert_eq!(r.verdict, GrowthVerdict::Linear);

        let r = asymptotics(&plane, &Valuation::arc_exp(), &[2, 3, 4, 5]).unwrap();
        for row in &r.rows {
            assert!(row.a_max >= QuadExt::rational(int(row.n as i64 - 1)));
        }
        assert!(r.rows.windows(2).all(|w| w[0].ratio_max < w[1].ratio_max));
        assert_eq!(r.verdict, GrowthVerdict::Superlinear);
    }

    #[test]
    fn amin_vanishes_for_ample_bundles() {
        let plane = SectionModel::proj_plane(1);
        assert!(amin_nef_check(&plane, &Valuation::ord_at(&[int(1), int(1)]).unwrap(), &[1, 2, 3]));
        let bl = SectionModel::blowup(rat(1, 2)).unwrap();
        assert!(amin_nef_check(&bl, &Valuation::PrimeDivisor(Divisor::ExceptionalF), &[2, 4]));
        let line = SectionModel::proj_line(2);
        assert!(amin_nef_check(&line, &Valuation::PrimeDivisor(Divisor::FlagLine), &[1, 2, 5]));
    }
}
