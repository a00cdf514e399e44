//! Explicit realizations of the section spaces `H^0(mL)` as spaces of
//! polynomials in a fixed affine chart.
//!
//! Chart convention: the flag divisor is `{x = 0}` and the flag point is the
//! origin, so lex order with `x` compared first realizes the flag valuation.
//! The blown-up point `q` defaults to `(1, 0)`.

use std::fmt;

use num::{Signed, Zero};

use crate::algebra::rat::{binomial, fmt_rat, parse_rat};
use crate::algebra::{echelonize, kernel, Echelon, MonomialOrder, MultiPoly, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionModel {
    /// `O(d)` on the projective line.
    ProjLine { d: u32 },
    /// `O(d)` on the projective plane.
    ProjPlane { d: u32 },
    /// `f^*H - lambda F` on the blow-up of the plane at `q`.
    BlowupPlane { lambda: Rat, q: [Rat; 2] },
}

impl SectionModel {
    pub fn proj_line(d: u32) -> Self {
        Self::ProjLine { d }
    }

    pub fn proj_plane(d: u32) -> Self {
        Self::ProjPlane { d }
    }

    /// Blow-up at the default point `q = (1, 0)`.
    pub fn blowup(lambda: Rat) -> Result<Self> {
        Self::blowup_at(lambda, [Rat::from_integer(1.into()), Rat::zero()])
    }

    pub fn blowup_at(lambda: Rat, q: [Rat; 2]) -> Result<Self> {
        if lambda.is_negative() || lambda >= Rat::from_integer(1.into()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must lie in [0, 1), got {}",
                fmt_rat(&lambda)
            )));
        }
        if q[0].is_zero() {
            return Err(Error::InvalidParameter(
                "blown-up point must not lie on the flag line x = 0".into(),
            ));
        }
        Ok(Self::BlowupPlane { lambda, q })
    }

    /// Parses `p1:<d>`, `p2:<d>` or `blp2:<num>/<den>` (optionally `@<qx>,<qy>`).
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("model spec {spec:?}: {why}"));
        let (kind, arg) = spec.split_once(':').ok_or_else(|| bad("expected <kind>:<arg>"))?;
        match kind {
            "p1" | "p2" => {
                let d: u32 = arg.trim().parse().map_err(|_| bad("degree must be a positive integer"))?;
                if d == 0 {
                    return Err(bad("degree must be positive"));
                }
                Ok(if kind == "p1" { Self::proj_line(d) } else { Self::proj_plane(d) })
            }
            "blp2" => {
                let (l, q) = match arg.split_once('@') {
                    Some((l, q)) => (l, Some(q)),
                    None => (arg, None),
                };
                let lambda = parse_rat(l)?;
                match q {
                    None => Self::blowup(lambda),
                    Some(q) => {
                        let (a, b) = q.split_once(',').ok_or_else(|| bad("point must be <x>,<y>"))?;
                        Self::blowup_at(lambda, [parse_rat(a)?, parse_rat(b)?])
                    }
                }
            }
            _ => Err(bad("unknown kind (expected p1, p2 or blp2)")),
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Self::ProjLine { .. } => 1,
            _ => 2,
        }
    }

    /// Dimension of the variety.
    pub fn dim(&self) -> usize {
        self.nvars()
    }

    pub fn lambda(&self) -> Option<&Rat> {
        match self {
            Self::BlowupPlane { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    pub fn blown_up_point(&self) -> Option<&[Rat; 2]> {
        match self {
            Self::BlowupPlane { q, .. } => Some(q),
            _ => None,
        }
    }

    /// Validates the level; returns `m * lambda` for the blow-up (0 otherwise).
    pub fn check_level(&self, m: u32) -> Result<u32> {
        if m == 0 {
            return Err(Error::InvalidParameter("level m must be positive".into()));
        }
        match self {
            Self::BlowupPlane { lambda, .. } => {
                let ml = lambda * Rat::from_integer(m.into());
                if !ml.is_integer() {
                    return Err(Error::IncompatibleLevel { m, lambda: fmt_rat(lambda) });
                }
                Ok(u32::try_from(ml.to_integer()).expect("m*lambda < m"))
            }
            _ => Ok(0),
        }
    }

    /// Total degree bound of the sections at level `m`.
    pub fn max_degree(&self, m: u32) -> u32 {
        match self {
            Self::ProjLine { d } | Self::ProjPlane { d } => m * d,
            Self::BlowupPlane { .. } => m,
        }
    }

    /// `vol(L)`: `d`, `d^2`, or `1 - lambda^2`.
    pub fn volume(&self) -> Rat {
        match self {
            Self::ProjLine { d } => Rat::from_integer((*d).into()),
            Self::ProjPlane { d } => Rat::from_integer((d * d).into()),
            Self::BlowupPlane { lambda, .. } => Rat::from_integer(1.into()) - lambda * lambda,
        }
    }

    /// Closed-form `h^0(mL)`.
    pub fn h0_closed_form(&self, m: u32) -> Result<usize> {
        let ml = self.check_level(m)? as i64;
        let n = match self {
            Self::ProjLine { d } => (m * d) as i64 + 1,
            Self::ProjPlane { d } => binomial((m * d) as i64 + 2, 2),
            Self::BlowupPlane { .. } => binomial(m as i64 + 2, 2) - binomial(ml + 1, 2),
        };
        Ok(n as usize)
    }

    pub fn section_basis(&self, m: u32) -> Result<SectionSpace> {
        let ml = self.check_level(m)?;
        let n = self.nvars();
        let deg = self.max_degree(m);
        let monomials = monomials_up_to(n, deg);
        let basis = match self {
            Self::ProjLine { .. } | Self::ProjPlane { .. } => monomials,
            Self::BlowupPlane { q, .. } => {
                // kernel of the Taylor coefficients of order < m*lambda at q
                let pairs = monomials
                    .into_iter()
                    .map(|mono| {
                        let local = mono.recenter(q);
                        let low = MultiPoly::from_terms(
                            2,
                            local
                                .terms()
                                .filter(|(e, _)| e.iter().sum::<u32>() < ml)
                                .map(|(e, c)| (e.clone(), c.clone())),
                        );
                        (low, mono)
                    })
                    .collect();
                let ker = kernel(pairs, &MonomialOrder::lex(2));
                echelonize(&ker, &MonomialOrder::lex(2)).into_iter().map(|(p, _)| p).collect()
            }
        };
        Ok(SectionSpace { model: self.clone(), m, basis })
    }
}

impl fmt::Display for SectionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ProjLine { d } => write!(f, "p1:{d}"),
            Self::ProjPlane { d } => write!(f, "p2:{d}"),
            Self::BlowupPlane { lambda, q } => {
                write!(f, "blp2:{}", fmt_rat(lambda))?;
                if q[0] != Rat::from_integer(1.into()) || !q[1].is_zero() {
                    write!(f, "@{},{}", fmt_rat(&q[0]), fmt_rat(&q[1]))?;
                }
                Ok(())
            }
        }
    }
}

/// All monomials of total degree `<= deg`, in lex order.
pub fn monomials_up_to(nvars: usize, deg: u32) -> Vec<MultiPoly> {
    let one = Rat::from_integer(1.into());
    match nvars {
        1 => (0..=deg).map(|a| MultiPoly::monomial(1, vec![a], one.clone())).collect(),
        2 => (0..=deg)
            .flat_map(|a| (0..=deg - a).map(move |b| (a, b)))
            .map(|(a, b)| MultiPoly::monomial(2, vec![a, b], one.clone()))
            .collect(),
        _ => unimplemented!("section models use at most two variables"),
    }
}

/// `H^0(mL)` with an explicit basis.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pub model: SectionModel,
    pub m: u32,
    pub basis: Vec<MultiPoly>,
}

impl SectionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nvars(&self) -> usize {
        self.model.nvars()
    }

    /// Exact membership test for the span of the basis.
    pub fn contains(&self, s: &MultiPoly) -> bool {
        let mut ech = Echelon::new(MonomialOrder::lex(self.nvars()));
        for b in &self.basis {
            ech.insert(b.clone(), None);
        }
        ech.contains(s)
    }

    /// `sum c_i b_i`.
    pub fn combine(&self, coeffs: &[Rat]) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars());
        for (b, c) in self.basis.iter().zip(coeffs) {
            out.add_scaled(b, c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{int, rat};
    use crate::algebra::{dense_rank, Exponent};

    #[test]
    fn basis_examples() {
        let s = SectionModel::proj_plane(1).section_basis(2).unwrap();
        assert_eq!(s.dim(), 6);
        let s = SectionModel::proj_line(3).section_basis(1).unwrap();
        let exps: Vec<Exponent> = s.basis.iter().map(|b| b.lex_min().unwrap().clone()).collect();
        assert_eq!(exps, vec![vec![0], vec![1], vec![2], vec![3]]);
        let s = SectionModel::blowup(rat(1, 2)).unwrap().section_basis(2).unwrap();
        assert_eq!(s.dim(), 5);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(SectionModel::proj_plane(1).h0_closed_form(3).unwrap(), 10);
        assert_eq!(SectionModel::blowup(rat(1, 2)).unwrap().h0_closed_form(4).unwrap(), 12);
        assert_eq!(SectionModel::proj_line(2).h0_closed_form(5).unwrap(), 11);
    }

    #[test]
    fn blowup_basis_has_multiplicity_at_q() {
        let model = SectionModel::blowup(rat(1, 2)).unwrap();
        let s = model.section_basis(4).unwrap();
        let q = model.blown_up_point().unwrap();
        for b in &s.basis {
            assert!(b.recenter(q).order_at_origin().unwrap() >= 2);
        }
        // rank by an independent dense elimination
        assert_eq!(dense_rank(&s.basis), 12);
    }

    #[test]
    fn incompatible_level() {
        let model = SectionModel::blowup(rat(1, 3)).unwrap();
        assert!(matches!(model.section_basis(2), Err(Error::IncompatibleLevel { .. })));
        assert!(SectionModel::blowup(int(1)).is_err());
        assert!(SectionModel::blowup_at(rat(1, 2), [int(0), int(1)]).is_err());
    }

    #[test]
    fn parse_specs() {
        assert_eq!(SectionModel::parse("p1:2").unwrap(), SectionModel::proj_line(2));
        assert_eq!(SectionModel::parse("p2:1").unwrap(), SectionModel::proj_plane(1));
        assert_eq!(SectionModel::parse("blp2:1/2").unwrap(), SectionModel::blowup(rat(1, 2)).unwrap());
        let m = SectionModel::parse("blp2:1/3@2,1").unwrap();
        assert_eq!(m.to_string(), "blp2:1/3@2,1");
        assert!(SectionModel::parse("p3:1").is_err());
        assert!(SectionModel::parse("p2:0").is_err());
    }
}
