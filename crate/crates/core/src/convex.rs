//! Convex bodies given by exact membership oracles, extremal functions
//! `E_{D,p}(x) = sup{t in [0,1] : x in tp + (1-t)D}`, conical-point tests and
//! the local quadric model of a non-conical Okounkov body.

use std::cmp::Ordering;

use num::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::rat::{fmt_rat, int, rat};
use crate::algebra::{MultiPoly, Rat};
use crate::error::{Error, Result};

pub type Point = Vec<Rat>;

/// `normal . x <= offset`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Self {
        Self { normal, offset }
    }

    pub fn slack(&self, x: &[Rat]) -> Rat {
        &self.offset - dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.slack(x).is_negative()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BodyKind {
    /// Convex hull of the vertices; facets are computed on construction.
    PolytopeV { vertices: Vec<Point> },
    PolytopeH,
    /// Half-spaces plus one constraint `q(x) >= 0`.
    QuadricCapped { quadric: MultiPoly },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexBody {
    pub kind: BodyKind,
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
    pub bbox: (Point, Point),
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rat::zero(), |s, v| s + v)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("bodies live in dimension 2 or 3, got {dim}")))
    }
}

impl ConvexBody {
    pub fn from_halfspaces(halfspaces: Vec<Halfspace>, bbox: (Point, Point)) -> Result<Self> {
        let dim = bbox.0.len();
        check_dim(dim)?;
        if halfspaces.iter().any(|h| h.normal.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: 0 });
        }
        Ok(Self { kind: BodyKind::PolytopeH, dim, halfspaces, bbox })
    }

    pub fn from_vertices(vertices: Vec<Point>) -> Result<Self> {
        let dim = vertices.first().map_or(0, Vec::len);
        check_dim(dim)?;
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: 0 });
        }
        let halfspaces = facets(&vertices)?;
        let bbox = bounding_box(&vertices);
        Ok(Self { kind: BodyKind::PolytopeV { vertices }, dim, halfspaces, bbox })
    }

    pub fn quadric_capped(quadric: MultiPoly, halfspaces: Vec<Halfspace>, bbox: (Point, Point)) -> Result<Self> {
        let dim = bbox.0.len();
        check_dim(dim)?;
        if quadric.nvars() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: quadric.nvars() });
        }
        Ok(Self { kind: BodyKind::QuadricCapped { quadric }, dim, halfspaces, bbox })
    }

    /// The box `[lo, hi]^dim` as half-spaces.
    pub fn box_halfspaces(dim: usize, lo: &Rat, hi: &Rat) -> Vec<Halfspace> {
        let mut out = Vec::new();
        for i in 0..dim {
            let mut n = vec![Rat::zero(); dim];
            n[i] = Rat::one();
            out.push(Halfspace::new(n.clone(), hi.clone()));
            n[i] = -Rat::one();
            out.push(Halfspace::new(n, -lo));
        }
        out
    }

    /// Standard simplex `{x >= 0, sum x <= 1}`.
    pub fn standard_simplex(dim: usize) -> Result<Self> {
        let mut vs = vec![vec![Rat::zero(); dim]];
        for i in 0..dim {
            let mut v = vec![Rat::zero(); dim];
            v[i] = Rat::one();
            vs.push(v);
        }
        Self::from_vertices(vs)
    }

    pub fn is_polytope(&self) -> bool {
        !matches!(self.kind, BodyKind::QuadricCapped { .. })
    }

    pub fn vertices(&self) -> Option<&[Point]> {
        match &self.kind {
            BodyKind::PolytopeV { vertices } => Some(vertices),
            _ => None,
        }
    }

    /// Exact membership (sign evaluations only).
    pub fn membership(&self, x: &[Rat]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(self.contains(x))
    }

    fn contains(&self, x: &[Rat]) -> bool {
        if !self.halfspaces.iter().all(|h| h.contains(x)) {
            return false;
        }
        match &self.kind {
            BodyKind::QuadricCapped { quadric } => !quadric.eval(x).is_negative(),
            _ => true,
        }
    }

    /// Uniform rejection samples from the bounding box.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let den = 1i64 << 12;
        let mut attempts = 0usize;
        while out.len() < count && attempts < count * 10_000 {
            attempts += 1;
            let x: Point = (0..self.dim)
                .map(|i| {
                    let u = rat(rng.gen_range(0..=den), den);
                    &self.bbox.0[i] + (&self.bbox.1[i] - &self.bbox.0[i]) * u
                })
                .collect();
            if self.contains(&x) {
                out.push(x);
            }
        }
        out
    }
}

fn bounding_box(points: &[Point]) -> (Point, Point) {
    let dim = points[0].len();
    let lo = (0..dim).map(|i| points.iter().map(|p| p[i].clone()).min().unwrap()).collect();
    let hi = (0..dim).map(|i| points.iter().map(|p| p[i].clone()).max().unwrap()).collect();
    (lo, hi)
}

fn cross2(o: &[Rat], a: &[Rat], b: &[Rat]) -> Rat {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Exact convex hull (monotone chain), counterclockwise, collinear points dropped.
pub fn convex_hull_2d(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Shoelace area of a counterclockwise polygon.
pub fn polygon_area(hull: &[Point]) -> Rat {
    let n = hull.len();
    if n < 3 {
        return Rat::zero();
    }
    let twice = (0..n)
        .map(|i| {
            let (a, b) = (&hull[i], &hull[(i + 1) % n]);
            &a[0] * &b[1] - &a[1] * &b[0]
        })
        .fold(Rat::zero(), |s, v| s + v);
    twice / int(2)
}

/// Facet half-spaces of the convex hull of `vertices` (full-dimensional).
fn facets(vertices: &[Point]) -> Result<Vec<Halfspace>> {
    let dim = vertices[0].len();
    let degenerate = || Error::InvalidParameter("polytope must be full-dimensional".into());
    if dim == 2 {
        let hull = convex_hull_2d(vertices);
        if hull.len() < 3 {
            return Err(degenerate());
        }
        let n = hull.len();
        return Ok((0..n)
            .map(|i| {
                let (a, b) = (&hull[i], &hull[(i + 1) % n]);
                // outward normal of a ccw edge a -> b
                let normal = vec![&b[1] - &a[1], &a[0] - &b[0]];
                let offset = dot(&normal, a);
                Halfspace::new(normal, offset)
            })
            .collect());
    }
    // dim 3: every plane through three vertices with all vertices on one side
    let mut out: Vec<Halfspace> = Vec::new();
    let n = vertices.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (&vertices[i], &vertices[j], &vertices[k]);
                let u: Vec<Rat> = (0..3).map(|t| &b[t] - &a[t]).collect();
                let v: Vec<Rat> = (0..3).map(|t| &c[t] - &a[t]).collect();
                let mut normal = vec![
                    &u[1] * &v[2] - &u[2] * &v[1],
                    &u[2] * &v[0] - &u[0] * &v[2],
                    &u[0] * &v[1] - &u[1] * &v[0],
                ];
                if normal.iter().all(Zero::is_zero) {
                    continue;
                }
                let offset = dot(&normal, a);
                let sides: Vec<Ordering> = vertices.iter().map(|p| dot(&normal, p).cmp(&offset)).collect();
                let (mut h, off) = if sides.iter().all(|s| s.is_le()) {
                    (std::mem::take(&mut normal), offset)
                } else if sides.iter().all(|s| s.is_ge()) {
                    (normal.iter().map(|x| -x).collect(), -offset)
                } else {
                    continue;
                };
                // normalize so duplicates from coplanar triples collapse
                let scale = h.iter().find(|x| !x.is_zero()).unwrap().abs();
                h = h.iter().map(|x| x / &scale).collect();
                let hs = Halfspace::new(h, off / scale);
                if !out.contains(&hs) {
                    out.push(hs);
                }
            }
        }
    }
    if out.len() < 4 {
        return Err(degenerate());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalEvaluation {
    pub point: Point,
    pub value: Rat,
    /// Zero when the value is exact; otherwise the bisection width.
    pub tolerance: Rat,
}

/// Default bisection tolerance `2^-20`.
pub fn default_tol() -> Rat {
    rat(1, 1 << 20)
}

/// `E_{D,p}(x)`. Exact for polytopes (one ratio per facet); otherwise a dyadic
/// lower bound within `tol` found by bisection on `t` using membership of
/// `(x - tp)/(1 - t)`.
pub fn extremal_function(body: &ConvexBody, p: &[Rat], x: &[Rat], tol: &Rat) -> Result<ExtremalEvaluation> {
    if !body.membership(p)? || !body.membership(x)? {
        return Err(Error::NotInBody);
    }
    let done = |value: Rat, tolerance: Rat| Ok(ExtremalEvaluation { point: x.to_vec(), value, tolerance });
    if x == p {
        return done(Rat::one(), Rat::zero());
    }
    if body.is_polytope() {
        // t (b - a.p) <= b - a.x for every facet a.y <= b
        let mut best = Rat::one();
        for h in &body.halfspaces {
            let denom = h.slack(p);
            if denom.is_positive() {
                best = best.min(h.slack(x) / denom);
            }
        }
        return done(best, Rat::zero());
    }
    let (mut lo, mut hi) = (Rat::zero(), Rat::one());
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / int(2);
        let rest = Rat::one() - &mid;
        let y: Point = x.iter().zip(p).map(|(a, b)| (a - &mid * b) / &rest).collect();
        if body.contains(&y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let width = &hi - &lo;
    done(lo, width)
}

/// Nonzero integer vectors on the surface of the cube `[-k, k]^dim`, scaled to
/// max-norm one.
pub fn direction_grid(dim: usize, k: i64) -> Vec<Point> {
    let mut out = Vec::new();
    let range: Vec<i64> = (-k..=k).collect();
    let mut idx = vec![0usize; dim];
    loop {
        let v: Vec<i64> = idx.iter().map(|&i| range[i]).collect();
        if v.iter().any(|c| c.abs() == k) {
            out.push(v.iter().map(|&c| rat(c, k)).collect());
        }
        let mut d = 0;
        loop {
            if d == dim {
                return out;
            }
            idx[d] += 1;
            if idx[d] < range.len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicalConfig {
    pub radius: Rat,
    /// Allowed difference between the reaches at `r` and `r/2`.
    pub tol: Rat,
    pub bisection_tol: Rat,
}

impl Default for ConicalConfig {
    fn default() -> Self {
        Self { radius: rat(1, 4), tol: rat(1, 64), bisection_tol: rat(1, 1 << 12) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachRow {
    pub direction: Point,
    pub reach_r: Rat,
    pub reach_half: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConicalVerdict {
    Conical,
    NonConical { direction: Point, reach_r: Rat, reach_half: Rat },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicalReport {
    pub verdict: ConicalVerdict,
    pub rows: Vec<ReachRow>,
}

/// `max{s <= r : p + s u in D} / r`, by bisection on `s / r`.
pub fn reach(body: &ConvexBody, p: &[Rat], u: &[Rat], r: &Rat, tol: &Rat) -> Rat {
    let at = |f: &Rat| -> bool {
        let s = r * f;
        let y: Point = p.iter().zip(u).map(|(a, b)| a + &s * b).collect();
        body.contains(&y)
    };
    if at(&Rat::one()) {
        return Rat::one();
    }
    let (mut lo, mut hi) = (Rat::zero(), Rat::one());
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / int(2);
        if at(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Compares the normalized reach along each direction at radii `r` and `r/2`;
/// a cone with apex `p` gives identical reaches once `r` is small enough.
pub fn conical_test(body: &ConvexBody, p: &[Rat], directions: &[Point], cfg: &ConicalConfig) -> Result<ConicalReport> {
    if !body.membership(p)? {
        return Err(Error::NotInBody);
    }
    let half = &cfg.radius / int(2);
    let rows: Vec<ReachRow> = directions
        .iter()
        .map(|u| ReachRow {
            direction: u.clone(),
            reach_r: reach(body, p, u, &cfg.radius, &cfg.bisection_tol),
            reach_half: reach(body, p, u, &half, &cfg.bisection_tol),
        })
        .collect();
    let worst = rows
        .iter()
        .max_by(|a, b| (&a.reach_r - &a.reach_half).abs().cmp(&(&b.reach_r - &b.reach_half).abs()));
    let verdict = match worst {
        Some(w) if (&w.reach_r - &w.reach_half).abs() > cfg.tol => ConicalVerdict::NonConical {
            direction: w.direction.clone(),
            reach_r: w.reach_r.clone(),
            reach_half: w.reach_half.clone(),
        },
        _ => ConicalVerdict::Conical,
    };
    Ok(ConicalReport { verdict, rows })
}

/// Intersection numbers on the surface `Y_1` (and the cap `(L.Y_2)_X`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionData {
    pub l_sq: Rat,
    pub l_y2: Rat,
    pub y2_sq: Rat,
    pub l_y1: Rat,
    pub y1_sq: Rat,
    pub y1_y2: Rat,
    pub cap: Rat,
}

impl Default for IntersectionData {
    fn default() -> Self {
        Self {
            l_sq: int(3),
            l_y2: int(2),
            y2_sq: int(1),
            l_y1: int(1),
            y1_sq: int(-1),
            y1_y2: int(1),
            cap: int(2),
        }
    }
}

impl IntersectionData {
    /// `(Z^2)` for `Z = L|_{Y_1} - Y_2`.
    pub fn z_sq(&self) -> Rat {
        &self.l_sq - int(2) * &self.l_y2 + &self.y2_sq
    }

    /// `(Z . Y_2)`.
    pub fn z_y2(&self) -> Rat {
        &self.l_y2 - &self.y2_sq
    }

    pub fn validate(&self) -> Result<()> {
        if !self.y2_sq.is_positive() {
            return Err(Error::ConditionsViolated(format!("(i) needs (Y2^2) > 0, got {}", fmt_rat(&self.y2_sq))));
        }
        if !self.z_sq().is_zero() {
            return Err(Error::ConditionsViolated(format!("(ii) needs (Z^2) = 0, got {}", fmt_rat(&self.z_sq()))));
        }
        if !self.z_y2().is_positive() {
            return Err(Error::ConditionsViolated(format!("(iii) needs (Z.Y2) > 0, got {}", fmt_rat(&self.z_y2()))));
        }
        Ok(())
    }

    /// `q(x) = (L|_{Y_1} - x_1 Y_1|_{Y_1} - x_2 Y_2)^2` expanded.
    pub fn quadric(&self) -> MultiPoly {
        let c = |e: [u32; 3], v: Rat| MultiPoly::monomial(3, e.to_vec(), v);
        let terms = [
            c([0, 0, 0], self.l_sq.clone()),
            c([1, 0, 0], int(-2) * &self.l_y1),
            c([0, 1, 0], int(-2) * &self.l_y2),
            c([2, 0, 0], self.y1_sq.clone()),
            c([1, 1, 0], int(2) * &self.y1_y2),
            c([0, 2, 0], self.y2_sq.clone()),
        ];
        terms.iter().fold(MultiPoly::zero(3), |a, t| &a + t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalModel {
    pub body: ConvexBody,
    pub apex: Point,
    /// `dq/dx_2(p) = -2 (Z . Y_2)`, nonzero.
    pub dq_dx2: Rat,
}

/// `R_+^3 ∩ {q >= 0} ∩ {x_1 (Y_1.Y_2) + x_2 (Y_2^2) + x_3 <= cap} ∩ [0, 4]^3`.
pub fn theorem_b_local_body(data: &IntersectionData) -> Result<LocalModel> {
    data.validate()?;
    let apex = vec![int(0), int(1), int(0)];
    let cap = Halfspace::new(vec![data.y1_y2.clone(), data.y2_sq.clone(), int(1)], data.cap.clone());
    if !cap.slack(&apex).is_positive() {
        return Err(Error::ConditionsViolated("apex (0,1,0) must be interior to the cap half-space".into()));
    }
    let mut hs = ConvexBody::box_halfspaces(3, &int(0), &int(4));
    hs.push(cap);
    let quadric = data.quadric();
    let dq_dx2 = int(-2) * &data.l_y2 + int(2) * &data.y2_sq;
    debug_assert_eq!(dq_dx2, int(-2) * data.z_y2());
    let body = ConvexBody::quadric_capped(quadric, hs, (vec![int(0); 3], vec![int(4); 3]))?;
    Ok(LocalModel { body, apex, dq_dx2 })
}

/// `x_k = (1/k, 1 - c/k^2, 0)`, a sequence in the local model tending to the apex.
pub fn approach_sequence(k: i64, c: &Rat) -> Point {
    vec![rat(1, k), Rat::one() - c * rat(1, k * k), Rat::zero()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[(i64, i64)]) -> Point {
        v.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    fn unit_square() -> ConvexBody {
        ConvexBody::from_vertices(vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (0, 1)]), pt(&[(1, 1), (1, 1)]), pt(&[(0, 1), (1, 1)])])
            .unwrap()
    }

    /// `{0 <= x <= 1, y^2 <= x}`
    fn parabola() -> ConvexBody {
        let q = MultiPoly::parse("x - y^2", 2).unwrap();
        let hs = ConvexBody::box_halfspaces(2, &int(-1), &int(1));
        ConvexBody::quadric_capped(q, hs, (pt(&[(0, 1), (-1, 1)]), pt(&[(1, 1), (1, 1)]))).unwrap()
    }

    #[test]
    fn membership_examples() {
        let s = ConvexBody::standard_simplex(2).unwrap();
        assert!(s.membership(&pt(&[(1, 3), (1, 3)])).unwrap());
        assert!(!s.membership(&pt(&[(1, 1), (1, 1)])).unwrap());
        assert!(s.membership(&pt(&[(1, 1)])).is_err());
        let b = theorem_b_local_body(&IntersectionData::default()).unwrap();
        assert!(b.body.membership(&b.apex).unwrap());
    }

    #[test]
    fn extremal_examples() {
        let sq = unit_square();
        let e = extremal_function(&sq, &pt(&[(0, 1), (0, 1)]), &pt(&[(1, 2), (1, 2)]), &default_tol()).unwrap();
        assert_eq!(e.value, rat(1, 2));
        let p = pt(&[(1, 3), (1, 1)]);
        assert_eq!(extremal_function(&sq, &p, &p, &default_tol()).unwrap().value, int(1));

        let par = parabola();
        let origin = pt(&[(0, 1), (0, 1)]);
        for k in 2..8 {
            let x = pt(&[(1, k * k), (1, k)]);
            let e = extremal_function(&par, &origin, &x, &default_tol()).unwrap();
            assert!(e.value <= default_tol(), "k = {k}");
        }
        assert_eq!(
            extremal_function(&sq, &origin, &pt(&[(2, 1), (0, 1)]), &default_tol()),
            Err(Error::NotInBody)
        );
    }

    #[test]
    fn bisection_agrees_with_exact_polytope_formula() {
        // the square written as a quadric body with a vacuous quadric
        let sq = unit_square();
        let q = MultiPoly::constant(2, int(1));
        let as_quadric = ConvexBody::quadric_capped(q, sq.halfspaces.clone(), sq.bbox.clone()).unwrap();
        let p = pt(&[(1, 4), (0, 1)]);
        for x in sq.sample_points(20, 7) {
            let a = extremal_function(&sq, &p, &x, &default_tol()).unwrap().value;
            let b = extremal_function(&as_quadric, &p, &x, &default_tol()).unwrap().value;
            assert!(b <= a && &a - &b <= default_tol());
        }
    }

    #[test]
    fn hulls() {
        let pts = vec![
            pt(&[(0, 1), (0, 1)]),
            pt(&[(1, 2), (0, 1)]),
            pt(&[(1, 1), (0, 1)]),
            pt(&[(0, 1), (1, 1)]),
            pt(&[(1, 4), (1, 4)]),
        ];
        let h = convex_hull_2d(&pts);
        assert_eq!(h, vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (0, 1)]), pt(&[(0, 1), (1, 1)])]);
        assert_eq!(polygon_area(&h), rat(1, 2));
        let tet = ConvexBody::standard_simplex(3).unwrap();
        assert_eq!(tet.halfspaces.len(), 4);
    }

    #[test]
    fn conical_examples() {
        let tri = ConvexBody::standard_simplex(2).unwrap();
        let dirs = direction_grid(2, 8);
        let r = conical_test(&tri, &pt(&[(0, 1), (0, 1)]), &dirs, &ConicalConfig::default()).unwrap();
        assert_eq!(r.verdict, ConicalVerdict::Conical);
        let r = conical_test(&parabola(), &pt(&[(0, 1), (0, 1)]), &dirs, &ConicalConfig::default()).unwrap();
        assert!(matches!(r.verdict, ConicalVerdict::NonConical { .. }));
    }

    #[test]
    fn theorem_b_validation() {
        let d = IntersectionData::default();
        assert_eq!(d.z_sq(), int(0));
        assert_eq!(d.z_y2(), int(1));
        let b = theorem_b_local_body(&d).unwrap();
        assert_eq!(b.dq_dx2, int(-2));
        let q = d.quadric();
        for x3 in 0..3 {
            assert_eq!(q.eval(&[int(0), int(1), int(x3)]), int(0));
        }
        let bad = IntersectionData { l_sq: int(4), ..IntersectionData::default() };
        assert!(matches!(theorem_b_local_body(&bad), Err(Error::ConditionsViolated(_))));
        let bad = IntersectionData { y2_sq: int(0), l_sq: int(4), ..IntersectionData::default() };
        assert!(matches!(theorem_b_local_body(&bad), Err(Error::ConditionsViolated(m)) if m.starts_with("(i)")));
    }

    #[test]
    fn approach_sequence_stays_inside_and_drops_extremal_value() {
        let b = theorem_b_local_body(&IntersectionData::default()).unwrap();
        for k in [4, 8, 16, 32] {
            let x = approach_sequence(k, &int(1));
            let e = extremal_function(&b.body, &b.apex, &x, &default_tol()).unwrap();
            assert!(e.value <= rat(1, 2), "k = {k}: {}", e.value);
        }
    }
}
