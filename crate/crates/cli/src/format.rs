//! Lossless serialization of rationals and the artifact writers.

use std::fmt::Write as _;

use serde_json::{json, Value as Json};
use vanseq::algebra::rat::to_f64;
use vanseq::algebra::{QuadExt, Rat};

use crate::config::RunConfig;

pub const FORMAT_VERSION: &str = "vanseq/1";

/// Always `num/den`, even for integers.
pub fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `num/den` when rational, `a+b*sqrt2` otherwise.
pub fn quad_str(q: &QuadExt) -> String {
    match q.as_rational() {
        Some(r) => rat_str(r),
        None => {
            let sign = if q.b < Rat::from_integer(0.into()) { "" } else { "+" };
            format!("{}{sign}{}*sqrt2", rat_str(&q.a), rat_str(&q.b))
        }
    }
}

pub fn int_json(n: &num::BigInt) -> Json {
    i64::try_from(n).map_or_else(|_| Json::String(n.to_string()), Json::from)
}

/// Rectangular table with rational cells already split into columns.
#[derive(Debug, Default)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# format: {FORMAT_VERSION}");
        let _ = writeln!(s, "# config: {}", serde_json::to_string(cfg).expect("config serializes"));
        let _ = writeln!(s, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

/// Header names for a rational column, `x_num, x_den`.
pub fn rat_header(name: &str) -> [String; 2] {
    [format!("{name}_num"), format!("{name}_den")]
}

/// Header names for a `Q(sqrt 2)` column; the sqrt2 part only when needed.
pub fn quad_header(name: &str, irrational: bool) -> Vec<String> {
    let mut h = rat_header(name).to_vec();
    if irrational {
        h.push(format!("{name}_sqrt2_num"));
        h.push(format!("{name}_sqrt2_den"));
    }
    h
}

pub fn rat_cells(r: &Rat) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

pub fn quad_cells(q: &QuadExt, irrational: bool) -> Vec<String> {
    let mut c = rat_cells(&q.a).to_vec();
    if irrational {
        c.extend(rat_cells(&q.b));
    }
    c
}

/// Wraps a payload with the format version and embedded config.
pub fn json_doc(cfg: &RunConfig, payload: Json) -> Json {
    let mut doc = json!({ "format_version": FORMAT_VERSION, "config": cfg });
    if let (Json::Object(d), Json::Object(p)) = (&mut doc, payload) {
        d.extend(p);
    }
    doc
}

/// Static rendering of a lattice-point body: hull outline and points shaded
/// by their transform value when given.
pub fn body_svg(title: &str, hull: &[Vec<Rat>], points: &[(Vec<Rat>, Option<QuadExt>)]) -> String {
    const SIZE: f64 = 400.0;
    const PAD: f64 = 20.0;
    let xy = |p: &[Rat]| -> (f64, f64) {
        (to_f64(&p[0]), p.get(1).map_or(0.0, to_f64))
    };
    let coords: Vec<(f64, f64)> = hull.iter().chain(points.iter().map(|(p, _)| p)).map(|p| xy(p)).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 1.0f64, 0.0f64, 1.0f64);
    for &(x, y) in &coords {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let scale = (SIZE - 2.0 * PAD) / (x1 - x0).max(y1 - y0).max(f64::EPSILON);
    let map = |(x, y): (f64, f64)| (PAD + (x - x0) * scale, SIZE - PAD - (y - y0) * scale);
    let gmax = points
        .iter()
        .filter_map(|(_, g)| g.as_ref().map(QuadExt::to_f64))
        .fold(0.0f64, f64::max);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(s, "<title>{title}</title>");
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !hull.is_empty() {
        let pts: Vec<String> = hull
            .iter()
            .map(|p| {
                let (x, y) = map(xy(p));
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(s, r#"<polygon points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#, pts.join(" "));
    }
    for (p, g) in points {
        let (x, y) = map(xy(p));
        let shade = match g {
            Some(g) if gmax > 0.0 => 230 - (200.0 * g.to_f64() / gmax).round().clamp(0.0, 200.0) as u32,
            _ => 60,
        };
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="rgb({shade},{shade},255)" stroke="black" stroke-width="0.3"/>"#);
    }
    s.push_str("</svg>\n");
    s
}
