//! One function per subcommand: compute, then package CSV/JSON/SVG payloads.

use num::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value as Json};
use vanseq::algebra::rat::{int, to_f64};
use vanseq::algebra::{QuadExt, Rat};
use vanseq::convex::{
    approach_sequence, conical_test, default_tol, direction_grid, extremal_function, theorem_b_local_body,
    ConicalConfig, ConicalVerdict,
};
use vanseq::filtration::{additivity_violations, GrowthVerdict};
use vanseq::measures::{golden_reference, restricted_volume_empirical, ReferenceKind};
use vanseq::okounkov::{concave_transform, extremal_vs_transform_check, okounkov_points, scale_exponent};
use vanseq::{
    asymptotics, empirical_measure, ks_distance, vanishing_sequence, Cdf, ReferenceCdf, SectionModel, Valuation,
    VanishingSequence,
};

use crate::config::{Command, Resolved, RunConfig};
use crate::format::{body_svg, int_json, quad_cells, quad_header, quad_str, rat_cells, rat_header, rat_str, Csv};
use crate::CliError;

/// Computed artifacts of one run.
pub struct Output {
    pub csv: Csv,
    pub json: Json,
    pub svg: Option<String>,
    pub summary: String,
}

fn usage(flag: &str, message: impl Into<String>) -> CliError {
    CliError::Usage { flag: flag.to_string(), message: message.into() }
}

pub fn execute(cfg: &RunConfig, r: &Resolved) -> Result<Output, CliError> {
    match cfg.command {
        Command::Vanish => vanish(cfg, r),
        Command::Dims => dims(cfg, r),
        Command::Asym => asym(cfg, r),
        Command::Okounkov | Command::Transform => body(cfg, r),
        Command::Equidist => equidist(cfg, r),
        Command::Restvol => restvol(cfg, r),
        Command::Valvol => valvol(cfg, r),
        Command::Extremal => extremal(cfg, r),
        Command::Theoremb => theoremb(cfg, r),
    }
}

fn model_val(r: &Resolved) -> (&SectionModel, &Valuation) {
    (r.model.as_ref().expect("validated"), r.val.as_ref().expect("validated"))
}

fn sequences(cfg: &RunConfig, r: &Resolved) -> Result<Vec<VanishingSequence>, CliError> {
    let (model, v) = model_val(r);
    cfg.m
        .par_iter()
        .map(|&m| vanishing_sequence(model, m, v))
        .collect::<vanseq::Result<Vec<_>>>()
        .map_err(CliError::Compute)
}

fn finite(seq: &VanishingSequence) -> Vec<QuadExt> {
    seq.values.iter().map(|a| a.finite().expect("sections have finite values").clone()).collect()
}

fn any_irrational<'a>(vals: impl IntoIterator<Item = &'a QuadExt>) -> bool {
    vals.into_iter().any(|q| !q.is_rational())
}

fn vanish(cfg: &RunConfig, r: &Resolved) -> Result<Output, CliError> {
    let seqs = sequences(cfg, r)?;
    let vals: Vec<Vec<QuadExt>> = seqs.iter().map(finite).collect();
    let irr = any_irrational(vals.iter().flatten());
    let mut csv = Csv::new(&["m", "j"]);
    csv.header.extend(quad_header("a_j", irr));
    for (seq, vs) in seqs.iter().zip(&vals) {
        for (j, a) in vs.iter().enumerate() {
            let mut row = vec![seq.m.to_string(), (j + 1).to_string()];
            row.extend(quad_cells(a, irr));
            csv.rows.push(row);
        }
    }
    let json = json!({
        "sequences": seqs.iter().zip(&vals).map(|(s, vs)| json!({
            "m": s.m,
            "n": s.len(),
            "values": vs.iter().map(quad_str).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    let last = seqs.last().expect("at least one level");
    let summary = format!(
        "vanish: {} levels, N_{} = {}, a_min = {}, a_max = {}",
        seqs.len(),
        last.m,
        last.len(),
        last.a_min(),
        last.a_max()
    );
    Ok(Output { csv, json, svg: None, summary })
}

fn dims(cfg: &RunConfig, r: &Resolved) -> Result<Output, CliError> {
    let seqs = sequences(cfg, r)?;
    let profiles: Vec<_> = seqs.iter().map(VanishingSequence::profile).collect();
    let irr = any_irrational(profiles.iter().flat_map(|p| p.jumps.iter().map(|(t, _)| t)));
    let mut csv = Csv::new(&["m"]);
    csv.header.extend(quad_header("t", irr));
    csv.header.push("dim".into());
    for (seq, p) in seqs.iter().zip(&profiles) {
        for (t, d) in &p.jumps {
            let mut row = vec![seq.m.to_string()];
            row.extend(quad_cells(t, irr));
            row.push(d.to_string());
            csv.rows.push(row);
        }
    }
    let json = json!({
        "profiles": seqs.iter().zip(&profiles).map(|(s, p)| json!({
            "m": s.m,
            "n": p.n,
            "jumps": p.jumps.iter().map(|(t, d)| json!([quad_str(t), d])).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    let summary = format!("dims: {} levels, {} jumps in total", seqs.len(), csv.rows.len());
    Ok(Output { csv, json, svg: None, summary })
}

fn verdict_name(v: &GrowthVerdict) -> &'static str {
    match v {
        GrowthVerdict::Linear => "linear",
        GrowthVerdict::Superlinear => "superlinear",
        GrowthVerdict::Inconclusive => "inconclusive",
    }
}

fn asym(cfg: &RunConfig, r: &Resolved) -> Result<Output, CliError> {
    let (model, v) = model_val(r);
    let report = asymptotics(model, v, &cfg.m).map_err(CliError::Compute)?;
    let irr = any_irrational(report.rows.iter().flat_map(|row| [&row.a_max, &row.a_min]));
    let names = ["a_max", "a_min", "ratio_max", "ratio_min", "fekete_sup", "fekete_inf"];
    let mut csv = Csv::new(&["m", "n"]);
    for n in names {
        csv.header.extend(quad_header(n, irr));
    }
    let mut rows = Vec::new();
    for row in &report.rows {
        let cells = [&row.a_max, &row.a_min, &row.ratio_max, &row.ratio_min, &row.fekete_sup, &row.fekete_inf];
        let mut line = vec![row.m.to_string(), row.n.to_string()];
        let mut obj = serde_json::Map::new();
        obj.insert("m".into(), json!(row.m));
        obj.insert("n".into(), json!(row.n));
        for (n, q) in names.iter().zip(cells) {
            line.extend(quad_cells(q, irr));
            obj.insert((*n).into(), json!(quad_str(q)));
        }
        csv.rows.push(line);
        rows.push(Json::Object(obj));
    }
    let violations = additivity_violations(&report);
    let json = json!({
        "rows": rows,
        "verdict": verdict_name(&report.verdict),
        "additivity_violations": violations,
    });
    let last = report.rows.last().expect("nonempty");
    let summary = format!(
        "asym: {} levels, a_max/m -> {} (sup {}), growth {}",
        report.rows.len(),
        quad_str(&last.ratio_max),
        quad_str(&last.fekete_sup),
        verdict_name(&report.verdict)
    );
    Ok(Output { csv, json, svg: None, summary })
}

/// Shared by `okounkov` (transform optional) and `transform`.
fn body(cfg: &RunConfig, r: &Resolved) -> Result<Output, CliError> {
    let model = r.model.as_ref().expect("validated");
    let m = cfg.m[0];
    let approx = okounkov_points(model, m).map_err(CliError::Compute)?;
    let table = r.val.as_ref().map(|v| concave_transform(model, m, v)).transpose().map_err(CliError::Compute)?;
    let irr = table.as_ref().is_some_and(|t| any_irrational(t.values.values()));

    let dims = model.nvars();
    let coord_names: Vec<String> = (1..=dims).map(|i| format!("alpha{i}")).collect();
    let mut csv = Csv::new(&coord_names.iter().map(String::as_str).collect::<Vec<_>>());
    if table.is_some() {
        csv.header.extend(quad_header("g", irr));
    }
    let mut g_json = Vec::new();
    let mut svg_points = Vec::new();
    for alpha in &approx.points {
        let g = table.as_ref().and_then(|t| t.get(alpha)).cloned();
        let mut row: Vec<String> = alpha.iter().map(u32::to_string).collect();
        if let Some(g) = &g {
            row.extend(quad_cells(g, irr));
            let mut entry: Vec<Json> = alpha.iter().map(|&a| json!(a)).collect();
            entry.push(int_json(g.a.numer()));
            entry.push(int_json(g.a.denom()));
            if irr {
                entry.push(int_json(g.b.numer()));
                entry.push(int_json(g.b.denom()));
            }
            g_json.push(Json::Array(entry));
        }
        csv.rows.push(row);
        svg_points.push((scale_exponent(alpha, m), g));
    }
    let hull: Vec<Json> = approx.hull.iter().map(|p| json!(p.iter().map(rat_str).collect::<Vec<_>>())).collect();
    let mut payload = json!({
        "m": m,
        "points": approx.points,
        "hull": hull,
        "hull_measure": rat_str(&approx.hull_measure()),
    });
    if let Some(t) = &table {
        let seq = vanishing_sequence(model, m, r.val.as_ref().expect("table needs val")).map_err(CliError::Compute)?;
        let push = t.pushforward();
        let seq_vals = finite(&seq);
        payload["G"] = Json::Array(g_json);
        payload["pushforward"] = json!(push.iter().map(quad_str).collect::<Vec<_>>());
        payload["sequence"] = json!(seq_vals.iter().map(quad_str).collect::<Vec<_>>());
        payload["pushforward_matches"] = json!(push == seq_vals);
    } else if cfg.command == Command::Transform {
        return Err(usage("--val", "required for transform"));
    }
    let title = format!("{} m={m} {}", cfg.model.as_deref().unwrap_or(""), cfg.val.as_deref().unwrap_or(""));
    let svg = Some(body_svg(&title, &approx.hull, &svg_points));
    let summary = format!(
        "{}: m = {m}, {} lattice points, hull measure {}{}",
        cfg.command.name(),
        approx.points.len(),
        rat_str(&approx.hull_measure()),
        match &payload.get("pushforward_matches") {
            Some(Json::Bool(b)) => format!(", pushforward matches sequence: {b}"),
            _ => String::new(),
        }
    );
    Ok(Output { csv, json: payload, svg, summary })
}

fn parse_reference(cfg: &RunConfig, r: &Resolved) -> Result<ReferenceCdf, CliError> {
    let (model, v) = model_val(r);
    let spec = cfg.reference.as_deref().unwrap_or("auto");
    let bad = |e: vanseq::Error| usage("--ref", e.to_string());
    let rats = |s: &str| -> Result<Vec<Rat>, CliError> {
        s.split(',').map(|p| vanseq::algebra::rat::parse_rat(p.trim()).map_err(bad)).collect()
    };
    let golden = || {
        golden_reference(model, v).ok_or_else(|| {
            usage("--ref", format!("no known limit measure for {} with {}; give explicit parameters", model, v))
        })
    };
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (spec, None),
    };
    let reference = match (kind, arg) {
        ("auto", None) => golden()?,
        ("simplex", Some(a)) => {
            let c: [Rat; 3] = rats(a)?.try_into().map_err(|_| usage("--ref", "simplex needs c0,c1,c2"))?;
            ReferenceCdf::simplex_linear_form(c).map_err(bad)?
        }
        ("curve", Some(a)) => ReferenceCdf::curve_uniform(rats(a)?.remove(0)).map_err(bad)?,
        ("blowup", Some(a)) => ReferenceCdf::blowup_exceptional(rats(a)?.remove(0)).map_err(bad)?,
        ("simplex" | "curve" | "blowup", None) => {
            let g = golden()?;
            let ok = matches!(
                (kind, &g.kind),
                ("simplex", ReferenceKind::SimplexLinearForm { .. })
                    | ("curve", ReferenceKind::CurveUniform { .. })
                    | ("blowup", ReferenceKind::BlowupExceptional { .. })
            );
            if !ok {
                return Err(usage("--ref", format!("the known limit for this pair is not of kind {kind}")));
            }
            g
        }
        _ => return Err(usage("--ref", format!("unknown reference {spec:?}"))),
    };
    Ok(reference)
}

fn equidist(cfg: &RunConfig, r: &Resolved) -> Result<Output, CliError> {
    let reference = parse_reference(cfg, r)?;
    let seqs = sequences(cfg, r)?;
    let mut csv = Csv::new(&["m"]);
    for n in ["t", "cdf_emp", "cdf_ref", "deviation"] {
        csv.header.extend(rat_header(n));
    }
    let mut results = Vec::new();
    let mut worst = Rat::zero();
    for seq in &seqs {
        let emp = empirical_measure(seq).map_err(|e| usage("--val", e.to_string()))?;
        let ks = ks_distance(&emp, &reference);
        let mut ts = emp.breakpoints();
        ts.extend(reference.breakpoints());
        if let Some(g) = cfg.grid {
            let (lo, hi) = reference.support();
            let step = Rat::new(1.into(), g.into());
            let mut t = lo.clone();
            while &t <= hi {
                ts.push(t.clone());
                t += &step;
            }
        }
        ts.sort();
        ts.dedup();
        for t in &ts {
            let (fe, fr) = (emp.cdf(t), reference.cdf(t));
            let dev = (&fe - &fr).abs();
            let mut row = vec![seq.m.to_string()];
            for q in [t, &fe, &fr, &dev] {
                row.extend(rat_cells(q));
            }
            csv.rows.push(row);
        }
        results.push(json!({
            "m": seq.m,
            "n": seq.len(),
            "ks": to_f64(&ks),
            "ks_num": int_json(ks.numer()),
            "ks_den": int_json(ks.denom()),
        }));
        worst = worst.max(ks);
    }
    let json = json!({
        "ks": to_f64(&worst),
        "ks_num": int_json(worst.numer()),
        "ks_den": int_json(worst.denom()),
        "results": results,
    });
    let summary = format!("equidist: {} levels, max KS distance {} (~{:.4})", seqs.len(), rat_str(&worst), to_f64(&worst));
    Ok(Output { csv, json, svg: None, summary })
}

fn restvol(cfg: &RunConfig, r: &Resolved) -> Result<Output, CliError> {
    let (model, v) = model_val(r);
    let jobs: Vec<(u32, &Rat)> = cfg.m.iter().flat_map(|&m| r.t.iter().map(move |t| (m, t))).collect();
    let vols = jobs
        .par_iter()
        .map(|(m, t)| restricted_volume_empirical(model, v, *m, t))
        .collect::<vanseq::Result<Vec<_>>>()
        .map_err(|e| match e {
            vanseq::Error::ModelMismatch(_) => usage("--val", e.to_string()),
            e => CliError::Compute(e),
        })?;
    let mut csv = Csv::new(&["m"]);
    csv.header.extend(rat_header("t"));
    csv.header.extend(rat_header("volume"));
    let mut results = Vec::new();
    for ((m, t), vol) in jobs.iter().zip(&vols) {
        let mut row = vec![m.to_string()];
        row.extend(rat_cells(t));
        row.extend(rat_cells(vol));
        csv.rows.push(row);
        results.push(json!({ "m": m, "t": rat_str(t), "volume": rat_str(vol) }));
    }
    let json = json!({ "results": results });
    let summary = format!("restvol: {} (m, t) pairs", results.len());
    Ok(Output { csv, json, svg: None, summary })
}

fn valvol(cfg: &RunConfig, r: &Resolved) -> Result<Output, CliError> {
    let v = r.val.as_ref().expect("validated");
    let ests = cfg
        .m
        .par_iter()
        .map(|&level| v.valuation_volume(level))
        .collect::<vanseq::Result<Vec<_>>>()
        .map_err(CliError::Compute)?;
    let exact = ests.iter().find_map(|e| e.exact.clone());
    let irr = exact.as_ref().is_some_and(|q| !q.is_rational());
    let mut csv = Csv::new(&["level"]);
    csv.header.extend(rat_header("estimate"));
    csv.header.extend(quad_header("exact", irr));
    let mut results = Vec::new();
    for (level, e) in cfg.m.iter().zip(&ests) {
        let mut row = vec![level.to_string()];
        row.extend(rat_cells(&e.estimate));
        match &e.exact {
            Some(q) => row.extend(quad_cells(q, irr)),
            None => row.extend(std::iter::repeat(String::new()).take(if irr { 4 } else { 2 })),
        }
        csv.rows.push(row);
        results.push(json!({
            "level": level,
            "estimate": rat_str(&e.estimate),
            "exact": e.exact.as_ref().map(quad_str),
        }));
    }
    let json = json!({ "results": results });
    let last = ests.last().expect("nonempty");
    let summary = format!(
        "valvol: estimate {} at level {}{}",
        rat_str(&last.estimate),
        cfg.m.last().expect("nonempty"),
        exact.map(|q| format!(", exact {}", quad_str(&q))).unwrap_or_default()
    );
    Ok(Output { csv, json, svg: None, summary })
}

fn extremal(cfg: &RunConfig, r: &Resolved) -> Result<Output, CliError> {
    let (model, v) = model_val(r);
    let m = cfg.m[0];
    let cmp = extremal_vs_transform_check(model, m, v).map_err(|e| match e {
        vanseq::Error::InvalidParameter(_) => usage("--val", e.to_string()),
        vanseq::Error::ModelMismatch(_) => usage("--model", e.to_string()),
        e => CliError::Compute(e),
    })?;
    let mut csv = Csv::new(&["alpha1", "alpha2"]);
    csv.header.extend(rat_header("g"));
    csv.header.extend(rat_header("e"));
    let mut rows = Vec::new();
    for (alpha, g, e) in &cmp.rows {
        let mut row: Vec<String> = alpha.iter().map(u32::to_string).collect();
        row.extend(rat_cells(g));
        row.extend(rat_cells(e));
        csv.rows.push(row);
        rows.push(json!({ "alpha": alpha, "G": rat_str(g), "E": rat_str(e) }));
    }
    let json = json!({
        "m": m,
        "apex": cmp.apex.iter().map(rat_str).collect::<Vec<_>>(),
        "max_deviation": rat_str(&cmp.max_deviation),
        "rows": rows,
    });
    let summary = format!("extremal: m = {m}, max |G_m - E| = {}", rat_str(&cmp.max_deviation));
    Ok(Output { csv, json, svg: None, summary })
}

fn theoremb(cfg: &RunConfig, r: &Resolved) -> Result<Output, CliError> {
    let local = theorem_b_local_body(&r.data).map_err(|e| usage("--data", e.to_string()))?;
    let grid = direction_grid(3, i64::from(cfg.grid.unwrap_or(8)));
    let conical_cfg = ConicalConfig::default();
    let report = conical_test(&local.body, &local.apex, &grid, &conical_cfg).map_err(CliError::Compute)?;
    let tol = r.tol.clone().unwrap_or_else(default_tol);
    let c = int(1);
    let approach = cfg
        .k
        .par_iter()
        .map(|&k| {
            let x = approach_sequence(k, &c);
            extremal_function(&local.body, &local.apex, &x, &tol).map(|e| (k, x, e.value))
        })
        .collect::<vanseq::Result<Vec<_>>>()
        .map_err(CliError::Compute)?;

    let mut csv = Csv::new(&[]);
    for n in ["u1", "u2", "u3", "reach_r", "reach_half"] {
        csv.header.extend(rat_header(n));
    }
    for row in &report.rows {
        let mut line = Vec::new();
        for q in row.direction.iter().chain([&row.reach_r, &row.reach_half]) {
            line.extend(rat_cells(q));
        }
        csv.rows.push(line);
    }
    let (verdict, witness) = match &report.verdict {
        ConicalVerdict::Conical => ("conical", Json::Null),
        ConicalVerdict::NonConical { direction, reach_r, reach_half } => (
            "non-conical",
            json!({
                "direction": direction.iter().map(rat_str).collect::<Vec<_>>(),
                "reach_r": rat_str(reach_r),
                "reach_half": rat_str(reach_half),
            }),
        ),
    };
    let json = json!({
        "apex": local.apex.iter().map(rat_str).collect::<Vec<_>>(),
        "dq_dx2": rat_str(&local.dq_dx2),
        "verdict": verdict,
        "witness": witness,
        "radius": rat_str(&conical_cfg.radius),
        "directions": report.rows.len(),
        "approach": approach.iter().map(|(k, x, e)| json!({
            "k": k,
            "point": x.iter().map(rat_str).collect::<Vec<_>>(),
            "E": rat_str(e),
            "E_approx": to_f64(e),
        })).collect::<Vec<_>>(),
    });
    let e_last = approach.last().map(|(k, _, e)| format!(", E(x_{k}) ~ {:.4}", to_f64(e))).unwrap_or_default();
    let summary = format!("theoremb: apex is {verdict} over {} directions{e_last}", report.rows.len());
    Ok(Output { csv, json, svg: None, summary })
}
