use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};
use singlab::cmc1::{classify_point_cmc1, mesh_cmc1, singular_locus_cmc1};
use singlab::export;
use singlab::expr::{parse, Expr};
use singlab::frontal::{self, FrontalMap, Preset, V2};
use singlab::genericity::{perturb_and_classify, Jet2Point, ProbeOptions};
use singlab::mesh::Mesh;
use singlab::weierstrass::{singular_locus_h, LocusOptions, SingularCurve, WeierstrassData};
use singlab::{Rect, Tag};

use crate::config::{JobConfig, Kind};
use crate::error::CliError;
use crate::output::{to_json, Artifacts};

fn parse_field(field: &'static str, src: &str) -> Result<Expr, CliError> {
    parse(src).map_err(|source| CliError::Parse { field, source })
}

fn centre(r: &Rect) -> Complex64 {
    Complex64::new(0.5 * (r.u_min + r.u_max), 0.5 * (r.v_min + r.v_max))
}

/// Weierstrass data from `(g, omega)` or from `h` as `(e^h, 1)`.
fn weierstrass(cfg: &JobConfig) -> Result<WeierstrassData, CliError> {
    let domain = cfg.domain();
    let base = cfg.base_point.map(|b| Complex64::new(b[0], b[1]));
    if let Some(b) = base {
        if !domain.contains(b) {
            return Err(CliError::Config(format!("base point {b} lies outside the domain")));
        }
    }
    match (&cfg.h, &cfg.g, &cfg.omega) {
        (Some(h), _, _) => Ok(WeierstrassData::from_h(parse_field("h", h)?, base.unwrap_or(centre(&domain)), domain)),
        (None, Some(g), Some(w)) => Ok(WeierstrassData::parse(g, w, base, domain)?),
        _ => Err(CliError::Config("missing Weierstrass data".into())),
    }
}

fn frontal_map(cfg: &JobConfig) -> Result<FrontalMap, CliError> {
    let name = cfg.preset.as_deref().unwrap_or_default();
    let preset = Preset::from_name(name).ok_or_else(|| {
        CliError::Config(format!("unknown preset {name:?}; known: {}", frontal::PRESET_NAMES.join(", ")))
    })?;
    let curve = match &cfg.curve {
        Some(c) => Some([parse_field("curve", &c[0])?, parse_field("curve", &c[1])?, parse_field("curve", &c[2])?]),
        None => None,
    };
    let domain = cfg.domain.unwrap_or(preset.default_domain());
    Ok(preset.build(domain, curve)?)
}

fn header(command: &str, cfg: &JobConfig) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("tool".into(), json!("singlab"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m.insert("kind".into(), json!(cfg.kind.name()));
    m
}

fn tag_counts<'a>(tags: impl Iterator<Item = &'a Tag>) -> BTreeMap<String, usize> {
    let mut counts: BTreeMap<String, usize> = Tag::ALL.iter().map(|t| (t.name().to_string(), 0)).collect();
    for t in tags {
        *counts.get_mut(t.name()).expect("all tags present") += 1;
    }
    counts
}

fn locus(cfg: &JobConfig) -> Result<Vec<SingularCurve>, CliError> {
    let tol = &cfg.tolerances;
    Ok(match cfg.kind {
        Kind::Maxface => weierstrass(cfg)?.singular_locus(cfg.grid(), tol)?,
        Kind::Cmc1 => singular_locus_cmc1(&weierstrass(cfg)?, cfg.grid(), tol)?,
        Kind::Genericity => {
            let h = parse_field("h", cfg.h.as_deref().unwrap_or_default())?;
            singular_locus_h(&h, &cfg.domain(), &LocusOptions::new(cfg.grid()), tol)?
        }
        Kind::Frontal => unreachable!("frontal jobs do not trace a Weierstrass locus"),
    })
}

fn curve_summary(command: &str, cfg: &JobConfig, curves: &[SingularCurve], out: Artifacts) -> Value {
    let mut m = header(command, cfg);
    let tags = curves.iter().flat_map(|c| c.points.iter().map(|p| &p.classification.tag));
    m.insert("counts".into(), json!(tag_counts(tags)));
    m.insert("curves".into(), json!(curves.len()));
    m.insert("closed".into(), json!(curves.iter().map(|c| c.closed).collect::<Vec<_>>()));
    m.insert("curve_lengths".into(), json!(curves.iter().map(|c| c.length()).collect::<Vec<_>>()));
    m.insert("points".into(), json!(curves.iter().map(|c| c.points.len()).sum::<usize>()));
    if cfg.kind == Kind::Cmc1 {
        let drift = curves
            .iter()
            .flat_map(|c| &c.points)
            .filter_map(|p| p.classification.diagnostics.det_drift)
            .fold(0.0, f64::max);
        m.insert("max_det_drift".into(), json!(drift));
    }
    m.insert("outputs".into(), json!(out.written));
    Value::Object(m)
}

/// Writes the summary into the output directory as well as returning it.
fn finish(mut out: Artifacts, build: impl FnOnce(Artifacts) -> Value) -> Result<Option<Value>, CliError> {
    let path = out.summary_path();
    out.written.extend(path.clone());
    let summary = build(out);
    if let Some(path) = path {
        std::fs::write(&path, to_json(&summary) + "\n").map_err(|e| CliError::Io(format!("writing {path}: {e}")))?;
    }
    Ok(Some(summary))
}

pub fn classify(cfg: &JobConfig) -> Result<Option<Value>, CliError> {
    let mut out = Artifacts::new(cfg.output.dir.as_deref())?;
    if cfg.kind == Kind::Frontal {
        let map = frontal_map(cfg)?;
        let reports = cfg
            .points()
            .iter()
            .map(|p| frontal::classify(&map, V2::new(p[0], p[1]), &cfg.tolerances))
            .collect::<Result<Vec<_>, _>>()?;
        out.write("classification.csv", &export::frontal_reports_csv(&reports))?;
        return finish(out, |out| {
            let mut m = header("classify", cfg);
            m.insert("preset".into(), json!(map.name));
            m.insert("counts".into(), json!(tag_counts(reports.iter().map(|r| &r.tag))));
            m.insert("reports".into(), json!(reports));
            m.insert("outputs".into(), json!(out.written));
            Value::Object(m)
        });
    }
    let curves = locus(cfg)?;
    out.write("classification.csv", &export::curve_csv(&curves))?;
    finish(out, |out| curve_summary("classify", cfg, &curves, out))
}

pub fn singular_curve(cfg: &JobConfig) -> Result<Option<Value>, CliError> {
    let mut out = Artifacts::new(cfg.output.dir.as_deref())?;
    if cfg.kind == Kind::Frontal {
        let map = frontal_map(cfg)?;
        let p = cfg.points()[0];
        let curve = frontal::trace_singular_curve(&map, V2::new(p[0], p[1]), 0.05, cfg.tolerances.eps_zero)?;
        let psi = frontal::psi_along_curve(&map, &curve)?;
        out.write("curve.csv", &export::frontal_curve_csv(&curve, &psi))?;
        return finish(out, |out| {
            let mut m = header("singular-curve", cfg);
            m.insert("preset".into(), json!(map.name));
            m.insert("nodes".into(), json!(curve.nodes.len()));
            m.insert("closed".into(), json!(curve.closed));
            m.insert("outputs".into(), json!(out.written));
            Value::Object(m)
        });
    }
    let curves = locus(cfg)?;
    out.write("curve.csv", &export::curve_csv(&curves))?;
    finish(out, |out| curve_summary("singular-curve", cfg, &curves, out))
}

fn frontal_mesh(map: &FrontalMap, cfg: &JobConfig) -> Result<Mesh, CliError> {
    let grid = cfg.mesh_grid();
    let mut vertices = Vec::with_capacity(grid.node_count());
    for j in 0..=grid.nv {
        for i in 0..=grid.nu {
            let z = map.domain.node(grid, i, j);
            let p = map.point(z.re, z.im)?;
            vertices.push([p.x, p.y, p.z]);
        }
    }
    Ok(Mesh::grid(vertices, grid))
}

pub fn mesh(cfg: &JobConfig) -> Result<Option<Value>, CliError> {
    let mut out = Artifacts::new(cfg.output.dir.as_deref())?;
    let tol = &cfg.tolerances;
    let mut extra = serde_json::Map::new();
    let mesh = match cfg.kind {
        Kind::Maxface | Kind::Genericity => weierstrass(cfg)?.mesh(cfg.mesh_grid(), tol)?,
        Kind::Cmc1 => {
            let m = mesh_cmc1(&weierstrass(cfg)?, cfg.mesh_grid(), tol)?;
            out.write("mesh_x0.csv", &export::x0_csv(&m.x0))?;
            extra.insert("max_det_drift".into(), json!(m.max_det_drift));
            m.mesh
        }
        Kind::Frontal => frontal_mesh(&frontal_map(cfg)?, cfg)?,
    };
    let obj = mesh.to_obj();
    if !out.enabled() {
        print!("{obj}");
        return Ok(None);
    }
    out.write("mesh.obj", &obj)?;
    finish(out, |out| {
        let mut m = header("mesh", cfg);
        m.insert("vertices".into(), json!(mesh.vertices.len()));
        m.insert("triangles".into(), json!(mesh.triangles.len()));
        m.extend(extra);
        m.insert("outputs".into(), json!(out.written));
        Value::Object(m)
    })
}

pub fn duality_check(cfg: &JobConfig) -> Result<Option<Value>, CliError> {
    if !matches!(cfg.kind, Kind::Maxface | Kind::Cmc1) {
        return Err(CliError::Config("duality-check needs kind maxface or cmc1".into()));
    }
    let mut out = Artifacts::new(cfg.output.dir.as_deref())?;
    let data = weierstrass(cfg)?;
    let dual = data.conjugate();
    let tol = &cfg.tolerances;
    let curves = data.singular_locus(cfg.grid(), tol)?;
    let mut table = String::from("curve,t_index,re_z,im_z,tag,dual_tag,ok\n");
    let mut pairs: BTreeMap<String, usize> = BTreeMap::new();
    let (mut total, mut violations) = (0usize, 0usize);
    for (ci, c) in curves.iter().enumerate() {
        for (i, p) in c.points.iter().enumerate() {
            let (a, b) = match cfg.kind {
                Kind::Cmc1 => (classify_point_cmc1(&data, p.z, tol)?.tag, classify_point_cmc1(&dual, p.z, tol)?.tag),
                _ => (p.classification.tag, dual.classify_point(p.z, tol)?.tag),
            };
            let ok = b == a.dual() || a == Tag::Indeterminate || b == Tag::Indeterminate;
            total += 1;
            violations += usize::from(!ok);
            *pairs.entry(format!("{a}->{b}")).or_insert(0) += 1;
            table.push_str(&format!(
                "{ci},{i},{},{},{a},{b},{ok}\n",
                export::float(p.z.re),
                export::float(p.z.im)
            ));
        }
    }
    out.write("duality.csv", &table)?;
    let summary = finish(out, |out| {
        let mut m = header("duality-check", cfg);
        m.insert("pairs".into(), json!(total));
        m.insert("violations".into(), json!(violations));
        m.insert("pair_counts".into(), json!(pairs));
        m.insert("outputs".into(), json!(out.written));
        Value::Object(m)
    })?
    .expect("summary present");
    if violations > 0 {
        return Err(CliError::Check { message: format!("{violations} of {total} pairs violate the duality"), summary });
    }
    Ok(Some(summary))
}

pub fn genericity_probe(cfg: &JobConfig) -> Result<Option<Value>, CliError> {
    if cfg.kind != Kind::Genericity {
        return Err(CliError::Config("genericity-probe needs kind genericity".into()));
    }
    let mut out = Artifacts::new(cfg.output.dir.as_deref())?;
    let h = parse_field("h", cfg.h.as_deref().unwrap_or_default())?;
    let opts = ProbeOptions {
        magnitude: cfg.magnitude,
        trials: cfg.trials,
        seed: cfg.seed,
        window: cfg.domain(),
        grid: cfg.grid(),
    };
    let report = perturb_and_classify(&h, &opts, &cfg.tolerances)?;
    out.write("genericity.json", &(to_json(&report) + "\n"))?;
    finish(out, |out| {
        let mut m = header("genericity-probe", cfg);
        m.insert("seed".into(), json!(report.seed));
        m.insert("magnitude".into(), json!(report.magnitude));
        m.insert("trials".into(), json!(report.trials));
        m.insert("failures".into(), json!(report.failures));
        m.insert("generic_fraction".into(), json!(report.generic_fraction));
        m.insert("window_note".into(), json!(report.window_note));
        m.insert("outputs".into(), json!(out.written));
        Value::Object(m)
    })
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn jet_check(src: &str, at: [f64; 2], order: usize) -> Result<Value, CliError> {
    let e = parse_field("expr", src)?;
    let z = Complex64::new(at[0], at[1]);
    let j = e
        .eval_jet(z, order)
        .map_err(|source| CliError::Compute(singlab::Error::Eval { field: "expr", at: z, source }))?;
    let mut m = serde_json::Map::new();
    m.insert("expr".into(), json!(e.to_string()));
    m.insert("at".into(), json!(at));
    m.insert("order".into(), json!(order));
    m.insert("coefficients".into(), Value::Array(j.coeffs().iter().map(|c| pair(*c)).collect()));
    m.insert("derivatives".into(), Value::Array((0..=order).map(|k| pair(j.derivative(k))).collect()));
    if order >= 2 {
        let p = Jet2Point::new(z, j.value(), j.derivative(1), j.derivative(2));
        let tol = singlab::Tolerances::default();
        let mut s = serde_json::Map::new();
        s.insert("alpha".into(), pair(p.alpha()));
        s.insert("beta".into(), pair(p.beta()));
        s.insert("membership".into(), json!(p.membership(tol.eps_zero)));
        s.insert("jacobian".into(), json!(p.jacobian_check()));
        if let Ok(c) = p.classify(&tol) {
            s.insert("tag".into(), json!(c.tag));
        }
        m.insert("jet_space".into(), Value::Object(s));
    }
    Ok(Value::Object(m))
}

pub fn presets() -> Value {
    let list: Vec<Value> = Preset::ALL
        .iter()
        .map(|p| json!({ "name": p.name(), "domain": p.default_domain() }))
        .collect();
    json!({ "presets": list, "default_curve": frontal::DEFAULT_CURVE })
}
