//! Replays corpus records against the library and reports per-check outcomes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use unidisk_core::classify::{
    cayley_conjugate, classify, rotation_order, self_map_report, ClassTag,
};
use unidisk_core::intertwine::{
    check_conditions, residual_on_grid, solve_family, type_compatible, Verdict,
};
use unidisk_core::moebius::{Complex, DiskMap, Moebius};
use unidisk_core::roots::{embeddable, identity_roots, roots_elliptic};
use unidisk_core::{dynamics, tol};

use crate::record::{complex_of, Check, ExampleRecord, MapSpec, PointSpec, Quad};
use crate::registry::{self, NamedMap};

/// Outcome of a single expected assertion.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    /// Which operation ran, with its inputs.
    pub label: String,
    /// The stored expectation.
    pub expected: String,
    /// What the library computed.
    pub measured: String,
    pub pass: bool,
}

/// All outcomes for one record.
#[derive(Debug, Clone, Serialize)]
pub struct RecordReport {
    pub id: String,
    pub pass: bool,
    pub checks: Vec<CheckOutcome>,
}

/// Merged report over a corpus, in record order.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub records: Vec<RecordReport>,
    pub total: usize,
    pub failed: usize,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    /// JSON form of the full report.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed-width table, one line per check plus a summary line.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        for rec in &self.records {
            let mark = if rec.pass { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{} [{}]", rec.id, mark);
            for check in &rec.checks {
                let mark = if check.pass { "ok  " } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "  {} {:<42} expected {} | measured {}",
                    mark, check.label, check.expected, check.measured
                );
            }
        }
        let _ = writeln!(
            out,
            "{} of {} records pass",
            self.total - self.failed,
            self.total
        );
        out
    }
}

/// A resolved map slot: inline coefficients or a registry evaluator.
enum Resolved {
    Lft(Moebius),
    Named(&'static NamedMap),
}

impl Resolved {
    fn as_dyn(&self) -> &dyn DiskMap {
        match self {
            Resolved::Lft(m) => m,
            Resolved::Named(n) => *n,
        }
    }

    fn as_lft(&self) -> Result<&Moebius, String> {
        match self {
            Resolved::Lft(m) => Ok(m),
            Resolved::Named(n) => Err(format!(
                "map \"{}\" is not linear fractional, so this check does not apply",
                n.name
            )),
        }
    }
}

fn resolve(record: &ExampleRecord) -> Result<BTreeMap<&str, Resolved>, String> {
    let mut out = BTreeMap::new();
    for (name, spec) in &record.maps {
        let resolved = match spec {
            MapSpec::Named(key) => Resolved::Named(
                registry::lookup(key).ok_or_else(|| format!("unknown registry map \"{key}\""))?,
            ),
            MapSpec::Lft(quad) => {
                Resolved::Lft(quad.to_moebius().map_err(|e| format!("map {name}: {e}"))?)
            }
        };
        out.insert(name.as_str(), resolved);
    }
    Ok(out)
}

fn tag_name(tag: ClassTag) -> String {
    serde_json::to_value(tag)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_else(|| tag.to_string())
}

fn fmt_pair(z: Complex) -> String {
    format!("[{}, {}]", z.re, z.im)
}

struct Ctx<'a> {
    maps: &'a BTreeMap<&'a str, Resolved>,
}

impl<'a> Ctx<'a> {
    fn get(&self, name: &str) -> Result<&'a Resolved, String> {
        self.maps
            .get(name)
            .ok_or_else(|| format!("record has no map named \"{name}\""))
    }

    fn lft(&self, name: &str) -> Result<&'a Moebius, String> {
        self.get(name)?.as_lft()
    }
}

fn outcome(label: String, expected: String, result: Result<(String, bool), String>) -> CheckOutcome {
    match result {
        Ok((measured, pass)) => CheckOutcome {
            label,
            expected,
            measured,
            pass,
        },
        Err(message) => CheckOutcome {
            label,
            expected,
            measured: format!("error: {message}"),
            pass: false,
        },
    }
}

fn run_classify(
    ctx: &Ctx,
    map: &str,
    tag: &str,
    dw: &Option<PointSpec>,
    multiplier: &Option<[f64; 2]>,
    boundary_case: &Option<bool>,
) -> Result<(String, bool), String> {
    let m = ctx.lft(map)?;
    let cls = classify(m).map_err(|e| e.to_string())?;
    let got_tag = tag_name(cls.tag);
    let mut pass = got_tag == tag;
    let mut measured = got_tag;
    if let Some(point) = dw {
        let want = point.to_sphere()?;
        match &cls.dw {
            Some(got) => {
                pass &= got.chordal(&want) <= tol::FIXED_SET_CHORDAL;
                let _ = write!(measured, ", dw {got}");
            }
            None => {
                pass = false;
                measured.push_str(", dw absent");
            }
        }
    }
    if let Some(want) = multiplier {
        let gap = (cls.multiplier - complex_of(*want)).norm();
        pass &= gap <= 1e-9;
        let _ = write!(measured, ", multiplier {}", fmt_pair(cls.multiplier));
    }
    if let Some(want) = boundary_case {
        pass &= cls.boundary_case == *want;
        let _ = write!(measured, ", boundary_case {}", cls.boundary_case);
    }
    Ok((measured, pass))
}

fn run_fixed_points(ctx: &Ctx, map: &str, points: &[PointSpec]) -> Result<(String, bool), String> {
    let m = ctx.lft(map)?;
    let got = m.fixed_points().points();
    let measured = got
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    if got.len() != points.len() {
        return Ok((measured, false));
    }
    let mut used = vec![false; got.len()];
    for want in points {
        let want = want.to_sphere()?;
        let hit = got
            .iter()
            .enumerate()
            .find(|(i, p)| !used[*i] && p.chordal(&want) <= tol::FIXED_SET_CHORDAL);
        match hit {
            Some((i, _)) => used[i] = true,
            None => return Ok((measured, false)),
        }
    }
    Ok((measured, true))
}

fn run_roots_count(
    ctx: &Ctx,
    map: &str,
    n: u32,
    count: usize,
    roots: &[Quad],
) -> Result<(String, bool), String> {
    let m = ctx.lft(map)?;
    let got = roots_elliptic(m, n).map_err(|e| e.to_string())?;
    let mut pass = got.len() == count;
    let mut used = vec![false; got.len()];
    for want in roots {
        let want = want.to_moebius().map_err(|e| e.to_string())?;
        let hit = got
            .iter()
            .enumerate()
            .find(|(i, g)| !used[*i] && g.proj_distance(&want) <= 1e-9);
        match hit {
            Some((i, _)) => used[i] = true,
            None => pass = false,
        }
    }
    let measured = format!(
        "{} roots: {}",
        got.len(),
        got.iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    );
    Ok((measured, pass))
}

fn run_boundary_probe(
    ctx: &Ctx,
    map: &str,
    at: [f64; 2],
    target: &Option<[f64; 2]>,
    behavior: &str,
) -> Result<(String, bool), String> {
    let f = ctx.get(map)?.as_dyn();
    let p = complex_of(at);
    let q = target.map(complex_of);
    // Approach radially: toward an interior point directly, toward a boundary
    // point along (1 - t) p.
    let step = |t: f64| -> Complex {
        if p.norm() < 0.999 {
            p + Complex::new(t, 0.0)
        } else {
            (1.0 - t) * p
        }
    };
    match behavior {
        "derivative_zero" | "derivative_infinite" => {
            let q = q.ok_or("probe requires a target value")?;
            let t = 1e-5;
            let probe = (f.eval(step(t)).map_err(|e| e.to_string())? - q).norm() / t;
            let pass = if behavior == "derivative_zero" {
                probe <= 1e-4
            } else {
                probe >= 100.0
            };
            Ok((format!("|f(z(t)) - q| / t = {probe:.3e} at t = 1e-5"), pass))
        }
        "no_radial_limit" => {
            let mut values = Vec::new();
            for k in 1..=3 {
                let t = 10f64.powi(-2 * k);
                values.push(f.eval(step(t)).map_err(|e| e.to_string())?);
            }
            let norms: Vec<f64> = values.iter().map(|v| v.norm()).collect();
            let spread = norms.iter().cloned().fold(f64::MIN, f64::max)
                - norms.iter().cloned().fold(f64::MAX, f64::min);
            let mut min_gap = f64::MAX;
            for i in 0..values.len() {
                for j in i + 1..values.len() {
                    min_gap = min_gap.min((values[i] - values[j]).norm());
                }
            }
            let pass = spread < 1e-9 && min_gap > 1e-9;
            Ok((
                format!("modulus spread {spread:.2e}, value separation {min_gap:.2e}"),
                pass,
            ))
        }
        other => Err(format!("unknown probe behavior \"{other}\"")),
    }
}

fn run_family(
    ctx: &Ctx,
    phi: &str,
    psi: &str,
    kind: &str,
    sample_count: &Option<usize>,
) -> Result<(String, bool), String> {
    let phi = ctx.lft(phi)?;
    let psi = ctx.lft(psi)?;
    let family = solve_family(phi, psi).map_err(|e| e.to_string())?;
    let got_kind = serde_json::to_value(family.kind)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    let mut pass = got_kind == kind;
    let mut measured = got_kind;
    if let Some(want) = sample_count {
        let members = family.sample(7, *want, 600);
        let mut worst = 0.0f64;
        for f in &members {
            worst = worst.max(f.compose(phi).proj_distance(&psi.compose(f)));
        }
        pass &= members.len() >= *want && worst <= 1e-9;
        let _ = write!(
            measured,
            ", {} members sampled, worst residual {worst:.2e}",
            members.len()
        );
    }
    Ok((measured, pass))
}

fn run_identity_root(p: [f64; 2], lambda: [f64; 2], n: u32) -> Result<(String, bool), String> {
    let g = identity_roots(complex_of(p), complex_of(lambda), n).map_err(|e| e.to_string())?;
    let cls = classify(&g).map_err(|e| e.to_string())?;
    let closes = g.iterate_n(u64::from(n)).is_identity();
    let pass = cls.tag == ClassTag::EllipticAut && closes;
    Ok((
        format!(
            "{}, iterate {} returns to the identity: {}",
            tag_name(cls.tag),
            n,
            closes
        ),
        pass,
    ))
}

fn run_check(ctx: &Ctx, check: &Check) -> CheckOutcome {
    match check {
        Check::Classify {
            map,
            tag,
            dw,
            multiplier,
            boundary_case,
        } => {
            let mut expected = tag.clone();
            if let Some(m) = multiplier {
                let _ = write!(expected, ", multiplier [{}, {}]", m[0], m[1]);
            }
            outcome(
                format!("classify {map}"),
                expected,
                run_classify(ctx, map, tag, dw, multiplier, boundary_case),
            )
        }
        Check::SelfMap {
            map,
            is_self_map,
            boundary_contact,
        } => outcome(
            format!("self_map {map}"),
            format!("is_self_map {is_self_map}"),
            ctx.lft(map).map(|m| {
                let report = self_map_report(m);
                let mut pass = report.is_self_map == *is_self_map;
                if let Some(want) = boundary_contact {
                    pass &= report.boundary_contact == *want;
                }
                (
                    format!(
                        "is_self_map {}, boundary_contact {}, margin {:.3e}",
                        report.is_self_map, report.boundary_contact, report.margin_coeff
                    ),
                    pass,
                )
            }),
        ),
        Check::FixedPoints { map, points } => outcome(
            format!("fixed_points {map}"),
            format!("{} points", points.len()),
            run_fixed_points(ctx, map, points),
        ),
        Check::ResidualLe { f, phi, psi, bound } => outcome(
            format!("residual {f}, {phi}, {psi}"),
            format!("<= {bound:.1e}"),
            (|| {
                let worst = residual_on_grid(
                    ctx.get(f)?.as_dyn(),
                    ctx.get(phi)?.as_dyn(),
                    ctx.get(psi)?.as_dyn(),
                )
                .map_err(|e| e.to_string())?;
                Ok((format!("{worst:.3e}"), worst <= *bound))
            })(),
        ),
        Check::DirectEquationLe { f, phi, psi, bound } => outcome(
            format!("direct equation {f}, {phi}, {psi}"),
            format!("<= {bound:.1e}"),
            (|| {
                let f = ctx.lft(f)?;
                let phi = ctx.lft(phi)?;
                let psi = ctx.lft(psi)?;
                let gap = f.compose(phi).proj_distance(&psi.compose(f));
                Ok((format!("{gap:.3e}"), gap <= *bound))
            })(),
        ),
        Check::Conditions {
            f,
            phi,
            psi,
            holds,
            reason_contains,
        } => outcome(
            format!("conditions {f}, {phi}, {psi}"),
            match reason_contains {
                Some(frag) => format!("holds {holds}, reason mentions \"{frag}\""),
                None => format!("holds {holds}"),
            },
            (|| {
                let report = check_conditions(ctx.lft(f)?, ctx.lft(phi)?, ctx.lft(psi)?)
                    .map_err(|e| e.to_string())?;
                let mut pass = report.holds == *holds;
                if let Some(frag) = reason_contains {
                    pass &= report.reason.contains(frag.as_str());
                }
                Ok((format!("holds {}: {}", report.holds, report.reason), pass))
            })(),
        ),
        Check::Compatible { phi, psi, verdict } => outcome(
            format!("compatible {phi} -> {psi}"),
            verdict.clone(),
            (|| {
                let p = classify(ctx.lft(phi)?).map_err(|e| e.to_string())?;
                let q = classify(ctx.lft(psi)?).map_err(|e| e.to_string())?;
                let comp = type_compatible(p.tag, q.tag);
                let got = match comp.verdict {
                    Verdict::Possible => "possible",
                    Verdict::No => "no",
                };
                Ok((
                    format!("{got}: {}", comp.reason),
                    got == verdict.as_str(),
                ))
            })(),
        ),
        Check::Cayley {
            map,
            dilation,
            translation,
        } => outcome(
            format!("cayley {map}"),
            format!("w -> {dilation} w + [{}, {}]", translation[0], translation[1]),
            (|| {
                let h = cayley_conjugate(ctx.lft(map)?).map_err(|e| e.to_string())?;
                let pass = (h.a - dilation).abs() <= 1e-9 * dilation.max(1.0)
                    && (h.b - complex_of(*translation)).norm() <= 1e-9;
                Ok((format!("w -> {} w + {}", h.a, fmt_pair(h.b)), pass))
            })(),
        ),
        Check::RotationOrder { map, order } => outcome(
            format!("rotation_order {map}"),
            order.to_string(),
            (|| {
                let cls = classify(ctx.lft(map)?).map_err(|e| e.to_string())?;
                let got = rotation_order(
                    cls.multiplier,
                    tol::ROTATION_ORDER_MAX_N,
                    tol::ROTATION_ORDER_EPS,
                )
                .map_err(|e| e.to_string())?;
                Ok((
                    got.map_or("none".into(), |n| n.to_string()),
                    got == Some(*order),
                ))
            })(),
        ),
        Check::RootsCount {
            map,
            n,
            count,
            roots,
        } => outcome(
            format!("roots {map}, n = {n}"),
            format!("{count} roots"),
            run_roots_count(ctx, map, *n, *count, roots),
        ),
        Check::Embed {
            map,
            depth,
            kind,
            boundary,
            prune_depth,
        } => outcome(
            format!("embed {map}, depth {depth}"),
            kind.clone(),
            (|| {
                let v = embeddable(ctx.lft(map)?, *depth, tol::EMBED_NODE_BUDGET)
                    .map_err(|e| e.to_string())?;
                let got = v.kind.to_string();
                let mut pass = got == *kind;
                if let Some(want) = boundary {
                    pass &= v.boundary == *want;
                }
                if prune_depth.is_some() {
                    pass &= v.prune_depth == *prune_depth;
                }
                Ok((
                    format!(
                        "{got}, boundary {}, prune_depth {:?}: {}",
                        v.boundary, v.prune_depth, v.note
                    ),
                    pass,
                ))
            })(),
        ),
        Check::Step { map, from, class } => outcome(
            format!("step {map}"),
            class.clone(),
            (|| {
                let verdict = dynamics::step_class(
                    ctx.lft(map)?,
                    complex_of(*from),
                    tol::STEP_COUNT,
                    tol::STEP_THRESHOLD,
                )
                .map_err(|e| e.to_string())?;
                let got = serde_json::to_value(verdict)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .unwrap_or_default();
                Ok((got.clone(), got == *class))
            })(),
        ),
        Check::BoundaryProbe {
            map,
            at,
            target,
            behavior,
        } => outcome(
            format!("boundary probe {map} at [{}, {}]", at[0], at[1]),
            behavior.clone(),
            run_boundary_probe(ctx, map, *at, target, behavior),
        ),
        Check::Family {
            phi,
            psi,
            kind,
            sample_count,
        } => outcome(
            format!("family {phi} -> {psi}"),
            kind.clone(),
            run_family(ctx, phi, psi, kind, sample_count),
        ),
        Check::IdentityRoot { p, lambda, n } => outcome(
            format!("identity root at [{}, {}], n = {n}", p[0], p[1]),
            "elliptic_aut closing to the identity".into(),
            run_identity_root(*p, *lambda, *n),
        ),
    }
}

/// Replay one record.
pub fn run_record(record: &ExampleRecord) -> RecordReport {
    let maps = match resolve(record) {
        Ok(maps) => maps,
        Err(message) => {
            return RecordReport {
                id: record.id.clone(),
                pass: false,
                checks: vec![CheckOutcome {
                    label: "resolve maps".into(),
                    expected: "all maps resolve".into(),
                    measured: format!("error: {message}"),
                    pass: false,
                }],
            }
        }
    };
    let ctx = Ctx { maps: &maps };
    let checks: Vec<CheckOutcome> = record.expected.iter().map(|c| run_check(&ctx, c)).collect();
    RecordReport {
        id: record.id.clone(),
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

/// Replay every record, merging reports in record order.
pub fn run(records: &[ExampleRecord]) -> Report {
    let records: Vec<RecordReport> = records.iter().map(run_record).collect();
    let total = records.len();
    let failed = records.iter().filter(|r| !r.pass).count();
    Report {
        records,
        total,
        failed,
    }
}
