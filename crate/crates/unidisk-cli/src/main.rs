//! Command-line interface for linear fractional self-maps of the unit disk.
//!
//! Results go to stdout, diagnostics to stderr. Exit status is 0 for
//! affirmative outcomes, 1 for mathematical negatives (not a self-map, the
//! equation fails, no roots, not embeddable, a failing corpus), and 2 for
//! usage or parse errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use unidisk_core::classify::{classify, rotation_order, self_map_report, ClassTag, Family};
use unidisk_core::dynamics::{orbit, Orbit};
use unidisk_core::intertwine::{
    check_conditions, residual_on_grid, solve_family, type_compatible, FamilyKind, Verdict,
};
use unidisk_core::moebius::{Complex, DiskMap, Error, FixedPoints, Moebius, SpherePoint};
use unidisk_core::roots::{dyadic_element, embeddable, root_nonelliptic, roots_elliptic, EmbedKind};
use unidisk_core::tol;
use unidisk_corpus::registry;

#[derive(Parser)]
#[command(
    name = "unidisk",
    version,
    about = "Linear fractional self-maps of the unit disk: classify, iterate, \
             solve intertwining equations, take iteration roots, embed into \
             continuous semigroups, and replay the bundled example corpus."
)]
struct Cli {
    /// Output format (csv for orbit/corpus, svg for orbit only).
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Tolerance for unit-modulus multiplier comparisons (rotation order).
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_class: f64,
    /// Residual at or below which an intertwining equation counts as holding.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_residual: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a self-map by its Denjoy-Wolff dynamics.
    Classify {
        /// Coefficients as inline JSON {"a":[re,im],...} or @file.
        map: String,
    },
    /// List the fixed points of a map with their derivatives.
    FixedPoints {
        map: String,
    },
    /// Compose a map with itself n times and print the resulting coefficients.
    Iterate {
        map: String,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Run a forward orbit and report its hyperbolic step sequence.
    Orbit {
        /// Coefficients, @file, or a registry evaluator name.
        map: String,
        /// Starting point as [re,im].
        #[arg(long, default_value = "[0,0]")]
        from: String,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Check whether f(phi(z)) = psi(f(z)) holds for a concrete triple.
    IntertwineCheck {
        /// Coefficients, @file, or a registry evaluator name.
        f: String,
        phi: String,
        psi: String,
    },
    /// Solve f(phi(z)) = psi(f(z)) for linear fractional f.
    IntertwineSolve {
        phi: String,
        psi: String,
        /// Number of verified members to sample from the solution family.
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Compute the n-th iteration roots of a self-map.
    Roots {
        map: String,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Decide embedding into a continuous iteration semigroup.
    Embed {
        map: String,
        /// Square-root tower depth to search.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
        /// Dyadic time "m/2^k" (e.g. 3/8); prints the flow element when embeddable.
        #[arg(long)]
        time: Option<String>,
    },
    /// Replay a corpus of recorded examples against the library.
    Corpus {
        /// Corpus JSON path; defaults to $UNIDISK_CORPUS, then the bundled corpus.
        #[arg(long)]
        path: Option<PathBuf>,
    },
}

/// Writes a line to stdout; a broken pipe ends the process quietly.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if let Err(e) = writeln!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            eprintln!("cannot write output: {e}");
            std::process::exit(1);
        }
    }};
}

/// [`out!`] without the trailing newline.
macro_rules! out_raw {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if let Err(e) = write!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            eprintln!("cannot write output: {e}");
            std::process::exit(1);
        }
    }};
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Math(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let positive = |t: f64| t.is_finite() && t > 0.0;
    if !positive(cli.tol_class) || !positive(cli.tol_residual) {
        return Err(Failure::Usage(
            "--tol-class and --tol-residual must be positive".into(),
        ));
    }
    let allowed = match &cli.command {
        Command::Orbit { .. } => &[Format::Json, Format::Table, Format::Csv, Format::Svg][..],
        Command::Corpus { .. } => &[Format::Json, Format::Table, Format::Csv][..],
        _ => &[Format::Json, Format::Table][..],
    };
    if !allowed.contains(&cli.format) {
        return Err(Failure::Usage(
            "this subcommand supports --format json or table (csv for orbit/corpus, svg for orbit)"
                .into(),
        ));
    }
    match &cli.command {
        Command::Classify { map } => run_classify(&cli, map),
        Command::FixedPoints { map } => run_fixed_points(&cli, map),
        Command::Iterate { map, n } => run_iterate(&cli, map, *n),
        Command::Orbit { map, from, n } => run_orbit(&cli, map, from, *n as usize),
        Command::IntertwineCheck { f, phi, psi } => run_check(&cli, f, phi, psi),
        Command::IntertwineSolve { phi, psi, samples, seed } => {
            run_solve(&cli, phi, psi, *samples, *seed)
        }
        Command::Roots { map, n } => run_roots(&cli, map, *n),
        Command::Embed { map, depth, time } => run_embed(&cli, map, *depth, time.as_deref()),
        Command::Corpus { path } => run_corpus(&cli, path.as_deref()),
    }
}

/// A map argument: inline coefficients or a bundled non-LFT evaluator.
enum AnyMap {
    Lft(Moebius),
    Named(&'static registry::NamedMap),
}

impl AnyMap {
    fn as_disk_map(&self) -> &dyn DiskMap {
        match self {
            AnyMap::Lft(m) => m,
            AnyMap::Named(n) => *n,
        }
    }

    fn label(&self) -> String {
        self.as_disk_map().label()
    }
}

fn read_arg(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_owned()),
    }
}

fn parse_moebius(arg: &str) -> Result<Moebius, Failure> {
    let text = read_arg(arg)?;
    let trimmed = text.trim();
    if !trimmed.starts_with('{') {
        return Err(Failure::Usage(format!(
            "\"{trimmed}\" is not a coefficient object; expected inline JSON like \
             {{\"a\":[1,0],\"b\":[0,0],\"c\":[0,0],\"d\":[2,0]}} or @file"
        )));
    }
    let quad: unidisk_corpus::Quad =
        serde_json::from_str(trimmed).map_err(|e| Failure::Usage(format!("bad map JSON: {e}")))?;
    quad.to_moebius()
        .map_err(|e| Failure::Usage(format!("bad map: {e}")))
}

fn parse_any_map(arg: &str) -> Result<AnyMap, Failure> {
    let text = read_arg(arg)?;
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return parse_moebius(arg).map(AnyMap::Lft);
    }
    match registry::lookup(trimmed) {
        Some(named) => Ok(AnyMap::Named(named)),
        None => Err(Failure::Usage(format!(
            "unknown map \"{trimmed}\": expected a JSON coefficient object, @file, \
             or a registry name ({})",
            registry::names().join(", ")
        ))),
    }
}

fn parse_point(arg: &str) -> Result<Complex, Failure> {
    let pair: [f64; 2] = serde_json::from_str(arg.trim())
        .map_err(|e| Failure::Usage(format!("bad point (expected [re,im]): {e}")))?;
    Ok(Complex::new(pair[0], pair[1]))
}

fn show_f(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x.trunc())
    } else {
        format!("{x}")
    }
}

fn show_c(z: Complex) -> String {
    if z.im == 0.0 {
        show_f(z.re)
    } else if z.re == 0.0 {
        format!("{}i", show_f(z.im))
    } else if z.im < 0.0 {
        format!("{} - {}i", show_f(z.re), show_f(-z.im))
    } else {
        format!("{} + {}i", show_f(z.re), show_f(z.im))
    }
}

fn show_point(p: &SpherePoint) -> String {
    match p.to_complex() {
        Some(z) => show_c(z),
        None => "inf".into(),
    }
}

fn show_map(m: &Moebius) -> String {
    format!(
        "a = {}, b = {}, c = {}, d = {}",
        show_c(m.a),
        show_c(m.b),
        show_c(m.c),
        show_c(m.d)
    )
}

fn print_json(value: &Value) {
    out!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn tolerances(cli: &Cli) -> Value {
    json!({ "class": cli.tol_class, "residual": cli.tol_residual })
}

fn show_verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Possible => "possible",
        Verdict::No => "no",
    }
}

fn show_kind(k: FamilyKind) -> &'static str {
    match k {
        FamilyKind::Empty => "empty",
        FamilyKind::TwoPoint => "two_point",
        FamilyKind::ParabolicAffine => "parabolic_affine",
        FamilyKind::Degenerate => "degenerate",
    }
}

fn run_classify(cli: &Cli, map: &str) -> Result<u8, Failure> {
    let m = parse_moebius(map)?;
    let report = self_map_report(&m);
    if !report.is_self_map {
        match cli.format {
            Format::Json => print_json(&json!({
                "map": m,
                "self_map": report,
                "tolerances": tolerances(cli),
            })),
            _ => {
                out!("self_map        false");
                out!("denom_dominant  {}", report.denom_dominant);
                out!("margin_coeff    {}", show_f(report.margin_coeff));
                out!("margin_image    {}", show_f(report.margin_image));
            }
        }
        eprintln!("the map does not send the unit disk into itself");
        return Ok(1);
    }
    let cls = classify(&m)?;
    let order = if cls.tag == ClassTag::EllipticAut {
        rotation_order(cls.multiplier, tol::ROTATION_ORDER_MAX_N, cli.tol_class)?
    } else {
        None
    };
    match cli.format {
        Format::Json => print_json(&json!({
            "map": m,
            "class": cls,
            "rotation_order": order,
            "tolerances": tolerances(cli),
        })),
        _ => {
            out!("tag             {}", cls.tag);
            out!(
                "denjoy_wolff    {}",
                cls.dw.as_ref().map(show_point).unwrap_or_else(|| "-".into())
            );
            out!("multiplier      {}", show_c(cls.multiplier));
            out!(
                "defect          {}",
                cls.defect.map(show_f).unwrap_or_else(|| "-".into())
            );
            out!(
                "other_fixed     {}",
                cls.other_fixed.as_ref().map(show_point).unwrap_or_else(|| "-".into())
            );
            out!("automorphism    {}", cls.report.is_automorphism);
            out!("boundary_case   {}", cls.boundary_case);
            out!(
                "rotation_order  {}",
                order.map(|n| n.to_string()).unwrap_or_else(|| "-".into())
            );
        }
    }
    Ok(0)
}

fn derivative_at(m: &Moebius, p: &SpherePoint) -> Result<Complex, Failure> {
    match p.to_complex() {
        Some(z) => Ok(m.jet_at(z)?.d1),
        // In the chart w = 1/z a fixed infinity forces c = 0 and the
        // derivative there is d/a.
        None => Ok(m.d / m.a),
    }
}

fn run_fixed_points(cli: &Cli, map: &str) -> Result<u8, Failure> {
    let m = parse_moebius(map)?;
    let dw = classify(&m).ok().and_then(|c| c.dw);
    let (kind, points) = match m.fixed_points() {
        FixedPoints::AllSphere => ("all_sphere", vec![]),
        FixedPoints::Double(p) => ("double", vec![p]),
        FixedPoints::Pair(p, q) => ("pair", vec![p, q]),
    };
    let mut rows = Vec::new();
    for p in &points {
        let is_dw = dw
            .as_ref()
            .map(|w| w.chordal(p) <= tol::FIXED_SET_CHORDAL)
            .unwrap_or(false);
        rows.push((p, derivative_at(&m, p)?, is_dw));
    }
    match cli.format {
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|(p, d, is_dw)| {
                    json!({ "point": p, "derivative": [d.re, d.im], "denjoy_wolff": is_dw })
                })
                .collect();
            print_json(&json!({ "map": m, "kind": kind, "fixed_points": list }));
        }
        _ => {
            out!("kind  {kind}");
            if kind == "all_sphere" {
                out!("every point of the sphere is fixed");
            }
            for (p, d, is_dw) in &rows {
                out!(
                    "{:<16} derivative {:<16} denjoy_wolff {}",
                    show_point(p),
                    show_c(*d),
                    is_dw
                );
            }
        }
    }
    Ok(0)
}

fn run_iterate(cli: &Cli, map: &str, n: u64) -> Result<u8, Failure> {
    let m = parse_moebius(map)?;
    let power = m.iterate_n(n);
    if !power.scale().is_finite() {
        return Err(Failure::Math(format!(
            "coefficients of the {n}-th iterate overflow; reduce --n"
        )));
    }
    match cli.format {
        Format::Json => print_json(&json!({ "map": m, "n": n, "iterate": power })),
        _ => {
            out!("n        {n}");
            out!("iterate  {}", show_map(&power));
        }
    }
    Ok(0)
}

fn run_orbit(cli: &Cli, map: &str, from: &str, n: usize) -> Result<u8, Failure> {
    let any = parse_any_map(map)?;
    let z0 = parse_point(from)?;
    let orb = orbit(any.as_disk_map(), z0, n)?;
    match cli.format {
        Format::Json => print_json(&json!({
            "map": any.label(),
            "from": [z0.re, z0.im],
            "orbit": orb,
        })),
        Format::Csv => out_raw!("{}", orbit_csv(&orb)),
        Format::Svg => out_raw!("{}", orbit_svg(&orb)),
        Format::Table => {
            out!("map        {}", any.label());
            out!("truncated  {}", orb.truncated);
            for (k, z) in orb.points.iter().enumerate() {
                let step = if k == 0 {
                    "-".into()
                } else {
                    show_f(orb.steps[k - 1])
                };
                out!("{k:<6} {:<24} step {step}", show_c(*z));
            }
        }
    }
    Ok(0)
}

fn orbit_csv(orb: &Orbit) -> String {
    let mut out = String::from("n,re,im,step\n");
    for (k, z) in orb.points.iter().enumerate() {
        let step = if k == 0 {
            String::new()
        } else {
            format!("{}", orb.steps[k - 1])
        };
        out.push_str(&format!("{k},{},{},{step}\n", z.re, z.im));
    }
    out
}

fn orbit_svg(orb: &Orbit) -> String {
    let mut out = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\" width=\"440\" height=\"440\">\n\
         <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.01\"/>\n",
    );
    let coords: Vec<String> = orb
        .points
        .iter()
        .map(|z| format!("{:.6},{:.6}", z.re, -z.im))
        .collect();
    out.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.008\"/>\n",
        coords.join(" ")
    ));
    for (k, z) in orb.points.iter().enumerate() {
        let r = if k == 0 { 0.025 } else { 0.012 };
        out.push_str(&format!(
            "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{r}\" fill=\"#d62728\"/>\n",
            z.re, -z.im
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn run_check(cli: &Cli, f: &str, phi: &str, psi: &str) -> Result<u8, Failure> {
    let f = parse_any_map(f)?;
    let phi = parse_moebius(phi)?;
    let psi = parse_moebius(psi)?;
    let (residual, conditions) = match &f {
        AnyMap::Lft(m) => {
            let residual = m.compose(&phi).proj_distance(&psi.compose(m));
            let conditions = check_conditions(m, &phi, &psi).ok();
            (residual, conditions)
        }
        AnyMap::Named(named) => (residual_on_grid(*named, &phi, &psi)?, None),
    };
    let holds = residual <= cli.tol_residual;
    match cli.format {
        Format::Json => print_json(&json!({
            "f": f.label(),
            "holds": holds,
            "residual": residual,
            "conditions": conditions,
            "tolerances": tolerances(cli),
        })),
        _ => {
            out!("f          {}", f.label());
            out!("holds      {holds}");
            out!("residual   {residual:e}");
            out!("tolerance  {:e}", cli.tol_residual);
            if let Some(c) = &conditions {
                out!("conditions {}", c.reason);
            }
        }
    }
    Ok(if holds { 0 } else { 1 })
}

fn run_solve(cli: &Cli, phi: &str, psi: &str, samples: usize, seed: u64) -> Result<u8, Failure> {
    let phi = parse_moebius(phi)?;
    let psi = parse_moebius(psi)?;
    let phi_tag = classify(&phi)?.tag;
    let psi_tag = classify(&psi)?.tag;
    let compat = type_compatible(phi_tag, psi_tag);
    if phi_tag == ClassTag::Identity || psi_tag == ClassTag::Identity {
        let note = "identity inputs are decided at class level; the family is not parametrized";
        match cli.format {
            Format::Json => print_json(&json!({
                "compatible": compat,
                "family": Value::Null,
                "note": note,
            })),
            _ => {
                out!("compatible  {}", show_verdict(compat.verdict));
                out!("reason      {}", compat.reason);
                out!("note        {note}");
            }
        }
        return Ok(if compat.verdict == Verdict::Possible { 0 } else { 1 });
    }
    let family = solve_family(&phi, &psi)?;
    let members = family.sample(seed, samples, 600);
    let solvable = matches!(family.kind, FamilyKind::TwoPoint | FamilyKind::ParabolicAffine);
    match cli.format {
        Format::Json => print_json(&json!({
            "compatible": compat,
            "family": family,
            "members": members,
            "seed": seed,
        })),
        _ => {
            out!("compatible  {}", show_verdict(compat.verdict));
            out!("kind        {}", show_kind(family.kind));
            out!("reason      {}", family.reason);
            if let Some(slope) = family.slope {
                out!("slope       {}", show_f(slope));
            }
            for (i, m) in members.iter().enumerate() {
                out!("member {i}    {}", show_map(m));
            }
        }
    }
    if solvable && members.is_empty() {
        eprintln!("the family is nonempty but no verified member was sampled");
        return Ok(1);
    }
    Ok(if solvable { 0 } else { 1 })
}

fn run_roots(cli: &Cli, map: &str, n: u32) -> Result<u8, Failure> {
    let m = parse_moebius(map)?;
    let cls = classify(&m)?;
    let roots = match cls.tag.family() {
        Family::Identity => {
            return Err(Failure::Math(
                "the identity is a root of itself at every order; see identity_roots for \
                 elliptic automorphism roots"
                    .into(),
            ))
        }
        Family::Elliptic => roots_elliptic(&m, n)?,
        Family::Hyperbolic | Family::Parabolic => vec![root_nonelliptic(&m, n)?],
    };
    let audited: Vec<(Moebius, f64, ClassTag)> = roots
        .iter()
        .map(|r| {
            let audit = r.iterate_n(n as u64).proj_distance(&m);
            let tag = classify(r).map(|c| c.tag).unwrap_or(cls.tag);
            (*r, audit, tag)
        })
        .collect();
    match cli.format {
        Format::Json => {
            let list: Vec<Value> = audited
                .iter()
                .map(|(r, audit, tag)| {
                    json!({ "map": r, "audit": audit, "tag": tag.to_string() })
                })
                .collect();
            print_json(&json!({ "map": m, "n": n, "count": list.len(), "roots": list }));
        }
        _ => {
            out!("n      {n}");
            out!("count  {}", audited.len());
            for (r, audit, tag) in &audited {
                out!("{:<60} {tag} (audit {audit:e})", show_map(r));
            }
        }
    }
    if audited.is_empty() {
        eprintln!("no linear fractional self-map has the requested root order");
        return Ok(1);
    }
    Ok(0)
}

fn parse_dyadic(arg: &str) -> Result<(u64, u32), Failure> {
    let bad = || {
        Failure::Usage(format!(
            "bad --time \"{arg}\": expected a dyadic fraction m/2^k such as 3/8"
        ))
    };
    let (numer, denom) = arg.split_once('/').ok_or_else(bad)?;
    let numer: u64 = numer.trim().parse().map_err(|_| bad())?;
    let denom: u64 = denom.trim().parse().map_err(|_| bad())?;
    if numer == 0 || denom == 0 || !denom.is_power_of_two() {
        return Err(bad());
    }
    Ok((numer, denom.trailing_zeros()))
}

fn run_embed(cli: &Cli, map: &str, depth: u32, time: Option<&str>) -> Result<u8, Failure> {
    let m = parse_moebius(map)?;
    let time = time.map(parse_dyadic).transpose()?;
    let verdict = embeddable(&m, depth, tol::EMBED_NODE_BUDGET)?;
    let element = match (time, verdict.kind) {
        (Some((numer, log2)), EmbedKind::Embeddable) => {
            Some(dyadic_element(&m, numer, log2, verdict.witness.as_ref())?)
        }
        _ => None,
    };
    match cli.format {
        Format::Json => print_json(&json!({
            "map": m,
            "depth": depth,
            "verdict": verdict,
            "element": element,
        })),
        _ => {
            out!("kind         {}", verdict.kind);
            out!("boundary     {}", verdict.boundary);
            out!(
                "prune_depth  {}",
                verdict.prune_depth.map(|d| d.to_string()).unwrap_or_else(|| "-".into())
            );
            out!("note         {}", verdict.note);
            if let Some(e) = &element {
                out!("element      {}", show_map(e));
            }
        }
    }
    if let (Some(_), None) = (time, element.as_ref()) {
        eprintln!("no flow element: the map does not embed into a continuous semigroup");
    }
    Ok(match verdict.kind {
        EmbedKind::Embeddable => 0,
        EmbedKind::NotEmbeddable | EmbedKind::InconclusiveAtDepth => 1,
    })
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_owned()
    }
}

fn run_corpus(cli: &Cli, path: Option<&std::path::Path>) -> Result<u8, Failure> {
    let env_path = std::env::var_os("UNIDISK_CORPUS").map(PathBuf::from);
    let source = path.map(PathBuf::from).or(env_path);
    let records = match &source {
        Some(p) => unidisk_corpus::load(p)
            .map_err(|e| Failure::Usage(format!("cannot load corpus {}: {e}", p.display())))?,
        None => unidisk_corpus::bundled(),
    };
    let report = unidisk_corpus::run(&records);
    match cli.format {
        Format::Json => out!("{}", report.to_json()),
        Format::Csv => {
            out!("record,check,expected,measured,pass");
            for rec in &report.records {
                for check in &rec.checks {
                    out!(
                        "{},{},{},{},{}",
                        csv_field(&rec.id),
                        csv_field(&check.label),
                        csv_field(&check.expected),
                        csv_field(&check.measured),
                        check.pass
                    );
                }
            }
        }
        _ => out_raw!("{}", report.render_table()),
    }
    if !report.all_pass() {
        eprintln!("{} of {} records failed", report.failed, report.total);
        return Ok(1);
    }
    Ok(0)
}
