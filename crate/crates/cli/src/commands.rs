use std::fmt::Write as _;
use std::fs;

use gkm_core::algebra::{format_rational, parse_rational, Rational};
use gkm_core::builders::BuilderRegistry;
use gkm_core::cohomology::{convolve_fiber, formula_dims, morse_check_with, solve, solve_nonisolated, FiberData};
use gkm_core::connection::{
    check_chern_compat, compute_connection, cycle_defect, transport_omega, ConnectionOptions, OmegaClass,
};
use gkm_core::graph::{betti, pick_generic, validate, GkmGraph, GraphDocument, OrientedEdge};
use gkm_core::GkmError;
use serde_json::{json, Value};

use crate::{Cli, Command, Format, Input};

pub enum Failure {
    Input(String),
    Domain(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<GkmError> for Failure {
    fn from(e: GkmError) -> Self {
        let input = e.is_input_error()
            || matches!(e, GkmError::UnknownFamily(_) | GkmError::InvalidParams(_) | GkmError::InvalidFiber(_));
        if input {
            Failure::Input(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

pub struct Report {
    pub body: String,
    /// Exit 1 after printing.
    pub violation: bool,
}

impl Report {
    fn ok(body: String) -> Self {
        Report { body, violation: false }
    }
}

type Outcome = std::result::Result<Report, Failure>;

fn load(input: &Input) -> std::result::Result<GraphDocument, Failure> {
    let doc = match (&input.file, &input.builder) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            GraphDocument::from_json_str(&text)?
        }
        (None, Some(spec)) => BuilderRegistry::default().build(spec)?.into_document(),
        (None, None) => return Err(Failure::Input("no input graph".into())),
    };
    for w in &doc.warnings {
        log::warn!("{w}");
    }
    Ok(doc)
}

fn json_body(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn parse_vertices(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn vertex_walk(g: &GkmGraph, path: &[OrientedEdge]) -> Vec<String> {
    let mut names: Vec<String> = path.first().map(|&e| g.vertex_name(g.source(e)).to_owned()).into_iter().collect();
    names.extend(path.iter().map(|&e| g.vertex_name(g.target(e)).to_owned()));
    names
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { input } => cmd_validate(&load(input)?, cli.format),
        Command::Betti { input } => cmd_betti(&load(input)?, cli.seed, cli.format),
        Command::Cohom { input, kmax, fiber, basis } => {
            let doc = load(input)?;
            let fiber = match fiber {
                Some(text) => Some(FiberData::new(parse_usize_list(text)?)?),
                None => doc.fiber.clone(),
            };
            cmd_cohom(&doc.graph, *kmax, fiber.as_ref(), *basis, cli.seed, cli.format)
        }
        Command::Connection { input, strict } => cmd_connection(&load(input)?.graph, *strict, cli.format),
        Command::ChernCheck { input, strict } => cmd_chern_check(&load(input)?, *strict, cli.format),
        Command::Transport { input, path, cycle, omega } => {
            let doc = load(input)?;
            let walk = path.as_deref().or(cycle.as_deref()).unwrap_or_default();
            cmd_transport(&doc, walk, cycle.is_some(), omega.as_deref(), cli.format)
        }
        Command::Defect { input, cycle } => cmd_defect(&load(input)?, cycle.as_deref(), cli.format),
        Command::Generate { spec, out } => {
            let spec = spec.join(":");
            let body = BuilderRegistry::default().build(&spec)?.into_document().to_json_string();
            match out {
                Some(path) => {
                    fs::write(path, &body).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    Ok(Report::ok(String::new()))
                }
                None => Ok(Report::ok(body)),
            }
        }
    }
}

fn parse_usize_list(text: &str) -> std::result::Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| Failure::Input(format!("bad entry `{s}` in `{text}`"))))
        .collect()
}

/// Refuses to run solvers on graphs that fail the axioms.
fn require_valid(g: &GkmGraph) -> std::result::Result<(), Failure> {
    let report = validate(g);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Failure::Domain(format!("invalid graph: {} ({})", v.describe(g), v.axiom()))),
    }
}

fn cmd_validate(doc: &GraphDocument, format: Format) -> Outcome {
    let g = &doc.graph;
    let report = validate(g);
    let body = match format {
        Format::Json => json_body(json!({
            "valid": report.is_valid(),
            "violations": report.violations.iter().map(|v| json!({"axiom": v.axiom(), "message": v.describe(g)})).collect::<Vec<_>>(),
            "warnings": doc.warnings,
        })),
        Format::Tsv => {
            let mut s = format!("valid\t{}\n", report.is_valid());
            for v in &report.violations {
                writeln!(s, "{}\t{}", v.axiom(), v.describe(g)).unwrap();
            }
            s
        }
    };
    Ok(Report { body, violation: !report.is_valid() })
}

fn cmd_betti(doc: &GraphDocument, seed: u64, format: Format) -> Outcome {
    let g = &doc.graph;
    require_valid(g)?;
    let xi = pick_generic(g, seed)?;
    let b = betti(g, &xi)?;
    let body = match format {
        Format::Json => json_body(json!({"seed": seed, "xi": xi.0, "betti": b.0})),
        Format::Tsv => format!("{b}\n"),
    };
    Ok(Report::ok(body))
}

fn cmd_cohom(g: &GkmGraph, kmax: usize, fiber: Option<&FiberData>, basis: bool, seed: u64, format: Format) -> Outcome {
    require_valid(g)?;
    let xi = pick_generic(g, seed)?;
    let b = betti(g, &xi)?;
    let solution = solve(g, kmax)?;
    let formula = formula_dims(&b, g.rank(), kmax);
    let mut violation = false;
    let mut rows = Vec::new();
    let mut tsv = String::new();
    match fiber {
        None => {
            let report = morse_check_with(g, &xi, kmax)?;
            violation |= !report.inequality_holds();
            tsv.push_str("degree\tsolver_dim\tformula_bound\tequal\n");
            for r in &report.rows {
                writeln!(tsv, "{}\t{}\t{}\t{}", r.degree, r.solver_dim, r.bound, r.equal).unwrap();
                rows.push(json!({"degree": r.degree, "solver_dim": r.solver_dim, "formula_bound": r.bound, "equal": r.equal}));
            }
        }
        Some(f) => {
            let max_real = 2 * kmax;
            let direct = solve_nonisolated(g, f, max_real)?;
            let bound = convolve_fiber(&formula, f, max_real);
            let conv = convolve_fiber(&solution.dims, f, max_real);
            tsv.push_str("real_degree\tsolver_dim\tformula_bound\tequal\tconvolution\ttensor_equal\n");
            for d in 0..=max_real {
                let (equal, tensor_equal) = (direct[d] == bound[d], direct[d] == conv[d]);
                violation |= direct[d] > bound[d] || !tensor_equal;
                writeln!(tsv, "{d}\t{}\t{}\t{equal}\t{}\t{tensor_equal}", direct[d], bound[d], conv[d]).unwrap();
                rows.push(json!({
                    "real_degree": d, "solver_dim": direct[d], "formula_bound": bound[d], "equal": equal,
                    "convolution": conv[d], "tensor_equal": tensor_equal,
                }));
            }
        }
    }
    let mut classes = Vec::new();
    if basis {
        tsv.push('\n');
        tsv.push_str("basis\tdegree\tindex\tvertex\tvalue\n");
        for (k, list) in solution.bases.iter().enumerate() {
            for (i, c) in list.iter().enumerate() {
                let values: Vec<String> = c.values.iter().map(ToString::to_string).collect();
                for (v, value) in values.iter().enumerate() {
                    writeln!(tsv, "basis\t{k}\t{i}\t{}\t{value}", g.vertex_name(v)).unwrap();
                }
                classes.push(json!({"degree": k, "index": i, "values": values}));
            }
        }
    }
    let body = match format {
        Format::Tsv => tsv,
        Format::Json => {
            let mut v = json!({"xi": xi.0, "betti": b.0, "rows": rows});
            if basis {
                v["basis"] = Value::Array(classes);
            }
            json_body(v)
        }
    };
    Ok(Report { body, violation })
}

fn options(strict: bool) -> ConnectionOptions {
    ConnectionOptions { strict, ..Default::default() }
}

fn cmd_connection(g: &GkmGraph, strict: bool, format: Format) -> Outcome {
    require_valid(g)?;
    let conn = compute_connection(g, options(strict))?;
    let label = |e: OrientedEdge| g.describe(e).to_string();
    let tables: Vec<(OrientedEdge, &[(OrientedEdge, OrientedEdge)])> =
        g.oriented_edges().map(|e| (e, conn.table(e))).collect();
    let body = match format {
        Format::Json => json_body(json!({
            "bijective": true,
            "tables": tables.iter().map(|(e, t)| json!({
                "along": label(*e),
                "map": t.iter().map(|&(a, b)| [label(a), label(b)]).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
        Format::Tsv => {
            let mut s = String::from("along\tfrom\tto\n");
            for (e, t) in &tables {
                for &(a, b) in *t {
                    writeln!(s, "{}\t{}\t{}", label(*e), label(a), label(b)).unwrap();
                }
            }
            writeln!(s, "tables\t{}\tbijective\ttrue", tables.len()).unwrap();
            s
        }
    };
    Ok(Report::ok(body))
}

fn cmd_chern_check(doc: &GraphDocument, strict: bool, format: Format) -> Outcome {
    let g = &doc.graph;
    require_valid(g)?;
    let geometry = doc.geometry()?;
    let conn = compute_connection(g, options(strict))?;
    let report = check_chern_compat(g, &conn, &geometry);
    let label = |e: OrientedEdge| g.describe(e).to_string();
    let body = match format {
        Format::Json => json_body(json!({
            "checked": report.checked,
            "compatible": report.is_compatible(),
            "violations": report.violations.iter().map(|v| json!({
                "rule": format!("{:?}", v.rule).to_lowercase(),
                "along": label(v.along), "moved": label(v.moved), "image": label(v.image),
                "expected": v.expected, "found": v.found,
            })).collect::<Vec<_>>(),
        })),
        Format::Tsv => {
            let mut s = format!("checked\t{}\nviolations\t{}\n", report.checked, report.violations.len());
            for v in &report.violations {
                let join = |x: &[i64]| x.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
                writeln!(
                    s,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    format!("{:?}", v.rule).to_lowercase(),
                    label(v.along),
                    label(v.moved),
                    label(v.image),
                    join(&v.expected),
                    join(&v.found)
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Report { body, violation: !report.is_compatible() })
}

fn parse_omega(text: Option<&str>, dim: usize) -> std::result::Result<OmegaClass, Failure> {
    match text {
        None => Ok(OmegaClass::zero(dim)),
        Some(t) => Ok(OmegaClass(t.split(',').map(parse_rational).collect::<gkm_core::Result<Vec<_>>>()?)),
    }
}

fn cmd_transport(doc: &GraphDocument, walk: &str, closed: bool, omega: Option<&str>, format: Format) -> Outcome {
    let g = &doc.graph;
    let geometry = doc.geometry()?;
    let path = g.path_from_vertices(&parse_vertices(walk))?;
    let start = parse_omega(omega, geometry.chern_rank())?;
    let classes = transport_omega(g, &geometry, &path, &start)?;
    let defect = if closed { Some(cycle_defect(g, &geometry, &path)?) } else { None };
    let names = vertex_walk(g, &path);
    let body = match format {
        Format::Json => json_body(json!({
            "path": names,
            "classes": classes.iter().map(|c| rationals(&c.0)).collect::<Vec<_>>(),
            "defect": defect.as_ref().map(|d| rationals(&d.0)),
        })),
        Format::Tsv => {
            let mut s = String::from("vertex\tomega\n");
            for (name, c) in names.iter().zip(&classes) {
                writeln!(s, "{name}\t{}", rationals(&c.0).join(",")).unwrap();
            }
            if let Some(d) = &defect {
                writeln!(s, "defect\t{}", rationals(&d.0).join(",")).unwrap();
            }
            s
        }
    };
    Ok(Report::ok(body))
}

fn cmd_defect(doc: &GraphDocument, cycle: Option<&str>, format: Format) -> Outcome {
    let g = &doc.graph;
    let geometry = doc.geometry()?;
    let cycles = match cycle {
        Some(walk) => vec![g.path_from_vertices(&parse_vertices(walk))?],
        None => g.fundamental_cycles(),
    };
    let mut rows = Vec::new();
    for c in &cycles {
        rows.push((vertex_walk(g, c).join(","), rationals(&cycle_defect(g, &geometry, c)?.0)));
    }
    let body = match format {
        Format::Json => json_body(json!({
            "cycles": rows.iter().map(|(c, d)| json!({"cycle": c, "defect": d})).collect::<Vec<_>>(),
        })),
        Format::Tsv => {
            let mut s = String::from("cycle\tdefect\n");
            for (c, d) in &rows {
                writeln!(s, "{c}\t{}", d.join(",")).unwrap();
            }
            s
        }
    };
    Ok(Report::ok(body))
}
