//! The `lgraph` command line. Exit status 0 is success, 1 a valid negative
//! answer, 2 an error; errors are printed to stderr as JSON.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{random_stacking_graph, random_triangulation, PlaneGraph};
use crate::io::{
    export_obj, from_json, graph_json, load_graph, render_lrep_svg, render_triangles_svg, sniff, to_json, BoxesDoc,
    DocKind, LabelingDoc, OrderDoc, RealizerDoc, RepDoc, SlDoc, TraceDoc, TrianglesDoc,
};
use crate::labeling::{
    labeling_from_realizer, two_canonical_from_labeling, validate_labeling, validate_two_canonical, TwoCanonicalOrder,
};
use crate::lift3d::{canonical_lift, validate_cuboids};
use crate::lrep::{build_lrep, complete_to_triangulation, equilateralize, validate_lrep, LRepresentation};
use crate::recognition::{oracle_two_canonical, recognize, test_base_edge, ORACLE_MAX_N};
use crate::report::{Failure, Report};
use crate::schnyder::{compute_realizer, validate_realizer, SchnyderRealizer};
use crate::sl::{cubes_from_sl, felsner_iterate, homothetic_triangles, validate_sl, validate_triangles, SLOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Check any document against its validator.
    Validate,
    /// Decide whether a graph is an L-graph.
    Recognize,
    /// Schnyder realizer of a triangulation.
    Realizer,
    /// Red/blue labeling from a realizer.
    Label,
    /// 2-canonical order from a labeling, or by recognition from a graph.
    Order,
    /// L-representation from an order, or by recognition from a graph.
    Build,
    Equilateralize,
    /// Triangulation and realizer obtained by adding vn to a representation.
    Complete,
    /// Cuboids over a representation with canonical heights.
    Lift,
    /// SL-representation, triangles and cubes of a triangulation.
    SlSolve,
    RenderSvg,
    ExportObj,
    /// Process every graph in a directory in parallel.
    Corpus,
    /// Exhaustive 2-canonical order search.
    Oracle,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "lgraph", version, about = "L-shape contact graphs and their representations")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Input document; a directory for `corpus`.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Output file, or directory for `corpus`; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub max_iters: usize,
    #[arg(long, value_parser = parse_edge)]
    pub base_edge: Option<[usize; 2]>,
    #[arg(long)]
    pub overlay_staircase: bool,
    /// For `corpus`: write this many random instances into `--in` first.
    #[arg(long)]
    pub generate: Option<usize>,
}

fn parse_edge(s: &str) -> std::result::Result<[usize; 2], String> {
    let (a, b) = s.split_once(',').ok_or("expected u,v")?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok([p(a)?, p(b)?])
}

/// Result of a command: the exit status (0 or 1) and the artifact text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub artifact: String,
}

impl Outcome {
    fn ok(artifact: String) -> Self {
        Outcome { status: 0, artifact }
    }

    fn decided(positive: bool, artifact: String) -> Self {
        Outcome { status: if positive { 0 } else { 1 }, artifact }
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotPlanar => "NotPlanar",
        Error::MalformedInput(_) => "MalformedInput",
        Error::InconsistentRotation(_) => "InconsistentRotation",
        Error::NotTriangulation(_) => "NotTriangulation",
        Error::InvalidOrder(_) => "InvalidOrder",
        Error::NoEar(_) => "NoEar",
        Error::DegenerateContact(_) => "DegenerateContact",
        Error::DegenerateRep(_) => "DegenerateRep",
        Error::InconsistentInputs(_) => "InconsistentInputs",
        Error::SingularSystem { .. } => "SingularSystem",
        Error::NotSL(_) => "NotSL",
        Error::TooLarge { .. } => "TooLarge",
        Error::InvalidRealizer(_) => "InvalidRealizer",
        Error::InvalidLabeling(_) => "InvalidLabeling",
    }
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": kind, "message": message }).to_string()
}

/// Parses `args` (program name first), runs the command and writes its
/// artifact. Returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{}", error_json("usage", e.to_string().trim()));
            return 2;
        }
    };
    match run(&config).and_then(|o| emit(&config, &o).map(|_| o.status)) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("{}", error_json(error_kind(&e), &e.to_string()));
            2
        }
    }
}

fn emit(config: &RunConfig, o: &Outcome) -> Result<()> {
    match (&config.out, config.command) {
        (_, Command::Corpus) => {
            print!("{}", o.artifact);
            Ok(())
        }
        (Some(path), _) => write_atomic(path, &o.artifact),
        (None, _) => {
            print!("{}", o.artifact);
            Ok(())
        }
    }
}

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::MalformedInput(format!("{}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn read_input(config: &RunConfig) -> Result<String> {
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| Error::MalformedInput("--in is required".into()))?;
    fs::read_to_string(path).map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))
}

fn expect(kind: DocKind, allowed: &[DocKind]) -> Result<()> {
    if allowed.contains(&kind) {
        Ok(())
    } else {
        let names: Vec<&str> = allowed.iter().map(|k| k.name()).collect();
        Err(Error::MalformedInput(format!("expected a {} document, got {}", names.join(" or "), kind.name())))
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    if config.command == Command::Corpus {
        return corpus(config);
    }
    let text = read_input(config)?;
    let kind = sniff(&text)?;
    match config.command {
        Command::Validate => validate(&text, kind),
        Command::Recognize => {
            expect(kind, &[DocKind::Graph])?;
            recognize_cmd(&load_graph(&text)?, config.base_edge)
        }
        Command::Realizer => {
            expect(kind, &[DocKind::Graph])?;
            let r = realizer_for(&load_graph(&text)?, config.base_edge)?;
            Ok(Outcome::ok(to_json(&RealizerDoc::from_realizer(&r))))
        }
        Command::Label => {
            expect(kind, &[DocKind::Realizer, DocKind::Graph])?;
            let r = realizer_from(&text, kind, config.base_edge)?;
            Ok(Outcome::ok(to_json(&LabelingDoc::from_labeling(&labeling_from_realizer(&r)?))))
        }
        Command::Order => {
            expect(kind, &[DocKind::Labeling, DocKind::Graph])?;
            if kind == DocKind::Labeling {
                let el = from_json::<LabelingDoc>(&text)?.to_labeling()?;
                let o = two_canonical_from_labeling(&el)?;
                return Ok(Outcome::ok(to_json(&OrderDoc::new(el.host(), &o))));
            }
            let g = load_graph(&text)?;
            Ok(match find_order(&g, config.base_edge) {
                Some(o) => Outcome::ok(to_json(&OrderDoc::new(&g, &o))),
                None => Outcome::decided(false, to_json(&json!({ "lgraph": false }))),
            })
        }
        Command::Build => {
            expect(kind, &[DocKind::Order, DocKind::Graph])?;
            let (g, o) = if kind == DocKind::Order {
                from_json::<OrderDoc>(&text)?.split()?
            } else {
                let g = load_graph(&text)?;
                match find_order(&g, config.base_edge) {
                    Some(o) => (g, o),
                    None => return Ok(Outcome::decided(false, to_json(&json!({ "lgraph": false })))),
                }
            };
            Ok(Outcome::ok(to_json(&RepDoc::from_rep(&build_lrep(&g, &o)?))))
        }
        Command::Equilateralize => {
            let rep = rep_from(&text, kind)?;
            Ok(Outcome::ok(to_json(&RepDoc::from_rep(&equilateralize(&rep)?))))
        }
        Command::Complete => {
            let (_, r) = complete_to_triangulation(&rep_from(&text, kind)?)?;
            Ok(Outcome::ok(to_json(&RealizerDoc::from_realizer(&r))))
        }
        Command::Lift => {
            let (cr, _) = canonical_lift(&rep_from(&text, kind)?)?;
            Ok(Outcome::ok(to_json(&BoxesDoc::from_cuboids(&cr))))
        }
        Command::SlSolve => {
            expect(kind, &[DocKind::Realizer, DocKind::Graph])?;
            let r = realizer_from(&text, kind, config.base_edge)?;
            let doc = sl_solve(&r, config.max_iters)?;
            Ok(Outcome::decided(doc.converged, to_json(&doc)))
        }
        Command::RenderSvg => render(&text, kind, config.overlay_staircase),
        Command::ExportObj => {
            let cr = match kind {
                DocKind::Boxes => from_json::<BoxesDoc>(&text)?,
                DocKind::Sl => from_json::<SlDoc>(&text)?
                    .cubes
                    .ok_or_else(|| Error::MalformedInput("SL document has no cubes".into()))?,
                _ => return Err(Error::MalformedInput(format!("cannot export a {} document", kind.name()))),
            }
            .to_cuboids()?;
            Ok(Outcome::ok(export_obj(&cr)))
        }
        Command::Oracle => {
            expect(kind, &[DocKind::Graph])?;
            oracle(&load_graph(&text)?, config.base_edge)
        }
        Command::Corpus => unreachable!(),
    }
}

fn rep_from(text: &str, kind: DocKind) -> Result<LRepresentation> {
    match kind {
        DocKind::Rep => from_json::<RepDoc>(text)?.to_rep(),
        DocKind::Sl => from_json::<SlDoc>(text)?
            .rep
            .ok_or_else(|| Error::MalformedInput("SL document has no representation".into()))?
            .to_rep(),
        _ => Err(Error::MalformedInput(format!("expected a rep document, got {}", kind.name()))),
    }
}

fn realizer_from(text: &str, kind: DocKind, base_edge: Option<[usize; 2]>) -> Result<SchnyderRealizer> {
    if kind == DocKind::Realizer {
        from_json::<RealizerDoc>(text)?.to_realizer()
    } else {
        realizer_for(&load_graph(text)?, base_edge)
    }
}

/// Realizer with outer face `[v1, v2, vn]`, where `v1 v2` is the requested
/// base edge (flag, then document) or the first two outer vertices.
pub fn realizer_for(g: &PlaneGraph, base_edge: Option<[usize; 2]>) -> Result<SchnyderRealizer> {
    if !g.is_triangulation() {
        return Err(Error::NotTriangulation(format!("n={} m={}", g.n(), g.m())));
    }
    let r = match base_edge.or(g.base_edge()) {
        None => {
            let f = g.outer_face();
            compute_realizer(g, [f[0], f[1], f[2]])?
        }
        Some([a, b]) => {
            if !g.has_edge(a, b) {
                return Err(Error::MalformedInput(format!("base edge ({a},{b}) is not an edge")));
            }
            let thirds = [g.face_left_of(a, b), g.face_left_of(b, a)];
            let mut found = None;
            for f in thirds {
                let w = *f.iter().find(|&&w| w != a && w != b).expect("faces are triangles");
                if let Ok(r) = compute_realizer(g, [a, b, w]) {
                    found = Some(r);
                    break;
                }
            }
            found.ok_or_else(|| Error::InconsistentInputs(format!("no outer face through ({a},{b})")))?
        }
    };
    let report = validate_realizer(&r);
    if !report.is_ok() {
        return Err(Error::InvalidRealizer(report.to_string()));
    }
    Ok(r)
}

fn find_order(g: &PlaneGraph, base_edge: Option<[usize; 2]>) -> Option<TwoCanonicalOrder> {
    match base_edge.or(g.base_edge()) {
        Some(e) => test_base_edge(g, e).ok(),
        None => recognize(g),
    }
}

#[derive(Serialize)]
struct Recognition {
    lgraph: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    base_edge: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    refusal: Option<String>,
}

fn recognize_cmd(g: &PlaneGraph, base_edge: Option<[usize; 2]>) -> Result<Outcome> {
    let (found, refusal) = match base_edge.or(g.base_edge()) {
        Some(e) => match test_base_edge(g, e) {
            Ok(o) => (Some(o), None),
            Err(r) => (None, Some(r.step)),
        },
        None => (recognize(g), None),
    };
    let doc = Recognition {
        lgraph: found.is_some(),
        base_edge: found.as_ref().map(|o| o.base_edge),
        order: found.map(|o| o.order),
        refusal,
    };
    Ok(Outcome::decided(doc.lgraph, to_json(&doc)))
}

fn oracle(g: &PlaneGraph, base_edge: Option<[usize; 2]>) -> Result<Outcome> {
    if g.n() > ORACLE_MAX_N {
        return Err(Error::TooLarge { n: g.n(), max: ORACLE_MAX_N });
    }
    let edges: Vec<[usize; 2]> = match base_edge.or(g.base_edge()) {
        Some(e) => vec![e],
        None => g.edges().iter().flat_map(|&[u, v]| [[u, v], [v, u]]).collect(),
    };
    let mut rows = Vec::new();
    let mut any = false;
    for e in edges {
        let orders = oracle_two_canonical(g, e)?;
        any |= !orders.is_empty();
        rows.push(json!({
            "base_edge": e,
            "orders": orders.len(),
            "first": orders.first().map(|o| o.order.clone()),
        }));
    }
    Ok(Outcome::decided(any, to_json(&json!({ "lgraph": any, "base_edges": rows }))))
}

#[derive(Serialize)]
struct Validation {
    kind: &'static str,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    proper: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    equilateral: Option<bool>,
    failures: Vec<Failure>,
}

fn validate(text: &str, kind: DocKind) -> Result<Outcome> {
    let mut proper = None;
    let mut equilateral = None;
    let report = match kind {
        DocKind::Graph => {
            load_graph(text)?;
            Report::new()
        }
        DocKind::Realizer => validate_realizer(&from_json::<RealizerDoc>(text)?.to_realizer()?),
        DocKind::Labeling => validate_labeling(&from_json::<LabelingDoc>(text)?.to_labeling()?),
        DocKind::Order => {
            let (g, o) = from_json::<OrderDoc>(text)?.split()?;
            validate_two_canonical(&g, &o)
        }
        DocKind::Rep => {
            let rep = rep_from(text, kind)?;
            equilateral = Some(rep.shapes().iter().all(|s| s.is_equilateral()));
            validate_lrep(&rep)
        }
        DocKind::Triangles => {
            let (tr, r) = from_json::<TrianglesDoc>(text)?.split()?;
            validate_triangles(&tr, &r)
        }
        DocKind::Boxes => {
            let cr = from_json::<BoxesDoc>(text)?.to_cuboids()?;
            proper = Some(cr.proper());
            validate_cuboids(&cr)
        }
        DocKind::Sl => {
            let doc = from_json::<SlDoc>(text)?;
            match (&doc.rep, &doc.realizer) {
                (Some(rep), Some(r)) => validate_sl(&rep.to_rep()?, &r.to_realizer()?),
                _ => {
                    let mut rep = Report::new();
                    rep.fail("converged", format!("no SL-representation after {} iterations", doc.iterations));
                    rep
                }
            }
        }
    };
    let doc = Validation {
        kind: kind.name(),
        ok: report.is_ok(),
        proper,
        equilateral,
        failures: report.failures,
    };
    Ok(Outcome::decided(doc.ok, to_json(&doc)))
}

/// Runs the flip iteration and, on an exact positive solution, derives the
/// triangles and cubes.
pub fn sl_solve(r: &SchnyderRealizer, max_iters: usize) -> Result<SlDoc> {
    let outcome = felsner_iterate(r.host(), r, max_iters)?;
    let trace: Vec<TraceDoc> = outcome.trace().iter().map(TraceDoc::from).collect();
    let mut doc = SlDoc {
        converged: false,
        iterations: trace.len(),
        exact: None,
        residual: None,
        realizer: None,
        rep: None,
        triangles: None,
        cubes: None,
        trace,
    };
    if let SLOutcome::Converged(run) = outcome {
        doc.converged = true;
        doc.exact = Some(run.solution.exact);
        doc.residual = Some(run.solution.residual);
        doc.realizer = Some(RealizerDoc::from_realizer(&run.realizer));
        doc.rep = Some(RepDoc::from_rep(&run.rep));
        if run.solution.exact {
            let tr = homothetic_triangles(&run.rep, &run.realizer)?;
            doc.triangles = Some(TrianglesDoc::new(&tr, &run.realizer));
            doc.cubes = Some(BoxesDoc::from_cuboids(&cubes_from_sl(&run.rep, &run.realizer)?));
        }
    }
    Ok(doc)
}

fn render(text: &str, kind: DocKind, overlay: bool) -> Result<Outcome> {
    let svg = match kind {
        DocKind::Rep => render_lrep_svg(&rep_from(text, kind)?, overlay),
        DocKind::Triangles => render_triangles_svg(&from_json::<TrianglesDoc>(text)?.split()?.0),
        DocKind::Sl => {
            let doc = from_json::<SlDoc>(text)?;
            match (doc.triangles, doc.rep) {
                (Some(t), _) => render_triangles_svg(&t.split()?.0),
                (None, Some(rep)) => render_lrep_svg(&rep.to_rep()?, overlay),
                _ => return Err(Error::MalformedInput("SL document has nothing to draw".into())),
            }
        }
        _ => return Err(Error::MalformedInput(format!("cannot render a {} document", kind.name()))),
    };
    Ok(Outcome::ok(svg))
}

/// Per-instance pipeline used by `corpus`. Triangulations go through the SL
/// iteration, everything else through recognition, equilateralization and
/// the canonical lift.
fn process(g: &PlaneGraph, max_iters: usize) -> Result<(&'static str, Value)> {
    if g.n() >= 4 && g.is_triangulation() {
        let doc = sl_solve(&realizer_for(g, None)?, max_iters)?;
        let status = if doc.converged { "sl" } else { "non-termination" };
        return Ok((status, serde_json::to_value(&doc).expect("serializable")));
    }
    let Some(o) = recognize(g) else {
        return Ok(("not-lgraph", json!({ "lgraph": false })));
    };
    let rep = equilateralize(&build_lrep(g, &o)?)?;
    let (cr, _) = canonical_lift(&rep)?;
    Ok((
        "lgraph",
        json!({
            "lgraph": true,
            "order": o.order,
            "base_edge": o.base_edge,
            "rep": RepDoc::from_rep(&rep),
            "boxes": BoxesDoc::from_cuboids(&cr),
        }),
    ))
}

fn generate(dir: &Path, count: usize, seed: u64) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::MalformedInput(format!("{}: {e}", dir.display())))?;
    (0..count).into_par_iter().try_for_each(|i| {
        let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
        let n = 4 + (s % 9) as usize;
        let (name, g) = if i % 2 == 0 {
            (format!("tri-{i:04}.json"), random_triangulation(n, s))
        } else {
            (format!("stack-{i:04}.json"), random_stacking_graph(n, s))
        };
        write_atomic(&dir.join(name), &graph_json(&g))
    })
}

fn corpus(config: &RunConfig) -> Result<Outcome> {
    let dir = config
        .input
        .as_ref()
        .ok_or_else(|| Error::MalformedInput("--in DIR is required".into()))?;
    if let Some(count) = config.generate {
        generate(dir, count, config.seed)?;
    }
    let out_dir = config.out.clone().unwrap_or_else(|| dir.join("results"));
    fs::create_dir_all(&out_dir).map_err(|e| Error::MalformedInput(format!("{}: {e}", out_dir.display())))?;
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::MalformedInput(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let rows: Vec<Value> = files
        .par_iter()
        .map(|path| {
            let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let result = fs::read_to_string(path)
                .map_err(|e| Error::MalformedInput(e.to_string()))
                .and_then(|t| load_graph(&t))
                .and_then(|g| process(&g, config.max_iters));
            let (status, body) = match result {
                Ok(x) => x,
                Err(e) => ("error", json!({ "error": error_kind(&e), "message": e.to_string() })),
            };
            let written = write_atomic(&out_dir.join(format!("{name}.result.json")), &to_json(&body));
            match written {
                Ok(()) => json!({ "instance": name, "status": status }),
                Err(e) => json!({ "instance": name, "status": "error", "message": e.to_string() }),
            }
        })
        .collect();
    let failed = rows.iter().any(|r| r["status"] == "error");
    let artifact = to_json(&json!({ "instances": rows.len(), "results": rows }));
    if failed {
        eprintln!("{}", error_json("corpus", "some instances failed; see the per-instance results"));
    }
    Ok(Outcome { status: if failed { 2 } else { 0 }, artifact })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(command: Command) -> RunConfig {
        RunConfig {
            command,
            input: None,
            out: None,
            seed: 0,
            max_iters: 50,
            base_edge: None,
            overlay_staircase: false,
            generate: None,
        }
    }

    #[test]
    fn edge_flag_parses() {
        assert_eq!(parse_edge("3, 4"), Ok([3, 4]));
        assert!(parse_edge("3").is_err());
        assert!(parse_edge("a,1").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(main_with_args(["lgraph", "frobnicate"]), 2);
        assert_eq!(main_with_args(["lgraph", "recognize", "--base-edge", "x"]), 2);
        assert_eq!(main_with_args(["lgraph", "recognize"]), 2);
    }

    #[test]
    fn k4_is_a_negative_answer() {
        let k4 = random_triangulation(4, 0);
        let out = recognize_cmd(&k4, None).unwrap();
        assert_eq!(out.status, 1);
        let v: Value = serde_json::from_str(&out.artifact).unwrap();
        assert_eq!(v, json!({ "lgraph": false }));
    }

    #[test]
    fn missing_input_is_an_error() {
        assert!(matches!(run(&config(Command::Validate)), Err(Error::MalformedInput(_))));
    }
}
