//! Command-line front end: theorem-level bound evaluation, assembly-chain
//! verification, curve-graph queries, and subsurface projection.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use effcurves::bounds::{
    builtin_corpus, chain_ids, identity_chains, load_corpus_dir, make_ledger,
    theorem_a_pipeline, thm_a_length_bound, thm_a_threshold, thm_b_bound, verify_assembly,
    BoundsError, ChainStatus, Variant,
};
use effcurves::curves::{
    enumerate_normal_graph, enumerate_slope_graph, farey_distance, normal_intersection,
    parse_record, slope_intersection, write_record, CurveRecord, CurveVertex, FareyDistance,
    NormalCurve, SporadicSurface, TriSurface,
};
use effcurves::expr::parse_expr;
use effcurves::interval::IntervalScalar;
use effcurves::projection::{parse_fixture, project_curve, ProjectionError, SubsurfaceEmbedding};
use effcurves::report::Report;
use num_rational::BigRational;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "effcurves", version, about = "certified effective-bound calculators")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// working precision in bits (EFFCURVES_PRECISION overrides the default)
    #[arg(long)]
    precision: Option<u64>,
    /// emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
    /// write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// include a timestamp in the report (off by default, so reruns are
    /// byte-identical)
    #[arg(long)]
    timestamp: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Threshold and length bound for the distance-to-length theorem.
    ThmA {
        /// Margulis-style base constant, an exact rational like 1/10
        #[arg(long, default_value = "1/10")]
        eps0: String,
        /// |Euler characteristic| of the ambient surface, at least 2
        #[arg(long)]
        chi_s: u64,
        /// |Euler characteristic| of the subsurface, at least 1
        #[arg(long)]
        chi_y: u64,
        /// certified lower bound on the subsurface projection distance
        #[arg(long)]
        dy: String,
        /// which published constant assembly to use
        #[arg(long, default_value = "lemma", value_parser = parse_variant)]
        variant: Variant,
        #[command(flatten)]
        common: Common,
    },
    /// Length bound for the fibered-face theorem.
    ThmB {
        #[arg(long, default_value = "1/10")]
        eps0: String,
        #[arg(long)]
        chi_s: u64,
        /// lower bound on the injectivity radius, an exact rational
        #[arg(long)]
        inj: String,
        #[command(flatten)]
        common: Common,
    },
    /// Verify the constant-assembly chains.
    Verify {
        /// chain id, or "all"
        #[arg(long, default_value = "all")]
        chain: String,
        #[arg(long, default_value = "1/100")]
        eps0_lo: String,
        #[arg(long, default_value = "247/1000")]
        eps0_hi: String,
        #[arg(long, default_value_t = 40)]
        max_depth: u32,
        /// load the inequality corpus from this directory instead of the
        /// built-in one
        #[arg(long)]
        chains_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Curve-graph queries: distance, geometric intersection, graph slice.
    Curves {
        #[command(subcommand)]
        op: CurvesOp,
    },
    /// Subsurface projection of a curve through an embedded fixture.
    Project {
        /// fixture file (see fixtures/*.fix)
        #[arg(long)]
        fixture: PathBuf,
        /// curve record, e.g. "surface genus2; weights t0:(0,1,1) ..."
        #[arg(long)]
        curve: String,
        /// work budget for normal-position moves
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum CurvesOp {
    /// Curve-graph distance between two curves.
    Distance {
        /// s11 (one-holed torus), s04 (four-holed sphere), or fixture:<file>
        #[arg(long)]
        surface: String,
        /// two curve records
        curves: Vec<String>,
        /// search radius (slope surfaces) or enumeration bound (fixtures)
        #[arg(long, default_value_t = 8)]
        radius: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Geometric intersection number of two curves.
    Intersect {
        #[arg(long)]
        surface: String,
        curves: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate a slice of the curve graph as an edge list.
    Graph {
        #[arg(long)]
        surface: String,
        /// enumeration bound on slope height or total edge weight
        #[arg(long, default_value_t = 4)]
        radius: u64,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    match s {
        "lemma" => Ok(Variant::Lemma),
        "sec76" => Ok(Variant::Sec76),
        other => Err(format!("unknown variant {other}; use lemma or sec76")),
    }
}

fn parse_rational(label: &str, text: &str) -> Result<BigRational, String> {
    parse_expr(text)
        .ok()
        .and_then(|e| e.as_rational())
        .ok_or_else(|| format!("--{label} must be an exact rational expression, got {text}"))
}

fn precision(common: &Common) -> Result<u64, String> {
    if let Some(p) = common.precision {
        return Ok(p);
    }
    match std::env::var("EFFCURVES_PRECISION") {
        Ok(v) => v
            .parse()
            .map_err(|_| format!("EFFCURVES_PRECISION must be an integer, got {v}")),
        Err(_) => Ok(128),
    }
}

fn emit(report: &mut Report, common: &Common) -> Result<(), String> {
    if common.timestamp {
        report.stamp_now();
    }
    let text = if common.json { report.to_json() } else { report.to_text() };
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fail(msg: impl std::fmt::Display, code: u8) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn bounds_exit(e: &BoundsError) -> u8 {
    match e {
        BoundsError::BelowThreshold(_) => EXIT_HYPOTHESIS,
        BoundsError::InvalidEps0(_) | BoundsError::BadArgument(_) => EXIT_USAGE,
        _ => EXIT_UNKNOWN,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::from(EXIT_OK);
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err((msg, code)) => fail(msg, code),
    }
}

type CmdResult = Result<u8, (String, u8)>;

fn usage(msg: impl ToString) -> (String, u8) {
    (msg.to_string(), EXIT_USAGE)
}

fn run(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::ThmA { eps0, chi_s, chi_y, dy, variant, common } => {
            cmd_thm_a(&eps0, chi_s, chi_y, &dy, variant, &common)
        }
        Cmd::ThmB { eps0, chi_s, inj, common } => cmd_thm_b(&eps0, chi_s, &inj, &common),
        Cmd::Verify { chain, eps0_lo, eps0_hi, max_depth, chains_dir, threads, common } => {
            cmd_verify(&chain, &eps0_lo, &eps0_hi, max_depth, chains_dir.as_deref(), threads, &common)
        }
        Cmd::Curves { op } => match op {
            CurvesOp::Distance { surface, curves, radius, common } => {
                cmd_curves_distance(&surface, &curves, radius, &common)
            }
            CurvesOp::Intersect { surface, curves, common } => {
                cmd_curves_intersect(&surface, &curves, &common)
            }
            CurvesOp::Graph { surface, radius, common } => {
                cmd_curves_graph(&surface, radius, &common)
            }
        },
        Cmd::Project { fixture, curve, budget, common } => {
            cmd_project(&fixture, &curve, budget, &common)
        }
    }
}

fn cmd_thm_a(
    eps0: &str,
    chi_s: u64,
    chi_y: u64,
    dy: &str,
    variant: Variant,
    common: &Common,
) -> CmdResult {
    let prec = precision(common).map_err(usage)?;
    let eps0_q = parse_rational("eps0", eps0).map_err(usage)?;
    let dy_q = parse_rational("dy", dy).map_err(usage)?;
    let led = make_ledger(eps0_q, prec).map_err(|e| (e.to_string(), bounds_exit(&e)))?;
    let d = IntervalScalar::from_rational(&dy_q, prec);

    let mut report = Report::new("thm-a");
    report
        .input("eps0", eps0)
        .input("chi-s", chi_s)
        .input("chi-y", chi_y)
        .input("dy", dy)
        .input("variant", variant.as_str())
        .input("precision", prec);

    let thr = thm_a_threshold(&led, chi_y, chi_s)
        .map_err(|e| (e.to_string(), bounds_exit(&e)))?;
    report.enclosure(
        "threshold",
        &thr,
        "a*|chiY|^345 + b*log|chiS|, the distance below which the theorem is silent",
    );

    match thm_a_length_bound(&led, chi_y, chi_s, &d) {
        Ok(bound) => {
            report.enclosure(
                "length-bound",
                &bound,
                "c*|chiY|^248 / (dY - b*log|chiS|)",
            );
            let trace = theorem_a_pipeline(&led, chi_s, chi_y, &d, variant)
                .map_err(|e| (e.to_string(), bounds_exit(&e)))?;
            for stage in &trace.stages {
                report.enclosure(&format!("stage: {}", stage.name), &stage.value, &stage.formula);
            }
            report.output("pipeline-verdict", &trace.verdict, "stage-by-stage certification");
            for note in &trace.notes {
                report.warn(note);
            }
            emit(&mut report, common).map_err(usage)?;
            Ok(EXIT_OK)
        }
        Err(e @ BoundsError::BelowThreshold(_)) => {
            report.warn(format!("{e}; no length bound is asserted at this distance"));
            emit(&mut report, common).map_err(usage)?;
            Ok(EXIT_HYPOTHESIS)
        }
        Err(e) => Err((e.to_string(), bounds_exit(&e))),
    }
}

fn cmd_thm_b(eps0: &str, chi_s: u64, inj: &str, common: &Common) -> CmdResult {
    let prec = precision(common).map_err(usage)?;
    let eps0_q = parse_rational("eps0", eps0).map_err(usage)?;
    let inj_q = parse_rational("inj", inj).map_err(usage)?;
    let led = make_ledger(eps0_q, prec).map_err(|e| (e.to_string(), bounds_exit(&e)))?;
    let inj_i = IntervalScalar::from_rational(&inj_q, prec);
    let (bound, warnings) =
        thm_b_bound(&led, chi_s, &inj_i).map_err(|e| (e.to_string(), bounds_exit(&e)))?;
    let mut report = Report::new("thm-b");
    report
        .input("eps0", eps0)
        .input("chi-s", chi_s)
        .input("inj", inj)
        .input("precision", prec);
    report.enclosure("length-bound", &bound, "k*|chiS|^346 / inj");
    for w in warnings {
        report.warn(w);
    }
    emit(&mut report, common).map_err(usage)?;
    Ok(EXIT_OK)
}

fn cmd_verify(
    chain: &str,
    eps0_lo: &str,
    eps0_hi: &str,
    max_depth: u32,
    chains_dir: Option<&std::path::Path>,
    threads: usize,
    common: &Common,
) -> CmdResult {
    let prec = precision(common).map_err(usage)?;
    let lo = parse_rational("eps0-lo", eps0_lo).map_err(usage)?;
    let hi = parse_rational("eps0-hi", eps0_hi).map_err(usage)?;
    if lo >= hi {
        return Err(usage("--eps0-lo must be below --eps0-hi"));
    }
    let corpus = match chains_dir {
        Some(dir) => load_corpus_dir(dir).map_err(|e| (e.to_string(), EXIT_USAGE))?,
        None => builtin_corpus(),
    };
    if chain != "all" && !chain_ids(&corpus).iter().any(|id| id == chain) {
        return Err(usage(format!("unknown chain id {chain}")));
    }

    let mut certs = if chain == "all" {
        verify_assembly(&corpus, &lo, &hi, prec, max_depth, threads)
    } else if let Some(cert) = identity_chains().into_iter().find(|c| c.chain_id == chain) {
        vec![cert]
    } else {
        let target = corpus.iter().find(|c| c.id == chain).expect("id checked above");
        vec![effcurves::bounds::verify_corpus_chain(target, &lo, &hi, prec, max_depth)]
    };
    certs.sort_by(|a, b| a.chain_id.cmp(&b.chain_id));

    let mut report = Report::new("verify");
    report
        .input("chain", chain)
        .input("eps0-lo", eps0_lo)
        .input("eps0-hi", eps0_hi)
        .input("precision", prec)
        .input("max-depth", max_depth)
        .input("threads", threads);
    let mut any_refuted = false;
    let mut any_unknown = false;
    for cert in &certs {
        let value = match cert.status {
            ChainStatus::Proved => "Proved".to_string(),
            ChainStatus::Refuted => {
                any_refuted = true;
                match &cert.witness {
                    Some(w) => format!("Refuted: {w}"),
                    None => "Refuted".to_string(),
                }
            }
            ChainStatus::Unknown => {
                any_unknown = true;
                "Unknown".to_string()
            }
        };
        let formula = if let Some(check) = cert.exponent_report.first() {
            cert.exponent_report
                .iter()
                .map(|c| format!("{}: computed {}, claimed {}", c.description, c.computed, c.claimed))
                .collect::<Vec<_>>()
                .join("; ")
                + if check.recomputation_agrees { "" } else { " [recomputation disagrees]" }
        } else {
            cert.steps
                .iter()
                .map(|s| s.statement.clone())
                .collect::<Vec<_>>()
                .join("; ")
        };
        report.output(&cert.chain_id, value, &formula);
        // derivation notes are only surfaced when the chain did not certify
        if cert.status != ChainStatus::Proved {
            for note in &cert.notes {
                report.warn(format!("{}: {note}", cert.chain_id));
            }
        }
    }
    emit(&mut report, common).map_err(usage)?;
    if any_refuted {
        Ok(EXIT_REFUTED)
    } else if any_unknown {
        Ok(EXIT_UNKNOWN)
    } else {
        Ok(EXIT_OK)
    }
}

enum SurfaceArg {
    Sporadic(SporadicSurface),
    Fixture(String, SubsurfaceEmbedding),
}

fn parse_surface(spec: &str) -> Result<SurfaceArg, (String, u8)> {
    match spec {
        "s11" => Ok(SurfaceArg::Sporadic(SporadicSurface::OneHoledTorus)),
        "s04" => Ok(SurfaceArg::Sporadic(SporadicSurface::FourHoledSphere)),
        other => {
            let path = other
                .strip_prefix("fixture:")
                .ok_or_else(|| usage(format!("unknown surface {other}; use s11, s04, or fixture:<file>")))?;
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
            let (name, emb) = parse_fixture(&text).map_err(|e| usage(e.to_string()))?;
            Ok(SurfaceArg::Fixture(name, emb))
        }
    }
}

fn parse_slope_record(spec: &str) -> Result<effcurves::curves::Slope, (String, u8)> {
    match parse_record(spec) {
        Ok(CurveRecord::Slope(s)) => Ok(s),
        Ok(_) => Err(usage(format!("expected a slope record, got {spec}"))),
        Err(e) => Err(usage(e.to_string())),
    }
}

fn parse_normal_record(
    spec: &str,
    surf: &TriSurface,
) -> Result<NormalCurve, (String, u8)> {
    match parse_record(spec) {
        Ok(CurveRecord::Normal { curve, .. }) => {
            if curve.corner_weights().len() != 3 * surf.num_triangles() {
                return Err(usage(format!(
                    "curve record does not match the fixture surface: {spec}"
                )));
            }
            Ok(curve)
        }
        Ok(_) => Err(usage(format!("expected a normal-curve record, got {spec}"))),
        Err(e) => Err(usage(e.to_string())),
    }
}

fn two_curves(curves: &[String]) -> Result<(&str, &str), (String, u8)> {
    match curves {
        [a, b] => Ok((a, b)),
        _ => Err(usage("exactly two curve records are required")),
    }
}

fn cmd_curves_distance(
    surface: &str,
    curves: &[String],
    radius: u64,
    common: &Common,
) -> CmdResult {
    let (a_spec, b_spec) = two_curves(curves)?;
    let mut report = Report::new("curves distance");
    report
        .input("surface", surface)
        .input("curve-a", a_spec)
        .input("curve-b", b_spec)
        .input("radius", radius);
    let mut code = EXIT_OK;
    match parse_surface(surface)? {
        SurfaceArg::Sporadic(s) => {
            let a = parse_slope_record(a_spec)?;
            let b = parse_slope_record(b_spec)?;
            let _ = s;
            match farey_distance(a, b, radius.min(u32::MAX as u64) as u32) {
                FareyDistance::Resolved(d) => {
                    report.output("distance", d, "curve-graph distance by Farey search");
                }
                FareyDistance::Unresolved => {
                    report.output(
                        "distance",
                        "unresolved",
                        "search radius exhausted before the distance was certified",
                    );
                    code = EXIT_UNKNOWN;
                }
            }
        }
        SurfaceArg::Fixture(name, emb) => {
            report.input("fixture", &name);
            let a = parse_normal_record(a_spec, &emb.ambient)?;
            let b = parse_normal_record(b_spec, &emb.ambient)?;
            let slice = enumerate_normal_graph(&emb.ambient, radius, 10_000_000)
                .map_err(|e| (e.to_string(), EXIT_UNKNOWN))?;
            let find = |c: &NormalCurve| {
                slice.vertices.iter().position(|v| match v {
                    CurveVertex::Normal(n) => n == c,
                    CurveVertex::Slope(_) => false,
                })
            };
            match (find(&a), find(&b)) {
                (Some(i), Some(j)) => match slice.distance(i, j) {
                    Some(d) => {
                        report.output("distance", d, "BFS distance in the enumerated graph slice");
                    }
                    None => {
                        report.output("distance", "unresolved", "curves lie in different components of the slice");
                        code = EXIT_UNKNOWN;
                    }
                },
                _ => {
                    report.output(
                        "distance",
                        "unresolved",
                        "a curve exceeds the enumeration bound; raise --radius",
                    );
                    code = EXIT_UNKNOWN;
                }
            }
        }
    }
    emit(&mut report, common).map_err(usage)?;
    Ok(code)
}

fn cmd_curves_intersect(surface: &str, curves: &[String], common: &Common) -> CmdResult {
    let (a_spec, b_spec) = two_curves(curves)?;
    let mut report = Report::new("curves intersect");
    report
        .input("surface", surface)
        .input("curve-a", a_spec)
        .input("curve-b", b_spec);
    match parse_surface(surface)? {
        SurfaceArg::Sporadic(s) => {
            let a = parse_slope_record(a_spec)?;
            let b = parse_slope_record(b_spec)?;
            report.output(
                "intersection",
                slope_intersection(a, b, s),
                "geometric intersection number from the slope determinant",
            );
        }
        SurfaceArg::Fixture(name, emb) => {
            report.input("fixture", &name);
            let a = parse_normal_record(a_spec, &emb.ambient)?;
            let b = parse_normal_record(b_spec, &emb.ambient)?;
            let i = normal_intersection(&emb.ambient, &a, &b, 10_000_000)
                .map_err(|e| (e.to_string(), EXIT_UNKNOWN))?;
            report.output(
                "intersection",
                i,
                "geometric intersection number after normal-position reduction",
            );
        }
    }
    emit(&mut report, common).map_err(usage)?;
    Ok(EXIT_OK)
}

fn cmd_curves_graph(surface: &str, radius: u64, common: &Common) -> CmdResult {
    let mut report = Report::new("curves graph");
    report.input("surface", surface).input("radius", radius);
    let slice = match parse_surface(surface)? {
        SurfaceArg::Sporadic(s) => enumerate_slope_graph(s, radius),
        SurfaceArg::Fixture(name, emb) => {
            report.input("fixture", &name);
            enumerate_normal_graph(&emb.ambient, radius, 10_000_000)
                .map_err(|e| (e.to_string(), EXIT_UNKNOWN))?
        }
    };
    report.output("vertices", slice.num_vertices(), "curves within the enumeration bound");
    report.output("edges", slice.num_edges(), "disjointness (or minimal-intersection) pairs");
    report.output("edge-list", slice.to_edge_list().trim_end(), "one vertex or edge per entry");
    emit(&mut report, common).map_err(usage)?;
    Ok(EXIT_OK)
}

fn cmd_project(
    fixture: &std::path::Path,
    curve: &str,
    budget: u64,
    common: &Common,
) -> CmdResult {
    let text = std::fs::read_to_string(fixture)
        .map_err(|e| usage(format!("{}: {e}", fixture.display())))?;
    let (name, emb) = parse_fixture(&text).map_err(|e| usage(e.to_string()))?;
    let c = parse_normal_record(curve, &emb.ambient)?;
    let mut report = Report::new("project");
    report
        .input("fixture", &name)
        .input("fixture-file", fixture.display())
        .input("curve", curve)
        .input("budget", budget);
    match project_curve(&emb, &c, budget) {
        Ok(set) => {
            report.output("projection-size", set.curves.len(), "curves in the projection set");
            for (i, p) in set.curves.iter().enumerate() {
                let rec = CurveRecord::Normal { surface: "sub".into(), curve: p.clone() };
                report.output(
                    &format!("projection[{i}]"),
                    write_record(&rec),
                    "surgered boundary component, as a curve on the subsurface",
                );
            }
            emit(&mut report, common).map_err(usage)?;
            Ok(EXIT_OK)
        }
        Err(ProjectionError::NoEssentialIntersection) => {
            report.warn("the curve misses the subsurface (or is isotopic into its boundary); the projection is empty");
            emit(&mut report, common).map_err(usage)?;
            Ok(EXIT_HYPOTHESIS)
        }
        Err(e) => Err((e.to_string(), EXIT_UNKNOWN)),
    }
}
