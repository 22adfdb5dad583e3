//! Command-line front end. [`run`] parses arguments, runs one command and returns the exit
//! status with the rendered report, so the binary is a thin wrapper and tests drive it directly.
//!
//! Exit status is 0 on success, 1 when a verification fails (the report carries witnesses) and
//! 2 on usage errors or malformed input.

pub mod document;

use std::fmt::Write as _;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::colimits::pushout;
use crate::dihomotopy::{analyze_flow, analyze_presentation, counterexample_suite, AnalyzeOptions};
use crate::error::{Error, Result};
use crate::finset::{classify_map, SetMap};
use crate::flow::materialize;
use crate::lifting::{lifting_witness, LiftingSquare, SearchContext};
use crate::wfs::{
    canonical_factorization, nine_model_structures, nine_possibilities_table, soa_factorize, soa_factorize_flows,
    verify_model_structure, verify_wfs, CellVerdict, ClassPredicate, ModelStructureSpec, NamedWfs, SoaLimits,
    Universe, Verdict,
};
use document::{
    builtin_arrow, builtin_flow, parse_arrow_json, parse_flow_json, ArrowSource, FlowDocument, FlowSource,
    MorphismDocument,
};

#[derive(Debug, Parser)]
#[command(name = "flowcalc", version, about = "Finite flows, lifting properties and weak factorization systems")]
struct Cli {
    /// Largest set size in the universe of test arrows.
    #[arg(long, global = true, default_value_t = 4)]
    universe_max: usize,
    /// Search budget (overrides FLOWCALC_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Truncate infinite path sets at this word length.
    #[arg(long, global = true)]
    max_len: Option<usize>,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classes a set map belongs to.
    ClassifyMap { map: String },
    /// Does LEFT lift against RIGHT? Prints a square without filler if not.
    Lift {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Pushout of the span X <-F- Z -G-> Y.
    Pushout {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Materialize a presented flow.
    Materialize { flow: String },
    /// Factor an arrow canonically for a named pair, or by the small object argument.
    Factorize {
        map: String,
        /// Named weak factorization system.
        #[arg(long)]
        wfs: Option<String>,
        /// Generating arrows for the small object argument (comma separated).
        #[arg(long, value_delimiter = ',')]
        generators: Vec<String>,
    },
    /// Check a pair of classes against the weak factorization system axioms.
    VerifyWfs {
        /// One of the six named pairs.
        #[arg(long, conflicts_with_all = ["left", "right"])]
        pair: Option<String>,
        #[arg(long, requires = "right")]
        left: Option<String>,
        #[arg(long, requires = "left")]
        right: Option<String>,
    },
    /// Check the nine model structures on sets and the table of remaining candidates, or a
    /// single triple given by class expressions.
    VerifyModelStructures {
        #[arg(long, requires_all = ["fib", "w"])]
        cof: Option<String>,
        #[arg(long, requires_all = ["cof", "w"])]
        fib: Option<String>,
        #[arg(long, requires_all = ["cof", "fib"])]
        w: Option<String>,
    },
    /// Initial, final, unreachable and deadlocked states, loops, branchings and mergings.
    Analyze {
        flow: String,
        /// States intended as terminal (comma separated).
        #[arg(long, value_delimiter = ',')]
        finals: Vec<String>,
    },
    /// The counterexamples against a model structure realizing dihomotopy.
    Counterexamples,
}

/// Exit status and rendered report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

struct Report {
    passed: bool,
    json: Value,
    text: String,
}

/// Runs one command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome {
                code,
                output: e.render().to_string(),
            };
        }
    };
    let ctx = match cli.budget {
        Some(b) => SearchContext::with_budget(b),
        None => SearchContext::from_env(),
    };
    match execute(&cli, &ctx) {
        Ok(report) => Outcome {
            code: if report.passed { 0 } else { 1 },
            output: if cli.json {
                serde_json::to_string_pretty(&report.json).expect("reports serialize") + "\n"
            } else {
                report.text
            },
        },
        Err(e) => {
            let code = if is_input_error(&e) { 2 } else { 1 };
            let output = if cli.json {
                serde_json::to_string_pretty(&json!({ "error": e.to_string() })).expect("serializes") + "\n"
            } else {
                format!("error: {e}\n")
            };
            Outcome { code, output }
        }
    }
}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Document(_)
            | Error::DuplicateLabel(_)
            | Error::UnknownLabel { .. }
            | Error::NotTotal(_)
            | Error::NotComposable { .. }
            | Error::UniverseTooLarge(_)
            | Error::MalformedFlow(_)
            | Error::NotAMorphism(_)
            | Error::MalformedPresentation(_)
            | Error::SpanMismatch
            | Error::UnknownWfs(_)
            | Error::BadClassExpr(_)
    )
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

fn read_input(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Error::Document(format!("cannot read `{arg}`: {e}")))
}

/// A built-in name, inline JSON, or a path to a JSON document.
fn load_arrow(arg: &str) -> Result<ArrowSource> {
    match builtin_arrow(arg) {
        Some(a) => Ok(a),
        None => parse_arrow_json(&read_input(arg)?),
    }
}

fn load_flow(arg: &str) -> Result<FlowSource> {
    match builtin_flow(arg) {
        Some(x) => Ok(FlowSource::Flow((*x).clone())),
        None => parse_flow_json(&read_input(arg)?),
    }
}

fn load_set_map(arg: &str) -> Result<SetMap> {
    match load_arrow(arg)? {
        ArrowSource::Set(f) => Ok(f),
        ArrowSource::Flow(_) => Err(Error::Document(format!("`{arg}` is a flow morphism, expected a set map"))),
    }
}

fn execute(cli: &Cli, ctx: &SearchContext) -> Result<Report> {
    match &cli.command {
        Command::ClassifyMap { map } => classify(map),
        Command::Lift { left, right } => lift(left, right, ctx),
        Command::Pushout { f, g } => pushout_cmd(f, g, cli.max_len),
        Command::Materialize { flow } => materialize_cmd(flow, cli.max_len),
        Command::Factorize { map, wfs, generators } => factorize(map, wfs.as_deref(), generators, ctx),
        Command::VerifyWfs { pair, left, right } => {
            verify_wfs_cmd(pair.as_deref(), left.as_deref(), right.as_deref(), cli.universe_max, ctx)
        }
        Command::VerifyModelStructures { cof, fib, w } => {
            let single = match (cof, fib, w) {
                (Some(c), Some(f), Some(w)) => Some(ModelStructureSpec::parse(c, f, w)?),
                _ => None,
            };
            model_structures(single, cli.universe_max, ctx)
        }
        Command::Analyze { flow, finals } => analyze_cmd(flow, finals, cli.max_len),
        Command::Counterexamples => counterexamples(ctx),
    }
}

fn classify(arg: &str) -> Result<Report> {
    let f = load_set_map(arg)?;
    let classes: Vec<String> = classify_map(&f).into_iter().map(|t| t.to_string()).collect();
    Ok(Report {
        passed: true,
        text: format!("{f}\nclasses: {}\n", classes.join(", ")),
        json: json!({ "map": to_json(&f), "classes": classes }),
    })
}

fn square_json(sq: &LiftingSquare<crate::flow::FlowMorphism>) -> Value {
    let m = |f| to_json(&MorphismDocument::from_morphism(f));
    json!({ "left": m(&sq.left), "right": m(&sq.right), "top": m(&sq.top), "bottom": m(&sq.bottom) })
}

fn lift(left: &str, right: &str, ctx: &SearchContext) -> Result<Report> {
    let (i, p) = (load_arrow(left)?, load_arrow(right)?);
    let (witness, text) = match (i, p) {
        (ArrowSource::Set(i), ArrowSource::Set(p)) => {
            let w = lifting_witness(ctx, &i, &p)?;
            let text = w.as_ref().map(|sq| sq.to_string());
            (w.map(|sq| to_json(&sq)), text)
        }
        (i, p) => {
            let w = lifting_witness(ctx, &i.into_flow(), &p.into_flow())?;
            let text = w.as_ref().map(|sq| sq.to_string());
            (w.as_ref().map(square_json), text)
        }
    };
    let lifts = witness.is_none();
    let text = match text {
        None => format!("{left} has the left lifting property against {right}\n"),
        Some(sq) => format!("{left} does not lift against {right}; square without filler:\n{sq}\n"),
    };
    Ok(Report {
        passed: lifts,
        text,
        json: json!({ "lifts": lifts, "witness": witness }),
    })
}

fn pushout_cmd(f: &str, g: &str, max_len: Option<usize>) -> Result<Report> {
    let (f, g) = (load_arrow(f)?.into_flow(), load_arrow(g)?.into_flow());
    let po = pushout(&f, &g)?;
    let presentation = FlowDocument::from_presentation(&po.apex);
    let mut text = format!(
        "apex: {} states, {} generating paths, {} relations\n",
        po.apex.vertices().len(),
        po.apex.edges().len(),
        po.apex.relations().len()
    );
    let mut out = json!({ "presentation": to_json(&presentation) });
    match po.materialize(max_len) {
        Ok(m) => {
            let _ = writeln!(text, "materialized: {}", m.apex);
            out["apex"] = to_json(&FlowDocument::from_flow(&m.apex));
            out["left"] = to_json(&MorphismDocument::from_morphism(&m.left));
            out["right"] = to_json(&MorphismDocument::from_morphism(&m.right));
        }
        Err(Error::InfinitePathSet { cycle }) => {
            let _ = writeln!(text, "infinite path set along the cycle {}", cycle.join(" * "));
            out["infinite_cycle"] = json!(cycle);
        }
        Err(e) => return Err(e),
    }
    Ok(Report {
        passed: true,
        text,
        json: out,
    })
}

fn materialize_cmd(arg: &str, max_len: Option<usize>) -> Result<Report> {
    let p = match load_flow(arg)? {
        FlowSource::Flow(x) => {
            return Ok(Report {
                passed: true,
                text: format!("{x}\n"),
                json: to_json(&FlowDocument::from_flow(&x)),
            })
        }
        FlowSource::Presentation(p) => p,
    };
    match materialize(&p, max_len) {
        Ok(m) => Ok(Report {
            passed: true,
            text: format!("{}\n", m.flow),
            json: to_json(&FlowDocument::from_flow(&m.flow)),
        }),
        Err(Error::InfinitePathSet { cycle }) => Ok(Report {
            passed: false,
            text: format!("infinite path set along the cycle {}\n", cycle.join(" * ")),
            json: json!({ "infinite_cycle": cycle }),
        }),
        Err(e) => Err(e),
    }
}

fn factorize(arg: &str, wfs: Option<&str>, generators: &[String], ctx: &SearchContext) -> Result<Report> {
    let named: Option<NamedWfs> = wfs.map(str::parse).transpose()?;
    let mut k: Vec<ArrowSource> = generators.iter().map(|g| load_arrow(g)).collect::<Result<_>>()?;
    if let Some(w) = named {
        if k.is_empty() {
            k = w.generators().into_iter().map(ArrowSource::Set).collect();
        }
    }
    if named.is_none() && k.is_empty() {
        return Err(Error::Document("factorize needs --wfs or --generators".into()));
    }
    let f = load_arrow(arg)?;
    let mut text = String::new();
    let mut out = json!({});
    let mut passed = true;
    match (&f, k.iter().all(|a| matches!(a, ArrowSource::Set(_)))) {
        (ArrowSource::Set(f), true) => {
            if let Some(w) = named {
                let (l, r) = canonical_factorization(f, w);
                let _ = writeln!(text, "canonical ({w}):\n  l = {l}\n  r = {r}");
                out["canonical"] = json!({ "l": to_json(&l), "r": to_json(&r) });
            }
            let k: Vec<SetMap> = k
                .into_iter()
                .map(|a| match a {
                    ArrowSource::Set(g) => g,
                    ArrowSource::Flow(_) => unreachable!(),
                })
                .collect();
            match soa_factorize(f, &k, SoaLimits::default(), ctx) {
                Ok(s) => {
                    let _ = writeln!(text, "small object argument ({} stages):\n  l = {}\n  r = {}", s.stages, s.l, s.r);
                    out["small_object_argument"] = to_json(&s);
                }
                Err(inc) => {
                    passed = false;
                    let _ = writeln!(text, "small object argument incomplete: {}", inc.reason);
                    out["small_object_argument"] = json!({ "incomplete": inc.reason.to_string(), "partial": to_json(&inc.partial) });
                }
            }
        }
        _ => {
            let f = f.clone().into_flow();
            let k: Vec<_> = k.into_iter().map(ArrowSource::into_flow).collect();
            let doc = |m| to_json(&MorphismDocument::from_morphism(m));
            match soa_factorize_flows(&f, &k, SoaLimits::default(), ctx) {
                Ok(s) => {
                    let _ = writeln!(text, "small object argument ({} stages):\n  l = {}\n  r = {}", s.stages, s.l, s.r);
                    out["small_object_argument"] = json!({ "l": doc(&s.l), "r": doc(&s.r), "stages": s.stages });
                }
                Err(inc) => {
                    passed = false;
                    let _ = writeln!(text, "small object argument incomplete: {}", inc.reason);
                    out["small_object_argument"] = json!({
                        "incomplete": inc.reason.to_string(),
                        "partial": { "l": doc(&inc.partial.l), "r": doc(&inc.partial.r), "stages": inc.partial.stages },
                    });
                }
            }
        }
    }
    Ok(Report {
        passed,
        text,
        json: out,
    })
}

fn verify_wfs_cmd(
    pair: Option<&str>,
    left: Option<&str>,
    right: Option<&str>,
    bound: usize,
    ctx: &SearchContext,
) -> Result<Report> {
    let (l, r): (ClassPredicate, ClassPredicate) = match (pair, left, right) {
        (Some(name), _, _) => {
            let w: NamedWfs = name.parse()?;
            (w.left().into(), w.right().into())
        }
        (None, Some(l), Some(r)) => (l.parse()?, r.parse()?),
        _ => return Err(Error::Document("verify-wfs needs --pair or --left and --right".into())),
    };
    let universe = Universe::new(bound, ctx)?;
    let report = verify_wfs(&l, &r, &universe, ctx)?;
    let mut text = format!(
        "({l}, {r}) over {} arrows up to size {bound}: {}\n",
        report.universe_size,
        verdict_word(report.verdict)
    );
    if let Some(w) = report.first_witness() {
        let _ = writeln!(text, "witness: {w}");
    }
    Ok(Report {
        passed: report.passed(),
        text,
        json: to_json(&report),
    })
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn model_structures(single: Option<ModelStructureSpec>, bound: usize, ctx: &SearchContext) -> Result<Report> {
    let universe = Universe::new(bound, ctx)?;
    let specs = match &single {
        Some(s) => vec![s.clone()],
        None => nine_model_structures(),
    };
    let mut text = String::new();
    let mut reports = Vec::new();
    for spec in &specs {
        let report = verify_model_structure(spec, &universe, ctx)?;
        let _ = writeln!(text, "{}: {}", spec.name(), verdict_word(report.verdict));
        reports.push(report);
    }
    let passed = reports.iter().all(|r| r.passed());
    let mut out = json!({ "universe_bound": bound, "structures": to_json(&reports) });
    if single.is_none() {
        let table = nine_possibilities_table(&universe);
        let _ = writeln!(text, "\nremaining candidates (rows: Cof∩W, Fib; columns: Cof, Fib∩W):");
        for cell in &table {
            let why = match cell.verdict {
                CellVerdict::InclusionFails => format!("ruled out, {}", cell.inclusion_failures[0].claim),
                CellVerdict::TwoOutOfThreeFails => format!("ruled out, W = {} fails two-out-of-three", cell.w),
                CellVerdict::Possible => format!("possible, W = {}", cell.w),
            };
            let _ = writeln!(text, "  {} / {}: {why}", cell.row, cell.column);
        }
        out["table"] = to_json(&table);
    }
    Ok(Report {
        passed,
        text,
        json: out,
    })
}

fn analyze_cmd(arg: &str, finals: &[String], max_len: Option<usize>) -> Result<Report> {
    let options = AnalyzeOptions {
        designated_finals: (!finals.is_empty()).then(|| finals.to_vec()),
    };
    let report = match load_flow(arg)? {
        FlowSource::Flow(x) => analyze_flow(&x, &options),
        FlowSource::Presentation(p) => {
            let mut r = analyze_presentation(&p, &options);
            if r.infinite_path_sets && max_len.is_some() {
                r.truncated = materialize(&p, max_len)?.flow.is_truncated();
            }
            r
        }
    };
    let mut text = String::new();
    let list = |v: &[String]| if v.is_empty() { "-".to_string() } else { v.join(", ") };
    let _ = writeln!(text, "initial: {}", list(&report.initial));
    let _ = writeln!(text, "final: {}", list(&report.final_states));
    let _ = writeln!(text, "unreachable: {}", list(&report.unreachable));
    let _ = writeln!(text, "deadlocks: {}", list(&report.deadlocks));
    for l in &report.loops {
        let _ = writeln!(text, "loop: {}", l.join(" * "));
    }
    for b in &report.branchings {
        let _ = writeln!(text, "branching at {}: {}", b.state, b.paths.join(", "));
    }
    for m in &report.mergings {
        let _ = writeln!(text, "merging at {}: {}", m.state, m.paths.join(", "));
    }
    Ok(Report {
        passed: true,
        text,
        json: to_json(&report),
    })
}

fn counterexamples(ctx: &SearchContext) -> Result<Report> {
    let r = counterexample_suite(ctx)?;
    let mut text = String::new();
    let s = &r.skeletons;
    let _ = writeln!(
        text,
        "phi: I -> I*I, skeleton sizes ({}, {}), discrete weak equivalence: {}",
        s.segment_states, s.double_segment_states, s.phi_is_discrete_weq
    );
    for c in &r.pushouts_of_r {
        let damage = if let Some(cycle) = &c.infinite_cycle {
            format!("loop {}", cycle.join(" * "))
        } else if !c.damage.mergings.is_empty() {
            format!("merging at {}", c.damage.mergings[0].state)
        } else if !c.damage.branchings.is_empty() {
            format!("branching at {}", c.damage.branchings[0].state)
        } else {
            "none".to_string()
        };
        let _ = writeln!(
            text,
            "pushout of R gluing the {} ({} ~ {}): {} -> {} states, {damage}",
            c.name, c.identified.0, c.identified.1, c.states_before, c.states_after
        );
    }
    for c in &r.codiagonals {
        let _ = writeln!(
            text,
            "codiagonal of {}: h0 = {}, epi {}, injective {}",
            c.name, c.h0, c.h0_epi, c.h0_injective
        );
    }
    let sw = &r.skeleton_sweep;
    let _ = writeln!(
        text,
        "{} morphisms between {} small flows, {} lift against R and C, {} with a non-bijective state map",
        sw.morphisms,
        sw.flows,
        sw.with_rlp_against_r_and_c,
        sw.violations.len()
    );
    Ok(Report {
        passed: r.all_confirmed(),
        text,
        json: to_json(&r),
    })
}
