//! Subcommands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hfl_core::cobordism::{evaluate_word, fixture_shapes, parse_word, SHAPE_NAMES};
use hfl_core::homology::{ACTION_MARGIN, HOMOLOGY_MARGIN};
use hfl_core::invariants::{compare, compare_with_torus, distinguish, hf, hf_w, hfl, trace_class, Comparison, PointedModel};
use hfl_core::{Complex, Flavor, Morphism, Window};
use hfl_surfaces::{
    canonical_form, connect_by_switches, connect_decorations, enumerate_deperturbed, is_chiral, iso, parse_cells,
    parse_moves, quad_switch_graph, serialize_cells, CellDecomposition,
};

use crate::registry::{parse_pair, read, Registry};
use crate::report::{decomp_json, hash_inputs, table_json, table_lines, RunReport};
use crate::{exit, CliError, VERSION};

pub const DEFAULT_WINDOW: [i64; 4] = [-40, 8, -40, 8];
pub const WINDOW_MARGIN: i64 = 4;
pub const MAX_WINDOW_CELLS: usize = 10_000;
pub const DEFAULT_BOUND: usize = 100_000;

#[derive(Parser, Debug)]
#[command(name = "hfl", version, about = "Knot Floer homology over F[u,v] and decorated-surface moves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit the structured report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value = "circ")]
    pub flavor: Flavor,
    /// Bidegree window: w_lo w_hi z_lo z_hi.
    #[arg(long, global = true, num_args = 4, allow_negative_numbers = true, value_names = ["W_LO", "W_HI", "Z_LO", "Z_HI"])]
    pub window: Option<Vec<i64>>,
    /// State bound for move searches.
    #[arg(long, global = true)]
    pub bound: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Group {
    Hfl,
    Hf,
    #[value(name = "hf_w", alias = "hf-w")]
    HfW,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homology table (and circ decomposition) of HFL, HF or HF_w.
    Compute {
        fixture: String,
        #[arg(value_enum, default_value = "hfl")]
        group: Group,
    },
    /// Compare a fixture with a closed form (torus:p,q) or a module shape.
    Verify {
        fixture: String,
        #[arg(long)]
        against: Option<String>,
    },
    /// Cell decomposition moves.
    Moves {
        #[command(subcommand)]
        action: MovesCommand,
    },
    /// Evaluate a cobordism word script.
    Cobordism {
        script: Option<PathBuf>,
        /// Inline word, tokens separated by `;`.
        #[arg(long)]
        word: Option<String>,
    },
    /// Compare the trace class of a chain map with that of the identity (or another map).
    Slice {
        fixture: String,
        map: String,
        #[arg(long)]
        other: Option<String>,
    },
    /// Validate a complex fixture or a cell-decomposition file.
    Validate { input: String },
}

#[derive(Subcommand, Debug)]
pub enum MovesCommand {
    /// Connect two decompositions by perturbations and deperturbations.
    Connect {
        a: PathBuf,
        b: PathBuf,
        /// Use edge switches only (both inputs must be deperturbed).
        #[arg(long)]
        switches: bool,
    },
    /// List one-cell decompositions up to isomorphism.
    Enumerate {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        plus: usize,
        #[arg(long)]
        minus: usize,
    },
    /// Apply a move script and optionally compare with a target.
    Replay {
        start: PathBuf,
        script: PathBuf,
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Quadrangulations of the alternating 2m-gon and their switch graph.
    Quad { m: usize },
}

/// Output of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

struct Partial {
    inputs: Vec<String>,
    results: Value,
    lines: Vec<String>,
    code: i32,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: exit::INVALID }
            } else {
                Outcome { stdout: text, stderr: String::new(), code: exit::OK }
            };
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    let registry = match Registry::builtin() {
        Ok(r) => r,
        Err(e) => return Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    };
    match dispatch(&cli, &registry) {
        Ok(p) => {
            let mut hashed = echo.clone();
            hashed.extend(p.inputs);
            let report = RunReport {
                command: echo,
                inputs_hash: hash_inputs(hashed.iter().map(String::as_str)),
                results: p.results,
                lines: p.lines,
                timing_ms: start.elapsed().as_secs_f64() * 1e3,
                version: VERSION,
            };
            Outcome { stdout: report.render(cli.json), stderr: String::new(), code: p.code }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}

fn dispatch(cli: &Cli, reg: &Registry) -> Result<Partial, CliError> {
    match &cli.command {
        Command::Compute { fixture, group } => compute(cli, reg, fixture, *group),
        Command::Verify { fixture, against } => verify(reg, fixture, against.as_deref()),
        Command::Moves { action } => moves(cli, action),
        Command::Cobordism { script, word } => cobordism(cli, script.as_ref(), word.as_deref()),
        Command::Slice { fixture, map, other } => slice(reg, fixture, map, other.as_deref()),
        Command::Validate { input } => validate(reg, input),
    }
}

/// The user's window, or the default one grown to cover every generator with room to spare.
pub fn choose_window(c: &Complex, user: Option<&[i64]>) -> Result<Window, CliError> {
    if let Some(v) = user {
        return Window::new(v[0], v[1], v[2], v[3])
            .ok_or_else(|| CliError::Usage(format!("window bounds out of order: {v:?}")));
    }
    let [a, b, c0, d] = DEFAULT_WINDOW;
    let base = Window::new(a, b, c0, d).expect("default window is nonempty");
    let w = base.union(&Window::around(c, WINDOW_MARGIN + ACTION_MARGIN));
    if w.cells() > MAX_WINDOW_CELLS {
        return Err(CliError::Untrusted(format!(
            "covering the generators needs {} cells, above the cap of {MAX_WINDOW_CELLS}",
            w.cells()
        )));
    }
    Ok(w)
}

fn window_json(w: &Window) -> Value {
    json!([w.w_lo, w.w_hi, w.z_lo, w.z_hi])
}

fn compute(cli: &Cli, reg: &Registry, fixture: &str, group: Group) -> Result<Partial, CliError> {
    let r = reg.resolve(fixture)?;
    let f = cli.flavor;
    let w = choose_window(&r.complex, cli.window.as_deref())?;
    let (group_name, margin) = match group {
        Group::Hfl => ("hfl", HOMOLOGY_MARGIN),
        Group::Hf => ("hf", ACTION_MARGIN),
        Group::HfW => ("hf_w", ACTION_MARGIN),
    };
    let result = match group {
        Group::Hfl => hfl(&r.complex, f, &w)?,
        Group::Hf | Group::HfW => {
            let model = PointedModel::knot(r.complex.clone())?;
            if group == Group::Hf {
                hf(&model, f, &w)?
            } else {
                hf_w(&model, f, &w)?
            }
        }
    };
    let trusted = w.shrink(margin).expect("computation succeeded on a nonempty region");
    let mut lines = vec![
        format!("fixture: {}", r.name),
        format!("group: {group_name}"),
        format!("flavor: {f}"),
        format!("window: {w}"),
        format!("trusted: {trusted}"),
        format!("total dimension on trusted region: {}", result.table.total()),
        "table:".into(),
    ];
    lines.extend(table_lines(&result.table));
    if let Some(d) = &result.decomp {
        lines.push(format!("decomposition: {d}"));
    }
    let results = json!({
        "fixture": r.name,
        "group": group_name,
        "flavor": f,
        "window": window_json(&w),
        "trusted": window_json(&trusted),
        "total": result.table.total(),
        "table": table_json(&result.table),
        "decomposition": result.decomp.as_ref().map(decomp_json),
    });
    Ok(Partial { inputs: vec![r.source], results, lines, code: exit::OK })
}

fn verify(reg: &Registry, fixture: &str, against: Option<&str>) -> Result<Partial, CliError> {
    let r = reg.resolve(fixture)?;
    let target = match against {
        Some(t) => t.to_string(),
        None if fixture.starts_with("torus:") => fixture.to_string(),
        None if fixture == "trefoil" => "torus:2,3".to_string(),
        None if SHAPE_NAMES.contains(&fixture) => format!("shape:{fixture}"),
        None => return Err(CliError::Usage(format!("no default comparator for `{fixture}`; pass --against"))),
    };
    let cmp: Comparison = if let Some(pq) = target.strip_prefix("torus:") {
        let (p, q) = parse_pair(pq).ok_or_else(|| CliError::Usage(format!("expected torus:p,q, got `{target}`")))?;
        compare_with_torus(&r.complex, p, q)?
    } else {
        let name = target.strip_prefix("shape:").unwrap_or(&target);
        let shape = fixture_shapes(name)?;
        let model = PointedModel::knot(r.complex.clone())?;
        let w = choose_window(&r.complex, None)?;
        let got = hf(&model, Flavor::Circ, &w)?.decomp.expect("circ flavor is decomposed");
        compare(&got, &shape)
    };
    let mut lines = vec![format!("fixture: {}", r.name), format!("against: {target}"), format!("verdict: {cmp}")];
    for m in &cmp.mismatches {
        lines.push(format!("  diff: {m}"));
    }
    let results = json!({
        "fixture": r.name,
        "against": target,
        "matched": cmp.matched,
        "shift": cmp.shift.map(|s| [s.w, s.z]),
        "mismatches": cmp.mismatches,
    });
    let code = if cmp.matched { exit::OK } else { exit::MISMATCH };
    Ok(Partial { inputs: vec![r.source], results, lines, code })
}

fn load_cells(path: &Path) -> Result<(CellDecomposition, String), CliError> {
    let text = read(path)?;
    let d = parse_cells(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    Ok((d, text))
}

fn cells_json(d: &CellDecomposition) -> Value {
    let p = d.predicates();
    json!({
        "genus": d.genus(),
        "vertices": d.vertices().len(),
        "edges": d.edges().len(),
        "cells": d.cells().len(),
        "simple": p.simple,
        "complete": p.complete,
        "deperturbed": p.deperturbed,
        "canonical": canonical_form(d).to_string(),
    })
}

fn moves(cli: &Cli, action: &MovesCommand) -> Result<Partial, CliError> {
    let bound = cli.bound.unwrap_or(DEFAULT_BOUND);
    match action {
        MovesCommand::Connect { a, b, switches } => {
            let (d1, t1) = load_cells(a)?;
            let (d2, t2) = load_cells(b)?;
            let seq = if *switches { connect_by_switches(&d1, &d2, bound)? } else { connect_decorations(&d1, &d2, bound)? };
            let end = seq.apply(&d1)?;
            let replayed = iso(&end, &d2);
            if !replayed {
                return Err(CliError::Invalid("replay did not reach the target".into()));
            }
            let mut lines = vec![format!("moves: {}", seq.len()), "replay: verified".into(), "script:".into()];
            lines.extend(seq.0.iter().map(|m| format!("  {m}")));
            let results = json!({
                "moves": seq.0.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "script": seq.script(),
                "replay_verified": replayed,
                "start": cells_json(&d1),
                "target": cells_json(&d2),
            });
            Ok(Partial { inputs: vec![t1, t2, bound.to_string()], results, lines, code: exit::OK })
        }
        MovesCommand::Enumerate { genus, plus, minus } => {
            let classes = enumerate_deperturbed(*genus, *plus, *minus)?;
            let mut lines = vec![format!("classes: {}", classes.len())];
            let mut items = Vec::new();
            for (k, d) in classes.iter().enumerate() {
                let chiral = is_chiral(d);
                let cell = &d.cells()[0];
                let word: Vec<String> = cell.sides.iter().map(|&s| d.side_label(s)).collect();
                lines.push(format!("  [{k}] {}{}", word.join(" "), if chiral { "  (chiral)" } else { "" }));
                items.push(json!({ "cells": serialize_cells(d), "chiral": chiral, "canonical": canonical_form(d).to_string() }));
            }
            let results = json!({ "genus": genus, "plus": plus, "minus": minus, "classes": items });
            Ok(Partial { inputs: Vec::new(), results, lines, code: exit::OK })
        }
        MovesCommand::Replay { start, script, target } => {
            let (d, t) = load_cells(start)?;
            let s = read(script)?;
            let seq = parse_moves(&s)?;
            let states = seq.replay(&d)?;
            let genus = d.genus();
            for (k, st) in states.iter().enumerate() {
                let g = st.validate()?;
                if g != genus {
                    return Err(CliError::Invalid(format!("move {k} changed the genus from {genus} to {g}")));
                }
            }
            let end = states.last().cloned().unwrap_or(d);
            let mut lines = vec![format!("moves applied: {}", seq.len())];
            let mut inputs = vec![t, s];
            let mut code = exit::OK;
            let mut matched = Value::Null;
            if let Some(tp) = target {
                let (goal, tt) = load_cells(tp)?;
                inputs.push(tt);
                let m = iso(&end, &goal);
                matched = Value::Bool(m);
                lines.push(format!("target: {}", if m { "isomorphic" } else { "not isomorphic" }));
                if !m {
                    code = exit::MISMATCH;
                }
            }
            lines.push("result:".into());
            lines.extend(serialize_cells(&end).lines().map(|l| format!("  {l}")));
            let results = json!({ "result": serialize_cells(&end), "summary": cells_json(&end), "matches_target": matched });
            Ok(Partial { inputs, results, lines, code })
        }
        MovesCommand::Quad { m } => {
            let g = quad_switch_graph(*m).map_err(|e| CliError::Usage(e.to_string()))?;
            let lines = vec![
                format!("quadrangulations: {}", g.nodes.len()),
                format!("switch edges: {}", g.edge_count()),
                format!("connected: {}", g.connected),
            ];
            let results = json!({ "m": m, "count": g.nodes.len(), "edges": g.edge_count(), "connected": g.connected });
            Ok(Partial { inputs: Vec::new(), results, lines, code: exit::OK })
        }
    }
}

fn cobordism(cli: &Cli, script: Option<&PathBuf>, word: Option<&str>) -> Result<Partial, CliError> {
    let text = match (script, word) {
        (Some(p), None) => read(p)?,
        (None, Some(w)) => w.to_string(),
        (None, None) => return Err(CliError::Usage("give a script file or --word".into())),
        (Some(_), Some(_)) => return Err(CliError::Usage("give either a script file or --word, not both".into())),
    };
    let tokens = parse_word(&text)?;
    let s = evaluate_word(&tokens)?;
    let mut lines = vec![format!("tokens: {}", tokens.len()), format!("scalar: {s}")];
    let mut notes = serde_json::Map::new();
    for f in Flavor::ALL {
        let note = if f == Flavor::Hat && s.hat_zero() { "zero".to_string() } else { format!("{s} · Id") };
        lines.push(format!("  {f}: {note}"));
        notes.insert(f.to_string(), Value::String(note));
    }
    lines.push(format!("requested flavor ({}): {}", cli.flavor, s.describe(cli.flavor)));
    let results = json!({
        "power": s.power,
        "scalar": s.to_string(),
        "hat_zero": s.hat_zero(),
        "flavors": notes,
    });
    Ok(Partial { inputs: vec![text], results, lines, code: exit::OK })
}

fn slice(reg: &Registry, fixture: &str, map: &str, other: Option<&str>) -> Result<Partial, CliError> {
    let r = reg.resolve(fixture)?;
    let c = &r.complex;
    let (name, f, ftext) = reg.resolve_map(map, c)?;
    let (oname, g, gtext) = match other {
        Some(o) => reg.resolve_map(o, c)?,
        None => ("identity".to_string(), Morphism::identity(c.len()), String::new()),
    };
    let not_chain = |n: &str| CliError::Invalid(format!("map `{n}` is not a chain map"));
    let tf = trace_class(c, &f).map_err(|_| not_chain(&name))?;
    let tg = trace_class(c, &g).map_err(|_| not_chain(&oname))?;
    let mut lines = vec![
        format!("complex: {}", r.name),
        format!("maps: {name} vs {oname}"),
        format!("trace classes are cycles: {}", tf.is_cycle() && tg.is_cycle()),
    ];
    let mut verdicts = serde_json::Map::new();
    let mut distinct = Vec::new();
    for fl in Flavor::ALL {
        let d = distinguish(&tf, &tg, fl)?;
        lines.push(format!("  {fl}: {}", if d { "distinct (difference is not a boundary)" } else { "equal" }));
        verdicts.insert(fl.to_string(), Value::Bool(d));
        if d {
            distinct.push(fl.to_string());
        }
    }
    let verdict = if distinct.is_empty() { "equal".to_string() } else { format!("distinct in {}", distinct.join(", ")) };
    lines.push(format!("verdict: {verdict}"));
    let results = json!({ "complex": r.name, "map": name, "other": oname, "distinct": verdicts, "verdict": verdict });
    Ok(Partial { inputs: vec![r.source, ftext, gtext], results, lines, code: exit::OK })
}

fn looks_like_cells(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("vertex") || l.starts_with("edge") || l.starts_with("cell"))
}

fn validate(reg: &Registry, input: &str) -> Result<Partial, CliError> {
    let path = PathBuf::from(input);
    if path.exists() {
        let text = read(&path)?;
        if looks_like_cells(&text) {
            let d = parse_cells(&text).map_err(|e| CliError::Invalid(format!("{input}: {e}")))?;
            let p = d.predicates();
            let lines = vec![
                format!("cell decomposition: {input}"),
                format!("genus: {}", d.genus()),
                format!("V = {}, E = {}, F = {}", d.vertices().len(), d.edges().len(), d.cells().len()),
                format!("simple: {}, complete: {}, deperturbed: {}", p.simple, p.complete, p.deperturbed),
            ];
            return Ok(Partial { inputs: vec![text], results: cells_json(&d), lines, code: exit::OK });
        }
    }
    let r = reg.resolve(input)?;
    let report = r.complex.validate();
    let lines = vec![
        format!("complex: {}", r.name),
        format!("generators: {}", r.complex.len()),
        "d² = 0: yes".into(),
        "homogeneous of bidegree (-1,-1): yes".into(),
        format!("reduced: {}", r.complex.is_reduced()),
    ];
    debug_assert!(report.is_valid());
    let results = json!({ "complex": r.name, "generators": r.complex.len(), "valid": true, "reduced": r.complex.is_reduced() });
    Ok(Partial { inputs: vec![r.source], results, lines, code: exit::OK })
}
