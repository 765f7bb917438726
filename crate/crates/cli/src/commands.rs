use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use log::warn;
use serde_json::{json, Value};

use kplanar_core::bounds::{bounds_table, dependency_degree_bound, Bound, BoundsQuery, LogBase};
use kplanar_core::decompose::ResamplePolicy;
use kplanar_core::generators::{convex_kn, cylindrical_kn, random_geometric_drawing, random_regularish};
use kplanar_core::oracle::{
    dependency_scopes, exact_best_edge_partition, exact_best_labeling, exact_conditional_survival,
    exact_survival_expectation, exact_survival_variance, rational_json,
};
use kplanar_core::svg::{check_rendering, layout, render_svg, Grouping};
use kplanar_core::{
    decompose_by_coloring, decompose_combined, decompose_lcr, decompose_via_degree_partition, optimal_weights,
    run_montecarlo, Drawing, Graph, LabelingObjective, MonteCarloConfig, SearchConfig, WeightVector,
};

use crate::{Cli, Command, FamilyArg, Global, GroupingArg, LogBaseArg, ModeArg, ObjectiveArg, OracleModeArg, PolicyArg};

const VERSION: &str = "kplanar/1";

pub enum Status {
    Certified,
    Uncertified,
}

struct Report {
    command: &'static str,
    inputs: Value,
    outputs: Value,
    seed: Option<u64>,
    /// Human-readable form printed instead of the JSON when requested.
    table: Option<String>,
    status: Status,
}

pub fn run(cli: &Cli) -> Result<Status> {
    let g = &cli.global;
    let report = match &cli.command {
        Command::Analyze { drawing, json } => analyze(g, drawing, *json)?,
        Command::Decompose { drawing, mode, best_of_budget, policy, grouping } => {
            decompose(g, drawing, *mode, *best_of_budget, *policy, *grouping)?
        }
        Command::Montecarlo { drawing } => montecarlo(g, drawing)?,
        Command::Bounds { n, m, delta, lcr, cr, alpha, json } => {
            let q = BoundsQuery {
                n: *n,
                m: *m,
                max_degree: *delta,
                lcr: *lcr,
                cr: *cr,
                k: Some(g.k as u64),
                epsilon: Some(g.eps),
                alpha: *alpha,
                log_base: log_base(g),
            };
            bounds(&q, *json)
        }
        Command::Oracle { drawing, mode, objective, edge, i, j } => oracle(g, drawing, *mode, *objective, *edge, *i, *j)?,
        Command::Gen { family, n, d, graph } => gen(g, *family, *n, *d, graph.as_deref())?,
    };
    emit(g, &report)?;
    Ok(report.status)
}

fn emit(g: &Global, r: &Report) -> Result<()> {
    let envelope = json!({
        "version": VERSION,
        "command": r.command,
        "inputs": r.inputs,
        "outputs": r.outputs,
        "seed": r.seed,
    });
    let text = serde_json::to_string_pretty(&envelope)? + "\n";
    match &g.out {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None if r.table.is_none() => print!("{text}"),
        None => {}
    }
    if let Some(table) = &r.table {
        print!("{table}");
    }
    Ok(())
}

fn log_base(g: &Global) -> LogBase {
    match g.log_base {
        LogBaseArg::E => LogBase::Natural,
        LogBaseArg::Two => LogBase::Two,
    }
}

fn load_drawing(path: &Path) -> Result<Drawing> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Drawing::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn weights(g: &Global, k: usize) -> Result<WeightVector> {
    let w = match g.weights.as_str() {
        "optimal" => optimal_weights(k)?,
        "uniform" => WeightVector::uniform(k)?,
        list => WeightVector::parse(list)?,
    };
    if w.k() != k {
        bail!("--weights has {} entries but --k is {k}", w.k());
    }
    Ok(w)
}

fn format_value(v: f64) -> String {
    if v == 0.0 || !v.is_finite() || (v.fract() == 0.0 && v.abs() < 1e15) {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    format!("{:.*}", (5 - magnitude).max(0) as usize, v)
}

fn bound_table(rows: &[kplanar_core::bounds::BoundRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    rows.iter()
        .map(|r| match &r.bound {
            Bound::Value(v) => format!("  {:<width$}  {}\n", r.name, format_value(*v)),
            Bound::HypothesisUnmet(why) => format!("  {:<width$}  n/a ({why})\n", r.name),
        })
        .collect()
}

fn drawing_query(g: &Global, d: &Drawing) -> BoundsQuery {
    let graph = d.graph();
    BoundsQuery {
        n: Some(graph.n() as u64),
        m: Some(graph.m() as u64),
        max_degree: Some(graph.max_degree() as u64),
        lcr: Some(d.local_crossing_number()),
        cr: Some(d.total_crossings()),
        k: Some(g.k as u64),
        epsilon: Some(g.eps),
        alpha: graph.alpha(),
        log_base: log_base(g),
    }
}

fn analyze(g: &Global, path: &Path, as_json: bool) -> Result<Report> {
    let d = load_drawing(path)?;
    let graph = d.graph();
    let rows = bounds_table(&drawing_query(g, &d));
    let stats = json!({
        "n": graph.n(),
        "m": graph.m(),
        "max_degree": graph.max_degree(),
        "crossings": d.total_crossings(),
        "lcr": d.local_crossing_number(),
        "intersection_max_degree": d.intersection_graph().max_degree(),
        "alpha": graph.alpha(),
        "simple": d.all_simple(),
        "adjacent_crossings": d.has_adjacent_crossings(),
        "plane": d.total_crossings() == 0,
    });
    let table = (!as_json).then(|| {
        let mut t = format!(
            "n = {}\nm = {}\nmax degree = {}\ncrossings C = {}\nlocal crossing number L = {}\nintersection graph max degree = {}\nalpha = {}\n",
            graph.n(),
            graph.m(),
            graph.max_degree(),
            d.total_crossings(),
            d.local_crossing_number(),
            d.intersection_graph().max_degree(),
            graph.alpha().map_or("n/a".into(), format_value),
        );
        if d.total_crossings() == 0 {
            t.push_str("note: the drawing is plane (no crossings)\n");
        }
        if d.has_adjacent_crossings() {
            t.push_str("note: some crossing edges share an endpoint\n");
        }
        t.push_str("bounds:\n");
        t.push_str(&bound_table(&rows));
        t
    });
    Ok(Report {
        command: "analyze",
        inputs: json!({ "drawing": path, "k": g.k, "eps": g.eps, "log_base": log_base(g) }),
        outputs: json!({ "stats": stats, "bounds": rows }),
        seed: None,
        table,
        status: Status::Certified,
    })
}

fn decompose(
    g: &Global,
    path: &Path,
    mode: ModeArg,
    best_of_budget: bool,
    policy: PolicyArg,
    grouping: GroupingArg,
) -> Result<Report> {
    let d = load_drawing(path)?;
    let mut cfg = SearchConfig::new(g.budget, g.seed).with_policy(match policy {
        PolicyArg::Local => ResamplePolicy::Local,
        PolicyArg::Restart => ResamplePolicy::Restart,
    });
    if best_of_budget {
        cfg = cfg.best_of_budget();
    }
    let (out, used_weights, seed) = match mode {
        ModeArg::Construction => {
            let w = weights(g, g.k)?;
            (decompose_lcr(&d, g.k, g.eps, &w, &cfg)?, Some(w), Some(g.seed))
        }
        ModeArg::Combined => {
            let w = WeightVector::uniform(g.k)?;
            (decompose_combined(&d, g.k, g.eps, &cfg)?, Some(w), Some(g.seed))
        }
        ModeArg::DegreePartition => (decompose_via_degree_partition(&d, g.k, g.eps, &cfg)?, None, Some(g.seed)),
        ModeArg::Coloring => {
            let out = decompose_by_coloring(&d)?;
            if out.assignment.k() != g.k {
                warn!("coloring uses {} planes; --k {} is ignored in this mode", out.assignment.k(), g.k);
            }
            (out, None, None)
        }
    };
    let mut outputs = json!({ "decomposition": out.to_json(used_weights.as_ref(), seed) });
    if let Some(svg_path) = &g.svg {
        let grouping = match grouping {
            GroupingArg::Surviving => Grouping::Surviving,
            GroupingArg::Components => Grouping::Components,
        };
        let svg = render_svg(&layout(&d, &out.assignment, grouping)?);
        fs::write(svg_path, &svg).with_context(|| format!("writing {}", svg_path.display()))?;
        let check = check_rendering(&svg, out.assignment.k(), &out.report.plane_totals)?;
        let consistent = match grouping {
            Grouping::Surviving => check.exact,
            Grouping::Components => check.within,
        };
        if !consistent {
            bail!("recount of the rendered SVG {:?} disagrees with the reported {:?}", check.recounted, check.reported);
        }
        outputs["svg"] = json!({ "path": svg_path, "grouping": grouping, "recount": check });
    }
    let mode_name = match mode {
        ModeArg::Construction => "construction",
        ModeArg::DegreePartition => "degree-partition",
        ModeArg::Coloring => "coloring",
        ModeArg::Combined => "combined",
    };
    Ok(Report {
        command: "decompose",
        inputs: json!({
            "drawing": path,
            "mode": mode_name,
            "k": g.k,
            "eps": g.eps,
            "weights": g.weights,
            "budget": g.budget,
            "best_of_budget": best_of_budget,
            "policy": cfg.policy,
        }),
        outputs,
        seed,
        table: None,
        status: if out.report.certified { Status::Certified } else { Status::Uncertified },
    })
}

fn montecarlo(g: &Global, path: &Path) -> Result<Report> {
    let d = load_drawing(path)?;
    let w = weights(g, g.k)?;
    let summary = run_montecarlo(&d, &w, &MonteCarloConfig { trials: g.trials, seed: g.seed, epsilon: g.eps })?;
    Ok(Report {
        command: "montecarlo",
        inputs: json!({ "drawing": path, "k": g.k, "eps": g.eps, "weights": g.weights, "trials": g.trials }),
        outputs: serde_json::to_value(summary)?,
        seed: Some(g.seed),
        table: None,
        status: Status::Certified,
    })
}

fn bounds(q: &BoundsQuery, as_json: bool) -> Report {
    let rows = bounds_table(q);
    let table = (!as_json).then(|| bound_table(&rows));
    Report {
        command: "bounds",
        inputs: serde_json::to_value(q).expect("query serializes"),
        outputs: json!({ "bounds": rows }),
        seed: None,
        table,
        status: Status::Certified,
    }
}

fn oracle(
    g: &Global,
    path: &Path,
    mode: OracleModeArg,
    objective: ObjectiveArg,
    edge: Option<usize>,
    i: usize,
    j: usize,
) -> Result<Report> {
    let d = load_drawing(path)?;
    let mut inputs = json!({ "drawing": path, "k": g.k });
    let (mode_name, outputs) = match mode {
        OracleModeArg::Labeling => {
            let obj = match objective {
                ObjectiveArg::MaxG => LabelingObjective::MaxLoad,
                ObjectiveArg::SumG => LabelingObjective::Total,
                ObjectiveArg::Combined => LabelingObjective::Combined { epsilon: g.eps },
            };
            inputs["objective"] = serde_json::to_value(obj)?;
            ("labeling", serde_json::to_value(exact_best_labeling(&d, g.k, obj)?)?)
        }
        OracleModeArg::Partition => ("partition", serde_json::to_value(exact_best_edge_partition(&d, g.k)?)?),
        OracleModeArg::Expectation => {
            let w = weights(g, g.k)?;
            inputs["weights"] = json!(g.weights);
            let mean = exact_survival_expectation(&d, &w);
            let variance = exact_survival_variance(&d, &w).ok();
            ("expectation", json!({
                "crossings": d.total_crossings(),
                "expectation": rational_json(&mean),
                "variance": variance.as_ref().map(rational_json),
            }))
        }
        OracleModeArg::Conditional => {
            let edge = edge.ok_or_else(|| anyhow!("--mode conditional needs --edge"))?;
            let w = weights(g, g.k)?;
            inputs["weights"] = json!(g.weights);
            inputs["edge"] = json!(edge);
            inputs["i"] = json!(i);
            inputs["j"] = json!(j);
            ("conditional", exact_conditional_survival(&d, &w, edge, i, j)?.to_json())
        }
        OracleModeArg::Scopes => {
            let s = dependency_scopes(&d);
            let bound = dependency_degree_bound(d.local_crossing_number(), d.graph().max_degree() as u64);
            let mut v = serde_json::to_value(&s)?;
            v["bound"] = json!(bound);
            v["within_bound"] = json!(s.max_conditional as u64 <= bound);
            ("scopes", v)
        }
    };
    inputs["mode"] = json!(mode_name);
    Ok(Report { command: "oracle", inputs, outputs, seed: None, table: None, status: Status::Certified })
}

fn gen(g: &Global, family: FamilyArg, n: Option<usize>, d: Option<usize>, graph: Option<&Path>) -> Result<Report> {
    let need_n = || n.ok_or_else(|| anyhow!("this family needs --n"));
    let (name, drawing) = match family {
        FamilyArg::ConvexKn => ("convex-kn", convex_kn(need_n()?)?),
        FamilyArg::CylKn => ("cyl-kn", cylindrical_kn(need_n()?)?),
        FamilyArg::Regularish => {
            let d = d.ok_or_else(|| anyhow!("regularish needs --d"))?;
            let graph = random_regularish(need_n()?, d, g.seed)?;
            ("regularish", random_geometric_drawing(&graph, g.seed)?)
        }
        FamilyArg::Geometric => {
            let path = graph.ok_or_else(|| anyhow!("geometric needs --graph <edge list>"))?;
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let parsed = Graph::from_edge_list(&text).with_context(|| format!("parsing {}", path.display()))?;
            ("geometric", random_geometric_drawing(&parsed, g.seed)?)
        }
    };
    Ok(Report {
        command: "gen",
        inputs: json!({ "family": name, "n": n, "d": d, "graph": graph }),
        outputs: json!({
            "drawing": drawing.to_file(),
            "n": drawing.graph().n(),
            "m": drawing.graph().m(),
            "crossings": drawing.total_crossings(),
            "lcr": drawing.local_crossing_number(),
        }),
        seed: Some(g.seed),
        table: None,
        status: Status::Certified,
    })
}
