//! Command-line front end: solvers, oracles, trace/bench harnesses, and the
//! property-check driver.
//!
//! Exit codes: 0 success, 1 solver error, 2 validation failure, 3 oracle
//! guard violation. All randomness flows through explicit `--seed`/`--seeds`
//! flags; identical invocations produce byte-identical documents.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pcf_core::instance::{
    generate_random, generate_random_connected, generate_random_tree, metric_closure,
    parse_instance, parse_instance_with_root, serialize_forest, serialize_instance, Forest,
    Instance, PathTable, VertexId,
};
use pcf_core::moat::{check_dual_feasibility, growth_trace_json, rootless_grow, Event};
use pcf_core::num::Num;
use pcf_core::oracle::{
    opt_nw_kforest, opt_rpcf, opt_urpcf, opt_urpcf_all, sweep_lower_bound, OracleError,
};
use pcf_core::prune::{build_dp, rootless_prune, solve_urpcf, RootedTree};
use pcf_core::rooted::solve_rpcf;
use pcf_core::sweep::{
    parse_plan, plan_sweep_cover, serialize_plan, verify_plan, Deployment, SweepError,
    SweepInstance, SweepPlan,
};

const EXIT_SOLVER: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_GUARD: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn solver(msg: impl ToString) -> Self {
        Failure {
            code: EXIT_SOLVER,
            message: msg.to_string(),
        }
    }
    fn validation(msg: impl ToString) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: msg.to_string(),
        }
    }
    fn guard(msg: impl ToString) -> Self {
        Failure {
            code: EXIT_GUARD,
            message: msg.to_string(),
        }
    }
    fn from_oracle(err: OracleError) -> Self {
        match err {
            OracleError::GuardExceeded(_) => Failure::guard(err),
            _ => Failure::solver(err),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "pcf",
    about = "Prize-collecting forest solvers and sweep-cover planning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SweepParams {
    /// Sensor speed (exact decimal).
    #[arg(long)]
    speed: String,
    /// Sweep period (exact decimal).
    #[arg(long)]
    period: String,
    /// Cost of one sensor (exact decimal).
    #[arg(long)]
    cost: String,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random instance document.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        wmax: u64,
        #[arg(long, default_value_t = 20)]
        pmax: u64,
    },
    /// Solve the unrooted K-component problem (factor-2 guarantee).
    SolveUrpcf {
        #[arg(short = 'K')]
        k: usize,
        instance: String,
        #[arg(long)]
        float: bool,
    },
    /// Solve the rooted problem for the given roots.
    SolveRpcf {
        /// Comma-separated vertex labels, e.g. `--roots 0,3,7`.
        #[arg(long)]
        roots: String,
        instance: String,
        #[arg(long)]
        float: bool,
    },
    /// NW-maximum k-forest of a standalone tree document (instance schema
    /// plus a "root" field).
    PruneTree {
        #[arg(short)]
        k: usize,
        tree: String,
        #[arg(long)]
        float: bool,
    },
    /// Plan a sweep cover (factor-5 guarantee). Non-metric inputs are closed
    /// first; patrol cycles are then also reported as walks in the original
    /// graph.
    SweepCover {
        #[command(flatten)]
        params: SweepParams,
        instance: String,
    },
    /// Re-verify a plan document against an instance.
    VerifyPlan {
        #[command(flatten)]
        params: SweepParams,
        #[arg(long)]
        plan: String,
        instance: String,
    },
    /// Exhaustive exact optima for small instances.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Emit the growth event log and dual family for an instance.
    Trace { instance: String },
    /// Time the unrooted solver on a seeded random instance.
    Bench {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        m: usize,
        #[arg(short = 'K')]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        wmax: u64,
        #[arg(long, default_value_t = 1000)]
        pmax: u64,
    },
    /// Run a property suite (dual | lmp | dp | sweep) on an instance or on
    /// seeded random inputs.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seeds: Option<u64>,
        instance: Option<String>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    Urpcf {
        #[arg(short = 'K')]
        k: usize,
        instance: String,
    },
    Rpcf {
        #[arg(long)]
        roots: String,
        instance: String,
    },
    Nwkf {
        #[arg(short)]
        k: usize,
        tree: String,
    },
    SweepLb {
        #[command(flatten)]
        params: SweepParams,
        instance: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_instance(path: &str) -> Result<Instance, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::validation(format!("{path}: {e}")))?;
    parse_instance(&text).map_err(Failure::validation)
}

fn read_tree(path: &str) -> Result<(Instance, RootedTree), Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::validation(format!("{path}: {e}")))?;
    let (inst, root) = parse_instance_with_root(&text).map_err(Failure::validation)?;
    let root = root.ok_or_else(|| Failure::validation("tree document needs a \"root\" field"))?;
    let edges: Vec<(VertexId, VertexId)> = inst.edges().iter().map(|e| (e.u, e.v)).collect();
    let tree = RootedTree::from_instance_tree(&inst, &edges, root).map_err(Failure::solver)?;
    Ok((inst, tree))
}

fn parse_roots(instance: &Instance, spec: &str) -> Result<BTreeSet<VertexId>, Failure> {
    let mut roots = BTreeSet::new();
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        let label: i64 = part
            .trim()
            .parse()
            .map_err(|_| Failure::validation(format!("bad root label {part:?}")))?;
        let id = instance
            .id_of_label(label)
            .ok_or_else(|| Failure::solver(format!("root {label} is not an instance vertex")))?;
        roots.insert(id);
    }
    Ok(roots)
}

fn parse_num(text: &str, what: &str) -> Result<Num, Failure> {
    Num::parse(text).map_err(|e| Failure::validation(format!("{what}: {e}")))
}

fn sweep_params(params: &SweepParams) -> Result<(Num, Num, Num), Failure> {
    Ok((
        parse_num(&params.speed, "--speed")?,
        parse_num(&params.period, "--period")?,
        parse_num(&params.cost, "--cost")?,
    ))
}

/// Forest document, optionally with the exact value replaced by a float
/// approximation.
fn emit_forest(instance: &Instance, forest: &Forest, value: &Num, float: bool) -> String {
    let doc = serialize_forest(instance, forest, value);
    if !float {
        return doc;
    }
    let mut v: Value = serde_json::from_str(&doc).expect("own document");
    v["value"] = json!(value.to_f64());
    serde_json::to_string_pretty(&v).expect("rewrap")
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen {
            seed,
            n,
            m,
            wmax,
            pmax,
        } => {
            let inst = generate_random(seed, n, m, wmax, pmax).map_err(Failure::validation)?;
            println!("{}", serialize_instance(&inst));
            Ok(())
        }
        Command::SolveUrpcf { k, instance, float } => {
            let inst = read_instance(&instance)?;
            let sol = solve_urpcf(&inst, k).map_err(Failure::solver)?;
            println!("{}", emit_forest(&inst, &sol.forest, &sol.value, float));
            Ok(())
        }
        Command::SolveRpcf {
            roots,
            instance,
            float,
        } => {
            let inst = read_instance(&instance)?;
            let roots = parse_roots(&inst, &roots)?;
            let sol = solve_rpcf(&inst, &roots).map_err(Failure::solver)?;
            println!("{}", emit_forest(&inst, &sol.forest, &sol.value, float));
            Ok(())
        }
        Command::PruneTree { k, tree, float } => {
            let (inst, tree) = read_tree(&tree)?;
            let res = rootless_prune(&tree, k).map_err(Failure::solver)?;
            println!("{}", emit_forest(&inst, &res.forest, &res.value, float));
            Ok(())
        }
        Command::SweepCover { params, instance } => {
            let inst = read_instance(&instance)?;
            let (speed, period, cost) = sweep_params(&params)?;
            let (si, paths) = metric_view(inst, speed, period, cost)?;
            let plan = plan_sweep_cover(&si).map_err(Failure::solver)?;
            println!("{}", emit_plan(&plan, paths.as_ref(), &si)?);
            Ok(())
        }
        Command::VerifyPlan {
            params,
            plan,
            instance,
        } => {
            let inst = read_instance(&instance)?;
            let original = inst.clone();
            let (speed, period, cost) = sweep_params(&params)?;
            let plan_text = std::fs::read_to_string(&plan)
                .map_err(|e| Failure::validation(format!("{plan}: {e}")))?;
            let parsed = parse_plan(&plan_text).map_err(Failure::validation)?;
            let (si, _) = metric_view(inst, speed, period, cost)?;
            let report = verify_plan(&si, &parsed).map_err(Failure::validation)?;
            for line in verify_walks(&original, &plan_text)? {
                println!("{line}");
            }
            if report.pass {
                println!("plan: pass (objective {})", report.recomputed_objective);
                Ok(())
            } else {
                println!(
                    "plan: FAIL ({})",
                    report.first_violation.unwrap_or_default()
                );
                Err(Failure::validation("plan verification failed"))
            }
        }
        Command::Oracle { which } => run_oracle(which),
        Command::Trace { instance } => {
            let inst = read_instance(&instance)?;
            let growth = rootless_grow(&inst).map_err(Failure::solver)?;
            println!("{}", growth_trace_json(&inst, &growth));
            Ok(())
        }
        Command::Bench {
            seed,
            n,
            m,
            k,
            wmax,
            pmax,
        } => {
            let inst = generate_random(seed, n, m, wmax, pmax).map_err(Failure::validation)?;
            let start = Instant::now();
            let growth = rootless_grow(&inst).map_err(Failure::solver)?;
            let growth_ms = start.elapsed().as_millis();
            let edges_added = growth
                .events()
                .iter()
                .filter(|e| matches!(e, Event::EdgeAdded { .. }))
                .count();
            let deactivations = growth.events().len() - edges_added;
            let sol = solve_urpcf(&inst, k).map_err(Failure::solver)?;
            let total_ms = start.elapsed().as_millis();
            let doc = json!({
                "n": n,
                "m": m,
                "k": k,
                "seed": seed,
                "growth_ms": growth_ms,
                "total_ms": total_ms,
                "events": growth.events().len(),
                "edges_added": edges_added,
                "deactivations": deactivations,
                "value": sol.value.to_decimal_string(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("bench doc"));
            Ok(())
        }
        Command::Check {
            suite,
            seeds,
            instance,
        } => run_check(&suite, seeds, instance.as_deref()),
    }
}

fn run_oracle(which: OracleCommand) -> Result<(), Failure> {
    match which {
        OracleCommand::Urpcf { k, instance } => {
            let inst = read_instance(&instance)?;
            let res = opt_urpcf(&inst, k).map_err(Failure::from_oracle)?;
            emit_oracle(&inst, &res.value, &res.witness);
            Ok(())
        }
        OracleCommand::Rpcf { roots, instance } => {
            let inst = read_instance(&instance)?;
            let roots = parse_roots(&inst, &roots)?;
            let res = opt_rpcf(&inst, &roots).map_err(Failure::from_oracle)?;
            emit_oracle(&inst, &res.value, &res.witness);
            Ok(())
        }
        OracleCommand::Nwkf { k, tree } => {
            let (inst, tree) = read_tree(&tree)?;
            let res = opt_nw_kforest(&tree, k).map_err(Failure::from_oracle)?;
            emit_oracle(&inst, &res.value, &res.witness);
            Ok(())
        }
        OracleCommand::SweepLb { params, instance } => {
            let inst = read_instance(&instance)?;
            let (speed, period, cost) = sweep_params(&params)?;
            let si = SweepInstance::new(inst, speed, period, cost).map_err(Failure::validation)?;
            let lb = sweep_lower_bound(&si).map_err(Failure::from_oracle)?;
            let doc = json!({
                "value": lb.value.to_decimal_string(),
                "sensors": lb.sensors,
                "covered": lb.covered.iter().map(|&v| si.instance.label(v)).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("lb doc"));
            Ok(())
        }
    }
}

fn emit_oracle(instance: &Instance, value: &Num, witness: &Forest) {
    let witness_doc: Value =
        serde_json::from_str(&serialize_forest(instance, witness, value)).expect("own document");
    let doc = json!({
        "value": value.to_decimal_string(),
        "witness": witness_doc,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&doc).expect("oracle doc")
    );
}

/// Builds a metric view of the instance: directly if it is already complete
/// and metric, otherwise through the metric closure (keeping witness paths
/// so cycles can be expanded back to original-graph walks).
fn metric_view(
    instance: Instance,
    speed: Num,
    period: Num,
    cost: Num,
) -> Result<(SweepInstance, Option<PathTable>), Failure> {
    match SweepInstance::new(
        instance.clone(),
        speed.clone(),
        period.clone(),
        cost.clone(),
    ) {
        Ok(si) => Ok((si, None)),
        Err(SweepError::NotComplete { .. }) | Err(SweepError::NotMetric { .. }) => {
            let (closed, paths) = metric_closure(&instance).map_err(Failure::validation)?;
            let si =
                SweepInstance::new(closed, speed, period, cost).map_err(Failure::validation)?;
            Ok((si, Some(paths)))
        }
        Err(e) => Err(Failure::validation(e)),
    }
}

/// Plan document; when the planner ran on a closure, every patrol also gets
/// a `walk` field: the cycle expanded to a closed walk in the original graph
/// via the closure's witness paths.
fn emit_plan(
    plan: &SweepPlan,
    paths: Option<&PathTable>,
    si: &SweepInstance,
) -> Result<String, Failure> {
    let doc = serialize_plan(plan);
    let Some(paths) = paths else { return Ok(doc) };
    let mut v: Value = serde_json::from_str(&doc).expect("own document");
    let groups = v["groups"].as_array_mut().expect("plan has groups");
    for group in groups {
        if group["kind"] != "patrol" {
            continue;
        }
        let cycle: Vec<i64> = group["cycle"]
            .as_array()
            .expect("patrol has a cycle")
            .iter()
            .map(|x| x.as_i64().expect("labels"))
            .collect();
        let ids: Vec<VertexId> = cycle
            .iter()
            .map(|&l| si.instance.id_of_label(l).expect("own plan"))
            .collect();
        let mut walk: Vec<i64> = Vec::new();
        for i in 0..ids.len() {
            let leg = paths
                .path(ids[i], ids[(i + 1) % ids.len()])
                .expect("closure connects all pairs");
            for &v in &leg[..leg.len() - 1] {
                walk.push(si.instance.label(v));
            }
        }
        group["walk"] = json!(walk);
    }
    Ok(serde_json::to_string_pretty(&v).expect("rewrap"))
}

/// Checks the optional `walk` fields of a plan document against the original
/// instance: each walk must be a closed walk over instance edges whose total
/// weight equals the patrol length and whose vertex set equals the cycle's.
fn verify_walks(original: &Instance, plan_text: &str) -> Result<Vec<String>, Failure> {
    let v: Value =
        serde_json::from_str(plan_text).map_err(|e| Failure::validation(format!("plan: {e}")))?;
    let mut out = Vec::new();
    let Some(groups) = v["groups"].as_array() else {
        return Ok(out);
    };
    for (i, group) in groups.iter().enumerate() {
        let Some(walk) = group.get("walk").and_then(|w| w.as_array()) else {
            continue;
        };
        let labels: Vec<i64> = walk.iter().filter_map(|x| x.as_i64()).collect();
        let ids: Result<Vec<VertexId>, Failure> = labels
            .iter()
            .map(|&l| {
                original
                    .id_of_label(l)
                    .ok_or_else(|| Failure::validation(format!("walk names unknown vertex {l}")))
            })
            .collect();
        let ids = ids?;
        let mut total = Num::zero();
        for j in 0..ids.len() {
            let (a, b) = (ids[j], ids[(j + 1) % ids.len()]);
            let e = original.edge_between(a, b).ok_or_else(|| {
                Failure::validation(format!("walk step ({a},{b}) is not an instance edge"))
            })?;
            total += original.weight(e);
        }
        let stated = group["length"].as_str().and_then(|s| Num::parse(s).ok());
        let cycle_set: BTreeSet<i64> = group["cycle"]
            .as_array()
            .map(|c| c.iter().filter_map(|x| x.as_i64()).collect())
            .unwrap_or_default();
        let walk_set: BTreeSet<i64> = labels.iter().copied().collect();
        if stated.as_ref() == Some(&total) && cycle_set == walk_set {
            out.push(format!(
                "walk {i}: pass (length {})",
                total.to_decimal_string()
            ));
        } else {
            return Err(Failure::validation(format!(
                "walk {i}: weight {} or vertex set disagrees with the stated cycle",
                total.to_decimal_string()
            )));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// check suites
// ---------------------------------------------------------------------------

fn thread_budget() -> usize {
    std::env::var("PCF_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .map(|t| t.max(1))
        .unwrap_or(1)
}

/// Runs `job` over `0..seeds`, on a bounded rayon pool when PCF_THREADS asks
/// for one, and returns results in seed order either way.
fn over_seeds<F>(seeds: u64, job: F) -> Vec<Result<String, String>>
where
    F: Fn(u64) -> Result<String, String> + Sync,
{
    let threads = thread_budget();
    if threads <= 1 {
        (0..seeds).map(job).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        use rayon::prelude::*;
        pool.install(|| (0..seeds).into_par_iter().map(&job).collect())
    }
}

fn report_suite(name: &str, results: Vec<Result<String, String>>) -> Result<(), Failure> {
    let mut failures = 0usize;
    for (seed, res) in results.iter().enumerate() {
        match res {
            Ok(note) => println!("{name} seed {seed}: pass{note}"),
            Err(why) => {
                failures += 1;
                println!("{name} seed {seed}: FAIL ({why})");
            }
        }
    }
    if failures == 0 {
        println!("{name}: all pass");
        Ok(())
    } else {
        Err(Failure::validation(format!("{failures} {name} failures")))
    }
}

fn run_check(suite: &str, seeds: Option<u64>, instance: Option<&str>) -> Result<(), Failure> {
    match suite {
        "dual" => {
            if let Some(path) = instance {
                let inst = read_instance(path)?;
                let growth = rootless_grow(&inst).map_err(Failure::solver)?;
                let report = check_dual_feasibility(&inst, &growth).map_err(Failure::solver)?;
                if report.pass {
                    println!(
                        "dual: pass ({} edges, {} sets)",
                        report.edges_checked, report.sets_checked
                    );
                    Ok(())
                } else {
                    println!(
                        "dual: FAIL ({})",
                        report.first_violation.unwrap_or_default()
                    );
                    Err(Failure::validation("dual audit failed"))
                }
            } else {
                let n = seeds.unwrap_or(25);
                let results = over_seeds(n, |seed| {
                    let inst = generate_random(seed, 9, 16, 20, 20).map_err(|e| e.to_string())?;
                    let growth = rootless_grow(&inst).map_err(|e| e.to_string())?;
                    let report =
                        check_dual_feasibility(&inst, &growth).map_err(|e| e.to_string())?;
                    if report.pass {
                        Ok(String::new())
                    } else {
                        Err(report.first_violation.unwrap_or_default())
                    }
                });
                report_suite("dual", results)
            }
        }
        "lmp" => {
            let n = seeds.unwrap_or(25);
            let two = Num::from_int(2);
            let results = over_seeds(n, |seed| {
                let nv = 3 + (seed % 6) as usize;
                let m = (nv + seed as usize % nv).min(nv * (nv - 1) / 2);
                let inst = generate_random(seed, nv, m, 20, 20).map_err(|e| e.to_string())?;
                let oracle = opt_urpcf_all(&inst).map_err(|e| e.to_string())?;
                for k in 1..=nv {
                    let sol = solve_urpcf(&inst, k).map_err(|e| e.to_string())?;
                    let lmp = pcf_core::instance::lmp_value(&inst, &sol.forest, &two)
                        .map_err(|e| e.to_string())?;
                    let opt = &oracle[k].as_ref().unwrap().value;
                    if lmp > &two * opt {
                        return Err(format!("k={k}: {} > 2·{}", lmp, opt));
                    }
                    let audit =
                        check_dual_feasibility(&inst, &sol.growth).map_err(|e| e.to_string())?;
                    if !audit.pass {
                        return Err(format!(
                            "k={k}: {}",
                            audit.first_violation.unwrap_or_default()
                        ));
                    }
                }
                Ok(format!(" (n={nv}, every K)"))
            });
            report_suite("lmp", results)
        }
        "dp" => {
            let n = seeds.unwrap_or(50);
            let results = over_seeds(n, |seed| {
                let nv = 2 + (seed % 11) as usize;
                let inst = generate_random_tree(seed, nv, 20, 20).map_err(|e| e.to_string())?;
                let edges: Vec<(VertexId, VertexId)> =
                    inst.edges().iter().map(|e| (e.u, e.v)).collect();
                let tree = RootedTree::from_instance_tree(&inst, &edges, seed as usize % nv)
                    .map_err(|e| e.to_string())?;
                let oracle =
                    pcf_core::oracle::opt_nw_kforest_all(&tree).map_err(|e| e.to_string())?;
                let dp = build_dp(&tree, nv);
                for k in 0..=nv {
                    let expected = &oracle[k].as_ref().unwrap().value;
                    let (_, got) = dp.best(k).ok_or_else(|| format!("k={k}: infeasible"))?;
                    if &got != expected {
                        return Err(format!("k={k}: dp {} != oracle {}", got, expected));
                    }
                }
                Ok(format!(" (n={nv}, every k, exact)"))
            });
            report_suite("dp", results)
        }
        "sweep" => {
            let n = seeds.unwrap_or(25);
            let five = Num::from_int(5);
            let results = over_seeds(n, |seed| {
                let nv = 2 + (seed % 6) as usize;
                let raw =
                    generate_random_connected(seed, nv, nv, 12, 9).map_err(|e| e.to_string())?;
                let (closed, _) = metric_closure(&raw).map_err(|e| e.to_string())?;
                let mut rng = pcf_core::instance::SplitMix64::new(seed ^ 0x5eed);
                let si = SweepInstance::new(
                    closed,
                    Num::from_u64(1 + rng.next_below(3)),
                    Num::from_u64(1 + rng.next_below(3)),
                    Num::from_u64(1 + rng.next_below(11)),
                )
                .map_err(|e| e.to_string())?;
                let plan = plan_sweep_cover(&si).map_err(|e| e.to_string())?;
                let report = verify_plan(&si, &plan).map_err(|e| e.to_string())?;
                if !report.pass {
                    return Err(report.first_violation.unwrap_or_default());
                }
                let lb = sweep_lower_bound(&si).map_err(|e| e.to_string())?;
                let sensors: usize = plan
                    .groups
                    .iter()
                    .map(|g| match g {
                        Deployment::Stationed { .. } => 1,
                        Deployment::Patrol { sensors, .. } => *sensors,
                    })
                    .sum();
                let uncovered: Num = plan
                    .uncovered
                    .iter()
                    .map(|&l| {
                        si.instance
                            .penalty(si.instance.id_of_label(l).unwrap())
                            .clone()
                    })
                    .sum();
                let lhs =
                    &(&si.sensor_cost * &Num::from_u64(sensors as u64)) + &(&five * &uncovered);
                if lhs > &five * &lb.value {
                    return Err(format!("{} > 5·{}", lhs, lb.value));
                }
                Ok(format!(" (n={nv})"))
            });
            report_suite("sweep", results)
        }
        other => Err(Failure::validation(format!(
            "unknown suite {other:?} (expected dual, lmp, dp, or sweep)"
        ))),
    }
}
