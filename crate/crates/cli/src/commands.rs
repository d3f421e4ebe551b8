//! One function per verb. Each writes stream rows and a summary through the
//! [`Emitter`] and returns the process exit status.

use std::cmp::Ordering;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use indep::goodstein::{self, Certificate, GoodsteinError, GoodsteinIter};
use indep::hardy::{self, HardyError, Outcome};
use indep::ramsey::{self, ArrowOutcome, Coloring, RamseyError, RegressiveFn, WitnessOutcome};
use indep::trees::{self, FiniteTree, Indicator, TreeError, TreeOnSet};
use indep::worm::{self, WormStatus};
use indep::{Nat, Ordinal, OrdinalError};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{Emitter, Format, Verdict};
use crate::{Cli, Command, FktCmd, HardyCmd, OrdinalCmd, SetArgs, TreesCmd, WormCmd};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_BUDGET: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

enum Failure {
    Usage(String),
    Compute(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(msg.to_string())
}

impl From<OrdinalError> for Failure {
    fn from(e: OrdinalError) -> Self {
        match e {
            OrdinalError::ValueTooLarge => Failure::Compute(e.to_string()),
            other => usage(other),
        }
    }
}

impl From<HardyError> for Failure {
    fn from(e: HardyError) -> Self {
        match e {
            HardyError::ZeroFuel => usage("--fuel must be at least 1"),
            other => Failure::Compute(other.to_string()),
        }
    }
}

impl From<GoodsteinError> for Failure {
    fn from(e: GoodsteinError) -> Self {
        match e {
            GoodsteinError::InvalidBase(_)
            | GoodsteinError::DecreasingBase { .. }
            | GoodsteinError::InvalidBaseFunction(_) => usage(format!("--f: {e}")),
            other => Failure::Compute(other.to_string()),
        }
    }
}

type Res = Result<u8, Failure>;

pub fn dispatch<W: Write>(cli: &Cli, em: &mut Emitter<W>) -> u8 {
    if em.format() == Format::Csv && !emits_rows(cli) {
        eprintln!(
            "error: --format csv is only available for `hardy table`, `goodstein`, \
             `trees otter` and runs with --trace"
        );
        return EXIT_USAGE;
    }
    match run(cli, em) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            EXIT_FAILURE
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn emits_rows(cli: &Cli) -> bool {
    match &cli.command {
        Command::Hardy(h) => h.table.is_some() || cli.global.trace,
        Command::Goodstein(_) => true,
        Command::Worm(_) => cli.global.trace,
        Command::Trees(TreesCmd::Otter { .. }) => true,
        _ => false,
    }
}

fn run<W: Write>(cli: &Cli, em: &mut Emitter<W>) -> Res {
    let g = &cli.global;
    match &cli.command {
        Command::Ordinal(op) => ordinal(op, em),
        Command::Hardy(h) => match &h.table {
            Some(HardyCmd::Table {
                ordinals,
                n_max,
                output,
            }) => hardy_table(&ordinals.0, *n_max, g.fuel, output.as_deref(), em),
            None => {
                let ordinal = h.ordinal.as_ref().ok_or_else(|| usage("missing --ordinal"))?;
                let n = h.n.as_ref().ok_or_else(|| usage("missing --n"))?;
                hardy_eval(ordinal, n, g.fuel, g.trace, em)
            }
        },
        Command::Goodstein(a) => goodstein_run(&a.m, &a.f, a.max_steps, em),
        Command::PhArrow { a1, a2, b, c, d } => {
            let params = json!({"a1": a1, "a2": a2, "b": b, "c": c, "d": d});
            let out = ramsey::ph_arrow(*a1, *a2, *b, *c, *d, g.budget);
            arrow_report("Paris-Harrington arrow", params, out, coloring_entries, em)
        }
        Command::PhWitness { a1, b, c, d } => {
            let params = json!({"a1": a1, "b": b, "c": c, "d": d});
            let out = ramsey::ph_witness(*a1, *b, *c, *d, g.budget);
            witness_report("least a2 with [a1,a2] ->* (b)^c_d", params, out, em)
        }
        Command::Sigma { n } => {
            let out = ramsey::sigma(*n, g.budget);
            witness_report("sigma(n): least m with [0,m] ->* (n+1)^n_n", json!({"n": n}), out, em)
        }
        Command::PhIndicator { x, y } => {
            let out = ramsey::ph_indicator(*x, *y, g.budget).map(|o| WitnessOutcome {
                witness: o.value,
                explored: o.explored,
            });
            witness_report(
                "Y(x,y): largest z with [x,y] ->* (z+1)^z_z",
                json!({"x": x, "y": y}),
                out,
                em,
            )
        }
        Command::IndG { x, n } => {
            let out = ramsey::indicator_g(*x, *n, g.budget);
            witness_report("g_n(x): least y with Y(x,y) > n", json!({"x": x, "n": n}), out, em)
        }
        Command::KmArrow { a, b, k, n } => {
            let params = json!({"a": a, "b": b, "k": k, "n": n});
            let out = ramsey::km_arrow(*a, *b, *k, *n, g.budget);
            arrow_report("Kanamori-McAloon arrow", params, out, regressive_entries, em)
        }
        Command::KmWitness { a, k, n } => {
            let params = json!({"a": a, "k": k, "n": n});
            let out = ramsey::km_witness(*a, *k, *n, g.budget);
            witness_report("least b with [a,b] ->* (k)^n", params, out, em)
        }
        Command::Worm(WormCmd::Run {
            worm,
            trace_max_len,
        }) => worm_run(worm, g.fuel, g.trace, *trace_max_len, em),
        Command::Trees(op) => trees_cmd(op, em),
        Command::Fkt(op) => fkt(op, g.budget, em),
        Command::Regal(a) => set_cmd(a, true, g.budget, em),
        Command::Kiralic(a) => set_cmd(a, false, g.budget, em),
    }
}

fn ordinal<W: Write>(op: &OrdinalCmd, em: &mut Emitter<W>) -> Res {
    const DEF: &str = "Cantor normal form up to epsilon_0";
    let summary = match op {
        OrdinalCmd::Cmp { a, b } => {
            let order = match a.cmp(b) {
                Ordering::Less => "lt",
                Ordering::Equal => "eq",
                Ordering::Greater => "gt",
            };
            json!({"definition": DEF, "a": a.to_string(), "b": b.to_string(), "order": order})
        }
        OrdinalCmd::Fund { ordinal, n } => json!({
            "definition": "fundamental sequence",
            "ordinal": ordinal.to_string(),
            "n": n,
            "result": ordinal.fundamental(*n).to_string(),
        }),
        OrdinalCmd::ToInt { ordinal, base } => json!({
            "definition": "omega replaced by the base",
            "ordinal": ordinal.to_string(),
            "base": base,
            "value": ordinal.to_integer(*base)?.to_string(),
        }),
        OrdinalCmd::FromInt { value, base } => json!({
            "definition": "hereditary base representation with omega for the base",
            "value": value.to_string(),
            "base": base,
            "ordinal": Ordinal::from_integer(value, *base)?.to_string(),
        }),
    };
    em.summary(&summary)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct HardyRow {
    step: u64,
    ordinal: String,
    n: String,
}

fn hardy_eval<W: Write>(ordinal: &Ordinal, n: &Nat, fuel: u64, trace: bool, em: &mut Emitter<W>) -> Res {
    if trace {
        for (i, s) in hardy::hardy_trace(ordinal, n, fuel)?.iter().enumerate() {
            em.row(&HardyRow {
                step: i as u64 + 1,
                ordinal: s.ordinal.to_string(),
                n: s.n.to_string(),
            })?;
        }
    }
    let r = hardy::hardy_eval(ordinal, n, fuel)?;
    let (status, value) = match &r.outcome {
        Outcome::Value(v) => ("value", Some(v.to_string())),
        Outcome::FuelExhausted => ("fuel-exhausted", None),
    };
    em.summary(&json!({
        "definition": "Hardy hierarchy",
        "ordinal": ordinal.to_string(),
        "n": n.to_string(),
        "fuel": fuel,
        "status": status,
        "value": value,
        "steps": r.steps_used,
    }))?;
    Ok(EXIT_OK)
}

fn hardy_table<W: Write>(
    ordinals: &[Ordinal],
    n_max: u64,
    fuel: u64,
    output: Option<&std::path::Path>,
    em: &mut Emitter<W>,
) -> Res {
    let cells = hardy::growth_table(ordinals, n_max, fuel)?;
    if let Some(path) = output {
        let fail = |e: io::Error| Failure::Compute(format!("{}: {e}", path.display()));
        let mut f = BufWriter::new(File::create(path).map_err(fail)?);
        hardy::write_growth_csv(&cells, &mut f).map_err(fail)?;
        f.flush().map_err(fail)?;
        em.summary(&json!({
            "definition": "Hardy growth table",
            "path": path.display().to_string(),
            "rows": cells.len(),
        }))?;
    } else if em.format() == Format::Json {
        for c in &cells {
            let (value, status) = match &c.result.outcome {
                Outcome::Value(v) => (Some(v.to_string()), "value"),
                Outcome::FuelExhausted => (None, "fuel-exhausted"),
            };
            em.row(&json!({
                "ordinal": c.ordinal.to_string(),
                "n": c.n,
                "value": value,
                "steps": c.result.steps_used,
                "status": status,
            }))?;
        }
    } else {
        hardy::write_growth_csv(&cells, em.raw())?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct GoodsteinRowOut {
    i: u64,
    base: u64,
    value: Option<String>,
    ordinal: String,
}

fn goodstein_run<W: Write>(m: &Nat, f: &goodstein::BaseFunction, max_steps: u64, em: &mut Emitter<W>) -> Res {
    let mut prev: Option<goodstein::GoodsteinRow> = None;
    let mut certificate = Certificate::Pass;
    let mut last_i = 0;
    let mut terminated = None;
    let limit = max_steps.saturating_add(1) as usize;
    for row in GoodsteinIter::new(m, f)?.take(limit) {
        let row = row?;
        em.row(&GoodsteinRowOut {
            i: row.i,
            base: row.base(),
            value: row.value().ok().map(|v| v.to_string()),
            ordinal: row.ordinal.to_string(),
        })?;
        if let Some(p) = prev.take() {
            if certificate == Certificate::Pass {
                if let Certificate::Fail { .. } = goodstein::descent_certificate(&[p, row.clone()]) {
                    certificate = Certificate::Fail {
                        index: row.i as usize - 1,
                    };
                }
            }
        }
        last_i = row.i;
        if row.is_zero() {
            terminated = Some(row.i);
        }
        prev = Some(row);
    }
    let (cert, fail_at) = match certificate {
        Certificate::Pass => ("pass", None),
        Certificate::Fail { index } => ("fail", Some(index)),
    };
    em.summary(&json!({
        "definition": "Goodstein sequence",
        "m": m.to_string(),
        "f": f.to_string(),
        "max_steps": max_steps,
        "status": if terminated.is_some() { "terminated" } else { "truncated" },
        "termination_length": terminated,
        "steps": last_i,
        "certificate": cert,
        "certificate_failure": fail_at,
    }))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ColorEntry {
    subset: Vec<u64>,
    color: u32,
}

#[derive(Serialize)]
struct ValueEntry {
    subset: Vec<u64>,
    value: u64,
}

fn coloring_entries(f: &Coloring) -> Value {
    let entries: Vec<ColorEntry> = f.entries().map(|(subset, color)| ColorEntry { subset, color }).collect();
    serde_json::to_value(entries).expect("plain data")
}

fn regressive_entries(f: &RegressiveFn) -> Value {
    let entries: Vec<ValueEntry> = f.entries().map(|(subset, value)| ValueEntry { subset, value }).collect();
    serde_json::to_value(entries).expect("plain data")
}

#[derive(Serialize)]
struct RamseyReport {
    definition: &'static str,
    params: Value,
    verdict: Verdict,
    witness: Option<u64>,
    counterexample: Option<Value>,
    explored: u64,
}

fn budget_report<W: Write>(
    definition: &'static str,
    params: Value,
    explored: u64,
    em: &mut Emitter<W>,
) -> Res {
    em.summary(&RamseyReport {
        definition,
        params,
        verdict: Verdict::BudgetExceeded,
        witness: None,
        counterexample: None,
        explored,
    })?;
    Ok(EXIT_BUDGET)
}

fn arrow_report<W: Write, F>(
    definition: &'static str,
    params: Value,
    out: Result<ArrowOutcome<F>, RamseyError>,
    entries: fn(&F) -> Value,
    em: &mut Emitter<W>,
) -> Res {
    match out {
        Ok(o) => {
            em.summary(&RamseyReport {
                definition,
                params,
                verdict: o.holds.into(),
                witness: None,
                counterexample: o.counterexample.as_ref().map(entries),
                explored: o.explored,
            })?;
            Ok(EXIT_OK)
        }
        Err(RamseyError::BudgetExceeded { explored, .. }) => budget_report(definition, params, explored, em),
        Err(e) => Err(usage(e)),
    }
}

fn witness_report<W: Write>(
    definition: &'static str,
    params: Value,
    out: Result<WitnessOutcome, RamseyError>,
    em: &mut Emitter<W>,
) -> Res {
    match out {
        Ok(o) => {
            em.summary(&RamseyReport {
                definition,
                params,
                verdict: Verdict::True,
                witness: Some(o.witness),
                counterexample: None,
                explored: o.explored,
            })?;
            Ok(EXIT_OK)
        }
        Err(RamseyError::BudgetExceeded { explored, .. }) => budget_report(definition, params, explored, em),
        Err(e) => Err(usage(e)),
    }
}

#[derive(Serialize)]
struct WormRow {
    n: u64,
    length: usize,
    worm: Option<Vec<u64>>,
}

fn worm_run<W: Write>(
    w: &worm::Worm,
    fuel: u64,
    trace: bool,
    trace_max_len: usize,
    em: &mut Emitter<W>,
) -> Res {
    let mut io_err = None;
    let run = worm::worm_run_with(w, fuel, |n, cur| {
        if !trace || io_err.is_some() {
            return;
        }
        let row = WormRow {
            n,
            length: cur.len(),
            worm: (cur.len() <= trace_max_len).then(|| cur.entries().to_vec()),
        };
        if let Err(e) = em.row(&row) {
            io_err = Some(e);
        }
    })
    .map_err(usage)?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    let status = match run.status {
        WormStatus::Terminated(_) => "terminated",
        WormStatus::Truncated => "truncated",
        WormStatus::TooLong => "too-long",
    };
    em.summary(&json!({
        "definition": "worm game",
        "worm": w.to_string(),
        "fuel": fuel,
        "status": status,
        "termination_step": run.termination_step(),
        "steps": run.steps,
        "max_length": run.max_length,
        "final_length": run.final_length,
    }))?;
    Ok(EXIT_OK)
}

fn tree_failure(e: TreeError) -> Failure {
    usage(e)
}

fn trees_cmd<W: Write>(op: &TreesCmd, em: &mut Emitter<W>) -> Res {
    match op {
        TreesCmd::Count { size, list } => {
            let count = trees::count_trees(*size).map_err(tree_failure)?;
            let listed = if *list {
                let all = trees::enumerate_trees(*size).map_err(tree_failure)?;
                Some(all.iter().map(FiniteTree::to_string).collect::<Vec<_>>())
            } else {
                None
            };
            let mut summary = json!({
                "definition": "rooted unordered trees by size",
                "size": size,
                "count": count.to_string(),
            });
            if let Some(l) = listed {
                summary["trees"] = json!(l);
            }
            em.summary(&summary)?;
        }
        TreesCmd::Otter { max_i } => {
            let est = trees::estimate_otter(*max_i).map_err(tree_failure)?;
            for r in &est.history {
                em.row(&json!({"i": r.i, "ratio": r.ratio, "corrected": r.corrected}))?;
            }
            em.summary(&json!({
                "definition": "Otter constant by the corrected ratio test",
                "max_i": max_i,
                "alpha_hat": est.alpha_hat,
                "threshold_c": est.threshold_c,
            }))?;
        }
        TreesCmd::Embeds { t1, t2 } => {
            em.summary(&json!({
                "definition": "inf-preserving tree embedding",
                "t1": t1.to_string(),
                "t2": t2.to_string(),
                "embeds": trees::inf_embeds(t1, t2),
            }))?;
        }
    }
    Ok(EXIT_OK)
}

fn tree_strings(ts: &[FiniteTree]) -> Vec<String> {
    ts.iter().map(FiniteTree::to_string).collect()
}

fn fkt<W: Write>(op: &FktCmd, budget: u64, em: &mut Emitter<W>) -> Res {
    const DEF: &str = "finite Kruskal bound FKT_f";
    match op {
        FktCmd::Check { k, f, m } => {
            let (verdict, seq, explored, code) = match trees::fkt_check(*k, f, *m, budget) {
                Ok(o) => (o.holds.into(), o.bad_sequence, o.explored, EXIT_OK),
                Err(TreeError::BudgetExceeded { explored, .. }) => (Verdict::BudgetExceeded, None, explored, EXIT_BUDGET),
                Err(e) => return Err(tree_failure(e)),
            };
            em.summary(&json!({
                "definition": DEF,
                "k": k,
                "f": f.to_string(),
                "m": m,
                "verdict": verdict,
                "bad_sequence": seq.as_deref().map(tree_strings),
                "explored": explored,
            }))?;
            Ok(code)
        }
        FktCmd::Explore { k, f, cap } => {
            let b = trees::longest_bad_sequence(*k, f, budget, *cap).map_err(tree_failure)?;
            em.summary(&json!({
                "definition": DEF,
                "k": k,
                "f": f.to_string(),
                "cap": cap,
                "length": b.sequence.len(),
                "sequence": tree_strings(&b.sequence),
                "complete": b.complete,
                "size_capped": b.size_capped,
                "explored": b.explored,
            }))?;
            Ok(EXIT_OK)
        }
    }
}

fn tree_on_set_json(t: &TreeOnSet) -> Value {
    json!({
        "root": t.root(),
        "edges": t.edges().iter().map(|&(c, p)| [c, p]).collect::<Vec<_>>(),
    })
}

fn set_cmd<W: Write>(a: &SetArgs, regal: bool, budget: u64, em: &mut Emitter<W>) -> Res {
    let definition = if regal { "regal sets" } else { "kiralic sets" };
    if let Some(k) = a.k {
        let set: Vec<u64> = match (&a.set, a.a, a.b) {
            (Some(s), _, _) => s.clone(),
            (None, Some(lo), Some(hi)) if lo <= hi => (lo..=hi).collect(),
            (None, Some(_), Some(_)) => return Err(usage("--a must not exceed --b")),
            _ => return Err(usage("give --set or both --a and --b")),
        };
        let check = if regal { trees::is_regal } else { trees::is_kiralic };
        let (verdict, cex, explored, code) = match check(&set, k, budget) {
            Ok(v) => (v.holds.into(), v.counterexample, v.explored, EXIT_OK),
            Err(TreeError::BudgetExceeded { explored, .. }) => (Verdict::BudgetExceeded, None, explored, EXIT_BUDGET),
            Err(e) => return Err(tree_failure(e)),
        };
        em.summary(&json!({
            "definition": definition,
            "set": set,
            "k": k,
            "verdict": verdict,
            "counterexample": cex.as_ref().map(tree_on_set_json),
            "explored": explored,
        }))?;
        return Ok(code);
    }
    let (lo, hi) = (a.a.unwrap_or(0), a.b.unwrap_or(0));
    let ind = if regal { trees::regal_indicator } else { trees::kiralic_indicator };
    let (verdict, value, explored, code) = match ind(lo, hi, budget) {
        Ok(r) => {
            let value = match r.value {
                Indicator::NotEvenZero => json!("not-even-zero"),
                Indicator::Value(k) => json!(k),
            };
            (Verdict::True, value, r.explored, EXIT_OK)
        }
        Err(TreeError::BudgetExceeded { explored, .. }) => (Verdict::BudgetExceeded, Value::Null, explored, EXIT_BUDGET),
        Err(e) => return Err(tree_failure(e)),
    };
    em.summary(&json!({
        "definition": if regal { "Z(a,b): greatest k with [a,b] k-regal" } else { "W(a,b): greatest k with [a,b] k-kiralic" },
        "a": lo,
        "b": hi,
        "verdict": verdict,
        "value": value,
        "explored": explored,
    }))?;
    Ok(code)
}
