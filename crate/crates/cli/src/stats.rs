//! Statistics rows and the bench CSV schema.

use std::fmt::Write as _;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use cherry_mwpm::{Instance, Outcome, SolveStats};

pub const HEADER: &str = "instance,n,m,seed,status,weight,time_s,init_s,primal_s,shrink_s,expand_s,refresh_s,dual_s,\
finish_s,init_frac,shrink_frac,expand_frac,supernodes,expands,augments,grow_outs,grow_ins,dual_updates,lp_updates,\
lp_fallbacks,max_node_depth,certificate";

#[derive(Debug, Clone)]
pub struct Row {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub seed: Option<u64>,
    pub status: &'static str,
    pub weight: Option<i64>,
    /// `ok`, `FAIL` or `-` when not checked.
    pub certificate: &'static str,
    pub stats: SolveStats,
}

pub fn status(outcome: &Outcome) -> &'static str {
    match outcome {
        Outcome::Matched(_) => "solved",
        Outcome::Infeasible(_) => "infeasible",
        Outcome::TimedOut(_) => "timeout",
    }
}

fn fraction(part: std::time::Duration, total: std::time::Duration) -> f64 {
    if total.is_zero() {
        0.0
    } else {
        (part.as_secs_f64() / total.as_secs_f64()).min(1.0)
    }
}

pub fn to_csv(rows: &[Row], header: bool) -> String {
    let mut out = String::new();
    if header {
        out.push_str(HEADER);
        out.push('\n');
    }
    for r in rows {
        let s = &r.stats;
        let secs = |d: std::time::Duration| format!("{:.6}", d.as_secs_f64());
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.4},{:.4},{:.4},{},{},{},{},{},{},{},{},{},{}",
            r.instance.replace(',', "_"),
            r.n,
            r.m,
            opt(r.seed.map(|x| x.to_string())),
            r.status,
            opt(r.weight.map(|x| x.to_string())),
            secs(s.total_time),
            secs(s.init_time),
            secs(s.primal_time),
            secs(s.shrink_time),
            secs(s.expand_time),
            secs(s.refresh_time),
            secs(s.dual_time),
            secs(s.finish_time),
            fraction(s.init_time, s.total_time),
            fraction(s.shrink_time, s.total_time),
            fraction(s.expand_time, s.total_time),
            s.shrinks,
            s.expands,
            s.augments,
            s.grow_outs,
            s.grow_ins,
            s.dual_updates,
            s.lp_updates,
            s.lp_fallbacks,
            s.max_node_depth,
            r.certificate,
        );
    }
    out
}

/// Appends rows, writing the header first when the file is new or empty.
pub fn append(path: &Path, rows: &[Row]) -> anyhow::Result<()> {
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let fresh = file.metadata()?.len() == 0;
    file.write_all(to_csv(rows, fresh).as_bytes())?;
    Ok(())
}

pub fn summary(inst: &Instance, status: &str, weight: Option<i64>, s: &SolveStats) -> String {
    let weight = weight.map_or("-".to_string(), |w| w.to_string());
    format!(
        "{status}: n={} m={} weight={weight} time={:.3}s (init {:.1}%, shrink {:.1}%, expand {:.1}%) \
         supernodes={} expands={} augments={} grow-outs={} grow-ins={} dual-updates={} max-depth={}",
        inst.n,
        inst.m(),
        s.total_time.as_secs_f64(),
        100.0 * fraction(s.init_time, s.total_time),
        100.0 * fraction(s.shrink_time, s.total_time),
        100.0 * fraction(s.expand_time, s.total_time),
        s.shrinks,
        s.expands,
        s.augments,
        s.grow_outs,
        s.grow_ins,
        s.dual_updates,
        s.max_node_depth,
    )
}
