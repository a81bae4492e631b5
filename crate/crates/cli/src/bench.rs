//! The bench subcommand: runs generated instances and prints a CSV report
//! with wall time and solver work counters.
//!
//! Suite files hold one generator spec per line, `#` comments allowed:
//!
//! ```text
//! rdtn seed=1 n=5 t1=6 t2=2 t3=2 w=8 k=3
//! hytn seed=2 n=5 arcs=4 others=2 w=4 t2=1 k=2 orient=head
//! scale seed=3 mult=10 index=0
//! gap seed=4 mult=100 index=0
//! ```
//!
//! Columns: `row,spec,verdict,micros,counter` where `counter` is the lift
//! count for rdtn rows and the value-iteration relaxation count for hyper
//! rows. Rows run independently, so `--jobs` may spread them over threads.

use std::path::PathBuf;
use std::time::Instant;

use tempnet::gen;
use tempnet::hytn::{self, Orientation};
use tempnet::model::Verdict;
use tempnet::rdtp;
use tempnet::t2dtp;

struct Row {
    index: usize,
    spec: String,
}

struct Report {
    index: usize,
    spec: String,
    verdict: &'static str,
    micros: u128,
    counter: u64,
}

fn param(words: &[&str], key: &str) -> Option<i64> {
    words.iter().find_map(|w| {
        w.strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .and_then(|v| v.parse().ok())
    })
}

fn run_row(row: &Row) -> anyhow::Result<Report> {
    let words: Vec<&str> = row.spec.split_whitespace().collect();
    let kind = words.first().copied().unwrap_or_default();
    let seed = param(&words, "seed").unwrap_or(1) as u64;
    let start = Instant::now();
    let (verdict, counter) = match kind {
        "rdtn" => {
            let p = gen::RdtnParams {
                n: param(&words, "n").unwrap_or(5) as usize,
                t1_count: param(&words, "t1").unwrap_or(6) as usize,
                t2_count: param(&words, "t2").unwrap_or(2) as usize,
                t3_count: param(&words, "t3").unwrap_or(2) as usize,
                weight_lo: -param(&words, "w").unwrap_or(8),
                weight_hi: param(&words, "w").unwrap_or(8),
                bound_range: param(&words, "w").unwrap_or(8),
                max_intervals: param(&words, "k").unwrap_or(3) as usize,
            };
            let net = gen::random_rdtn(seed, &p);
            if net.c3().is_empty() {
                let (verdict, trace) = t2dtp::solve_t2dtp_traced(&net)?;
                (verdict, trace.steps.len() as u64)
            } else {
                let (verdict, trace) = rdtp::solve_rdtp_traced(&net)?;
                (verdict, trace.contexts.len() as u64)
            }
        }
        "hytn" => {
            let orientation = match param(&words, "orient") {
                _ if words.contains(&"orient=tail") => Orientation::MultiTail,
                _ => Orientation::MultiHead,
            };
            let w = param(&words, "w").unwrap_or(4);
            let p = gen::HytnParams {
                n: param(&words, "n").unwrap_or(5) as usize,
                arc_count: param(&words, "arcs").unwrap_or(4) as usize,
                max_others: param(&words, "others").unwrap_or(2) as usize,
                weight_lo: -w,
                weight_hi: w,
                orientation,
                t2_count: param(&words, "t2").unwrap_or(0) as usize,
                max_intervals: param(&words, "k").unwrap_or(2) as usize,
                bound_range: w,
            };
            let mut net = gen::random_hytn(seed, &p);
            if net.orientation() == Orientation::MultiTail {
                net = hytn::reduce_orientation(&net);
            }
            let (verdict, stats) = hytn::solve_t2hytp_traced(&net)?;
            (verdict, stats.relaxations)
        }
        "scale" | "gap" => {
            let mult = param(&words, "mult").unwrap_or(1);
            let index = param(&words, "index").unwrap_or(0) as usize;
            let family = if kind == "gap" {
                gen::gap_family(seed, mult)?
            } else {
                gen::scaling_family(seed, mult)?
            };
            let net = family
                .into_iter()
                .nth(index)
                .ok_or_else(|| anyhow::anyhow!("family has no member {index}"))?;
            let (verdict, stats) = hytn::solve_t2hytp_traced(&net)?;
            (verdict, stats.relaxations)
        }
        other => anyhow::bail!("unknown bench row kind `{other}`"),
    };
    Ok(Report {
        index: row.index,
        spec: row.spec.clone(),
        verdict: match verdict {
            Verdict::Consistent(_) => "consistent",
            Verdict::Inconsistent(_) => "inconsistent",
        },
        micros: start.elapsed().as_micros(),
        counter,
    })
}

pub fn bench_cmd(suite: &PathBuf, jobs: usize) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(suite)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", suite.display()))?;
    let rows: Vec<Row> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(index, spec)| Row {
            index,
            spec: spec.to_string(),
        })
        .collect();

    let jobs = jobs.max(1).min(rows.len().max(1));
    let mut reports: Vec<Report> = Vec::with_capacity(rows.len());
    let chunk = rows.len().div_ceil(jobs);
    std::thread::scope(|scope| -> anyhow::Result<()> {
        let mut handles = Vec::new();
        for part in rows.chunks(chunk.max(1)) {
            handles.push(scope.spawn(move || {
                part.iter().map(run_row).collect::<Vec<_>>()
            }));
        }
        for handle in handles {
            for report in handle.join().expect("bench worker panicked") {
                reports.push(report?);
            }
        }
        Ok(())
    })?;
    reports.sort_by_key(|r| r.index);

    println!("row,spec,verdict,micros,counter");
    for r in &reports {
        println!(
            "{},{},{},{},{}",
            r.index,
            r.spec.replace(',', ";"),
            r.verdict,
            r.micros,
            r.counter
        );
    }
    Ok(0)
}
