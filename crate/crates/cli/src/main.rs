//! Command-line front end: solve, verify, generate, reduce, oracle, and
//! bench over the instance text format.
//!
//! Exit codes: 0 consistent/valid, 1 inconsistent/invalid, 2 input error,
//! 3 refused (enumeration budget, or an NP-hard class without --oracle),
//! 4 internal error (arithmetic overflow).

mod bench;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tempnet::certify;
use tempnet::gen;
use tempnet::hytn::{self, Hytn, Orientation};
use tempnet::io::{self, InstanceDocument};
use tempnet::model::{Certificate, Network, Schedule, SolveError, Verdict};
use tempnet::oracle::{self, OracleConfig, OracleError};
use tempnet::rdtp;
use tempnet::t2dtp;

const EXIT_CONSISTENT: u8 = 0;
const EXIT_INCONSISTENT: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_REFUSED: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "tempnet", version, about = "Temporal constraint network toolkit")]
struct Cli {
    /// Machine output format; only the line-oriented text format exists.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check consistency of an instance and print a schedule or certificate.
    Solve(SolveArgs),
    /// Check a schedule or certificate file against an instance.
    Verify {
        instance: PathBuf,
        artifact: PathBuf,
    },
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Flip the hyperarc orientation of an instance (time-axis inversion).
    Reduce { file: PathBuf },
    /// Brute-force disjunct enumeration instead of the polynomial solvers.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Run a suite of generated instances and print a CSV report.
    Bench {
        suite: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    /// Print the inconsistency certificate (full sequence for t2 blends).
    #[arg(long)]
    certificate: bool,
    /// Print a certified least feasible schedule on consistent pure
    /// hyper-network solves.
    #[arg(long)]
    clfs: bool,
    /// Print the 2-SAT clause set with provenance (rdtn instances).
    #[arg(long)]
    clauses: bool,
    /// Route to the brute-force oracle instead of the polynomial solvers.
    #[arg(long)]
    oracle: bool,
    /// Selection budget for the oracle path.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Build the 3-SAT hardness gadget from a DIMACS CNF file.
    Sat3 { cnf: PathBuf },
    /// Seeded random instance.
    Random(RandomArgs),
    /// One member of the weight-scaling family.
    Scale {
        base_seed: u64,
        multiplier: i64,
        /// Use the adversarial family whose bound grows while the arc
        /// weights stay unit-sized.
        #[arg(long)]
        gap: bool,
        /// Which family member to print.
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
}

#[derive(Args)]
struct RandomArgs {
    /// rdtn | hytn-head | hytn-tail | blend-head | blend-tail
    #[arg(long, default_value = "rdtn")]
    kind: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// t1-constraints (rdtn only).
    #[arg(long, default_value_t = 6)]
    t1: usize,
    /// t2-constraints.
    #[arg(long, default_value_t = 2)]
    t2: usize,
    /// t3-constraints (rdtn only).
    #[arg(long, default_value_t = 2)]
    t3: usize,
    /// Hyperarcs (hytn kinds).
    #[arg(long, default_value_t = 4)]
    arcs: usize,
    /// Maximum weighted nodes per hyperarc besides the pivot.
    #[arg(long, default_value_t = 2)]
    max_others: usize,
    #[arg(long, default_value_t = 8)]
    max_weight: i64,
    #[arg(long, default_value_t = 3)]
    max_intervals: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            classify_error(&err)
        }
    };
    ExitCode::from(code)
}

fn classify_error(err: &anyhow::Error) -> u8 {
    if let Some(solve) = err.downcast_ref::<SolveError>() {
        return match solve {
            SolveError::Overflow => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
    }
    if let Some(oracle) = err.downcast_ref::<OracleError>() {
        return match oracle {
            OracleError::BudgetExceeded { .. } => EXIT_REFUSED,
            OracleError::Solve(SolveError::Overflow) => EXIT_INTERNAL,
            OracleError::Solve(_) => EXIT_INPUT,
        };
    }
    EXIT_INPUT
}

fn read_to_string(path: &PathBuf) -> anyhow::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))
}

fn load_instance(path: &PathBuf) -> anyhow::Result<InstanceDocument> {
    let text = read_to_string(path)?;
    io::parse_instance(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if cli.format != "text" {
        anyhow::bail!("unsupported output format `{}` (only `text`)", cli.format);
    }
    match cli.command {
        Command::Solve(args) => solve_cmd(args),
        Command::Verify { instance, artifact } => verify_cmd(&instance, &artifact),
        Command::Gen(cmd) => gen_cmd(cmd),
        Command::Reduce { file } => reduce_cmd(&file),
        Command::Oracle { file, budget } => {
            let doc = load_instance(&file)?;
            oracle_route(&doc, budget)
        }
        Command::Bench { suite, jobs } => bench::bench_cmd(&suite, jobs),
    }
}

fn print_verdict(verdict: &Verdict, want_certificate: bool) -> u8 {
    match verdict {
        Verdict::Consistent(s) => {
            print!("{}", io::emit_schedule(s));
            eprintln!("consistent");
            EXIT_CONSISTENT
        }
        Verdict::Inconsistent(cert) => {
            if want_certificate {
                print!("{}", io::emit_certificate(cert));
            }
            eprintln!("inconsistent ({})", certificate_name(cert));
            EXIT_INCONSISTENT
        }
    }
}

fn certificate_name(cert: &Certificate) -> &'static str {
    match cert {
        Certificate::NegativeCycle(_) => "negative cycle",
        Certificate::T2Witness { .. } => "t2 witness",
        Certificate::UnsatCore(_) => "unsatisfiable 2-SAT core",
        Certificate::NegativeHypercycle(_) => "negative hypercycle",
        Certificate::T2HytpSequence(_) => "t2 inconsistency sequence",
    }
}

fn solve_cmd(args: SolveArgs) -> anyhow::Result<u8> {
    let doc = load_instance(&args.file)?;
    if args.oracle {
        return oracle_route(&doc, args.budget);
    }
    match &doc.body {
        Network::Rdtn(net) => {
            let (verdict, trace) = rdtp::solve_rdtp_traced(net)?;
            if args.clauses {
                if let Some(clauses) = &trace.clauses {
                    for (i, (clause, prov)) in clauses
                        .formula
                        .clauses
                        .iter()
                        .zip(&clauses.provenance)
                        .enumerate()
                    {
                        eprintln!("clause {i}: {clause:?} from {prov:?}");
                    }
                }
            }
            // The t2 witness alone is solver-trusted; on request emit the
            // independently checkable sequence over the degenerate
            // hyper-network instead.
            if args.certificate && net.c3().is_empty() {
                if let Verdict::Inconsistent(Certificate::T2Witness { .. }) = &verdict {
                    let degenerate = rdtn_as_head_blend(net)?;
                    if let Some(cert) = hytn::t2hytp_inconsistency_certificate(&degenerate)? {
                        print!("{}", io::emit_certificate(&cert));
                        eprintln!("inconsistent (t2 inconsistency sequence)");
                        return Ok(EXIT_INCONSISTENT);
                    }
                }
            }
            Ok(print_verdict(&verdict, args.certificate))
        }
        Network::Hytn(net) => solve_hytn(net, &args),
    }
}

/// A c3-free RDTN as a multi-head t2 blend: each t1-constraint becomes a
/// two-node hyperarc.
fn rdtn_as_head_blend(net: &tempnet::Rdtn) -> anyhow::Result<Hytn> {
    let arcs = net
        .c1()
        .iter()
        .map(|c| hytn::Hyperarc::multi_head(c.x.0, vec![(c.y.0, c.w)]))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    Hytn::new(
        net.time_point_count(),
        arcs,
        net.c2().to_vec(),
        vec![],
    )
    .map_err(|e| anyhow::anyhow!("{e}"))
}

fn solve_hytn(net: &Hytn, args: &SolveArgs) -> anyhow::Result<u8> {
    if !net.c3().is_empty() {
        eprintln!(
            "refused: consistency of t3-blended hyper networks is NP-complete; \
             rerun with --oracle to enumerate disjunct selections"
        );
        return Ok(EXIT_REFUSED);
    }
    let tail = net.orientation() == Orientation::MultiTail && !net.arcs().is_empty();
    let solved_net;
    let working: &Hytn = if tail {
        eprintln!("note: multi-tail instance solved on the inverted time axis");
        solved_net = hytn::reduce_orientation(net);
        &solved_net
    } else {
        net
    };
    let pure = working.c2().is_empty();
    let verdict = if pure {
        hytn::solve_head_hytp(working, None)?
    } else {
        hytn::solve_t2hytp(working)?
    };
    match verdict {
        Verdict::Consistent(s) => {
            let out = if tail { negate_schedule(&s) } else { s.clone() };
            print!("{}", io::emit_schedule(&out));
            if args.clfs {
                if pure {
                    let cert = hytn::clfs_certificate(working)?
                        .expect("consistent network has a CLFS");
                    if tail {
                        eprintln!("note: CLFS certifies the reduced multi-head network");
                    }
                    print!("{}", io::emit_clfs_certificate(&cert));
                } else {
                    eprintln!("note: --clfs applies to pure hyper networks only");
                }
            }
            eprintln!("consistent");
            Ok(EXIT_CONSISTENT)
        }
        Verdict::Inconsistent(cert) => {
            if args.certificate && !pure {
                // Full co-NP sequence for the blend.
                if let Some(cert) = hytn::t2hytp_inconsistency_certificate(working)? {
                    print!("{}", io::emit_certificate(&cert));
                    eprintln!("inconsistent ({})", certificate_name(&cert));
                    return Ok(EXIT_INCONSISTENT);
                }
            }
            Ok(print_verdict(&Verdict::Inconsistent(cert), args.certificate))
        }
    }
}

fn negate_schedule(s: &Schedule) -> Schedule {
    Schedule::from_values(s.values().iter().map(|&v| -v).collect())
}

fn verify_cmd(instance: &PathBuf, artifact: &PathBuf) -> anyhow::Result<u8> {
    let doc = load_instance(instance)?;
    let text = read_to_string(artifact)?;
    let first_token = text
        .lines()
        .flat_map(|l| l.split_whitespace().next())
        .find(|t| !t.starts_with('#'));
    let valid = if first_token == Some("cert") {
        let block = io::parse_cert_block(&text)
            .map_err(|e| anyhow::anyhow!("{}: {e}", artifact.display()))?;
        match block {
            io::CertBlock::Certificate(cert) => verify_certificate(&doc, &cert)?,
            io::CertBlock::Clfs(clfs) => match &doc.body {
                Network::Hytn(net) => {
                    let working = if net.orientation() == Orientation::MultiTail {
                        hytn::reduce_orientation(net)
                    } else {
                        net.clone()
                    };
                    certify::verify_clfs(&working, &clfs)
                }
                Network::Rdtn(_) => false,
            },
        }
    } else {
        let n = doc.body.time_point_count();
        let sched = io::parse_schedule(&text, n)
            .map_err(|e| anyhow::anyhow!("{}: {e}", artifact.display()))?;
        certify::verify_schedule(&doc.body, &sched)
    };
    if valid {
        eprintln!("valid");
        Ok(EXIT_CONSISTENT)
    } else {
        eprintln!("invalid");
        Ok(EXIT_INCONSISTENT)
    }
}

fn verify_certificate(doc: &InstanceDocument, cert: &Certificate) -> anyhow::Result<bool> {
    Ok(match (cert, &doc.body) {
        (Certificate::NegativeCycle(cyc), Network::Rdtn(net)) => {
            certify::verify_negative_cycle(&t2dtp::t1_graph(net), cyc)
        }
        (Certificate::T2Witness { schedule, constraint }, body) => {
            let c2 = match body {
                Network::Rdtn(n) => n.c2(),
                Network::Hytn(h) => h.c2(),
            };
            schedule.len() == body.time_point_count()
                && c2.get(*constraint).is_some_and(|c| {
                    schedule.value(c.x.0) > c.max_upper()
                })
        }
        (Certificate::UnsatCore(core), Network::Rdtn(net)) => {
            let (_, trace) = rdtp::solve_rdtp_traced(net)?;
            trace
                .clauses
                .is_some_and(|cs| tempnet::twosat::verify_unsat_core(&cs.formula, core))
        }
        (Certificate::NegativeHypercycle(hc), Network::Hytn(net)) => {
            certify::verify_negative_hypercycle(net, hc)
        }
        (Certificate::T2HytpSequence(seq), Network::Hytn(net)) => {
            let working = if net.orientation() == Orientation::MultiTail {
                hytn::reduce_orientation(net)
            } else {
                net.clone()
            };
            certify::verify_t2hytp_inconsistency(&working, seq)
        }
        (Certificate::T2HytpSequence(seq), Network::Rdtn(net)) => {
            // Sequences for rdtn instances certify the degenerate blend.
            net.c3().is_empty()
                && certify::verify_t2hytp_inconsistency(&rdtn_as_head_blend(net)?, seq)
        }
        _ => false,
    })
}

fn oracle_route(doc: &InstanceDocument, budget: u64) -> anyhow::Result<u8> {
    let cfg = OracleConfig {
        budget,
        collect_all: false,
    };
    let report = match oracle::oracle_network(&doc.body, &cfg) {
        Ok(r) => r,
        Err(OracleError::BudgetExceeded { required, budget }) => {
            eprintln!("refused: enumeration needs {required} selections, budget is {budget}");
            return Ok(EXIT_REFUSED);
        }
        Err(OracleError::Solve(e)) => return Err(e.into()),
    };
    if report.consistent {
        let witness = report.witness.expect("consistent report carries a witness");
        print!("{}", io::emit_schedule(&witness));
        eprintln!("consistent ({} selections solved)", report.stn_solves);
        Ok(EXIT_CONSISTENT)
    } else {
        eprintln!("inconsistent ({} selections solved)", report.stn_solves);
        Ok(EXIT_INCONSISTENT)
    }
}

fn gen_cmd(cmd: GenCommand) -> anyhow::Result<u8> {
    let doc = match cmd {
        GenCommand::Sat3 { cnf } => {
            let text = read_to_string(&cnf)?;
            let formula = io::parse_dimacs_cnf(&text)
                .map_err(|e| anyhow::anyhow!("{}: {e}", cnf.display()))?;
            let net = gen::gadget_from_3sat(&formula).map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut doc = InstanceDocument::from_network(Network::Hytn(net));
            doc.metadata.push(("generator".into(), "sat3".into()));
            doc
        }
        GenCommand::Random(args) => gen_random(&args)?,
        GenCommand::Scale {
            base_seed,
            multiplier,
            gap,
            index,
        } => {
            let family = if gap {
                gen::gap_family(base_seed, multiplier)?
            } else {
                gen::scaling_family(base_seed, multiplier)?
            };
            let net = family
                .into_iter()
                .nth(index)
                .ok_or_else(|| anyhow::anyhow!("family has no member {index}"))?;
            let mut doc = InstanceDocument::from_network(Network::Hytn(net));
            doc.metadata
                .push(("generator".into(), format!("scale {base_seed} {multiplier}")));
            doc
        }
    };
    print!("{}", io::emit_instance(&doc));
    Ok(EXIT_CONSISTENT)
}

fn gen_random(args: &RandomArgs) -> anyhow::Result<InstanceDocument> {
    let net = match args.kind.as_str() {
        "rdtn" => Network::Rdtn(gen::random_rdtn(
            args.seed,
            &gen::RdtnParams {
                n: args.n,
                t1_count: args.t1,
                t2_count: args.t2,
                t3_count: args.t3,
                weight_lo: -args.max_weight,
                weight_hi: args.max_weight,
                bound_range: args.max_weight,
                max_intervals: args.max_intervals,
            },
        )),
        kind @ ("hytn-head" | "hytn-tail" | "blend-head" | "blend-tail") => {
            let orientation = if kind.ends_with("tail") {
                Orientation::MultiTail
            } else {
                Orientation::MultiHead
            };
            let t2_count = if kind.starts_with("blend") { args.t2 } else { 0 };
            Network::Hytn(gen::random_hytn(
                args.seed,
                &gen::HytnParams {
                    n: args.n,
                    arc_count: args.arcs,
                    max_others: args.max_others,
                    weight_lo: -args.max_weight,
                    weight_hi: args.max_weight,
                    orientation,
                    t2_count,
                    max_intervals: args.max_intervals,
                    bound_range: args.max_weight,
                },
            ))
        }
        other => anyhow::bail!("unknown kind `{other}`"),
    };
    let mut doc = InstanceDocument::from_network(net);
    doc.metadata
        .push(("generator".into(), format!("random seed={}", args.seed)));
    Ok(doc)
}

fn reduce_cmd(file: &PathBuf) -> anyhow::Result<u8> {
    let doc = load_instance(file)?;
    let Network::Hytn(net) = &doc.body else {
        anyhow::bail!("reduce takes a hyper-network instance");
    };
    let reduced = hytn::reduce_orientation(net);
    let mut out = InstanceDocument::from_network(Network::Hytn(reduced));
    out.metadata = doc.metadata.clone();
    print!("{}", io::emit_instance(&out));
    Ok(EXIT_CONSISTENT)
}
