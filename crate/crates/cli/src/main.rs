//! Command-line surface: construction, verification, search, and export.
//!
//! Exit codes: 0 success, 1 verified failure / none, 2 usage error,
//! 3 capability or budget error.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use twonest_core::error::Error;
use twonest_core::graph::{semidual, TwoNestedGraph};
use twonest_core::io;
use twonest_core::labeling::{
    induce_semidual_labeling, verify_eulerian, verify_graceful, verify_kt_conservative,
    VertexLabeling,
};
use twonest_core::oracle::{run_campaign, run_instance, Instance, SearchBudget, Witness};
use twonest_core::skolem::{
    skolem_pairing, verify_r_order, verify_r_prime_order, verify_system, verify_zero_sum,
    SkolemSystem, ZeroSumSystem,
};
use twonest_core::snowflake::construct_conservative;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable summary.
    Text,
    /// Versioned line-oriented records.
    Machine,
    /// Graphviz DOT drawing.
    Dot,
}

#[derive(Parser)]
#[command(
    name = "twonest",
    about = "Graceful labelings of two nested cycles and conservative labelings of snowflakes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the graceful / near-graceful two-nested labeling.
    Nested {
        m1: usize,
        m2: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the primary output here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct a conservative / near-conservative snowflake labeling.
    Snowflake {
        /// Star sizes, comma-separated (e.g. 3,3,5).
        profile: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the semidual snowflake of a two-nested graph; optionally
    /// transport the graceful labeling onto it.
    Semidual {
        m1: usize,
        m2: usize,
        /// Also construct the graceful labeling and induce the
        /// conservative labeling of the semidual.
        #[arg(long)]
        induce: bool,
        /// Induce from a previously written nested record instead.
        #[arg(long)]
        labeling: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a previously written file.
    Verify {
        file: PathBuf,
        /// One of: conservative, eulerian, graceful, system, r-order,
        /// r-prime-order, zero-sum.
        kind: String,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        t: Option<u8>,
    },
    /// Print a t-Skolem pairing of order n, or "none".
    Skolem {
        n: usize,
        t: u8,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run one oracle search (kind: graceful | conservative | skolem).
    Search {
        kind: String,
        /// Instance spec: "cycle:<n>" / "nested:<m1>,<m2>" /
        /// "snowflake:<n1,n2,...>" / "<n>" for skolem.
        instance: String,
        /// Target t.
        #[arg(long, default_value = "0")]
        t: u8,
        /// Gap width k (conservative searches).
        #[arg(long, default_value = "0")]
        k: u64,
        #[arg(long, default_value = "200000000")]
        budget_nodes: u64,
        #[arg(long, default_value = "120")]
        budget_secs: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a line-oriented instance list; one record per instance.
    Campaign {
        file: PathBuf,
        #[arg(long, default_value = "1")]
        workers: usize,
        /// Directory for witness files.
        #[arg(long, default_value = "campaign-out")]
        out_dir: PathBuf,
        #[arg(long, default_value = "200000000")]
        budget_nodes: u64,
        #[arg(long, default_value = "120")]
        budget_secs: u64,
        /// Write the record stream here as well as stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Unverified(_) | Error::Parity(_) => 1,
        Error::InvalidInput(_) | Error::InconsistentT { .. } | Error::Parse(_) => 2,
        Error::BelowBound { .. } | Error::Capability(_) | Error::Exhausted(_) | Error::Io(_) => 3,
        Error::Precondition(_) => 2,
    }
}

fn emit(out: &Option<PathBuf>, payload: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, payload).map_err(Error::from),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Nested { m1, m2, format, out } => cmd_nested(m1, m2, format, out),
        Command::Snowflake { profile, format, out } => cmd_snowflake(&profile, format, out),
        Command::Semidual {
            m1,
            m2,
            induce,
            labeling,
            format,
            out,
        } => cmd_semidual(m1, m2, induce, labeling, format, out),
        Command::Verify { file, kind, k, t } => cmd_verify(&file, &kind, k, t),
        Command::Skolem { n, t, format } => cmd_skolem(n, t, format),
        Command::Search {
            kind,
            instance,
            t,
            k,
            budget_nodes,
            budget_secs,
            out,
        } => cmd_search(&kind, &instance, t, k, budget_nodes, budget_secs, out),
        Command::Campaign {
            file,
            workers,
            out_dir,
            budget_nodes,
            budget_secs,
            out,
        } => cmd_campaign(&file, workers, &out_dir, budget_nodes, budget_secs, out),
    }
}

fn parse_profile(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("bad star size: {p}")))
        })
        .collect()
}

fn cmd_nested(
    m1: usize,
    m2: usize,
    format: Format,
    out: Option<PathBuf>,
) -> Result<ExitCode, Error> {
    let built = twonest_core::nested::construct(m1, m2)?;
    let verdict = if built.params.t == 0 { "graceful" } else { "near-graceful" };
    match format {
        Format::Machine => {
            let mut text = io::write_nested(&built);
            text.push_str(&format!("verdict {verdict}\n"));
            emit(&out, &text)?;
        }
        Format::Dot => {
            let dot = io::write_nested_dot(&built.graph, Some(built.phi_sequence()));
            emit(&out, &dot)?;
        }
        Format::Text => {
            let p = built.params;
            let mut text = String::new();
            text.push_str(&format!(
                "two nested cycles: m1 = {m1}, m2 = {m2}, M = {}, case {}, t = {}\n",
                p.m, p.case, p.t
            ));
            text.push_str(&format!("c_w = {}, f_w = {}\n", p.c_w, p.f_w));
            let marked: Vec<String> = built
                .phi_sequence()
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    if built.graph.chord_positions().contains(&(i + 1)) {
                        format!("[{v}]")
                    } else {
                        v.to_string()
                    }
                })
                .collect();
            text.push_str(&format!("phi: {}\n", marked.join(" ")));
            text.push_str(&format!(
                "f:   {}\n",
                built
                    .edge_labels
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
            text.push_str(&format!("verdict: {verdict} (verified)\n"));
            emit(&out, &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_snowflake(profile: &str, format: Format, out: Option<PathBuf>) -> Result<ExitCode, Error> {
    let profile = parse_profile(profile)?;
    let built = construct_conservative(&profile)?;
    let m = built.snowflake.size();
    let r = built.report.recovered_r.unwrap_or(m as u64 - 1);
    match format {
        Format::Machine => {
            let text = io::write_labeling(&built.labeling, 0, built.t, r, Some(built.provenance));
            emit(&out, &text)?;
        }
        Format::Dot => {
            let dot = io::write_snowflake_dot(&built.snowflake, &built.labeling);
            emit(&out, &dot)?;
        }
        Format::Text => {
            let mut text = String::new();
            let kind = if built.t == 0 { "conservative" } else { "near-conservative" };
            text.push_str(&format!(
                "snowflake {profile:?}: M = {m}, t = {}, {kind} (verified), provenance {}\n",
                built.t, built.provenance
            ));
            if built.t == 1 {
                text.push_str(&format!(
                    "note: M = {m} ≡ {} (mod 4), so no conservative labeling exists\n",
                    m % 4
                ));
            }
            for a in &built.labeling.arcs {
                text.push_str(&format!("{} -> {}: {}\n", a.tail, a.head, a.label));
            }
            emit(&out, &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_semidual(
    m1: usize,
    m2: usize,
    induce: bool,
    labeling: Option<PathBuf>,
    format: Format,
    out: Option<PathBuf>,
) -> Result<ExitCode, Error> {
    let (g, vertex_labels): (TwoNestedGraph, Option<VertexLabeling>) = match &labeling {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let rec = io::read_nested(&text)?;
            let g = TwoNestedGraph::with_positions(rec.m2, rec.positions.clone())?;
            (g, Some(VertexLabeling::new(rec.phi.clone(), rec.t)))
        }
        None => {
            let params = twonest_core::nested::compute_params(m1, m2)?;
            let g = twonest_core::nested::build_two_nested(m1, m2, params.t)?;
            let f = if induce {
                Some(twonest_core::nested::construct(m1, m2)?.labeling)
            } else {
                None
            };
            (g, f)
        }
    };
    let (flake, map) = semidual(&g);

    let mut text = String::new();
    match format {
        Format::Machine => {
            text.push_str(&format!(
                "semidual v1 m1={} m2={} M={}\n",
                g.m1(),
                g.m2(),
                g.size()
            ));
            text.push_str(&format!(
                "profile {}\n",
                flake
                    .profile()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
            for (p, d) in map.primal_to_dual.iter().enumerate() {
                text.push_str(&format!("map {p} {d}\n"));
            }
        }
        _ => {
            text.push_str(&format!(
                "semidual of ({}, {}): snowflake profile {:?}, size {}\n",
                g.m1(),
                g.m2(),
                flake.profile(),
                flake.size()
            ));
            text.push_str("correspondence: chords -> center edges, base arcs -> leaf edges\n");
        }
    }

    if let Some(f) = vertex_labels {
        let (dual_flake, induced) = induce_semidual_labeling(&g, &f)?;
        let report = verify_kt_conservative(&dual_flake.graph(), &induced, 0, f.t);
        if !report.pass() {
            return Err(Error::Unverified(format!("induced labeling failed: {report}")));
        }
        let r = report.recovered_r.unwrap_or(dual_flake.size() as u64 - 1);
        text.push_str(&io::write_labeling(&induced, 0, f.t, r, None));
        text.push_str(&format!(
            "induced verdict: {} (verified)\n",
            if f.t == 0 { "conservative" } else { "near-conservative" }
        ));
    }
    emit(&out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    file: &PathBuf,
    kind: &str,
    k: Option<u64>,
    t: Option<u8>,
) -> Result<ExitCode, Error> {
    let text = std::fs::read_to_string(file)?;
    let report = match kind {
        "conservative" => {
            let f = io::read_labeling(&text)?;
            let g = f.labeling.underlying_graph()?;
            verify_kt_conservative(&g, &f.labeling, k.unwrap_or(f.k), t.unwrap_or(f.t))
        }
        "eulerian" => {
            let f = io::read_labeling(&text)?;
            verify_eulerian(&f.labeling)
        }
        "graceful" => {
            let rec = io::read_nested(&text)?;
            let g = TwoNestedGraph::with_positions(rec.m2, rec.positions.clone())?;
            let f = VertexLabeling::new(rec.phi.clone(), rec.t);
            verify_graceful(&g.graph(), &f, t.unwrap_or(rec.t))
        }
        "system" => {
            let (sys, _) = read_system_override(&text, k, t)?;
            verify_system(&sys)
        }
        "r-order" => {
            let (sys, _) = read_system_override(&text, k, t)?;
            verify_r_order(&sys)
        }
        "r-prime-order" => {
            let (sys, _) = read_system_override(&text, k, t)?;
            verify_r_prime_order(&sys).0
        }
        "zero-sum" => {
            let (sys, marks) = read_system_override(&text, k, t)?;
            let marks = marks.ok_or_else(|| {
                Error::InvalidInput("no distinguished elements marked in the file".into())
            })?;
            verify_zero_sum(&ZeroSumSystem {
                system: sys,
                distinguished: marks,
            })
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown verification kind: {other}"
            )))
        }
    };
    println!("{report}");
    if report.pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn read_system_override(
    text: &str,
    k: Option<u64>,
    t: Option<u8>,
) -> Result<(SkolemSystem, Option<Vec<i64>>), Error> {
    let (mut sys, marks) = io::read_system(text)?;
    if let Some(k) = k {
        sys.k = k;
    }
    if let Some(t) = t {
        sys.t = t;
    }
    Ok((sys, marks))
}

fn cmd_skolem(n: usize, t: u8, format: Format) -> Result<ExitCode, Error> {
    match skolem_pairing(n, t)? {
        Some(p) => {
            if format == Format::Machine {
                println!("skolem-pairing v1 n={n} t={t}");
                for (a, b) in p.pairs() {
                    println!("pair {} {a} {b}", b - a);
                }
            } else {
                println!(
                    "{}-Skolem pairing of order {n}: {}",
                    t,
                    p.pairs()
                        .iter()
                        .map(|(a, b)| format!("({a},{b})"))
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("none");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_search(
    kind: &str,
    instance: &str,
    t: u8,
    k: u64,
    budget_nodes: u64,
    budget_secs: u64,
    out: Option<PathBuf>,
) -> Result<ExitCode, Error> {
    let line = match kind {
        "graceful" => format!("cli graceful {instance} {t}"),
        "conservative" => format!("cli conservative {instance} {k} {t}"),
        "skolem" => format!("cli skolem {instance} {t}"),
        other => return Err(Error::InvalidInput(format!("unknown search kind: {other}"))),
    };
    let inst = Instance::parse(&line)?;
    let budget = SearchBudget::new(budget_nodes, budget_secs * 1000);
    let record = run_instance(&inst, &budget)?;
    println!(
        "{}",
        io::write_campaign_record(&record.id, record.outcome, None, record.nodes, record.millis)
            .trim_end()
    );
    if let Some(w) = &record.witness {
        let payload = witness_payload(w);
        emit(&out, &payload)?;
    }
    match record.outcome {
        "found" => Ok(ExitCode::SUCCESS),
        "none" => Ok(ExitCode::from(1)),
        _ => Ok(ExitCode::from(3)),
    }
}

fn witness_payload(w: &Witness) -> String {
    match w {
        Witness::Graceful(g, f) => {
            let mut s = format!(
                "graceful-witness v1 vertices={} M={} t={}\n",
                g.vertex_count(),
                g.size(),
                f.t
            );
            s.push_str(&format!(
                "labels {}\n",
                f.values
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
            s.push_str(&io::write_edge_list(g));
            s
        }
        Witness::Conservative(g, l, k, t) => {
            let report = verify_kt_conservative(g, l, *k, *t);
            let r = report.recovered_r.unwrap_or(1);
            io::write_labeling(l, *k, *t, r, None)
        }
        Witness::Skolem(p) => {
            let mut s = format!("skolem-pairing v1 n={} t={}\n", p.n(), p.t());
            for (a, b) in p.pairs() {
                s.push_str(&format!("pair {} {a} {b}\n", b - a));
            }
            s
        }
    }
}

fn cmd_campaign(
    file: &PathBuf,
    workers: usize,
    out_dir: &PathBuf,
    budget_nodes: u64,
    budget_secs: u64,
    out: Option<PathBuf>,
) -> Result<ExitCode, Error> {
    let text = std::fs::read_to_string(file)?;
    let instances: Vec<Instance> = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(Instance::parse)
        .collect::<Result<_, _>>()?;
    std::fs::create_dir_all(out_dir)?;
    let budget = SearchBudget::new(budget_nodes, budget_secs * 1000);
    let results = run_campaign(&instances, &budget, workers);
    let mut records = String::new();
    for res in results {
        let record = res?;
        let witness_path = match &record.witness {
            Some(w) => {
                let path = out_dir.join(format!("{}.witness", record.id));
                std::fs::write(&path, witness_payload(w))?;
                Some(path.to_string_lossy().into_owned())
            }
            None => None,
        };
        records.push_str(&io::write_campaign_record(
            &record.id,
            record.outcome,
            witness_path.as_deref(),
            record.nodes,
            record.millis,
        ));
    }
    print!("{records}");
    if let Some(path) = out {
        std::fs::write(path, &records)?;
    }
    Ok(ExitCode::SUCCESS)
}
