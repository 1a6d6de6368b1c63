use std::io::Write;
use std::process::ExitCode;

use amoeba_core::amoeba::recognize;
use amoeba_core::balancing::{bal_bruteforce_seeded, bounds_report, ex_bruteforce, half_family, COPY_ORDER_SEED};
use amoeba_core::factor::{replay_verify, simplify, time_factor, worst_case_permutation, Factorizer, FerTrace};
use amoeba_core::families::{build, t_order, Family};
use amoeba_core::io::{from_graph6, from_json, to_dot, to_graph6, to_json};
use amoeba_core::{Error, LabeledGraph, Permutation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Largest graph `recognize` handles without --force.
const RECOGNIZE_GUARD_N: usize = 12;

#[derive(Parser)]
#[command(name = "amoeba", version, about = "Amoeba graphs, Fer groups, replacement chains and balancing numbers")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for the parallel searches.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for any randomised ordering.
    #[arg(long, global = true, default_value_t = COPY_ORDER_SEED)]
    seed: u64,
    /// Run past size guards (also AMOEBA_GUARD_OVERRIDE=1).
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

/// `graph6` and `dot` only apply to `construct`.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
    Graph6,
    Dot,
}

#[derive(Args)]
struct Member {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    k: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Build T_k, A_k or B_k with its canonical labeling.
    Construct {
        #[command(flatten)]
        member: Member,
    },
    /// Local/global amoeba test and Fer-group data.
    Recognize {
        #[arg(long, value_parser = parse_family, requires = "k", conflicts_with = "graph6")]
        family: Option<Family>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        graph6: Option<String>,
        /// Graph in JSON form {"labels":[...],"edges":[[i,j],...]}.
        #[arg(long, conflicts_with_all = ["family", "graph6"])]
        json: Option<String>,
    },
    /// Factor a permutation of canonical T_k into feasible replacements.
    Factor {
        #[command(flatten)]
        member: Member,
        /// Cycle notation "(0 3)(1 5)" or a JSON image array "[1,0,2,...]".
        #[arg(long)]
        perm: String,
        #[arg(long)]
        simplify: bool,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        no_memo: bool,
    },
    /// Balancing-number bounds and exhaustive values.
    Balance {
        #[command(subcommand)]
        what: Balance,
    },
    /// Exact ex(n, H_G) for a small graph given in graph6.
    Extremal {
        #[arg(long)]
        family_of: String,
        #[arg(long)]
        n: usize,
    },
    /// Worst-case factor timings as CSV (k,n,seconds).
    Bench {
        #[arg(long, default_value_t = 8)]
        k_min: usize,
        #[arg(long, default_value_t = 14)]
        k_max: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long)]
        no_memo: bool,
    },
}

#[derive(Subcommand)]
enum Balance {
    /// Closed-form lower and upper bounds.
    Bounds {
        #[command(flatten)]
        member: Member,
        #[arg(long)]
        n: i64,
    },
    /// bal(n, G) by enumerating colourings.
    Brute {
        #[command(flatten)]
        member: Member,
        #[arg(long)]
        n: usize,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_perm(text: &str, n: usize) -> Result<Permutation, Error> {
    let text = text.trim();
    if text.starts_with('[') {
        let images: Vec<u32> = serde_json::from_str(text).map_err(|e| Error::ParsePermutation(e.to_string()))?;
        if images.len() != n {
            return Err(Error::DomainMismatch);
        }
        Permutation::from_images(&images)
    } else {
        Permutation::parse_cycles(text, 0..n as u32)
    }
}

struct Ctx {
    format: Format,
    force: bool,
    seed: u64,
}

/// Output plus an optional human rendering.
struct Report {
    json: Value,
    human: Option<String>,
}

impl Report {
    fn json(json: Value) -> Report {
        Report { json, human: None }
    }

    fn text(text: String) -> Report {
        Report {
            json: Value::String(text.clone()),
            human: Some(text),
        }
    }
}

fn human_lines(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

fn run(cli: Cli) -> Result<Report, Error> {
    let ctx = Ctx {
        format: cli.format,
        force: cli.force || std::env::var("AMOEBA_GUARD_OVERRIDE").is_ok_and(|v| v == "1"),
        seed: cli.seed,
    };
    if matches!(ctx.format, Format::Graph6 | Format::Dot) && !matches!(cli.command, Command::Construct { .. }) {
        return Err(Error::Degenerate("graph6 and dot output apply to construct only".into()));
    }
    match cli.command {
        Command::Construct { member } => {
            let tree = build(member.family, member.k)?;
            match ctx.format {
                Format::Graph6 => Ok(Report::text(to_graph6(&tree.graph))),
                Format::Dot => Ok(Report::text(to_dot(&tree.graph, &format!("{}{}", member.family, member.k)))),
                Format::Json | Format::Human => {
                    let mut v = serde_json::to_value(&tree).expect("plain data");
                    v["graph"] = to_json(&tree.graph);
                    v["n"] = json!(tree.graph.order());
                    v["graph6"] = json!(to_graph6(&tree.graph));
                    Ok(Report::json(v))
                }
            }
        }
        Command::Recognize { family, k, graph6, json } => {
            let g = match (family, k, graph6, json) {
                (Some(f), Some(k), _, _) => build(f, k)?.graph,
                (_, _, Some(s), _) => from_graph6(&s)?,
                (_, _, _, Some(j)) => from_json(&j)?,
                _ => return Err(Error::Degenerate("give --family/--k, --graph6 or --json".into())),
            };
            if g.order() > RECOGNIZE_GUARD_N && !ctx.force {
                return Err(Error::Guard(format!("recognition on {} vertices", g.order())));
            }
            let report = recognize(&g);
            Ok(Report::json(serde_json::to_value(&report).expect("plain data")))
        }
        Command::Factor { member, perm, simplify: simp, verify, no_memo } => {
            if member.family != Family::T {
                return Err(Error::Degenerate("factorization is wired for the T family only".into()));
            }
            let n = t_order(member.k);
            let p = parse_perm(&perm, n)?;
            let mut fz = Factorizer::with_memo(member.k, !no_memo)?;
            let mut f = fz.factor(&p)?;
            if simp {
                f = simplify(&f);
            }
            if verify {
                if let Err(i) = replay_verify(&f, member.k) {
                    return Err(Error::Degenerate(format!("replay failed at step {i}")));
                }
            }
            let trace = FerTrace::new(&f, verify);
            let json = serde_json::to_value(&trace).expect("plain data");
            let human = format!("perm: {}\nlength: {}\nverified: {}\nchain: {}", f.perm, f.len(), verify, f.chain.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" "));
            Ok(Report { json, human: Some(human) })
        }
        Command::Balance { what: Balance::Bounds { member, n } } => {
            let r = bounds_report(member.family, member.k, n)?;
            let json = json!({
                "family": r.family.to_string(),
                "k": r.k,
                "n": r.n,
                "lower": r.lower_text(),
                "upper": r.upper_text(),
                "lower_value": r.lower_value(),
                "upper_value": r.upper_value(),
            });
            Ok(Report::json(json))
        }
        Command::Balance { what: Balance::Brute { member, n } } => {
            let g = build(member.family, member.k)?.graph;
            let r = bal_bruteforce_seeded(n, &g, ctx.force, ctx.seed)?;
            Ok(Report::json(json!({
                "family": member.family.to_string(),
                "k": member.k,
                "n": r.n,
                "bal": r.bal,
                "copies": r.copies,
                "witness_red": r.witness_red.as_ref().map(to_graph6),
            })))
        }
        Command::Extremal { family_of, n } => {
            let g: LabeledGraph = from_graph6(&family_of)?;
            let family = half_family(&g)?;
            let r = ex_bruteforce(n, &family, ctx.force)?;
            Ok(Report::json(json!({
                "n": r.n,
                "ex": r.ex,
                "family": family.members.iter().map(to_graph6).collect::<Vec<_>>(),
                "witness": to_graph6(&r.witness),
                "extremal": r.extremal.iter().map(to_graph6).collect::<Vec<_>>(),
                "examined": r.examined,
            })))
        }
        Command::Bench { k_min, k_max, reps, no_memo } => {
            if k_min < 1 || k_max < k_min {
                return Err(Error::IndexOutOfRange { k: k_max, range: "1 ≤ k-min ≤ k-max" });
            }
            if k_max > 18 && !ctx.force {
                return Err(Error::Guard(format!("benchmark up to k = {k_max}")));
            }
            let mut csv = String::from("k,n,seconds\n");
            let mut rows = Vec::new();
            for k in k_min..=k_max {
                let p = worst_case_permutation(k);
                let t = time_factor(&p, k, !no_memo, reps)?;
                csv.push_str(&format!("{k},{},{t:.6}\n", t_order(k)));
                rows.push(json!({ "k": k, "n": t_order(k), "seconds": t }));
            }
            Ok(Report {
                json: Value::Array(rows),
                human: Some(csv.trim_end().to_string()),
            })
        }
    }
}

fn main() -> ExitCode {
    // Usage errors are invalid input (1); clap's own code 2 is kept for guards.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let format = cli.format;
    let is_bench = matches!(cli.command, Command::Bench { .. });
    match run(cli) {
        Ok(report) => {
            // CSV is the bench's native output; graph6 and dot are text.
            let text = match format {
                Format::Json if !is_bench => report.json.to_string(),
                _ => report.human.unwrap_or_else(|| human_lines(&report.json)),
            };
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Guard(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
