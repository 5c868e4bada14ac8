use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sextic::classify::{Atlas, ClassificationReport, Family};
use sextic::data::{strip_brackets, ReferenceData};
use sextic::degen::{asymmetric_strata, maximizing_closure, ClusterGraph};
use sextic::lattices::{parse_marked, SingularitySet};
use sextic::verify::{verify, TABLES};
use sextic::Error;

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "atlas", version, about = "Deformation classification of irreducible simple plane sextics")]
struct Cli {
    /// Directory with reference tables overriding the builtin copies.
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify one set of singularities in every family (or in `--family` only).
    Classify {
        spec: String,
        #[arg(long, value_parser = parse_family)]
        family: Option<Family>,
    },
    /// List the realized sets of a family up to a Milnor number.
    Enumerate {
        #[arg(value_parser = parse_family)]
        family_pos: Option<Family>,
        mu_pos: Option<u32>,
        #[arg(long, value_parser = parse_family, conflicts_with = "family_pos")]
        family: Option<Family>,
        #[arg(long, conflicts_with = "mu_pos")]
        mu_max: Option<u32>,
        /// Print only the number of realized sets.
        #[arg(long)]
        count: bool,
    },
    /// Compare computed results with the reference tables.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(TABLES))]
        table: Vec<String>,
    },
    /// Cluster graph of strata with non-real components for a prime 2, 3 or 7.
    Graph {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(["2", "3", "7"]))]
        p: String,
    },
    /// Maximizing reference sets a set degenerates to.
    Closure { spec: String },
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).ok_or_else(|| format!("unknown family '{s}' (ns, torus, torus4, torus12, special5, special7)"))
}

enum Failure {
    Mismatch,
    Usage(String),
    Unsupported(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unsupported { .. } => Failure::Unsupported(e.to_string()),
            other => Failure::Other(other.into()),
        }
    }
}

fn parse_spec(spec: &str) -> Result<SingularitySet, Failure> {
    let (plain, _) = strip_brackets(spec);
    if plain != spec {
        return parse_spec(&plain);
    }
    parse_marked(spec).map(|m| m.set).map_err(|e| match e {
        Error::Parse { pos, msg } => Failure::Usage(format!("{msg}\n  {spec}\n  {}^", " ".repeat(pos))),
        other => Failure::Usage(other.to_string()),
    })
}

fn rc(r: &ClassificationReport) -> String {
    r.components.map(|(r, c)| format!("({r},{c})")).unwrap_or_else(|| "-".into())
}

fn report_line(r: &ClassificationReport) -> String {
    if !r.realized {
        return format!("{}\t{}\tnot realized", r.set, r.family);
    }
    let mut parts = vec![r.set.to_string(), r.family.to_string(), "realized".into(), rc(r)];
    if let Some(m) = &r.monodromy {
        parts.push(format!("monodromy={m}"));
    }
    if let Some(rc) = r.real_curve {
        parts.push(format!("real={rc}"));
    }
    if !r.notes.is_empty() {
        parts.push(r.notes.join("; "));
    }
    parts.join("\t")
}

const CSV_HEADER: &str = "set,family,realized,r,c,monodromy,real_curve,symmetric,e_order";

fn csv_line(r: &ClassificationReport) -> String {
    let (cr, cc) = r.components.map(|(a, b)| (a.to_string(), b.to_string())).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.set,
        r.family,
        r.realized,
        cr,
        cc,
        r.monodromy.clone().unwrap_or_default(),
        r.real_curve.map(|x| x.to_string()).unwrap_or_default(),
        r.symmetric.map(|x| x.to_string()).unwrap_or_default(),
        r.e_order.map(|x| x.to_string()).unwrap_or_default()
    )
}

fn emit_reports(format: Format, reports: &[ClassificationReport], extra: serde_json::Value) -> Result<(), Failure> {
    match format {
        Format::Text => reports.iter().for_each(|r| println!("{}", report_line(r))),
        Format::Csv => {
            println!("{CSV_HEADER}");
            reports.iter().for_each(|r| println!("{}", csv_line(r)));
        }
        Format::Json => {
            let mut v = json!({ "schema": SCHEMA, "reports": reports });
            if let (Some(obj), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
                obj.extend(more);
            }
            println!("{}", serde_json::to_string_pretty(&v).context("serializing report")?);
        }
        Format::Dot => return Err(Failure::Usage("dot output is only available for `graph`".into())),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker pool")?;
    }
    let data = match &cli.data_dir {
        Some(dir) => {
            if !dir.is_dir() {
                return Err(Failure::Other(anyhow::anyhow!("data directory {} does not exist", dir.display())));
            }
            ReferenceData::from_dir(dir)?
        }
        None => ReferenceData::builtin(),
    };
    let atlas = Atlas::new(data);
    match cli.command {
        Command::Classify { spec, family } => {
            let set = parse_spec(&spec)?;
            let reports = match family {
                Some(f) => vec![atlas.classify_family(&set, f)?],
                None => atlas.classify(&set)?,
            };
            emit_reports(cli.format.unwrap_or(Format::Text), &reports, json!({ "set": set }))
        }
        Command::Enumerate { family_pos, mu_pos, family, mu_max, count } => {
            let family = family.or(family_pos).unwrap_or(Family::Ns);
            let mu_max = mu_max.or(mu_pos).unwrap_or(18);
            if mu_max > 19 {
                return Err(Failure::Usage("Milnor number is at most 19".into()));
            }
            let mut reports = Vec::new();
            let mut unsupported = Vec::new();
            for r in atlas.enumerate(family, mu_max) {
                match r {
                    Ok(r) if r.realized => reports.push(r),
                    Ok(_) => {}
                    Err(f) => unsupported.push(format!("{}: {}", f.set, f.error)),
                }
            }
            let format = cli.format.unwrap_or(Format::Text);
            if count {
                match format {
                    Format::Json => println!(
                        "{}",
                        json!({ "schema": SCHEMA, "family": family, "mu_max": mu_max, "count": reports.len() })
                    ),
                    _ => println!("{}", reports.len()),
                }
            } else {
                emit_reports(format, &reports, json!({ "family": family, "mu_max": mu_max, "count": reports.len() }))?;
                if format == Format::Text {
                    println!("# {} realized sets, family {family}, mu <= {mu_max}", reports.len());
                }
            }
            if !unsupported.is_empty() {
                return Err(Failure::Unsupported(unsupported.join("\n")));
            }
            Ok(())
        }
        Command::Verify { table } => {
            let tables: Vec<&str> = table.iter().map(String::as_str).collect();
            let report = verify(&atlas, &tables)?;
            match cli.format.unwrap_or(Format::Text) {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({ "schema": SCHEMA, "passed": report.passed(), "checks": report.checks }))
                        .context("serializing report")?
                ),
                Format::Csv => {
                    println!("table,row,expected,computed,ok");
                    for c in &report.checks {
                        println!("{},{},{},{},{}", c.table, c.row, c.expected, c.computed, c.ok);
                    }
                }
                Format::Text => {
                    for c in report.failures() {
                        println!("FAIL {} {}: expected {}, computed {}", c.table, c.row, c.expected, c.computed);
                    }
                    for t in TABLES {
                        let (ok, total) = report.count(t);
                        if total > 0 {
                            println!("{t}: {ok}/{total} rows matched");
                        }
                    }
                }
                Format::Dot => return Err(Failure::Usage("dot output is only available for `graph`".into())),
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
        Command::Graph { p } => {
            let p: u64 = p.parse().expect("validated by clap");
            let ns = atlas.realized(Family::Ns, 18).map_err(|f| Failure::from(f.error))?;
            let g = ClusterGraph::build(p, &atlas.data, &asymmetric_strata(&ns, &atlas.data));
            match cli.format.unwrap_or(Format::Dot) {
                Format::Dot => print!("{}", g.to_dot()),
                Format::Csv => print!("{}", g.to_csv()),
                Format::Json => {
                    let vertices: Vec<String> = g.vertices.iter().map(|v| v.id()).collect();
                    let edges: Vec<(String, String)> =
                        g.edges.iter().map(|&(a, b)| (vertices[a].clone(), vertices[b].clone())).collect();
                    let minimal: Vec<&String> = g.minimal().into_iter().map(|i| &vertices[i]).collect();
                    let v = json!({
                        "schema": SCHEMA, "p": p, "vertices": vertices, "edges": edges, "minimal": minimal,
                        "components": g.components(), "betti1": g.betti1(),
                    });
                    println!("{}", serde_json::to_string_pretty(&v).context("serializing graph")?);
                }
                Format::Text => {
                    println!(
                        "C{p}: {} vertices, {} edges, {} components, cycle rank {}",
                        g.vertices.len(),
                        g.edges.len(),
                        g.components(),
                        g.betti1()
                    );
                    for i in g.minimal() {
                        println!("minimal {}", g.vertices[i].id());
                    }
                }
            }
            Ok(())
        }
        Command::Closure { spec } => {
            let set = parse_spec(&spec)?;
            let targets = maximizing_closure(&set, &atlas.data.maximizing_ns);
            match cli.format.unwrap_or(Format::Text) {
                Format::Json => println!("{}", json!({ "schema": SCHEMA, "set": set, "maximizing": targets })),
                _ => targets.iter().for_each(|t| println!("{t}")),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Unsupported(msg)) => {
            eprintln!("unsupported: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
