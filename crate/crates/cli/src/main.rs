use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fusionkit::catalog;
use fusionkit::double_construction::{compare_double, deligne_double, drinfeld_double, orbifold_budget};
use fusionkit::lr_graphs::{
    alpha_induction_checks, dual_principal_graph, is_depth_two, lr_index, principal_graph,
    Chirality,
};
use fusionkit::multi_interval::{even_part_ratio, ledger};
use fusionkit::ring_file::{load_path, LoadedRing, RingFile};
use fusionkit::{Check, CrossedProductAlgebra, Error, GroupTable, Report, Result};

/// Fusion rings, modular data, Longo-Rehren graphs and quantum doubles.
///
/// Inputs are ring files (JSON) or `catalog:<name>`. Reports go to standard
/// output; exit status is 0 when every check passes, 1 when a check fails
/// and 2 on bad input.
#[derive(Parser, Debug)]
#[command(name = "fusionkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Tolerance for real-valued comparisons.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive)]
    tolerance: f64,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Also write the report to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the fusion ring axioms.
    Validate { input: String },
    /// Quantum dimensions.
    Dims { input: String },
    /// Global index, LR index and even-part ratio.
    Index { input: String },
    /// Principal and dual principal graph of the LR inclusion.
    Graph {
        input: String,
        /// Write the principal graph in DOT format to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Compare the principal graph with the full doubled system.
    Double { input: String },
    /// Drinfeld double of a finite group.
    Dg {
        /// Built-in group name or group table file.
        #[arg(long)]
        group: String,
    },
    /// Modularity and Verlinde checks on the ring's modular data.
    Modular { input: String },
    /// Multi-interval index identities.
    Multi {
        #[arg(long)]
        n: u32,
        input: String,
    },
    /// Crossed-product model of the LR inclusion for a pointed system.
    Oracle {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        /// Base matrix size; defaults to the group order.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Built-in models.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
    /// Print an entry in ring file format.
    Export { name: String },
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

fn load(input: &str) -> Result<(String, LoadedRing)> {
    if let Some(name) = input.strip_prefix("catalog:") {
        let e = catalog::by_name(name)?;
        return Ok((e.name, LoadedRing { ring: e.ring, modular: e.modular }));
    }
    let path = Path::new(input);
    let subject = path
        .file_name()
        .and_then(|s| s.to_str())
        .map(|s| s.trim_end_matches(".json").trim_end_matches(".ring").to_string())
        .unwrap_or_else(|| input.to_string());
    if !path.exists() {
        return Err(Error::Input(format!("{input}: no such file")));
    }
    Ok((subject, load_path(path)?))
}

fn group(arg: &str) -> Result<(String, GroupTable)> {
    match GroupTable::builtin(arg) {
        Ok(g) => Ok((arg.to_string(), g)),
        Err(e) if !Path::new(arg).exists() => Err(e),
        Err(_) => {
            let g = GroupTable::from_json(&std::fs::read_to_string(arg)?)?;
            Ok((arg.to_string(), g))
        }
    }
}

enum Output {
    Report(Report),
    Text(String),
}

fn run(cli: &Cli) -> Result<Output> {
    let tol = cli.tolerance;
    let report = match &cli.command {
        Command::Validate { input } => {
            let (subject, loaded) = load(input)?;
            let mut r = Report::new("validate", subject);
            r.extend(loaded.ring.validate().checks);
            r.set("labels", loaded.ring.labels());
            r.set("has_modular_data", loaded.modular.is_some());
            r
        }
        Command::Dims { input } => {
            let (subject, loaded) = load(input)?;
            let ring = &loaded.ring;
            let d = ring.dims()?;
            let mut r = Report::new("dims", subject);
            r.extend(d.checks(ring));
            r.set("labels", ring.labels());
            r.set("dims", &d.d);
            r.set("global_index", d.global_index());
            r
        }
        Command::Index { input } => {
            let (subject, loaded) = load(input)?;
            let ring = &loaded.ring;
            let global = ring.global_index()?;
            let lr = lr_index(ring)?;
            let ratio = even_part_ratio(ring)?;
            let mut r = Report::new("index", subject);
            r.push(Check::compare("lr_index_equals_global_index", lr, global, tol * global));
            r.push(Check::new(
                "global_index_at_least_rank",
                global >= ring.rank() as f64 - tol,
                format!("{global} >= {}", ring.rank()),
            ));
            r.set("global_index", global);
            r.set("lr_index", lr);
            r.set("even_part_ratio", &ratio);
            r.set("depth_two", is_depth_two(ring, tol)?);
            if let Some(notice) = &ratio.notice {
                eprintln!("note: {notice}");
            }
            r
        }
        Command::Graph { input, dot } => {
            let (subject, loaded) = load(input)?;
            let ring = &loaded.ring;
            let modular = loaded
                .modular
                .as_ref()
                .is_some_and(|md| md.check_modularity_with_tolerance(tol).pass);
            let principal = principal_graph(ring);
            let dual = dual_principal_graph(ring, modular);
            let mut r = Report::new("graph", subject.clone());
            r.extend(principal.checks());
            if modular {
                r.push(Check::new(
                    "dual_equals_principal",
                    principal.same_graph(&dual),
                    "dual principal graph coincides with the principal graph",
                ));
            } else {
                eprintln!("note: no verified modular data; the dual principal graph is unverified");
            }
            for chirality in [Chirality::Plus, Chirality::Minus] {
                for mut c in alpha_induction_checks(ring, chirality) {
                    c.name = format!("{}_{chirality:?}", c.name).to_lowercase();
                    r.push(c);
                }
            }
            let name = |&(i, j): &(usize, usize)| format!("({},{})", ring.label(i), ring.label(j));
            r.set("even_vertices", principal.even_vertices.iter().map(name).collect::<Vec<_>>());
            r.set(
                "odd_vertices",
                principal.odd_vertices.iter().map(|&k| ring.label(k)).collect::<Vec<_>>(),
            );
            r.set("edges", principal.edge_count());
            r.set("dual_unverified", dual.unverified_chirality);
            if let Some(path) = dot {
                std::fs::write(path, principal.to_dot(ring, &subject))?;
            }
            r
        }
        Command::Double { input } => {
            let (subject, loaded) = load(input)?;
            let ring = &loaded.ring;
            let mut r = compare_double(ring)?.report(&subject);
            let i = ring.global_index()?;
            let doubled = deligne_double(ring).ring.global_index()?;
            r.push(Check::compare("deligne_index_is_square", doubled, i * i, 1e-6 * i * i));
            r
        }
        Command::Dg { group: arg } => {
            let (name, g) = group(arg)?;
            let doubled = drinfeld_double(&g)?;
            let ring = &doubled.ring;
            let order = g.order() as f64;
            let index = ring.global_index()?;
            let budget = orbifold_budget(g.order() as u64)?;
            let mut r = Report::new("dg", name);
            r.extend(ring.validate().checks);
            r.push(Check::compare("global_index_is_order_squared", index, order * order, tol));
            r.push(Check::compare("budget_total", budget.total as f64, index, tol.max(1e-9) * index));
            r.set("labels", ring.labels());
            r.set("dims", ring.dims()?.d);
            r.set("budget", budget);
            r
        }
        Command::Modular { input } => {
            let (subject, loaded) = load(input)?;
            let md = loaded
                .modular
                .ok_or_else(|| Error::Input(format!("{subject} has no modular data")))?;
            let m = md.check_modularity_with_tolerance(tol);
            let mut r = Report::new("modular", subject);
            r.extend(m.checks());
            if m.pass {
                let from_s = md.dims_from_s()?;
                r.set("dims_from_s", &from_s.d);
            }
            for chirality in [Chirality::Plus, Chirality::Minus] {
                for mut c in alpha_induction_checks(md.ring(), chirality) {
                    c.name = format!("{}_{chirality:?}", c.name).to_lowercase();
                    r.push(c);
                }
            }
            r.set("lambda", m.lambda);
            r
        }
        Command::Multi { n, input } => {
            let (subject, loaded) = load(input)?;
            let l = ledger(&loaded.ring, *n, tol)?;
            let mut r = Report::new("multi", subject);
            r.extend(l.entries.iter().cloned());
            r.set("n", l.n);
            r.set("mu2", l.mu2);
            r.set("mu_n", l.mu_n);
            r.set("global_index", l.i_global);
            r
        }
        Command::Oracle { group: arg, samples, m } => {
            let (name, g) = group(arg)?;
            let a = CrossedProductAlgebra::build(&g, m.unwrap_or(g.order()), cli.seed)?;
            a.report(&name, *samples, cli.seed)?
        }
        Command::Catalog { action } => {
            return Ok(Output::Text(match action {
                CatalogAction::List => {
                    let list: Vec<_> = catalog::entries()
                        .iter()
                        .map(|e| {
                            serde_json::json!({
                                "name": e.name,
                                "rank": e.ring.rank(),
                                "modular": e.modular.is_some(),
                                "notes": e.notes,
                            })
                        })
                        .collect();
                    serde_json::to_string_pretty(&list)?
                }
                CatalogAction::Export { name } => {
                    let e = catalog::by_name(name)?;
                    RingFile::from_ring(&e.ring, e.modular.as_ref()).to_json()
                }
            }));
        }
    };
    Ok(Output::Report(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            let (text, pass) = match output {
                Output::Report(mut r) => {
                    r.seed.get_or_insert(cli.seed);
                    (r.to_json(), r.pass)
                }
                Output::Text(t) => (t, true),
            };
            if writeln!(std::io::stdout(), "{text}").is_err() {
                return ExitCode::from(1);
            }
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("one or more checks failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input() { 2 } else { 1 })
        }
    }
}
