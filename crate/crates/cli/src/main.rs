use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use saito_core::saito::VertexModel;
use saito_core::{
    builtin_family, emit_dot, parse_tree, saito_inductive, serialize_tree, tree_from_char_exponents, AnalysisReport,
    GluingData, Numbering, ResolutionTree,
};

mod selftest;

#[derive(Parser, Debug)]
#[command(
    name = "saito",
    version,
    about = "Saito dicriticity, Saito numbers and moduli dimensions of plane curve germs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Seed for the perturbation retries of the gluing solver.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Saito dicriticity and configuration of a tree document.
    Dicriticity { input: PathBuf },
    /// Saito number of the curve.
    SaitoNumber { input: PathBuf },
    /// Per-vertex valuations of a Saito vector field.
    Profile { input: PathBuf },
    /// Exact local models glued along the tree.
    Gluing { input: PathBuf },
    /// Generic dimension of the moduli space, level by level.
    Moduli { input: PathBuf },
    /// Generic Tjurina number.
    Tjurina {
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        modularity: i64,
    },
    /// Tree document of an irreducible germ from its characteristic exponents.
    FromCharexp {
        #[arg(required = true, num_args = 2..)]
        exponents: Vec<u64>,
    },
    /// Tree document of a built-in family (cusp, double_cusp, r_cusps <r>, example1).
    Family { name: String, params: Vec<u32> },
    /// Graphviz rendering of the coloured tree.
    Dot { input: PathBuf },
    /// Runs the built-in anchor checks.
    Selftest,
}

fn read_input(path: &PathBuf) -> Result<(ResolutionTree, Numbering)> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).context("reading stdin")?;
        buf
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let source = if path.as_os_str() == "-" {
        "<stdin>".to_string()
    } else {
        path.display().to_string()
    };
    parse_tree(&text).with_context(|| format!("parsing {source}"))
}

fn tuple<T: ToString>(values: &[T]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn dot_of(tree: &ResolutionTree, n: &Numbering) -> Result<String> {
    let sol = saito_inductive(tree, n)?;
    Ok(emit_dot(tree, n, &sol.dicriticity, &sol.configuration))
}

fn gluing_table(data: &GluingData) -> String {
    let mut out = String::new();
    for (v, model) in data.models.iter().enumerate() {
        match model {
            VertexModel::Dicritical { tangency_count } => {
                out.push_str(&format!("{v}: dicritical, tangency {tangency_count}\n"));
            }
            VertexModel::NonDicritical {
                self_intersection,
                free_weights,
                edge_weights,
            } => {
                let free: Vec<String> = free_weights.iter().map(saito_core::saito::ratio_string).collect();
                let corners: Vec<String> = edge_weights
                    .iter()
                    .map(|(w, l)| format!("{w}:{}", saito_core::saito::ratio_string(l)))
                    .collect();
                out.push_str(&format!(
                    "{v}: invariant, indices sum to {self_intersection}, free [{}], corners [{}]\n",
                    free.join(" "),
                    corners.join(" ")
                ));
            }
        }
    }
    out.push_str(&format!("attempt: {}\n", data.attempt));
    out
}

fn analysis(command: &Command, format: Format, seed: u64) -> Result<String> {
    let (Command::Dicriticity { input }
    | Command::SaitoNumber { input }
    | Command::Profile { input }
    | Command::Gluing { input }
    | Command::Moduli { input }
    | Command::Tjurina { input, .. }
    | Command::Dot { input }) = command
    else {
        unreachable!("document commands only");
    };
    let (tree, n) = read_input(input)?;
    if format == Format::Dot || matches!(command, Command::Dot { .. }) {
        if format == Format::Json {
            bail!("the dot command only writes Graphviz output");
        }
        return dot_of(&tree, &n);
    }
    let mut report = AnalysisReport::compute(&tree, &n)?;
    match command {
        Command::Moduli { .. } => report = report.with_moduli(&tree, &n, None)?,
        Command::Tjurina { modularity, .. } => report = report.with_moduli(&tree, &n, Some(*modularity))?,
        Command::Gluing { .. } => report = report.with_gluing(&tree, &n, seed)?,
        _ => {}
    }
    if format == Format::Json {
        return Ok(report.to_json() + "\n");
    }
    let text = match command {
        Command::Dicriticity { .. } => format!(
            "{}Δ = {}\nε = {}\n",
            report.render_table(),
            tuple(&report.dicriticity),
            tuple(&report.configuration)
        ),
        Command::SaitoNumber { .. } => format!("{}\n", report.saito_number),
        Command::Profile { .. } => format!(
            "{}Saito valuations = {}\n",
            report.render_table(),
            tuple(&report.saito_valuations)
        ),
        Command::Gluing { .. } => {
            let block = report.gluing.as_ref().expect("gluing requested");
            gluing_table(&block.to_data().map_err(anyhow::Error::msg)?)
        }
        Command::Moduli { .. } => {
            let moduli = report.moduli.as_ref().expect("moduli requested");
            format!(
                "levels: {}\ntotal dimension: {}\n",
                tuple(&moduli.per_level()),
                moduli.total
            )
        }
        Command::Tjurina { .. } => {
            let tj = report
                .moduli
                .as_ref()
                .and_then(|m| m.tjurina.as_ref())
                .expect("tjurina requested");
            format!("{}\n", tj.tau)
        }
        _ => unreachable!("handled above"),
    };
    Ok(text)
}

fn run(cli: Cli) -> Result<(String, bool)> {
    match &cli.command {
        Command::FromCharexp { exponents } => {
            let (tree, n) = tree_from_char_exponents(exponents[0], &exponents[1..])?;
            Ok((serialize_tree(&tree, &n), true))
        }
        Command::Family { name, params } => {
            let (tree, n) = builtin_family(name, params)?;
            Ok((serialize_tree(&tree, &n), true))
        }
        Command::Selftest => Ok(selftest::run()),
        other => Ok((analysis(other, cli.format, cli.seed)?, true)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((text, ok)) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
