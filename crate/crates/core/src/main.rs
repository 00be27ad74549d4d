use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use reflexive_ma::duality::build_reflexive;
use reflexive_ma::error::{Error, Result};
use reflexive_ma::fixtures;
use reflexive_ma::io::{
    emit_report, parse_heights, parse_vertex_file, run_classification, Format, PolytopeInput,
    RunConfig,
};
use reflexive_ma::lattice::LatticeVector;
use reflexive_ma::transport::PivotRule;

#[derive(Parser)]
#[command(
    name = "reflexive-ma",
    version,
    about = "Stability screens and transport certificates for reflexive polytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one polytope file or embedded fixture.
    Check(CheckArgs),
    /// Classify every block of a database file, or the embedded polygons.
    Classify(ClassifyArgs),
    /// List or dump the embedded fixtures.
    Fixtures(FixtureArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Vertex file.
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    polytope: Option<PathBuf>,
    /// Embedded fixture id.
    #[arg(long)]
    fixture: Option<String>,
    /// Height file with lines `c_1 ... c_{d+1} h`.
    #[arg(long)]
    height: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Database of vertex blocks.
    #[arg(
        long,
        conflicts_with = "embedded",
        required_unless_present = "embedded"
    )]
    db: Option<PathBuf>,
    /// Classify the 16 embedded reflexive polygons.
    #[arg(long)]
    embedded: bool,
    /// Keep only polytopes of this ambient dimension.
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
    dim: Option<u8>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FixtureArgs {
    /// Print fixture ids and descriptions.
    #[arg(long)]
    list: bool,
    /// Print every fixture as a vertex file.
    #[arg(long)]
    dump: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PivotArg {
    Bland,
    Best,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// Run the discrete transport certificate.
    #[arg(long)]
    transport: bool,
    /// Run the singular-set diagnostics.
    #[arg(long)]
    singular: bool,
    /// Refinement level of the transport samples.
    #[arg(short = 'L', default_value_t = 1)]
    level: u32,
    /// Mesh resolution of the singular diagnostics (a power of two).
    #[arg(short = 'K', default_value_t = 8)]
    mesh: usize,
    /// Probe resolution of the pushforward residual.
    #[arg(short = 'R', default_value_t = 16)]
    probes: usize,
    #[arg(long, value_enum, default_value = "bland")]
    pivot: PivotArg,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Record wall-clock times per polytope.
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn config(&self, inputs: Vec<PathBuf>, dim: Option<usize>) -> RunConfig {
        RunConfig {
            inputs,
            dim,
            level: self.level,
            mesh: self.mesh,
            probes: self.probes,
            pivot: match self.pivot {
                PivotArg::Bland => PivotRule::Bland,
                PivotArg::Best => PivotRule::Best,
            },
            transport: self.transport,
            singular: self.singular,
            format: match self.format {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            },
            workers: self.workers,
            seed: self.seed,
            timing: self.timing,
        }
    }
}

fn write_output(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_heights(input: &mut PolytopeInput, path: &PathBuf) -> Result<()> {
    let vs: Vec<LatticeVector> = input
        .vertices
        .iter()
        .map(|v| LatticeVector::from_i64(v))
        .collect();
    let p = build_reflexive(&vs)?;
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    input.heights = Some(parse_heights(&text, &p)?);
    Ok(())
}

fn check(args: CheckArgs) -> Result<bool> {
    let (mut inputs, paths) = match (&args.polytope, &args.fixture) {
        (Some(path), _) => (parse_vertex_file(path)?, vec![path.clone()]),
        (None, Some(id)) => {
            let f = fixtures::by_id(id)
                .ok_or_else(|| Error::Domain(format!("unknown fixture {id}")))?;
            (vec![PolytopeInput::from_fixture(&f)], Vec::new())
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    if let Some(h) = &args.height {
        if inputs.len() != 1 {
            return Err(Error::Domain(
                "a height file needs exactly one polytope".into(),
            ));
        }
        read_heights(&mut inputs[0], h)?;
    }
    let config = args.run.config(paths, None);
    let report = run_classification(&config, inputs)?;
    write_output(&emit_report(&report, config.format)?, &args.run.out)?;
    Ok(report.records.iter().all(|r| r.error.is_none()))
}

fn classify(args: ClassifyArgs) -> Result<bool> {
    let dim = args.dim.map(usize::from);
    let (inputs, paths) = match &args.db {
        Some(path) => (parse_vertex_file(path)?, vec![path.clone()]),
        None => (
            fixtures::reflexive_polygons()
                .iter()
                .map(PolytopeInput::from_fixture)
                .collect(),
            Vec::new(),
        ),
    };
    let config = args.run.config(paths, dim);
    let report = run_classification(&config, inputs)?;
    write_output(&emit_report(&report, config.format)?, &args.run.out)?;
    let a = &report.aggregates;
    eprintln!(
        "total {}, strictly semistable {}, unstable {}, Li-admissible {}, both {}, failed {}",
        a.total, a.strictly_semistable, a.unstable, a.li_admissible, a.sss_and_li, a.failed
    );
    Ok(true)
}

fn list_fixtures(args: FixtureArgs) -> Result<bool> {
    let mut out = String::new();
    for f in fixtures::all() {
        if args.list {
            out.push_str(&format!("{}\t{}\n", f.id, f.description));
            continue;
        }
        out.push_str(&format!("# id: {}\n", f.id));
        for (m, h) in &f.heights {
            let coords: Vec<String> = m.iter().map(i64::to_string).collect();
            out.push_str(&format!("# height: {} {h}\n", coords.join(" ")));
        }
        out.push_str(&format!("{} {}\n", f.vertices.len(), f.dim()));
        for v in &f.vertices {
            let row: Vec<String> = v.iter().map(i64::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out.push('\n');
    }
    print!("{out}");
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Check(a) => check(a),
        Command::Classify(a) => classify(a),
        Command::Fixtures(a) => list_fixtures(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
