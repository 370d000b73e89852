use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use corrpoly::inequalities::{from_hrep_indexed, parse_text};
use corrpoly::io::{
    read_ext, read_ine, render_svg, write_curve_csv, write_ext, write_grid_csv, write_ine,
    write_violation_csv, Plot,
};
use corrpoly::quantum::{scan_violations, select_rows};
use corrpoly::{
    contains, enumerate_events, enumerate_vertices, hull, sample_violation_curve,
    sample_violation_grid, truth_table, verify_facet, AngleAssignment, AngleExpression,
    Configuration, DdOptions, Error, HRepresentation, InsertionOrder, ProbabilityModel, Rational,
    RowRange, SampleRange, VRepresentation,
};

const RAY_CAP_ENV: &str = "CORRPOLY_RAY_CAP";

#[derive(Parser)]
#[command(
    name = "corrpoly",
    version,
    about = "Correlation polytopes, their Boole-Bell inequalities, and quantum violations"
)]
struct Cli {
    /// Worker threads for the hull kernel and scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Number of particles.
    #[arg(short = 'n', long = "particles", requires = "settings", conflicts_with = "config")]
    particles: Option<usize>,

    /// Settings per particle.
    #[arg(short = 'm', long = "settings", requires = "particles", conflicts_with = "config")]
    settings: Option<usize>,

    /// Settings per particle as a list, e.g. "2,2,3".
    #[arg(long)]
    config: Option<String>,
}

impl ConfigArgs {
    fn get(&self) -> Result<Option<Configuration>, Error> {
        match (&self.config, self.particles, self.settings) {
            (Some(list), _, _) => list.parse().map(Some),
            (None, Some(n), Some(m)) => Configuration::uniform(n, m).map(Some),
            _ => Ok(None),
        }
    }

    fn require(&self) -> Result<Configuration, Error> {
        self.get()?.ok_or_else(|| {
            Error::InvalidArgument("a configuration is required (-n/-m or --config)".into())
        })
    }
}

#[derive(Args, Clone)]
struct OrderArgs {
    /// Constraint insertion order: lexmin, given, or random:<seed>.
    #[arg(long, default_value = "lexmin")]
    order: InsertionOrder,

    /// Suppress progress output on stderr.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Built-in probability model: singlet, ghz3 or uniform.
    #[arg(long, conflicts_with = "model_table")]
    model: Option<String>,

    /// Declarative model, e.g. "1:const(0.5);2:sin2diff(0.5)".
    #[arg(long)]
    model_table: Option<String>,

    /// Angles per particle and setting, e.g. "0,2pi/3;0,-2pi/3".
    #[arg(long, allow_hyphen_values = true)]
    angles: String,
}

impl ModelArgs {
    fn model(&self) -> Result<ProbabilityModel, Error> {
        match (&self.model, &self.model_table) {
            (Some(name), _) => corrpoly::builtin_model(name),
            (None, Some(table)) => ProbabilityModel::from_table(table),
            (None, None) => Err(Error::InvalidArgument(
                "one of --model or --model-table is required".into(),
            )),
        }
    }

    fn angles(&self) -> Result<AngleAssignment, Error> {
        AngleAssignment::parse(&self.angles)
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the events (coordinates) of a configuration in canonical order.
    Events {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Truth-table vertices of a configuration's correlation polytope.
    Vertices {
        #[command(flatten)]
        config: ConfigArgs,
        /// Write a .ext file instead of printing the table.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Option lines to append after `end`.
        #[arg(long = "option")]
        options: Vec<String>,
    },
    /// Facets of a polytope (V-representation to H-representation).
    Hull {
        #[command(flatten)]
        config: ConfigArgs,
        /// Read vertices from a .ext file instead of a configuration.
        #[arg(long = "in", conflicts_with_all = ["particles", "settings", "config"])]
        input: Option<PathBuf>,
        /// Write the .ine file here.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Vertices and rays of a polyhedron (H-representation to V-representation).
    Enum {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the .ext file here instead of printing it.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Readable inequalities of an H-representation.
    Inequalities {
        #[arg(long)]
        ine: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        /// Prefix each line with its row number.
        #[arg(long)]
        numbered: bool,
        #[arg(long)]
        json: bool,
    },
    /// Inequalities violated by a probability model at given angles.
    Violations {
        #[arg(long)]
        ine: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Report only violations larger than this.
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        /// Rows to scan: all, or MIN:MAX (1-based, inclusive).
        #[arg(long, default_value = "all")]
        rows: RowRange,
        /// Also write the report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Violation f(x) = lhs(p(x)) - rhs along one free angle variable x.
    Plot {
        #[arg(long)]
        ine: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Range of x as MIN:MAX; endpoints may use pi.
        #[arg(long, default_value = "0:pi", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long, default_value = "all")]
        rows: RowRange,
        /// Keep inequalities whose sampled maximum exceeds this.
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        /// Keep every selected inequality regardless of violation.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Violation f(x, y) on a grid over two free angle variables.
    Contour {
        #[arg(long)]
        ine: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "0:pi", allow_hyphen_values = true)]
        x_range: String,
        #[arg(long, default_value = "0:pi", allow_hyphen_values = true)]
        y_range: String,
        /// Samples per axis.
        #[arg(long, default_value_t = 41)]
        samples: usize,
        #[arg(long, default_value = "all")]
        rows: RowRange,
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        #[arg(long)]
        all: bool,
        /// Output prefix; writes <prefix>_row<N>.csv per inequality.
        #[arg(long)]
        csv: PathBuf,
        /// Also write <prefix>_row<N>.svg per inequality.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check whether an inequality is valid and a facet.
    Verify {
        /// Inequality text, e.g. "a1 - a1b1 + b1 <= 1".
        #[arg(long, allow_hyphen_values = true)]
        inequality: String,
        #[command(flatten)]
        config: ConfigArgs,
        /// Check against the generators of this .ext file instead of the truth table.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Check whether a point satisfies an H-representation.
    Contains {
        #[arg(long)]
        ine: PathBuf,
        /// Comma-separated coordinates; fractions and decimals are exact.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

/// Like `println!`, but a closed stdout (e.g. `| head`) ends the process quietly.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Capacity { .. } => 3,
        Error::Invariant(_) => 4,
        Error::InvalidArgument(_)
        | Error::InvalidConfiguration(_)
        | Error::RowRange { .. }
        | Error::EmptyInput(_) => 1,
        _ => 2,
    }
}

fn dd_options(order: &OrderArgs) -> Result<DdOptions, Error> {
    let mut options = DdOptions {
        order: order.order,
        ..DdOptions::default()
    };
    if let Ok(cap) = std::env::var(RAY_CAP_ENV) {
        options.ray_cap = cap
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{RAY_CAP_ENV} must be a count, got {cap:?}")))?;
    }
    if !order.quiet {
        let last = Mutex::new(Instant::now());
        options.progress = Some(Arc::new(move |p| {
            let mut last = last.lock().unwrap();
            if last.elapsed() >= Duration::from_secs(1) {
                *last = Instant::now();
                eprintln!(
                    "[dd] {}/{} constraints, {} rays, lineality {}",
                    p.processed, p.total, p.rays, p.lineality
                );
            }
        }));
    }
    Ok(options)
}

fn load_hrep(path: &Path, config: Option<Configuration>) -> Result<HRepresentation, Error> {
    let hrep = read_ine(path)?;
    match config {
        Some(c) => hrep.with_config(c),
        None => Ok(hrep),
    }
}

fn parse_range(s: &str, samples: usize) -> Result<SampleRange, Error> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidArgument(format!("range must be MIN:MAX, got {s:?}")))?;
    let end = |t: &str| -> Result<f64, Error> {
        let e: AngleExpression = t.parse()?;
        if e.has_x() || e.has_y() {
            return Err(Error::InvalidArgument(format!("range endpoint {t:?} is not constant")));
        }
        Ok(e.constant)
    };
    SampleRange::new(end(a)?, end(b)?, samples)
}

fn json<T: serde::Serialize>(value: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Invariant(format!("JSON encoding failed: {e}")))?;
    say!("{text}");
    Ok(())
}

fn prefixed(prefix: &Path, row: usize, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(format!("_row{row}.{ext}"));
    PathBuf::from(s)
}

fn print_vrep(vrep: &VRepresentation) {
    for g in vrep.generators() {
        let row: Vec<String> = g.homogenized().iter().map(Rational::to_string).collect();
        say!("{}", row.join(" "));
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("cannot set up {threads} threads: {e}")))?;
    }
    match cli.command {
        Command::Events { config } => {
            for event in enumerate_events(&config.require()?) {
                say!("{event}");
            }
        }
        Command::Vertices {
            config,
            output,
            options,
        } => {
            let vrep = truth_table(&config.require()?)?;
            match output {
                Some(path) => {
                    let path = write_ext(&vrep, &path, &options)?;
                    say!("{} vertices written to {}", vrep.len(), path.display());
                }
                None => print_vrep(&vrep),
            }
        }
        Command::Hull {
            config,
            input,
            output,
            order,
        } => {
            let vrep = match input {
                Some(path) => read_ext(&path)?,
                None => truth_table(&config.require()?)?,
            };
            let hrep = hull(&vrep, &dd_options(&order)?)?;
            if let Some(path) = output {
                let path = write_ine(&hrep, &path)?;
                if !order.quiet {
                    eprintln!("wrote {}", path.display());
                }
            }
            say!("{} facets", hrep.facet_count());
            let equations = hrep.linearity().len();
            if equations > 0 {
                say!("{equations} equations");
            }
        }
        Command::Enum {
            input,
            output,
            order,
        } => {
            let vrep = enumerate_vertices(&read_ine(&input)?, &dd_options(&order)?)?;
            match output {
                Some(path) => {
                    write_ext(&vrep, &path, &[])?;
                }
                None if vrep.is_empty() => {}
                None => print_vrep(&vrep),
            }
            if vrep.is_empty() {
                say!("empty polyhedron");
            } else {
                say!(
                    "{} vertices, {} rays",
                    vrep.vertices().count(),
                    vrep.rays().count()
                );
            }
        }
        Command::Inequalities {
            ine,
            config,
            numbered,
            json: as_json,
        } => {
            let config = config.require()?;
            let hrep = load_hrep(&ine, Some(config.clone()))?;
            let rows = from_hrep_indexed(&hrep, &config)?;
            if as_json {
                let list: Vec<_> = rows
                    .iter()
                    .map(|(i, q)| serde_json::json!({"row": i + 1, "inequality": q.to_text()}))
                    .collect();
                json(&list)?;
            } else {
                for (i, q) in rows {
                    if numbered {
                        say!("{}: {q}", i + 1);
                    } else {
                        say!("{q}");
                    }
                }
            }
        }
        Command::Violations {
            ine,
            config,
            model,
            threshold,
            rows,
            csv,
            json: as_json,
        } => {
            let config = config.require()?;
            let hrep = load_hrep(&ine, Some(config.clone()))?;
            let reports =
                scan_violations(&hrep, &model.model()?, &config, &model.angles()?, rows, threshold)?;
            if let Some(path) = csv {
                write_violation_csv(&reports, &path)?;
            }
            if as_json {
                json(&reports)?;
            } else {
                for r in &reports {
                    say!("{}\t{}\t{}", r.row, r.inequality, r.amount);
                }
            }
        }
        Command::Plot {
            ine,
            config,
            model,
            range,
            samples,
            rows,
            threshold,
            all,
            csv,
            svg,
        } => {
            let config = config.require()?;
            let hrep = load_hrep(&ine, Some(config.clone()))?;
            let selected = select_rows(&hrep, &config, rows)?;
            let set = sample_violation_curve(
                &selected,
                &model.model()?,
                &config,
                &model.angles()?,
                &parse_range(&range, samples)?,
                (!all).then_some(threshold),
            )?;
            write_curve_csv(&set, &csv)?;
            if let Some(path) = svg {
                render_svg(Plot::Curves(&set), &path)?;
            }
            say!("{} curves", set.curves.len());
        }
        Command::Contour {
            ine,
            config,
            model,
            x_range,
            y_range,
            samples,
            rows,
            threshold,
            all,
            csv,
            svg,
        } => {
            let config = config.require()?;
            let hrep = load_hrep(&ine, Some(config.clone()))?;
            let selected = select_rows(&hrep, &config, rows)?;
            let set = sample_violation_grid(
                &selected,
                &model.model()?,
                &config,
                &model.angles()?,
                &parse_range(&x_range, samples)?,
                &parse_range(&y_range, samples)?,
                (!all).then_some(threshold),
            )?;
            for (k, grid) in set.grids.iter().enumerate() {
                write_grid_csv(&set, k, &prefixed(&csv, grid.row, "csv"))?;
                if let Some(prefix) = &svg {
                    render_svg(Plot::Grid(&set, k), &prefixed(prefix, grid.row, "svg"))?;
                }
            }
            say!("{} grids", set.grids.len());
        }
        Command::Verify {
            inequality,
            config,
            input,
            json: as_json,
        } => {
            let config = config.require()?;
            let ineq = parse_text(&inequality, &config)?;
            let vrep = match input {
                Some(path) => read_ext(&path)?,
                None => truth_table(&config)?,
            };
            let report = verify_facet(&ineq.to_row(), &vrep)?;
            if as_json {
                json(&report)?;
            } else {
                say!("valid: {}", report.valid);
                say!("tight: {}", report.tight_count);
                say!("facet: {}", report.is_facet);
            }
        }
        Command::Contains { ine, point } => {
            let hrep = read_ine(&ine)?;
            let point = point
                .split(',')
                .map(|t| t.trim().parse())
                .collect::<Result<Vec<Rational>, _>>()?;
            say!("{}", if contains(&hrep, &point)? { "yes" } else { "no" });
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
