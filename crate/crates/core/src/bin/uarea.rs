use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use uarea::areamod::AreaModule;
use uarea::expr::{self, parse_area, parse_poly, parse_val};
use uarea::poly::{fu_f, poly_p, poly_q, Coords};
use uarea::table::{self, Format, StructureTable, TableKind};
use uarea::valalg::{fourier, ValAlgebra};
use uarea::verify;
use uarea::Error;

/// Exact computations with unitarily invariant valuations and area measures.
#[derive(Parser)]
#[command(name = "uarea", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    TTable,
    STable,
    Dims,
    Basis,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoordsArg {
    St,
    Tu,
}

impl From<CoordsArg> for Coords {
    fn from(c: CoordsArg) -> Coords {
        match c {
            CoordsArg::St => Coords::St,
            CoordsArg::Tu => Coords::Tu,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleTable {
    TTable,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiffTarget {
    Module,
}

type Dim = u32;

fn dim_parser() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(1..)
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the identity checks for 1 <= n <= N.
    Verify {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        /// Smallest n to check.
        #[arg(long, value_parser = dim_parser(), default_value_t = 1)]
        n_min: Dim,
        /// Run only checks whose name equals or contains this.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock durations (makes output run-dependent).
        #[arg(long)]
        timings: bool,
        /// List the available checks and exit.
        #[arg(long)]
        list: bool,
    },
    /// Export a table.
    Export {
        #[arg(value_enum)]
        kind: ExportKind,
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute a table with the differential-forms oracle.
    Oracle {
        #[arg(value_enum)]
        table: OracleTable,
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        /// Compare with the module's table instead of printing it.
        #[arg(long, value_enum)]
        diff_against: Option<DiffTarget>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an expression.
    Eval {
        expr: String,
        #[arg(long, value_parser = dim_parser())]
        n: Option<Dim>,
    },
    /// Product of two valuations.
    Mul {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        a: String,
        b: String,
    },
    /// Convolution of two valuations.
    Conv {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        a: String,
        b: String,
    },
    /// Convolution of a valuation with an area measure.
    Act {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        #[arg(required_unless_present = "val", conflicts_with = "val")]
        phi: Option<String>,
        #[arg(required_unless_present = "measure", conflicts_with = "measure")]
        m: Option<String>,
        #[arg(long)]
        val: Option<String>,
        #[arg(long)]
        measure: Option<String>,
    },
    /// Globalization of an area measure.
    Glob {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        m: String,
    },
    /// First variation of a valuation.
    Delta {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        phi: String,
    },
    /// Fourier transform of a valuation.
    Fourier {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        phi: String,
    },
    /// b(p) + g(q) for valuations p and q.
    Bg {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        p: String,
        #[arg(default_value = "0")]
        q: String,
    },
    /// A(p, q) for p in R[t,u] and q in R[u].
    Aop {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        p: String,
        #[arg(default_value = "0")]
        q: String,
    },
    /// Delta/N expansion of an area measure and whether it is angular.
    Angular {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        m: String,
    },
    /// Whether an area measure is a first variation.
    Centroid {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        m: String,
    },
    /// Compare ker h with the submodule I_n degree by degree.
    Present {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
    },
    /// A polynomial family member (fk, pk, qk) or a polynomial expression.
    Poly {
        what: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value_t = CoordsArg::St)]
        coords: CoordsArg,
    },
    /// Canonical polynomial representing a valuation.
    Topoly {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        phi: String,
        #[arg(long, value_enum, default_value_t = CoordsArg::St)]
        coords: CoordsArg,
    },
    /// Valuation of a polynomial in s and t.
    Frompoly {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        p: String,
    },
    /// Value of a top-degree valuation on the unit ball.
    Evalball {
        #[arg(long, value_parser = dim_parser())]
        n: Dim,
        phi: String,
    },
}

enum Failure {
    Usage(Error),
    Runtime(Error),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => Failure::Runtime(e),
            other => Failure::Usage(other),
        }
    }
}

fn format(f: FormatArg) -> Format {
    match f {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Verify { n, n_min, filter, format, out, timings, list } => {
            if list {
                for c in verify::CHECKS {
                    println!("{:<20} {}", c.name, c.summary);
                }
                return Ok(());
            }
            let checks = verify::select(filter.as_deref())?;
            let report = verify::run(&checks, n_min, n, timings)?;
            let text = match format {
                ReportFormat::Text => report.to_string(),
                ReportFormat::Json => serde_json::to_string_pretty(&report).map_err(Error::from)? + "\n",
            };
            table::write_output(out.as_deref(), &text)?;
            if !report.passed {
                return Err(Failure::Check);
            }
        }
        Cmd::Export { kind, n, format: f, out } => {
            let kind = match kind {
                ExportKind::TTable => TableKind::TTable,
                ExportKind::STable => TableKind::STable,
                ExportKind::Dims => TableKind::Dims,
                ExportKind::Basis => TableKind::Basis,
            };
            let text = table::render(kind, n, format(f))?;
            table::write_output(out.as_deref(), &text).map_err(Failure::Runtime)?;
        }
        Cmd::Oracle { table: OracleTable::TTable, n, diff_against, format: f, out } => {
            let oracle = StructureTable::from_oracle(n)?;
            if diff_against.is_some() {
                let module = StructureTable::compute(n, table::Generator::THat)?;
                let diff = oracle.diff(&module);
                let mut text = String::new();
                for (from, to, a, b) in &diff {
                    text.push_str(&format!("{from} -> {to}: oracle {a}, module {b}\n"));
                }
                text.push_str(&format!("{} differing entries out of {}\n", diff.len(), module.entries.len()));
                table::write_output(out.as_deref(), &text).map_err(Failure::Runtime)?;
                if !diff.is_empty() {
                    return Err(Failure::Check);
                }
            } else {
                let text = match format(f) {
                    Format::Json => oracle.to_json()?,
                    Format::Csv => oracle.to_csv()?,
                };
                table::write_output(out.as_deref(), &text).map_err(Failure::Runtime)?;
            }
        }
        Cmd::Eval { expr, n } => println!("{}", expr::evaluate(&expr, n)?),
        Cmd::Mul { n, a, b } => {
            let alg = ValAlgebra::get(n)?;
            println!("{}", alg.product(&parse_val(&a, n)?, &parse_val(&b, n)?)?);
        }
        Cmd::Conv { n, a, b } => {
            let alg = ValAlgebra::get(n)?;
            println!("{}", alg.convolution(&parse_val(&a, n)?, &parse_val(&b, n)?)?);
        }
        Cmd::Act { n, phi, m, val, measure } => {
            let module = AreaModule::get(n)?;
            let phi = val.or(phi).expect("clap enforces one of them");
            let m = measure.or(m).expect("clap enforces one of them");
            println!("{}", module.act(&parse_val(&phi, n)?, &parse_area(&m, n)?)?);
        }
        Cmd::Glob { n, m } => println!("{}", AreaModule::get(n)?.glob(&parse_area(&m, n)?)?),
        Cmd::Delta { n, phi } => println!("{}", AreaModule::get(n)?.delta_map(&parse_val(&phi, n)?)?),
        Cmd::Fourier { n, phi } => println!("{}", fourier(&parse_val(&phi, n)?)),
        Cmd::Bg { n, p, q } => {
            let module = AreaModule::get(n)?;
            let b = module.frak_b(&parse_val(&p, n)?)?;
            let g = module.frak_g(&parse_val(&q, n)?)?;
            println!("{}", b.try_add(&g)?);
        }
        Cmd::Aop { n, p, q } => {
            let module = AreaModule::get(n)?;
            println!("{}", module.a_operator(&parse_poly(&p)?, &parse_poly(&q)?)?);
        }
        Cmd::Angular { n, m } => {
            let module = AreaModule::get(n)?;
            let d = module.to_delta_basis(&parse_area(&m, n)?)?;
            println!("{d}");
            println!("angular: {}", !d.has_null_part());
        }
        Cmd::Centroid { n, m } => {
            let module = AreaModule::get(n)?;
            println!("{}", module.in_centroid_kernel(&parse_area(&m, n)?)?);
        }
        Cmd::Present { n } => {
            let report = AreaModule::get(n)?.presentation_check();
            for d in &report.degrees {
                println!(
                    "d = {:>2}: dim ker h = {}, dim I = {}, joint rank = {}, {}",
                    d.d,
                    d.kernel_dim,
                    d.ideal_dim,
                    d.joint_rank,
                    if d.equal { "equal" } else { "DIFFERENT" }
                );
            }
            if !report.passed() {
                return Err(Failure::Check);
            }
        }
        Cmd::Poly { what, k, coords } => {
            let coords = Coords::from(coords);
            let family = match what.as_str() {
                "fk" | "f" => Some(fu_f as fn(u32, Coords) -> _),
                "pk" | "p" => Some(poly_p as fn(u32, Coords) -> _),
                "qk" | "q" => Some(poly_q as fn(u32, Coords) -> _),
                _ => None,
            };
            let p = match (family, k) {
                (Some(_), None) => return Err(Failure::Usage(Error::Type(format!("{what} needs --k")))),
                (Some(_), Some(0)) if what.starts_with('f') => {
                    return Err(Failure::Usage(Error::Type("f_k needs k >= 1".into())))
                }
                (Some(f), Some(k)) => f(k, coords),
                (None, _) => parse_poly(&what)?.convert(coords),
            };
            println!("{p}");
        }
        Cmd::Topoly { n, phi, coords } => {
            let alg = ValAlgebra::get(n)?;
            println!("{}", alg.to_poly(&parse_val(&phi, n)?)?.convert(coords.into()));
        }
        Cmd::Frompoly { n, p } => println!("{}", ValAlgebra::get(n)?.from_poly(&parse_poly(&p)?)),
        Cmd::Evalball { n, phi } => println!("{}", ValAlgebra::get(n)?.eval_ball_top(&parse_val(&phi, n)?)?),
    }
    Ok(())
}
