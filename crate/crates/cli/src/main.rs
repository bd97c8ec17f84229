use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use circle_lift::format::{parse_map, parse_partition};
use circle_lift::markov::{covering_graph, excluded_periods, is_markov};
use circle_lift::periodic::{least_period, orbit_of, periodic_window, periods_set, solve_periodic};
use circle_lift::rational::{parse_rational, to_f64};
use circle_lift::rotation::{rotation_interval, DEFAULT_DENOMINATOR_BOUND};
use circle_lift::theorem::{
    fuzz_theorem_d1, verify_example_negative, verify_example_zero, verify_theorem_d1, verify_theorem_dge2,
    VerificationReport, DEFAULT_PERIOD_MAX,
};
use circle_lift::{Interval, PLLift, Rational, Status};

/// Exact dynamics of piecewise-linear circle map liftings.
#[derive(Parser)]
#[command(name = "circle-lift", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F at a rational point.
    Eval { map: PathBuf, x: String },
    /// Rotation interval of a degree-one lifting.
    RotationInterval {
        map: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DENOMINATOR_BOUND)]
        den_bound: u64,
    },
    /// Least periods of true periodic points up to --max.
    Periods {
        map: PathBuf,
        #[arg(long)]
        max: usize,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Solutions of F^n(x) = x and the orbits of least period n.
    Orbits {
        map: PathBuf,
        #[arg(long)]
        period: usize,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Covering graph of a partition.
    Markov {
        map: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        /// Largest period checked for exclusion.
        #[arg(long, default_value_t = DEFAULT_PERIOD_MAX)]
        max: usize,
    },
    /// Run a verifier.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
        /// Print a key=value block instead of the text report.
        #[arg(long, global = true)]
        kv: bool,
    },
    /// Check the degree-one theorem on seeded maps with planted large orbits.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        max_period: usize,
        #[arg(long, default_value_t = DEFAULT_PERIOD_MAX)]
        max: usize,
    },
    /// Graph and cobweb data as numeric columns.
    PlotData {
        map: PathBuf,
        #[arg(long, default_value_t = 20)]
        iterates: usize,
        /// Starting point of the cobweb; defaults to the middle of the fundamental domain.
        #[arg(long)]
        start: Option<String>,
        /// Number of fundamental domains drawn.
        #[arg(long, default_value_t = 1)]
        domains: usize,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// The large orbit theorem on a map file (degree 1 or at least 2).
    Theorem {
        map: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PERIOD_MAX)]
        max: usize,
        #[command(flatten)]
        window: WindowArg,
    },
    /// The odd lifting of degree -d.
    ExampleNeg {
        #[arg(long)]
        d: i64,
        #[arg(long, default_value_t = 6)]
        max: usize,
    },
    /// The degree-zero lifting built from odd p.
    ExampleZero {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        max: Option<usize>,
    },
}

#[derive(Args)]
struct WindowArg {
    /// Search window `a b`.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    window: Option<Vec<String>>,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Verification,
}

type CliResult = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_map(path: &Path) -> Result<PLLift, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_map(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn rational(text: &str) -> Result<Rational, Failure> {
    parse_rational(text).ok_or_else(|| usage(format!("not a rational number: {text}")))
}

impl WindowArg {
    fn resolve(&self, f: &PLLift) -> Result<Interval, Failure> {
        match &self.window {
            Some(w) => {
                let (a, b) = (rational(&w[0])?, rational(&w[1])?);
                if a > b {
                    return Err(usage("window needs a <= b"));
                }
                Ok(Interval::new(a, b))
            }
            None => periodic_window(f)
                .ok_or_else(|| usage(format!("degree {} needs an explicit --window", f.degree()))),
        }
    }
}

fn set_text(items: impl IntoIterator<Item = usize>) -> String {
    let v: Vec<String> = items.into_iter().map(|n| n.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn emit(report: &VerificationReport, kv: bool) -> CliResult {
    if kv {
        print!("{}", report.to_key_values());
    } else {
        print!("{report}");
    }
    match report.overall() {
        Status::Fail => Err(Failure::Verification),
        Status::Pass | Status::Inconclusive => Ok(()),
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Eval { map, x } => {
            let f = read_map(&map)?;
            println!("{}", f.eval(&rational(&x)?));
        }
        Command::RotationInterval { map, den_bound } => {
            let f = read_map(&map)?;
            if den_bound == 0 {
                return Err(usage("--den-bound must be positive"));
            }
            println!("{}", rotation_interval(&f, den_bound).map_err(usage)?);
        }
        Command::Periods { map, max, window } => {
            let f = read_map(&map)?;
            let w = window.resolve(&f)?;
            println!("{}", set_text(periods_set(&f, max, Some(&w)).map_err(usage)?));
        }
        Command::Orbits { map, period, window } => {
            let f = read_map(&map)?;
            let w = window.resolve(&f)?;
            if period == 0 {
                return Err(usage("--period must be positive"));
            }
            let sols = solve_periodic(&f, period, 0, Some(&w)).map_err(usage)?;
            println!("{sols}");
            for s in &sols.segments {
                println!("segment {s}");
            }
            let mut seen = BTreeSet::new();
            for x in &sols.isolated {
                if seen.contains(x) || least_period(&f, x, period) != period {
                    continue;
                }
                let orbit = orbit_of(&f, x, period).map_err(usage)?;
                seen.extend(orbit.points.iter().cloned());
                println!("orbit {orbit}");
            }
        }
        Command::Markov { map, partition, max } => {
            let f = read_map(&map)?;
            let text = fs::read_to_string(&partition).map_err(|e| usage(format!("{}: {e}", partition.display())))?;
            let p = parse_partition(&text).map_err(|e| usage(format!("{}: {e}", partition.display())))?;
            let g = covering_graph(&f, &p);
            print!("{g}");
            println!("{} arrows", g.arrow_count());
            let markov = is_markov(&f, &p);
            println!("markov: {markov}");
            if markov {
                println!("excluded: {}", set_text(excluded_periods(&g, max)));
            }
        }
        Command::Verify { target, kv } => {
            let report = match target {
                VerifyTarget::Theorem { map, max, window } => {
                    let f = read_map(&map)?;
                    match f.degree() {
                        1 => verify_theorem_d1(&f, max),
                        d if d >= 2 => {
                            let w = window.resolve(&f)?;
                            verify_theorem_dge2(&f, max, Some(&w))
                        }
                        d => return Err(usage(format!("the theorem needs degree 1 or at least 2, got {d}"))),
                    }
                }
                VerifyTarget::ExampleNeg { d, max } => verify_example_negative(d, max),
                VerifyTarget::ExampleZero { p, max } => {
                    verify_example_zero(p, max.unwrap_or(DEFAULT_PERIOD_MAX.max(2 * p + 2)))
                }
            }
            .map_err(usage)?;
            emit(&report, kv)?;
        }
        Command::Fuzz {
            seed,
            count,
            max_period,
            max,
        } => {
            if max_period < 2 {
                return Err(usage("--max-period must be at least 2"));
            }
            let mut failed = 0;
            let mut counts = [0usize; 3];
            for (s, r) in fuzz_theorem_d1(seed, count, max_period, max) {
                let (status, detail) = match r {
                    Ok(r) => (r.overall(), r.get("large orbit").map(|c| c.witness.clone()).unwrap_or_default()),
                    Err(e) => (Status::Fail, e.to_string()),
                };
                counts[status as usize] += 1;
                if status == Status::Fail {
                    failed += 1;
                }
                println!("seed {s}: {status}: {detail}");
            }
            println!("pass {}, fail {}, inconclusive {}", counts[0], counts[1], counts[2]);
            if failed > 0 {
                return Err(Failure::Verification);
            }
        }
        Command::PlotData {
            map,
            iterates,
            start,
            domains,
        } => {
            let f = read_map(&map)?;
            let domain = f.domain();
            let mut xs: Vec<Rational> = Vec::new();
            for k in 0..domains.max(1) {
                let shift = Rational::from_integer((k as i64).into());
                xs.extend(f.anchors().iter().map(|(x, _)| x + &shift));
            }
            xs.dedup();
            println!("# graph: x F(x)");
            for x in &xs {
                println!("{} {}", to_f64(x), to_f64(&f.eval(x)));
            }
            let x0 = match start {
                Some(s) => rational(&s)?,
                None => domain.midpoint(),
            };
            println!();
            println!("# cobweb: x y");
            let mut x = x0;
            println!("{} {}", to_f64(&x), to_f64(&x));
            for _ in 0..iterates {
                let y = f.eval(&x);
                println!("{} {}", to_f64(&x), to_f64(&y));
                println!("{} {}", to_f64(&y), to_f64(&y));
                x = y;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
