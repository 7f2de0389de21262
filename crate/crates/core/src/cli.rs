//! The `sigmad` command line.
//!
//! Results go to stdout as `key value` lines, diagnostics to stderr. Exit
//! codes: 0 success or YES, 1 NO or a failed check, 2 bad input or usage,
//! 3 overflow or an exhausted node budget.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::instances::{
    gen_random_doc, gen_yes_3partition, read_3partition, read_instance, read_partition,
    read_reduced, read_schedule, write_3partition, write_instance_doc, write_partition,
    write_reduced, write_schedule, RandomSpec,
};
use crate::metrics::{evaluate, ideal_lower_bound_for, Objective};
use crate::reductions::{
    build_reduction3_with, build_reduction4, build_witness, check_partition, decode,
    normalize_3partition, Breakdown, Constants, DecodeOutcome, Reduction3Options, Variant,
};
use crate::solvers::{solve, MethodChoice, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sigmad",
    version,
    about = "Consensus schedules under the total deviation rule"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Deviation of a schedule.
    Eval {
        instance: PathBuf,
        schedule: PathBuf,
        /// Weight each task's deviation by its length.
        #[arg(long)]
        weighted: bool,
        /// Also print per-voter and per-task totals.
        #[arg(long)]
        verbose: bool,
    },
    /// Optimal schedule, or a yes/no answer with --decision.
    Solve(SolveArgs),
    /// Sum of per-task median costs, a lower bound on any schedule.
    Bound {
        instance: PathBuf,
        #[arg(long)]
        weighted: bool,
    },
    /// Write generated instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Build the witness schedule of a reduced instance from a partition.
    Witness {
        reduced: PathBuf,
        partition: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Read a 3-Partition solution off a schedule of a reduced instance.
    Decode { reduced: PathBuf, schedule: PathBuf },
}

#[derive(Debug, Args)]
struct SolveArgs {
    instance: PathBuf,
    /// auto, brute, bnb, assignment or two-voter.
    #[arg(long, default_value = "auto")]
    method: MethodChoice,
    #[arg(long)]
    weighted: bool,
    /// Answer whether some schedule has objective at most Z.
    #[arg(long, value_name = "Z")]
    decision: Option<i64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value_t = 10_000_000)]
    node_budget: u64,
    #[arg(long, default_value_t = 10)]
    brute_cap: usize,
    /// Write the optimal schedule here.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Uniform random lengths and preferences from a seed.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        v: usize,
        #[arg(long, default_value_t = 1)]
        pmax: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Four-voter reduced instance of a 3-Partition file.
    Reduction4 {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Three-voter reduced instance of a 3-Partition file.
    Reduction3 {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Reject inputs that need normalizing or break B/4 < x < B/2.
        #[arg(long)]
        strict: bool,
    },
    /// Even q, B >= 8 and 4 | B, preserving the answer.
    Normalize {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Random 3-Partition yes-instance plus its solution.
    Yes3p {
        #[arg(long)]
        q: usize,
        #[arg(long = "b")]
        b: i64,
        /// Keep every integer strictly between B/4 and B/2.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
        /// Where to write the solution.
        #[arg(long)]
        partition_out: Option<PathBuf>,
    },
}

/// A failure together with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_resource() {
            EXIT_RESOURCE
        } else {
            EXIT_INPUT
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<i32, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{key} {value}");
    }

    fn note(&mut self, msg: impl std::fmt::Display) {
        let _ = writeln!(self.err, "{msg}");
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn with_path<T>(path: &Path, r: crate::error::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return if code == 0 { EXIT_OK } else { EXIT_INPUT };
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(f) => {
            io.note(format_args!("error: {}", f.message));
            f.code
        }
    }
}

fn dispatch(cmd: Command, io: &mut Io) -> Outcome {
    match cmd {
        Command::Eval {
            instance,
            schedule,
            weighted,
            verbose,
        } => cmd_eval(&instance, &schedule, weighted, verbose, io),
        Command::Solve(args) => cmd_solve(&args, io),
        Command::Bound { instance, weighted } => cmd_bound(&instance, weighted, io),
        Command::Gen(g) => cmd_gen(g, io),
        Command::Witness {
            reduced,
            partition,
            out,
        } => cmd_witness(&reduced, &partition, out.as_deref(), io),
        Command::Decode { reduced, schedule } => cmd_decode(&reduced, &schedule, io),
    }
}

fn objective_key(obj: Objective) -> &'static str {
    match obj {
        Objective::Deviation => "deviation",
        Objective::Weighted => "weighted_deviation",
    }
}

fn cmd_eval(
    inst_path: &Path,
    sched_path: &Path,
    weighted: bool,
    verbose: bool,
    io: &mut Io,
) -> Outcome {
    let inst = with_path(inst_path, read_instance(&read(inst_path)?))?;
    let sched = with_path(sched_path, read_schedule(&read(sched_path)?))?;
    let obj = Objective::from_flag(weighted);
    let bd = evaluate(&inst, &sched, obj)?;
    io.kv(objective_key(obj), bd.total);
    if verbose {
        for (k, x) in bd.per_voter.iter().flatten().enumerate() {
            io.kv(&format!("voter {}", k + 1), x);
        }
        for (i, x) in bd.per_task.iter().flatten().enumerate() {
            io.kv(&format!("task {}", i + 1), x);
        }
    }
    Ok(EXIT_OK)
}

fn cmd_solve(args: &SolveArgs, io: &mut Io) -> Outcome {
    let inst = with_path(&args.instance, read_instance(&read(&args.instance)?))?;
    let obj = Objective::from_flag(args.weighted);
    let config = SolverConfig {
        brute_cap: args.brute_cap,
        node_budget: args.node_budget,
        threads: args.threads.max(1),
    };
    let res = match solve(&inst, args.method, obj, &config) {
        Ok(r) => r,
        Err(Error::BudgetExceeded {
            budget,
            incumbent: Some(best),
        }) => {
            io.note(format_args!(
                "node budget {budget} exhausted; best schedule found has objective {} (not proven optimal): {}",
                best.objective,
                best.schedule.ids().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
            ));
            return Err(Error::BudgetExceeded {
                budget,
                incumbent: Some(best),
            }
            .into());
        }
        Err(e) => return Err(e.into()),
    };
    io.kv("method", res.method);
    io.kv(objective_key(obj), res.objective);
    io.kv(
        "order",
        res.schedule
            .ids()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );
    if let Some(nodes) = res.nodes_explored {
        io.kv("nodes", nodes);
    }
    if let Some(path) = &args.out {
        write(path, &write_schedule(&res.schedule))?;
    }
    if let Some(z) = args.decision {
        let yes = res.objective <= z;
        io.kv("decision", if yes { "YES" } else { "NO" });
        return Ok(if yes { EXIT_OK } else { EXIT_NO });
    }
    Ok(EXIT_OK)
}

fn cmd_bound(path: &Path, weighted: bool, io: &mut Io) -> Outcome {
    let inst = with_path(path, read_instance(&read(path)?))?;
    io.kv(
        "lower_bound",
        ideal_lower_bound_for(&inst, Objective::from_flag(weighted))?,
    );
    Ok(EXIT_OK)
}

fn print_reduction(red: &crate::reductions::ReducedInstance, io: &mut Io) {
    io.kv("variant", red.variant());
    io.kv("n", red.instance().n());
    io.kv("v", red.instance().v());
    match red.constants() {
        Constants::FourVoter { q, b } => {
            io.kv("q", q);
            io.kv("B", b);
        }
        Constants::ThreeVoter(c) => {
            io.kv("q", c.q);
            io.kv("B", c.b);
            io.kv("K", c.k);
            io.kv("B'", c.b_prime);
            io.kv("O", c.o);
            io.kv("O'", c.o_prime);
        }
    }
    match red.breakdown() {
        Breakdown::FourVoter(bd) => io.kv("closed_form_z", bd.closed_form_z()),
        Breakdown::ThreeVoter(bd) => {
            io.kv("D_NF", bd.d_nf);
            io.kv("slack", bd.slack);
        }
    }
    io.kv("z", red.z());
    io.kv("strict_bounds", red.strict_bounds());
    for w in red.warnings() {
        io.note(format_args!("warning: {w}"));
    }
}

fn cmd_gen(cmd: GenCommand, io: &mut Io) -> Outcome {
    match cmd {
        GenCommand::Random {
            n,
            v,
            pmax,
            seed,
            out,
        } => {
            let doc = gen_random_doc(&RandomSpec { n, v, pmax, seed })?;
            write(&out, &write_instance_doc(&doc))?;
            io.kv("n", n);
            io.kv("v", v);
            io.kv("seed", seed);
        }
        GenCommand::Reduction4 { input, out } => {
            let tp = with_path(&input, read_3partition(&read(&input)?))?;
            let red = build_reduction4(&tp)?;
            write(&out, &write_reduced(&red))?;
            print_reduction(&red, io);
        }
        GenCommand::Reduction3 { input, out, strict } => {
            let mut tp = with_path(&input, read_3partition(&read(&input)?))?;
            if !tp.is_normalized() && !strict {
                tp = normalize_3partition(&tp)?;
                io.note(format_args!(
                    "note: input normalized to q = {}, B = {}",
                    tp.q(),
                    tp.b()
                ));
            }
            if !tp.strict_bounds() && !strict {
                io.note(
                    "note: some integers are not strictly between B/4 and B/2; building anyway",
                );
            }
            let red = build_reduction3_with(
                &tp,
                Reduction3Options {
                    allow_weak_bounds: !strict,
                },
            )?;
            write(&out, &write_reduced(&red))?;
            print_reduction(&red, io);
        }
        GenCommand::Normalize { input, out } => {
            let tp = with_path(&input, read_3partition(&read(&input)?))?;
            let norm = normalize_3partition(&tp)?;
            write(&out, &write_3partition(&norm))?;
            io.kv("q", norm.q());
            io.kv("B", norm.b());
        }
        GenCommand::Yes3p {
            q,
            b,
            strict,
            seed,
            out,
            partition_out,
        } => {
            let (tp, sol) = gen_yes_3partition(q, b, strict, seed)?;
            write(&out, &write_3partition(&tp))?;
            if let Some(p) = partition_out {
                write(&p, &write_partition(&sol))?;
            }
            io.kv("q", q);
            io.kv("B", b);
            io.kv("strict_bounds", tp.strict_bounds());
        }
    }
    Ok(EXIT_OK)
}

fn cmd_witness(reduced: &Path, partition: &Path, out: Option<&Path>, io: &mut Io) -> Outcome {
    let red = with_path(reduced, read_reduced(&read(reduced)?))?;
    let sol = with_path(partition, read_partition(&read(partition)?))?;
    with_path(partition, check_partition(red.source(), &sol))?;
    let w = build_witness(&red, &sol)?;
    let dev = evaluate(red.instance(), &w, Objective::Deviation)?.total;
    io.kv("deviation", dev);
    io.kv("z", red.z());
    if let Some(p) = out {
        write(p, &write_schedule(&w))?;
    }
    let ok = match red.variant() {
        Variant::FourVoter => dev == red.z(),
        Variant::ThreeVoter => dev <= red.z(),
    };
    if !ok {
        io.note("witness does not meet the threshold");
    }
    Ok(if ok { EXIT_OK } else { EXIT_NO })
}

fn cmd_decode(reduced: &Path, schedule: &Path, io: &mut Io) -> Outcome {
    let red = with_path(reduced, read_reduced(&read(reduced)?))?;
    let sched = with_path(schedule, read_schedule(&read(schedule)?))?;
    match decode(&red, &sched)? {
        DecodeOutcome::Partition(p) => {
            for t in &p.triplets {
                io.kv("t", format_args!("{} {} {}", t[0], t[1], t[2]));
            }
            Ok(EXIT_OK)
        }
        DecodeOutcome::Failed(why) => {
            let _ = writeln!(io.out, "NO");
            io.note(why);
            Ok(EXIT_NO)
        }
    }
}
