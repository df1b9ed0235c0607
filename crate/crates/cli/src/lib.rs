//! Experiment harness for the `elgamal-map` library.
//!
//! Every subcommand is a pure function of its flags: [`run`] returns the
//! rendered output together with the check status, and the binary only does
//! I/O and maps the status to an exit code (0 pass, 2 check failed, 1 usage or
//! input error).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

use elgamal_map::discrepancy::{sweep, theorem_bound, DiscrepancyReport};
use elgamal_map::elgamal::{elgamal_permutation, public_key, sign, verify};
use elgamal_map::numth::{all_generators, gcd, is_prime, smallest_generator, GroupParams};
use elgamal_map::permstat::{
    cycle_count_histogram, cycle_decompose, expected_cycles, expected_k_cycles, family_statistics,
    fixed_point_sweep, random_permutation, stirling_cycle_distribution, CycleStructure,
};
use elgamal_map::rng::seeded;
use elgamal_map::sidon::{
    build_graph, character_sum_bound, difference_set_size, expected_difference_set_size,
    exponential_sum_bound, incomplete_exponential_sum_total, max_nontrivial_character_sum,
    verify_sidon,
};
use elgamal_map::svg::render_cycles;

/// Number of cycle counts shown in distribution tables.
pub const CYCLE_TABLE_ROWS: usize = 20;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Math(#[from] elgamal_map::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Parser)]
#[command(
    name = "elgamal-map",
    version,
    about = "Randomness experiments on the map x -> g^x mod p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSelection {
    One(u64),
    Smallest,
    All,
}

impl FromStr for GeneratorSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "smallest" => Ok(Self::Smallest),
            "all" => Ok(Self::All),
            _ => s
                .parse()
                .map(Self::One)
                .map_err(|_| format!("expected an integer, `smallest` or `all`, got `{s}`")),
        }
    }
}

#[derive(Debug, Args)]
pub struct PrimeArgs {
    #[arg(long)]
    pub prime: u64,
    /// An integer, `smallest` or `all`.
    #[arg(long, default_value = "smallest")]
    pub generator: GeneratorSelection,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cycle lengths of the permutation of each selected generator.
    Cycles(PrimeArgs),
    /// Cycle-count distribution over all generators versus random-permutation theory.
    CycleDist {
        #[arg(long)]
        prime: u64,
    },
    /// Cycle-count distribution of seeded uniform permutations versus theory.
    RandomBaseline {
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 288)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Average number of k-cycles over all generators versus 1/k.
    Kcycles {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 20)]
        k_max: usize,
    },
    /// Average fixed points over all generators, for every prime up to a limit.
    FixedPoints {
        #[arg(long, default_value_t = 2111)]
        max_prime: u64,
    },
    /// Exhaustive Sidon check and difference-set size of the graph {(g^x, x)}.
    Sidon(PrimeArgs),
    /// Largest nontrivial character sum of the graph versus sqrt(3(p-1)).
    CharSums(PrimeArgs),
    /// Incomplete exponential sum total versus 5 n ln n.
    Polya {
        #[arg(long)]
        n: u64,
        /// Window length N, 1 <= N < n.
        #[arg(long)]
        len: u64,
        /// Window start h.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
    },
    /// Box-count deviations of the graph versus 50 sqrt(p) ln^2 p.
    Discrepancy {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value = "smallest")]
        generator: GeneratorSelection,
        #[arg(long, default_value_t = 10_000)]
        boxes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write every box record as CSV to this file.
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// SVG diagram with one circle per cycle.
    RenderCycles {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value = "smallest")]
        generator: GeneratorSelection,
    },
    /// Sign a seeded random message and verify the signature.
    SignDemo {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Verify against the message plus one instead.
        #[arg(long)]
        tamper: bool,
    },
}

/// Whether the mathematical checks of a run held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    CheckFailed,
}

impl Status {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Self::Pass
        } else {
            Self::CheckFailed
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Self::Pass => 0,
            Self::CheckFailed => 2,
        }
    }
}

/// Rendered output of one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub status: Status,
    /// Extra files to write: `(path, contents)`.
    pub side_files: Vec<(PathBuf, String)>,
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Int(i64),
    Real(f64),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.6}"),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(v) => json!(v),
            Cell::Real(v) => json!(v),
            Cell::Bool(v) => json!(v),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$(Cell::from($x)),*] };
}

#[derive(Debug, Clone, PartialEq)]
struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &'static [&'static str]) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(k, v)| (k.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Intermediate result: a tabular and/or JSON rendering plus status.
struct Report {
    default_format: Format,
    table: Option<Table>,
    json: Option<Value>,
    status: Status,
}

impl Report {
    fn table(table: Table, summary: Value) -> Self {
        let mut json = summary;
        json["rows"] = table.to_json_rows();
        Self {
            default_format: Format::Csv,
            table: Some(table),
            json: Some(json),
            status: Status::Pass,
        }
    }

    fn json(json: Value, table: Option<Table>, pass: bool) -> Self {
        Self {
            default_format: Format::Json,
            table,
            json: Some(json),
            status: Status::from_pass(pass),
        }
    }

    fn render(self, format: Option<Format>) -> Result<Outcome, CliError> {
        let body = match format.unwrap_or(self.default_format) {
            Format::Csv => self
                .table
                .ok_or_else(|| CliError::Usage("this subcommand has no CSV output".into()))?
                .to_csv(),
            Format::Json => {
                let v = self
                    .json
                    .ok_or_else(|| CliError::Usage("this subcommand has no JSON output".into()))?;
                let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
                s.push('\n');
                s
            }
        };
        Ok(Outcome {
            body,
            status: self.status,
            side_files: Vec::new(),
        })
    }
}

fn odd_prime(p: u64) -> Result<u64, CliError> {
    if !is_prime(p) {
        return Err(elgamal_map::Error::NotPrime(p).into());
    }
    if p == 2 {
        return Err(elgamal_map::Error::NotOddPrime(p).into());
    }
    Ok(p)
}

fn resolve_generators(p: u64, sel: &GeneratorSelection) -> Result<Vec<u64>, CliError> {
    let p = odd_prime(p)?;
    Ok(match *sel {
        GeneratorSelection::One(g) => vec![GroupParams::new(p, g)?.g()],
        GeneratorSelection::Smallest => vec![smallest_generator(p)?.g()],
        GeneratorSelection::All => all_generators(p)?,
    })
}

fn single_generator(p: u64, sel: &GeneratorSelection) -> Result<GroupParams, CliError> {
    match sel {
        GeneratorSelection::All => Err(CliError::Usage(
            "this subcommand needs a single generator".into(),
        )),
        _ => Ok(GroupParams::new(p, resolve_generators(p, sel)?[0])?),
    }
}

fn structure(p: u64, g: u64) -> Result<CycleStructure, CliError> {
    Ok(cycle_decompose(&elgamal_permutation(&GroupParams::new(
        p, g,
    )?)))
}

/// Runs one subcommand without touching the filesystem.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut side_files = Vec::new();
    let report = match &cli.command {
        Command::Cycles(args) => cmd_cycles(args)?,
        Command::CycleDist { prime } => cmd_cycle_dist(*prime)?,
        Command::RandomBaseline {
            degree,
            samples,
            seed,
        } => cmd_random_baseline(*degree, *samples, *seed)?,
        Command::Kcycles { prime, k_max } => cmd_kcycles(*prime, *k_max)?,
        Command::FixedPoints { max_prime } => cmd_fixed_points(*max_prime)?,
        Command::Sidon(args) => cmd_sidon(args)?,
        Command::CharSums(args) => cmd_char_sums(args)?,
        Command::Polya { n, len, shift } => cmd_polya(*n, *len, *shift)?,
        Command::Discrepancy {
            prime,
            generator,
            boxes,
            seed,
            records,
        } => {
            let (report, table) = cmd_discrepancy(*prime, generator, *boxes, *seed)?;
            if let Some(path) = records {
                side_files.push((path.clone(), table.to_csv()));
            }
            report
        }
        Command::RenderCycles { prime, generator } => {
            if cli.format.is_some() {
                return Err(CliError::Usage("render-cycles always writes SVG".into()));
            }
            return Ok(Outcome {
                body: cmd_render_cycles(*prime, generator)?,
                status: Status::Pass,
                side_files,
            });
        }
        Command::SignDemo {
            prime,
            seed,
            tamper,
        } => cmd_sign_demo(*prime, *seed, *tamper)?,
    };
    let mut outcome = report.render(cli.format)?;
    outcome.side_files = side_files;
    Ok(outcome)
}

fn cmd_cycles(args: &PrimeArgs) -> Result<Report, CliError> {
    let gens = resolve_generators(args.prime, &args.generator)?;
    let mut table = Table::new(&["generator", "cycle_length", "multiplicity"]);
    for g in gens {
        for (len, mult) in structure(args.prime, g)?.multiplicities() {
            table.push(row![g, len, mult]);
        }
    }
    Ok(Report::table(table, json!({ "prime": args.prime })))
}

fn distribution_table(degree: usize, structures: &[CycleStructure]) -> Result<Table, CliError> {
    let theory = stirling_cycle_distribution(degree)?;
    let hist = cycle_count_histogram(structures);
    let total = structures.len() as f64;
    let mut table = Table::new(&["c", "theory_percent", "elgamal_percent"]);
    for c in 1..=CYCLE_TABLE_ROWS {
        let empirical = hist.get(&c).copied().unwrap_or(0) as f64 / total;
        table.push(row![c, 100.0 * theory.prob(c), 100.0 * empirical]);
    }
    Ok(table)
}

fn mean_cycles(structures: &[CycleStructure]) -> f64 {
    structures.iter().map(|cs| cs.count_cycles()).sum::<usize>() as f64 / structures.len() as f64
}

fn cmd_cycle_dist(prime: u64) -> Result<Report, CliError> {
    let gens = resolve_generators(prime, &GeneratorSelection::All)?;
    let structures = gens
        .iter()
        .map(|&g| structure(prime, g))
        .collect::<Result<Vec<_>, _>>()?;
    let degree = prime as usize - 1;
    let table = distribution_table(degree, &structures)?;
    Ok(Report::table(
        table,
        json!({
            "prime": prime,
            "generators": gens.len(),
            "mean_cycles": mean_cycles(&structures),
            "expected_cycles": expected_cycles(degree),
        }),
    ))
}

/// Sample `i` is `random_permutation(degree, seed + i)`.
fn cmd_random_baseline(degree: usize, samples: u64, seed: u64) -> Result<Report, CliError> {
    if degree == 0 || samples == 0 {
        return Err(CliError::Usage(
            "degree and samples must be positive".into(),
        ));
    }
    let structures: Vec<CycleStructure> = (0..samples)
        .map(|i| cycle_decompose(&random_permutation(degree, seed.wrapping_add(i))))
        .collect();
    let mut table = distribution_table(degree, &structures)?;
    table.header = &["c", "theory_percent", "empirical_percent"];
    Ok(Report::table(
        table,
        json!({
            "degree": degree,
            "samples": samples,
            "seed": seed,
            "mean_cycles": mean_cycles(&structures),
            "expected_cycles": expected_cycles(degree),
        }),
    ))
}

fn cmd_kcycles(prime: u64, k_max: usize) -> Result<Report, CliError> {
    if k_max == 0 {
        return Err(CliError::Usage("--k-max must be positive".into()));
    }
    let gens = resolve_generators(prime, &GeneratorSelection::All)?;
    let stats = family_statistics(prime, &gens, k_max)?;
    let mut table = Table::new(&["k", "theory", "empirical_average"]);
    for (i, &avg) in stats.avg_k_cycles.iter().enumerate() {
        table.push(row![i + 1, expected_k_cycles(i + 1), avg]);
    }
    Ok(Report::table(
        table,
        json!({ "prime": prime, "generators": gens.len() }),
    ))
}

fn cmd_fixed_points(max_prime: u64) -> Result<Report, CliError> {
    if max_prime < 2 {
        return Err(CliError::Usage("--max-prime must be at least 2".into()));
    }
    let rows = fixed_point_sweep(max_prime)?;
    let mut table = Table::new(&["p", "avg_fixed_points"]);
    for r in &rows {
        table.push(row![r.p, r.avg_fixed_points()]);
    }
    let (gens, fixed) = rows.iter().fold((0, 0), |(g, f), r| {
        (g + r.generators, f + r.total_fixed_points)
    });
    Ok(Report::table(
        table,
        json!({
            "max_prime": max_prime,
            "primes": rows.len(),
            "generators": gens,
            "grand_mean_fixed_points": fixed as f64 / gens as f64,
        }),
    ))
}

fn cmd_sidon(args: &PrimeArgs) -> Result<Report, CliError> {
    let gens = resolve_generators(args.prime, &args.generator)?;
    let expected = expected_difference_set_size(args.prime);
    let mut table = Table::new(&["generator", "ok", "diff_set_size", "expected_diff_set_size"]);
    let mut entries = Vec::new();
    let mut pass = true;
    for g in gens {
        let graph = build_graph(&GroupParams::new(args.prime, g)?);
        let check = verify_sidon(&graph);
        let size = difference_set_size(&graph);
        pass &= check.ok && size == expected;
        table.push(row![g, check.ok, size, expected]);
        let mut entry = json!({
            "generator": g,
            "ok": check.ok,
            "diff_set_size": size,
            "expected_diff_set_size": expected,
        });
        if let Some(w) = check.witness {
            entry["witness"] = serde_json::to_value(w).expect("witness serializes");
        }
        entries.push(entry);
    }
    Ok(Report::json(
        json!({ "prime": args.prime, "generators": entries, "pass": pass }),
        Some(table),
        pass,
    ))
}

fn cmd_char_sums(args: &PrimeArgs) -> Result<Report, CliError> {
    let gens = resolve_generators(args.prime, &args.generator)?;
    let bound = character_sum_bound(args.prime);
    let mut table = Table::new(&[
        "generator",
        "max_sum",
        "bound",
        "argmax_s",
        "argmax_t",
        "pass",
    ]);
    let mut entries = Vec::new();
    let mut pass = true;
    for g in gens {
        let graph = build_graph(&GroupParams::new(args.prime, g)?);
        let (max, chi) = max_nontrivial_character_sum(&graph);
        let ok = max < bound;
        pass &= ok;
        table.push(row![g, max, bound, chi.s(), chi.t(), ok]);
        entries.push(json!({
            "generator": g,
            "max_sum": max,
            "bound": bound,
            "argmax_s": chi.s(),
            "argmax_t": chi.t(),
            "pass": ok,
        }));
    }
    Ok(Report::json(
        json!({ "prime": args.prime, "generators": entries, "pass": pass }),
        Some(table),
        pass,
    ))
}

fn cmd_polya(n: u64, len: u64, shift: i64) -> Result<Report, CliError> {
    let total = incomplete_exponential_sum_total(n, len, shift)?;
    let bound = exponential_sum_bound(n);
    let pass = total < bound;
    Ok(Report::json(
        json!({ "n": n, "N": len, "h": shift, "total": total, "bound": bound, "pass": pass }),
        None,
        pass,
    ))
}

fn discrepancy_table(report: &DiscrepancyReport) -> Table {
    let mut table = Table::new(&[
        "h",
        "N",
        "k",
        "M",
        "hits",
        "expected",
        "deviation",
        "ratio",
        "large_box",
    ]);
    for r in &report.records {
        table.push(row![
            r.bx.h(),
            r.bx.width(),
            r.bx.k(),
            r.bx.height(),
            r.hits,
            r.expected,
            r.deviation,
            r.ratio,
            r.large_box,
        ]);
    }
    table
}

fn cmd_discrepancy(
    prime: u64,
    generator: &GeneratorSelection,
    boxes: usize,
    seed: u64,
) -> Result<(Report, Table), CliError> {
    let params = single_generator(prime, generator)?;
    let report = sweep(&build_graph(&params), boxes, seed);
    let pass = report.pass();
    let worst = report
        .records
        .iter()
        .find(|r| r.ratio == report.max_ratio)
        .map(|r| serde_json::to_value(r).expect("record serializes"));
    let summary = json!({
        "prime": prime,
        "generator": params.g(),
        "random_boxes": boxes,
        "seed": seed,
        "records": report.records.len(),
        "max_deviation": report.max_deviation,
        "bound": theorem_bound(prime),
        "max_ratio": report.max_ratio,
        "worst_record": worst,
        "pass": pass,
    });
    let table = discrepancy_table(&report);
    Ok((Report::json(summary, Some(table.clone()), pass), table))
}

fn cmd_render_cycles(prime: u64, generator: &GeneratorSelection) -> Result<String, CliError> {
    let params = single_generator(prime, generator)?;
    let cs = structure(prime, params.g())?;
    let mut title = String::new();
    write!(
        title,
        "Cycles of x -> {}^x mod {} ({} cycles)",
        params.g(),
        prime,
        cs.count_cycles()
    )
    .unwrap();
    Ok(render_cycles(&cs, &title))
}

/// Draws `a, m` uniform in `ℤ_{p−1}` and `k` uniform in `[1, p−2]`, redrawing `k`
/// until it is coprime to `p − 1`.
fn cmd_sign_demo(prime: u64, seed: u64, tamper: bool) -> Result<Report, CliError> {
    let params = smallest_generator(odd_prime(prime)?)?;
    let d = params.order();
    let mut rng = seeded(seed);
    let a = rng.gen_range(0..d);
    let k = loop {
        let k = if d > 2 { rng.gen_range(1..d) } else { 1 };
        if gcd(k, d) == 1 {
            break k;
        }
    };
    let m = rng.gen_range(0..d);
    let sig = sign(&params, a, k, m)?;
    let big_a = public_key(&params, a);
    let checked = if tamper { (m + 1) % d } else { m };
    let verified = verify(&params, big_a, checked, &sig);
    let json = json!({
        "prime": prime,
        "generator": params.g(),
        "m": m,
        "A": big_a,
        "K": sig.session_public,
        "b": sig.b,
        "tampered": tamper,
        "verified": verified,
    });
    Ok(Report::json(json, None, verified || tamper))
}
