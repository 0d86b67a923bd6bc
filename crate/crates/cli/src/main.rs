use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use slgen::classes::{centralizer_order, class_size, eta1_exact, eta2_exact, for_each_class_label, IrreducibleTable};
use slgen::ff::{field_of_order, Field};
use slgen::genprob::{generation_probability_exact, generation_probability_mc, witness_strategy_check};
use slgen::gensets::{
    membership_counts, sample_member, verify_all_pairs, verify_sampled_pairs, GenSet, SampleMethod,
};
use slgen::harmonic::{eta_bruteforce, eta_classbased, eta_cyclic, eta_projective_bruteforce, EtaReport};
use slgen::limits::{self, Limits};
use slgen::matgrp::{GroupKind, Matrix, OrderContext};
use slgen::normmap::{
    enumerate_hyperplanes, gauss_rows, random_subspace, surjectivity, NormField, Subspace, SurjectivityRow,
};
use slgen::numth::{self, BigRational};
use slgen::permcyc::{permcyc_rows, PermcycRow};
use slgen::pisigma::{order_mask, pisigma_report, union_mask, SmallGroup};
use slgen::{acceptance, Error};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "slgen", version, about = "Element orders, conjugacy classes and random generation in GL(n,q) and SL(n,q)")]
struct Cli {
    /// Multiplies every desk-scale limit.
    #[arg(long, global = true, env = "SLGEN_LIMIT_SCALE", default_value_t = 1.0)]
    limit_scale: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Average of 1/ord(g) over a group, as CSV.
    Eta(EtaArgs),
    /// Conjugacy class labels of GL(n,q) with centralizer and class sizes.
    Classes(ClassesArgs),
    /// Probability that two random elements generate SL(n,q).
    Genprob(GenprobArgs),
    /// The sets C1 and C2: densities, exhaustive counts, pair generation, samples.
    Gensets(GensetsArgs),
    /// Miss probability of a class union against its second-moment limit.
    Pisigma(PisigmaArgs),
    /// Surjectivity of the norm map on subspaces, and Gauss sums.
    Norm(NormArgs),
    /// Permutations with restricted cycle lengths.
    Permcyc(PermcycArgs),
    /// Runs the acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EtaMethodArg {
    Classbased,
    Brute,
    Both,
    Cyclic,
}

#[derive(Args)]
struct EtaArgs {
    #[arg(long)]
    n: usize,
    /// Field size (ignored by the cyclic method).
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value = "GL")]
    kind: String,
    #[arg(long, value_enum, default_value = "both")]
    method: EtaMethodArg,
}

#[derive(Args)]
struct ClassesArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u64,
    /// Print totals (class count, eta, eta1, eta2) as JSON instead of the label table.
    #[arg(long)]
    summary: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenprobMode {
    Exact,
    Mc,
    Witness,
}

#[derive(Args)]
struct GenprobArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "mc")]
    mode: GenprobMode,
    /// Also compute the exact value in Monte Carlo mode.
    #[arg(long)]
    with_exact: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GensetsMode {
    Density,
    Count,
    Verify,
    Sample,
}

#[derive(Args)]
struct GensetsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value = "c1")]
    set: String,
    #[arg(long, value_enum, default_value = "density")]
    mode: GensetsMode,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// In verify mode, check every C1 x C2 pair instead of sampling.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct PisigmaArgs {
    /// Named group: C<n>, S3, D4, SL(2,q), GL(2,q).
    #[arg(long, conflicts_with = "generators")]
    group: Option<String>,
    /// Generator matrices as JSON, e.g. [[[1,1],[0,1]],[[0,1],[1,0]]]; needs --q.
    #[arg(long, requires = "q")]
    generators: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    /// Select the elements of this order.
    #[arg(long, conflicts_with = "classes")]
    order: Option<u64>,
    /// Select a union of conjugacy classes by index, e.g. 1,3.
    #[arg(long, value_delimiter = ',')]
    classes: Option<Vec<usize>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormMode {
    Hyperplanes,
    Random,
    Counterexample,
    Gauss,
}

#[derive(Args)]
struct NormArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value = "hyperplanes")]
    mode: NormMode,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Subspaces per dimension in random mode.
    #[arg(long, default_value_t = 100)]
    trials: u64,
}

#[derive(Args)]
struct PermcycArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    m: String,
    #[arg(long)]
    n: usize,
    /// Monte Carlo trials per row; 0 skips the estimate.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run only these criteria, e.g. 1,2,13.
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<u8>>,
}

enum Failure {
    Lib(Error),
    Io(io::Error),
    Selftest(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl Failure {
    /// 2 is clap's usage error.
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) => match e {
                Error::NonPositive(_)
                | Error::NotPrime(_)
                | Error::InvalidParameter(_)
                | Error::DimensionMismatch(_)
                | Error::EmptySet
                | Error::NotCoprime { .. } => 3,
                Error::LimitExceeded { .. } => 4,
                Error::ExcludedCase { .. } => 5,
                _ => 6,
            },
            Failure::Selftest(_) => 7,
            Failure::Io(_) => 8,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(Error::LimitExceeded { .. }) => {
                format!("{}; raise limits with --limit-scale or SLGEN_LIMIT_SCALE", self.lib_message())
            }
            Failure::Lib(_) => self.lib_message(),
            Failure::Io(e) => format!("output error: {e}"),
            Failure::Selftest(n) => format!("{n} acceptance criteria failed"),
        }
    }

    fn lib_message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            _ => String::new(),
        }
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(flatten)]
    body: T,
}

fn write_json<T: Serialize>(out: &mut Out, command: &str, seed: Option<u64>, body: T) -> Result<(), Failure> {
    let env = Envelope { schema_version: SCHEMA_VERSION, command, seed, body };
    serde_json::to_writer_pretty(&mut *out, &env)?;
    writeln!(out)?;
    Ok(())
}

/// Comment line heading every CSV table.
fn csv_preamble(out: &mut Out, command: &str, seed: Option<u64>) -> Result<(), Failure> {
    let seed = seed.map_or("none".to_string(), |s| s.to_string());
    writeln!(
        out,
        "# schema_version={SCHEMA_VERSION} command={command} seed={seed} floats=f64 shortest round-trip decimal"
    )?;
    Ok(())
}

fn csv_writer<'a, 'b>(out: &'a mut Out<'b>) -> csv::Writer<&'a mut Out<'b>> {
    csv::WriterBuilder::new().has_headers(false).from_writer(out)
}

fn ratio_cells(r: &BigRational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

fn run_eta(args: &EtaArgs, out: &mut Out) -> Result<(), Failure> {
    let mut reports: Vec<EtaReport> = Vec::new();
    if let EtaMethodArg::Cyclic = args.method {
        let eta = eta_cyclic(args.n as u64)?;
        csv_preamble(out, "eta", None)?;
        writeln!(out, "{}", EtaReport::csv_header())?;
        writeln!(out, "\"C{}\",cyclic,{},,{},{},cyclic", args.n, args.n, eta.numer(), eta.denom())?;
        return Ok(());
    }
    let kind = GroupKind::from_str(&args.kind)?;
    let field = field_of_order(args.q)?;
    let classbased = matches!(args.method, EtaMethodArg::Classbased | EtaMethodArg::Both);
    let brute = matches!(args.method, EtaMethodArg::Brute | EtaMethodArg::Both);
    if classbased {
        if kind != GroupKind::GL {
            return Err(Error::InvalidParameter("the class-based method covers GL only".into()).into());
        }
        reports.push(eta_classbased(args.n, &field)?);
    }
    if brute {
        reports.push(match kind {
            GroupKind::GL | GroupKind::SL => eta_bruteforce(kind, args.n, &field)?,
            GroupKind::PGL | GroupKind::PSL => eta_projective_bruteforce(kind, args.n, &field)?,
        });
    }
    csv_preamble(out, "eta", None)?;
    writeln!(out, "{}", EtaReport::csv_header())?;
    for r in &reports {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassSummary {
    n: usize,
    q: u64,
    classes: u64,
    #[serde(serialize_with = "numth::serialize_ratio")]
    eta: BigRational,
    #[serde(serialize_with = "numth::serialize_ratio")]
    eta1: BigRational,
    #[serde(serialize_with = "numth::serialize_big")]
    eta2: BigUint,
}

fn run_classes(args: &ClassesArgs, out: &mut Out) -> Result<(), Failure> {
    let field = field_of_order(args.q)?;
    if args.summary {
        let report = eta_classbased(args.n, &field)?;
        let summary = ClassSummary {
            n: args.n,
            q: args.q,
            classes: report.visited,
            eta: report.eta,
            eta1: eta1_exact(args.n, args.q)?,
            eta2: eta2_exact(args.n, args.q)?,
        };
        return write_json(out, "classes", None, summary);
    }
    let table = IrreducibleTable::new(args.n, &field)?;
    let mut rows: Vec<[String; 4]> = Vec::new();
    let mut err = None;
    for_each_class_label(args.n, &table, |label| {
        let size = class_size(label, args.q);
        let order = table.class_order(label);
        match (size, order) {
            (Ok(size), Ok(order)) => rows.push([
                label.to_string(),
                centralizer_order(label, args.q).to_string(),
                size.to_string(),
                order.to_string(),
            ]),
            (Err(e), _) | (_, Err(e)) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e.into());
    }
    csv_preamble(out, "classes", None)?;
    let mut w = csv_writer(out);
    w.write_record(["label", "centralizer_order", "class_size", "element_order"])?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ExactGeneration {
    n: usize,
    q: u64,
    #[serde(serialize_with = "numth::serialize_ratio")]
    generation_probability: BigRational,
    #[serde(serialize_with = "numth::serialize_ratio")]
    non_generation_probability: BigRational,
    generation_probability_f64: f64,
    kantor_benchmark: f64,
}

fn run_genprob(args: &GenprobArgs, out: &mut Out) -> Result<(), Failure> {
    let field = field_of_order(args.q)?;
    match args.mode {
        GenprobMode::Exact => {
            let p = generation_probability_exact(args.n, &field)?;
            let body = ExactGeneration {
                n: args.n,
                q: args.q,
                generation_probability_f64: p.to_f64().unwrap_or(f64::NAN),
                non_generation_probability: BigRational::one() - &p,
                generation_probability: p,
                kantor_benchmark: 2.0 * (args.q as f64).powi(-(args.n as i32)),
            };
            write_json(out, "genprob", None, body)
        }
        GenprobMode::Mc => {
            let report = generation_probability_mc(args.n, &field, args.trials, args.seed, args.with_exact)?;
            // the report carries its seed
            write_json(out, "genprob", None, report)
        }
        GenprobMode::Witness => {
            let report = witness_strategy_check(args.n, &field, args.trials, args.seed)?;
            write_json(out, "genprob", None, report)
        }
    }
}

fn run_gensets(args: &GensetsArgs, out: &mut Out) -> Result<(), Failure> {
    let set = GenSet::from_str(&args.set)?;
    let field = field_of_order(args.q)?;
    let set_name = match set {
        GenSet::C1 => "c1",
        GenSet::C2 => "c2",
    };
    let n = args.n.to_string();
    let q = args.q.to_string();
    match args.mode {
        GensetsMode::Density => {
            let d = set.density(args.n, args.q)?;
            csv_preamble(out, "gensets", None)?;
            let mut w = csv_writer(out);
            w.write_record(["n", "q", "set", "density_num", "density_den"])?;
            let [num, den] = ratio_cells(&d);
            w.write_record([n, q, set_name.into(), num, den])?;
            w.flush()?;
        }
        GensetsMode::Count => {
            let counts = membership_counts(args.n, &field)?;
            let count = match set {
                GenSet::C1 => counts.c1,
                GenSet::C2 => counts.c2,
            };
            let observed = numth::ratio(&count.into(), &counts.sl_order.into());
            let formula = set.density(args.n, args.q).ok();
            csv_preamble(out, "gensets", None)?;
            let mut w = csv_writer(out);
            w.write_record([
                "n", "q", "set", "count", "sl_order", "density_num", "density_den", "formula_num", "formula_den",
                "matches_formula",
            ])?;
            let [num, den] = ratio_cells(&observed);
            let [fnum, fden] = formula.as_ref().map(ratio_cells).unwrap_or_default();
            let matches = formula.map_or("", |f| if f == observed { "true" } else { "false" });
            w.write_record([
                n,
                q,
                set_name.into(),
                count.to_string(),
                counts.sl_order.to_string(),
                num,
                den,
                fnum,
                fden,
                matches.into(),
            ])?;
            w.flush()?;
        }
        GensetsMode::Verify => {
            let (pairs, checked, failures, witness, seed) = if args.exhaustive {
                let r = verify_all_pairs(args.n, &field)?;
                let witness = r.witness.map(|(a, b, o)| format!("{a} {b} order {o}")).unwrap_or_default();
                (r.pairs, r.checked, r.failures, witness, None)
            } else {
                let r = verify_sampled_pairs(args.n, &field, args.trials, args.seed)?;
                (r.trials, r.trials, r.failures, String::new(), Some(args.seed))
            };
            csv_preamble(out, "gensets", seed)?;
            let mut w = csv_writer(out);
            w.write_record(["n", "q", "method", "pairs", "checked", "failures", "witness"])?;
            let method = if args.exhaustive { "exhaustive" } else { "sampled" };
            w.write_record([n, q, method.into(), pairs.to_string(), checked.to_string(), failures.to_string(), witness])?;
            w.flush()?;
        }
        GensetsMode::Sample => {
            let ctx = OrderContext::new(args.n, &field)?;
            let mut rows = Vec::new();
            for t in 0..args.trials {
                let mut rng = slgen::genprob::trial_rng(args.seed, t);
                let g: Matrix = sample_member(set, args.n, &field, SampleMethod::Conjugation, &mut rng)?;
                rows.push([t.to_string(), g.to_string(), ctx.order(&g)?.to_string()]);
            }
            csv_preamble(out, "gensets", Some(args.seed))?;
            let mut w = csv_writer(out);
            w.write_record(["trial", "matrix", "order"])?;
            for row in rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn matrices_from_json(text: &str, field: &Field) -> Result<Vec<Matrix>, Failure> {
    let raw: Vec<Vec<Vec<u32>>> = serde_json::from_str(text)
        .map_err(|e| Error::InvalidParameter(format!("generators: {e}")))?;
    raw.iter()
        .map(|rows| {
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch("generator matrices must be square".into()).into());
            }
            if rows.iter().flatten().any(|&x| x >= field.size()) {
                return Err(Error::InvalidParameter("matrix entry outside the field".into()).into());
            }
            let refs: Vec<&[u32]> = rows.iter().map(|r| r.as_slice()).collect();
            Ok(Matrix::from_rows(&refs))
        })
        .collect()
}

#[derive(Serialize)]
struct PisigmaOutput {
    class_sizes: Vec<usize>,
    #[serde(flatten)]
    report: slgen::pisigma::PiSigmaReport,
}

fn run_pisigma(args: &PisigmaArgs, out: &mut Out) -> Result<(), Failure> {
    let group = match (&args.group, &args.generators) {
        (Some(name), _) => SmallGroup::named(name)?,
        (None, Some(gens)) => {
            let field = field_of_order(args.q.unwrap_or_default())?;
            SmallGroup::from_matrices("generated", &matrices_from_json(gens, &field)?, &field)?
        }
        (None, None) => return Err(Error::InvalidParameter("give --group or --generators".into()).into()),
    };
    let classes = group.conjugacy_classes();
    let mask = if let Some(order) = args.order {
        order_mask(&group, order)
    } else if let Some(indices) = &args.classes {
        let chosen = indices
            .iter()
            .map(|&i| {
                classes.get(i).map(|c| c.as_slice()).ok_or_else(|| {
                    Error::InvalidParameter(format!("class index {i} out of range (0..{})", classes.len()))
                })
            })
            .collect::<Result<Vec<&[u32]>, Error>>()?;
        union_mask(&group, &chosen)
    } else {
        // every non-identity element
        (0..group.order()).map(|g| g as u32 != group.identity()).collect()
    };
    let report = pisigma_report(&group, &mask)?;
    let body = PisigmaOutput { class_sizes: classes.iter().map(|c| c.len()).collect(), report };
    write_json(out, "pisigma", None, body)
}

#[derive(Serialize)]
struct NormOutput<T: Serialize> {
    q: u64,
    n: u32,
    mode: &'static str,
    rows: Vec<T>,
}

fn run_norm(args: &NormArgs, out: &mut Out) -> Result<(), Failure> {
    let field = NormField::new(args.q, args.n)?;
    let body = |mode, rows| NormOutput { q: args.q, n: args.n, mode, rows };
    match args.mode {
        NormMode::Hyperplanes => {
            let rows = enumerate_hyperplanes(&field)
                .map(|h| surjectivity(&h?))
                .collect::<Result<Vec<SurjectivityRow>, Error>>()?;
            write_json(out, "norm", None, body("hyperplanes", rows))
        }
        NormMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let mut rows = Vec::new();
            // dimensions from (n+1)/2 up to n
            for dim in (args.n as usize).div_ceil(2)..=args.n as usize {
                for _ in 0..args.trials {
                    rows.push(surjectivity(&random_subspace(&field, dim, &mut rng)?)?);
                }
            }
            write_json(out, "norm", Some(args.seed), body("random", rows))
        }
        NormMode::Counterexample => {
            if args.n % 2 != 0 {
                return Err(Error::InvalidParameter("the subfield counterexample needs even n".into()).into());
            }
            let rows = vec![surjectivity(&Subspace::subfield(&field, args.n / 2)?)?];
            write_json(out, "norm", None, body("counterexample", rows))
        }
        NormMode::Gauss => {
            let rows = gauss_rows(&field, usize::MAX)?;
            let out_body = NormOutput { q: args.q, n: args.n, mode: "gauss", rows };
            write_json(out, "norm", None, out_body)
        }
    }
}

fn run_permcyc(args: &PermcycArgs, out: &mut Out) -> Result<(), Failure> {
    let m = BigUint::from_str(&args.m).map_err(|e| Error::InvalidParameter(format!("m: {e}")))?;
    let rows = permcyc_rows(args.q, &m, args.n, args.trials, args.seed)?;
    csv_preamble(out, "permcyc", Some(args.seed))?;
    writeln!(out, "{}", PermcycRow::csv_header())?;
    for r in rows {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

fn run_selftest(args: &SelftestArgs, out: &mut Out) -> Result<(), Failure> {
    let all = acceptance::criteria();
    let mut failed = 0;
    for (i, criterion) in all.iter().enumerate() {
        let id = i as u8 + 1;
        if args.only.as_ref().is_some_and(|only| !only.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let outcome = criterion();
        log::info!("criterion {id} took {:.1?}", start.elapsed());
        writeln!(out, "{outcome}")?;
        out.flush()?;
        if !outcome.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(Failure::Selftest(failed));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    if !(cli.limit_scale > 0.0) {
        eprintln!("error: --limit-scale must be positive");
        return ExitCode::from(3);
    }
    limits::set_global(Limits::default().scaled(cli.limit_scale));

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let start = Instant::now();
    let result = match &cli.command {
        Command::Eta(a) => run_eta(a, &mut out),
        Command::Classes(a) => run_classes(a, &mut out),
        Command::Genprob(a) => run_genprob(a, &mut out),
        Command::Gensets(a) => run_gensets(a, &mut out),
        Command::Pisigma(a) => run_pisigma(a, &mut out),
        Command::Norm(a) => run_norm(a, &mut out),
        Command::Permcyc(a) => run_permcyc(a, &mut out),
        Command::Selftest(a) => run_selftest(a, &mut out),
    };
    let flushed = out.flush();
    log::info!("finished in {:.1?}", start.elapsed());
    match result.and(flushed.map_err(Failure::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
