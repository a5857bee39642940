use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use halfweight::bases::{default_linalg_prec, Construction, Flavor, FormBasis};
use halfweight::bench::{build_basis, read_bench_csv, run_bench, write_bench_csv, BenchRecord};
use halfweight::fit::fit_powerlaw;
use halfweight::forms::{LabeledForm, Weight};
use halfweight::hecke::eigenforms;
use halfweight::io::{write_eigen_report, write_forms, Format};
use halfweight::series::{set_mul_config, MulConfig};
use halfweight::{CoeffRing, Error, HalfWeight};

/// Fourier expansions of half-integral weight modular forms on Gamma_0(4).
#[derive(Parser)]
#[command(name = "halfweight", version)]
struct Cli {
    #[command(flatten)]
    tuning: Tuning,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Tuning {
    /// Worker threads for multiplication; 1 keeps everything sequential.
    #[arg(long, global = true, env = "HALFWEIGHT_THREADS", default_value_t = 1)]
    threads: usize,
    /// Longest operand multiplied by schoolbook convolution.
    #[arg(long, global = true, env = "HALFWEIGHT_SCHOOLBOOK_MAX", default_value_t = MulConfig::DEFAULT.schoolbook_max)]
    schoolbook_max: usize,
    /// Sparse product when nnz(f)*nnz(g) <= FACTOR * len * log2(len).
    #[arg(long, global = true, env = "HALFWEIGHT_SPARSE_FACTOR", default_value_t = MulConfig::DEFAULT.sparse_factor)]
    sparse_factor: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a basis and write its q-expansions.
    Basis(BasisArgs),
    /// Diagonalize Hecke operators T(p^2) on a space and write eigenforms.
    Eigenforms(EigenArgs),
    /// Time basis constructions and write a CSV table.
    Bench(BenchArgs),
    /// Fit t = b x^a to a bench table, per basis.
    Fit(FitArgs),
}

#[derive(Args)]
struct BasisArgs {
    /// Weight k+1/2 written as a fraction, e.g. 13/2.
    #[arg(long, value_parser = parse_weight)]
    weight: HalfWeight,
    /// cohen, kohnen or rankin-cohen.
    #[arg(long, default_value = "cohen", value_parser = parse_construction)]
    basis: Construction,
    /// full or plus; defaults to the natural space of the basis (cohen: full,
    /// kohnen: plus, rankin-cohen: plus for even k and full for odd k).
    #[arg(long, value_parser = parse_flavor)]
    space: Option<Flavor>,
    /// Number of coefficients a_0 .. a_{D-1}.
    #[arg(long, default_value_t = 100)]
    prec: usize,
    /// q, fp:<p> or padic:<p>:<m>.
    #[arg(long, default_value = "q", value_parser = parse_ring)]
    ring: CoeffRing,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EigenArgs {
    #[arg(long, value_parser = parse_weight)]
    weight: HalfWeight,
    /// Comma-separated primes; 2 acts through the plus-space operator.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    primes: Vec<u64>,
    /// Space to diagonalize: kohnen, rankin-cohen or cohen (plus space by
    /// projection for kohnen and cohen).
    #[arg(long, default_value = "kohnen", value_parser = parse_construction)]
    basis: Construction,
    #[arg(long, value_parser = parse_flavor)]
    space: Option<Flavor>,
    /// Coefficients used to solve for the Hecke matrix; defaults to 2k+10.
    #[arg(long)]
    low_prec: Option<usize>,
    /// Precision of the written eigenforms.
    #[arg(long, default_value_t = 100)]
    prec: usize,
    #[arg(long, default_value = "q", value_parser = parse_ring)]
    ring: CoeffRing,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
    /// Directory for report_p<p>.json and eigenforms_p<p>.<csv|jsonl>;
    /// reports go to standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated weights, e.g. 13/2,25/2.
    #[arg(long = "weight", value_delimiter = ',', required = true, value_parser = parse_weight)]
    weights: Vec<HalfWeight>,
    /// Comma-separated precisions.
    #[arg(long = "prec", value_delimiter = ',', required = true)]
    precs: Vec<usize>,
    /// Comma-separated bases among cohen, kohnen, rankin-cohen, projected.
    #[arg(long = "basis", value_delimiter = ',', default_value = "cohen,kohnen,rankin-cohen", value_parser = parse_construction)]
    bases: Vec<Construction>,
    #[arg(long, default_value = "q", value_parser = parse_ring)]
    ring: CoeffRing,
    /// Repetitions per cell; the median time is reported.
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Bench CSV to read.
    input: PathBuf,
    /// Abscissa of the fit: weight (k+1/2) or prec.
    #[arg(long, default_value = "weight", value_parser = ["weight", "prec"])]
    by: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_weight(s: &str) -> Result<HalfWeight, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_construction(s: &str) -> Result<Construction, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_flavor(s: &str) -> Result<Flavor, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_ring(s: &str) -> Result<CoeffRing, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure(&cli.tuning).and_then(|()| match cli.cmd {
        Cmd::Basis(a) => cmd_basis(a),
        Cmd::Eigenforms(a) => cmd_eigenforms(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Fit(a) => cmd_fit(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn configure(t: &Tuning) -> Result<(), Failure> {
    if t.threads == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    if t.sparse_factor.is_nan() || t.sparse_factor < 0.0 {
        return Err(Failure::Usage("--sparse-factor must be nonnegative".into()));
    }
    if t.threads > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.threads)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    set_mul_config(MulConfig {
        schoolbook_max: t.schoolbook_max,
        sparse_factor: t.sparse_factor,
        parallel: t.threads > 1,
    });
    Ok(())
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Maps a basis/space request to the construction that produces it.
fn resolve(w: HalfWeight, basis: Construction, space: Option<Flavor>) -> Result<Construction, Failure> {
    let rc_flavor = if w.k().is_multiple_of(2) { Flavor::Plus } else { Flavor::Full };
    match (basis, space) {
        (Construction::Cohen, None | Some(Flavor::Full)) => Ok(Construction::Cohen),
        (Construction::Cohen | Construction::Projected, Some(Flavor::Plus)) | (Construction::Projected, None) => {
            Ok(Construction::Projected)
        }
        (Construction::Kohnen, None | Some(Flavor::Plus)) => Ok(Construction::Kohnen),
        (Construction::RankinCohen, None) => Ok(Construction::RankinCohen),
        (Construction::RankinCohen, Some(f)) if f == rc_flavor => Ok(Construction::RankinCohen),
        (b, Some(f)) => Err(Failure::Usage(format!("the {b} basis does not span the {f} space at weight {w}"))),
    }
}

fn cmd_basis(a: BasisArgs) -> Result<(), Failure> {
    let construction = resolve(a.weight, a.basis, a.space)?;
    if a.prec == 0 {
        return Err(Failure::Usage("--prec must be positive".into()));
    }
    let start = Instant::now();
    let basis = build_basis(construction, a.weight, a.prec, a.ring)?;
    let elapsed = start.elapsed().as_secs_f64();
    write_forms(output(a.out.as_deref())?, &basis.forms, a.format)?;
    eprintln!(
        "{} basis of the {} space of weight {}: dimension {}, {:.3} s",
        basis.construction,
        basis.flavor,
        basis.weight,
        basis.len(),
        elapsed
    );
    Ok(())
}

fn cmd_eigenforms(a: EigenArgs) -> Result<(), Failure> {
    let w = a.weight;
    let construction = resolve(w, a.basis, a.space)?;
    if a.primes.is_empty() {
        return Err(Failure::Usage("--primes is empty".into()));
    }
    let low = a.low_prec.unwrap_or_else(|| default_linalg_prec(w));
    let pmax = *a.primes.iter().max().unwrap() as usize;
    let prec = a.prec.max(pmax * pmax * low);
    let basis: FormBasis = build_basis(construction, w, prec, a.ring)?;
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
    }
    for &p in &a.primes {
        let data = eigenforms(&basis, p, low, a.prec)?;
        let values: Vec<String> = data.split.eigenspaces.iter().map(|s| s.value.to_string()).collect();
        eprintln!("T({p}^2) on weight {w}, dimension {}: eigenvalues {}", basis.len(), values.join(", "));
        let forms: Vec<LabeledForm> = data
            .eigenforms
            .iter()
            .map(|(lam, _, g)| LabeledForm { series: g.clone(), weight: Weight::Half(w), label: format!("lambda={lam}") })
            .collect();
        match &a.out {
            Some(dir) => {
                write_eigen_report(BufWriter::new(File::create(dir.join(format!("report_p{p}.json")))?), &data)?;
                let ext = match a.format {
                    Format::Csv => "csv",
                    Format::Records => "jsonl",
                };
                let path = dir.join(format!("eigenforms_p{p}.{ext}"));
                write_forms(BufWriter::new(File::create(path)?), &forms, a.format)?;
            }
            None => write_eigen_report(io::stdout().lock(), &data)?,
        }
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    if a.precs.contains(&0) {
        return Err(Failure::Usage("precisions must be positive".into()));
    }
    let mut records: Vec<BenchRecord> = Vec::new();
    for &w in &a.weights {
        for &prec in &a.precs {
            for &b in &a.bases {
                let r = run_bench(b, w, prec, a.ring, a.reps)?;
                eprintln!("{r}");
                records.push(r);
            }
        }
    }
    write_bench_csv(output(a.out.as_deref())?, &records)?;
    Ok(())
}

/// Basis and the description of the parameter held fixed.
type GroupKey = (Construction, String);

fn cmd_fit(a: FitArgs) -> Result<(), Failure> {
    let records = read_bench_csv(BufReader::new(File::open(&a.input)?))?;
    let by_weight = a.by == "weight";
    // group by basis and the parameter held fixed
    let mut groups: Vec<(GroupKey, Vec<(f64, f64)>)> = Vec::new();
    for r in &records {
        let (fixed, x) = if by_weight {
            (format!("prec={}", r.prec), r.weight.k() as f64 + 0.5)
        } else {
            (format!("weight={}", r.weight), r.prec as f64)
        };
        let key = (r.basis, fixed);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push((x, r.seconds)),
            None => groups.push((key, vec![(x, r.seconds)])),
        }
    }
    let mut out = output(a.out.as_deref())?;
    writeln!(out, "basis,fixed,points,exponent,scale,residual")?;
    for ((basis, fixed), pts) in &groups {
        match fit_powerlaw(pts) {
            Ok(f) => writeln!(out, "{basis},{fixed},{},{:.4},{:.6e},{:.4e}", pts.len(), f.exponent, f.scale, f.residual)?,
            Err(e) => eprintln!("skipping {basis} at {fixed}: {e}"),
        }
    }
    out.flush()?;
    Ok(())
}
