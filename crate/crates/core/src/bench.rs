//! Timing and multiplication counts for basis construction.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use crate::bases::{
    cohen_basis, default_linalg_prec, kohnen_basis, plus_project, rankin_cohen_basis, Construction,
    Flavor, FormBasis,
};
use crate::error::{Error, Result};
use crate::forms::HalfWeight;
use crate::ring::CoeffRing;
use crate::series::counted;

pub const CSV_HEADER: &str = "basis,weight_k,flavor,ring,prec,seconds,mults";

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub basis: Construction,
    pub weight: HalfWeight,
    pub flavor: Flavor,
    pub ring: CoeffRing,
    pub prec: usize,
    pub seconds: f64,
    pub mults: u64,
}

impl fmt::Display for BenchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{:.6},{}",
            self.basis,
            self.weight.k(),
            self.flavor,
            self.ring,
            self.prec,
            self.seconds,
            self.mults
        )
    }
}

/// Builds the basis named by `construction`. `Projected` is the Cohen basis
/// followed by plus-space projection.
pub fn build_basis(construction: Construction, w: HalfWeight, prec: usize, ring: CoeffRing) -> Result<FormBasis> {
    match construction {
        Construction::Cohen => cohen_basis(w, prec, ring),
        Construction::Kohnen => kohnen_basis(w, prec, ring),
        Construction::RankinCohen => rankin_cohen_basis(w, prec, ring),
        Construction::Projected => {
            let b = cohen_basis(w, prec, ring)?;
            plus_project(&b, default_linalg_prec(w).min(prec))
        }
    }
}

/// Median wall time over `reps` runs, with the multiplication count of one.
pub fn run_bench(
    construction: Construction,
    w: HalfWeight,
    prec: usize,
    ring: CoeffRing,
    reps: usize,
) -> Result<BenchRecord> {
    if prec == 0 {
        return Err(Error::DegenerateInput("precision must be positive".into()));
    }
    let mut times = Vec::with_capacity(reps.max(1));
    let mut mults = 0;
    let mut flavor = Flavor::Full;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let (basis, m) = counted(|| build_basis(construction, w, prec, ring));
        times.push(start.elapsed().as_secs_f64());
        let basis = basis?;
        mults = m;
        flavor = basis.flavor;
    }
    times.sort_by(f64::total_cmp);
    let n = times.len();
    let seconds = if n % 2 == 1 { times[n / 2] } else { (times[n / 2 - 1] + times[n / 2]) / 2.0 };
    Ok(BenchRecord {
        basis: construction,
        weight: w,
        flavor,
        ring,
        prec,
        seconds: seconds.max(f64::MIN_POSITIVE),
        mults,
    })
}

pub fn write_bench_csv<W: Write>(mut out: W, records: &[BenchRecord]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{r}")?;
    }
    out.flush()?;
    Ok(())
}

/// Parses a file written by [`write_bench_csv`].
pub fn read_bench_csv<R: std::io::BufRead>(input: R) -> Result<Vec<BenchRecord>> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?;
    if header.as_deref().map(str::trim) != Some(CSV_HEADER) {
        return Err(Error::Parse(format!("expected header {CSV_HEADER}")));
    }
    let mut out = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(Error::Parse(format!("expected 7 fields in {line:?}")));
        }
        let num = |s: &str| Error::Parse(format!("bad number {s:?} in {line:?}"));
        out.push(BenchRecord {
            basis: f[0].parse()?,
            weight: HalfWeight::new(f[1].parse().map_err(|_| num(f[1]))?),
            flavor: f[2].parse()?,
            ring: f[3].parse()?,
            prec: f[4].parse().map_err(|_| num(f[4]))?,
            seconds: f[5].parse().map_err(|_| num(f[5]))?,
            mults: f[6].parse().map_err(|_| num(f[6]))?,
        });
    }
    Ok(out)
}
