//! End-to-end acceptance checks. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; the exit status is nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use halfweight::bases::{cohen_basis, dim_plus, kohnen_basis, plus_project, rankin_cohen_basis, span_rank, Flavor};
use halfweight::bench::run_bench;
use halfweight::fit::fit_powerlaw;
use halfweight::forms::{eis_level1, theta};
use halfweight::hecke::eigenforms;
use halfweight::series::{counted, ps_mul, ps_pow, ps_reduce, ps_scale, ps_sub};
use halfweight::{is_plus, CoeffRing, Construction, FormBasis, HalfWeight, QExpansion};

const Q: CoeffRing = CoeffRing::Rational;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ints(f: &QExpansion) -> Vec<BigRational> {
    (0..f.prec()).map(|n| f.coeff(n).as_rational().unwrap().clone()).collect()
}

/// `dim M_{2k}(SL_2(Z))`, from the valence formula.
fn dim_level_one(weight: u32) -> usize {
    let w = weight as usize;
    if w % 12 == 2 {
        w / 12
    } else {
        w / 12 + 1
    }
}

/// The Rankin-Cohen basis needs an Eisenstein series of weight >= 4 (even k)
/// or >= 1 (odd k); for k = 2 that would be E_2.
fn rc_defined(k: u32) -> bool {
    k >= 3
}

fn projected(w: HalfWeight, prec: usize) -> halfweight::Result<FormBasis> {
    plus_project(&cohen_basis(w, prec, Q)?, prec)
}

fn criterion_1() -> Outcome {
    for k in 2..=40u32 {
        let w = HalfWeight::new(k);
        let prec = 4 * k as usize + 10;
        let want = dim_level_one(2 * k);
        let cohen = cohen_basis(w, prec, Q).map_err(|e| e.to_string())?;
        check(cohen.len() == k as usize / 2 + 1, || format!("k={k}: {} Cohen forms", cohen.len()))?;
        check(dim_plus(w).unwrap() == want, || format!("k={k}: dim_plus"))?;
        let proj = plus_project(&cohen, prec).map_err(|e| e.to_string())?;
        check(proj.len() == want, || format!("k={k}: projection gives {}, want {want}", proj.len()))?;
        let kohnen = kohnen_basis(w, prec, Q).map_err(|e| e.to_string())?;
        check(kohnen.len() == want, || format!("k={k}: Kohnen gives {}, want {want}", kohnen.len()))?;
        if k % 2 == 0 && rc_defined(k) {
            let rc = rankin_cohen_basis(w, prec, Q).map_err(|e| e.to_string())?;
            check(rc.len() == want, || format!("k={k}: Rankin-Cohen gives {}, want {want}", rc.len()))?;
        }
    }
    check(cohen_basis(HalfWeight::new(6), 50, Q).unwrap().len() == 4, || "13/2 full space".into())?;
    Ok("k = 2..40, all constructions".into())
}

fn same_span(a: &FormBasis, b: &FormBasis, prec: usize) -> Result<(), String> {
    let ra = span_rank(&a.series(), prec).map_err(|e| e.to_string())?;
    let rb = span_rank(&b.series(), prec).map_err(|e| e.to_string())?;
    let mut both = a.series();
    both.extend(b.series());
    let rab = span_rank(&both, prec).map_err(|e| e.to_string())?;
    check(ra == a.len() && rb == b.len() && ra == rb && rab == ra, || {
        format!("{} vs {}: ranks {ra}, {rb}, stacked {rab}", a.construction, b.construction)
    })
}

fn criterion_2() -> Outcome {
    for k in 2..=40u32 {
        let w = HalfWeight::new(k);
        let prec = 4 * k as usize + 10;
        let e = |r: halfweight::Result<FormBasis>| r.map_err(|e| format!("k={k}: {e}"));
        let kohnen = e(kohnen_basis(w, prec, Q))?;
        let proj = e(projected(w, prec))?;
        same_span(&kohnen, &proj, prec).map_err(|m| format!("k={k}: {m}"))?;
        if !rc_defined(k) {
            continue;
        }
        let rc = e(rankin_cohen_basis(w, prec, Q))?;
        if rc.flavor == Flavor::Plus {
            same_span(&rc, &kohnen, prec).map_err(|m| format!("k={k}: {m}"))?;
        } else {
            same_span(&rc, &e(cohen_basis(w, prec, Q))?, prec).map_err(|m| format!("k={k}: {m}"))?;
        }
    }
    Ok("k = 2..40 at precision 4k+10".into())
}

/// Number of `(x_1..x_a)` in `Z^a` with `sum x_i^2 = n`, for all `n < len`.
fn representation_counts(a: usize, len: usize) -> Vec<u64> {
    let mut counts = vec![0u64; len];
    counts[0] = 1;
    for _ in 0..a {
        let mut next = vec![0u64; len];
        for (m, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut x: i64 = 0;
            loop {
                let s = m + (x * x) as usize;
                if s >= len {
                    break;
                }
                next[s] += if x == 0 { c } else { 2 * c };
                x += 1;
            }
        }
        counts = next;
    }
    counts
}

fn criterion_3() -> Outcome {
    let len = 2000;
    let th = theta(len, Q);
    for a in 2..=5usize {
        let got = ints(&ps_pow(&th, a as u64).map_err(|e| e.to_string())?);
        let want = representation_counts(a, len);
        for n in 0..len {
            check(got[n] == BigRational::from_integer(want[n].into()), || format!("theta^{a} at n={n}"))?;
        }
    }
    Ok("a = 2..5, n < 2000".into())
}

/// `q prod_{n < len} (1 - q^n)^24` truncated to `len` terms.
fn delta_product(len: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); len];
    p[1] = BigInt::one();
    for n in 1..len {
        for _ in 0..24 {
            for i in (n..len).rev() {
                let t = p[i - n].clone();
                p[i] -= t;
            }
        }
    }
    p
}

fn criterion_4() -> Outcome {
    let len = 500;
    let e4 = eis_level1(4, len, Q, true).map_err(|e| e.to_string())?;
    let e6 = eis_level1(6, len, Q, true).map_err(|e| e.to_string())?;
    let e = |r: halfweight::Result<QExpansion>| r.map_err(|e| e.to_string());
    let cube = e(ps_mul(&e4, &e(ps_mul(&e4, &e4))?))?;
    let diff = e(ps_sub(&cube, &e(ps_mul(&e6, &e6))?))?;
    let delta = e(ps_scale(&diff, &Q.embed(&BigRational::new(1.into(), 1728.into())).unwrap()))?;
    let want: Vec<BigRational> = delta_product(len).into_iter().map(BigRational::from_integer).collect();
    check(ints(&delta) == want, || "(E4^3 - E6^2)/1728 differs from the product".into())?;
    let br = e(halfweight::rc_bracket(&e4, &BigRational::from_integer(4.into()), &e6, &BigRational::from_integer(6.into()), 1))?;
    let b = ints(&br);
    let c = &b[1];
    check(!c.is_zero(), || "[E4,E6]_1 has a_1 = 0".into())?;
    for n in 0..len {
        check(b[n] == c * &want[n], || format!("[E4,E6]_1 not proportional at n={n}"))?;
    }
    Ok(format!("500 coefficients, [E4,E6]_1 = {c} Delta"))
}

fn criterion_5() -> Outcome {
    let w = HalfWeight::new(6);
    let tau: Vec<BigInt> = delta_product(4);
    let sigma11 = |p: i64| BigInt::from(1 + p.pow(11));
    let mut used = Vec::new();
    for (name, basis) in [
        ("kohnen", kohnen_basis(w, 9 * 20, Q)),
        ("rankin-cohen", rankin_cohen_basis(w, 9 * 20, Q)),
        ("projected", projected(w, 9 * 20)),
    ] {
        let basis = basis.map_err(|e| e.to_string())?;
        for p in [2u64, 3] {
            let data = eigenforms(&basis, p, 20, 20).map_err(|e| format!("{name}, p={p}: {e}"))?;
            let mut got: Vec<BigRational> = data.split.eigenspaces.iter().map(|s| s.value.clone()).collect();
            got.sort();
            let mut want = vec![
                BigRational::from_integer(sigma11(p as i64)),
                BigRational::from_integer(tau[p as usize].clone()),
            ];
            want.sort();
            check(got == want && data.split.unsplit.is_empty(), || format!("{name}, p={p}: eigenvalues {got:?}"))?;
        }
        used.push(name);
    }
    Ok(format!("T4 {{2049, -24}}, T9 {{177148, 252}} on {}", used.join(", ")))
}

fn criterion_6() -> Outcome {
    let prec = 1000;
    let mut forms = 0;
    for k in 2..=40u32 {
        let w = HalfWeight::new(k);
        let e = |r: halfweight::Result<FormBasis>| r.map_err(|e| format!("k={k}: {e}"));
        let mut bases = vec![e(kohnen_basis(w, prec, Q))?, e(projected(w, prec))?];
        if rc_defined(k) {
            let rc = e(rankin_cohen_basis(w, prec, Q))?;
            if rc.flavor == Flavor::Plus {
                bases.push(rc);
            }
        }
        for b in &bases {
            for f in &b.forms {
                check(f.series.prec() == prec && is_plus(&f.series, w), || {
                    format!("k={k}: {} form {:?} violates the plus condition", b.construction, f.label)
                })?;
                forms += 1;
            }
        }
    }
    Ok(format!("{forms} plus-space forms, k = 2..40, precision 1000"))
}

fn criterion_7() -> Outcome {
    let w = HalfWeight::new(6);
    let p = 2_147_483_629u64;
    let fp = CoeffRing::prime_field(p).map_err(|e| e.to_string())?;
    let exact = cohen_basis(w, 10_000, Q).map_err(|e| e.to_string())?;
    let modular = cohen_basis(w, 10_000, fp).map_err(|e| e.to_string())?;
    for (a, b) in exact.forms.iter().zip(&modular.forms) {
        let r = ps_reduce(&a.series, fp).map_err(|e| e.to_string())?;
        check(r == b.series, || format!("{} differs mod {p}", a.label))?;
    }
    Ok(format!("weight 13/2 Cohen basis, D = 10^4, mod {p}"))
}

fn criterion_8() -> Outcome {
    let w = HalfWeight::new(6);
    let mut msg = Vec::new();
    for (prec, limit) in [(100_000usize, 30.0), (1_000_000, 300.0)] {
        let start = Instant::now();
        let b = cohen_basis(w, prec, Q).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        check(b.len() == 4 && b.prec() == prec, || "wrong basis".into())?;
        check(secs <= limit, || format!("D={prec}: {secs:.1} s > {limit} s"))?;
        msg.push(format!("D={prec}: {secs:.1} s"));
    }
    Ok(msg.join(", "))
}

fn criterion_9() -> Outcome {
    let bases = [Construction::Cohen, Construction::Kohnen, Construction::RankinCohen];
    let ks = [12u32, 20, 50, 100];
    let mut by_k = vec![Vec::new(); 3];
    let mut at_20 = [None; 3];
    for &k in &ks {
        for (i, &b) in bases.iter().enumerate() {
            let r = run_bench(b, HalfWeight::new(k), 100_000, Q, 1).map_err(|e| e.to_string())?;
            println!("    {r}");
            by_k[i].push((k as f64 + 0.5, r.seconds));
            if k == 20 {
                at_20[i] = Some(r.seconds);
            }
        }
    }
    let fk: Vec<f64> = by_k.iter().map(|p| fit_powerlaw(p).unwrap().exponent).collect();
    let mut fd = Vec::new();
    for (i, &b) in bases.iter().enumerate() {
        let mut pts = vec![(1e5, at_20[i].unwrap())];
        for prec in [10_000usize, 1_000_000] {
            let r = run_bench(b, HalfWeight::new(20), prec, Q, 1).map_err(|e| e.to_string())?;
            println!("    {r}");
            pts.push((prec as f64, r.seconds));
        }
        fd.push(fit_powerlaw(&pts).unwrap().exponent);
    }
    let summary = format!(
        "f(k): cohen {:.2}, kohnen {:.2}, rankin-cohen {:.2}; g(D): {:.2}, {:.2}, {:.2}",
        fk[0], fk[1], fk[2], fd[0], fd[1], fd[2]
    );
    let ok = (1.3..=2.4).contains(&fk[0])
        && (1.3..=2.4).contains(&fk[1])
        && fk[2] > fk[1]
        && fd.iter().all(|a| (1.0..=1.6).contains(a));
    check(ok, || summary.clone())?;
    Ok(summary)
}

fn criterion_10() -> Outcome {
    let count = |b: Construction, k: u32| -> Result<u64, String> {
        let prec = 4 * k as usize + 10;
        let (r, n) = counted(|| match b {
            Construction::Cohen => cohen_basis(HalfWeight::new(k), prec, Q),
            Construction::Kohnen => kohnen_basis(HalfWeight::new(k), prec, Q),
            _ => rankin_cohen_basis(HalfWeight::new(k), prec, Q),
        });
        r.map_err(|e| e.to_string())?;
        Ok(n)
    };
    let mut msg = Vec::new();
    for b in [Construction::Cohen, Construction::Kohnen, Construction::RankinCohen] {
        let mut worst: (f64, f64) = (f64::INFINITY, 0.0);
        for k in [24u32, 30, 36, 40] {
            let ratio = count(b, 2 * k)? as f64 / count(b, k)? as f64;
            let ok = match b {
                Construction::RankinCohen => (3.0..=5.0).contains(&ratio),
                _ => ratio <= 2.5,
            };
            check(ok, || format!("{b}: count(2k)/count(k) = {ratio:.2} at k={k}"))?;
            worst = (worst.0.min(ratio), worst.1.max(ratio));
        }
        msg.push(format!("{b} ratio {:.2}..{:.2}", worst.0, worst.1));
    }
    Ok(format!("{} (k = 24, 30, 36, 40)", msg.join(", ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("dimension table", criterion_1),
        ("span equality", criterion_2),
        ("theta powers", criterion_3),
        ("Delta cross-check", criterion_4),
        ("Hecke eigenvalues", criterion_5),
        ("plus-space pattern", criterion_6),
        ("ring consistency", criterion_7),
        ("performance", criterion_8),
        ("exponent fits", criterion_9),
        ("multiplication counts", criterion_10),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1} s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
