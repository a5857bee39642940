//! Truncated polynomial products over the integers and over `Z/nZ`.
//!
//! Integer products go through a multi-modular NTT: each operand is reduced
//! modulo enough 62-bit transform primes to cover the coefficient bound of
//! the result, convolved per prime, and lifted back with Garner's algorithm
//! into the symmetric range.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;
use rayon::prelude::*;

use super::config::{mul_config, MulConfig};
use super::ntt::{cmp_limbs, max_log_len, ntt_primes, sub_limbs, Crt, NttPrime, PRIME_BITS};
use crate::arith::{add_mod, mul_mod};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Algorithm {
    Schoolbook,
    Sparse,
    Transform,
}

fn choose(cfg: &MulConfig, la: usize, lb: usize, nnz_a: usize, nnz_b: usize, len: usize) -> Algorithm {
    if la.min(lb) <= cfg.schoolbook_max {
        return Algorithm::Schoolbook;
    }
    let budget = cfg.sparse_factor * len as f64 * (len as f64).log2().max(1.0);
    if (nnz_a as f64) * (nnz_b as f64) <= budget {
        Algorithm::Sparse
    } else {
        Algorithm::Transform
    }
}

fn effective_len<T>(xs: &[T], len: usize, is_zero: impl Fn(&T) -> bool) -> usize {
    let xs = &xs[..xs.len().min(len)];
    xs.iter().rposition(|x| !is_zero(x)).map_or(0, |i| i + 1)
}

fn ceil_log2(n: usize) -> u64 {
    (usize::BITS - n.saturating_sub(1).leading_zeros()) as u64
}

/// First `len` coefficients of `a * b` (or `a * a` when `b` is `None`).
pub(crate) fn mul_int(a: &[BigInt], b: Option<&[BigInt]>, len: usize) -> Vec<BigInt> {
    let cfg = mul_config();
    let la = effective_len(a, len, BigInt::is_zero);
    let bb = b.unwrap_or(a);
    let lb = effective_len(bb, len, BigInt::is_zero);
    let mut out = vec![BigInt::zero(); len];
    if la == 0 || lb == 0 {
        return out;
    }
    let (a, bb) = (&a[..la], &bb[..lb]);
    let nnz_a = a.iter().filter(|x| !x.is_zero()).count();
    let nnz_b = if b.is_some() {
        bb.iter().filter(|x| !x.is_zero()).count()
    } else {
        nnz_a
    };
    match choose(&cfg, la, lb, nnz_a, nnz_b, len) {
        Algorithm::Schoolbook | Algorithm::Sparse => {
            let nz_b: Vec<(usize, &BigInt)> =
                bb.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
            for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for &(j, y) in &nz_b {
                    if i + j >= len {
                        break;
                    }
                    out[i + j] += x * y;
                }
            }
            out
        }
        Algorithm::Transform => {
            let keep = len.min(la + lb - 1);
            let prod = transform_int(a, b.map(|_| bb), keep, cfg.parallel);
            for (o, v) in out.iter_mut().zip(prod) {
                *o = v;
            }
            out
        }
    }
}

/// First `len` coefficients of `a * b` modulo `n`, inputs reduced.
pub(crate) fn mul_res(a: &[u64], b: Option<&[u64]>, n: u64, len: usize) -> Vec<u64> {
    let cfg = mul_config();
    let la = effective_len(a, len, |x| *x == 0);
    let bb = b.unwrap_or(a);
    let lb = effective_len(bb, len, |x| *x == 0);
    let mut out = vec![0u64; len];
    if la == 0 || lb == 0 {
        return out;
    }
    let (a, bb) = (&a[..la], &bb[..lb]);
    let nnz_a = a.iter().filter(|&&x| x != 0).count();
    let nnz_b = bb.iter().filter(|&&x| x != 0).count();
    match choose(&cfg, la, lb, nnz_a, nnz_b, len) {
        Algorithm::Schoolbook | Algorithm::Sparse => {
            let nz_b: Vec<(usize, u64)> =
                bb.iter().copied().enumerate().filter(|&(_, x)| x != 0).collect();
            for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
                for &(j, y) in &nz_b {
                    if i + j >= len {
                        break;
                    }
                    out[i + j] = add_mod(out[i + j], mul_mod(x, y, n), n);
                }
            }
            out
        }
        Algorithm::Transform => {
            let keep = len.min(la + lb - 1);
            let prod = transform_res(a, b.map(|_| bb), n, keep, cfg.parallel);
            out[..keep].copy_from_slice(&prod);
            out
        }
    }
}

/// Flattened sign/magnitude view of a slice of big integers.
struct Limbed {
    negative: Vec<bool>,
    offsets: Vec<usize>,
    limbs: Vec<u64>,
    max_bits: u64,
}

impl Limbed {
    fn new(xs: &[BigInt]) -> Self {
        let mut negative = Vec::with_capacity(xs.len());
        let mut offsets = Vec::with_capacity(xs.len() + 1);
        let mut limbs = Vec::with_capacity(xs.len());
        let mut max_bits = 0;
        offsets.push(0);
        for x in xs {
            let (sign, digits) = x.to_u64_digits();
            max_bits = max_bits.max(x.bits());
            negative.push(sign == Sign::Minus);
            limbs.extend_from_slice(&digits);
            offsets.push(limbs.len());
        }
        Limbed {
            negative,
            offsets,
            limbs,
            max_bits,
        }
    }

    fn residues(&self, q: &NttPrime) -> Vec<u64> {
        (0..self.negative.len())
            .map(|i| {
                let r = q.reduce_limbs(&self.limbs[self.offsets[i]..self.offsets[i + 1]]);
                let r = if self.negative[i] && r != 0 { q.p - r } else { r };
                q.to_mont(r)
            })
            .collect()
    }
}

fn transform_log_len(la: usize, lb: usize) -> u32 {
    let n = (la + lb - 1).next_power_of_two();
    let log_n = n.trailing_zeros();
    assert!(log_n <= max_log_len(), "series too long for the transform primes");
    log_n
}

fn per_prime<F>(primes: &[NttPrime], parallel: bool, f: F) -> Vec<Vec<u64>>
where
    F: Fn(&NttPrime) -> Vec<u64> + Sync + Send,
{
    if parallel {
        primes.par_iter().map(f).collect()
    } else {
        primes.iter().map(f).collect()
    }
}

fn transform_int(a: &[BigInt], b: Option<&[BigInt]>, keep: usize, parallel: bool) -> Vec<BigInt> {
    let la = Limbed::new(a);
    let lb = b.map(Limbed::new);
    let bits_b = lb.as_ref().map_or(la.max_bits, |l| l.max_bits);
    let shorter = a.len().min(b.map_or(a.len(), |b| b.len()));
    // |c_n| < 2^(bits_a + bits_b) * shorter, plus one bit for the sign
    let bound = la.max_bits + bits_b + ceil_log2(shorter) + 2;
    let count = bound.div_ceil(PRIME_BITS) as usize;
    let primes = ntt_primes(count);
    let log_n = transform_log_len(a.len(), b.map_or(a.len(), |b| b.len()));

    let residues = per_prime(&primes, parallel, |q| {
        let ra = la.residues(q);
        let rb = lb.as_ref().map(|l| l.residues(q));
        q.convolve(ra, rb, log_n, keep)
    });

    let crt = Crt::new(primes);
    let lift = |idx: usize, digits: &mut Vec<u64>, res: &mut Vec<u64>, limbs: &mut Vec<u64>| {
        for (i, r) in residues.iter().enumerate() {
            res[i] = r[idx];
        }
        crt.mixed_radix(res, digits);
        crt.limbs_from_digits(digits, limbs);
        if cmp_limbs(limbs, &crt.half_modulus) == std::cmp::Ordering::Greater {
            let mag = sub_limbs(&crt.modulus, limbs);
            BigInt::from_biguint(Sign::Minus, biguint_from_limbs(&mag))
        } else {
            BigInt::from_biguint(Sign::Plus, biguint_from_limbs(limbs))
        }
    };
    let r = residues.len();
    if parallel {
        (0..keep)
            .into_par_iter()
            .map_init(
                || (vec![0u64; r], vec![0u64; r], Vec::new()),
                |(d, res, l), idx| lift(idx, d, res, l),
            )
            .collect()
    } else {
        let (mut d, mut res, mut l) = (vec![0u64; r], vec![0u64; r], Vec::new());
        (0..keep).map(|idx| lift(idx, &mut d, &mut res, &mut l)).collect()
    }
}

fn transform_res(a: &[u64], b: Option<&[u64]>, n: u64, keep: usize, parallel: bool) -> Vec<u64> {
    let shorter = a.len().min(b.map_or(a.len(), |b| b.len()));
    let nbits = 64 - (n - 1).leading_zeros() as u64;
    let bound = 2 * nbits + ceil_log2(shorter) + 1;
    let count = bound.div_ceil(PRIME_BITS) as usize;
    let primes = ntt_primes(count);
    let log_n = transform_log_len(a.len(), b.map_or(a.len(), |b| b.len()));
    let lift_in = |q: &NttPrime, xs: &[u64]| -> Vec<u64> { xs.iter().map(|&x| q.to_mont(x % q.p)).collect() };
    let residues = per_prime(&primes, parallel, |q| {
        q.convolve(lift_in(q, a), b.map(|b| lift_in(q, b)), log_n, keep)
    });
    // p_0 * ... * p_{i-1} mod n
    let mut radix = Vec::with_capacity(primes.len());
    let mut acc = 1 % n;
    for q in &primes {
        radix.push(acc);
        acc = mul_mod(acc, q.p % n, n);
    }
    let crt = Crt::new(primes);
    let r = residues.len();
    let mut digits = vec![0u64; r];
    let mut res = vec![0u64; r];
    (0..keep)
        .map(|idx| {
            for (i, rr) in residues.iter().enumerate() {
                res[i] = rr[idx];
            }
            crt.mixed_radix(&res, &mut digits);
            digits
                .iter()
                .zip(&radix)
                .fold(0u64, |s, (&d, &w)| add_mod(s, mul_mod(d % n, w, n), n))
        })
        .collect()
}

pub(crate) fn biguint_from_limbs(limbs: &[u64]) -> BigUint {
    if limbs.len() == 1 {
        return BigUint::from(limbs[0]);
    }
    let mut digits = Vec::with_capacity(limbs.len() * 2);
    for &l in limbs {
        digits.push(l as u32);
        digits.push((l >> 32) as u32);
    }
    BigUint::new(digits)
}
