//! Number-theoretic scalars: Bernoulli numbers (plain and twisted by the
//! character mod 4), divisor sums, characters and symbols.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::pow_mod;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `B_0, ..., B_n` from `sum_{j=0}^{m} C(m+1, j) B_j = 0`, so `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        // binomials C(m+1, j)
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += bj * BigRational::from_integer(binom.clone());
            }
            binom = binom * (m + 1 - j) / (j + 1);
        }
        // binom now holds C(m+1, m) = m+1
        b.push(-acc / BigRational::from_integer(binom));
    }
    b
}

pub fn bernoulli(k: usize) -> BigRational {
    bernoulli_numbers(k).pop().unwrap()
}

/// `B_k^chi` for the primitive character mod 4, read off
/// `t (e^t - e^{3t}) / (e^{4t} - 1) = sum_k B_k^chi t^k / k!`.
pub fn gen_bernoulli_chi4(k: usize) -> BigRational {
    gen_bernoulli_chi4_list(k).pop().unwrap()
}

pub fn gen_bernoulli_chi4_list(k: usize) -> Vec<BigRational> {
    let len = k + 1;
    let mut fact = vec![BigInt::one(); len + 2];
    for i in 1..len + 2 {
        fact[i] = &fact[i - 1] * i;
    }
    // numerator / t = e^t - e^{3t}; denominator / t = (e^{4t} - 1) / t
    let num: Vec<BigRational> = (0..len)
        .map(|j| {
            let c = BigInt::one() - BigInt::from(3).pow(j as u32);
            BigRational::new(c, fact[j].clone())
        })
        .collect();
    let den: Vec<BigRational> = (0..len)
        .map(|j| BigRational::new(BigInt::from(4).pow(j as u32 + 1), fact[j + 1].clone()))
        .collect();
    let mut quot: Vec<BigRational> = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc = num[n].clone();
        for i in 0..n {
            acc -= &quot[i] * &den[n - i];
        }
        quot.push(acc / &den[0]);
    }
    quot.into_iter()
        .enumerate()
        .map(|(j, c)| c * BigRational::from_integer(fact[j].clone()))
        .collect()
}

/// `sigma_r(n) = sum_{d | n} d^r` by trial division.
pub fn sigma(r: u32, n: u64) -> BigInt {
    assert!(n > 0);
    let mut acc = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            acc += BigInt::from(d).pow(r);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(r);
            }
        }
        d += 1;
    }
    acc
}

/// `sigma_r(n)` for `0 <= n < len` (entry 0 is 0) by one divisor sieve.
pub fn sigma_table(r: u32, len: usize) -> Vec<BigInt> {
    twisted_divisor_table(r, len, |_| 1, |_| 1)
}

/// `sum_{d e = n} left(d) right(e) d^r` for `0 <= n < len`, entry 0 is 0.
pub fn twisted_divisor_table(
    r: u32,
    len: usize,
    left: impl Fn(u64) -> i8,
    right: impl Fn(u64) -> i8,
) -> Vec<BigInt> {
    // u128 accumulation when every partial sum provably fits
    let bits_needed = (r as f64) * (len.max(2) as f64).log2() + 2.0 * (len.max(2) as f64).log2().log2().max(1.0) + 4.0;
    if bits_needed < 126.0 {
        let mut table = vec![0i128; len];
        for d in 1..len {
            let l = left(d as u64);
            if l == 0 {
                continue;
            }
            let dr = (d as i128).pow(r);
            for (e, n) in (d..len).step_by(d).enumerate() {
                let s = l * right(e as u64 + 1);
                match s {
                    1 => table[n] += dr,
                    -1 => table[n] -= dr,
                    _ => {}
                }
            }
        }
        return table.into_iter().map(BigInt::from).collect();
    }
    let mut table = vec![BigInt::zero(); len];
    for d in 1..len {
        let l = left(d as u64);
        if l == 0 {
            continue;
        }
        let dr = BigInt::from(d).pow(r);
        for (e, n) in (d..len).step_by(d).enumerate() {
            match l * right(e as u64 + 1) {
                1 => table[n] += &dr,
                -1 => table[n] -= &dr,
                _ => {}
            }
        }
    }
    table
}

/// Residue version of [`twisted_divisor_table`] modulo `m`.
pub fn twisted_divisor_table_mod(
    r: u32,
    len: usize,
    m: u64,
    left: impl Fn(u64) -> i8,
    right: impl Fn(u64) -> i8,
) -> Vec<u64> {
    let mut table = vec![0u64; len];
    for d in 1..len {
        let l = left(d as u64);
        if l == 0 {
            continue;
        }
        let dr = pow_mod(d as u64, r as u64, m);
        let neg = (m - dr) % m;
        for (e, n) in (d..len).step_by(d).enumerate() {
            let add = match l * right(e as u64 + 1) {
                1 => dr,
                -1 => neg,
                _ => continue,
            };
            table[n] = crate::arith::add_mod(table[n], add, m);
        }
    }
    table
}

/// The primitive character mod 4.
pub fn chi4(n: i64) -> i8 {
    match n.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// Legendre symbol `(a | p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i8 {
    assert!(p % 2 == 1, "Legendre symbol needs an odd prime");
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(a | p)` for a prime `p`; for `p = 2` it is 0 on even
/// `a`, 1 on `a = +-1 mod 8` and -1 on `a = +-3 mod 8`.
pub fn kronecker_prime(a: i64, p: u64) -> i8 {
    if p == 2 {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        }
    } else {
        legendre(a, p)
    }
}

/// Generalized binomial `x (x-1) ... (x-m+1) / m!`.
pub fn half_binomial(x: &BigRational, m: usize) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..m {
        acc *= x - BigRational::from_integer(i.into());
        acc /= BigRational::from_integer((i + 1).into());
    }
    acc
}

/// `zeta(1 - n) = -B_n / n` for even `n >= 2`.
pub fn zeta_one_minus(n: usize) -> BigRational {
    -bernoulli(n) / BigRational::from_integer(n.into())
}

/// `-B_k / (2k)`, the constant term of the level-one Eisenstein series.
pub fn eisenstein_constant(k: usize) -> BigRational {
    -bernoulli(k) / rat(2 * k as i64, 1)
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
