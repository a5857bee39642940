//! Number-theoretic transforms over 62-bit primes in Montgomery form, and
//! the multi-modular convolution built on them.

use std::sync::{Mutex, OnceLock};

use crate::arith::{is_prime, pow_mod};

/// Exponent of the power of two dividing `p - 1` for every transform prime.
const TWO_ADICITY: u32 = 32;

#[derive(Clone, Copy, Debug)]
pub(crate) struct NttPrime {
    pub p: u64,
    /// `-p^{-1} mod 2^64`
    neg_inv: u64,
    /// `2^128 mod p`, the Montgomery form of `2^64`
    r2: u64,
    /// primitive `2^TWO_ADICITY`-th root of unity (plain residue)
    root: u64,
}

impl NttPrime {
    fn new(p: u64) -> Self {
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        let c = (p - 1) >> TWO_ADICITY;
        let g = (2..)
            .find(|&g| pow_mod(g, (p - 1) / 2, p) == p - 1)
            .unwrap();
        NttPrime {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
            root: pow_mod(g, c, p),
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline(always)]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a, self.r2)
    }

    #[inline(always)]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.mul(a, 1)
    }

    /// Reduces a little-endian multi-limb magnitude modulo `p`.
    #[inline]
    pub fn reduce_limbs(&self, limbs: &[u64]) -> u64 {
        let mut acc = 0u64;
        for &d in limbs.iter().rev() {
            // acc * 2^64 + d
            acc = self.add(self.mul(acc, self.r2), d % self.p);
        }
        acc
    }

    fn pow_mont(&self, base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Powers `w^0, ..., w^{n/2-1}` of a primitive n-th root (inverse root if
    /// `inverse`), Montgomery form.
    fn twiddles(&self, log_n: u32, inverse: bool) -> Vec<u64> {
        let n = 1usize << log_n;
        let mut w = self.to_mont(pow_mod(self.root, 1 << (TWO_ADICITY - log_n), self.p));
        if inverse {
            w = self.pow_mont(w, (n as u64) - 1);
        }
        let half = n / 2;
        let mut out = Vec::with_capacity(half.max(1));
        let mut cur = self.to_mont(1);
        for _ in 0..half.max(1) {
            out.push(cur);
            cur = self.mul(cur, w);
        }
        out
    }

    /// Decimation-in-frequency transform: natural order in, bit-reversed out.
    fn forward(&self, a: &mut [u64], tw: &[u64]) {
        let n = a.len();
        let mut half = n / 2;
        let mut stride = 1;
        while half >= 1 {
            for block in a.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for j in 0..half {
                    let u = lo[j];
                    let v = hi[j];
                    lo[j] = self.add(u, v);
                    hi[j] = self.mul(self.sub(u, v), tw[j * stride]);
                }
            }
            half /= 2;
            stride *= 2;
        }
    }

    /// Decimation-in-time inverse transform: bit-reversed in, natural out,
    /// without the final `1/n` scaling.
    fn inverse(&self, a: &mut [u64], tw: &[u64]) {
        let n = a.len();
        let mut half = 1;
        let mut stride = n / 2;
        while half < n {
            for block in a.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for j in 0..half {
                    let u = lo[j];
                    let v = self.mul(hi[j], tw[j * stride]);
                    lo[j] = self.add(u, v);
                    hi[j] = self.sub(u, v);
                }
            }
            half *= 2;
            stride /= 2;
        }
    }

    /// Cyclic convolution of the Montgomery-form inputs; returns plain
    /// residues of the first `keep` output coefficients.
    pub fn convolve(&self, mut a: Vec<u64>, b: Option<Vec<u64>>, log_n: u32, keep: usize) -> Vec<u64> {
        let n = 1usize << log_n;
        a.resize(n, 0);
        let fw = self.twiddles(log_n, false);
        self.forward(&mut a, &fw);
        match b {
            Some(mut b) => {
                b.resize(n, 0);
                self.forward(&mut b, &fw);
                for (x, y) in a.iter_mut().zip(&b) {
                    *x = self.mul(*x, *y);
                }
            }
            None => {
                for x in a.iter_mut() {
                    *x = self.mul(*x, *x);
                }
            }
        }
        drop(fw);
        let bw = self.twiddles(log_n, true);
        self.inverse(&mut a, &bw);
        // 1/n in Montgomery form, then one more `mul` leaves plain residues
        let n_inv = self.pow_mont(self.to_mont(n as u64 % self.p), self.p - 2);
        a.truncate(keep);
        for x in a.iter_mut() {
            *x = self.from_mont(self.mul(*x, n_inv));
        }
        a
    }
}

static PRIMES: OnceLock<Mutex<Vec<NttPrime>>> = OnceLock::new();

/// The first `count` transform primes `c * 2^32 + 1` below `2^62`, in
/// decreasing order.
pub(crate) fn ntt_primes(count: usize) -> Vec<NttPrime> {
    let lock = PRIMES.get_or_init(|| Mutex::new(Vec::new()));
    let mut primes = lock.lock().unwrap();
    let mut c = match primes.last() {
        Some(q) => (q.p - 1) >> TWO_ADICITY,
        None => 1u64 << (62 - TWO_ADICITY),
    };
    while primes.len() < count {
        c -= 1;
        let p = (c << TWO_ADICITY) + 1;
        assert!(p > 1 << 61, "ran out of transform primes");
        if is_prime(p) {
            primes.push(NttPrime::new(p));
        }
    }
    primes[..count].to_vec()
}

/// Bits guaranteed by each transform prime (`p > 2^61`).
pub(crate) const PRIME_BITS: u64 = 61;

pub(crate) fn max_log_len() -> u32 {
    TWO_ADICITY
}

/// Garner reconstruction tables for a fixed list of primes.
pub(crate) struct Crt {
    pub primes: Vec<NttPrime>,
    /// `prefix[i][j]` = Montgomery form of `p_0 * ... * p_{j-1} mod p_i`, j < i
    prefix: Vec<Vec<u64>>,
    /// Montgomery form of `(p_0 * ... * p_{i-1})^{-1} mod p_i`
    inv_prefix: Vec<u64>,
    /// product of all primes, little-endian limbs
    pub modulus: Vec<u64>,
    pub half_modulus: Vec<u64>,
}

impl Crt {
    pub fn new(primes: Vec<NttPrime>) -> Self {
        let r = primes.len();
        let mut prefix = Vec::with_capacity(r);
        let mut inv_prefix = Vec::with_capacity(r);
        for (i, pi) in primes.iter().enumerate() {
            let mut row = Vec::with_capacity(i);
            let mut acc = 1u64;
            for pj in &primes[..i] {
                row.push(pi.to_mont(acc));
                acc = crate::arith::mul_mod(acc, pj.p % pi.p, pi.p);
            }
            prefix.push(row);
            let inv = pow_mod(acc, pi.p - 2, pi.p);
            inv_prefix.push(pi.to_mont(inv));
        }
        let mut modulus = vec![1u64];
        for q in &primes {
            mul_small_add(&mut modulus, q.p, 0);
        }
        let mut half_modulus = modulus.clone();
        shr1(&mut half_modulus);
        Crt {
            primes,
            prefix,
            inv_prefix,
            modulus,
            half_modulus,
        }
    }

    /// Mixed-radix digits `v` with `x = v_0 + v_1 p_0 + v_2 p_0 p_1 + ...`.
    #[inline]
    pub fn mixed_radix(&self, residues: &[u64], digits: &mut [u64]) {
        for i in 0..self.primes.len() {
            let pi = &self.primes[i];
            let mut acc = 0u64;
            for j in 0..i {
                acc = pi.add(acc, pi.mul(digits[j] % pi.p, self.prefix[i][j]));
            }
            digits[i] = pi.mul(pi.sub(residues[i], acc), self.inv_prefix[i]);
        }
    }

    /// Value of the mixed-radix digits as little-endian limbs.
    pub fn limbs_from_digits(&self, digits: &[u64], out: &mut Vec<u64>) {
        out.clear();
        let r = digits.len();
        out.push(digits[r - 1]);
        for i in (0..r - 1).rev() {
            mul_small_add(out, self.primes[i].p, digits[i]);
        }
        while out.len() > 1 && *out.last().unwrap() == 0 {
            out.pop();
        }
    }
}

/// `x = x * m + a` on little-endian limbs.
pub(crate) fn mul_small_add(x: &mut Vec<u64>, m: u64, a: u64) {
    let mut carry = a as u128;
    for limb in x.iter_mut() {
        let t = *limb as u128 * m as u128 + carry;
        *limb = t as u64;
        carry = t >> 64;
    }
    if carry > 0 {
        x.push(carry as u64);
    }
}

fn shr1(x: &mut Vec<u64>) {
    let mut carry = 0u64;
    for limb in x.iter_mut().rev() {
        let next = *limb & 1;
        *limb = (*limb >> 1) | (carry << 63);
        carry = next;
    }
    while x.len() > 1 && *x.last().unwrap() == 0 {
        x.pop();
    }
}

pub(crate) fn cmp_limbs(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    let la = a.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1);
    let lb = b.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1);
    la.cmp(&lb).then_with(|| {
        for i in (0..la).rev() {
            match a[i].cmp(&b[i]) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// `a - b` for `a >= b`.
pub(crate) fn sub_limbs(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len());
    let mut borrow = 0u64;
    for i in 0..a.len() {
        let bi = b.get(i).copied().unwrap_or(0);
        let (d1, o1) = a[i].overflowing_sub(bi);
        let (d2, o2) = d1.overflowing_sub(borrow);
        out.push(d2);
        borrow = (o1 || o2) as u64;
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}
