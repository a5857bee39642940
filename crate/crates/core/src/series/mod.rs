//! Truncated q-expansions and their arithmetic.
//!
//! A [`QExpansion`] holds the coefficients `a_0, ..., a_{D-1}` of a power
//! series in `q` over a [`CoeffRing`]. Over the rationals the coefficients are
//! kept as integer numerators over one common positive denominator, reduced so
//! that the denominator and all numerators are jointly coprime; multiplication
//! therefore works on integer polynomials. Over the modular rings they are
//! least nonnegative residues.
//!
//! Binary operations truncate to the smaller precision. [`ps_vshift`] is the
//! only operation that raises precision.

mod config;
mod counter;
mod mul;
mod ntt;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use config::{mul_config, set_mul_config, MulConfig};
pub use counter::{counted, MultCounter};

use crate::arith::{add_mod, inv_mod, mul_mod};
use crate::error::{Error, Result};
use crate::ring::{bigint_mod, CoeffRing, RingElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Coeffs {
    Rational { den: BigInt, nums: Vec<BigInt> },
    Residue(Vec<u64>),
}

impl Coeffs {
    fn len(&self) -> usize {
        match self {
            Coeffs::Rational { nums, .. } => nums.len(),
            Coeffs::Residue(r) => r.len(),
        }
    }

    fn count_nonzero(&self) -> usize {
        match self {
            Coeffs::Rational { nums, .. } => nums.iter().filter(|x| !x.is_zero()).count(),
            Coeffs::Residue(r) => r.iter().filter(|&&x| x != 0).count(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    ring: CoeffRing,
    coeffs: Coeffs,
    nonzeros: usize,
}

impl QExpansion {
    fn build(ring: CoeffRing, coeffs: Coeffs) -> Self {
        let nonzeros = coeffs.count_nonzero();
        QExpansion {
            ring,
            coeffs,
            nonzeros,
        }
    }

    /// Series `(nums[0] + nums[1] q + ...) / den`.
    pub fn from_integer_parts(ring: CoeffRing, nums: Vec<BigInt>, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::NonInvertibleDenominator { index: None });
        }
        match ring.modulus() {
            None => Ok(Self::rational_normalized(nums, den)),
            Some(n) => {
                let d = bigint_mod(&den, n);
                let inv = match inv_mod(d, n) {
                    Some(inv) => inv,
                    None => {
                        let q = Self::rational_normalized(nums, den);
                        return Err(Error::NonInvertibleDenominator {
                            index: q.first_bad_denominator(ring.prime().unwrap()),
                        });
                    }
                };
                let res = nums.iter().map(|x| mul_mod(bigint_mod(x, n), inv, n)).collect();
                Ok(Self::build(ring, Coeffs::Residue(res)))
            }
        }
    }

    pub fn from_ints(ring: CoeffRing, nums: Vec<BigInt>) -> Self {
        Self::from_integer_parts(ring, nums, BigInt::one()).expect("unit denominator")
    }

    pub fn from_i64s(ring: CoeffRing, xs: &[i64]) -> Self {
        Self::from_ints(ring, xs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn from_rationals(ring: CoeffRing, xs: &[BigRational]) -> Result<Self> {
        let den = crate::ring::common_denominator(xs);
        let nums = xs
            .iter()
            .map(|x| x.numer() * (&den / x.denom()))
            .collect();
        Self::from_integer_parts(ring, nums, den).map_err(|e| match e {
            Error::NonInvertibleDenominator { .. } => {
                let p = BigInt::from(ring.prime().unwrap());
                let index = xs.iter().position(|x| (x.denom() % &p).is_zero());
                Error::NonInvertibleDenominator { index }
            }
            e => e,
        })
    }

    pub fn from_elems(ring: CoeffRing, xs: &[RingElem]) -> Result<Self> {
        if let Some(bad) = xs.iter().find(|x| x.ring() != ring) {
            return Err(Error::RingMismatch(ring.to_string(), bad.ring().to_string()));
        }
        match ring.modulus() {
            None => {
                let qs: Vec<BigRational> = xs.iter().map(|x| x.as_rational().unwrap().clone()).collect();
                Self::from_rationals(ring, &qs)
            }
            Some(_) => Ok(Self::build(
                ring,
                Coeffs::Residue(xs.iter().map(|x| x.residue().unwrap()).collect()),
            )),
        }
    }

    pub(crate) fn from_residues(ring: CoeffRing, res: Vec<u64>) -> Self {
        debug_assert!(ring.modulus().is_some());
        Self::build(ring, Coeffs::Residue(res))
    }

    fn rational_normalized(mut nums: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for x in nums.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for x in &nums {
                if g.is_one() {
                    break;
                }
                if !x.is_zero() {
                    g = g.gcd(x);
                }
            }
            if !g.is_one() {
                den /= &g;
                for x in nums.iter_mut() {
                    *x /= &g;
                }
            }
        }
        Self::build(CoeffRing::Rational, Coeffs::Rational { den, nums })
    }

    pub fn zero(ring: CoeffRing, prec: usize) -> Self {
        match ring.modulus() {
            None => Self::build(
                ring,
                Coeffs::Rational {
                    den: BigInt::one(),
                    nums: vec![BigInt::zero(); prec],
                },
            ),
            Some(_) => Self::build(ring, Coeffs::Residue(vec![0; prec])),
        }
    }

    /// The constant series 1 (the zero series when `prec` is 0).
    pub fn one(ring: CoeffRing, prec: usize) -> Self {
        let mut xs = vec![0i64; prec];
        if prec > 0 {
            xs[0] = 1;
        }
        Self::from_i64s(ring, &xs)
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    /// Number of nonzero coefficients below the precision.
    pub fn nonzero_count(&self) -> usize {
        self.nonzeros
    }

    pub fn is_zero(&self) -> bool {
        self.nonzeros == 0
    }

    /// Coefficient of `q^n`; panics when `n >= prec`.
    pub fn coeff(&self, n: usize) -> RingElem {
        match &self.coeffs {
            Coeffs::Rational { den, nums } => {
                RingElem::from_rational(BigRational::new(nums[n].clone(), den.clone()))
            }
            Coeffs::Residue(r) => RingElem::from_residue(self.ring, r[n]),
        }
    }

    pub fn get(&self, n: usize) -> Option<RingElem> {
        (n < self.prec()).then(|| self.coeff(n))
    }

    pub fn coeffs(&self) -> Vec<RingElem> {
        (0..self.prec()).map(|n| self.coeff(n)).collect()
    }

    pub fn coeff_is_zero(&self, n: usize) -> bool {
        match &self.coeffs {
            Coeffs::Rational { nums, .. } => nums[n].is_zero(),
            Coeffs::Residue(r) => r[n] == 0,
        }
    }

    /// Common denominator and numerators over the rationals.
    pub fn integer_parts(&self) -> Option<(&BigInt, &[BigInt])> {
        match &self.coeffs {
            Coeffs::Rational { den, nums } => Some((den, nums)),
            Coeffs::Residue(_) => None,
        }
    }

    pub fn residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Residue(r) => Some(r),
            Coeffs::Rational { .. } => None,
        }
    }

    pub fn truncate(&self, prec: usize) -> QExpansion {
        if prec >= self.prec() {
            return self.clone();
        }
        match &self.coeffs {
            Coeffs::Rational { den, nums } => {
                Self::rational_normalized(nums[..prec].to_vec(), den.clone())
            }
            Coeffs::Residue(r) => Self::from_residues(self.ring, r[..prec].to_vec()),
        }
    }

    /// Reinterprets the series as a polynomial of higher precision, padding
    /// with zero coefficients.
    fn padded(&self, prec: usize) -> QExpansion {
        let mut c = self.coeffs.clone();
        match &mut c {
            Coeffs::Rational { nums, .. } => nums.resize(prec, BigInt::zero()),
            Coeffs::Residue(r) => r.resize(prec, 0),
        }
        QExpansion {
            ring: self.ring,
            coeffs: c,
            nonzeros: self.nonzeros,
        }
    }

    fn first_bad_denominator(&self, p: u64) -> Option<usize> {
        let Coeffs::Rational { den, nums } = &self.coeffs else {
            return None;
        };
        let p = BigInt::from(p);
        nums.iter()
            .position(|x| ((den / den.gcd(x)) % &p).is_zero())
    }
}

impl fmt::Display for QExpansion {
    /// Shows at most the first 12 terms followed by the order term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for n in 0..self.prec().min(12) {
            if self.coeff_is_zero(n) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{}", self.coeff(n))?,
                1 => write!(f, "({})*q", self.coeff(n))?,
                _ => write!(f, "({})*q^{n}", self.coeff(n))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec())
    }
}

fn check_rings(f: &QExpansion, g: &QExpansion) -> Result<()> {
    if f.ring != g.ring {
        return Err(Error::RingMismatch(f.ring.to_string(), g.ring.to_string()));
    }
    Ok(())
}

pub fn ps_add(f: &QExpansion, g: &QExpansion) -> Result<QExpansion> {
    let one = f.ring.one();
    ps_lincomb(&[(one.clone(), f), (one, g)])
}

pub fn ps_sub(f: &QExpansion, g: &QExpansion) -> Result<QExpansion> {
    let one = f.ring.one();
    ps_lincomb(&[(one.clone(), f), (one.neg(), g)])
}

pub fn ps_neg(f: &QExpansion) -> QExpansion {
    ps_scale(f, &f.ring.one().neg()).expect("same ring")
}

pub fn ps_scale(f: &QExpansion, c: &RingElem) -> Result<QExpansion> {
    ps_lincomb(&[(c.clone(), f)])
}

/// `sum c_i f_i`, truncated to the smallest precision among the `f_i`.
pub fn ps_lincomb(terms: &[(RingElem, &QExpansion)]) -> Result<QExpansion> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::DegenerateInput("empty linear combination".into()));
    };
    let ring = first.ring;
    for (c, f) in terms {
        check_rings(first, f)?;
        if c.ring() != ring {
            return Err(Error::RingMismatch(ring.to_string(), c.ring().to_string()));
        }
    }
    let len = terms.iter().map(|(_, f)| f.prec()).min().unwrap();
    match ring.modulus() {
        None => {
            // c_i / den_i = u_i / w_i, common denominator L = lcm(w_i)
            let scaled: Vec<(BigRational, &[BigInt])> = terms
                .iter()
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, f)| {
                    let (den, nums) = f.integer_parts().unwrap();
                    (c.as_rational().unwrap() / BigRational::from_integer(den.clone()), nums)
                })
                .collect();
            let l = crate::ring::common_denominator(scaled.iter().map(|(t, _)| t));
            let mut out = vec![BigInt::zero(); len];
            for (t, nums) in &scaled {
                let s = t.numer() * (&l / t.denom());
                if s.is_one() {
                    for (o, x) in out.iter_mut().zip(&nums[..len]) {
                        *o += x;
                    }
                } else {
                    for (o, x) in out.iter_mut().zip(&nums[..len]) {
                        if !x.is_zero() {
                            *o += x * &s;
                        }
                    }
                }
            }
            Ok(QExpansion::rational_normalized(out, l))
        }
        Some(n) => {
            let mut out = vec![0u64; len];
            for (c, f) in terms {
                let c = c.residue().unwrap();
                if c == 0 {
                    continue;
                }
                for (o, &x) in out.iter_mut().zip(&f.residues().unwrap()[..len]) {
                    *o = add_mod(*o, mul_mod(c, x, n), n);
                }
            }
            Ok(QExpansion::from_residues(ring, out))
        }
    }
}

/// Product without touching the multiplication counter.
fn mul_uncounted(f: &QExpansion, g: &QExpansion) -> Result<QExpansion> {
    check_rings(f, g)?;
    let len = f.prec().min(g.prec());
    let square = std::ptr::eq(f, g);
    Ok(match (&f.coeffs, &g.coeffs) {
        (Coeffs::Rational { den: df, nums: nf }, Coeffs::Rational { den: dg, nums: ng }) => {
            let nums = mul::mul_int(nf, (!square).then_some(ng.as_slice()), len);
            QExpansion::rational_normalized(nums, df * dg)
        }
        (Coeffs::Residue(rf), Coeffs::Residue(rg)) => {
            let n = f.ring.modulus().unwrap();
            let res = mul::mul_res(rf, (!square).then_some(rg.as_slice()), n, len);
            QExpansion::from_residues(f.ring, res)
        }
        _ => unreachable!("representation always matches the ring"),
    })
}

/// Product truncated to the smaller precision; increments the active
/// [`MultCounter`]s once.
pub fn ps_mul(f: &QExpansion, g: &QExpansion) -> Result<QExpansion> {
    let out = mul_uncounted(f, g)?;
    counter::bump();
    Ok(out)
}

/// Multiplicative inverse by Newton iteration with precision doubling.
pub fn ps_inv(f: &QExpansion) -> Result<QExpansion> {
    let d = f.prec();
    if d == 0 {
        return Ok(f.clone());
    }
    let a0 = f.coeff(0);
    if !a0.is_unit() {
        return Err(Error::NonInvertibleLeadingCoefficient);
    }
    let ring = f.ring;
    let mut g = QExpansion::from_elems(ring, &[a0.inv()?])?;
    let mut m = 1;
    while m < d {
        let m2 = (2 * m).min(d);
        let gp = g.padded(m2);
        let fg = mul_uncounted(&f.truncate(m2), &gp)?;
        let e = ps_sub(&QExpansion::one(ring, m2), &fg)?;
        let corr = mul_uncounted(&gp, &e)?;
        g = ps_add(&gp, &corr)?;
        m = m2;
    }
    Ok(g)
}

/// The derivation `q d/dq`: `a_n -> n a_n`.
pub fn ps_derive(f: &QExpansion) -> QExpansion {
    match &f.coeffs {
        Coeffs::Rational { den, nums } => {
            let nums = nums
                .iter()
                .enumerate()
                .map(|(n, x)| if x.is_zero() { BigInt::zero() } else { x * n })
                .collect();
            QExpansion::rational_normalized(nums, den.clone())
        }
        Coeffs::Residue(r) => {
            let m = f.ring.modulus().unwrap();
            let res = r
                .iter()
                .enumerate()
                .map(|(n, &x)| mul_mod(x, n as u64 % m, m))
                .collect();
            QExpansion::from_residues(f.ring, res)
        }
    }
}

/// Substitution `q -> q^m`; the precision is multiplied by `m`.
pub fn ps_vshift(f: &QExpansion, m: usize) -> QExpansion {
    assert!(m >= 1, "vshift factor must be positive");
    if m == 1 {
        return f.clone();
    }
    let len = f.prec() * m;
    let coeffs = match &f.coeffs {
        Coeffs::Rational { den, nums } => {
            let mut out = vec![BigInt::zero(); len];
            for (n, x) in nums.iter().enumerate() {
                out[n * m] = x.clone();
            }
            Coeffs::Rational {
                den: den.clone(),
                nums: out,
            }
        }
        Coeffs::Residue(r) => {
            let mut out = vec![0u64; len];
            for (n, &x) in r.iter().enumerate() {
                out[n * m] = x;
            }
            Coeffs::Residue(out)
        }
    };
    QExpansion {
        ring: f.ring,
        coeffs,
        nonzeros: f.nonzeros,
    }
}

/// `f^e` by left-to-right binary powering: `floor(log2 e)` squarings plus
/// `popcount(e) - 1` multiplications, all counted.
pub fn ps_pow(f: &QExpansion, e: u64) -> Result<QExpansion> {
    if e == 0 {
        return Ok(QExpansion::one(f.ring, f.prec()));
    }
    let mut acc = f.clone();
    for bit in (0..63 - e.leading_zeros()).rev() {
        acc = ps_mul(&acc, &acc)?;
        if (e >> bit) & 1 == 1 {
            acc = ps_mul(&acc, f)?;
        }
    }
    Ok(acc)
}

/// Coefficientwise image of a rational series in another ring.
pub fn ps_reduce(f: &QExpansion, ring: CoeffRing) -> Result<QExpansion> {
    let Coeffs::Rational { den, nums } = &f.coeffs else {
        if f.ring == ring {
            return Ok(f.clone());
        }
        return Err(Error::RingMismatch(f.ring.to_string(), ring.to_string()));
    };
    QExpansion::from_integer_parts(ring, nums.clone(), den.clone())
}

#[cfg(test)]
mod tests;
