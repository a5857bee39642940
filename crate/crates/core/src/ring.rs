//! Coefficient domains: exact rationals, prime fields and fixed-precision
//! p-adic rings (arithmetic modulo p^m).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{add_mod, inv_mod, is_prime, mul_mod, sub_mod};
use crate::error::{Error, Result};

/// Largest modulus accepted for the modular rings.
pub const MAX_MODULUS: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Rational,
    PrimeField { p: u64 },
    FixedPadic { p: u64, m: u32, modulus: u64 },
}

impl CoeffRing {
    pub fn prime_field(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        if p >= MAX_MODULUS {
            return Err(Error::InvalidRing(format!("prime {p} exceeds 2^62")));
        }
        Ok(CoeffRing::PrimeField { p })
    }

    pub fn fixed_padic(p: u64, m: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if m == 0 {
            return Err(Error::InvalidRing("p-adic precision must be positive".into()));
        }
        let modulus = (p as u128)
            .checked_pow(m)
            .filter(|&n| n < MAX_MODULUS as u128)
            .ok_or_else(|| Error::InvalidRing(format!("{p}^{m} exceeds 2^62")))?;
        Ok(CoeffRing::FixedPadic {
            p,
            m,
            modulus: modulus as u64,
        })
    }

    /// Modulus of the residue representation, `None` over the rationals.
    pub fn modulus(&self) -> Option<u64> {
        match *self {
            CoeffRing::Rational => None,
            CoeffRing::PrimeField { p } => Some(p),
            CoeffRing::FixedPadic { modulus, .. } => Some(modulus),
        }
    }

    /// The residue characteristic `p` of a modular ring.
    pub fn prime(&self) -> Option<u64> {
        match *self {
            CoeffRing::Rational => None,
            CoeffRing::PrimeField { p } | CoeffRing::FixedPadic { p, .. } => Some(p),
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, CoeffRing::FixedPadic { .. })
    }

    pub fn zero(&self) -> RingElem {
        RingElem::from_int(*self, 0)
    }

    pub fn one(&self) -> RingElem {
        RingElem::from_int(*self, 1)
    }

    /// Canonical image of a rational number.
    pub fn embed(&self, x: &BigRational) -> Result<RingElem> {
        let value = match self.modulus() {
            None => ElemValue::Rational(x.clone()),
            Some(n) => ElemValue::Residue(rational_mod(x, n)?),
        };
        Ok(RingElem { ring: *self, value })
    }

    pub fn embed_int(&self, x: &BigInt) -> RingElem {
        let value = match self.modulus() {
            None => ElemValue::Rational(BigRational::from_integer(x.clone())),
            Some(n) => ElemValue::Residue(bigint_mod(x, n)),
        };
        RingElem { ring: *self, value }
    }

    /// Parses a textual element encoding ("num/den", "num" or a residue).
    pub fn parse_elem(&self, s: &str) -> Result<RingElem> {
        let s = s.trim();
        match self.modulus() {
            None => {
                let q = parse_rational(s)?;
                Ok(RingElem {
                    ring: *self,
                    value: ElemValue::Rational(q),
                })
            }
            Some(n) => {
                let r: u64 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad residue {s:?}")))?;
                if r >= n {
                    return Err(Error::Parse(format!("residue {r} not reduced mod {n}")));
                }
                Ok(RingElem {
                    ring: *self,
                    value: ElemValue::Residue(r),
                })
            }
        }
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::InvalidRing("p = 2 is not supported".into()));
    }
    if !is_prime(p) {
        return Err(Error::InvalidRing(format!("{p} is not prime")));
    }
    Ok(())
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CoeffRing::Rational => write!(f, "q"),
            CoeffRing::PrimeField { p } => write!(f, "fp:{p}"),
            CoeffRing::FixedPadic { p, m, .. } => write!(f, "padic:{p}:{m}"),
        }
    }
}

impl FromStr for CoeffRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| -> Result<u64> {
            t.parse()
                .map_err(|_| Error::InvalidRing(format!("bad number {t:?} in {s:?}")))
        };
        match parts.as_slice() {
            ["q"] | ["Q"] => Ok(CoeffRing::Rational),
            ["fp", p] => CoeffRing::prime_field(num(p)?),
            ["padic", p, m] => {
                let m = u32::try_from(num(m)?)
                    .map_err(|_| Error::InvalidRing(format!("precision too large in {s:?}")))?;
                CoeffRing::fixed_padic(num(p)?, m)
            }
            _ => Err(Error::InvalidRing(format!(
                "expected q, fp:<p> or padic:<p>:<m>, got {s:?}"
            ))),
        }
    }
}

/// Canonical value: reduced fraction (positive denominator) or least
/// nonnegative residue.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElemValue {
    Rational(BigRational),
    Residue(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElem {
    ring: CoeffRing,
    value: ElemValue,
}

impl RingElem {
    pub fn from_int(ring: CoeffRing, x: i64) -> Self {
        ring.embed_int(&BigInt::from(x))
    }

    pub(crate) fn from_residue(ring: CoeffRing, r: u64) -> Self {
        debug_assert!(ring.modulus().is_some_and(|n| r < n));
        RingElem {
            ring,
            value: ElemValue::Residue(r),
        }
    }

    pub(crate) fn from_rational(x: BigRational) -> Self {
        RingElem {
            ring: CoeffRing::Rational,
            value: ElemValue::Rational(x),
        }
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn value(&self) -> &ElemValue {
        &self.value
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            ElemValue::Rational(q) => Some(q),
            ElemValue::Residue(_) => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self.value {
            ElemValue::Residue(r) => Some(r),
            ElemValue::Rational(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            ElemValue::Rational(q) => q.is_zero(),
            ElemValue::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            ElemValue::Rational(q) => q.is_one(),
            ElemValue::Residue(r) => *r == 1,
        }
    }

    pub fn is_unit(&self) -> bool {
        match (&self.value, self.ring.modulus()) {
            (ElemValue::Rational(q), _) => !q.is_zero(),
            (ElemValue::Residue(r), Some(n)) => inv_mod(*r, n).is_some(),
            (ElemValue::Residue(_), None) => unreachable!(),
        }
    }

    fn check(&self, other: &RingElem) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ));
        }
        Ok(())
    }

    fn binop(
        &self,
        other: &RingElem,
        rat: impl Fn(&BigRational, &BigRational) -> BigRational,
        res: impl Fn(u64, u64, u64) -> u64,
    ) -> Result<RingElem> {
        self.check(other)?;
        let value = match (&self.value, &other.value) {
            (ElemValue::Rational(a), ElemValue::Rational(b)) => ElemValue::Rational(rat(a, b)),
            (ElemValue::Residue(a), ElemValue::Residue(b)) => {
                ElemValue::Residue(res(*a, *b, self.ring.modulus().unwrap()))
            }
            _ => unreachable!("value kind always matches the ring"),
        };
        Ok(RingElem {
            ring: self.ring,
            value,
        })
    }

    pub fn add(&self, other: &RingElem) -> Result<RingElem> {
        self.binop(other, |a, b| a + b, add_mod)
    }

    pub fn sub(&self, other: &RingElem) -> Result<RingElem> {
        self.binop(other, |a, b| a - b, sub_mod)
    }

    pub fn mul(&self, other: &RingElem) -> Result<RingElem> {
        self.binop(other, |a, b| a * b, mul_mod)
    }

    pub fn neg(&self) -> RingElem {
        let value = match &self.value {
            ElemValue::Rational(a) => ElemValue::Rational(-a),
            ElemValue::Residue(a) => ElemValue::Residue(sub_mod(0, *a, self.ring.modulus().unwrap())),
        };
        RingElem {
            ring: self.ring,
            value,
        }
    }

    pub fn inv(&self) -> Result<RingElem> {
        let value = match &self.value {
            ElemValue::Rational(a) => {
                if a.is_zero() {
                    return Err(Error::NonInvertibleElement);
                }
                ElemValue::Rational(a.recip())
            }
            ElemValue::Residue(a) => ElemValue::Residue(
                inv_mod(*a, self.ring.modulus().unwrap()).ok_or(Error::NonInvertibleElement)?,
            ),
        };
        Ok(RingElem {
            ring: self.ring,
            value,
        })
    }

    pub fn div(&self, other: &RingElem) -> Result<RingElem> {
        self.mul(&other.inv()?)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            ElemValue::Rational(q) => fmt_rational(q, f),
            ElemValue::Residue(r) => write!(f, "{r}"),
        }
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Least nonnegative residue of an integer modulo `n`.
pub(crate) fn bigint_mod(x: &BigInt, n: u64) -> u64 {
    if let Some(v) = x.to_i64() {
        return v.rem_euclid(n as i64) as u64;
    }
    let m = BigInt::from(n);
    x.mod_floor(&m).to_u64().unwrap()
}

pub(crate) fn rational_mod(x: &BigRational, n: u64) -> Result<u64> {
    let num = bigint_mod(x.numer(), n);
    let den = bigint_mod(x.denom(), n);
    let inv = inv_mod(den, n).ok_or(Error::NonInvertibleDenominator { index: None })?;
    Ok(mul_mod(num, inv, n))
}

/// Least common multiple of the denominators of `xs` (1 for an empty slice).
pub(crate) fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
