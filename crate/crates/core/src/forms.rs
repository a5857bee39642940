//! Named forms: theta, `F_2`, level-one and character Eisenstein series, and
//! the Cohen-Eisenstein series `H_{5/2}`, `H_{7/2}`, `H_{11/2}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bases::{cohen_monomials, default_linalg_prec, plus_combinations};
use crate::error::{Error, Result};
use crate::numth::{
    bernoulli, chi4, gen_bernoulli_chi4, twisted_divisor_table, twisted_divisor_table_mod,
    zeta_one_minus,
};
use crate::ring::CoeffRing;
use crate::series::{ps_lincomb, QExpansion};

/// The weight `k + 1/2`, stored through `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfWeight {
    k: u32,
}

impl HalfWeight {
    pub const fn new(k: u32) -> Self {
        HalfWeight { k }
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn as_rational(self) -> BigRational {
        BigRational::new((2 * self.k as i64 + 1).into(), 2.into())
    }

    /// `(-1)^k` as a sign.
    pub fn sign(self) -> i64 {
        if self.k.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for HalfWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", 2 * self.k + 1)
    }
}

impl FromStr for HalfWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidWeight(format!("expected an odd numerator over 2 such as 13/2, got {s:?}"));
        let (num, den) = s.trim().split_once('/').ok_or_else(bad)?;
        let num: u32 = num.trim().parse().map_err(|_| bad())?;
        if den.trim() != "2" || num.is_multiple_of(2) {
            return Err(bad());
        }
        Ok(HalfWeight::new(num / 2))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Weight {
    Integral(u32),
    Half(HalfWeight),
}

impl Weight {
    pub fn as_rational(self) -> BigRational {
        match self {
            Weight::Integral(k) => BigRational::from_integer(k.into()),
            Weight::Half(w) => w.as_rational(),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Integral(k) => write!(f, "{k}"),
            Weight::Half(w) => write!(f, "{w}"),
        }
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.contains('/') {
            return s.parse().map(Weight::Half);
        }
        s.trim()
            .parse()
            .map(Weight::Integral)
            .map_err(|_| Error::InvalidWeight(format!("expected k or k/2, got {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledForm {
    pub series: QExpansion,
    pub weight: Weight,
    pub label: String,
}

/// `1 + 2 sum_{n >= 1} q^{n^2}`.
pub fn theta(prec: usize, ring: CoeffRing) -> QExpansion {
    assert!(prec >= 1);
    let mut xs = vec![0i64; prec];
    xs[0] = 1;
    let mut m = 1usize;
    while m * m < prec {
        xs[m * m] = 2;
        m += 1;
    }
    QExpansion::from_i64s(ring, &xs)
}

fn odd(n: u64) -> i8 {
    (n % 2) as i8
}

/// `sum_{n odd} sigma_1(n) q^n`.
pub fn f2(prec: usize, ring: CoeffRing) -> QExpansion {
    assert!(prec >= 1);
    divisor_series(ring, prec, 1, odd, odd, &BigRational::zero(), &BigRational::one())
        .expect("integral coefficients embed in every ring")
}

/// `a_0 + scale * sum_{n >= 1} (sum_{de = n} left(d) right(e) d^r) q^n`.
fn divisor_series(
    ring: CoeffRing,
    prec: usize,
    r: u32,
    left: impl Fn(u64) -> i8,
    right: impl Fn(u64) -> i8,
    a0: &BigRational,
    scale: &BigRational,
) -> Result<QExpansion> {
    match ring.modulus() {
        None => {
            let table = twisted_divisor_table(r, prec, left, right);
            let l = num_integer::Integer::lcm(a0.denom(), scale.denom());
            let s = scale.numer() * (&l / scale.denom());
            let mut nums: Vec<BigInt> = table.into_iter().map(|x| x * &s).collect();
            nums[0] = a0.numer() * (&l / a0.denom());
            QExpansion::from_integer_parts(ring, nums, l)
        }
        Some(n) => {
            let s = ring.embed(scale)?.residue().unwrap();
            let mut res = twisted_divisor_table_mod(r, prec, n, left, right);
            for x in res.iter_mut() {
                *x = crate::arith::mul_mod(*x, s, n);
            }
            res[0] = ring.embed(a0)?.residue().unwrap();
            Ok(QExpansion::from_residues(ring, res))
        }
    }
}

/// Level-one Eisenstein series of even weight `k >= 4`: `a_0 = -B_k/(2k)`,
/// `a_n = sigma_{k-1}(n)`, or scaled to `a_0 = 1` when `normalized`.
pub fn eis_level1(k: u32, prec: usize, ring: CoeffRing, normalized: bool) -> Result<QExpansion> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidWeight(format!("level-one Eisenstein series need even k >= 4, got {k}")));
    }
    let c = -bernoulli(k as usize) / BigRational::from_integer((2 * k).into());
    let one = BigRational::one();
    let (a0, scale) = if normalized { (one.clone(), one / c) } else { (c, one) };
    divisor_series(ring, prec, k - 1, |_| 1, |_| 1, &a0, &scale)
}

/// Which of the two characters carries `chi_{-4}` in `E_k^{chi_1, chi_2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharSlot {
    /// `chi_1 = 1`, `chi_2 = chi_{-4}`.
    TrivialFirst,
    /// `chi_1 = chi_{-4}`, `chi_2 = 1`.
    CharFirst,
}

impl fmt::Display for CharSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharSlot::TrivialFirst => write!(f, "1,chi"),
            CharSlot::CharFirst => write!(f, "chi,1"),
        }
    }
}

/// `E_k^{chi_1, chi_2}` for odd `k`: `a_n = sum_{de = n} chi_1(e) chi_2(d) d^{k-1}`,
/// `a_0 = -B_k^chi/(2k)` when `chi_1` is trivial and 0 otherwise.
///
/// The power sits on the divisor carrying `chi_2`; with this placement both
/// slots are modular of level 4 for `k >= 3`, and `(1, chi)` also for `k = 1`.
pub fn eis_char(k: u32, slot: CharSlot, prec: usize, ring: CoeffRing) -> Result<QExpansion> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidWeight(format!("character Eisenstein series need odd k, got {k}")));
    }
    let chi = |n: u64| chi4(n as i64);
    let one = BigRational::one();
    match slot {
        CharSlot::TrivialFirst => {
            let a0 = -gen_bernoulli_chi4(k as usize) / BigRational::from_integer((2 * k).into());
            divisor_series(ring, prec, k - 1, chi, |_| 1, &a0, &one)
        }
        CharSlot::CharFirst => divisor_series(ring, prec, k - 1, |_| 1, chi, &BigRational::zero(), &one),
    }
}

/// Coordinates of `H_{k+1/2}` in the Cohen basis, normalized to `a_0 = zeta(1 - 2k)`.
pub fn cohen_eisenstein_coords(k: u32) -> Result<Vec<BigRational>> {
    if ![2, 3, 5].contains(&k) {
        return Err(Error::InvalidWeight(format!("Cohen-Eisenstein series only for k in {{2, 3, 5}}, got {k}")));
    }
    let w = HalfWeight::new(k);
    let prec = default_linalg_prec(w);
    let monomials = cohen_monomials(w, prec, CoeffRing::Rational)?;
    let combos = plus_combinations(w, &monomials, prec)?;
    if combos.len() != 1 {
        return Err(Error::IndependenceFailure { rank: combos.len(), expected: 1 });
    }
    // only theta^{2k+1} has a nonzero constant term
    let v: Vec<BigRational> = combos[0].iter().map(|x| x.as_rational().unwrap().clone()).collect();
    let scale = zeta_one_minus(2 * k as usize) / &v[0];
    Ok(v.into_iter().map(|x| x * &scale).collect())
}

/// The Cohen-Eisenstein series `H_{k+1/2}` for `k` in `{2, 3, 5}`, with
/// `a_0 = zeta(1 - 2k)`.
pub fn cohen_eisenstein(k: u32, prec: usize, ring: CoeffRing) -> Result<QExpansion> {
    let coords = cohen_eisenstein_coords(k)?;
    let coords = coords.iter().map(|c| ring.embed(c)).collect::<Result<Vec<_>>>()?;
    let monomials = cohen_monomials(HalfWeight::new(k), prec, ring)?;
    let terms: Vec<_> = coords.into_iter().zip(monomials.iter()).collect();
    ps_lincomb(&terms)
}
