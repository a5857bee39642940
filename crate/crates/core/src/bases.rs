//! The three explicit bases and plus-space extraction.
//!
//! * Cohen: `theta^a F_2^b` with `a/2 + 2b = k + 1/2`, ordered by increasing `b`.
//! * Kohnen: products of `E_4(4z)`, `E_6(4z)` with `theta` or a Cohen-Eisenstein
//!   series, spanning the plus-space.
//! * Rankin-Cohen: brackets `[E(4z), theta]_n` (even `k`, plus-space) or
//!   `[E^{chi_1, chi_2}(z), theta]_n` (odd `k`, full space).
//!
//! Linear algebra (kernels, independence checks) only ever looks at the first
//! few coefficients; see [`default_linalg_prec`].

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::{
    cohen_eisenstein, eis_char, eis_level1, f2, theta, CharSlot, HalfWeight, LabeledForm, Weight,
};
use crate::linalg::{kernel, rank, ExactMatrix};
use crate::numth::half_binomial;
use crate::ring::{CoeffRing, RingElem};
use crate::series::{ps_derive, ps_lincomb, ps_mul, ps_pow, ps_reduce, ps_vshift, QExpansion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Full,
    Plus,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Full => "full",
            Flavor::Plus => "plus",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Flavor::Full),
            "plus" => Ok(Flavor::Plus),
            _ => Err(Error::Parse(format!("unknown space {s:?} (expected full or plus)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    Cohen,
    Kohnen,
    RankinCohen,
    Projected,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Cohen => "cohen",
            Construction::Kohnen => "kohnen",
            Construction::RankinCohen => "rankin-cohen",
            Construction::Projected => "projected",
        })
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cohen" => Ok(Construction::Cohen),
            "kohnen" => Ok(Construction::Kohnen),
            "rankin-cohen" | "rc" => Ok(Construction::RankinCohen),
            "projected" => Ok(Construction::Projected),
            _ => Err(Error::Parse(format!(
                "unknown basis {s:?} (expected cohen, kohnen or rankin-cohen)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormBasis {
    pub weight: HalfWeight,
    pub flavor: Flavor,
    pub construction: Construction,
    pub forms: Vec<LabeledForm>,
}

impl FormBasis {
    fn new(
        weight: HalfWeight,
        flavor: Flavor,
        construction: Construction,
        forms: Vec<(QExpansion, String)>,
    ) -> Self {
        let forms = forms
            .into_iter()
            .map(|(series, label)| LabeledForm { series, weight: Weight::Half(weight), label })
            .collect();
        FormBasis { weight, flavor, construction, forms }
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn prec(&self) -> usize {
        self.forms.iter().map(|f| f.series.prec()).min().unwrap_or(0)
    }

    pub fn ring(&self) -> Option<CoeffRing> {
        self.forms.first().map(|f| f.series.ring())
    }

    pub fn series(&self) -> Vec<&QExpansion> {
        self.forms.iter().map(|f| &f.series).collect()
    }

    pub fn truncate(&self, prec: usize) -> FormBasis {
        let mut out = self.clone();
        for f in out.forms.iter_mut() {
            f.series = f.series.truncate(prec);
        }
        out
    }
}

/// `dim M_{k+1/2}(4) = floor(k/2) + 1`.
pub fn dim_full(w: HalfWeight) -> usize {
    w.k() as usize / 2 + 1
}

/// `dim M^+_{k+1/2}(4) = dim M_{2k}(1)`.
pub fn dim_plus(w: HalfWeight) -> Result<usize> {
    let k = w.k() as usize;
    if k < 2 {
        return Err(Error::InvalidWeight(format!("plus-space dimension needs k >= 2, got {w}")));
    }
    Ok(2 * k / 12 + usize::from(2 * k % 12 != 2))
}

/// Indices `n` with `(-1)^k n = 2, 3 mod 4`, where plus-space forms vanish.
pub fn is_forbidden(w: HalfWeight, n: usize) -> bool {
    let r = (w.sign() * (n % 4) as i64).rem_euclid(4);
    r == 2 || r == 3
}

pub fn is_plus(f: &QExpansion, w: HalfWeight) -> bool {
    (0..f.prec()).all(|n| !is_forbidden(w, n) || f.coeff_is_zero(n))
}

/// Smallest precision at which kernels and independence are certified.
pub fn independence_threshold(w: HalfWeight) -> usize {
    w.k() as usize + 10
}

/// Precision used for kernels and independence checks: `2k + 10`, past the
/// Sturm bound `2k + 1` of weight `k + 1/2` on `Gamma_0(16)`, the level on
/// which the plus-space condition is itself a modular condition.
pub fn default_linalg_prec(w: HalfWeight) -> usize {
    2 * w.k() as usize + 10
}

fn coeff_rows(forms: &[&QExpansion], cols: impl Iterator<Item = usize> + Clone) -> Vec<Vec<RingElem>> {
    forms.iter().map(|f| cols.clone().map(|n| f.coeff(n)).collect()).collect()
}

/// Large prime used to screen independence before any exact elimination.
const SCREEN_PRIME: u64 = (1 << 61) - 1;

/// Rank of the coefficient matrix of `forms` over the first `prec` indices.
/// Modular rings that are not fields are reduced modulo `p`; a full rank there
/// certifies independence.
pub fn span_rank(forms: &[&QExpansion], prec: usize) -> Result<usize> {
    let Some(first) = forms.first() else {
        return Ok(0);
    };
    let ring = first.ring();
    let prec = prec.min(forms.iter().map(|f| f.prec()).min().unwrap());
    let reduce = |r: CoeffRing| -> Result<Vec<QExpansion>> {
        forms.iter().map(|f| reduce_to(&f.truncate(prec), r)).collect()
    };
    match ring {
        CoeffRing::Rational => {
            let fp = CoeffRing::prime_field(SCREEN_PRIME)?;
            if let Ok(red) = reduce(fp) {
                let refs: Vec<&QExpansion> = red.iter().collect();
                let r = rank(&ExactMatrix::from_rows(fp, coeff_rows(&refs, 0..prec))?)?;
                if r == forms.len() {
                    return Ok(r);
                }
            }
            rank(&ExactMatrix::from_rows(ring, coeff_rows(forms, 0..prec))?)
        }
        CoeffRing::PrimeField { .. } => {
            rank(&ExactMatrix::from_rows(ring, coeff_rows(forms, 0..prec))?)
        }
        CoeffRing::FixedPadic { p, .. } => {
            let fp = CoeffRing::prime_field(p)?;
            let red = reduce(fp)?;
            let refs: Vec<&QExpansion> = red.iter().collect();
            rank(&ExactMatrix::from_rows(fp, coeff_rows(&refs, 0..prec))?)
        }
    }
}

/// Image of a series in `target`: rationals are reduced, residues mod `p^m`
/// are reduced mod `p`.
fn reduce_to(f: &QExpansion, target: CoeffRing) -> Result<QExpansion> {
    match (f.ring(), target.modulus()) {
        (CoeffRing::FixedPadic { .. }, Some(p)) => {
            let res = f.residues().unwrap().iter().map(|&x| x % p).collect();
            Ok(QExpansion::from_residues(target, res))
        }
        _ => ps_reduce(f, target),
    }
}

fn verify_independent(forms: &[(QExpansion, String)], w: HalfWeight) -> Result<()> {
    let prec = forms.iter().map(|(f, _)| f.prec()).min().unwrap_or(0);
    if prec < independence_threshold(w) {
        return Ok(());
    }
    let refs: Vec<&QExpansion> = forms.iter().map(|(f, _)| f).collect();
    let r = span_rank(&refs, default_linalg_prec(w).min(prec))?;
    if r < forms.len() {
        return Err(Error::IndependenceFailure { rank: r, expected: forms.len() });
    }
    Ok(())
}

/// `theta^a F_2^b` for `b = 0..=floor(k/2)`, `a = 2k + 1 - 4b`.
///
/// With `r = a mod 4` and `u = theta^4`, the chain `P_i = theta^r u^i` and
/// the powers `F_2^b` give every monomial with one more product, about `3k/2`
/// multiplications in total.
pub fn cohen_monomials(w: HalfWeight, prec: usize, ring: CoeffRing) -> Result<Vec<QExpansion>> {
    let k = w.k() as usize;
    let top = k / 2;
    let t = theta(prec, ring);
    let s = if k % 2 == 1 || top > 0 { Some(ps_mul(&t, &t)?) } else { None };
    let p0 = if k % 2 == 1 { ps_mul(s.as_ref().unwrap(), &t)? } else { t };
    let mut chain = vec![p0];
    if top > 0 {
        let s = s.unwrap();
        let u = ps_mul(&s, &s)?;
        for i in 1..=top {
            let next = ps_mul(&chain[i - 1], &u)?;
            chain.push(next);
        }
    }
    let f = f2(prec, ring);
    let mut fpow: Vec<QExpansion> = Vec::with_capacity(top + 1);
    for b in 0..=top {
        match b {
            0 => fpow.push(QExpansion::one(ring, prec)),
            1 => fpow.push(f.clone()),
            _ => {
                let next = ps_mul(&fpow[b - 1], &f)?;
                fpow.push(next);
            }
        }
    }
    (0..=top)
        .map(|b| {
            let p = &chain[top - b];
            if b == 0 {
                Ok(p.clone())
            } else {
                ps_mul(p, &fpow[b])
            }
        })
        .collect()
}

pub fn cohen_basis(w: HalfWeight, prec: usize, ring: CoeffRing) -> Result<FormBasis> {
    if prec == 0 {
        return Err(Error::PrecisionTooLow { needed: 1, got: 0 });
    }
    let k = w.k();
    let forms: Vec<(QExpansion, String)> = cohen_monomials(w, prec, ring)?
        .into_iter()
        .enumerate()
        .map(|(b, f)| (f, format!("theta^{} F2^{}", 2 * k as usize + 1 - 4 * b, b)))
        .collect();
    verify_independent(&forms, w)?;
    Ok(FormBasis::new(w, Flavor::Full, Construction::Cohen, forms))
}

/// Left kernel of the forbidden-coefficient matrix of `forms` over `n < prec`,
/// in reduced echelon form.
pub fn plus_combinations(w: HalfWeight, forms: &[QExpansion], prec: usize) -> Result<Vec<Vec<RingElem>>> {
    let Some(first) = forms.first() else {
        return Ok(Vec::new());
    };
    let ring = first.ring();
    let cols = (0..prec).filter(|&n| is_forbidden(w, n));
    let refs: Vec<&QExpansion> = forms.iter().collect();
    let rows = coeff_rows(&refs, cols);
    if rows[0].is_empty() {
        return kernel(&ExactMatrix::zero(ring, forms.len(), 0));
    }
    kernel(&ExactMatrix::from_rows(ring, rows)?)
}

/// Plus-space of the span of `basis`, read off the forbidden coefficients
/// below `prec`.
pub fn plus_project(basis: &FormBasis, prec: usize) -> Result<FormBasis> {
    let w = basis.weight;
    let needed = independence_threshold(w);
    if prec < needed {
        return Err(Error::PrecisionTooLow { needed, got: prec });
    }
    if prec > basis.prec() {
        return Err(Error::PrecisionTooLow { needed: prec, got: basis.prec() });
    }
    let ring = basis.ring().ok_or_else(|| Error::DegenerateInput("empty basis".into()))?;
    if !ring.is_field() {
        return Err(Error::UnsupportedRing(ring.to_string()));
    }
    let series: Vec<QExpansion> = basis.forms.iter().map(|f| f.series.clone()).collect();
    let combos = plus_combinations(w, &series, prec)?;
    let forms = combos
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let terms: Vec<(RingElem, &QExpansion)> =
                v.iter().cloned().zip(series.iter()).filter(|(c, _)| !c.is_zero()).collect();
            Ok((ps_lincomb(&terms)?, format!("plus {}", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FormBasis::new(w, Flavor::Plus, Construction::Projected, forms))
}

/// Normalized `E_k` at precision `ceil(prec/4)`, substituted `q -> q^4`.
fn eis_at_4z(k: u32, prec: usize, ring: CoeffRing) -> Result<QExpansion> {
    let e = eis_level1(k, prec.div_ceil(4), ring, true)?;
    Ok(ps_vshift(&e, 4).truncate(prec))
}

/// Running products `x^0, x^1, ..., x^n` at the precision of `x`.
fn power_chain(x: &QExpansion, n: usize) -> Result<Vec<QExpansion>> {
    let mut out = vec![QExpansion::one(x.ring(), x.prec())];
    for i in 1..=n {
        let next = if i == 1 { x.clone() } else { ps_mul(&out[i - 1], x)? };
        out.push(next);
    }
    Ok(out)
}

fn mul_unless_one(a: &QExpansion, b: &QExpansion, one_a: bool, one_b: bool) -> Result<QExpansion> {
    match (one_a, one_b) {
        (true, _) => Ok(b.clone()),
        (_, true) => Ok(a.clone()),
        _ => ps_mul(a, b),
    }
}

pub fn kohnen_basis(w: HalfWeight, prec: usize, ring: CoeffRing) -> Result<FormBasis> {
    let k = w.k() as i64;
    if k < 2 {
        return Err(Error::InvalidWeight(format!("Kohnen basis needs k >= 2, got {w}")));
    }
    if prec == 0 {
        return Err(Error::PrecisionTooLow { needed: 1, got: 0 });
    }
    let a0 = k.rem_euclid(3);
    let even = k % 2 == 0;
    let m = if even { (k - 4 * a0) / 6 - 1 } else { (k - 4 * a0 - 9) / 6 };
    // partner forms for the E_4 and E_6 sides of each pair
    let (h_name, t_name) = if even { ("H5/2", "theta") } else { ("H11/2", "H7/2") };
    let (h_k, t_k) = if even { (2, None) } else { (5, Some(3)) };
    let extra_e4 = if even { (k % 4 == 0).then_some(k / 4) } else { ((k - 3) % 4 == 0).then(|| (k - 3) / 4) };
    let extra_e6 = if even { ((k - 2) % 6 == 0).then(|| (k - 2) / 6) } else { ((k - 5) % 6 == 0).then(|| (k - 5) / 6) };

    let small = prec.div_ceil(4);
    let e4 = eis_level1(4, small, ring, true)?;
    let e6 = eis_level1(6, small, ring, true)?;
    let needs_h = m >= 0 || extra_e6.is_some();
    let needs_t = m >= 0 || extra_e4.is_some();
    let h = if needs_h { Some(cohen_eisenstein(h_k, prec, ring)?) } else { None };
    let t = if needs_t {
        Some(match t_k {
            None => theta(prec, ring),
            Some(j) => cohen_eisenstein(j, prec, ring)?,
        })
    } else {
        None
    };
    let at4 = |f: &QExpansion| ps_vshift(f, 4).truncate(prec);

    let mut forms: Vec<(QExpansion, String)> = Vec::new();
    if m >= 0 {
        let m = m as usize;
        let top = m / 2;
        // P_a = E_4^{a0 + 3a} E_6^{m - 2a} as (E_4^{a0} E_6^{m mod 2} c^a) (d^{top - a})
        let c = ps_mul(&ps_mul(&e4, &e4)?, &e4)?;
        let d = ps_mul(&e6, &e6)?;
        let mut base = QExpansion::one(ring, small);
        let mut base_is_one = true;
        for _ in 0..a0 {
            base = mul_unless_one(&base, &e4, base_is_one, false)?;
            base_is_one = false;
        }
        if m % 2 == 1 {
            base = mul_unless_one(&base, &e6, base_is_one, false)?;
            base_is_one = false;
        }
        let mut left = vec![base];
        for a in 1..=top {
            let next = mul_unless_one(&left[a - 1], &c, a == 1 && base_is_one, false)?;
            left.push(next);
        }
        let right = power_chain(&d, top)?;
        for a in 0..=top {
            let p = mul_unless_one(&left[a], &right[top - a], a == 0 && base_is_one, top == a)?;
            let i4 = a0 as usize + 3 * a + 1;
            let j6 = m - 2 * a;
            let ep = ps_mul(&e4, &p)?;
            forms.push((
                ps_mul(&at4(&ep), h.as_ref().unwrap())?,
                format!("E4^{}(4z) E6^{}(4z) {}", i4, j6, h_name),
            ));
            let ep = ps_mul(&e6, &p)?;
            forms.push((
                ps_mul(&at4(&ep), t.as_ref().unwrap())?,
                format!("E4^{}(4z) E6^{}(4z) {}", i4 - 1, j6 + 1, t_name),
            ));
        }
    }
    if let Some(e) = extra_e4 {
        let pw = ps_pow(&e4, e as u64)?;
        let f = mul_unless_one(&at4(&pw), t.as_ref().unwrap(), e == 0, false)?;
        forms.push((f, format!("E4^{}(4z) {}", e, t_name)));
    }
    if let Some(e) = extra_e6 {
        let pw = ps_pow(&e6, e as u64)?;
        let f = mul_unless_one(&at4(&pw), h.as_ref().unwrap(), e == 0, false)?;
        forms.push((f, format!("E6^{}(4z) {}", e, h_name)));
    }
    verify_independent(&forms, w)?;
    Ok(FormBasis::new(w, Flavor::Plus, Construction::Kohnen, forms))
}

/// Rankin-Cohen bracket
/// `[f, g]_n = sum_j (-1)^j C(n + kf - 1, j) C(n + kg - 1, n - j) f^{(n-j)} g^{(j)}`
/// with `q d/dq` derivatives; uses `n + 1` multiplications.
pub fn rc_bracket(
    f: &QExpansion,
    kf: &BigRational,
    g: &QExpansion,
    kg: &BigRational,
    n: usize,
) -> Result<QExpansion> {
    let ring = f.ring();
    let nn = BigRational::from_integer(n.into());
    let one = BigRational::one();
    let xf = &nn + kf - &one;
    let xg = &nn + kg - &one;
    let mut fd = vec![f.clone()];
    let mut gd = vec![g.clone()];
    for i in 1..=n {
        fd.push(ps_derive(&fd[i - 1]));
        gd.push(ps_derive(&gd[i - 1]));
    }
    let mut terms: Vec<(RingElem, QExpansion)> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut c = half_binomial(&xf, j) * half_binomial(&xg, n - j);
        if j % 2 == 1 {
            c = -c;
        }
        if c.is_zero() {
            continue;
        }
        let prod = ps_mul(&fd[n - j], &gd[j])?;
        terms.push((ring.embed(&c)?, prod));
    }
    if terms.is_empty() {
        return Ok(QExpansion::zero(ring, f.prec().min(g.prec())));
    }
    let refs: Vec<(RingElem, &QExpansion)> = terms.iter().map(|(c, p)| (c.clone(), p)).collect();
    ps_lincomb(&refs)
}

pub fn rankin_cohen_basis(w: HalfWeight, prec: usize, ring: CoeffRing) -> Result<FormBasis> {
    let k = w.k() as usize;
    let needed = independence_threshold(w);
    if prec < needed {
        return Err(Error::PrecisionTooLow { needed, got: prec });
    }
    let half = BigRational::new(1.into(), 2.into());
    let t = theta(prec, ring);
    let mut forms: Vec<(QExpansion, String)> = Vec::new();
    let flavor = if k.is_multiple_of(2) {
        if k < 4 {
            return Err(Error::InvalidWeight(format!("even Rankin-Cohen basis needs k >= 4, got {w}")));
        }
        let d = dim_plus(w)?;
        if k < 2 * (d - 1) + 4 {
            return Err(Error::InvalidWeight(format!("Eisenstein weight below 4 needed for {w}")));
        }
        for n in 0..d {
            let kf = (k - 2 * n) as u32;
            let e = eis_at_4z(kf, prec, ring)?;
            let b = rc_bracket(&e, &BigRational::from_integer(kf.into()), &t, &half, n)?;
            forms.push((b, format!("[E{}(4z), theta]_{}", kf, n)));
        }
        Flavor::Plus
    } else {
        if k < 3 {
            return Err(Error::InvalidWeight(format!("odd Rankin-Cohen basis needs k >= 3, got {w}")));
        }
        let d = dim_full(w);
        let mut n = 0;
        'outer: loop {
            for slot in [CharSlot::TrivialFirst, CharSlot::CharFirst] {
                if forms.len() == d {
                    break 'outer;
                }
                if 2 * n >= k {
                    return Err(Error::InvalidWeight(format!("Eisenstein weight below 1 needed for {w}")));
                }
                let kf = (k - 2 * n) as u32;
                let e = eis_char(kf, slot, prec, ring)?;
                let b = rc_bracket(&e, &BigRational::from_integer(kf.into()), &t, &half, n)?;
                forms.push((b, format!("[E{}^({}), theta]_{}", kf, slot, n)));
            }
            n += 1;
        }
        Flavor::Full
    };
    verify_independent(&forms, w)?;
    Ok(FormBasis::new(w, flavor, Construction::RankinCohen, forms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::cohen_eisenstein_coords;
    use crate::series::{counted, ps_add, ps_scale, ps_sub};
    use proptest::prelude::*;

    const Q: CoeffRing = CoeffRing::Rational;

    fn w(k: u32) -> HalfWeight {
        HalfWeight::new(k)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int_coeffs(f: &QExpansion, n: usize) -> Vec<i64> {
        (0..n)
            .map(|i| {
                let c = f.coeff(i);
                let q = c.as_rational().unwrap();
                i64::try_from(q.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dim_full(w(6)), 4);
        assert_eq!(dim_full(w(0)), 1);
        assert_eq!(dim_full(w(12)), 7);
        assert_eq!(dim_plus(w(6)).unwrap(), 2);
        assert_eq!(dim_plus(w(2)).unwrap(), 1);
        assert_eq!(dim_plus(w(7)).unwrap(), 1);
        assert!(matches!(dim_plus(w(1)), Err(Error::InvalidWeight(_))));
    }

    #[test]
    fn cohen_basis_examples() {
        let b = cohen_basis(w(6), 30, Q).unwrap();
        let labels: Vec<_> = b.forms.iter().map(|f| f.label.as_str()).collect();
        assert_eq!(labels, ["theta^13 F2^0", "theta^9 F2^1", "theta^5 F2^2", "theta^1 F2^3"]);
        assert_eq!(int_coeffs(&b.forms[0].series, 2), vec![1, 26]);
        let b = cohen_basis(w(0), 10, Q).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.forms[0].series, theta(10, Q));
        assert_eq!(cohen_basis(w(1), 10, Q).unwrap().forms[0].series, ps_pow(&theta(10, Q), 3).unwrap());
    }

    #[test]
    fn cohen_monomials_match_direct_powers() {
        let d = 60;
        for k in 0..12u32 {
            let got = cohen_monomials(w(k), d, Q).unwrap();
            for (b, g) in got.iter().enumerate() {
                let a = 2 * k as u64 + 1 - 4 * b as u64;
                let want = ps_mul(&ps_pow(&theta(d, Q), a).unwrap(), &ps_pow(&f2(d, Q), b as u64).unwrap()).unwrap();
                assert_eq!(g, &want, "k = {k}, b = {b}");
            }
        }
    }

    #[test]
    fn cohen_multiplication_count_is_linear() {
        let count = |k| counted(|| cohen_basis(w(k), 50, Q).unwrap()).1;
        for k in [24, 30, 40] {
            let r = count(2 * k) as f64 / count(k) as f64;
            assert!(r <= 2.5, "k = {k}: ratio {r}");
        }
        // about three multiplications per F_2 exponent
        assert!(count(40) <= 3 * 20 + 3);
    }

    #[test]
    fn is_plus_examples() {
        assert!(is_plus(&theta(100, Q), w(0)));
        let f = ps_mul(&f2(20, Q), &theta(20, Q)).unwrap();
        assert!(!is_plus(&f, w(2)));
        assert!(is_plus(&QExpansion::zero(Q, 20), w(3)));
        assert!(is_forbidden(w(2), 2) && is_forbidden(w(2), 3) && !is_forbidden(w(2), 1));
        assert!(is_forbidden(w(3), 1) && is_forbidden(w(3), 2) && !is_forbidden(w(3), 3));
    }

    #[test]
    fn plus_project_examples() {
        let b = cohen_basis(w(6), 60, Q).unwrap();
        let p = plus_project(&b, 30).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.flavor, Flavor::Plus);
        assert!(p.forms.iter().all(|f| is_plus(&f.series, w(6))));
        let again = plus_project(&p, 30).unwrap();
        assert_eq!(again.len(), 2);
        assert_eq!(span_rank(&[p.series(), again.series()].concat(), 60).unwrap(), 2);

        let b = cohen_basis(w(2), 40, Q).unwrap();
        assert_eq!(plus_project(&b, 20).unwrap().len(), 1);
        assert!(matches!(plus_project(&b, 5), Err(Error::PrecisionTooLow { .. })));
        let pad = CoeffRing::fixed_padic(7, 2).unwrap();
        let b = cohen_basis(w(2), 40, pad).unwrap();
        assert!(matches!(plus_project(&b, 20), Err(Error::UnsupportedRing(_))));
    }

    #[test]
    fn kohnen_basis_examples() {
        let b = kohnen_basis(w(2), 40, Q).unwrap();
        assert_eq!(b.forms.len(), 1);
        assert_eq!(b.forms[0].series, cohen_eisenstein(2, 40, Q).unwrap());
        assert_eq!(b.forms[0].series.coeff(0).as_rational().unwrap(), &rat(1, 120));

        let b = kohnen_basis(w(6), 40, Q).unwrap();
        let labels: Vec<_> = b.forms.iter().map(|f| f.label.as_str()).collect();
        assert_eq!(labels, ["E4^1(4z) E6^0(4z) H5/2", "E4^0(4z) E6^1(4z) theta"]);
        let e4 = eis_at_4z(4, 40, Q).unwrap();
        let e6 = eis_at_4z(6, 40, Q).unwrap();
        assert_eq!(b.forms[0].series, ps_mul(&e4, &cohen_eisenstein(2, 40, Q).unwrap()).unwrap());
        assert_eq!(b.forms[1].series, ps_mul(&e6, &theta(40, Q)).unwrap());

        let b = kohnen_basis(w(3), 40, Q).unwrap();
        assert_eq!(b.forms.len(), 1);
        assert_eq!(b.forms[0].series, cohen_eisenstein(3, 40, Q).unwrap());
        assert!(matches!(kohnen_basis(w(1), 40, Q), Err(Error::InvalidWeight(_))));
    }

    #[test]
    fn kohnen_basis_dimension_and_plus_condition() {
        for k in 2..=40 {
            let b = kohnen_basis(w(k), 4 * k as usize + 10, Q).unwrap();
            assert_eq!(b.len(), dim_plus(w(k)).unwrap(), "k = {k}");
            assert!(b.forms.iter().all(|f| is_plus(&f.series, w(k))), "k = {k}");
        }
    }

    #[test]
    fn kohnen_forms_lie_in_cohen_span() {
        for k in [2u32, 3, 6, 9, 13, 16] {
            let d = 4 * k as usize + 10;
            let c = cohen_basis(w(k), d, Q).unwrap();
            let kb = kohnen_basis(w(k), d, Q).unwrap();
            let all = [c.series(), kb.series()].concat();
            assert_eq!(span_rank(&all, d).unwrap(), c.len(), "k = {k}");
        }
    }

    #[test]
    fn rc_bracket_examples() {
        let r = CoeffRing::Rational;
        let f = eis_level1(4, 30, r, true).unwrap();
        let g = eis_level1(6, 30, r, true).unwrap();
        let k4 = rat(4, 1);
        let k6 = rat(6, 1);
        assert_eq!(rc_bracket(&f, &k4, &g, &k6, 0).unwrap(), ps_mul(&f, &g).unwrap());
        assert!(rc_bracket(&f, &k4, &f, &k4, 1).unwrap().is_zero());
        let (_, n) = counted(|| rc_bracket(&f, &k4, &g, &k6, 3).unwrap());
        assert_eq!(n, 4);
    }

    #[test]
    fn rankin_cohen_examples() {
        let d = 40;
        let b = rankin_cohen_basis(w(6), d, Q).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.forms[0].series, ps_mul(&eis_at_4z(6, d, Q).unwrap(), &theta(d, Q)).unwrap());
        let br = rc_bracket(&eis_at_4z(4, d, Q).unwrap(), &rat(4, 1), &theta(d, Q), &rat(1, 2), 1).unwrap();
        assert_eq!(b.forms[1].series, br);

        let b = rankin_cohen_basis(w(4), d, Q).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.forms[0].series, ps_mul(&eis_at_4z(4, d, Q).unwrap(), &theta(d, Q)).unwrap());

        let b = rankin_cohen_basis(w(3), d, Q).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.flavor, Flavor::Full);
        for (f, slot) in b.forms.iter().zip([CharSlot::TrivialFirst, CharSlot::CharFirst]) {
            assert_eq!(f.series, ps_mul(&eis_char(3, slot, d, Q).unwrap(), &theta(d, Q)).unwrap());
        }
        assert!(matches!(rankin_cohen_basis(w(6), 10, Q), Err(Error::PrecisionTooLow { .. })));
        assert!(matches!(rankin_cohen_basis(w(2), 40, Q), Err(Error::InvalidWeight(_))));
    }

    #[test]
    fn rankin_cohen_multiplication_count_is_quadratic() {
        for k in [24u32, 30, 36, 40] {
            let c1 = counted(|| rankin_cohen_basis(w(k), 120, Q).unwrap()).1;
            let c2 = counted(|| rankin_cohen_basis(w(2 * k), 220, Q).unwrap()).1;
            let r = c2 as f64 / c1 as f64;
            assert!((3.0..=5.0).contains(&r), "k = {k}: ratio {r}");
        }
    }

    #[test]
    fn rankin_cohen_forms_lie_in_cohen_span() {
        for k in [3u32, 4, 5, 6, 7, 10, 11, 14] {
            let d = 4 * k as usize + 10;
            let c = cohen_basis(w(k), d, Q).unwrap();
            let rc = rankin_cohen_basis(w(k), d, Q).unwrap();
            let all = [c.series(), rc.series()].concat();
            assert_eq!(span_rank(&all, d).unwrap(), c.len(), "k = {k}");
            if k % 2 == 0 {
                assert!(rc.forms.iter().all(|f| is_plus(&f.series, w(k))));
            }
        }
    }

    #[test]
    fn padic_basis_reduces_to_prime_field_basis() {
        let pad = CoeffRing::fixed_padic(1009, 3).unwrap();
        let fp = CoeffRing::prime_field(1009).unwrap();
        let a = kohnen_basis(w(8), 80, pad).unwrap();
        let b = kohnen_basis(w(8), 80, fp).unwrap();
        for (x, y) in a.forms.iter().zip(&b.forms) {
            assert_eq!(reduce_to(&x.series, fp).unwrap(), y.series);
        }
    }

    #[test]
    fn cohen_eisenstein_coordinates_are_stable() {
        // the coordinates do not depend on the linear-algebra precision
        let c = cohen_eisenstein_coords(2).unwrap();
        let mono = cohen_monomials(w(2), 200, Q).unwrap();
        let terms: Vec<_> = c.iter().map(|x| Q.embed(x).unwrap()).zip(mono.iter()).collect();
        let h = ps_lincomb(&terms).unwrap();
        assert!(is_plus(&h, w(2)));
    }

    fn rseries(len: usize) -> impl Strategy<Value = QExpansion> {
        prop::collection::vec(-50i64..50, len).prop_map(|xs| QExpansion::from_i64s(Q, &xs))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn first_bracket_matches_closed_form(f in rseries(40), g in rseries(40), kf in 1i64..10, kg2 in 1i64..20) {
            let kf = rat(kf, 1);
            let kg = rat(kg2, 2);
            let lhs = rc_bracket(&f, &kf, &g, &kg, 1).unwrap();
            let a = ps_scale(&ps_mul(&ps_derive(&f), &g).unwrap(), &Q.embed(&kg).unwrap()).unwrap();
            let b = ps_scale(&ps_mul(&f, &ps_derive(&g)).unwrap(), &Q.embed(&kf).unwrap()).unwrap();
            prop_assert_eq!(lhs, ps_sub(&a, &b).unwrap());
        }

        #[test]
        fn bracket_is_bilinear(f in rseries(30), g in rseries(30), h in rseries(30), n in 0usize..4) {
            let kf = rat(5, 1);
            let kg = rat(1, 2);
            let lhs = rc_bracket(&ps_add(&f, &h).unwrap(), &kf, &g, &kg, n).unwrap();
            let rhs = ps_add(
                &rc_bracket(&f, &kf, &g, &kg, n).unwrap(),
                &rc_bracket(&h, &kf, &g, &kg, n).unwrap(),
            ).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
