//! Hecke operators `T(p^2)` on half-integral weight forms and eigenforms
//! obtained from the operator matrix at low precision.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{add_mod, is_prime, mul_mod, sub_mod};
use num_traits::Zero;
use crate::bases::{is_forbidden, FormBasis};
use crate::error::{Error, Result};
use crate::forms::HalfWeight;
use crate::linalg::{eigen_split, solve, EigenSplit, ExactMatrix};
use crate::numth::kronecker_prime;
use crate::ring::{bigint_mod, CoeffRing, RingElem};
use crate::series::{ps_lincomb, QExpansion};

/// `b_n = a(p^2 n) + ((-1)^k n | p) p^{k-1} a(n) + p^{2k-1} a(n / p^2)`.
///
/// At `p = 2` the symbol is Kronecker's and the result is projected to the
/// plus space by zeroing the forbidden indices.
pub fn hecke_tp2(f: &QExpansion, w: HalfWeight, p: u64, out_prec: usize) -> Result<QExpansion> {
    if !is_prime(p) {
        return Err(Error::DegenerateInput(format!("{p} is not prime")));
    }
    let p2 = (p * p) as usize;
    let needed = p2 * out_prec;
    if f.prec() < needed {
        return Err(Error::PrecisionTooLow { needed, got: f.prec() });
    }
    let k = w.k();
    let sign = w.sign();
    let symbol = |n: usize| kronecker_prime(sign * n as i64, p);
    // at p = 2 only the plus-space coefficients are kept
    let kept = |n: usize| p != 2 || !is_forbidden(w, n);
    // weight 1/2 has p^{k-1} = 1/p, so everything is scaled by p first
    let scale: u64 = if k == 0 { p } else { 1 };
    let pk = |e: u32| BigInt::from(p).pow(e) * scale / p;
    let (c0, c1, c2) = (BigInt::from(scale), pk(k), pk(2 * k));
    let ring = f.ring();
    match ring.modulus() {
        None => {
            let (den, nums) = f.integer_parts().unwrap();
            let out = (0..out_prec)
                .map(|n| {
                    if !kept(n) {
                        return BigInt::zero();
                    }
                    let mut b = &c0 * &nums[p2 * n];
                    match symbol(n) {
                        1 => b += &c1 * &nums[n],
                        -1 => b -= &c1 * &nums[n],
                        _ => {}
                    }
                    if n % p2 == 0 {
                        b += &c2 * &nums[n / p2];
                    }
                    b
                })
                .collect();
            QExpansion::from_integer_parts(ring, out, den * scale)
        }
        Some(m) => {
            let a = f.residues().unwrap();
            let inv = ring.embed_int(&scale.into()).inv()?.residue().unwrap();
            let (c0, c1, c2) = [c0, c1, c2].map(|c| mul_mod(bigint_mod(&c, m), inv, m)).into();
            let out = (0..out_prec)
                .map(|n| {
                    if !kept(n) {
                        return 0;
                    }
                    let mut b = mul_mod(c0, a[p2 * n], m);
                    match symbol(n) {
                        1 => b = add_mod(b, mul_mod(c1, a[n], m), m),
                        -1 => b = sub_mod(b, mul_mod(c1, a[n], m), m),
                        _ => {}
                    }
                    if n % p2 == 0 {
                        b = add_mod(b, mul_mod(c2, a[n / p2], m), m);
                    }
                    b
                })
                .collect();
            Ok(QExpansion::from_residues(ring, out))
        }
    }
}

/// Action of `T(p^2)` on a space, with its rational eigenforms.
#[derive(Clone, Debug)]
pub struct EigenData {
    pub space: FormBasis,
    pub p: u64,
    /// Row `i` holds the coordinates of `T(p^2) f_i` in the basis.
    pub matrix: ExactMatrix,
    pub split: EigenSplit,
    /// One entry per eigenvector: eigenvalue, combination vector, expansion.
    pub eigenforms: Vec<(BigRational, Vec<BigRational>, QExpansion)>,
}

/// Matrix of `T(p^2)` in `space`, solved from the first `low_prec`
/// coefficients and checked against every coefficient the basis determines.
pub fn hecke_matrix(space: &FormBasis, p: u64, low_prec: usize) -> Result<ExactMatrix> {
    let w = space.weight;
    let needed = crate::bases::independence_threshold(w);
    if low_prec < needed {
        return Err(Error::PrecisionTooLow { needed, got: low_prec });
    }
    let p2 = (p * p) as usize;
    if space.prec() < p2 * low_prec {
        return Err(Error::PrecisionTooLow { needed: p2 * low_prec, got: space.prec() });
    }
    let ring = space.ring().ok_or_else(|| Error::DegenerateInput("empty basis".into()))?;
    let check_prec = space.prec() / p2;
    let rows: Vec<Vec<RingElem>> = space
        .forms
        .iter()
        .map(|f| (0..low_prec).map(|n| f.series.coeff(n)).collect())
        .collect();
    let a = ExactMatrix::from_rows(ring, rows)?;
    let mut out = Vec::with_capacity(space.len());
    for f in &space.forms {
        let image = hecke_tp2(&f.series, w, p, check_prec)?;
        let b: Vec<RingElem> = (0..low_prec).map(|n| image.coeff(n)).collect();
        let x = solve(&a, &b).map_err(|e| match e {
            Error::NoSolution => Error::NotStable(low_prec),
            e => e,
        })?;
        let terms: Vec<(RingElem, &QExpansion)> =
            x.iter().cloned().zip(space.forms.iter().map(|g| &g.series)).collect();
        let combo = ps_lincomb(&terms)?.truncate(check_prec);
        if combo != image {
            return Err(Error::NotStable(check_prec));
        }
        out.push(x);
    }
    ExactMatrix::from_rows(ring, out)
}

/// Eigenforms of `T(p^2)` on a rational space: the matrix comes from the
/// first `low_prec` coefficients, the eigenforms are expanded to `high_prec`.
pub fn eigenforms(space: &FormBasis, p: u64, low_prec: usize, high_prec: usize) -> Result<EigenData> {
    let ring = space.ring().ok_or_else(|| Error::DegenerateInput("empty basis".into()))?;
    if ring != CoeffRing::Rational {
        return Err(Error::UnsupportedRing(ring.to_string()));
    }
    if space.prec() < high_prec {
        return Err(Error::PrecisionTooLow { needed: high_prec, got: space.prec() });
    }
    let matrix = hecke_matrix(space, p, low_prec)?;
    let split = eigen_split(&matrix)?;
    let mut forms = Vec::new();
    for s in &split.eigenspaces {
        for v in &s.vectors {
            let terms: Vec<(RingElem, QExpansion)> = v
                .iter()
                .zip(&space.forms)
                .map(|(c, f)| (RingElem::from_rational(c.clone()), f.series.truncate(high_prec)))
                .collect();
            let refs: Vec<(RingElem, &QExpansion)> = terms.iter().map(|(c, f)| (c.clone(), f)).collect();
            forms.push((s.value.clone(), v.clone(), ps_lincomb(&refs)?));
        }
    }
    Ok(EigenData { space: space.clone(), p, matrix, split, eigenforms: forms })
}
