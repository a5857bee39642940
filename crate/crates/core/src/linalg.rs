//! Exact dense linear algebra over the coefficient rings.
//!
//! Vectors act from the left: a kernel vector `v` of `M` satisfies `v M = 0`,
//! matching the one-row-per-form layout used by the basis code.

use algebraics::polynomial::Polynomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{common_denominator, CoeffRing, RingElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: CoeffRing,
    rows: usize,
    cols: usize,
    entries: Vec<RingElem>,
}

impl ExactMatrix {
    pub fn from_rows(ring: CoeffRing, rows: Vec<Vec<RingElem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DegenerateInput("ragged matrix rows".into()));
            }
            for x in row {
                if x.ring() != ring {
                    return Err(Error::RingMismatch(ring.to_string(), x.ring().to_string()));
                }
                entries.push(x);
            }
        }
        Ok(ExactMatrix { ring, rows: nrows, cols, entries })
    }

    pub fn from_i64_rows(ring: CoeffRing, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| RingElem::from_int(ring, x)).collect())
            .collect();
        Self::from_rows(ring, rows).expect("entries built in the matrix ring")
    }

    pub fn zero(ring: CoeffRing, rows: usize, cols: usize) -> Self {
        ExactMatrix { ring, rows, cols, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: CoeffRing, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = ring.one();
        }
        m
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: RingElem) -> Result<()> {
        if x.ring() != self.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), x.ring().to_string()));
        }
        self.entries[i * self.cols + j] = x;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[RingElem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<RingElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::DegenerateInput("matrix shapes do not match".into()));
        }
        let rows = (0..self.rows)
            .map(|i| other.left_mul(self.row(i)))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Self::from_rows(self.ring, rows)?;
        out.cols = other.cols;
        Ok(out)
    }

    /// `v M` for a row vector `v`.
    pub fn left_mul(&self, v: &[RingElem]) -> Result<Vec<RingElem>> {
        if v.len() != self.rows {
            return Err(Error::DegenerateInput("vector length does not match".into()));
        }
        let mut out = vec![self.ring.zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.row(i)) {
                *o = o.add(&vi.mul(x)?)?;
            }
        }
        Ok(out)
    }
}

fn require_field(ring: CoeffRing) -> Result<()> {
    if ring.is_field() {
        Ok(())
    } else {
        Err(Error::UnsupportedRing(ring.to_string()))
    }
}

/// Reduced row echelon form in place with pivots scaled to 1; returns the
/// pivot columns.
fn rref(rows: &mut [Vec<RingElem>]) -> Result<Vec<usize>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv()?;
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv)?;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..ncols {
                let t = f.mul(&rows[r][j])?;
                rows[i][j] = rows[i][j].sub(&t)?;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

/// Rows scaled to integers, together with the scale applied to each row.
fn integer_rows(m: &ExactMatrix) -> Vec<(Vec<BigInt>, BigInt)> {
    (0..m.rows)
        .map(|i| {
            let row: Vec<&BigRational> = m.row(i).iter().map(|x| x.as_rational().unwrap()).collect();
            let l = common_denominator(row.iter().copied());
            let ints = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
            (ints, l)
        })
        .collect()
}

fn remove_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Fraction-free forward elimination on the first `width` columns; returns
/// the number of pivots, which end up in the leading rows.
fn integer_echelon(rows: &mut [Vec<BigInt>], width: usize) -> usize {
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let prow = &head[r];
        let piv = &prow[c];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let g = piv.gcd(&row[c]);
            let a = piv / &g;
            let b = &row[c] / &g;
            for (x, y) in row.iter_mut().zip(prow).skip(c) {
                *x = &*x * &a - y * &b;
            }
            remove_content(row);
        }
        r += 1;
    }
    r
}

/// Basis of `{v : v M = 0}` in reduced echelon form.
pub fn kernel(m: &ExactMatrix) -> Result<Vec<Vec<RingElem>>> {
    require_field(m.ring)?;
    let n = m.rows;
    let raw: Vec<Vec<RingElem>> = match m.ring {
        CoeffRing::Rational => {
            let scaled = integer_rows(m);
            let mut aug: Vec<Vec<BigInt>> = scaled
                .iter()
                .enumerate()
                .map(|(i, (row, _))| {
                    let mut r = row.clone();
                    r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
                    r
                })
                .collect();
            let rank = integer_echelon(&mut aug, m.cols);
            aug[rank..]
                .iter()
                .map(|row| {
                    row[m.cols..]
                        .iter()
                        .zip(&scaled)
                        .map(|(w, (_, s))| RingElem::from_rational(BigRational::from_integer(w * s)))
                        .collect()
                })
                .collect()
        }
        _ => {
            let mut aug: Vec<Vec<RingElem>> = (0..n)
                .map(|i| {
                    let mut r = m.row(i).to_vec();
                    r.extend((0..n).map(|j| if i == j { m.ring.one() } else { m.ring.zero() }));
                    r
                })
                .collect();
            let rank = rref_prefix(&mut aug, m.cols)?;
            aug[rank..].iter().map(|row| row[m.cols..].to_vec()).collect()
        }
    };
    let mut basis = raw;
    let pivots = rref(&mut basis)?;
    basis.truncate(pivots.len());
    Ok(basis)
}

/// Gaussian elimination restricted to the first `width` columns.
fn rref_prefix(rows: &mut [Vec<RingElem>], width: usize) -> Result<usize> {
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv()?;
        let (head, tail) = rows.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].mul(&inv)?;
            for (x, y) in row.iter_mut().zip(prow).skip(c) {
                *x = x.sub(&f.mul(y)?)?;
            }
        }
        r += 1;
    }
    Ok(r)
}

pub fn rank(m: &ExactMatrix) -> Result<usize> {
    require_field(m.ring)?;
    match m.ring {
        CoeffRing::Rational => {
            let mut rows: Vec<Vec<BigInt>> = integer_rows(m).into_iter().map(|(r, _)| r).collect();
            Ok(integer_echelon(&mut rows, m.cols))
        }
        _ => rref_prefix(&mut m.to_rows(), m.cols),
    }
}

/// Some `x` with `x A = b`.
pub fn solve(a: &ExactMatrix, b: &[RingElem]) -> Result<Vec<RingElem>> {
    require_field(a.ring)?;
    if b.len() != a.cols {
        return Err(Error::DegenerateInput("right-hand side length does not match".into()));
    }
    let mut rows = a.to_rows();
    rows.push(b.iter().map(RingElem::neg).collect());
    let stacked = ExactMatrix::from_rows(a.ring, rows)?;
    let ker = kernel(&stacked)?;
    let v = ker.iter().find(|v| !v[a.rows].is_zero()).ok_or(Error::NoSolution)?;
    let inv = v[a.rows].inv()?;
    v[..a.rows].iter().map(|x| x.mul(&inv)).collect()
}

/// A rational eigenvalue with a basis of left eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenspace {
    pub value: BigRational,
    pub multiplicity: usize,
    pub vectors: Vec<Vec<BigRational>>,
}

/// An irreducible factor of degree at least two, as monic coefficients from
/// the constant term upwards.
#[derive(Clone, Debug, PartialEq)]
pub struct UnsplitFactor {
    pub coeffs: Vec<BigRational>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenSplit {
    /// Monic characteristic polynomial, constant term first.
    pub charpoly: Vec<BigRational>,
    /// Sorted by decreasing eigenvalue.
    pub eigenspaces: Vec<Eigenspace>,
    pub unsplit: Vec<UnsplitFactor>,
}

/// Monic characteristic polynomial by Faddeev-LeVerrier.
pub fn charpoly(t: &ExactMatrix) -> Result<Vec<BigRational>> {
    if t.rows != t.cols {
        return Err(Error::DegenerateInput("matrix is not square".into()));
    }
    if t.ring != CoeffRing::Rational {
        return Err(Error::UnsupportedRing(t.ring.to_string()));
    }
    let n = t.rows;
    let a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| t.row(i).iter().map(|x| x.as_rational().unwrap().clone()).collect())
        .collect();
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = BigRational::one();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !m[l][j].is_zero() {
                        acc += &a[i][l] * &m[l][j];
                    }
                }
                if i == j {
                    acc += &c[n - k + 1];
                }
                next[i][j] = acc;
            }
        }
        m = next;
        let mut tr = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        c[n - k] = -tr / BigRational::from_integer(k.into());
    }
    Ok(c)
}

/// Factors the characteristic polynomial and splits off rational eigenvalues.
pub fn eigen_split(t: &ExactMatrix) -> Result<EigenSplit> {
    let cp = charpoly(t)?;
    let l = common_denominator(&cp);
    let ints: Vec<BigInt> = cp.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let factors = Polynomial::from(ints).factor();
    let mut eigenspaces = Vec::new();
    let mut unsplit = Vec::new();
    for f in factors.polynomial_factors {
        let coeffs = f.polynomial.into_coefficients();
        let lead = BigRational::from_integer(coeffs.last().unwrap().clone());
        let monic: Vec<BigRational> =
            coeffs.into_iter().map(|x| BigRational::from_integer(x) / &lead).collect();
        if monic.len() == 2 {
            let value = -monic[0].clone();
            let mut shifted = t.clone();
            for i in 0..t.rows {
                let d = shifted.get(i, i).sub(&RingElem::from_rational(value.clone()))?;
                shifted.set(i, i, d)?;
            }
            let vectors = kernel(&shifted)?
                .into_iter()
                .map(|v| v.into_iter().map(|x| x.as_rational().unwrap().clone()).collect())
                .collect();
            eigenspaces.push(Eigenspace { value, multiplicity: f.power, vectors });
        } else {
            unsplit.push(UnsplitFactor { coeffs: monic, multiplicity: f.power });
        }
    }
    eigenspaces.sort_by(|a, b| b.value.cmp(&a.value));
    unsplit.sort_by(|a, b| a.coeffs.len().cmp(&b.coeffs.len()).then_with(|| a.coeffs.cmp(&b.coeffs)));
    Ok(EigenSplit { charpoly: cp, eigenspaces, unsplit })
}

impl EigenSplit {
    /// Sum of degree times multiplicity over all factors.
    pub fn total_degree(&self) -> usize {
        self.eigenspaces.iter().map(|e| e.multiplicity).sum::<usize>()
            + self.unsplit.iter().map(|u| (u.coeffs.len() - 1) * u.multiplicity).sum::<usize>()
    }
}
