//! Exact linear algebra over the rationals.
//!
//! Subspaces are stored in reduced row echelon form with no zero rows, so two
//! [`Subspace`] values are equal exactly when they span the same space. All
//! other modules build on the handful of operations here: intersection, sum,
//! kernel, image, preimage, and the deterministic quotient projection.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"`, `"-p/q"`. Whitespace around the literal is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::input(format!("bad rational literal {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed to describe the 0-row case.
    pub fn from_rows(cols: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::input(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().cloned());
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();
        Matrix::from_rows(cols, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::dim(format!(
                "vector of length {} for a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        rref_rows(self.row_vecs(), self.cols).1.len()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form with zero rows dropped; returns the rows and the
/// pivot column of each row.
fn rref_rows(mut rows: Vec<Vec<Rational>>, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A linear subspace of `Q^n`, stored as its canonical RREF basis.
///
/// The derived ordering compares ambient dimension, then dimension, then the
/// RREF entries lexicographically. Linear systems use it as their member order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    /// Span of `vectors` in `Q^ambient`.
    pub fn canonicalize(ambient: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        let m = Matrix::from_rows(ambient, vectors)?;
        Ok(Self::span_of_rows(&m))
    }

    /// Span of the rows of `m`.
    pub fn span_of_rows(m: &Matrix) -> Self {
        let (rows, _) = rref_rows(m.row_vecs(), m.cols());
        let basis = Matrix::from_rows(m.cols(), &rows).expect("rref keeps the width");
        Subspace {
            ambient: m.cols(),
            basis,
        }
    }

    pub fn from_i64(ambient: usize, vectors: &[&[i64]]) -> Result<Self> {
        Ok(Self::span_of_rows(&Matrix::from_i64(ambient, vectors)?))
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, axes: &[usize]) -> Result<Self> {
        let mut rows = Vec::new();
        for &a in axes {
            if a >= ambient {
                return Err(Error::Index {
                    index: a,
                    len: ambient,
                });
            }
            let mut v = vec![Rational::zero(); ambient];
            v[a] = Rational::one();
            rows.push(v);
        }
        Subspace::canonicalize(ambient, &rows)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| {
                self.basis
                    .row(i)
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("no zero rows")
            })
            .collect()
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>> {
        self.check_len(v.len())?;
        let coords: Vec<Rational> = self.pivots().iter().map(|&p| v[p].clone()).collect();
        let mut recon = vec![Rational::zero(); self.ambient];
        for (i, c) in coords.iter().enumerate() {
            for (x, b) in recon.iter_mut().zip(self.basis.row(i)) {
                *x += c * b;
            }
        }
        Ok((recon.as_slice() == v).then_some(coords))
    }

    pub fn contains_vector(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_same(other)?;
        if self.dim() > other.dim() {
            return Ok(false);
        }
        for i in 0..self.dim() {
            if !other.contains_vector(self.basis.row(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `{w : <w, v> = 0 for all v in self}`.
    pub fn annihilator(&self) -> Subspace {
        kernel(&self.basis)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let mut constraints = self.annihilator().basis.row_vecs();
        constraints.extend(other.annihilator().basis.row_vecs());
        Ok(kernel(&Matrix::from_rows(self.ambient, &constraints)?))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let mut gens = self.basis.row_vecs();
        gens.extend(other.basis.row_vecs());
        Subspace::canonicalize(self.ambient, &gens)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.ambient {
            return Err(Error::dim(format!(
                "vector of length {len} in ambient dimension {}",
                self.ambient
            )));
        }
        Ok(())
    }

    fn check_same(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::dim(format!(
                "ambient dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{} in Q^{}", self.basis, self.ambient)
    }
}

/// Null space of `f`, as a subspace of `Q^cols`.
pub fn kernel(f: &Matrix) -> Subspace {
    let n = f.cols();
    let (rows, pivots) = rref_rows(f.row_vecs(), n);
    let mut gens = Vec::new();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (row, &p) in rows.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        gens.push(v);
    }
    Subspace::canonicalize(n, &gens).expect("kernel vectors have the ambient length")
}

/// `f(a)` for the subspace `a` of the domain.
pub fn image(f: &Matrix, a: &Subspace) -> Result<Subspace> {
    if a.ambient() != f.cols() {
        return Err(Error::dim(format!(
            "subspace of Q^{} pushed through a {}x{} matrix",
            a.ambient(),
            f.rows(),
            f.cols()
        )));
    }
    let imgs = a
        .basis()
        .row_vecs()
        .iter()
        .map(|v| f.apply(v))
        .collect::<Result<Vec<_>>>()?;
    Subspace::canonicalize(f.rows(), &imgs)
}

/// `f^{-1}(b)` for the subspace `b` of the codomain.
pub fn preimage(f: &Matrix, b: &Subspace) -> Result<Subspace> {
    if b.ambient() != f.rows() {
        return Err(Error::dim(format!(
            "subspace of Q^{} pulled back through a {}x{} matrix",
            b.ambient(),
            f.rows(),
            f.cols()
        )));
    }
    let constraints = b.annihilator().basis().mul(f)?;
    Ok(kernel(&constraints))
}

/// A surjection `Q^n -> Q^(n - dim k)` with kernel exactly `k`.
///
/// The rows are the RREF basis of the annihilator of `k`, so the result only
/// depends on `k` and is itself in RREF.
pub fn quotient_projection(n: usize, k: &Subspace) -> Result<Matrix> {
    if k.ambient() != n {
        return Err(Error::dim(format!(
            "quotient of Q^{n} by a subspace of Q^{}",
            k.ambient()
        )));
    }
    Ok(k.annihilator().basis().clone())
}

/// The unique `g` with `g . q_k = q_l . f`, where `q_k`, `q_l` are the
/// [`quotient_projection`]s of `k` and `l`. Requires `f(k) ⊆ l`.
pub fn induced_quotient_map(f: &Matrix, k: &Subspace, l: &Subspace) -> Result<Matrix> {
    if !image(f, k)?.is_subspace_of(l)? {
        return Err(Error::Precondition(format!(
            "image of {k} is not contained in {l}"
        )));
    }
    let qk = quotient_projection(f.cols(), k)?;
    let ql = quotient_projection(f.rows(), l)?;
    // qk is in RREF: the unit vectors at its pivots give a right inverse.
    let pivots = Subspace::span_of_rows(&qk).pivots();
    let mut section = Matrix::zeros(f.cols(), qk.rows());
    for (i, &p) in pivots.iter().enumerate() {
        section.data[p * qk.rows() + i] = Rational::one();
    }
    ql.mul(f)?.mul(&section)
}

/// Solves `a x = b` exactly when `a` is square and invertible.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.rows();
    if a.cols() != n {
        return None;
    }
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (red, pivots) = rref_rows(rows, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let inv: Vec<Vec<Rational>> = red.iter().map(|r| r[n..].to_vec()).collect();
    Matrix::from_rows(n, &inv).ok()
}

/// Determinant by fraction-free reduction over `Q`.
pub fn determinant(a: &Matrix) -> Option<Rational> {
    let n = a.rows();
    if a.cols() != n {
        return None;
    }
    let mut m = a.row_vecs();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Some(Rational::zero());
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] / &m[c][c];
            for j in c..n {
                let d = &factor * &m[c][j];
                m[i][j] -= d;
            }
        }
    }
    Some(det)
}
