use std::fmt;
use std::sync::Arc;

use crate::scalar::Scalar;
use crate::weil::{same_algebra, AlgebraSpec, InternalTruth, Jet};

use super::{complex_eq, tolerance, LinalgError, SmoothComplex};

/// The finite cardinal `[n] = {0, ..., n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CardinalIndex(pub usize);

impl CardinalIndex {
    pub fn len(self) -> usize {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> std::ops::Range<usize> {
        0..self.0
    }

    /// `[n] x [m] = [n*m]`.
    pub fn product(self, other: CardinalIndex) -> CardinalIndex {
        CardinalIndex(self.0 * other.0)
    }
}

fn check_entries<S: Scalar>(algebra: &Arc<AlgebraSpec>, entries: &[SmoothComplex<S>]) -> Result<(), LinalgError> {
    let probe = SmoothComplex::<S>::zero(algebra);
    for e in entries {
        probe.check_same(e)?;
    }
    Ok(())
}

/// Column vector in `C^[n]`.
#[derive(Clone, PartialEq)]
pub struct JetVector<S: Scalar> {
    algebra: Arc<AlgebraSpec>,
    entries: Vec<SmoothComplex<S>>,
}

impl<S: Scalar> JetVector<S> {
    pub fn new(algebra: &Arc<AlgebraSpec>, entries: Vec<SmoothComplex<S>>) -> Result<Self, LinalgError> {
        check_entries(algebra, &entries)?;
        Ok(JetVector { algebra: algebra.clone(), entries })
    }

    pub fn zeros(algebra: &Arc<AlgebraSpec>, n: usize) -> Self {
        JetVector { algebra: algebra.clone(), entries: vec![SmoothComplex::zero(algebra); n] }
    }

    /// Canonical basis vector `e_k` of `C^[n]`.
    pub fn unit(algebra: &Arc<AlgebraSpec>, n: usize, k: usize) -> Self {
        let mut v = Self::zeros(algebra, n);
        v.entries[k] = SmoothComplex::one(algebra);
        v
    }

    pub fn from_reals(algebra: &Arc<AlgebraSpec>, values: &[S]) -> Self {
        JetVector {
            algebra: algebra.clone(),
            entries: values.iter().map(|x| SmoothComplex::from_scalars(algebra, x.clone(), S::zero())).collect(),
        }
    }

    pub fn from_i64s(algebra: &Arc<AlgebraSpec>, values: &[i64]) -> Self {
        JetVector {
            algebra: algebra.clone(),
            entries: values.iter().map(|&x| SmoothComplex::from_i64(algebra, x)).collect(),
        }
    }

    pub fn from_jets(values: Vec<Jet<S>>) -> Result<Self, LinalgError> {
        let algebra = values.first().map(|j| j.algebra().clone()).ok_or(LinalgError::EmptyFamily)?;
        Self::new(&algebra, values.into_iter().map(SmoothComplex::real).collect())
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn index(&self) -> CardinalIndex {
        CardinalIndex(self.entries.len())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[SmoothComplex<S>] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &SmoothComplex<S> {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(SmoothComplex::is_zero)
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| e.is_negligible(tol))
    }

    pub fn has_nilpotent_part(&self) -> bool {
        self.entries.iter().any(SmoothComplex::has_nilpotent_part)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(SmoothComplex::max_abs).fold(0.0, f64::max)
    }

    pub fn standard(&self) -> Self {
        self.map(SmoothComplex::standard)
    }

    pub fn conj(&self) -> Self {
        self.map(SmoothComplex::conj)
    }

    fn map(&self, f: impl Fn(&SmoothComplex<S>) -> SmoothComplex<S>) -> Self {
        JetVector { algebra: self.algebra.clone(), entries: self.entries.iter().map(f).collect() }
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<(), LinalgError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            SmoothComplex::<S>::zero(&self.algebra).check_same(&SmoothComplex::zero(&other.algebra))?;
        }
        if self.dim() != other.dim() {
            return Err(LinalgError::MixedDimensions { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other)?;
        Ok(JetVector {
            algebra: self.algebra.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other)?;
        Ok(JetVector {
            algebra: self.algebra.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &SmoothComplex<S>) -> Self {
        self.map(|e| c * e)
    }

    pub fn scale_jet(&self, c: &Jet<S>) -> Self {
        self.map(|e| e.mul_jet(c))
    }

    pub fn scale_real(&self, c: &S) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|e| -e)
    }
}

impl<S: Scalar> fmt::Display for JetVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl<S: Scalar> fmt::Debug for JetVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Left-fold sum of a non-empty family of equal-length vectors.
pub fn finite_sum<S: Scalar>(family: &[JetVector<S>]) -> Result<JetVector<S>, LinalgError> {
    let (first, rest) = family.split_first().ok_or(LinalgError::EmptyFamily)?;
    rest.iter().try_fold(first.clone(), |acc, v| acc.checked_add(v))
}

/// `sum_i conj(x_i) y_i`.
pub fn inner_product<S: Scalar>(x: &JetVector<S>, y: &JetVector<S>) -> Result<SmoothComplex<S>, LinalgError> {
    x.check_compatible(y)?;
    let mut acc = SmoothComplex::zero(&x.algebra);
    for (a, b) in x.entries.iter().zip(&y.entries) {
        acc = &acc + &(&a.conj() * b);
    }
    Ok(acc)
}

/// Row-major matrix over the smooth complex ring.
#[derive(Clone, PartialEq)]
pub struct JetMatrix<S: Scalar> {
    algebra: Arc<AlgebraSpec>,
    rows: usize,
    cols: usize,
    entries: Vec<SmoothComplex<S>>,
}

impl<S: Scalar> JetMatrix<S> {
    pub fn new(
        algebra: &Arc<AlgebraSpec>,
        rows: usize,
        cols: usize,
        entries: Vec<SmoothComplex<S>>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::MixedDimensions { expected: rows * cols, found: entries.len() });
        }
        check_entries(algebra, &entries)?;
        Ok(JetMatrix { algebra: algebra.clone(), rows, cols, entries })
    }

    pub fn zeros(algebra: &Arc<AlgebraSpec>, rows: usize, cols: usize) -> Self {
        JetMatrix { algebra: algebra.clone(), rows, cols, entries: vec![SmoothComplex::zero(algebra); rows * cols] }
    }

    pub fn identity(algebra: &Arc<AlgebraSpec>, n: usize) -> Self {
        let mut m = Self::zeros(algebra, n, n);
        for i in 0..n {
            m.entries[i * n + i] = SmoothComplex::one(algebra);
        }
        m
    }

    /// Integer entries given as `(re, im)` pairs, row-major.
    pub fn from_gaussian(algebra: &Arc<AlgebraSpec>, rows: usize, cols: usize, values: &[(i64, i64)]) -> Self {
        assert_eq!(values.len(), rows * cols, "entry count");
        JetMatrix {
            algebra: algebra.clone(),
            rows,
            cols,
            entries: values
                .iter()
                .map(|&(re, im)| SmoothComplex::from_scalars(algebra, S::from_i64(re), S::from_i64(im)))
                .collect(),
        }
    }

    pub fn from_i64s(algebra: &Arc<AlgebraSpec>, rows: usize, cols: usize, values: &[i64]) -> Self {
        let pairs: Vec<(i64, i64)> = values.iter().map(|&v| (v, 0)).collect();
        Self::from_gaussian(algebra, rows, cols, &pairs)
    }

    pub fn from_columns(columns: &[JetVector<S>]) -> Result<Self, LinalgError> {
        let first = columns.first().ok_or(LinalgError::EmptyFamily)?;
        let rows = first.dim();
        for c in columns {
            first.check_compatible(c)?;
        }
        let cols = columns.len();
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for c in columns {
                entries.push(c.entries[i].clone());
            }
        }
        Ok(JetMatrix { algebra: first.algebra.clone(), rows, cols, entries })
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_index(&self) -> CardinalIndex {
        CardinalIndex(self.rows)
    }

    pub fn col_index(&self) -> CardinalIndex {
        CardinalIndex(self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[SmoothComplex<S>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &SmoothComplex<S> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: SmoothComplex<S>) -> Result<(), LinalgError> {
        SmoothComplex::zero(&self.algebra).check_same(&value)?;
        self.entries[i * self.cols + j] = value;
        Ok(())
    }

    pub fn column(&self, j: usize) -> JetVector<S> {
        JetVector { algebra: self.algebra.clone(), entries: (0..self.rows).map(|i| self.get(i, j).clone()).collect() }
    }

    pub fn columns(&self) -> Vec<JetVector<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(SmoothComplex::is_zero)
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| e.is_negligible(tol))
    }

    pub fn has_nilpotent_part(&self) -> bool {
        self.entries.iter().any(SmoothComplex::has_nilpotent_part)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(SmoothComplex::max_abs).fold(0.0, f64::max)
    }

    fn map(&self, f: impl Fn(&SmoothComplex<S>) -> SmoothComplex<S>) -> Self {
        JetMatrix {
            algebra: self.algebra.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn standard(&self) -> Self {
        self.map(SmoothComplex::standard)
    }

    pub fn conj(&self) -> Self {
        self.map(SmoothComplex::conj)
    }

    pub fn scale(&self, c: &SmoothComplex<S>) -> Self {
        self.map(|e| c * e)
    }

    pub fn scale_jet(&self, c: &Jet<S>) -> Self {
        self.map(|e| e.mul_jet(c))
    }

    pub fn scale_real(&self, c: &S) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|e| -e)
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        JetMatrix { algebra: self.algebra.clone(), rows: self.cols, cols: self.rows, entries }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    fn check_algebra(&self, other: &Arc<AlgebraSpec>) -> Result<(), LinalgError> {
        if !same_algebra(&self.algebra, other) {
            SmoothComplex::<S>::zero(&self.algebra).check_same(&SmoothComplex::zero(other))?;
        }
        Ok(())
    }

    fn check_shape(&self, other: &Self) -> Result<(), LinalgError> {
        self.check_algebra(&other.algebra)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::MixedDimensions {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_shape(other)?;
        Ok(JetMatrix {
            algebra: self.algebra.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_shape(other)?;
        Ok(JetMatrix {
            algebra: self.algebra.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_algebra(&other.algebra)?;
        if self.cols != other.rows {
            return Err(LinalgError::MixedDimensions { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(&self.algebra, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &JetVector<S>) -> Result<JetVector<S>, LinalgError> {
        self.check_algebra(&v.algebra)?;
        if self.cols != v.dim() {
            return Err(LinalgError::MixedDimensions { expected: self.cols, found: v.dim() });
        }
        let entries = (0..self.rows)
            .map(|i| {
                let mut acc = SmoothComplex::zero(&self.algebra);
                for j in 0..self.cols {
                    acc = &acc + &(self.get(i, j) * &v.entries[j]);
                }
                acc
            })
            .collect();
        Ok(JetVector { algebra: self.algebra.clone(), entries })
    }

    pub fn trace(&self) -> Result<SmoothComplex<S>, LinalgError> {
        self.require_square()?;
        let mut acc = SmoothComplex::zero(&self.algebra);
        for i in 0..self.rows {
            acc = &acc + self.get(i, i);
        }
        Ok(acc)
    }

    pub(crate) fn require_square(&self) -> Result<(), LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(())
    }

    /// Determinant by cofactor expansion along rows, memoized on the set of
    /// columns still available.
    pub fn determinant(&self) -> Result<SmoothComplex<S>, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        if n > 24 {
            return Err(LinalgError::MalformedInput(format!("determinant of a {n}x{n} matrix is not supported")));
        }
        let mut memo = std::collections::HashMap::new();
        Ok(self.minor(0, (1u32 << n) - 1, &mut memo))
    }

    fn minor(
        &self,
        row: usize,
        free: u32,
        memo: &mut std::collections::HashMap<u32, SmoothComplex<S>>,
    ) -> SmoothComplex<S> {
        if row == self.rows {
            return SmoothComplex::one(&self.algebra);
        }
        if let Some(v) = memo.get(&free) {
            return v.clone();
        }
        let mut acc = SmoothComplex::zero(&self.algebra);
        let mut sign_positive = true;
        for j in 0..self.cols {
            if free & (1 << j) == 0 {
                continue;
            }
            let a = self.get(row, j);
            if !a.is_zero() {
                let term = a * &self.minor(row + 1, free & !(1 << j), memo);
                acc = if sign_positive { &acc + &term } else { &acc - &term };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(free, acc.clone());
        acc
    }

    /// Solves `self * x = b` by Gaussian elimination with invertible pivots.
    pub fn solve(&self, b: &JetVector<S>) -> Result<JetVector<S>, LinalgError> {
        self.require_square()?;
        self.check_algebra(&b.algebra)?;
        let n = self.rows;
        if b.dim() != n {
            return Err(LinalgError::MixedDimensions { expected: n, found: b.dim() });
        }
        let tol = tolerance::<S>();
        let mut a: Vec<Vec<SmoothComplex<S>>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut rhs = b.entries.clone();
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[r][col].std_is_negligible(tol))
                .max_by(|&r, &s| {
                    let m = |x: &SmoothComplex<S>| {
                        let (re, im) = x.std_part();
                        re.to_f64().hypot(im.to_f64())
                    };
                    m(&a[r][col]).partial_cmp(&m(&a[s][col])).unwrap_or(std::cmp::Ordering::Equal)
                })
                .ok_or(LinalgError::Singular)?;
            a.swap(col, pivot);
            rhs.swap(col, pivot);
            let inv = a[col][col].invert()?;
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] * &inv;
                for c in col..n {
                    let t = &factor * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
                let t = &factor * &rhs[col];
                rhs[r] = &rhs[r] - &t;
            }
        }
        let entries = (0..n).map(|i| &rhs[i] * &a[i][i].invert().expect("pivot invertible")).collect();
        Ok(JetVector { algebra: self.algebra.clone(), entries })
    }
}

impl<S: Scalar> fmt::Display for JetMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

impl<S: Scalar> fmt::Debug for JetMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The Pauli matrices `sigma_1, sigma_2, sigma_3`.
pub fn pauli<S: Scalar>(algebra: &Arc<AlgebraSpec>) -> [JetMatrix<S>; 3] {
    [
        JetMatrix::from_gaussian(algebra, 2, 2, &[(0, 0), (1, 0), (1, 0), (0, 0)]),
        JetMatrix::from_gaussian(algebra, 2, 2, &[(0, 0), (0, -1), (0, 1), (0, 0)]),
        JetMatrix::from_gaussian(algebra, 2, 2, &[(1, 0), (0, 0), (0, 0), (-1, 0)]),
    ]
}

/// Kronecker product; entry `(i, j)` of the left factor with `(k, l)` of the
/// right lands at `(i*p + k, j*q + l)` for a `p x q` right factor.
pub trait Kronecker: Sized {
    fn kron(&self, other: &Self) -> Result<Self, LinalgError>;
}

impl<S: Scalar> Kronecker for JetVector<S> {
    fn kron(&self, other: &Self) -> Result<Self, LinalgError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            SmoothComplex::<S>::zero(&self.algebra).check_same(&SmoothComplex::zero(&other.algebra))?;
        }
        let mut entries = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a * b);
            }
        }
        Ok(JetVector { algebra: self.algebra.clone(), entries })
    }
}

impl<S: Scalar> Kronecker for JetMatrix<S> {
    fn kron(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_algebra(&other.algebra)?;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(&self.algebra, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.entries[(i * other.rows + k) * cols + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn tensor<T: Kronecker>(x: &T, y: &T) -> Result<T, LinalgError> {
    x.kron(y)
}

/// Entrywise comparison of `a` with its conjugate transpose.
pub fn is_hermitian<S: Scalar>(a: &JetMatrix<S>) -> Result<InternalTruth, LinalgError> {
    is_hermitian_within(a, tolerance::<S>())
}

pub fn is_hermitian_within<S: Scalar>(a: &JetMatrix<S>, tol: f64) -> Result<InternalTruth, LinalgError> {
    a.require_square()?;
    let mut verdicts = Vec::new();
    for i in 0..a.rows {
        for j in i..a.cols {
            verdicts.push(complex_eq(a.get(i, j), &a.get(j, i).conj(), tol));
        }
    }
    Ok(InternalTruth::all(verdicts))
}

/// Entrywise equality verdict of two matrices of the same shape.
pub fn matrix_eq<S: Scalar>(a: &JetMatrix<S>, b: &JetMatrix<S>, tol: f64) -> Result<InternalTruth, LinalgError> {
    a.check_shape(b)?;
    Ok(InternalTruth::all(a.entries.iter().zip(&b.entries).map(|(x, y)| complex_eq(x, y, tol))))
}

/// A linear map given as a program on vectors.
pub trait LinearProgram<S: Scalar> {
    fn apply(&self, v: &JetVector<S>) -> Result<JetVector<S>, LinalgError>;
}

impl<S: Scalar, F> LinearProgram<S> for F
where
    F: Fn(&JetVector<S>) -> Result<JetVector<S>, LinalgError>,
{
    fn apply(&self, v: &JetVector<S>) -> Result<JetVector<S>, LinalgError> {
        self(v)
    }
}

impl<S: Scalar> LinearProgram<S> for JetMatrix<S> {
    fn apply(&self, v: &JetVector<S>) -> Result<JetVector<S>, LinalgError> {
        JetMatrix::apply(self, v)
    }
}

const PROBE_COEFFICIENTS: [((i64, i64), (i64, i64)); 4] = [((1, 0), (1, 0)), ((2, 0), (-3, 0)), ((0, 1), (5, -2)), ((-7, 3), (0, -4))];

/// Matrix of `map` from `basis_in` to `basis_out`: column `j` holds the
/// coordinates of `map(basis_in[j])` in `basis_out`.
///
/// Linearity is spot-checked on fixed complex combinations of input basis
/// vectors before the matrix is assembled.
pub fn matrix_of<S: Scalar>(
    map: &dyn LinearProgram<S>,
    basis_in: &[JetVector<S>],
    basis_out: &[JetVector<S>],
) -> Result<JetMatrix<S>, LinalgError> {
    let out_matrix = JetMatrix::from_columns(basis_out)?;
    if out_matrix.rows() != out_matrix.cols() {
        return Err(LinalgError::MixedDimensions { expected: out_matrix.rows(), found: out_matrix.cols() });
    }
    let first_in = basis_in.first().ok_or(LinalgError::EmptyFamily)?;
    for v in basis_in {
        first_in.check_compatible(v)?;
    }
    let alg = first_in.algebra().clone();
    let images: Vec<JetVector<S>> = basis_in.iter().map(|v| map.apply(v)).collect::<Result<_, _>>()?;
    for img in &images {
        basis_out[0].check_compatible(img)?;
    }

    let tol = tolerance::<S>();
    let n = basis_in.len();
    for (p, &(ca, cb)) in PROBE_COEFFICIENTS.iter().enumerate() {
        let (i, j) = (p % n, (p * 7 + 1) % n);
        let a = SmoothComplex::from_scalars(&alg, S::from_i64(ca.0), S::from_i64(ca.1));
        let b = SmoothComplex::from_scalars(&alg, S::from_i64(cb.0), S::from_i64(cb.1));
        let combo = basis_in[i].scale(&a).checked_add(&basis_in[j].scale(&b))?;
        let expected = images[i].scale(&a).checked_add(&images[j].scale(&b))?;
        let got = map.apply(&combo)?;
        let scale = 1.0f64.max(expected.max_abs());
        if !got.checked_sub(&expected)?.is_negligible(tol * scale) {
            return Err(LinalgError::NotLinear);
        }
    }
    let zero_image = map.apply(&JetVector::zeros(&alg, first_in.dim()))?;
    if !zero_image.is_negligible(tol) {
        return Err(LinalgError::NotLinear);
    }

    let columns: Vec<JetVector<S>> = images.iter().map(|img| out_matrix.solve(img)).collect::<Result<_, _>>()?;
    JetMatrix::from_columns(&columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Backend;
    use num_rational::BigRational as Q;

    fn exact() -> Arc<AlgebraSpec> {
        AlgebraSpec::square_zero("e", Backend::Exact).unwrap()
    }

    fn eps(alg: &Arc<AlgebraSpec>) -> SmoothComplex<Q> {
        SmoothComplex::real(Jet::generator(alg, "e").unwrap())
    }

    #[test]
    fn sums() {
        let alg = exact();
        let a = JetVector::<Q>::from_i64s(&alg, &[1, 0]);
        let b = JetVector::from_i64s(&alg, &[0, 1]);
        assert_eq!(finite_sum(&[a.clone(), b]).unwrap(), JetVector::from_i64s(&alg, &[1, 1]));
        assert_eq!(finite_sum(&[a.clone()]).unwrap(), a);
        let e = JetVector::new(&alg, vec![eps(&alg), SmoothComplex::zero(&alg)]).unwrap();
        let two_e = JetVector::new(&alg, vec![&eps(&alg) + &eps(&alg), SmoothComplex::zero(&alg)]).unwrap();
        assert_eq!(finite_sum(&[e.clone(), e]).unwrap(), two_e);
        assert_eq!(finite_sum::<Q>(&[]).unwrap_err(), LinalgError::EmptyFamily);
        assert!(matches!(
            finite_sum(&[a, JetVector::from_i64s(&alg, &[1])]),
            Err(LinalgError::MixedDimensions { .. })
        ));
    }

    #[test]
    fn inner_products() {
        let alg = exact();
        let a = JetVector::<Q>::from_i64s(&alg, &[1, 0]);
        let b = JetVector::from_i64s(&alg, &[0, 1]);
        assert!(inner_product(&a, &b).unwrap().is_zero());
        let e = JetVector::new(&alg, vec![eps(&alg), SmoothComplex::zero(&alg)]).unwrap();
        assert!(inner_product(&e, &e).unwrap().is_zero());
        let z = JetVector::new(&alg, vec![SmoothComplex::<Q>::one(&alg), SmoothComplex::i(&alg)]).unwrap();
        assert_eq!(inner_product(&z, &z).unwrap(), SmoothComplex::from_i64(&alg, 2));
    }

    #[test]
    fn hermitian_verdicts() {
        let alg = exact();
        let [s1, s2, s3] = pauli::<Q>(&alg);
        assert_eq!(is_hermitian(&s2).unwrap(), InternalTruth::Holds);
        assert_eq!(is_hermitian(&s1.scale(&SmoothComplex::i(&alg))).unwrap(), InternalTruth::Fails);
        let mut e12 = JetMatrix::zeros(&alg, 2, 2);
        e12.set(0, 1, &SmoothComplex::i(&alg) * &eps(&alg)).unwrap();
        assert_eq!(is_hermitian(&s3.checked_add(&e12).unwrap()).unwrap(), InternalTruth::Undecided);
        assert!(matches!(
            is_hermitian(&JetMatrix::<Q>::zeros(&alg, 2, 3)),
            Err(LinalgError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn tensor_examples() {
        let alg = exact();
        let up = JetVector::<Q>::unit(&alg, 2, 0);
        assert_eq!(tensor(&up, &up).unwrap(), JetVector::unit(&alg, 4, 0));
        assert_eq!(tensor(&up, &up).unwrap().dim(), 4);
        let e_up = up.scale(&eps(&alg));
        assert!(tensor(&e_up, &e_up).unwrap().is_zero());
        let down = JetVector::<Q>::unit(&alg, 2, 1);
        assert_eq!(tensor(&up, &down).unwrap(), JetVector::unit(&alg, 4, 1));
        assert_eq!(tensor(&down, &up).unwrap(), JetVector::unit(&alg, 4, 2));
    }

    #[test]
    fn kron_mixed_product() {
        let alg = exact();
        let [s1, s2, s3] = pauli::<Q>(&alg);
        let lhs = s1.kron(&s2).unwrap().matmul(&s3.kron(&s1).unwrap()).unwrap();
        let rhs = s1.matmul(&s3).unwrap().kron(&s2.matmul(&s1).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn determinant_and_solve() {
        let alg = exact();
        let m = JetMatrix::<Q>::from_i64s(&alg, 3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 2]);
        assert_eq!(m.determinant().unwrap(), SmoothComplex::from_i64(&alg, 6));
        let b = JetVector::from_i64s(&alg, &[1, 2, 3]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x).unwrap(), b);
    }

    #[test]
    fn matrices_of_maps() {
        let alg = exact();
        let basis: Vec<_> = (0..2).map(|k| JetVector::<Q>::unit(&alg, 2, k)).collect();
        let id = |v: &JetVector<Q>| Ok(v.clone());
        assert_eq!(matrix_of(&id, &basis, &basis).unwrap(), JetMatrix::identity(&alg, 2));
        let [s1, _, _] = pauli::<Q>(&alg);
        assert_eq!(matrix_of(&s1, &basis, &basis).unwrap(), s1);
        let swap = |v: &JetVector<Q>| JetVector::new(v.algebra(), vec![v.get(1).clone(), v.get(0).clone()]);
        let permuted = vec![basis[1].clone(), basis[0].clone()];
        assert_eq!(matrix_of(&swap, &basis, &permuted).unwrap(), JetMatrix::identity(&alg, 2));
        let three = vec![JetVector::<Q>::from_i64s(&alg, &[1, 1]), JetVector::from_i64s(&alg, &[1, -1])];
        let m = matrix_of(&swap, &basis, &three).unwrap();
        // swap e0 = e1 = (b0 - b1)/2
        assert_eq!(m.get(0, 0), &SmoothComplex::from_scalars(&alg, Q::from_ratio(1, 2), Q::from_integer(0.into())));
        assert_eq!(m.get(1, 0), &SmoothComplex::from_scalars(&alg, Q::from_ratio(-1, 2), Q::from_integer(0.into())));
    }

    #[test]
    fn nonlinear_map_rejected() {
        let alg = exact();
        let basis: Vec<_> = (0..2).map(|k| JetVector::<Q>::unit(&alg, 2, k)).collect();
        let square = |v: &JetVector<Q>| JetVector::new(v.algebra(), v.entries().iter().map(|x| x * x).collect());
        assert_eq!(matrix_of(&square, &basis, &basis).unwrap_err(), LinalgError::NotLinear);
        let shift = |v: &JetVector<Q>| v.checked_add(&JetVector::from_i64s(v.algebra(), &[1, 0]));
        assert_eq!(matrix_of(&shift, &basis, &basis).unwrap_err(), LinalgError::NotLinear);
    }
}
