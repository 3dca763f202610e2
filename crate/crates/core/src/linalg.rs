//! Exact linear algebra over the rationals and prime fields.
//!
//! Every higher-level question in the crate (Hom spaces, kernels of coactions,
//! Galois maps, cohomology) is reduced to the handful of operations here.
//! Subspaces are always stored in reduced row echelon form so that equal
//! subspaces compare equal as values.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("mixed field tags: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Ground field selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        // residues are multiplied as u128, so any u64 prime is fine
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp {
                v: n.rem_euclid(*p as i64) as u64,
                p: *p,
            },
        }
    }

    pub fn frac(&self, num: i64, den: i64) -> Scalar {
        self.int(num).div(&self.int(den)).expect("nonzero denominator")
    }

    pub fn zeros(&self, n: usize) -> Vec<Scalar> {
        vec![self.zero(); n]
    }

    pub fn unit_vector(&self, n: usize, i: usize) -> Vec<Scalar> {
        let mut v = self.zeros(n);
        v[i] = self.one();
        v
    }
}

/// An exact field element. Arithmetic between elements of different fields panics;
/// public entry points check tags and report [`LinalgError::FieldMismatch`] instead.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(LinalgError::Singular);
        }
        Ok(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: pow_mod(*v, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    /// Integer value when the element is an integer in a small range (used for display).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(q) if q.is_integer() => i64::try_from(q.to_integer()).ok(),
            Scalar::Q(_) => None,
            Scalar::Fp { v, .. } => i64::try_from(*v).ok(),
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Q(q) if q.is_negative())
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed field tags: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u128 + *p as u128 - *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: (p - v) % p,
                p: *p,
            },
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

// ---------------------------------------------------------------------------
// vectors

pub type Vector = Vec<Scalar>;

pub fn serialize_vector<S: serde::Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `acc += c * v`, skipping work when `c` is zero.
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + &(c * x);
        }
    }
}

pub fn scale(v: &[Scalar], c: &Scalar) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = a.first().map(|x| x.field().zero()).unwrap_or(Field::Rationals.zero());
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

/// Kronecker product of vectors, index `i * b.len() + j`.
pub fn kron_vec(a: &[Scalar], b: &[Scalar]) -> Vector {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

fn check_fields<'a>(field: Field, xs: impl IntoIterator<Item = &'a Scalar>) -> Result<()> {
    for x in xs {
        if x.field() != field {
            return Err(LinalgError::FieldMismatch(field, x.field()));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// matrices

/// Dense matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        check_fields(field, &data)?;
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data = rows.iter().flat_map(|row| row.iter().map(|&x| field.int(x))).collect();
        Matrix {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_cols(field: Field, rows: usize, cols: &[Vector]) -> Result<Matrix> {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: rows,
                    got: c.len(),
                });
            }
            check_fields(field, c)?;
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vector]) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Matrix::new(field, rows.len(), cols, data)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let idx = r * self.cols + c;
        self.data[idx] = &self.data[idx] + v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    fn check_same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.add_at(r, c, &(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix product for shapes known to match; panics otherwise.
    pub fn dot(&self, other: &Matrix) -> Matrix {
        self.mul(other).expect("matrix shapes")
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length");
        let mut out = self.field.zeros(self.rows);
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = self.get(r, k);
                if !a.is_zero() {
                    *o = &*o + &(a * x);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scaled(&self.field.int(-1)))
    }

    pub fn scaled(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        axpy(&mut self.data, c, &other.data);
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.get(r2, c2);
                        if !b.is_zero() {
                            out.set(r1 * other.rows + r2, c1 * other.cols + c2, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut ech = Echelon::new(self.field, self.cols);
        for r in 0..self.rows {
            ech.insert(self.row(r).to_vec());
        }
        let pivots = ech.pivots().to_vec();
        let rows = ech.into_rows();
        let m = Matrix::from_rows(self.field, self.cols, &rows).expect("shape");
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        // eliminate along the shorter side
        if self.rows <= self.cols {
            self.rref().1.len()
        } else {
            self.transpose().rref().1.len()
        }
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let (r, piv) = aug.rref();
        if piv.len() < n || (n > 0 && piv[n - 1] != n - 1) {
            return Err(LinalgError::Singular);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Restriction to a subset of columns.
    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    /// Entries as strings, row-major (for reports).
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// incremental elimination

/// Rows kept in reduced row echelon form as they are inserted.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    width: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: Field, width: usize) -> Echelon {
        Echelon {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vector> {
        self.rows
    }

    /// Reduces `v` against the stored rows; the result vanishes at every pivot.
    pub fn reduce(&self, mut v: Vector) -> Vector {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = -&v[p];
                axpy(&mut v, &c, row);
            }
        }
        v
    }

    /// Inserts a row; returns whether the rank grew.
    pub fn insert(&mut self, v: Vector) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero pivot");
        v = scale(&v, &inv);
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = -&row[p];
                axpy(row, &c, &v);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, v);
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v.to_vec()))
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

// ---------------------------------------------------------------------------
// subspaces

/// A subspace of `field^ambient` with canonical reduced echelon basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace::span(field, ambient, (0..ambient).map(|i| field.unit_vector(ambient, i)))
            .expect("unit vectors")
    }

    pub fn span(
        field: Field,
        ambient: usize,
        vectors: impl IntoIterator<Item = Vector>,
    ) -> Result<Subspace> {
        let mut ech = Echelon::new(field, ambient);
        for v in vectors {
            if v.len() != ambient {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient,
                    got: v.len(),
                });
            }
            check_fields(field, &v)?;
            ech.insert(v);
            if ech.is_full() {
                break;
            }
        }
        Ok(Subspace::from_echelon(ech))
    }

    pub fn from_echelon(ech: Echelon) -> Subspace {
        let field = ech.field;
        let ambient = ech.width;
        let pivots = ech.pivots.clone();
        Subspace {
            field,
            ambient,
            basis: ech.rows,
            pivots,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn echelon(&self) -> Echelon {
        Echelon {
            field: self.field,
            width: self.ambient,
            rows: self.basis.clone(),
            pivots: self.pivots.clone(),
        }
    }

    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = -&v[p];
                axpy(&mut v, &c, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                got: v.len(),
            });
        }
        check_fields(self.field, v)?;
        Ok(is_zero_vec(&self.reduce(v)))
    }

    /// Coordinates of a member vector with respect to the stored basis.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !is_zero_vec(&self.reduce(v)) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut ech = self.echelon();
        for v in &other.basis {
            ech.insert(v.clone());
        }
        Subspace::from_echelon(ech)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| is_zero_vec(&self.reduce(v)))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // solve  sum a_i u_i = sum b_j w_j
        let n = self.dim();
        let mut cols: Vec<Vector> = self.basis.clone();
        cols.extend(other.basis.iter().map(|w| scale(w, &self.field.int(-1))));
        let mat = Matrix::from_cols(self.field, self.ambient, &cols).expect("shape");
        let ker = kernel(&mat).expect("field");
        let vectors = ker.basis.iter().map(|k| {
            let mut v = self.field.zeros(self.ambient);
            for i in 0..n {
                axpy(&mut v, &k[i], &self.basis[i]);
            }
            v
        });
        Subspace::span(self.field, self.ambient, vectors).expect("shape")
    }

    /// Basis vectors as columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_cols(self.field, self.ambient, &self.basis).expect("shape")
    }

    /// Image of the subspace under a linear map.
    pub fn image(&self, m: &Matrix) -> Subspace {
        Subspace::span(m.field(), m.rows(), self.basis.iter().map(|v| m.apply(v))).expect("shape")
    }
}

/// Right null space of `m` in canonical echelon basis.
pub fn kernel(m: &Matrix) -> Result<Subspace> {
    check_fields(m.field, &m.data)?;
    let (r, piv) = m.rref();
    let n = m.cols;
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    let mut vecs = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = m.field.zeros(n);
        v[f] = m.field.one();
        for (i, &p) in piv.iter().enumerate() {
            v[p] = -r.get(i, f);
        }
        vecs.push(v);
    }
    Subspace::span(m.field, n, vecs)
}

/// Column space of `m`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::span(m.field, m.rows, m.columns()).expect("shape")
}

/// One solution of `m x = b`, free variables set to zero; `None` when inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vector>> {
    if b.len() != m.rows {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows,
            got: b.len(),
        });
    }
    check_fields(m.field, &m.data)?;
    check_fields(m.field, b)?;
    let col_b = Matrix::from_cols(m.field, m.rows, &[b.to_vec()])?;
    let aug = m.hstack(&col_b);
    let (r, piv) = aug.rref();
    if piv.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = m.field.zeros(m.cols);
    for (i, &p) in piv.iter().enumerate() {
        x[p] = r.get(i, m.cols).clone();
    }
    Ok(Some(x))
}

/// Solves `m x = b_k` for several right-hand sides at once.
pub fn solve_many(m: &Matrix, bs: &[Vector]) -> Result<Vec<Option<Vector>>> {
    check_fields(m.field, &m.data)?;
    let rhs = Matrix::from_cols(m.field, m.rows, bs)?;
    let aug = m.hstack(&rhs);
    let (r, piv) = aug.rref();
    let mut out = Vec::with_capacity(bs.len());
    for k in 0..bs.len() {
        let col = m.cols + k;
        // inconsistent iff some row is zero on the first m.cols entries but nonzero at col
        let mut consistent = true;
        let mut x = m.field.zeros(m.cols);
        for (i, &p) in piv.iter().enumerate() {
            if p >= m.cols {
                if !r.get(i, col).is_zero() {
                    consistent = false;
                }
            } else {
                x[p] = r.get(i, col).clone();
            }
        }
        out.push(if consistent { Some(x) } else { None });
    }
    Ok(out)
}

/// Quotient of `field^ambient` by a subspace, with canonical projection and section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    ambient: usize,
    killed: Subspace,
    /// ambient coordinates retained by the quotient (non-pivot columns of `killed`)
    kept: Vec<usize>,
    projection: Matrix,
    section: Matrix,
}

impl QuotientSpace {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.kept.len()
    }

    pub fn killed(&self) -> &Subspace {
        &self.killed
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    pub fn section(&self) -> &Matrix {
        &self.section
    }

    pub fn project(&self, v: &[Scalar]) -> Vector {
        let r = self.killed.reduce(v);
        self.kept.iter().map(|&k| r[k].clone()).collect()
    }

    /// Representative of a quotient vector in the ambient space.
    pub fn lift(&self, q: &[Scalar]) -> Vector {
        let mut v = self.killed.field.zeros(self.ambient);
        for (x, &k) in q.iter().zip(&self.kept) {
            v[k] = x.clone();
        }
        v
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }
}

pub fn quotient(ambient: usize, s: &Subspace) -> Result<QuotientSpace> {
    if s.ambient != ambient {
        return Err(LinalgError::DimensionMismatch {
            expected: ambient,
            got: s.ambient,
        });
    }
    let field = s.field;
    let kept: Vec<usize> = (0..ambient).filter(|c| !s.pivots.contains(c)).collect();
    let q = kept.len();
    let mut projection = Matrix::zeros(field, q, ambient);
    for j in 0..ambient {
        let r = s.reduce(&field.unit_vector(ambient, j));
        for (i, &k) in kept.iter().enumerate() {
            projection.set(i, j, r[k].clone());
        }
    }
    let mut section = Matrix::zeros(field, ambient, q);
    for (i, &k) in kept.iter().enumerate() {
        section.set(k, i, field.one());
    }
    Ok(QuotientSpace {
        ambient,
        killed: s.clone(),
        kept,
        projection,
        section,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Q.int(x)).collect()
    }

    #[test]
    fn kernel_examples() {
        let z = Matrix::from_i64(Q, &[vec![0]]);
        assert_eq!(kernel(&z).unwrap().dim(), 1);
        assert_eq!(kernel(&Matrix::identity(Q, 3)).unwrap().dim(), 0);
        let m = Matrix::from_i64(Q, &[vec![1, 2], vec![2, 4]]);
        let k = kernel(&m).unwrap();
        let expected = Subspace::span(Q, 2, [v(&[-2, 1])]).unwrap();
        assert_eq!(k, expected);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(Q, 3);
        assert_eq!(solve(&id, &v(&[4, 5, 6])).unwrap(), Some(v(&[4, 5, 6])));
        let m = Matrix::from_i64(Q, &[vec![1, 1]]);
        assert_eq!(solve(&m, &v(&[1])).unwrap(), Some(v(&[1, 0])));
        let z = Matrix::from_i64(Q, &[vec![0]]);
        assert_eq!(solve(&z, &v(&[1])).unwrap(), None);
    }

    #[test]
    fn membership_examples() {
        let s = Subspace::span(Q, 2, [v(&[1, 0])]).unwrap();
        assert!(s.contains(&v(&[0, 0])).unwrap());
        assert!(!s.contains(&v(&[0, 1])).unwrap());
        let t = Subspace::span(Q, 2, [v(&[1, 2])]).unwrap();
        assert!(t.contains(&v(&[2, 4])).unwrap());
        assert!(t.contains(&v(&[1])).is_err());
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(2, &Subspace::zero(Q, 2)).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(q.projection().is_identity());
        assert_eq!(quotient(2, &Subspace::full(Q, 2)).unwrap().dim(), 0);
        let s = Subspace::span(Q, 3, [v(&[1, 1, 0])]).unwrap();
        let q = quotient(3, &s).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(q.projection().dot(q.section()).is_identity());
        assert!(is_zero_vec(&q.project(&v(&[3, 3, 0]))));
    }

    #[test]
    fn mixed_fields_rejected() {
        let f2 = Field::prime(2).unwrap();
        let data = vec![Q.one(), f2.one()];
        assert!(matches!(
            Matrix::new(Q, 1, 2, data),
            Err(LinalgError::FieldMismatch(..))
        ));
        let m = Matrix::identity(Q, 1);
        assert!(solve(&m, &[f2.one()]).is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.int(3);
        assert!((&a * &a.inv().unwrap()).is_one());
        assert_eq!(f.int(-1), f.int(6));
        assert!(Field::prime(8).is_err());
        let m = Matrix::from_i64(f, &[vec![1, 2], vec![3, 6]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_i64(Q, &[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.dot(&inv).is_identity());
        let s = Matrix::from_i64(Q, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(s.inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::span(Q, 3, [v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let b = Subspace::span(Q, 3, [v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        assert_eq!(a.intersection(&b), Subspace::span(Q, 3, [v(&[0, 1, 0])]).unwrap());
        assert_eq!(a.sum(&b).dim(), 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn field() -> impl Strategy<Value = Field> {
            prop_oneof![Just(Q), Just(Field::prime(2).unwrap()), Just(Field::prime(5).unwrap())]
        }

        fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, cols), rows)
        }

        proptest! {
            #[test]
            fn rank_nullity(f in field(), rows in matrix(4, 5)) {
                let m = Matrix::from_i64(f, &rows);
                let k = kernel(&m).unwrap();
                prop_assert_eq!(m.rank() + k.dim(), 5);
                for b in k.basis() {
                    prop_assert!(is_zero_vec(&m.apply(b)));
                }
            }

            #[test]
            fn rref_is_idempotent_and_rank_is_transpose_invariant(f in field(), rows in matrix(4, 4)) {
                let m = Matrix::from_i64(f, &rows);
                let (r, piv) = m.rref();
                prop_assert_eq!(r.rref(), (r.clone(), piv.clone()));
                prop_assert_eq!(m.rank(), m.transpose().rank());
            }

            #[test]
            fn grassmann_formula(f in field(), a in matrix(3, 5), b in matrix(3, 5)) {
                let span = |rows: &[Vec<i64>]| Subspace::span(f, 5, rows.iter().map(|r| r.iter().map(|&x| f.int(x)).collect())).unwrap();
                let (sa, sb) = (span(&a), span(&b));
                let (sum, meet) = (sa.sum(&sb), sa.intersection(&sb));
                prop_assert_eq!(sum.dim() + meet.dim(), sa.dim() + sb.dim());
                prop_assert!(sa.contains_subspace(&meet) && sb.contains_subspace(&meet));
                prop_assert!(sum.contains_subspace(&sa) && sum.contains_subspace(&sb));
            }

            #[test]
            fn solve_finds_preimages(f in field(), rows in matrix(3, 4), x in proptest::collection::vec(-3i64..=3, 4)) {
                let m = Matrix::from_i64(f, &rows);
                let x: Vector = x.iter().map(|&c| f.int(c)).collect();
                let b = m.apply(&x);
                let y = solve(&m, &b).unwrap().expect("b is in the image");
                prop_assert_eq!(m.apply(&y), b);
            }

            #[test]
            fn rational_field_axioms(a in -20i64..20, b in 1i64..20, c in -20i64..20, d in 1i64..20) {
                let (x, y) = (Q.frac(a, b), Q.frac(c, d));
                prop_assert_eq!(&(&x + &y) - &y, x.clone());
                if !y.is_zero() {
                    prop_assert_eq!((&x * &y).div(&y).unwrap(), x.clone());
                }
                prop_assert_eq!(&x * &(&y + &Q.one()), &(&x * &y) + &x);
            }
        }
    }
}
