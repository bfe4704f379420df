//! Dense linear algebra over small finite fields: rank, products, GL
//! enumeration, Bruhat factorization into upper-triangular times
//! SE-augmented factors, and univariate polynomial gcd.
//!
//! Matrices are plain value types; every operation works on copies, which
//! keeps them safe to share across the parallel counting sweeps.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Field, FieldElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("enumeration of {needed} matrices exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("images {0:?} are not a permutation")]
    NotAPermutation(Vec<usize>),
}

/// Row-major dense matrix over a fixed finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
    field: Arc<Field>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FqMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize, field: Arc<Field>) -> Self {
        FqMatrix {
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
            field,
        }
    }

    pub fn identity(n: usize, field: Arc<Field>) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, m.field.one());
        }
        m
    }

    /// Build from rows of element indices; handy in tests and parsers.
    pub fn from_rows(rows: &[Vec<u32>], field: Arc<Field>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&i| field.elem(i)))
            .collect();
        FqMatrix {
            rows: r,
            cols: c,
            entries,
            field,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn assert_same_field(&self, other: &FqMatrix) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "field mismatch: {} vs {}",
            self.field,
            other.field
        );
    }

    pub fn matmul(&self, other: &FqMatrix) -> FqMatrix {
        self.assert_same_field(other);
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = &self.field;
        let mut out = FqMatrix::zeros(self.rows, other.cols, self.field.clone());
        for r in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(r, l);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let t = f.mul(a, other.get(l, c));
                    let cur = out.get(r, c);
                    out.set(r, c, f.add(cur, t));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut out = FqMatrix::zeros(self.cols, self.rows, self.field.clone());
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// c1 * self + c2 * other, entrywise.
    pub fn lin_comb(&self, c1: FieldElement, other: &FqMatrix, c2: FieldElement) -> FqMatrix {
        self.assert_same_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        let f = &self.field;
        let mut out = FqMatrix::zeros(self.rows, self.cols, self.field.clone());
        for i in 0..self.entries.len() {
            out.entries[i] = f.add(f.mul(c1, self.entries[i]), f.mul(c2, other.entries[i]));
        }
        out
    }

    /// Copy of columns `lo..hi`.
    pub fn take_cols(&self, lo: usize, hi: usize) -> FqMatrix {
        assert!(lo <= hi && hi <= self.cols);
        let mut out = FqMatrix::zeros(self.rows, hi - lo, self.field.clone());
        for r in 0..self.rows {
            for c in lo..hi {
                out.set(r, c - lo, self.get(r, c));
            }
        }
        out
    }

    /// Row rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pivot != rank {
                for c in 0..m.cols {
                    let (a, b) = (m.get(rank, c), m.get(pivot, c));
                    m.set(rank, c, b);
                    m.set(pivot, c, a);
                }
            }
            let inv = f.inv(m.get(rank, col)).unwrap();
            for c in col..m.cols {
                m.set(rank, c, f.mul(m.get(rank, c), inv));
            }
            for r in rank + 1..m.rows {
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let t = f.mul(factor, m.get(rank, c));
                    m.set(r, c, f.sub(m.get(r, c), t));
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|r| (0..r.min(self.cols)).all(|c| self.get(r, c).is_zero()))
    }
}

/// Permutation in one-line notation with 1-based values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for &v in &self.images {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let s: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", s.join(","))
        }
    }
}

impl Permutation {
    pub fn from_one_line(images: Vec<usize>) -> Result<Self, LinalgError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v < 1 || v > n || seen[v] {
                return Err(LinalgError::NotAPermutation(images));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// Parse `"52134"` (single digits) or `"5,2,1,3,4"`.
    pub fn parse(s: &str) -> Result<Self, LinalgError> {
        let images: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse().unwrap_or(0))
                .collect()
        } else {
            s.chars().map(|c| c.to_digit(10).unwrap_or(0) as usize).collect()
        };
        Self::from_one_line(images)
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of i (1-based).
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn one_line(&self) -> &[usize] {
        &self.images
    }

    /// (self . other)(i) = self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "size mismatch");
        Permutation {
            images: (1..=self.n()).map(|i| self.apply(other.apply(i))).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for i in 1..=self.n() {
            images[self.apply(i) - 1] = i;
        }
        Permutation { images }
    }

    /// Pairs (i, j) with i < j and self(i) > self(j), in lexicographic order.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.n() {
            for j in i + 1..=self.n() {
                if self.apply(i) > self.apply(j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn inversion_count(&self) -> usize {
        self.inversions().len()
    }

    /// True when the permutation is a single cycle through all n points.
    pub fn is_full_cycle(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let mut seen = 1;
        let mut x = self.apply(1);
        while x != 1 {
            seen += 1;
            x = self.apply(x);
        }
        seen == n
    }

    /// Cycle notation starting at 1, e.g. `(1 2 4 3)`. Only meaningful for
    /// full cycles.
    pub fn cycle_string(&self) -> String {
        debug_assert!(self.is_full_cycle());
        let mut parts = vec!["1".to_string()];
        let mut x = self.apply(1);
        while x != 1 {
            parts.push(x.to_string());
            x = self.apply(x);
        }
        format!("({})", parts.join(" "))
    }

    /// Extend a permutation of [k] to one of [k+1] fixing k+1.
    pub fn extend_fixing_last(&self) -> Permutation {
        let mut images = self.images.clone();
        images.push(self.n() + 1);
        Permutation { images }
    }

    /// All permutations of [n] in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Permutation {
                images: images.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| images[i] < images[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| images[j] > images[i]).unwrap();
            images.swap(i, j);
            images[i + 1..].reverse();
        }
        out
    }
}

/// The matrix of a permutation: one at (sigma(j), j) for every column j.
pub fn permutation_matrix(sigma: &Permutation, field: Arc<Field>) -> FqMatrix {
    let n = sigma.n();
    let mut m = FqMatrix::zeros(n, n, field);
    for j in 1..=n {
        let one = m.field().one();
        m.set(sigma.apply(j) - 1, j - 1, one);
    }
    m
}

/// |GL_n(F_q)| = prod_{i=0}^{n-1} (q^n - q^i).
pub fn gl_order(n: usize, q: u32) -> u128 {
    let qn = (q as u128).pow(n as u32);
    (0..n).map(|i| qn - (q as u128).pow(i as u32)).product()
}

/// Enumerate GL_n(F_q) exactly once each, building matrices row by row and
/// skipping every vector in the span of the rows chosen so far. The order is
/// deterministic: row vectors are compared by their base-q integer encoding.
pub fn gl_enumerate(
    n: usize,
    field: &Arc<Field>,
    budget: u128,
) -> Result<GlEnumerator, LinalgError> {
    let needed = gl_order(n, field.q());
    if needed > budget {
        return Err(LinalgError::BudgetExceeded { needed, budget });
    }
    Ok(GlEnumerator {
        field: field.clone(),
        n,
        qn: (field.q() as usize).pow(n as u32),
        codes: Vec::new(),
        echelons: vec![Vec::new()],
        fresh: true,
        done: n == 0,
    })
}

type Echelon = Vec<(usize, Vec<FieldElement>)>;

pub struct GlEnumerator {
    field: Arc<Field>,
    n: usize,
    qn: usize,
    codes: Vec<usize>,
    /// echelons[i] is the reduced basis of the first i chosen rows.
    echelons: Vec<Echelon>,
    fresh: bool,
    done: bool,
}

impl GlEnumerator {
    fn decode(&self, code: usize) -> Vec<FieldElement> {
        let q = self.field.q() as usize;
        let mut c = code;
        (0..self.n)
            .map(|_| {
                let d = c % q;
                c /= q;
                self.field.elem(d as u32)
            })
            .collect()
    }

    /// Reduce v against an echelon basis; returns None if v is in the span,
    /// otherwise the normalized residual with its pivot column.
    fn reduce_row(&self, ech: &Echelon, mut v: Vec<FieldElement>) -> Option<(usize, Vec<FieldElement>)> {
        let f = &self.field;
        for (pivot, row) in ech {
            let c = v[*pivot];
            if !c.is_zero() {
                for i in *pivot..self.n {
                    let t = f.mul(c, row[i]);
                    v[i] = f.sub(v[i], t);
                }
            }
        }
        let pivot = v.iter().position(|e| !e.is_zero())?;
        let inv = f.inv(v[pivot]).unwrap();
        for e in v.iter_mut() {
            *e = f.mul(*e, inv);
        }
        Some((pivot, v))
    }

    fn push_row(&mut self, code: usize) -> bool {
        let ech = self.echelons.last().unwrap();
        match self.reduce_row(ech, self.decode(code)) {
            None => false,
            Some((pivot, row)) => {
                let mut next = self.echelons.last().unwrap().clone();
                let at = next.partition_point(|(p, _)| *p < pivot);
                next.insert(at, (pivot, row));
                self.echelons.push(next);
                self.codes.push(code);
                true
            }
        }
    }

    /// Fill levels `from..n` with the smallest valid codes. Always succeeds:
    /// fewer than n rows never span the whole space.
    fn fill_from(&mut self) {
        while self.codes.len() < self.n {
            let mut code = 0;
            while !self.push_row(code) {
                code += 1;
                debug_assert!(code < self.qn);
            }
        }
    }

    fn current(&self) -> FqMatrix {
        let mut m = FqMatrix::zeros(self.n, self.n, self.field.clone());
        for (r, &code) in self.codes.iter().enumerate() {
            for (c, e) in self.decode(code).into_iter().enumerate() {
                m.set(r, c, e);
            }
        }
        m
    }
}

impl Iterator for GlEnumerator {
    type Item = FqMatrix;

    fn next(&mut self) -> Option<FqMatrix> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            self.fill_from();
            return Some(self.current());
        }
        loop {
            let Some(last) = self.codes.pop() else {
                self.done = true;
                return None;
            };
            self.echelons.pop();
            let mut advanced = false;
            for code in last + 1..self.qn {
                if self.push_row(code) {
                    advanced = true;
                    break;
                }
            }
            if advanced {
                self.fill_from();
                return Some(self.current());
            }
        }
    }
}

/// The Bruhat factorization M = B * A with B invertible upper triangular and
/// A an SE w-augmented matrix: ones at (w(i), i), free entries only at
/// (w(i), j) for inversions (i, j) of w, zeros elsewhere.
#[derive(Debug, Clone)]
pub struct BruhatFactor {
    pub w: Permutation,
    pub b: FqMatrix,
    pub a: FqMatrix,
}

/// Factor an invertible matrix into its Bruhat cell representative.
///
/// Pivots are chosen bottom-to-top within each column, left-to-right across
/// columns, eliminating upward; these are exactly the row operations realized
/// by an upper-triangular left factor.
pub fn bruhat_factorize(m: &FqMatrix) -> Result<BruhatFactor, LinalgError> {
    assert_eq!(m.rows(), m.cols(), "dimension mismatch: matrix must be square");
    let n = m.rows();
    let f = m.field().clone();
    let mut a = m.clone();
    let mut b = FqMatrix::identity(n, f.clone());
    let mut w_images = vec![0usize; n];
    let mut is_pivot_row = vec![false; n];

    for col in 0..n {
        let Some(r) = (0..n)
            .rev()
            .find(|&r| !is_pivot_row[r] && !a.get(r, col).is_zero())
        else {
            return Err(LinalgError::SingularMatrix);
        };
        w_images[col] = r + 1;
        is_pivot_row[r] = true;

        // Scale the pivot row to make the pivot 1; compensate in B.
        let s = a.get(r, col);
        if s != f.one() {
            let inv = f.inv(s).unwrap();
            for c in 0..n {
                a.set(r, c, f.mul(a.get(r, c), inv));
            }
            for rr in 0..n {
                b.set(rr, r, f.mul(b.get(rr, r), s));
            }
        }
        // Eliminate upward; compensate with column operations on B.
        for i in 0..r {
            let factor = a.get(i, col);
            if factor.is_zero() {
                continue;
            }
            for c in 0..n {
                let t = f.mul(factor, a.get(r, c));
                a.set(i, c, f.sub(a.get(i, c), t));
            }
            for rr in 0..n {
                let t = f.mul(factor, b.get(rr, i));
                b.set(rr, r, f.add(b.get(rr, r), t));
            }
        }
    }

    let w = Permutation::from_one_line(w_images).expect("pivot rows are distinct");
    debug_assert!(b.is_upper_triangular());
    Ok(BruhatFactor { w, b, a })
}

/// Does the support of `a` match the SE w-augmented pattern exactly: ones at
/// (w(i), i), arbitrary entries at (w(i), j) for inversions (i, j), zeros
/// elsewhere?
pub fn is_se_augmented(a: &FqMatrix, w: &Permutation) -> bool {
    let n = w.n();
    if a.rows() != n || a.cols() != n {
        return false;
    }
    let one = a.field().one();
    for i in 1..=n {
        if a.get(w.apply(i) - 1, i - 1) != one {
            return false;
        }
    }
    for r in 1..=n {
        let i = w.inverse().apply(r); // the column holding this row's one
        for j in 1..=n {
            if j == i {
                continue;
            }
            let free = j > i && w.apply(j) < w.apply(i); // (i, j) inversion of w
            if !free && !a.get(r - 1, j - 1).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Univariate polynomial over F_q, coefficients lowest degree first and
/// trimmed so the leading coefficient is nonzero (zero polynomial = empty).
#[derive(Clone, PartialEq, Eq)]
pub struct FqPolynomial {
    coeffs: Vec<FieldElement>,
    field: Arc<Field>,
}

impl fmt::Debug for FqPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "FqPolynomial[{}]", s.join(","))
    }
}

impl FqPolynomial {
    pub fn new(mut coeffs: Vec<FieldElement>, field: Arc<Field>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FqPolynomial { coeffs, field }
    }

    pub fn zero(field: Arc<Field>) -> Self {
        FqPolynomial {
            coeffs: Vec::new(),
            field,
        }
    }

    pub fn from_indices(idx: &[u32], field: Arc<Field>) -> Self {
        let coeffs = idx.iter().map(|&i| field.elem(i)).collect();
        Self::new(coeffs, field)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(self.field.zero())
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &FqPolynomial) -> FqPolynomial {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        FqPolynomial::new(coeffs, self.field.clone())
    }

    pub fn mul(&self, other: &FqPolynomial) -> FqPolynomial {
        if self.is_zero() || other.is_zero() {
            return FqPolynomial::zero(self.field.clone());
        }
        let f = &self.field;
        let mut coeffs = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        FqPolynomial::new(coeffs, self.field.clone())
    }

    /// (quotient, remainder) with deg r < deg divisor. Panics on zero divisor.
    pub fn divrem(&self, divisor: &FqPolynomial) -> (FqPolynomial, FqPolynomial) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let f = &self.field;
        let dd = divisor.degree().unwrap();
        let lead_inv = f.inv(divisor.leading().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); self.coeffs.len().saturating_sub(dd)];
        // Each pass cancels the current leading coefficient exactly.
        while rem.len() > dd {
            let shift = rem.len() - 1 - dd;
            let c = f.mul(*rem.last().unwrap(), lead_inv);
            if !c.is_zero() {
                quot[shift] = c;
                for i in 0..dd {
                    let t = f.mul(c, divisor.coeffs[i]);
                    rem[shift + i] = f.sub(rem[shift + i], t);
                }
            }
            rem.pop();
        }
        (
            FqPolynomial::new(quot, self.field.clone()),
            FqPolynomial::new(rem, self.field.clone()),
        )
    }

    pub fn monic(&self) -> FqPolynomial {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let f = &self.field;
                let inv = f.inv(l).unwrap();
                let coeffs = self.coeffs.iter().map(|&c| f.mul(c, inv)).collect();
                FqPolynomial::new(coeffs, self.field.clone())
            }
        }
    }
}

/// Monic gcd by the Euclidean algorithm. gcd(0, 0) is the zero polynomial by
/// convention.
pub fn poly_gcd(f: &FqPolynomial, g: &FqPolynomial) -> FqPolynomial {
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let (_, r) = a.divrem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::parse_q;

    fn field(q: &str) -> Arc<Field> {
        let (p, m) = parse_q(q).unwrap();
        Field::new(p, m).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f2 = field("2");
        assert_eq!(FqMatrix::identity(3, f2.clone()).rank(), 3);
        let f3 = field("3");
        assert_eq!(FqMatrix::zeros(4, 3, f3).rank(), 0);
        // standard basis columns stacked over a zero row
        let m = FqMatrix::from_rows(
            &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
            f2,
        );
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn permutation_matrix_4213() {
        let f2 = field("2");
        let p = Permutation::parse("4213").unwrap();
        let m = permutation_matrix(&p, f2.clone());
        for (r, c) in [(4, 1), (2, 2), (1, 3), (3, 4)] {
            assert_eq!(m.get(r - 1, c - 1), f2.one());
        }
        assert_eq!((0..4).map(|r| (0..4).filter(|&c| !m.get(r, c).is_zero()).count()).sum::<usize>(), 4);
    }

    #[test]
    fn matmul_identities() {
        let f3 = field("3");
        let m = FqMatrix::from_rows(&[vec![1, 2, 0], vec![0, 1, 2]], f3.clone());
        let id = FqMatrix::identity(2, f3.clone());
        assert_eq!(id.matmul(&m), m);
        assert_eq!(m.transpose().transpose(), m);
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn matmul_dimension_mismatch_panics() {
        let f2 = field("2");
        let a = FqMatrix::zeros(2, 3, f2.clone());
        let b = FqMatrix::zeros(2, 3, f2);
        let _ = a.matmul(&b);
    }

    #[test]
    fn gl_enumeration_counts() {
        for (q, n, expect) in [(2u32, 1usize, 1u128), (2, 2, 6), (2, 3, 168), (3, 2, 48)] {
            let f = field(&q.to_string());
            let mats: Vec<_> = gl_enumerate(n, &f, 1 << 20).unwrap().collect();
            assert_eq!(mats.len() as u128, expect);
            assert_eq!(gl_order(n, q), expect);
            assert!(mats.iter().all(|m| m.rank() == n));
            // distinctness
            let mut seen = std::collections::HashSet::new();
            for m in &mats {
                let key: Vec<u32> = (0..n)
                    .flat_map(|r| (0..n).map(move |c| (r, c)))
                    .map(|(r, c)| m.get(r, c).index())
                    .collect();
                assert!(seen.insert(key));
            }
        }
    }

    #[test]
    fn gl_budget() {
        let f3 = field("3");
        assert!(matches!(
            gl_enumerate(3, &f3, 10),
            Err(LinalgError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn bruhat_identity_and_permutations() {
        let f2 = field("2");
        let id = FqMatrix::identity(3, f2.clone());
        let bf = bruhat_factorize(&id).unwrap();
        assert_eq!(bf.w, Permutation::identity(3));
        assert_eq!(bf.b, id);
        assert_eq!(bf.a, id);

        for w in Permutation::all(4) {
            let mw = permutation_matrix(&w, f2.clone());
            let bf = bruhat_factorize(&mw).unwrap();
            assert_eq!(bf.w, w);
            assert_eq!(bf.b, FqMatrix::identity(4, f2.clone()));
            assert_eq!(bf.a, mw);
        }
    }

    #[test]
    fn bruhat_roundtrip_exhaustive_gl3_f2() {
        // Roundtrip, pattern match, and the cell partition
        // |U w_*| = (q-1)^n q^(binom(n,2) + inv(w)) summing to |GL_n|.
        let f2 = field("2");
        let mut per_w = std::collections::HashMap::new();
        let mut total = 0u64;
        for m in gl_enumerate(3, &f2, 1 << 20).unwrap() {
            let bf = bruhat_factorize(&m).unwrap();
            assert_eq!(bf.b.matmul(&bf.a), m);
            assert!(bf.b.is_upper_triangular());
            assert!(bf.b.is_invertible());
            assert!(is_se_augmented(&bf.a, &bf.w));
            *per_w.entry(bf.w.one_line().to_vec()).or_insert(0u64) += 1;
            total += 1;
        }
        assert_eq!(total, 168);
        for w in Permutation::all(3) {
            let inv = w.inversion_count() as u32;
            let expect = 1u64 * 2u64.pow(3 + inv); // (q-1)^3 q^(3 + inv), q = 2
            assert_eq!(per_w[&w.one_line().to_vec()], expect, "cell size for w = {w}");
        }
    }

    #[test]
    fn bruhat_singular() {
        let f2 = field("2");
        let m = FqMatrix::from_rows(&[vec![1, 1], vec![1, 1]], f2);
        assert_eq!(bruhat_factorize(&m).unwrap_err(), LinalgError::SingularMatrix);
    }

    #[test]
    fn rank_transpose_exhaustive_small() {
        let f2 = field("2");
        // all 2x3 matrices over F_2
        for code in 0..(1u32 << 6) {
            let rows = vec![
                vec![code & 1, (code >> 1) & 1, (code >> 2) & 1],
                vec![(code >> 3) & 1, (code >> 4) & 1, (code >> 5) & 1],
            ];
            let m = FqMatrix::from_rows(&rows, f2.clone());
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn gcd_examples() {
        let f2 = field("2");
        // x^2 + 1 = (x + 1)^2 in characteristic 2
        let a = FqPolynomial::from_indices(&[1, 0, 1], f2.clone());
        let b = FqPolynomial::from_indices(&[1, 1], f2.clone());
        assert_eq!(poly_gcd(&a, &b), b);

        // gcd(f, 0) is the monic scaling of f
        let f3 = field("3");
        let f = FqPolynomial::from_indices(&[1, 2], f3.clone());
        let g = poly_gcd(&f, &FqPolynomial::zero(f3.clone()));
        assert_eq!(g, f.monic());

        // no common root of x^2+x and x^2+1 over F_3, constant gcd
        let u = FqPolynomial::from_indices(&[0, 1, 1], f3.clone());
        let v = FqPolynomial::from_indices(&[1, 0, 1], f3.clone());
        for t in 0..3 {
            assert!(!u.eval(f3.elem(t)).is_zero() || !v.eval(f3.elem(t)).is_zero());
        }
        assert_eq!(poly_gcd(&u, &v).degree(), Some(0));

        assert!(poly_gcd(&FqPolynomial::zero(f3.clone()), &FqPolynomial::zero(f3)).is_zero());
    }

    #[test]
    fn permutation_inversions_examples() {
        let w = Permutation::parse("25314").unwrap();
        assert_eq!(
            w.inversions(),
            vec![(1, 4), (2, 3), (2, 4), (2, 5), (3, 4)]
        );
        assert!(Permutation::identity(5).inversions().is_empty());
        assert_eq!(Permutation::parse("52134").unwrap().inversion_count(), 5);
        assert_eq!(Permutation::parse("2314").unwrap().inversion_count(), 2);
    }

    #[test]
    fn permutation_parse_and_cycles() {
        assert!(Permutation::parse("1223").is_err());
        let c = Permutation::parse("2413").unwrap();
        assert!(c.is_full_cycle());
        assert_eq!(c.cycle_string(), "(1 2 4 3)");
        assert!(!Permutation::parse("2143").unwrap().is_full_cycle());
        assert_eq!(Permutation::parse("3,1,2").unwrap().to_string(), "312");
    }
}
