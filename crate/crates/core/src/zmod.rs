//! Exact linear algebra over the ring Z_D.
//!
//! The modulus may be composite, so there is no notion of rank in general.
//! Row spaces are canonicalised with the Howell normal form, which is unique
//! for every modulus and supports membership testing by back-substitution,
//! span counting and kernel extraction.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZModError {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("entry {value} is not a residue modulo {modulus}")]
    EntryOutOfRange { value: u64, modulus: u64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("span order overflows 128 bits")]
    Overflow,
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 + b as u128) % n as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, n: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        n - (b - a)
    }
}

/// Reduces an arbitrary signed integer to its least nonnegative residue.
#[inline]
pub(crate) fn reduce_i128(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Multiplicative inverse of `a` modulo `n`, if it exists.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (g, s, _) = ext_gcd(a as i128, n as i128);
    (g == 1).then(|| reduce_i128(s, n))
}

/// A unit `u` of Z_n with `u * a = gcd(a, n) (mod n)`.
fn normalizing_unit(a: u64, n: u64) -> u64 {
    let g = gcd(a, n);
    let small = n / g;
    let base = if small == 1 {
        1
    } else {
        inv_mod(a / g, small).expect("a/g is coprime to n/g")
    };
    // Lift base from Z_{n/g} to a unit of Z_n.
    let mut u = base;
    while gcd(u, n) != 1 {
        u += small;
    }
    u % n
}

/// Dense rectangular matrix over Z_D, entries stored as least nonnegative residues.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ZModMatrix {
    pub fn new(modulus: u64, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self, ZModError> {
        if modulus < 2 {
            return Err(ZModError::InvalidModulus(modulus));
        }
        if data.len() != rows * cols {
            return Err(ZModError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(&value) = data.iter().find(|&&v| v >= modulus) {
            return Err(ZModError::EntryOutOfRange { value, modulus });
        }
        Ok(Self {
            modulus,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from rows of residues. `cols` is needed to describe an empty matrix.
    pub fn from_rows<R: AsRef<[u64]>>(modulus: u64, cols: usize, rows: &[R]) -> Result<Self, ZModError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(ZModError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(modulus, rows.len(), cols, data)
    }

    /// Builds a matrix from arbitrary signed integers, reducing every entry.
    pub fn from_signed_rows(modulus: u64, cols: usize, rows: &[Vec<i64>]) -> Result<Self, ZModError> {
        if modulus < 2 {
            return Err(ZModError::InvalidModulus(modulus));
        }
        let reduced: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| reduce_i128(x as i128, modulus)).collect())
            .collect();
        Self::from_rows(modulus, cols, &reduced)
    }

    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Self {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: u64, size: usize) -> Self {
        let mut m = Self::zeros(modulus, size, size);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u64) {
        self.data[r * self.cols + c] = value % self.modulus;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u64]> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.row_iter().map(<[u64]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ZModError> {
        if self.modulus != other.modulus {
            return Err(ZModError::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.cols != other.rows {
            return Err(ZModError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let n = self.modulus as u128;
        let mut out = Self::zeros(self.modulus, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc = (acc + self.get(r, k) as u128 * other.get(k, c) as u128) % n;
                }
                out.data[r * other.cols + c] = acc as u64;
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `v * self`.
    pub fn left_mul_vec(&self, v: &[u64]) -> Result<Vec<u64>, ZModError> {
        if v.len() != self.rows {
            return Err(ZModError::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let n = self.modulus as u128;
        let mut out = vec![0u128; self.cols];
        for (r, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(r)) {
                *o = (*o + x as u128 * m as u128) % n;
            }
        }
        Ok(out.into_iter().map(|x| x as u64).collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self, ZModError> {
        if self.modulus != other.modulus {
            return Err(ZModError::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.cols != other.cols {
            return Err(ZModError::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            modulus: self.modulus,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Result<Self, ZModError> {
        if self.modulus != other.modulus {
            return Err(ZModError::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.rows != other.rows {
            return Err(ZModError::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Self {
            modulus: self.modulus,
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn howell(&self) -> Howell {
        Howell::compute(self)
    }

    /// The Howell normal form of the row span, without zero rows.
    pub fn howell_form(&self) -> ZModMatrix {
        self.howell().into_matrix()
    }

    pub fn span_membership(&self, v: &[u64]) -> Result<bool, ZModError> {
        self.howell().contains(v)
    }

    /// Number of distinct vectors in the row span.
    pub fn span_order(&self) -> u128 {
        self.howell().order().expect("span order of a machine-sized matrix")
    }

    /// Basis of the left kernel `{x : x * self = 0}`.
    pub fn kernel_basis(&self) -> ZModMatrix {
        let augmented = self
            .hstack(&ZModMatrix::identity(self.modulus, self.rows))
            .expect("identity has matching rows");
        let h = augmented.howell();
        let kernel: Vec<Vec<u64>> = h
            .rows
            .iter()
            .zip(&h.pivots)
            .filter(|(_, &p)| p >= self.cols)
            .map(|(r, _)| r[self.cols..].to_vec())
            .collect();
        ZModMatrix::from_rows(self.modulus, self.rows, &kernel).expect("kernel rows are well formed")
    }

    /// Finds some `y` with `y * self = v`, or `None` when `v` is outside the row span.
    pub fn solve_left(&self, v: &[u64]) -> Result<Option<Vec<u64>>, ZModError> {
        if v.len() != self.cols {
            return Err(ZModError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let n = self.modulus;
        let augmented = self
            .hstack(&ZModMatrix::identity(n, self.rows))
            .expect("identity has matching rows");
        let h = augmented.howell();
        let mut w: Vec<u64> = v.iter().map(|&x| x % n).collect();
        w.resize(self.cols + self.rows, 0);
        for (row, &p) in h.rows.iter().zip(&h.pivots) {
            if p >= self.cols {
                break;
            }
            let q = w[p] / row[p];
            if q != 0 {
                sub_scaled(&mut w, row, q, n);
            }
        }
        if w[..self.cols].iter().any(|&x| x != 0) {
            return Ok(None);
        }
        Ok(Some(w[self.cols..].iter().map(|&x| sub_mod(0, x, n)).collect()))
    }
}

impl fmt::Debug for ZModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZModMatrix(mod {}, {}x{})", self.modulus, self.rows, self.cols)?;
        for r in self.row_iter() {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// `w -= q * row (mod n)`
fn sub_scaled(w: &mut [u64], row: &[u64], q: u64, n: u64) {
    for (x, &r) in w.iter_mut().zip(row) {
        if r != 0 {
            *x = sub_mod(*x, mul_mod(q, r, n), n);
        }
    }
}

/// Howell normal form together with the pivot column of each row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Howell {
    modulus: u64,
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Howell {
    fn compute(m: &ZModMatrix) -> Self {
        let n = m.modulus;
        let cols = m.cols;
        let mut work: Vec<Vec<u64>> = m
            .row_iter()
            .filter(|r| r.iter().any(|&x| x != 0))
            .map(<[u64]>::to_vec)
            .collect();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut pivots = Vec::new();

        for col in 0..cols {
            // Every row in `work` is zero left of `col`.
            let mut pivot: Option<Vec<u64>> = None;
            let mut rest = Vec::with_capacity(work.len() + 1);
            for row in work.drain(..) {
                if row[col] == 0 {
                    rest.push(row);
                    continue;
                }
                match pivot.take() {
                    None => pivot = Some(row),
                    Some(mut p) => {
                        let mut r = row;
                        eliminate(&mut p, &mut r, col, n);
                        if r.iter().any(|&x| x != 0) {
                            rest.push(r);
                        }
                        pivot = Some(p);
                    }
                }
            }
            work = rest;
            if let Some(mut p) = pivot {
                let u = normalizing_unit(p[col], n);
                if u != 1 {
                    for x in p.iter_mut() {
                        *x = mul_mod(*x, u, n);
                    }
                }
                let g = p[col];
                debug_assert_eq!(n % g, 0);
                // Annihilator multiple keeps the span closed under the Howell property.
                let ann = n / g;
                let killed: Vec<u64> = p.iter().map(|&x| mul_mod(x, ann, n)).collect();
                if killed.iter().any(|&x| x != 0) {
                    work.push(killed);
                }
                rows.push(p);
                pivots.push(col);
            }
        }

        for i in 0..rows.len() {
            let c = pivots[i];
            let (above, below) = rows.split_at_mut(i);
            let pivot_row = &below[0];
            let g = pivot_row[c];
            for r in above.iter_mut() {
                let q = r[c] / g;
                if q != 0 {
                    sub_scaled(r, pivot_row, q, n);
                }
            }
        }

        Self {
            modulus: n,
            cols,
            rows,
            pivots,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn into_matrix(self) -> ZModMatrix {
        ZModMatrix::from_rows(self.modulus, self.cols, &self.rows).expect("howell rows are residues")
    }

    /// Canonical representative of `v` modulo the span: the lexicographically
    /// smallest element of the coset `v + span`.
    pub fn reduce(&self, v: &[u64]) -> Result<Vec<u64>, ZModError> {
        if v.len() != self.cols {
            return Err(ZModError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let n = self.modulus;
        let mut w: Vec<u64> = v.iter().map(|&x| x % n).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let q = w[p] / row[p];
            if q != 0 {
                sub_scaled(&mut w, row, q, n);
            }
        }
        Ok(w)
    }

    pub fn contains(&self, v: &[u64]) -> Result<bool, ZModError> {
        Ok(self.reduce(v)?.iter().all(|&x| x == 0))
    }

    pub fn order(&self) -> Result<u128, ZModError> {
        self.rows
            .iter()
            .zip(&self.pivots)
            .try_fold(1u128, |acc, (r, &p)| {
                acc.checked_mul((self.modulus / r[p]) as u128)
                    .ok_or(ZModError::Overflow)
            })
    }
}

/// Unimodular 2x2 row operation clearing `r[col]` into `p[col]`.
fn eliminate(p: &mut [u64], r: &mut [u64], col: usize, n: u64) {
    let a = p[col] as i128;
    let b = r[col] as i128;
    let (g, s, t) = ext_gcd(a, b);
    let (s, t) = (reduce_i128(s, n), reduce_i128(t, n));
    let u = reduce_i128(-(b / g), n);
    let v = reduce_i128(a / g, n);
    for (x, y) in p.iter_mut().zip(r.iter_mut()) {
        let (px, ry) = (*x, *y);
        *x = add_mod(mul_mod(s, px, n), mul_mod(t, ry, n), n);
        *y = add_mod(mul_mod(u, px, n), mul_mod(v, ry, n), n);
    }
    debug_assert_eq!(r[col], 0);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(modulus: u64, cols: usize, rows: &[&[u64]]) -> ZModMatrix {
        ZModMatrix::from_rows(modulus, cols, rows).unwrap()
    }

    #[test]
    fn identity_is_its_own_howell_form() {
        let id = ZModMatrix::identity(3, 2);
        assert_eq!(id.howell_form(), id);
    }

    #[test]
    fn single_row_two_mod_four() {
        let a = m(4, 1, &[&[2]]);
        assert_eq!(a.howell_form(), a);
        assert_eq!(a.span_order(), 2);
    }

    #[test]
    fn empty_matrix_spans_zero() {
        let e = ZModMatrix::zeros(5, 0, 3);
        assert_eq!(e.span_order(), 1);
        assert!(e.span_membership(&[0, 0, 0]).unwrap());
        assert!(!e.span_membership(&[0, 1, 0]).unwrap());
    }

    #[test]
    fn cyclic_span_order() {
        assert_eq!(m(3, 3, &[&[1, 0, 0]]).span_order(), 3);
    }

    #[test]
    fn membership_basics() {
        let a = m(4, 2, &[&[2, 0]]);
        assert!(a.span_membership(&[0, 0]).unwrap());
        assert!(a.span_membership(&[2, 0]).unwrap());
        assert!(!a.span_membership(&[1, 0]).unwrap());
        assert!(matches!(
            a.span_membership(&[1]),
            Err(ZModError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn howell_property_needs_annihilator_rows() {
        // Over Z_4 the row (2, 1) spans (0, 2); the form must expose that row.
        let a = m(4, 2, &[&[2, 1]]);
        let h = a.howell_form();
        assert_eq!(h.to_rows(), vec![vec![2, 1], vec![0, 2]]);
        assert_eq!(a.span_order(), 4);
        assert!(a.span_membership(&[0, 2]).unwrap());
    }

    #[test]
    fn kernel_of_units_and_zero_divisors() {
        assert_eq!(m(3, 1, &[&[1]]).kernel_basis().span_order(), 1);
        let k = m(4, 1, &[&[2]]).kernel_basis();
        assert_eq!(k.span_order(), 2);
        assert!(k.span_membership(&[2]).unwrap());
    }

    #[test]
    fn solve_left_finds_combination() {
        let a = m(6, 3, &[&[1, 2, 3], &[0, 3, 3]]);
        let v = vec![2, 1, 3];
        let y = a.solve_left(&v).unwrap().unwrap();
        assert_eq!(a.left_mul_vec(&y).unwrap(), v);
        assert_eq!(a.solve_left(&[2, 1, 0]).unwrap(), None);
    }

    #[test]
    fn signed_rows_reduce() {
        let a = ZModMatrix::from_signed_rows(5, 2, &[vec![-1, 7]]).unwrap();
        assert_eq!(a.row(0), &[4, 2]);
    }

    #[test]
    fn rejects_out_of_range_entries() {
        assert!(matches!(
            ZModMatrix::new(3, 1, 1, vec![3]),
            Err(ZModError::EntryOutOfRange { value: 3, modulus: 3 })
        ));
        assert!(matches!(ZModMatrix::new(1, 0, 0, vec![]), Err(ZModError::InvalidModulus(1))));
    }

    #[test]
    fn normalizing_unit_hits_gcd() {
        for n in 2..40u64 {
            for a in 1..n {
                let u = normalizing_unit(a, n);
                assert_eq!(gcd(u, n), 1);
                assert_eq!(mul_mod(u, a, n), gcd(a, n));
            }
        }
    }
}
