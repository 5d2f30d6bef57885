//! Sign matrices and their Gram products.
//!
//! A [`SignMatrix`] stores its entries as one signed byte per cell in a flat
//! row-major buffer: entry `(i, j)` of an order-`m` matrix lives at
//! `m * i + j`. Populations use the same layout with an extra `m * m * k`
//! offset per matrix, so everything here also has a slice-level form.

use std::fmt;

use crate::error::{Error, Result};

/// Largest Sylvester power accepted by [`sylvester`].
pub const SYLVESTER_POWER_CAP: u32 = 10;

/// Square matrix with entries in {+1, -1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    /// Builds a matrix from row-major entries, rejecting anything that is not
    /// exactly +1 or -1.
    pub fn new(order: usize, entries: Vec<i8>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Matrix("order must be at least 1".into()));
        }
        if entries.len() != order * order {
            return Err(Error::Matrix(format!(
                "expected {} entries for order {order}, got {}",
                order * order,
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|&e| e != 1 && e != -1) {
            return Err(Error::Matrix(format!(
                "entry ({}, {}) is {}, not a sign",
                pos / order,
                pos % order,
                entries[pos]
            )));
        }
        Ok(SignMatrix { order, entries })
    }

    pub(crate) fn from_entries_unchecked(order: usize, entries: Vec<i8>) -> Self {
        debug_assert_eq!(entries.len(), order * order);
        debug_assert!(entries.iter().all(|&e| e == 1 || e == -1));
        SignMatrix { order, entries }
    }

    /// The all-+1 matrix.
    pub fn ones(order: usize) -> Result<Self> {
        Self::new(order, vec![1; order * order])
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> i8) -> Result<Self> {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        Self::new(order, entries)
    }

    /// Builds a matrix from rows written with `+` and `-`.
    ///
    /// ```
    /// use hadamard_ga::SignMatrix;
    /// let h2 = SignMatrix::from_sign_rows(&["++", "+-"]).unwrap();
    /// assert!(h2.is_hadamard());
    /// ```
    pub fn from_sign_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.chars().count() != order {
                return Err(Error::Matrix(format!(
                    "row {i} has {} symbols, expected {order}",
                    row.chars().count()
                )));
            }
            for ch in row.chars() {
                entries.push(match ch {
                    '+' => 1,
                    '-' => -1,
                    other => return Err(Error::Matrix(format!("symbol {other:?} in row {i}"))),
                });
            }
        }
        Self::new(order, entries)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// Row-major entries.
    #[inline]
    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [i8] {
        &mut self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[self.order * row + col]
    }

    /// Negates a single entry.
    pub fn flip(&mut self, row: usize, col: usize) {
        self.entries[self.order * row + col] *= -1;
    }

    pub fn negate_row(&mut self, row: usize) {
        let m = self.order;
        for e in &mut self.entries[m * row..m * (row + 1)] {
            *e = -*e;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        let m = self.order;
        for j in 0..m {
            self.entries.swap(m * a + j, m * b + j);
        }
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = i8> + '_ {
        self.entries[col..].iter().step_by(self.order).copied()
    }

    /// Column 0 all +1 and every other column holding m/2 entries of each sign.
    pub fn is_balanced(&self) -> bool {
        is_balanced_slice(&self.entries, self.order)
    }

    pub fn gram(&self) -> GramMatrix {
        gram(self)
    }

    pub fn is_hadamard(&self) -> bool {
        crate::fitness::is_hadamard(self)
    }

    pub fn into_entries(self) -> Vec<i8> {
        self.entries
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SignMatrix(m={})", self.order)?;
        for row in self.entries.chunks(self.order) {
            let line: String = row.iter().map(|&e| if e > 0 { '+' } else { '-' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// `Q^T Q` of a sign matrix: entry `(i, j)` is the dot product of columns `i`
/// and `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    order: usize,
    entries: Vec<i32>,
}

impl GramMatrix {
    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.entries[self.order * i + j]
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = i32> + '_ {
        let m = self.order;
        self.entries
            .iter()
            .enumerate()
            .filter(move |(idx, _)| idx / m != idx % m)
            .map(|(_, &v)| v)
    }

    pub fn max_abs_off_diagonal(&self) -> u32 {
        self.off_diagonal().map(i32::unsigned_abs).max().unwrap_or(0)
    }

    pub fn is_symmetric(&self) -> bool {
        let m = self.order;
        (0..m).all(|i| (i + 1..m).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Materialized `Q^T Q` by direct column dot products.
pub fn gram(q: &SignMatrix) -> GramMatrix {
    let m = q.order;
    let e = &q.entries;
    let mut entries = vec![0i32; m * m];
    for i in 0..m {
        for j in i..m {
            let dot: i32 = (0..m)
                .map(|r| i32::from(e[m * r + i]) * i32::from(e[m * r + j]))
                .sum();
            entries[m * i + j] = dot;
            entries[m * j + i] = dot;
        }
    }
    GramMatrix { order: m, entries }
}

/// Sylvester's doubling construction, `H_1 = [+1]`,
/// `H_2n = [[H_n, H_n], [H_n, -H_n]]`.
pub fn sylvester(power: u32) -> Result<SignMatrix> {
    sylvester_capped(power, SYLVESTER_POWER_CAP)
}

pub fn sylvester_capped(power: u32, cap: u32) -> Result<SignMatrix> {
    if power > cap {
        return Err(Error::SizeLimit(format!(
            "sylvester power {power} exceeds cap {cap}"
        )));
    }
    let mut order = 1usize;
    let mut entries = vec![1i8];
    for _ in 0..power {
        let next = order * 2;
        let mut doubled = vec![0i8; next * next];
        for i in 0..order {
            for j in 0..order {
                let v = entries[order * i + j];
                doubled[next * i + j] = v;
                doubled[next * i + j + order] = v;
                doubled[next * (i + order) + j] = v;
                doubled[next * (i + order) + j + order] = -v;
            }
        }
        order = next;
        entries = doubled;
    }
    Ok(SignMatrix::from_entries_unchecked(order, entries))
}

pub(crate) fn is_balanced_slice(entries: &[i8], m: usize) -> bool {
    if !m.is_multiple_of(2) || entries.len() != m * m {
        return false;
    }
    let mut sums = vec![0i32; m];
    for row in entries.chunks_exact(m) {
        if row[0] != 1 {
            return false;
        }
        for (s, &e) in sums.iter_mut().zip(row) {
            if e != 1 && e != -1 {
                return false;
            }
            *s += i32::from(e);
        }
    }
    sums[1..].iter().all(|&s| s == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h4() -> SignMatrix {
        SignMatrix::from_sign_rows(&["++++", "+-+-", "++--", "+--+"]).unwrap()
    }

    #[test]
    fn all_ones_gram_is_constant() {
        let g = SignMatrix::ones(4).unwrap().gram();
        assert!(g.entries().iter().all(|&v| v == 4));
    }

    #[test]
    fn h4_gram_is_scaled_identity() {
        let g = h4().gram();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.get(i, j), if i == j { 4 } else { 0 });
            }
        }
    }

    #[test]
    fn crossover_parent_gram_golden() {
        // Columns (-,-,+,+), (+,+,-,-), (+,-,+,-), (+,-,-,+).
        let p1 = SignMatrix::from_sign_rows(&["-+++", "-+--", "+-+-", "+--+"]).unwrap();
        let expected = [4, -4, 0, 0, -4, 4, 0, 0, 0, 0, 4, 0, 0, 0, 0, 4];
        assert_eq!(p1.gram().entries(), &expected);
    }

    #[test]
    fn rejects_non_sign_entries() {
        assert!(SignMatrix::new(2, vec![1, 0, 1, 1]).is_err());
        assert!(SignMatrix::new(2, vec![1, 2, 1, 1]).is_err());
        assert!(SignMatrix::new(2, vec![1, 1, 1]).is_err());
        assert!(SignMatrix::new(0, vec![]).is_err());
    }

    #[test]
    fn sylvester_small_powers() {
        assert_eq!(sylvester(0).unwrap().entries(), &[1]);
        assert_eq!(sylvester(1).unwrap().entries(), &[1, 1, 1, -1]);
        assert_eq!(sylvester(2).unwrap(), h4());
        assert_eq!(sylvester(5).unwrap().order(), 32);
    }

    #[test]
    fn sylvester_cap() {
        assert!(matches!(sylvester(11), Err(Error::SizeLimit(_))));
        assert!(sylvester_capped(3, 2).is_err());
    }

    #[test]
    fn balance_contract() {
        assert!(h4().is_balanced());
        assert!(!SignMatrix::ones(4).unwrap().is_balanced());
        let mut q = h4();
        q.negate_row(0);
        assert!(!q.is_balanced());
    }

    #[test]
    fn column_iter() {
        let q = h4();
        assert_eq!(q.column(1).collect::<Vec<_>>(), vec![1, -1, 1, -1]);
    }
}
