//! Dense linear algebra over GF(2) for systems of at most 64 unknowns.
//!
//! A row is one `u64`; column `j` lives in bit `j`. Key-bit variables use
//! column `i` for key bit `k_i`.

use crate::error::Gf2Error;

/// Maximum number of columns.
pub const MAX_COLS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<u64>,
}

fn col_mask(cols: usize) -> u64 {
    if cols == 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= MAX_COLS, "at most {MAX_COLS} columns supported");
        Gf2Matrix { cols, rows: vec![0; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from packed rows; bits at or above `cols` must be clear.
    pub fn from_rows(rows: Vec<u64>, cols: usize) -> Self {
        assert!(cols <= MAX_COLS, "at most {MAX_COLS} columns supported");
        assert!(rows.iter().all(|r| r & !col_mask(cols) == 0), "row has bits beyond column count");
        Gf2Matrix { cols, rows }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn packed_rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(c < self.cols);
        (self.rows[r] >> c) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        assert!(c < self.cols);
        if v {
            self.rows[r] |= 1 << c;
        } else {
            self.rows[r] &= !(1 << c);
        }
    }

    /// Product with a column vector packed like a row.
    pub fn mul_vec(&self, x: u64) -> Vec<bool> {
        self.rows.iter().map(|r| (r & x).count_ones() & 1 == 1).collect()
    }
}

/// Result of [`row_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelon {
    pub reduced: Gf2Matrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

/// Reduced row-echelon form. Nonzero rows come first and pivot columns
/// increase strictly.
pub fn row_reduce(m: &Gf2Matrix) -> RowEchelon {
    let mut rows = m.rows.clone();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == rows.len() {
            break;
        }
        let bit = 1u64 << c;
        let Some(p) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= pivot;
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    RowEchelon { reduced: Gf2Matrix { cols: m.cols, rows }, rank: r, pivot_cols }
}

pub fn rank(m: &Gf2Matrix) -> usize {
    let mut basis = XorBasis::new();
    m.rows.iter().filter(|&&r| basis.insert(r)).count()
}

/// Incremental span tracker: keeps one basis vector per leading bit.
#[derive(Clone, Debug)]
pub struct XorBasis {
    slots: [u64; 64],
    rank: usize,
}

impl Default for XorBasis {
    fn default() -> Self {
        Self::new()
    }
}

impl XorBasis {
    pub fn new() -> Self {
        XorBasis { slots: [0; 64], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `v` against the basis.
    pub fn reduce(&self, mut v: u64) -> u64 {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if self.slots[top] == 0 {
                break;
            }
            v ^= self.slots[top];
        }
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Adds `v`; returns whether it was independent of the basis.
    pub fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let top = 63 - v.leading_zeros() as usize;
        self.slots[top] = v;
        self.rank += 1;
        true
    }
}

/// Greedy maximal independent subset of packed rows, first come first kept.
pub fn select_independent_rows(rows: &[u64]) -> Vec<usize> {
    let mut basis = XorBasis::new();
    rows.iter()
        .enumerate()
        .filter_map(|(i, &r)| basis.insert(r).then_some(i))
        .collect()
}

/// `A·x = b` over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2System {
    pub matrix: Gf2Matrix,
    pub rhs: Vec<bool>,
}

impl Gf2System {
    pub fn new(matrix: Gf2Matrix, rhs: Vec<bool>) -> Result<Self, Gf2Error> {
        if matrix.rows() != rhs.len() {
            return Err(Gf2Error::Dimension(format!(
                "{} rows but {} right-hand sides",
                matrix.rows(),
                rhs.len()
            )));
        }
        Ok(Gf2System { matrix, rhs })
    }

    pub fn solve(&self) -> Result<Solution, Gf2Error> {
        solve(self)
    }
}

/// One solved pivot: `x[col] = value ^ <deps, x>` where `deps` only has
/// free columns set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PivotRow {
    pub col: usize,
    pub deps: u64,
    pub value: bool,
}

/// General solution of a consistent system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub cols: usize,
    /// Sorted by column.
    pub pivots: Vec<PivotRow>,
    /// Columns not fixed by any pivot, ascending.
    pub free: Vec<usize>,
}

impl Solution {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Pivot variables whose value does not depend on free variables.
    pub fn determined(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.pivots.iter().filter(|p| p.deps == 0).map(|p| (p.col, p.value))
    }

    /// Full assignment for the given values of the free columns (`free_values`
    /// is packed by column; bits outside `free` are ignored).
    pub fn assign(&self, free_values: u64) -> u64 {
        let free_mask = self.free.iter().fold(0u64, |m, &c| m | 1 << c);
        let free_values = free_values & free_mask;
        self.pivots.iter().fold(free_values, |x, p| {
            let v = p.value ^ ((p.deps & free_values).count_ones() & 1 == 1);
            x | (v as u64) << p.col
        })
    }

    /// Adds the equation `x[col] = value` for a free column. Returns false if
    /// `col` was not free.
    pub fn pin(&mut self, col: usize, value: bool) -> bool {
        let Some(pos) = self.free.iter().position(|&c| c == col) else {
            return false;
        };
        self.free.remove(pos);
        let bit = 1u64 << col;
        for p in &mut self.pivots {
            if p.deps & bit != 0 {
                p.deps &= !bit;
                p.value ^= value;
            }
        }
        let at = self.pivots.partition_point(|p| p.col < col);
        self.pivots.insert(at, PivotRow { col, deps: 0, value });
        true
    }
}

/// Gauss-Jordan elimination processing equations in input order; the first
/// equation that reduces to `0 = 1` is reported.
pub fn solve(system: &Gf2System) -> Result<Solution, Gf2Error> {
    let cols = system.matrix.cols();
    // (row, rhs, pivot column)
    let mut basis: Vec<(u64, bool, usize)> = Vec::new();
    for (i, (&row, &b)) in system.matrix.rows.iter().zip(&system.rhs).enumerate() {
        let (mut row, mut b) = (row, b);
        for &(brow, bb, pc) in &basis {
            if row >> pc & 1 == 1 {
                row ^= brow;
                b ^= bb;
            }
        }
        if row == 0 {
            if b {
                return Err(Gf2Error::Inconsistent { row: i });
            }
            continue;
        }
        let pc = row.trailing_zeros() as usize;
        for entry in &mut basis {
            if entry.0 >> pc & 1 == 1 {
                entry.0 ^= row;
                entry.1 ^= b;
            }
        }
        basis.push((row, b, pc));
    }
    let pivot_mask = basis.iter().fold(0u64, |m, e| m | 1 << e.2);
    let free: Vec<usize> = (0..cols).filter(|&c| pivot_mask >> c & 1 == 0).collect();
    let mut pivots: Vec<PivotRow> = basis
        .into_iter()
        .map(|(row, value, col)| PivotRow { col, deps: row & !(1 << col), value })
        .collect();
    pivots.sort_by_key(|p| p.col);
    Ok(Solution { cols, pivots, free })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_rank() {
        let e = row_reduce(&Gf2Matrix::identity(32));
        assert_eq!(e.rank, 32);
        assert_eq!(e.pivot_cols, (0..32).collect::<Vec<_>>());
    }

    #[test]
    fn duplicate_rows_lose_rank() {
        let m = Gf2Matrix::from_rows(vec![0b1011, 0b0110, 0b1011], 4);
        assert!(row_reduce(&m).rank < 3);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn reduce_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let m = Gf2Matrix::from_rows((0..20).map(|_| rng.gen::<u64>() & 0x00FF_FFFF).collect(), 24);
            let once = row_reduce(&m);
            let twice = row_reduce(&once.reduced);
            assert_eq!(once, twice);
            assert!(once.rank <= 20);
            assert!(once.pivot_cols.windows(2).all(|w| w[0] < w[1]));
            assert!(once.reduced.packed_rows()[once.rank..].iter().all(|&r| r == 0));
        }
    }

    #[test]
    fn select_independent_examples() {
        let k = |i: usize| 1u64 << i;
        assert_eq!(select_independent_rows(&[k(1), k(1), k(2)]), vec![0, 2]);
        assert!(select_independent_rows(&[]).is_empty());
        assert_eq!(select_independent_rows(&[0, k(3), k(3) | k(4), k(4)]), vec![1, 2]);
    }

    #[test]
    fn identity_system() {
        let rhs: Vec<bool> = (0..32).map(|i| i % 3 == 0).collect();
        let sol = Gf2System::new(Gf2Matrix::identity(32), rhs.clone()).unwrap().solve().unwrap();
        assert!(sol.free.is_empty());
        let x = sol.assign(0);
        assert!((0..32).all(|i| (x >> i & 1 == 1) == rhs[i]));
    }

    #[test]
    fn one_equation_two_unknowns() {
        let sys = Gf2System::new(Gf2Matrix::from_rows(vec![0b11], 2), vec![true]).unwrap();
        let sol = sys.solve().unwrap();
        assert_eq!(sol.pivots, vec![PivotRow { col: 0, deps: 0b10, value: true }]);
        assert_eq!(sol.free, vec![1]);
        assert_eq!(sol.determined().count(), 0);
        assert_eq!(sol.assign(0), 0b01);
        assert_eq!(sol.assign(0b10), 0b10);
    }

    #[test]
    fn inconsistency_reported() {
        let sys = Gf2System::new(Gf2Matrix::from_rows(vec![0b01, 0b10, 0b11], 2), vec![true, true, true])
            .unwrap();
        assert_eq!(sys.solve(), Err(Gf2Error::Inconsistent { row: 2 }));
        assert!(Gf2System::new(Gf2Matrix::zeros(2, 2), vec![true]).is_err());
    }

    #[test]
    fn pin_free_variable() {
        let sys = Gf2System::new(Gf2Matrix::from_rows(vec![0b111], 3), vec![false]).unwrap();
        let mut sol = sys.solve().unwrap();
        assert!(sol.pin(2, true));
        assert!(!sol.pin(0, true));
        assert_eq!(sol.free, vec![1]);
        let x = sol.assign(0b010);
        assert_eq!((x & 0b111).count_ones() % 2, 0);
        assert_eq!(x >> 2 & 1, 1);
    }

    #[test]
    fn random_full_rank_from_known_key() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let key: u64 = rng.gen();
            let mut rows = Vec::new();
            let mut basis = XorBasis::new();
            while rows.len() < 32 {
                let r: u64 = rng.gen();
                if basis.insert(r) {
                    rows.push(r);
                }
            }
            let m = Gf2Matrix::from_rows(rows, 64);
            let rhs = m.mul_vec(key);
            let sol = Gf2System::new(m.clone(), rhs.clone()).unwrap().solve().unwrap();
            assert_eq!(sol.rank(), 32);
            let x = sol.assign(key);
            assert_eq!(x, key);
            assert_eq!(m.mul_vec(sol.assign(0)), rhs);
        }
    }
}
