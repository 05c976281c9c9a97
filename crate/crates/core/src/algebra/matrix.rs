use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;

/// Sparse matrix over ℚ. Absent entries are zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

/// Kernel of a matrix: its dimension and a basis in which every vector has
/// leading (lowest-index) nonzero coordinate equal to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    pub rank: usize,
    pub dim: usize,
    pub basis: Vec<Vec<Rational>>,
}

type SparseRow = Vec<(usize, BigInt)>;

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::new(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
            .collect();
        Self::from_dense(&dense)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Appends `count` zero rows and returns the index of the first one.
    pub fn add_rows(&mut self, count: usize) -> usize {
        let first = self.rows;
        self.rows += count;
        first
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.rows && col < self.cols, "entry ({row}, {col}) out of bounds");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn add_to(&mut self, row: usize, col: usize, value: &Rational) {
        let current = self.get(row, col);
        self.set(row, col, current + value);
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Rational::zero(); self.rows];
        for (&(i, j), a) in &self.entries {
            if !v[j].is_zero() {
                out[i] += a * &v[j];
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.echelon().len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn kernel(&self) -> Kernel {
        let echelon = self.echelon();
        let rank = echelon.len();
        let pivots: Vec<usize> = echelon.iter().map(|r| r[0].0).collect();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - rank);
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![Rational::zero(); self.cols];
            x[free] = Rational::one();
            for row in echelon.iter().rev() {
                let (c, lead) = &row[0];
                if *c > free {
                    // Only columns >= c occur in this row; all are zero so far.
                    continue;
                }
                let mut acc = Rational::zero();
                for (j, a) in &row[1..] {
                    if !x[*j].is_zero() {
                        acc += &x[*j] * Rational::from_integer(a.clone());
                    }
                }
                if !acc.is_zero() {
                    x[*c] = -acc / Rational::from_integer(lead.clone());
                }
            }
            normalize_leading(&mut x);
            basis.push(x);
        }
        Kernel { rank, dim: basis.len(), basis }
    }

    /// Integer row-echelon form. Each row is scaled to an integer primitive
    /// vector, and every elimination step is the fraction-free combination
    /// `(p/g)·row − (a/g)·pivot` followed by removal of the row content, so
    /// entries stay integral and small. Rows are returned in increasing
    /// pivot-column order, each with its pivot entry first.
    fn echelon(&self) -> Vec<SparseRow> {
        let mut by_row: BTreeMap<usize, Vec<(usize, &Rational)>> = BTreeMap::new();
        for (&(i, j), v) in &self.entries {
            by_row.entry(i).or_default().push((j, v));
        }
        let mut buckets: BTreeMap<usize, Vec<SparseRow>> = BTreeMap::new();
        for (_, row) in by_row {
            let int_row = integer_row(&row);
            if let Some(lead) = int_row.first().map(|e| e.0) {
                buckets.entry(lead).or_default().push(int_row);
            }
        }
        let mut echelon = Vec::new();
        while let Some((col, mut rows)) = buckets.pop_first() {
            let best = rows
                .iter()
                .enumerate()
                .min_by(|(ia, a), (ib, b)| {
                    a.len()
                        .cmp(&b.len())
                        .then_with(|| a[0].1.magnitude().cmp(b[0].1.magnitude()))
                        .then_with(|| ia.cmp(ib))
                })
                .map(|(i, _)| i)
                .expect("non-empty bucket");
            let pivot = rows.swap_remove(best);
            for row in rows {
                let reduced = eliminate(&row, &pivot);
                debug_assert!(reduced.first().is_none_or(|e| e.0 > col));
                if let Some(lead) = reduced.first().map(|e| e.0) {
                    buckets.entry(lead).or_default().push(reduced);
                }
            }
            echelon.push(pivot);
        }
        echelon
    }
}

fn integer_row(row: &[(usize, &Rational)]) -> SparseRow {
    let mut lcm = BigInt::one();
    for (_, v) in row {
        lcm = lcm.lcm(v.denom());
    }
    let out: SparseRow = row
        .iter()
        .map(|(j, v)| (*j, v.numer() * (&lcm / v.denom())))
        .collect();
    make_primitive(out)
}

fn make_primitive(mut row: SparseRow) -> SparseRow {
    let mut g = BigInt::zero();
    for (_, a) in &row {
        g = g.gcd(a);
        if g.is_one() {
            break;
        }
    }
    let negate = row.first().is_some_and(|(_, a)| a.is_negative());
    if !g.is_zero() && (!g.is_one() || negate) {
        let g = if negate { -g } else { g };
        for (_, a) in row.iter_mut() {
            *a = &*a / &g;
        }
    }
    row
}

/// `(p/g)·row − (a/g)·pivot`, where `p`, `a` are the leading entries;
/// the result no longer has an entry in the pivot column.
fn eliminate(row: &SparseRow, pivot: &SparseRow) -> SparseRow {
    let p = &pivot[0].1;
    let a = &row[0].1;
    let g = p.gcd(a);
    let row_scale = p / &g;
    let pivot_scale = a / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let next = match (row.get(i), pivot.get(j)) {
            (Some((ci, vi)), Some((cj, vj))) if ci == cj => {
                i += 1;
                j += 1;
                (*ci, vi * &row_scale - vj * &pivot_scale)
            }
            (Some((ci, vi)), Some((cj, _))) if ci < cj => {
                i += 1;
                (*ci, vi * &row_scale)
            }
            (Some((ci, vi)), None) => {
                i += 1;
                (*ci, vi * &row_scale)
            }
            (_, Some((cj, vj))) => {
                j += 1;
                (*cj, -(vj * &pivot_scale))
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    make_primitive(out)
}

fn normalize_leading(x: &mut [Rational]) {
    if let Some(lead) = x.iter().find(|v| !v.is_zero()).cloned() {
        if !lead.is_one() {
            for v in x.iter_mut() {
                *v /= &lead;
            }
        }
    }
}
