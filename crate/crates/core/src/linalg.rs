//! Exact sparse linear algebra over the session cyclotomic field.
//!
//! Rows are sorted `(column, Scalar)` pairs with no stored zeros. Pivot
//! selection is deterministic (columns left to right, first available row),
//! so eliminations, nullspace bases and inverses are reproducible.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type SparseRow = Vec<(usize, Scalar)>;

#[derive(Clone, PartialEq, Eq)]
pub struct SparseMat {
    level: u32,
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseRow>,
}

impl std::fmt::Debug for SparseMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "SparseMat {}x{} (level {})", self.nrows, self.ncols, self.level)?;
        for (i, row) in self.rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let entries: Vec<String> =
                row.iter().map(|(c, v)| format!("[{}]={}", c, v)).collect();
            writeln!(f, "  row {}: {}", i, entries.join(" "))?;
        }
        Ok(())
    }
}

impl SparseMat {
    pub fn zeros(level: u32, nrows: usize, ncols: usize) -> Self {
        SparseMat { level, nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(level: u32, n: usize) -> Self {
        let mut m = Self::zeros(level, n, n);
        for i in 0..n {
            m.rows[i].push((i, Scalar::one(level)));
        }
        m
    }

    pub fn from_triplets(
        level: u32,
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut m = Self::zeros(level, nrows, ncols);
        for (r, c, v) in triplets {
            m.add_entry(r, c, &v);
        }
        m
    }

    pub fn level(&self) -> u32 {
        self.level
    }
    pub fn nrows(&self) -> usize {
        self.nrows
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Scalar> {
        self.rows[r]
            .binary_search_by_key(&c, |(col, _)| *col)
            .ok()
            .map(|i| &self.rows[r][i].1)
    }

    /// Adds `v` into entry (r, c), keeping canonical form.
    pub fn add_entry(&mut self, r: usize, c: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        debug_assert!(r < self.nrows && c < self.ncols);
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |(col, _)| *col) {
            Ok(i) => {
                row[i].1 += v;
                if row[i].1.is_zero() {
                    row.remove(i);
                }
            }
            Err(i) => row.insert(i, (c, v.clone())),
        }
    }

    pub fn set_entry(&mut self, r: usize, c: usize, v: Scalar) {
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |(col, _)| *col) {
            Ok(i) => {
                if v.is_zero() {
                    row.remove(i);
                } else {
                    row[i].1 = v;
                }
            }
            Err(i) => {
                if !v.is_zero() {
                    row.insert(i, (c, v));
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "shape mismatch");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| row_add(a, b, None))
            .collect();
        SparseMat { level: self.level, nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let minus_one = -&Scalar::one(self.level);
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "shape mismatch");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| row_add(a, b, Some(&minus_one)))
            .collect();
        SparseMat { level: self.level, nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zeros(self.level, self.nrows, self.ncols);
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(c, v)| (*c, v * s)).collect())
            .collect();
        SparseMat { level: self.level, nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "inner dimension mismatch");
        let mut out = Self::zeros(self.level, self.nrows, other.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: SparseRow = Vec::new();
            for (k, v) in row {
                acc = row_add(&acc, &other.rows[*k], Some(v));
            }
            out.rows[r] = acc;
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.ncols, v.len());
        let mut out = vec![Scalar::zero(self.level); self.nrows];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, x) in row {
                out[r] += &(x * &v[*c]);
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.level, self.ncols, self.nrows);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                out.rows[*c].push((r, v.clone()));
            }
        }
        out
    }

    /// Kronecker product, row-major on both index pairs.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(
            self.level,
            self.nrows * other.nrows,
            self.ncols * other.ncols,
        );
        for (r1, row1) in self.rows.iter().enumerate() {
            if row1.is_empty() {
                continue;
            }
            for (r2, row2) in other.rows.iter().enumerate() {
                if row2.is_empty() {
                    continue;
                }
                let target = &mut out.rows[r1 * other.nrows + r2];
                for (c1, v1) in row1 {
                    for (c2, v2) in row2 {
                        target.push((c1 * other.ncols + c2, v1 * v2));
                    }
                }
            }
        }
        for row in &mut out.rows {
            row.sort_by_key(|(c, _)| *c);
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.ncols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        SparseMat { level: self.level, nrows: self.nrows + other.nrows, ncols: self.ncols, rows }
    }

    /// Columns as dense vectors.
    pub fn col(&self, c: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(self.level); self.nrows];
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(x) = row
                .binary_search_by_key(&c, |(col, _)| *col)
                .ok()
                .map(|i| &row[i].1)
            {
                v[r] = x.clone();
            }
        }
        v
    }

    pub fn from_columns(level: u32, nrows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(level, nrows, cols.len());
        for (c, colv) in cols.iter().enumerate() {
            assert_eq!(colv.len(), nrows);
            for (r, v) in colv.iter().enumerate() {
                if !v.is_zero() {
                    m.rows[r].push((c, v.clone()));
                }
            }
        }
        for row in &mut m.rows {
            row.sort_by_key(|(c, _)| *c);
        }
        m
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        echelon(&mut rows, self.ncols, false, None).len()
    }

    /// Basis of the right nullspace, one dense column per basis vector,
    /// ordered by ascending free column index.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut rows = self.rows.clone();
        let pivots = echelon(&mut rows, self.ncols, true, None);
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; self.ncols];
        for (r, c) in &pivots {
            pivot_of_col[*c] = Some(*r);
        }
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![Scalar::zero(self.level); self.ncols];
            v[free] = Scalar::one(self.level);
            for (r, c) in &pivots {
                if let Some(x) = get_in_row(&rows[*r], free) {
                    v[*c] = -&x;
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.nrows != self.ncols {
            return Err(Error::NotInvertible);
        }
        let n = self.nrows;
        let mut rows: Vec<SparseRow> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.push((n + i, Scalar::one(self.level)));
                row
            })
            .collect();
        let pivots = echelon(&mut rows, n, true, Some(n));
        if pivots.len() != n {
            return Err(Error::NotInvertible);
        }
        let mut out = Self::zeros(self.level, n, n);
        for (r, c) in pivots {
            out.rows[c] = rows[r]
                .iter()
                .filter(|(col, _)| *col >= n)
                .map(|(col, v)| (col - n, v.clone()))
                .collect();
        }
        Ok(out)
    }

    /// One particular solution of `self * x = rhs` (free variables zero),
    /// visiting columns in `col_order` if given. Returns None if inconsistent.
    pub fn solve(&self, rhs: &[Scalar], col_order: Option<&[usize]>) -> Option<Vec<Scalar>> {
        assert_eq!(rhs.len(), self.nrows);
        let n = self.ncols;
        let mut rows: Vec<SparseRow> = self
            .rows
            .iter()
            .zip(rhs)
            .map(|(r, b)| {
                let mut row = r.clone();
                if !b.is_zero() {
                    row.push((n, b.clone()));
                }
                row
            })
            .collect();
        let order: Vec<usize> = match col_order {
            Some(o) => o.to_vec(),
            None => (0..n).collect(),
        };
        let pivots = echelon_ordered(&mut rows, &order, true, Some(n));
        // Inconsistent iff some row reduces to (0 ... 0 | nonzero).
        for row in &rows {
            if row.len() == 1 && row[0].0 == n {
                return None;
            }
        }
        let mut x = vec![Scalar::zero(self.level); n];
        for (r, c) in pivots {
            if let Some(v) = get_in_row(&rows[r], n) {
                x[c] = v;
            }
        }
        Some(x)
    }

    /// Solves `self * X = B` column by column; None if any column is inconsistent.
    pub fn solve_mat(&self, b: &SparseMat) -> Option<SparseMat> {
        assert_eq!(self.nrows, b.nrows);
        let mut cols = Vec::with_capacity(b.ncols);
        for c in 0..b.ncols {
            cols.push(self.solve(&b.col(c), None)?);
        }
        Some(SparseMat::from_columns(self.level, self.ncols, &cols))
    }

    /// Restriction of a square operator to the column span of `basis`:
    /// returns X with self * basis = basis * X, or None if the span is not stable.
    pub fn restrict(&self, basis: &SparseMat) -> Option<SparseMat> {
        let image = self.mul(basis);
        basis.solve_mat(&image)
    }
}

fn get_in_row(row: &SparseRow, col: usize) -> Option<Scalar> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| row[i].1.clone())
}

/// result = a + f * b (f defaults to 1); merge of sorted sparse rows.
fn row_add(a: &SparseRow, b: &SparseRow, f: Option<&Scalar>) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some((ca, _)), Some((cb, vb))) if cb < ca => {
                let v = match f {
                    Some(s) => s * vb,
                    None => vb.clone(),
                };
                out.push((*cb, v));
                j += 1;
            }
            (Some((ca, va)), Some((_, vb))) => {
                let v = match f {
                    Some(s) => va + &(s * vb),
                    None => va + vb,
                };
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                let v = match f {
                    Some(s) => s * vb,
                    None => vb.clone(),
                };
                out.push((*cb, v));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn echelon(
    rows: &mut Vec<SparseRow>,
    ncols: usize,
    full: bool,
    stop_col: Option<usize>,
) -> Vec<(usize, usize)> {
    let order: Vec<usize> = (0..stop_col.unwrap_or(ncols)).collect();
    echelon_ordered(rows, &order, full, stop_col)
}

/// Gaussian elimination visiting pivot columns in `order`. Returns
/// (row, column) pivot pairs in elimination order. Columns at or past
/// `stop_col` are carried along (augmented part) but never pivoted.
fn echelon_ordered(
    rows: &mut Vec<SparseRow>,
    order: &[usize],
    full: bool,
    stop_col: Option<usize>,
) -> Vec<(usize, usize)> {
    let _ = stop_col;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; rows.len()];
    for &col in order {
        // first unused row with a nonzero entry in this column
        let mut pivot_row = None;
        for (r, row) in rows.iter().enumerate() {
            if used[r] {
                continue;
            }
            if get_in_row(row, col).is_some() {
                pivot_row = Some(r);
                break;
            }
        }
        let Some(pr) = pivot_row else { continue };
        used[pr] = true;
        // normalize pivot row
        let p = get_in_row(&rows[pr], col).unwrap();
        if !p.is_one() {
            let pinv = p.inv().expect("pivot nonzero");
            for e in rows[pr].iter_mut() {
                e.1 = &e.1 * &pinv;
            }
        }
        // eliminate from other rows
        let prow = rows[pr].clone();
        for r in 0..rows.len() {
            if r == pr {
                continue;
            }
            if !full && used[r] {
                continue;
            }
            if let Some(f) = get_in_row(&rows[r], col) {
                let neg = -&f;
                rows[r] = row_add(&rows[r], &prow, Some(&neg));
            }
        }
        pivots.push((pr, col));
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, Scalar};

    fn s(n: i64) -> Scalar {
        Scalar::from_int(1, n)
    }

    fn mat(level: u32, rows: &[&[i64]]) -> SparseMat {
        let mut m = SparseMat::zeros(level, rows.len(), rows[0].len());
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.add_entry(r, c, &Scalar::from_int(level, *v));
            }
        }
        m
    }

    #[test]
    fn mul_and_identity() {
        let a = mat(1, &[&[1, 2], &[3, 4]]);
        let i = SparseMat::identity(1, 2);
        assert_eq!(a.mul(&i), a);
        let b = mat(1, &[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), mat(1, &[&[2, 1], &[4, 3]]));
    }

    #[test]
    fn inverse_of_invertible() {
        let a = mat(1, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), SparseMat::identity(1, 2));
        assert_eq!(inv.mul(&a), SparseMat::identity(1, 2));
        let sing = mat(1, &[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn rank_and_nullspace() {
        let a = mat(1, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            let img = a.mul_vec(v);
            assert!(img.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = mat(1, &[&[1, 1], &[0, 1]]);
        let x = a.solve(&[s(3), s(1)], None).unwrap();
        assert_eq!(a.mul_vec(&x), vec![s(3), s(1)]);
        let b = mat(1, &[&[1, 1], &[2, 2]]);
        assert!(b.solve(&[s(1), s(3)], None).is_none());
    }

    #[test]
    fn solve_respects_column_order() {
        // x + y = 1 has different particular solutions under different pivots.
        let a = mat(1, &[&[1, 1]]);
        let x1 = a.solve(&[s(1)], Some(&[0, 1])).unwrap();
        let x2 = a.solve(&[s(1)], Some(&[1, 0])).unwrap();
        assert_eq!(x1, vec![s(1), s(0)]);
        assert_eq!(x2, vec![s(0), s(1)]);
    }

    #[test]
    fn kron_shapes_and_values() {
        let a = mat(1, &[&[1, 2]]);
        let b = mat(1, &[&[3], &[4]]);
        let k = a.kron(&b);
        assert_eq!((k.nrows(), k.ncols()), (2, 2));
        assert_eq!(k.get(0, 0), Some(&s(3)));
        assert_eq!(k.get(1, 1), Some(&Scalar::from_rational(1, rat_int(8))));
    }

    mod properties {
        use super::*;
        use crate::scalar::rat;
        use proptest::prelude::*;

        fn arb_mat(level: u32, nrows: usize, ncols: usize) -> impl Strategy<Value = SparseMat> {
            proptest::collection::vec(-3i64..4, nrows * ncols).prop_map(move |vals| {
                let mut m = SparseMat::zeros(level, nrows, ncols);
                for (idx, v) in vals.into_iter().enumerate() {
                    m.add_entry(idx / ncols, idx % ncols, &Scalar::from_int(level, v));
                }
                m
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn rank_plus_nullity_is_width(m in arb_mat(4, 4, 5)) {
                prop_assert_eq!(m.rank() + m.nullspace().len(), m.ncols());
            }

            #[test]
            fn nullspace_vectors_are_in_the_kernel(m in arb_mat(4, 3, 5)) {
                for v in m.nullspace() {
                    prop_assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
                }
            }

            #[test]
            fn inverse_is_two_sided_when_it_exists(m in arb_mat(4, 4, 4)) {
                if let Ok(inv) = m.inverse() {
                    prop_assert_eq!(m.mul(&inv), SparseMat::identity(4, 4));
                    prop_assert_eq!(inv.mul(&m), SparseMat::identity(4, 4));
                } else {
                    prop_assert!(m.rank() < 4);
                }
            }

            #[test]
            fn solve_solutions_check_out(m in arb_mat(4, 3, 4), rhs in proptest::collection::vec(-3i64..4, 3)) {
                let b: Vec<Scalar> = rhs.into_iter().map(|v| Scalar::from_int(4, v)).collect();
                if let Some(x) = m.solve(&b, None) {
                    prop_assert_eq!(m.mul_vec(&x), b);
                }
            }

            #[test]
            fn kron_is_multiplicative(a in arb_mat(4, 2, 2), b in arb_mat(4, 2, 2), c in arb_mat(4, 2, 2), d in arb_mat(4, 2, 2)) {
                // (a (x) b)(c (x) d) = ac (x) bd
                prop_assert_eq!(a.kron(&b).mul(&c.kron(&d)), a.mul(&c).kron(&b.mul(&d)));
            }
        }

        #[test]
        fn scale_by_rational_commutes_with_mul() {
            let m = SparseMat::identity(4, 3);
            let s = Scalar::from_rational(4, rat(2, 3));
            assert_eq!(m.scale(&s).mul(&m), m.mul(&m.scale(&s)));
        }
    }

    #[test]
    fn restrict_to_stable_subspace() {
        // diag(1,2,3) restricted to span(e1, e3).
        let a = mat(1, &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let basis = mat(1, &[&[1, 0], &[0, 0], &[0, 1]]);
        let r = a.restrict(&basis).unwrap();
        assert_eq!(r, mat(1, &[&[1, 0], &[0, 3]]));
        // span(e1 + e2) is not stable under a shear towards e1 only.
        let shear = mat(1, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let bad = mat(1, &[&[1], &[1], &[0]]);
        assert!(shear.restrict(&bad).is_none());
    }
}
