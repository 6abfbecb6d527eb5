use std::fmt;

use crate::int::Int;

/// A sparse row: `(column, value)` pairs sorted by column with no zero values.
pub type SparseRow = Vec<(usize, Int)>;

/// Integer matrix stored as sparse rows.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Int::ONE)]).collect();
        IntMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn from_dense(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "dense entry count");
        let data = (0..rows)
            .map(|r| {
                (0..cols)
                    .filter_map(|c| {
                        let v = entries[r * cols + c];
                        (v != 0).then(|| (c, Int::from(v)))
                    })
                    .collect()
            })
            .collect();
        IntMatrix { rows, cols, data }
    }

    /// Builds from sparse rows; entries are sorted and zeros dropped, duplicates summed.
    pub fn from_rows(rows: usize, cols: usize, mut data: Vec<SparseRow>) -> Self {
        assert_eq!(data.len(), rows, "row count");
        for row in &mut data {
            row.sort_by_key(|(c, _)| *c);
            let mut merged: SparseRow = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                assert!(c < cols, "column {c} out of range {cols}");
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv = &*lv + &v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds from sparse columns given as `(row, value)` lists.
    pub fn from_columns(rows: usize, cols: usize, columns: Vec<Vec<(usize, Int)>>) -> Self {
        assert_eq!(columns.len(), cols, "column count");
        let mut data = vec![Vec::new(); rows];
        for (c, col) in columns.into_iter().enumerate() {
            for (r, v) in col {
                data[r].push((c, v));
            }
        }
        IntMatrix::from_rows(rows, cols, data)
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<SparseRow>) -> Self {
        IntMatrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, Int)] {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Int {
        match self.data[r].binary_search_by_key(&c, |(cc, _)| *cc) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: SparseRow = Vec::new();
                for (k, v) in row {
                    axpy(&mut acc, v, &rhs.data[*k]);
                }
                acc
            })
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }

    /// Matrix-vector product for a sparse vector given as `(index, value)` pairs.
    pub fn apply(&self, v: &[(usize, Int)]) -> SparseRow {
        let mut out = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = Int::ZERO;
            let (mut i, mut j) = (0, 0);
            while i < row.len() && j < v.len() {
                match row[i].0.cmp(&v[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        acc = &acc + &(&row[i].1 * &v[j].1);
                        i += 1;
                        j += 1;
                    }
                }
            }
            if !acc.is_zero() {
                out.push((r, acc));
            }
        }
        out
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let data = rows.iter().map(|r| self.data[*r].clone()).collect();
        IntMatrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Keeps the listed columns, renumbered in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut position = vec![usize::MAX; self.cols];
        for (new, old) in cols.iter().enumerate() {
            position[*old] = new;
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut out: SparseRow = row
                    .iter()
                    .filter(|(c, _)| position[*c] != usize::MAX)
                    .map(|(c, v)| (position[*c], v.clone()))
                    .collect();
                out.sort_by_key(|(c, _)| *c);
                out
            })
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Int>> {
        self.data
            .iter()
            .map(|row| {
                let mut dense = vec![Int::ZERO; self.cols];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect()
    }

    /// `true` when the matrix equals `diag(entries)` padded with zeros.
    pub fn is_diagonal(&self, entries: &[Int]) -> bool {
        self.data
            .iter()
            .enumerate()
            .all(|(r, row)| match (row.as_slice(), entries.get(r)) {
                ([], None) => true,
                ([], Some(_)) => false,
                ([(c, v)], Some(d)) => *c == r && v == d,
                _ => false,
            })
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

/// `target += q * src`.
pub(crate) fn axpy(target: &mut SparseRow, q: &Int, src: &[(usize, Int)]) {
    axpy_tracked(target, q, src, |_, _| {});
}

/// `target += q * src`, reporting every column whose zero/nonzero status flips
/// (`true` = became nonzero).
pub(crate) fn axpy_tracked(
    target: &mut SparseRow,
    q: &Int,
    src: &[(usize, Int)],
    mut on_change: impl FnMut(usize, bool),
) {
    if q.is_zero() || src.is_empty() {
        return;
    }
    let old = std::mem::take(target);
    let mut out = Vec::with_capacity(old.len() + src.len());
    let mut a = old.into_iter().peekable();
    let mut b = src.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some((ca, _)), Some((cb, _))) if ca < cb => out.push(a.next().unwrap()),
            (Some((ca, _)), Some((cb, _))) if ca > cb => {
                let (c, v) = b.next().unwrap();
                out.push((*c, q * v));
                on_change(*c, true);
            }
            (Some(_), Some(_)) => {
                let (c, va) = a.next().unwrap();
                let (_, vb) = b.next().unwrap();
                let s = &va + &(q * vb);
                if s.is_zero() {
                    on_change(c, false);
                } else {
                    out.push((c, s));
                }
            }
            (Some(_), None) => out.push(a.next().unwrap()),
            (None, Some(_)) => {
                let (c, v) = b.next().unwrap();
                out.push((*c, q * v));
                on_change(*c, true);
            }
            (None, None) => break,
        }
    }
    *target = out;
}

/// Replaces `(x, y)` by `(a*x + b*y, c*x + d*y)` for two sparse rows.
pub(crate) fn combine_rows(
    x: &[(usize, Int)],
    y: &[(usize, Int)],
    coeffs: [&Int; 4],
) -> (SparseRow, SparseRow) {
    let [a, b, c, d] = coeffs;
    let mut nx: SparseRow = Vec::new();
    axpy(&mut nx, a, x);
    axpy(&mut nx, b, y);
    let mut ny: SparseRow = Vec::new();
    axpy(&mut ny, c, x);
    axpy(&mut ny, d, y);
    (nx, ny)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = IntMatrix::from_dense(2, 3, &[1, 2, 0, 0, -1, 3]);
        let b = IntMatrix::from_dense(3, 2, &[1, 0, 0, 1, 2, 2]);
        let ab = a.mul(&b);
        assert_eq!(ab, IntMatrix::from_dense(2, 2, &[1, 2, 6, 5]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.get(1, 2), Int::from(3));
    }

    #[test]
    fn axpy_cancels_entries() {
        let mut t: SparseRow = vec![(0, Int::from(2)), (3, Int::from(1))];
        let src = vec![(0, Int::from(1)), (2, Int::from(5))];
        let mut flips = Vec::new();
        axpy_tracked(&mut t, &Int::from(-2), &src, |c, nz| flips.push((c, nz)));
        assert_eq!(t, vec![(2, Int::from(-10)), (3, Int::from(1))]);
        assert_eq!(flips, vec![(0, false), (2, true)]);
    }
}
