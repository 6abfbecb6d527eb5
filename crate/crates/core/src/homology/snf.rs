//! Sparse Smith normal form over the integers.
//!
//! Pivot rule: the active entry of least absolute value, ties broken by lowest
//! row and then lowest column. Row and column transforms (and their inverses)
//! are tracked only on request, since the kernel-basis and homology-generator
//! computations need them but plain Betti/torsion numbers do not.

use std::collections::BTreeSet;

use super::matrix::{axpy, axpy_tracked, combine_rows, IntMatrix, SparseRow};
use crate::int::Int;

/// `U · m · V = diag(factors)` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    /// Invariant factors, positive, each dividing the next.
    pub factors: Vec<Int>,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithNormalForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<Int> {
        self.factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Full decomposition with all four transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let r = reduce(m, Track::ALL);
    SmithNormalForm {
        factors: r.factors,
        u: r.u.unwrap(),
        u_inv: r.u_inv.unwrap(),
        v: r.v.unwrap(),
        v_inv: r.v_inv.unwrap(),
    }
}

/// Invariant factors only; no transform bookkeeping.
pub fn invariant_factors(m: &IntMatrix) -> Vec<Int> {
    reduce(m, Track::NONE).factors
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Track {
    pub const ALL: Track = Track {
        u: true,
        u_inv: true,
        v: true,
        v_inv: true,
    };
    pub const NONE: Track = Track {
        u: false,
        u_inv: false,
        v: false,
        v_inv: false,
    };
}

pub(crate) struct Reduction {
    pub factors: Vec<Int>,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
}

struct Pivot {
    row: usize,
    col: usize,
    value: Int,
}

struct Engine {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseRow>,
    col_rows: Vec<BTreeSet<usize>>,
    row_done: Vec<bool>,
    // U, row-major.
    u: Option<Vec<SparseRow>>,
    // Transpose of U^{-1}: row i holds column i of U^{-1}.
    u_inv_t: Option<Vec<SparseRow>>,
    // Transpose of V: row j holds column j of V.
    v_t: Option<Vec<SparseRow>>,
    // V^{-1}, row-major.
    v_inv: Option<Vec<SparseRow>>,
}

fn identity_rows(n: usize) -> Vec<SparseRow> {
    (0..n).map(|i| vec![(i, Int::ONE)]).collect()
}

fn entry(row: &SparseRow, c: usize) -> Option<&Int> {
    row.binary_search_by_key(&c, |(cc, _)| *cc)
        .ok()
        .map(|i| &row[i].1)
}

impl Engine {
    fn new(m: &IntMatrix, track: Track) -> Self {
        let (nrows, ncols) = (m.nrows(), m.ncols());
        let rows: Vec<SparseRow> = (0..nrows).map(|r| m.row(r).to_vec()).collect();
        let mut col_rows = vec![BTreeSet::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c].insert(r);
            }
        }
        Engine {
            nrows,
            ncols,
            rows,
            col_rows,
            row_done: vec![false; nrows],
            u: track.u.then(|| identity_rows(nrows)),
            u_inv_t: track.u_inv.then(|| identity_rows(nrows)),
            v_t: track.v.then(|| identity_rows(ncols)),
            v_inv: track.v_inv.then(|| identity_rows(ncols)),
        }
    }

    /// Least |entry| over the active rows, ties lowest row then lowest column.
    fn select_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(&Int, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if self.row_done[r] || row.is_empty() {
                continue;
            }
            for (c, v) in row {
                let better = match best {
                    None => true,
                    Some((bv, _, _)) => v.cmp_abs(bv) == std::cmp::Ordering::Less,
                };
                if better {
                    best = Some((v, r, *c));
                    if v.is_unit() {
                        return Some((r, *c));
                    }
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    /// `row_i += q * row_p`.
    fn row_add(&mut self, i: usize, p: usize, q: &Int) {
        let src = self.rows[p].clone();
        let col_rows = &mut self.col_rows;
        axpy_tracked(&mut self.rows[i], q, &src, |c, nonzero| {
            if nonzero {
                col_rows[c].insert(i);
            } else {
                col_rows[c].remove(&i);
            }
        });
        if let Some(u) = &mut self.u {
            let src = u[p].clone();
            axpy(&mut u[i], q, &src);
        }
        if let Some(t) = &mut self.u_inv_t {
            let src = t[i].clone();
            axpy(&mut t[p], &-q, &src);
        }
    }

    /// `col_j += q * col_c`, valid only while column `c` is zero outside row `p`.
    fn col_add(&mut self, p: usize, j: usize, c: usize, q: &Int) {
        debug_assert!(self.col_rows[c].iter().all(|r| *r == p));
        let pc = entry(&self.rows[p], c).cloned().unwrap_or(Int::ZERO);
        let delta = q * &pc;
        let row = &mut self.rows[p];
        match row.binary_search_by_key(&j, |(cc, _)| *cc) {
            Ok(idx) => {
                let s = &row[idx].1 + &delta;
                if s.is_zero() {
                    row.remove(idx);
                    self.col_rows[j].remove(&p);
                } else {
                    row[idx].1 = s;
                }
            }
            Err(idx) => {
                if !delta.is_zero() {
                    row.insert(idx, (j, delta));
                    self.col_rows[j].insert(p);
                }
            }
        }
        if let Some(vt) = &mut self.v_t {
            let src = vt[c].clone();
            axpy(&mut vt[j], q, &src);
        }
        if let Some(w) = &mut self.v_inv {
            let src = w[j].clone();
            axpy(&mut w[c], &-q, &src);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for (_, v) in &mut self.rows[i] {
            *v = -&*v;
        }
        if let Some(u) = &mut self.u {
            for (_, v) in &mut u[i] {
                *v = -&*v;
            }
        }
        if let Some(t) = &mut self.u_inv_t {
            for (_, v) in &mut t[i] {
                *v = -&*v;
            }
        }
    }

    /// Clears the pivot's row and column, moving the pivot to smaller
    /// remainders until it divides everything it touches.
    fn settle(&mut self, mut p: usize, mut c: usize) -> (usize, usize) {
        loop {
            let v = entry(&self.rows[p], c)
                .cloned()
                .expect("pivot entry present");
            let others: Vec<usize> = self.col_rows[c]
                .iter()
                .copied()
                .filter(|i| *i != p)
                .collect();
            let mut next: Option<(Int, usize)> = None;
            for i in others {
                let a = entry(&self.rows[i], c)
                    .cloned()
                    .expect("column index consistent");
                let (q, r) = a.div_rem(&v);
                self.row_add(i, p, &-&q);
                if !r.is_zero() {
                    let better = match &next {
                        None => true,
                        Some((best, bi)) => match r.cmp_abs(best) {
                            std::cmp::Ordering::Less => true,
                            std::cmp::Ordering::Equal => i < *bi,
                            std::cmp::Ordering::Greater => false,
                        },
                    };
                    if better {
                        next = Some((r.abs(), i));
                    }
                }
            }
            if let Some((_, i)) = next {
                p = i;
                continue;
            }
            let entries: Vec<(usize, Int)> = self.rows[p]
                .iter()
                .filter(|(j, _)| *j != c)
                .cloned()
                .collect();
            let mut next: Option<(Int, usize)> = None;
            for (j, a) in entries {
                let (q, r) = a.div_rem(&v);
                self.col_add(p, j, c, &-&q);
                if !r.is_zero() {
                    let better = match &next {
                        None => true,
                        Some((best, bj)) => match r.cmp_abs(best) {
                            std::cmp::Ordering::Less => true,
                            std::cmp::Ordering::Equal => j < *bj,
                            std::cmp::Ordering::Greater => false,
                        },
                    };
                    if better {
                        next = Some((r.abs(), j));
                    }
                }
            }
            if let Some((_, j)) = next {
                c = j;
                continue;
            }
            return (p, c);
        }
    }

    /// Replaces diagonal pivots `a` (at `i`) and `b` (at `j`) by `gcd` and `lcm`.
    fn fix_pair(&mut self, pi: &mut Pivot, pj: &mut Pivot) {
        let (a, b) = (pi.value.clone(), pj.value.clone());
        let (g, x, y) = a.extended_gcd(&b);
        let a1 = a.div_rem(&g).0;
        let b1 = b.div_rem(&g).0;
        let lcm = &a1 * &b;
        let (ri, rj, ci, cj) = (pi.row, pj.row, pi.col, pj.col);
        let neg_b1 = -&b1;
        let neg_y = -&y;
        let one = Int::ONE;
        let minus_one = -&one;
        if let Some(u) = &mut self.u {
            let (nx, ny) = combine_rows(&u[ri], &u[rj], [&x, &y, &neg_b1, &a1]);
            u[ri] = nx;
            u[rj] = ny;
        }
        if let Some(t) = &mut self.u_inv_t {
            let (nx, ny) = combine_rows(&t[ri], &t[rj], [&a1, &b1, &neg_y, &x]);
            t[ri] = nx;
            t[rj] = ny;
        }
        if let Some(vt) = &mut self.v_t {
            let c1 = &neg_y * &b1;
            let c2 = &x * &a1;
            let (nx, ny) = combine_rows(&vt[ci], &vt[cj], [&one, &one, &c1, &c2]);
            vt[ci] = nx;
            vt[cj] = ny;
        }
        if let Some(w) = &mut self.v_inv {
            let c1 = &x * &a1;
            let c2 = &y * &b1;
            let (nx, ny) = combine_rows(&w[ci], &w[cj], [&c1, &c2, &minus_one, &one]);
            w[ci] = nx;
            w[cj] = ny;
        }
        self.rows[ri] = vec![(ci, g.clone())];
        self.rows[rj] = vec![(cj, lcm.clone())];
        pi.value = g;
        pj.value = lcm;
    }

    fn run(mut self) -> Reduction {
        let mut pivots: Vec<Pivot> = Vec::new();
        while let Some((p0, c0)) = self.select_pivot() {
            let (p, c) = self.settle(p0, c0);
            self.row_done[p] = true;
            let value = entry(&self.rows[p], c).cloned().expect("settled pivot");
            pivots.push(Pivot {
                row: p,
                col: c,
                value,
            });
        }
        for k in 0..pivots.len() {
            if pivots[k].value.is_negative() {
                self.negate_row(pivots[k].row);
                pivots[k].value = -&pivots[k].value;
            }
        }
        for i in 0..pivots.len() {
            for j in i + 1..pivots.len() {
                if !pivots[i].value.divides(&pivots[j].value) {
                    let (left, right) = pivots.split_at_mut(j);
                    self.fix_pair(&mut left[i], &mut right[0]);
                }
            }
        }

        let mut row_order: Vec<usize> = pivots.iter().map(|p| p.row).collect();
        let mut is_pivot_row = vec![false; self.nrows];
        for p in &pivots {
            is_pivot_row[p.row] = true;
        }
        row_order.extend((0..self.nrows).filter(|r| !is_pivot_row[*r]));
        let mut col_order: Vec<usize> = pivots.iter().map(|p| p.col).collect();
        let mut is_pivot_col = vec![false; self.ncols];
        for p in &pivots {
            is_pivot_col[p.col] = true;
        }
        col_order.extend((0..self.ncols).filter(|c| !is_pivot_col[*c]));

        let (m, n) = (self.nrows, self.ncols);
        let pick = |data: Vec<SparseRow>, order: &[usize], width: usize| {
            IntMatrix::from_raw(order.len(), width, data).select_rows(order)
        };
        let u = self.u.take().map(|d| pick(d, &row_order, m));
        let u_inv = self
            .u_inv_t
            .take()
            .map(|d| pick(d, &row_order, m).transpose());
        let v = self.v_t.take().map(|d| pick(d, &col_order, n).transpose());
        let v_inv = self.v_inv.take().map(|d| pick(d, &col_order, n));
        Reduction {
            factors: pivots.into_iter().map(|p| p.value).collect(),
            u,
            u_inv,
            v,
            v_inv,
        }
    }
}

pub(crate) fn reduce(m: &IntMatrix, track: Track) -> Reduction {
    Engine::new(m, track).run()
}
