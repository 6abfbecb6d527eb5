//! Dimension-capped simplicial sets with explicit face and degeneracy tables.
//!
//! Every simplex up to the cap is materialized, degenerate ones included.
//! Homology computed from a set with cap `D` is only trustworthy in degrees
//! `<= D - 1`.

mod generators;
pub mod json;
mod map;
mod model;

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub use generators::{degeneracy_label, GeneratorSet, NormalForm};
pub use map::{MapViolation, SimplicialMap};
pub use model::{build_from_model, SimplexModel};

#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialSet {
    dim_cap: usize,
    labels: Vec<Vec<String>>,
    // faces[k][x * (k + 1) + i] = d_i x, empty at k = 0.
    faces: Vec<Vec<usize>>,
    // degeneracies[k][x * (k + 1) + i] = s_i x, empty at k = dim_cap.
    degeneracies: Vec<Vec<usize>>,
    degenerate: Vec<Vec<bool>>,
}

/// First simplicial identity found to fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SsetViolation {
    /// `d_i d_j != d_{j-1} d_i` for `i < j` on a `k`-simplex.
    FaceFace {
        k: usize,
        simplex: String,
        i: usize,
        j: usize,
    },
    /// A mixed face/degeneracy identity fails for `d_i s_j` on a `k`-simplex.
    FaceDegeneracy {
        k: usize,
        simplex: String,
        i: usize,
        j: usize,
    },
    /// `s_i s_j != s_{j+1} s_i` for `i <= j` on a `k`-simplex.
    DegeneracyDegeneracy {
        k: usize,
        simplex: String,
        i: usize,
        j: usize,
    },
}

impl fmt::Display for SsetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SsetViolation::FaceFace { k, simplex, i, j } => {
                write!(f, "d{i} d{j} != d{} d{i} on {k}-simplex `{simplex}`", j - 1)
            }
            SsetViolation::FaceDegeneracy { k, simplex, i, j } => {
                write!(f, "identity for d{i} s{j} fails on {k}-simplex `{simplex}`")
            }
            SsetViolation::DegeneracyDegeneracy { k, simplex, i, j } => {
                write!(f, "s{i} s{j} != s{} s{i} on {k}-simplex `{simplex}`", j + 1)
            }
        }
    }
}

/// Connected components: the vertex quotient generated by 1-simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Component of each vertex, numbered in order of first vertex.
    pub vertex_component: Vec<usize>,
}

impl SimplicialSet {
    /// Assembles a set from raw tables, checking shapes and index ranges only.
    pub fn from_tables(
        dim_cap: usize,
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<usize>>,
        degeneracies: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if labels.len() != dim_cap + 1
            || faces.len() != dim_cap + 1
            || degeneracies.len() != dim_cap + 1
        {
            return Err(Error::input(format!(
                "tables must cover levels 0..={dim_cap}"
            )));
        }
        for k in 0..=dim_cap {
            let n = labels[k].len();
            let face_len = if k == 0 { 0 } else { n * (k + 1) };
            if faces[k].len() != face_len {
                return Err(Error::input(format!(
                    "face table at level {k} has wrong size"
                )));
            }
            if k > 0 && faces[k].iter().any(|y| *y >= labels[k - 1].len()) {
                return Err(Error::input(format!("face at level {k} out of range")));
            }
            let deg_len = if k == dim_cap { 0 } else { n * (k + 1) };
            if degeneracies[k].len() != deg_len {
                return Err(Error::input(format!(
                    "degeneracy table at level {k} has wrong size"
                )));
            }
            if k < dim_cap && degeneracies[k].iter().any(|y| *y >= labels[k + 1].len()) {
                return Err(Error::input(format!(
                    "degeneracy at level {k} out of range"
                )));
            }
        }
        let mut set = SimplicialSet {
            dim_cap,
            labels,
            faces,
            degeneracies,
            degenerate: Vec::new(),
        };
        set.degenerate = (0..=dim_cap)
            .map(|k| {
                (0..set.count(k))
                    .map(|x| set.degeneracy_witness(k, x).is_some())
                    .collect()
            })
            .collect();
        Ok(set)
    }

    pub fn empty(dim_cap: usize) -> Self {
        let idx = vec![Vec::new(); dim_cap + 1];
        SimplicialSet::from_tables(dim_cap, vec![Vec::new(); dim_cap + 1], idx.clone(), idx)
            .expect("empty tables")
    }

    /// A discrete set: one vertex per label, everything above level 0 degenerate.
    pub fn discrete(labels: &[String], dim_cap: usize) -> Self {
        GeneratorSet::discrete(labels)
            .expand(dim_cap)
            .expect("discrete expansion")
    }

    pub fn point(dim_cap: usize) -> Self {
        SimplicialSet::discrete(&["*".to_string()], dim_cap)
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    pub fn count(&self, k: usize) -> usize {
        self.labels[k].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn label(&self, k: usize, x: usize) -> &str {
        &self.labels[k][x]
    }

    pub fn labels(&self, k: usize) -> &[String] {
        &self.labels[k]
    }

    pub fn face(&self, k: usize, x: usize, i: usize) -> usize {
        debug_assert!(k >= 1 && i <= k);
        self.faces[k][x * (k + 1) + i]
    }

    pub fn degeneracy(&self, k: usize, x: usize, i: usize) -> usize {
        debug_assert!(k < self.dim_cap && i <= k);
        self.degeneracies[k][x * (k + 1) + i]
    }

    pub fn is_degenerate(&self, k: usize, x: usize) -> bool {
        self.degenerate[k][x]
    }

    /// Some `i` with `s_i d_i x = x`, if any.
    fn degeneracy_witness(&self, k: usize, x: usize) -> Option<usize> {
        if k == 0 {
            return None;
        }
        (0..k).find(|&i| self.degeneracy(k - 1, self.face(k, x, i), i) == x)
    }

    pub fn nondegenerate(&self, k: usize) -> Vec<usize> {
        (0..self.count(k))
            .filter(|x| !self.degenerate[k][*x])
            .collect()
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        self.degenerate
            .iter()
            .map(|lv| lv.iter().filter(|d| !**d).count())
            .collect()
    }

    /// Label lookup table for one level.
    pub fn index(&self, k: usize) -> HashMap<&str, usize> {
        self.labels[k]
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect()
    }

    /// Restricts to levels `0..=cap`.
    pub fn truncate(&self, cap: usize) -> Result<Self> {
        if cap > self.dim_cap {
            return Err(Error::CapMismatch(format!(
                "cannot raise cap {} to {cap}",
                self.dim_cap
            )));
        }
        let mut degeneracies = self.degeneracies[..=cap].to_vec();
        degeneracies[cap].clear();
        Ok(SimplicialSet {
            dim_cap: cap,
            labels: self.labels[..=cap].to_vec(),
            faces: self.faces[..=cap].to_vec(),
            degeneracies,
            degenerate: self.degenerate[..=cap].to_vec(),
        })
    }

    /// Checks every simplicial identity whose two sides lie within the cap.
    pub fn validate(&self) -> Result<(), SsetViolation> {
        let cap = self.dim_cap;
        let found = (0..=cap).into_par_iter().find_map_first(|k| {
            for x in 0..self.count(k) {
                if let Some(v) = self.check_simplex(k, x) {
                    return Some(v);
                }
            }
            None
        });
        match found {
            Some(v) => Err(v),
            None => Ok(()),
        }
    }

    fn check_simplex(&self, k: usize, x: usize) -> Option<SsetViolation> {
        let cap = self.dim_cap;
        let name = || self.labels[k][x].clone();
        if k >= 2 {
            for j in 1..=k {
                for i in 0..j {
                    let lhs = self.face(k - 1, self.face(k, x, j), i);
                    let rhs = self.face(k - 1, self.face(k, x, i), j - 1);
                    if lhs != rhs {
                        return Some(SsetViolation::FaceFace {
                            k,
                            simplex: name(),
                            i,
                            j,
                        });
                    }
                }
            }
        }
        if k < cap {
            for j in 0..=k {
                let sx = self.degeneracy(k, x, j);
                for i in 0..=k + 1 {
                    let lhs = self.face(k + 1, sx, i);
                    let rhs = if i == j || i == j + 1 {
                        Some(x)
                    } else if k == 0 {
                        None
                    } else if i < j {
                        Some(self.degeneracy(k - 1, self.face(k, x, i), j - 1))
                    } else {
                        Some(self.degeneracy(k - 1, self.face(k, x, i - 1), j))
                    };
                    if let Some(rhs) = rhs {
                        if lhs != rhs {
                            return Some(SsetViolation::FaceDegeneracy {
                                k: k + 1,
                                simplex: name(),
                                i,
                                j,
                            });
                        }
                    }
                }
            }
        }
        if k + 2 <= cap {
            for j in 0..=k {
                for i in 0..=j {
                    let lhs = self.degeneracy(k + 1, self.degeneracy(k, x, j), i);
                    let rhs = self.degeneracy(k + 1, self.degeneracy(k, x, i), j + 1);
                    if lhs != rhs {
                        return Some(SsetViolation::DegeneracyDegeneracy {
                            k,
                            simplex: name(),
                            i,
                            j,
                        });
                    }
                }
            }
        }
        None
    }

    pub fn pi0(&self) -> Components {
        let n = self.count(0);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        if self.dim_cap >= 1 {
            for e in 0..self.count(1) {
                let (a, b) = (
                    find(&mut parent, self.face(1, e, 0)),
                    find(&mut parent, self.face(1, e, 1)),
                );
                if a != b {
                    let (lo, hi) = (a.min(b), a.max(b));
                    parent[hi] = lo;
                }
            }
        }
        let mut numbering: HashMap<usize, usize> = HashMap::new();
        let mut vertex_component = Vec::with_capacity(n);
        for v in 0..n {
            let root = find(&mut parent, v);
            let next = numbering.len();
            vertex_component.push(*numbering.entry(root).or_insert(next));
        }
        Components {
            count: numbering.len(),
            vertex_component,
        }
    }

    /// Levelwise product; faces and degeneracies act componentwise.
    pub fn product(&self, other: &SimplicialSet) -> Result<SimplicialSet> {
        if self.dim_cap != other.dim_cap {
            return Err(Error::CapMismatch(format!(
                "product of caps {} and {}",
                self.dim_cap, other.dim_cap
            )));
        }
        let cap = self.dim_cap;
        let mut labels = Vec::with_capacity(cap + 1);
        let mut faces = Vec::with_capacity(cap + 1);
        let mut degeneracies = Vec::with_capacity(cap + 1);
        for k in 0..=cap {
            let (na, nb) = (self.count(k), other.count(k));
            let mut lv = Vec::with_capacity(na * nb);
            for x in 0..na {
                for y in 0..nb {
                    lv.push(format!("({},{})", self.labels[k][x], other.labels[k][y]));
                }
            }
            labels.push(lv);
            let mut fc = Vec::new();
            if k > 0 {
                let nb_lower = other.count(k - 1);
                fc.reserve(na * nb * (k + 1));
                for x in 0..na {
                    for y in 0..nb {
                        for i in 0..=k {
                            fc.push(self.face(k, x, i) * nb_lower + other.face(k, y, i));
                        }
                    }
                }
            }
            faces.push(fc);
            let mut dg = Vec::new();
            if k < cap {
                let nb_upper = other.count(k + 1);
                for x in 0..na {
                    for y in 0..nb {
                        for i in 0..=k {
                            dg.push(
                                self.degeneracy(k, x, i) * nb_upper + other.degeneracy(k, y, i),
                            );
                        }
                    }
                }
            }
            degeneracies.push(dg);
        }
        SimplicialSet::from_tables(cap, labels, faces, degeneracies)
    }

    /// Levelwise tagged union; an empty list needs an explicit cap.
    pub fn disjoint_union(parts: &[SimplicialSet], dim_cap: usize) -> Result<SimplicialSet> {
        if let Some(bad) = parts.iter().find(|p| p.dim_cap != dim_cap) {
            return Err(Error::CapMismatch(format!(
                "union part has cap {}, expected {dim_cap}",
                bad.dim_cap
            )));
        }
        let mut labels = vec![Vec::new(); dim_cap + 1];
        let mut faces = vec![Vec::new(); dim_cap + 1];
        let mut degeneracies = vec![Vec::new(); dim_cap + 1];
        let mut offsets = vec![0usize; dim_cap + 1];
        for (tag, part) in parts.iter().enumerate() {
            for k in 0..=dim_cap {
                labels[k].extend(part.labels[k].iter().map(|l| format!("{tag}:{l}")));
                if k > 0 {
                    let off = offsets[k - 1];
                    faces[k].extend(part.faces[k].iter().map(|y| y + off));
                }
                if k < dim_cap {
                    let off = offsets[k + 1];
                    degeneracies[k].extend(part.degeneracies[k].iter().map(|y| y + off));
                }
            }
            for (k, off) in offsets.iter_mut().enumerate() {
                *off += part.count(k);
            }
        }
        SimplicialSet::from_tables(dim_cap, labels, faces, degeneracies)
    }

    /// The standard `n`-simplex: `k`-simplices are weakly increasing `(k+1)`-tuples in `0..=n`.
    pub fn standard_simplex(n: usize, dim_cap: usize) -> SimplicialSet {
        build_from_model(&model::StandardSimplex { n }, dim_cap)
            .expect("standard simplex model is closed")
    }
}

impl fmt::Debug for SimplicialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialSet")
            .field("dim_cap", &self.dim_cap)
            .field("counts", &self.counts())
            .field("nondegenerate", &self.nondegenerate_counts())
            .finish()
    }
}
