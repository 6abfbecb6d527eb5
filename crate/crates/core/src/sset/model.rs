use std::collections::HashMap;
use std::hash::Hash;

use rayon::prelude::*;

use super::SimplicialSet;
use crate::error::{Error, Result};

/// A combinatorial description of a simplicial set: enumerate simplices per
/// level and say how faces and degeneracies act on them.
pub trait SimplexModel: Sync {
    type Simplex: Clone + Eq + Hash + Send + Sync;

    /// All `k`-simplices, in canonical order.
    fn simplices(&self, k: usize) -> Vec<Self::Simplex>;
    fn face(&self, k: usize, s: &Self::Simplex, i: usize) -> Self::Simplex;
    fn degeneracy(&self, k: usize, s: &Self::Simplex, i: usize) -> Self::Simplex;
    fn label(&self, k: usize, s: &Self::Simplex) -> String;
}

/// Materializes a model into explicit tables up to `dim_cap`.
pub fn build_from_model<M: SimplexModel>(model: &M, dim_cap: usize) -> Result<SimplicialSet> {
    let levels: Vec<Vec<M::Simplex>> = (0..=dim_cap).map(|k| model.simplices(k)).collect();
    let index: Vec<HashMap<&M::Simplex, usize>> = levels
        .iter()
        .map(|lv| lv.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();
    for (k, lv) in index.iter().enumerate() {
        if lv.len() != levels[k].len() {
            return Err(Error::invariant(format!(
                "model lists a repeated simplex at level {k}"
            )));
        }
    }
    let lookup = |k: usize, s: &M::Simplex| -> Result<usize> {
        index[k].get(s).copied().ok_or_else(|| {
            Error::invariant(format!(
                "model operator leaves the enumerated {k}-simplices"
            ))
        })
    };
    let mut faces = Vec::with_capacity(dim_cap + 1);
    let mut degeneracies = Vec::with_capacity(dim_cap + 1);
    for k in 0..=dim_cap {
        let fc: Vec<usize> = if k == 0 {
            Vec::new()
        } else {
            let per: Result<Vec<Vec<usize>>> = levels[k]
                .par_iter()
                .map(|s| {
                    (0..=k)
                        .map(|i| lookup(k - 1, &model.face(k, s, i)))
                        .collect()
                })
                .collect();
            per?.into_iter().flatten().collect()
        };
        faces.push(fc);
        let dg: Vec<usize> = if k == dim_cap {
            Vec::new()
        } else {
            let per: Result<Vec<Vec<usize>>> = levels[k]
                .par_iter()
                .map(|s| {
                    (0..=k)
                        .map(|i| lookup(k + 1, &model.degeneracy(k, s, i)))
                        .collect()
                })
                .collect();
            per?.into_iter().flatten().collect()
        };
        degeneracies.push(dg);
    }
    let labels = levels
        .iter()
        .enumerate()
        .map(|(k, lv)| lv.iter().map(|s| model.label(k, s)).collect())
        .collect();
    SimplicialSet::from_tables(dim_cap, labels, faces, degeneracies)
}

/// Weakly increasing vertex tuples in `0..=n`.
pub(crate) struct StandardSimplex {
    pub n: usize,
}

impl SimplexModel for StandardSimplex {
    type Simplex = Vec<usize>;

    fn simplices(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k + 1);
        fn rec(n: usize, len: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == len {
                out.push(cur.clone());
                return;
            }
            for v in lo..=n {
                cur.push(v);
                rec(n, len, v, cur, out);
                cur.pop();
            }
        }
        rec(self.n, k + 1, 0, &mut cur, &mut out);
        out
    }

    fn face(&self, _k: usize, s: &Vec<usize>, i: usize) -> Vec<usize> {
        let mut f = s.clone();
        f.remove(i);
        f
    }

    fn degeneracy(&self, _k: usize, s: &Vec<usize>, i: usize) -> Vec<usize> {
        let mut d = s.clone();
        d.insert(i, s[i]);
        d
    }

    fn label(&self, _k: usize, s: &Vec<usize>) -> String {
        s.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}
