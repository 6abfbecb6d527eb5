use std::fmt;
use std::sync::Arc;

use super::SimplicialSet;
use crate::error::{Error, Result};

/// A levelwise assignment between two simplicial sets of equal cap.
#[derive(Clone)]
pub struct SimplicialMap {
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
    levels: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapViolation {
    Face { k: usize, simplex: String, i: usize },
    Degeneracy { k: usize, simplex: String, i: usize },
}

impl fmt::Display for MapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapViolation::Face { k, simplex, i } => write!(
                f,
                "map does not commute with d{i} on {k}-simplex `{simplex}`"
            ),
            MapViolation::Degeneracy { k, simplex, i } => {
                write!(
                    f,
                    "map does not commute with s{i} on {k}-simplex `{simplex}`"
                )
            }
        }
    }
}

impl SimplicialMap {
    /// Checks shapes and ranges; commutation is checked by [`SimplicialMap::validate`].
    pub fn new(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        levels: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if source.dim_cap() != target.dim_cap() {
            return Err(Error::CapMismatch(format!(
                "map between caps {} and {}",
                source.dim_cap(),
                target.dim_cap()
            )));
        }
        if levels.len() != source.dim_cap() + 1 {
            return Err(Error::input("map must assign every level up to the cap"));
        }
        for (k, lv) in levels.iter().enumerate() {
            if lv.len() != source.count(k) || lv.iter().any(|y| *y >= target.count(k)) {
                return Err(Error::input(format!(
                    "map assignment at level {k} has the wrong shape"
                )));
            }
        }
        Ok(SimplicialMap {
            source,
            target,
            levels,
        })
    }

    /// Extends an assignment on vertices-and-up from given images of
    /// nondegenerate simplices; degenerate simplices follow their degeneracies.
    pub fn from_nondegenerate(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        image: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self> {
        let cap = source.dim_cap();
        let mut levels: Vec<Vec<usize>> = Vec::with_capacity(cap + 1);
        for k in 0..=cap {
            let mut lv = Vec::with_capacity(source.count(k));
            for x in 0..source.count(k) {
                let y = match image(k, x) {
                    Some(y) => y,
                    None if source.is_degenerate(k, x) => {
                        let i = (0..k)
                            .find(|&i| source.degeneracy(k - 1, source.face(k, x, i), i) == x)
                            .expect("degenerate simplex has a witness");
                        let lower = levels[k - 1][source.face(k, x, i)];
                        target.degeneracy(k - 1, lower, i)
                    }
                    None => {
                        return Err(Error::input(format!(
                            "no image given for nondegenerate {k}-simplex `{}`",
                            source.label(k, x)
                        )))
                    }
                };
                if y >= target.count(k) {
                    return Err(Error::input(format!(
                        "image of `{}` out of range",
                        source.label(k, x)
                    )));
                }
                lv.push(y);
            }
            levels.push(lv);
        }
        SimplicialMap::new(source, target, levels)
    }

    pub fn identity(a: Arc<SimplicialSet>) -> Self {
        let levels = (0..=a.dim_cap())
            .map(|k| (0..a.count(k)).collect())
            .collect();
        SimplicialMap {
            source: a.clone(),
            target: a,
            levels,
        }
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn apply(&self, k: usize, x: usize) -> usize {
        self.levels[k][x]
    }

    pub fn level(&self, k: usize) -> &[usize] {
        &self.levels[k]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap> {
        if !Arc::ptr_eq(&self.target, &other.source) && *self.target != *other.source {
            return Err(Error::input("composing maps with mismatched middle object"));
        }
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(k, lv)| lv.iter().map(|x| other.levels[k][*x]).collect())
            .collect();
        Ok(SimplicialMap {
            source: self.source.clone(),
            target: other.target.clone(),
            levels,
        })
    }

    /// Same assignment tables (endpoints compared by value).
    pub fn same_tables(&self, other: &SimplicialMap) -> bool {
        self.levels == other.levels
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target
            && self
                .levels
                .iter()
                .all(|lv| lv.iter().enumerate().all(|(i, y)| i == *y))
    }

    pub fn is_injective(&self) -> bool {
        self.levels.iter().all(|lv| {
            let mut seen = lv.clone();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn validate(&self) -> Result<(), MapViolation> {
        let (a, b) = (&*self.source, &*self.target);
        let cap = a.dim_cap();
        for k in 0..=cap {
            for x in 0..a.count(k) {
                let fx = self.levels[k][x];
                if k > 0 {
                    for i in 0..=k {
                        if self.levels[k - 1][a.face(k, x, i)] != b.face(k, fx, i) {
                            return Err(MapViolation::Face {
                                k,
                                simplex: a.label(k, x).to_string(),
                                i,
                            });
                        }
                    }
                }
                if k < cap {
                    for i in 0..=k {
                        if self.levels[k + 1][a.degeneracy(k, x, i)] != b.degeneracy(k, fx, i) {
                            return Err(MapViolation::Degeneracy {
                                k,
                                simplex: a.label(k, x).to_string(),
                                i,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SimplicialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialMap")
            .field("source", &self.source)
            .field("target", &self.target)
            .finish_non_exhaustive()
    }
}
