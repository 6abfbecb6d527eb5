use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde_json::{json, Value};

use super::{FinCat, Site};
use crate::error::{Error, Result};

/// A finite topological space given by its list of open sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    points: Vec<String>,
    // Sorted point indices per open; deduplicated, sorted by (size, members).
    opens: Vec<Vec<usize>>,
}

impl FiniteSpace {
    /// Checks that every named point exists; topology axioms are checked by
    /// [`FiniteSpace::validate`].
    pub fn new(points: Vec<String>, opens: Vec<Vec<String>>) -> Result<Self> {
        let index: HashMap<&str, usize> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_str(), i))
            .collect();
        if index.len() != points.len() {
            return Err(Error::input("point listed twice"));
        }
        let mut set = BTreeSet::new();
        for open in opens {
            let mut members = Vec::with_capacity(open.len());
            for p in &open {
                members.push(
                    *index
                        .get(p.as_str())
                        .ok_or_else(|| Error::input(format!("unknown point `{p}` in open set")))?,
                );
            }
            members.sort_unstable();
            members.dedup();
            set.insert(members);
        }
        let mut opens: Vec<Vec<usize>> = set.into_iter().collect();
        opens.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        Ok(FiniteSpace { points, opens })
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn opens(&self) -> &[Vec<usize>] {
        &self.opens
    }

    /// Whole set present, closed under pairwise union and intersection
    /// (the empty set counts as open).
    pub fn validate(&self) -> Result<()> {
        let all: Vec<usize> = (0..self.points.len()).collect();
        let known: BTreeSet<&Vec<usize>> = self.opens.iter().collect();
        let is_open = |s: &Vec<usize>| s.is_empty() || known.contains(s);
        if !is_open(&all) {
            return Err(Error::validation("the whole space is not listed as open"));
        }
        for a in &self.opens {
            for b in &self.opens {
                let (sa, sb): (BTreeSet<usize>, BTreeSet<usize>) =
                    (a.iter().copied().collect(), b.iter().copied().collect());
                let union: Vec<usize> = sa.union(&sb).copied().collect();
                let meet: Vec<usize> = sa.intersection(&sb).copied().collect();
                if !is_open(&union) {
                    return Err(Error::validation(format!(
                        "union of {} and {} is not open",
                        self.label(a),
                        self.label(b)
                    )));
                }
                if !is_open(&meet) {
                    return Err(Error::validation(format!(
                        "intersection of {} and {} is not open",
                        self.label(a),
                        self.label(b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `{a,b}` with point names sorted.
    pub fn label(&self, members: &[usize]) -> String {
        let mut names: Vec<&str> = members.iter().map(|p| self.points[*p].as_str()).collect();
        names.sort_unstable();
        format!("{{{}}}", names.join(","))
    }

    /// Smallest open containing `p`.
    pub fn minimal_open(&self, p: usize) -> Vec<usize> {
        let mut best: Option<&Vec<usize>> = None;
        for o in self.opens.iter().filter(|o| o.contains(&p)) {
            if best.is_none_or(|b| o.len() < b.len()) {
                best = Some(o);
            }
        }
        best.cloned()
            .unwrap_or_else(|| (0..self.points.len()).collect())
    }

    /// Specialization order: `p <= q` iff `p` lies in every open containing `q`.
    pub fn specializes(&self, p: usize, q: usize) -> bool {
        self.opens
            .iter()
            .filter(|o| o.contains(&q))
            .all(|o| o.contains(&p))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let strings = |x: &Value, what: &str| -> Result<Vec<String>> {
            x.as_array()
                .ok_or_else(|| Error::input(format!("{what} must be a list")))?
                .iter()
                .map(|s| {
                    s.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::input(format!("{what} must hold strings")))
                })
                .collect()
        };
        let points = strings(
            v.get("points")
                .ok_or_else(|| Error::input("space needs `points`"))?,
            "points",
        )?;
        let opens = v
            .get("opens")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("space needs `opens`"))?
            .iter()
            .map(|o| strings(o, "open set"))
            .collect::<Result<Vec<_>>>()?;
        FiniteSpace::new(points, opens)
    }

    pub fn to_json(&self) -> Value {
        let opens: Vec<Vec<&str>> = self
            .opens
            .iter()
            .map(|o| o.iter().map(|p| self.points[*p].as_str()).collect())
            .collect();
        json!({"points": self.points, "opens": opens})
    }

    /// Nonempty opens in site-object order, paired with their labels.
    pub fn site_objects(&self) -> Vec<(String, Vec<usize>)> {
        let mut objs: Vec<(String, Vec<usize>)> = self
            .opens
            .iter()
            .filter(|o| !o.is_empty())
            .map(|o| (self.label(o), o.clone()))
            .collect();
        objs.sort();
        objs
    }
}

/// Poset of nonempty opens under inclusion; a sieve covers `U` iff its
/// member opens union to `U`.
pub fn site_from_finite_space(space: &FiniteSpace) -> Result<Site> {
    if space.points.is_empty() {
        return Err(Error::input("empty space"));
    }
    space.validate()?;
    let objs = space.site_objects();
    let labels: Vec<String> = objs.iter().map(|(l, _)| l.clone()).collect();
    let sets: Vec<BTreeSet<usize>> = objs
        .iter()
        .map(|(_, o)| o.iter().copied().collect())
        .collect();
    let cat = Arc::new(FinCat::from_poset(&labels, |i, j| {
        sets[i].is_subset(&sets[j])
    })?);
    // FinCat sorts objects; labels were already sorted, so indices agree.
    debug_assert!(cat.objects() == labels.as_slice());
    let covers = |x: usize, s: &super::Sieve| {
        let union: BTreeSet<usize> = s
            .member_objects(&cat)
            .into_iter()
            .flat_map(|y| sets[y].iter().copied())
            .collect();
        union == sets[x]
    };
    Site::saturated(cat.clone(), covers)
}
