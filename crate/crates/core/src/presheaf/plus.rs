//! The plus construction on set presheaves: at `X`, the colimit over covering
//! sieves of `X` (ordered by reverse inclusion) of the compatible families.
//!
//! The colimit is formed as classes of pairs `(covering sieve, family)` under
//! the equivalence generated by restriction. A class is represented by its
//! least pair: least sieve by `(size, members)`, then least family.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::sets::{sieve_sections, SetPresheaf, SetPresheafMap};
use super::{same, PresheafMap};
use crate::catsite::{Sieve, Site};
use crate::error::{Error, Result};

struct Local {
    sieves: Vec<Sieve>,
    sections: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    offsets: Vec<usize>,
    class_of: Vec<usize>,
    reps: Vec<(usize, usize)>,
}

impl Local {
    fn class(&self, sieve: usize, family: &[usize]) -> Option<usize> {
        self.index[sieve]
            .get(family)
            .map(|s| self.class_of[self.offsets[sieve] + s])
    }

    fn sieve_index(&self, s: &Sieve) -> Option<usize> {
        self.sieves.iter().position(|t| t == s)
    }
}

struct Plus {
    locals: Vec<Local>,
    presheaf: SetPresheaf,
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// Restricts a family on `from` to the smaller sieve `to`.
fn restrict_family(from: &Sieve, to: &Sieve, family: &[usize]) -> Vec<usize> {
    to.members
        .iter()
        .map(|f| family[from.members.binary_search(f).expect("sub-sieve")])
        .collect()
}

fn local(site: &Site, g: &SetPresheaf, x: usize) -> Local {
    let sieves = site.coverings(x).to_vec();
    let sections: Vec<Vec<Vec<usize>>> = sieves.iter().map(|s| sieve_sections(g, s)).collect();
    let index: Vec<HashMap<Vec<usize>, usize>> = sections
        .iter()
        .map(|ss| ss.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let mut offsets = Vec::with_capacity(sieves.len());
    let mut total = 0;
    for ss in &sections {
        offsets.push(total);
        total += ss.len();
    }
    let mut parent: Vec<usize> = (0..total).collect();
    for (i, big) in sieves.iter().enumerate() {
        for (j, small) in sieves.iter().enumerate() {
            if i == j || small.len() >= big.len() || !small.is_subset(big) {
                continue;
            }
            for (a, fam) in sections[i].iter().enumerate() {
                let b = index[j][&restrict_family(big, small, fam)];
                let (ra, rb) = (
                    find(&mut parent, offsets[i] + a),
                    find(&mut parent, offsets[j] + b),
                );
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut class_of = vec![usize::MAX; total];
    let mut root_class: HashMap<usize, usize> = HashMap::new();
    let mut reps = Vec::new();
    for (i, ss) in sections.iter().enumerate() {
        for a in 0..ss.len() {
            let node = offsets[i] + a;
            let root = find(&mut parent, node);
            let next = reps.len();
            let c = *root_class.entry(root).or_insert(next);
            if c == next {
                reps.push((i, a));
            }
            class_of[node] = c;
        }
    }
    Local {
        sieves,
        sections,
        index,
        offsets,
        class_of,
        reps,
    }
}

fn plus(site: &Site, g: &SetPresheaf) -> Result<Plus> {
    if !same(site.category(), g.base()) {
        return Err(Error::BaseMismatch(
            "presheaf is not on the site's category".into(),
        ));
    }
    let cat = site.category().clone();
    let locals: Vec<Local> = (0..cat.object_count())
        .into_par_iter()
        .map(|x| local(site, g, x))
        .collect();
    let mut values = Vec::with_capacity(locals.len());
    for l in &locals {
        let mut labels: Vec<String> = l
            .reps
            .iter()
            .map(|(s, a)| {
                let fam = &l.sections[*s][*a];
                let parts: Vec<&str> = l.sieves[*s]
                    .members
                    .iter()
                    .zip(fam)
                    .map(|(f, z)| g.value(cat.src(*f))[*z].as_str())
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            labels = l
                .reps
                .iter()
                .zip(labels)
                .map(|((s, _), lab)| format!("{}{lab}", l.sieves[*s].label(&cat)))
                .collect();
        }
        values.push(labels);
    }
    let mut actions = Vec::with_capacity(cat.morphism_count());
    for (h, m) in cat.morphisms().iter().enumerate() {
        let (lx, ly) = (&locals[m.tgt], &locals[m.src]);
        let mut table = Vec::with_capacity(lx.reps.len());
        for (s, a) in &lx.reps {
            let big = &lx.sieves[*s];
            let pulled = big.pullback(&cat, h);
            let j = ly.sieve_index(&pulled).ok_or_else(|| {
                Error::validation(format!(
                    "pullback of a covering sieve along `{}` is not covering",
                    m.id
                ))
            })?;
            let fam = &lx.sections[*s][*a];
            let restricted: Vec<usize> = pulled
                .members
                .iter()
                .map(|u| {
                    fam[big
                        .members
                        .binary_search(&cat.compose(h, *u))
                        .expect("pulled back member")]
                })
                .collect();
            table.push(
                ly.class(j, &restricted)
                    .ok_or_else(|| Error::invariant("restricted family is not compatible"))?,
            );
        }
        actions.push(table);
    }
    let presheaf = SetPresheaf::new(cat, values, actions)?;
    Ok(Plus { locals, presheaf })
}

/// One application of the plus construction, with its unit `g -> γ′g`.
pub fn gamma_prime_set(site: &Site, g: &SetPresheaf) -> Result<(SetPresheaf, SetPresheafMap)> {
    let p = plus(site, g)?;
    let cat = site.category();
    let mut components = Vec::with_capacity(cat.object_count());
    for (x, l) in p.locals.iter().enumerate() {
        let max = Sieve::maximal(cat, x);
        let s = l.sieve_index(&max).ok_or_else(|| {
            Error::validation(format!(
                "maximal sieve on `{}` is not covering",
                cat.object(x)
            ))
        })?;
        let comp = (0..g.value(x).len())
            .map(|z| {
                let fam: Vec<usize> = max.members.iter().map(|f| g.action(*f)[z]).collect();
                l.class(s, &fam)
                    .ok_or_else(|| Error::invariant("unit family is not compatible"))
            })
            .collect::<Result<Vec<_>>>()?;
        components.push(comp);
    }
    let unit = SetPresheafMap::new(
        Arc::new(g.clone()),
        Arc::new(p.presheaf.clone()),
        components,
    )?;
    Ok((p.presheaf, unit))
}

/// `γ′` on a map of set presheaves.
pub fn gamma_prime_map(site: &Site, m: &SetPresheafMap) -> Result<SetPresheafMap> {
    let (ps, pt) = (plus(site, m.source())?, plus(site, m.target())?);
    let cat = site.category();
    let mut components = Vec::with_capacity(cat.object_count());
    for (x, (ls, lt)) in ps.locals.iter().zip(&pt.locals).enumerate() {
        let comp = ls
            .reps
            .iter()
            .map(|(s, a)| {
                let fam: Vec<usize> = ls.sieves[*s]
                    .members
                    .iter()
                    .zip(&ls.sections[*s][*a])
                    .map(|(f, z)| m.component(cat.src(*f))[*z])
                    .collect();
                lt.class(*s, &fam).ok_or_else(|| {
                    Error::invariant(format!(
                        "image family at `{}` is not compatible",
                        cat.object(x)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        components.push(comp);
    }
    SetPresheafMap::new(Arc::new(ps.presheaf), Arc::new(pt.presheaf), components)
}

/// `γ′γ′g` with the composite unit; the result is checked to be a sheaf.
pub fn sheafify_set(site: &Site, g: &SetPresheaf) -> Result<(SetPresheaf, SetPresheafMap)> {
    let (once, u1) = gamma_prime_set(site, g)?;
    let (twice, u2) = gamma_prime_set(site, &once)?;
    let report = is_sheaf_set(site, &twice)?;
    if !report.is_sheaf {
        return Err(Error::invariant(format!(
            "sheafification is not a sheaf: {report:?}"
        )));
    }
    let unit = SetPresheafMap::new(Arc::new(g.clone()), Arc::new(twice.clone()), {
        (0..g.base().object_count())
            .map(|x| {
                u1.component(x)
                    .iter()
                    .map(|z| u2.component(x)[*z])
                    .collect()
            })
            .collect()
    })?;
    Ok((twice, unit))
}

pub fn sheafify_map(site: &Site, m: &SetPresheafMap) -> Result<SetPresheafMap> {
    gamma_prime_map(site, &gamma_prime_map(site, m)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafFailure {
    pub object: String,
    pub sieve: String,
    /// Size of the value at the object.
    pub value: usize,
    /// Number of compatible families over the sieve.
    pub sections: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafReport {
    pub is_sheaf: bool,
    pub failure: Option<SheafFailure>,
}

/// Restriction to the families over every covering sieve must be bijective.
pub fn is_sheaf_set(site: &Site, g: &SetPresheaf) -> Result<SheafReport> {
    if !same(site.category(), g.base()) {
        return Err(Error::BaseMismatch(
            "presheaf is not on the site's category".into(),
        ));
    }
    let cat = site.category();
    for x in 0..cat.object_count() {
        for s in site.coverings(x) {
            let families = sieve_sections(g, s);
            let mut images: Vec<Vec<usize>> = (0..g.value(x).len())
                .map(|z| s.members.iter().map(|f| g.action(*f)[z]).collect())
                .collect();
            images.sort();
            images.dedup();
            if images.len() != g.value(x).len() || families.len() != g.value(x).len() {
                return Ok(SheafReport {
                    is_sheaf: false,
                    failure: Some(SheafFailure {
                        object: cat.object(x).to_string(),
                        sieve: s.label(cat),
                        value: g.value(x).len(),
                        sections: families.len(),
                    }),
                });
            }
        }
    }
    Ok(SheafReport {
        is_sheaf: true,
        failure: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Pi0Certificate {
    pub certified: bool,
    /// What the certificate covers.
    pub scope: &'static str,
    pub objects: Vec<Pi0Entry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Pi0Entry {
    pub object: String,
    pub source: usize,
    pub target: usize,
    pub bijective: bool,
}

pub const PI0_SCOPE: &str =
    "pi0 only: the map induces a bijection of sheafified pi0; higher homotopy sheaves are not checked";

/// Sheafifies `π₀` of both sides and checks the induced map is a bijection.
pub fn illusie_pi0_certificate(site: &Site, m: &PresheafMap) -> Result<Pi0Certificate> {
    m.validate()?;
    let p = m.pi0()?;
    let sheafified = sheafify_map(site, &p)?;
    let cat = site.category();
    let objects: Vec<Pi0Entry> = (0..cat.object_count())
        .map(|x| {
            let comp = sheafified.component(x);
            let target = sheafified.target().value(x).len();
            let mut seen = vec![false; target];
            let bijective = comp.len() == target
                && comp.iter().all(|y| !std::mem::replace(&mut seen[*y], true));
            Pi0Entry {
                object: cat.object(x).to_string(),
                source: comp.len(),
                target,
                bijective,
            }
        })
        .collect();
    Ok(Pi0Certificate {
        certified: objects.iter().all(|e| e.bijective),
        scope: PI0_SCOPE,
        objects,
    })
}
