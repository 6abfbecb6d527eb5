use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{map_realizations, realize};
use crate::catsite::{all_sieves, FinCat, Functor, Sieve};
use crate::error::{Error, Result};
use crate::presheaf::{same, sieve_sections, CovariantDiagram, Presheaf, SetPresheaf};
use crate::sset::SimplicialMap;

/// An idempotent endofunctor `P` with a natural transformation `ψ: P -> I`
/// that is the identity on the image of `P`.
#[derive(Clone, Debug)]
pub struct ProjectorData {
    pub cat: Arc<FinCat>,
    pub p: Functor,
    /// `psi[x]: P(x) -> x`.
    pub psi: Vec<usize>,
}

impl ProjectorData {
    pub fn new(cat: Arc<FinCat>, p: Functor, psi: Vec<usize>) -> Result<Self> {
        let d = ProjectorData { cat, p, psi };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let (c, p) = (&*self.cat, &self.p);
        if !same(&self.cat, &p.source) || !same(&self.cat, &p.target) {
            return Err(Error::validation(
                "P must be an endofunctor of the category",
            ));
        }
        p.validate()?;
        if self.psi.len() != c.object_count() {
            return Err(Error::validation("psi needs one component per object"));
        }
        for x in 0..c.object_count() {
            if p.on_object(p.on_object(x)) != p.on_object(x) {
                return Err(Error::validation(format!(
                    "P is not idempotent on `{}`",
                    c.object(x)
                )));
            }
            let s = self.psi[x];
            if s >= c.morphism_count() || c.src(s) != p.on_object(x) || c.tgt(s) != x {
                return Err(Error::validation(format!(
                    "psi at `{}` must go P(x) -> x",
                    c.object(x)
                )));
            }
            if p.on_object(x) == x && !c.is_identity(s) {
                return Err(Error::validation(format!(
                    "psi at `{}` in the image is not the identity",
                    c.object(x)
                )));
            }
        }
        for (f, m) in c.morphisms().iter().enumerate() {
            if p.on_morphism(p.on_morphism(f)) != p.on_morphism(f) {
                return Err(Error::validation(format!(
                    "P is not idempotent on `{}`",
                    m.id
                )));
            }
            if c.compose(self.psi[m.tgt], p.on_morphism(f)) != c.compose(f, self.psi[m.src]) {
                return Err(Error::validation(format!(
                    "psi is not natural along `{}`",
                    m.id
                )));
            }
        }
        Ok(())
    }

    /// Inclusion of the image subcategory `D` (the objects fixed by `P`).
    pub fn image(&self) -> Result<Functor> {
        let keep: Vec<usize> = (0..self.cat.object_count())
            .filter(|x| self.p.on_object(*x) == *x)
            .collect();
        Functor::inclusion(self.cat.clone(), &keep)
    }

    /// `P` with its target cut down to `D`.
    pub fn corestriction(&self, inc: &Functor) -> Result<Functor> {
        let objs: HashMap<usize, usize> = inc
            .objects
            .iter()
            .enumerate()
            .map(|(d, x)| (*x, d))
            .collect();
        let mors: HashMap<usize, usize> = inc
            .morphisms
            .iter()
            .enumerate()
            .map(|(d, f)| (*f, d))
            .collect();
        let lookup = |m: &HashMap<usize, usize>, k: usize| {
            m.get(&k)
                .copied()
                .ok_or_else(|| Error::invariant("P leaves its image"))
        };
        let objects = self
            .p
            .objects
            .iter()
            .map(|x| lookup(&objs, *x))
            .collect::<Result<_>>()?;
        let morphisms = self
            .p
            .morphisms
            .iter()
            .map(|f| lookup(&mors, *f))
            .collect::<Result<_>>()?;
        Functor::new(self.cat.clone(), inc.source.clone(), objects, morphisms)
    }
}

/// The maps `a: Re_C(P*F, G) -> Re_D(F, G|D)` and `b: Re_D(F, G|D) -> Re_C(P*F, G)`.
pub fn projector_maps(
    d: &ProjectorData,
    f: &CovariantDiagram,
    g: &Presheaf,
    dim_cap: usize,
) -> Result<(SimplicialMap, SimplicialMap)> {
    d.validate()?;
    let inc = d.image()?;
    if !same(&inc.source, f.base()) {
        return Err(Error::BaseMismatch("F must live on the image of P".into()));
    }
    if !same(&d.cat, g.base()) {
        return Err(Error::BaseMismatch(
            "G must live on the projector's category".into(),
        ));
    }
    let pstar = d.corestriction(&inc)?;
    let fc = f.pullback(&pstar)?;
    let gd = g.pullback(&inc)?;
    let re_c = realize(&d.cat, &fc, g, dim_cap)?;
    let re_d = realize(&inc.source, f, &gd, dim_cap)?;
    let cat = d.cat.clone();
    let a = map_realizations(
        &re_c,
        &re_d,
        |_, c| c.iter().map(|m| pstar.on_morphism(*m)).collect(),
        |_, _, x| x,
        |k, c, y| g.action(d.psi[cat.chain_end(k, c)]).apply(k, y),
    )?;
    let b = map_realizations(
        &re_d,
        &re_c,
        |_, c| c.iter().map(|m| inc.on_morphism(*m)).collect(),
        |_, _, x| x,
        |_, _, y| y,
    )?;
    Ok((a, b))
}

/// The category of triples `(X, B, Y)`: `B` a sieve on `X` and `Y -> X` a
/// member of `B`. A morphism `(X, B, y) -> (X', B', y')` is a pair
/// `u: X -> X'`, `v: Y -> Y'` with `u y = y' v` and `B ⊆ u*B'`.
#[derive(Clone, Debug)]
pub struct Triples {
    pub base: Arc<FinCat>,
    pub cat: Arc<FinCat>,
    /// `(X, B, y)` per object of `cat`.
    pub objects: Vec<(usize, Sieve, usize)>,
    /// `(u, v)` per morphism of `cat`.
    pub parts: Vec<(usize, usize)>,
    pub projector: ProjectorData,
}

pub fn triples_category(base: &Arc<FinCat>) -> Result<Triples> {
    let c = &**base;
    let mut raw: Vec<(usize, Sieve, usize)> = Vec::new();
    for x in 0..c.object_count() {
        for s in all_sieves(c, x) {
            for y in s.members.clone() {
                raw.push((x, s.clone(), y));
            }
        }
    }
    let label = |t: &(usize, Sieve, usize)| {
        format!(
            "({}|{}|{})",
            c.object(t.0),
            t.1.label(c),
            c.morphism(t.2).id
        )
    };
    let labels: Vec<String> = raw.iter().map(label).collect();
    let mut arrows: BTreeMap<(usize, usize, usize, usize), String> = BTreeMap::new();
    let mut identities = BTreeMap::new();
    for (i, t) in raw.iter().enumerate() {
        for (j, t2) in raw.iter().enumerate() {
            for u in c.hom(t.0, t2.0) {
                for v in c.hom(c.src(t.2), c.src(t2.2)) {
                    if c.compose(u, t.2) != c.compose(t2.2, v)
                        || !t.1.is_subset(&t2.1.pullback(c, u))
                    {
                        continue;
                    }
                    let name = if i == j && c.is_identity(u) && c.is_identity(v) {
                        let n = format!("id_{}", labels[i]);
                        identities.insert(labels[i].clone(), n.clone());
                        n
                    } else {
                        format!(
                            "{},{}:{}>{}",
                            c.morphism(u).id,
                            c.morphism(v).id,
                            labels[i],
                            labels[j]
                        )
                    };
                    arrows.insert((i, j, u, v), name);
                }
            }
        }
    }
    let mut composition = Vec::new();
    for ((i, j, u, v), n1) in &arrows {
        for ((j2, k, u2, v2), n2) in arrows.range((*j, 0, 0, 0)..(*j + 1, 0, 0, 0)) {
            debug_assert_eq!(j, j2);
            let n3 = &arrows[&(*i, *k, c.compose(*u2, *u), c.compose(*v2, *v))];
            composition.push((n2.clone(), n1.clone(), n3.clone()));
        }
    }
    let morphisms = arrows
        .iter()
        .map(|((i, j, _, _), n)| (n.clone(), labels[*i].clone(), labels[*j].clone()))
        .collect();
    let cat = Arc::new(FinCat::new(
        labels.clone(),
        morphisms,
        &identities,
        composition,
    )?);

    let objects: Vec<(usize, Sieve, usize)> = cat
        .objects()
        .iter()
        .map(|l| raw[labels.iter().position(|m| m == l).expect("triple label")].clone())
        .collect();
    let index: HashMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let parts: Vec<(usize, usize)> = {
        let by_name: HashMap<&str, (usize, usize)> = arrows
            .iter()
            .map(|((_, _, u, v), n)| (n.as_str(), (*u, *v)))
            .collect();
        cat.morphisms()
            .iter()
            .map(|m| by_name[m.id.as_str()])
            .collect()
    };
    let obj_of = |t: &(usize, Sieve, usize)| cat.object_id(&label(t));
    let arrow = |i: usize, j: usize, u: usize, v: usize| cat.morphism_id(&arrows[&(i, j, u, v)]);
    let raw_of = |o: usize| index[cat.object(o)];

    // P(X, B, y) = (Y, max, id_Y); psi = (y, id_Y).
    let fixed = |o: usize| {
        let y = c.src(objects[o].2);
        (y, Sieve::maximal(c, y), c.identity(y))
    };
    let p_objects: Vec<usize> = (0..cat.object_count())
        .map(|o| obj_of(&fixed(o)))
        .collect::<Result<_>>()?;
    let p_morphisms: Vec<usize> = cat
        .morphisms()
        .iter()
        .enumerate()
        .map(|(f, m)| {
            let v = parts[f].1;
            arrow(raw_of(p_objects[m.src]), raw_of(p_objects[m.tgt]), v, v)
        })
        .collect::<Result<_>>()?;
    let psi: Vec<usize> = (0..cat.object_count())
        .map(|o| {
            arrow(
                raw_of(p_objects[o]),
                raw_of(o),
                objects[o].2,
                c.identity(c.src(objects[o].2)),
            )
        })
        .collect::<Result<_>>()?;
    let p = Functor::new(cat.clone(), cat.clone(), p_objects, p_morphisms)?;
    let projector = ProjectorData::new(cat.clone(), p, psi)?;
    Ok(Triples {
        base: base.clone(),
        cat,
        objects,
        parts,
        projector,
    })
}

impl Triples {
    /// The image `D` mapped back onto the base: `(Y, max, id_Y) ↦ Y`.
    pub fn image_to_base(&self) -> Result<Functor> {
        let inc = self.projector.image()?;
        let objects = inc.objects.iter().map(|o| self.objects[*o].0).collect();
        let morphisms = inc.morphisms.iter().map(|f| self.parts[*f].0).collect();
        Functor::new(inc.source.clone(), self.base.clone(), objects, morphisms)
    }

    /// `(X, B, Y) ↦` compatible families of `g` over `B`.
    pub fn section_presheaf(&self, g: &SetPresheaf) -> Result<SetPresheaf> {
        if !same(&self.base, g.base()) {
            return Err(Error::BaseMismatch(
                "presheaf is not on the base of the triples".into(),
            ));
        }
        let c = &*self.base;
        let families: Vec<Vec<Vec<usize>>> = self
            .objects
            .iter()
            .map(|(_, s, _)| sieve_sections(g, s))
            .collect();
        let values: Vec<Vec<String>> = self
            .objects
            .iter()
            .zip(&families)
            .map(|((_, s, _), fams)| {
                fams.iter()
                    .map(|fam| {
                        let parts: Vec<&str> = s
                            .members
                            .iter()
                            .zip(fam)
                            .map(|(h, z)| g.value(c.src(*h))[*z].as_str())
                            .collect();
                        format!("({})", parts.join(","))
                    })
                    .collect()
            })
            .collect();
        let actions = self
            .cat
            .morphisms()
            .iter()
            .enumerate()
            .map(|(f, m)| {
                let u = self.parts[f].0;
                let (small, big) = (&self.objects[m.src].1, &self.objects[m.tgt].1);
                let index: HashMap<&Vec<usize>, usize> = families[m.src]
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v, i))
                    .collect();
                families[m.tgt]
                    .iter()
                    .map(|fam| {
                        let restricted: Vec<usize> = small
                            .members
                            .iter()
                            .map(|h| {
                                fam[big
                                    .members
                                    .binary_search(&c.compose(u, *h))
                                    .expect("member of B'")]
                            })
                            .collect();
                        index
                            .get(&restricted)
                            .copied()
                            .ok_or_else(|| Error::invariant("restricted family not compatible"))
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<_>>()?;
        SetPresheaf::new(self.cat.clone(), values, actions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catsite::validate_category;
    use crate::catsite::FiniteSpace;
    use crate::homology::induced_homology_maps;
    use crate::realization::order_complex_functor;

    fn sierpinski() -> FiniteSpace {
        FiniteSpace::new(
            vec!["o".into(), "c".into()],
            vec![vec![], vec!["o".into()], vec!["o".into(), "c".into()]],
        )
        .unwrap()
    }

    #[test]
    fn identity_projector() {
        let f = order_complex_functor(&sierpinski(), 2).unwrap();
        let cat = f.base().clone();
        let p = Functor::identity(cat.clone());
        let psi = (0..cat.object_count()).map(|x| cat.identity(x)).collect();
        let d = ProjectorData::new(cat.clone(), p, psi).unwrap();
        let g = SetPresheaf::representable(cat.clone(), 0).to_presheaf(2);
        let inc = d.image().unwrap();
        let (a, b) = projector_maps(&d, &f.pullback(&inc).unwrap(), &g, 2).unwrap();
        assert!(a.is_identity() && b.is_identity());
    }

    #[test]
    fn triples_over_sierpinski() {
        let f = order_complex_functor(&sierpinski(), 3).unwrap();
        let base = f.base().clone();
        let t = triples_category(&base).unwrap();
        assert_eq!(t.cat.object_count(), 4);
        assert!(validate_category(&t.cat).is_ok());
        let fd = f.pullback(&t.image_to_base().unwrap()).unwrap();
        let g = SetPresheaf::constant(base.clone(), &["0".into(), "1".into()]);
        let gc = t.section_presheaf(&g).unwrap().to_presheaf(3);
        let (a, b) = projector_maps(&t.projector, &fd, &gc, 3).unwrap();
        assert!(a.validate().is_ok() && b.validate().is_ok());
        assert!(b.then(&a).unwrap().is_identity());
        for m in induced_homology_maps(&a.then(&b).unwrap(), 2).unwrap() {
            assert!(m.is_identity(), "{m:?}");
        }
    }
}
