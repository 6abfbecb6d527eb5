//! Presheaves and covariant diagrams of simplicial sets on a finite category,
//! set-valued presheaves, the plus construction and sheafification.

mod plus;
mod sets;

use std::marker::PhantomData;
use std::sync::Arc;

use serde_json::{Map, Value};

use crate::catsite::{sieve_category, FinCat, Functor, Sieve};
use crate::error::{Error, Result};
use crate::sset::json as sjson;
use crate::sset::{SimplicialMap, SimplicialSet};

pub use plus::{
    gamma_prime_map, gamma_prime_set, illusie_pi0_certificate, is_sheaf_set, sheafify_map,
    sheafify_set, Pi0Certificate, Pi0Entry, SheafFailure, SheafReport, PI0_SCOPE,
};
pub use sets::{sections_set, sieve_sections, SetPresheaf, SetPresheafMap};

pub trait Variance: Clone + Copy + Send + Sync + 'static {
    const COVARIANT: bool;
}

#[derive(Clone, Copy, Debug)]
pub struct Contravariant;

#[derive(Clone, Copy, Debug)]
pub struct Covariant;

impl Variance for Contravariant {
    const COVARIANT: bool = false;
}

impl Variance for Covariant {
    const COVARIANT: bool = true;
}

/// Simplicial sets on the objects of a finite category with maps along its
/// morphisms: backwards for presheaves, forwards for covariant diagrams.
#[derive(Clone, Debug)]
pub struct Diagram<V: Variance> {
    base: Arc<FinCat>,
    dim_cap: usize,
    values: Vec<Arc<SimplicialSet>>,
    actions: Vec<SimplicialMap>,
    _variance: PhantomData<V>,
}

pub type Presheaf = Diagram<Contravariant>;
pub type CovariantDiagram = Diagram<Covariant>;

impl<V: Variance> Diagram<V> {
    /// `actions[f]` for `f: a -> b` goes `values[b] -> values[a]` for
    /// presheaves and `values[a] -> values[b]` for covariant diagrams.
    pub fn new(
        base: Arc<FinCat>,
        values: Vec<Arc<SimplicialSet>>,
        actions: Vec<SimplicialMap>,
    ) -> Result<Self> {
        if values.len() != base.object_count() || actions.len() != base.morphism_count() {
            return Err(Error::input(
                "diagram needs one value per object and one action per morphism",
            ));
        }
        let dim_cap = values.first().map_or(0, |v| v.dim_cap());
        if let Some(v) = values.iter().find(|v| v.dim_cap() != dim_cap) {
            return Err(Error::CapMismatch(format!(
                "values with caps {dim_cap} and {}",
                v.dim_cap()
            )));
        }
        for (f, m) in base.morphisms().iter().enumerate() {
            let (from, to) = if V::COVARIANT {
                (m.src, m.tgt)
            } else {
                (m.tgt, m.src)
            };
            let a = &actions[f];
            if !same(a.source(), &values[from]) || !same(a.target(), &values[to]) {
                return Err(Error::input(format!(
                    "action of `{}` has the wrong endpoints",
                    m.id
                )));
            }
        }
        Ok(Diagram {
            base,
            dim_cap,
            values,
            actions,
            _variance: PhantomData,
        })
    }

    /// Builds values and actions from closures.
    pub fn from_fn(
        base: Arc<FinCat>,
        value: impl Fn(usize) -> Arc<SimplicialSet>,
        action: impl Fn(usize, &Arc<SimplicialSet>, &Arc<SimplicialSet>) -> Result<SimplicialMap>,
    ) -> Result<Self> {
        let values: Vec<Arc<SimplicialSet>> = (0..base.object_count()).map(value).collect();
        let actions = base
            .morphisms()
            .iter()
            .enumerate()
            .map(|(f, m)| {
                let (from, to) = if V::COVARIANT {
                    (m.src, m.tgt)
                } else {
                    (m.tgt, m.src)
                };
                action(f, &values[from], &values[to])
            })
            .collect::<Result<Vec<_>>>()?;
        Diagram::new(base, values, actions)
    }

    /// Same value everywhere, identity actions.
    pub fn constant(base: Arc<FinCat>, value: Arc<SimplicialSet>) -> Self {
        let actions = vec![SimplicialMap::identity(value.clone()); base.morphism_count()];
        let values = vec![value; base.object_count()];
        Diagram::new(base, values, actions).expect("constant diagram")
    }

    pub fn terminal(base: Arc<FinCat>, dim_cap: usize) -> Self {
        Diagram::constant(base, Arc::new(SimplicialSet::point(dim_cap)))
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    pub fn value(&self, x: usize) -> &Arc<SimplicialSet> {
        &self.values[x]
    }

    pub fn values(&self) -> &[Arc<SimplicialSet>] {
        &self.values
    }

    pub fn action(&self, f: usize) -> &SimplicialMap {
        &self.actions[f]
    }

    /// Maps validate, identities act trivially, composites act as composites.
    pub fn validate(&self) -> Result<()> {
        let cat = &*self.base;
        for (f, a) in self.actions.iter().enumerate() {
            a.validate().map_err(|v| {
                Error::validation(format!("action of `{}`: {v}", cat.morphism(f).id))
            })?;
        }
        for x in 0..cat.object_count() {
            if !self.actions[cat.identity(x)].is_identity() {
                return Err(Error::validation(format!(
                    "identity of `{}` does not act trivially",
                    cat.object(x)
                )));
            }
        }
        for f in 0..cat.morphism_count() {
            for &g in cat.outgoing(cat.tgt(f)) {
                let gf = cat.compose(g, f);
                let composite = if V::COVARIANT {
                    self.actions[f].then(&self.actions[g])?
                } else {
                    self.actions[g].then(&self.actions[f])?
                };
                if !composite.same_tables(&self.actions[gf]) {
                    return Err(Error::validation(format!(
                        "action is not functorial on `{}` after `{}`",
                        cat.morphism(g).id,
                        cat.morphism(f).id
                    )));
                }
            }
        }
        Ok(())
    }

    /// Equal base, values and action tables.
    pub fn same_as(&self, other: &Self) -> bool {
        same(&self.base, &other.base)
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| same(a, b))
            && self
                .actions
                .iter()
                .zip(&other.actions)
                .all(|(a, b)| a.same_tables(b))
    }

    /// Precomposition with a functor into the base.
    pub fn pullback(&self, functor: &Functor) -> Result<Self> {
        if !same(&functor.target, &self.base) {
            return Err(Error::BaseMismatch(
                "functor does not land in the diagram's base".into(),
            ));
        }
        let values = functor
            .objects
            .iter()
            .map(|x| self.values[*x].clone())
            .collect();
        let actions = functor
            .morphisms
            .iter()
            .map(|f| self.actions[*f].clone())
            .collect();
        Diagram::new(functor.source.clone(), values, actions)
    }

    pub fn truncate(&self, dim_cap: usize) -> Result<Self> {
        if dim_cap == self.dim_cap {
            return Ok(self.clone());
        }
        let values: Vec<Arc<SimplicialSet>> = self
            .values
            .iter()
            .map(|v| v.truncate(dim_cap).map(Arc::new))
            .collect::<Result<_>>()?;
        let cat = self.base.clone();
        let actions = cat
            .morphisms()
            .iter()
            .enumerate()
            .map(|(f, m)| {
                let (from, to) = if V::COVARIANT {
                    (m.src, m.tgt)
                } else {
                    (m.tgt, m.src)
                };
                let levels = (0..=dim_cap)
                    .map(|k| self.actions[f].level(k).to_vec())
                    .collect();
                SimplicialMap::new(values[from].clone(), values[to].clone(), levels)
            })
            .collect::<Result<Vec<_>>>()?;
        Diagram::new(cat, values, actions)
    }

    /// `{"values": {obj: sset}, "actions": {mor: map}}`. Identity actions may be
    /// omitted, as may actions into a one-point value and composites of given ones.
    pub fn from_json(v: &Value, base: Arc<FinCat>, dim_cap: usize) -> Result<Self> {
        let vals = v
            .get("values")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::input("diagram needs `values`"))?;
        for key in vals.keys() {
            base.object_id(key)?;
        }
        let mut values = Vec::with_capacity(base.object_count());
        for o in base.objects() {
            let raw = vals
                .get(o)
                .ok_or_else(|| Error::input(format!("no value for object `{o}`")))?;
            values.push(Arc::new(sjson::from_json(raw, Some(dim_cap))?));
        }
        let given = match v.get("actions") {
            None => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err(Error::input("`actions` must be an object")),
        };
        for key in given.keys() {
            base.morphism_id(key)?;
        }
        let n = base.morphism_count();
        let mut actions: Vec<Option<SimplicialMap>> = vec![None; n];
        for (f, m) in base.morphisms().iter().enumerate() {
            let (from, to) = if V::COVARIANT {
                (m.src, m.tgt)
            } else {
                (m.tgt, m.src)
            };
            actions[f] = if let Some(raw) = given.get(&m.id) {
                Some(sjson::map_from_json(
                    raw,
                    values[from].clone(),
                    values[to].clone(),
                )?)
            } else if base.is_identity(f) {
                Some(SimplicialMap::identity(values[from].clone()))
            } else if values[to].counts().iter().all(|c| *c == 1) {
                Some(SimplicialMap::from_nondegenerate(
                    values[from].clone(),
                    values[to].clone(),
                    |_, _| Some(0),
                )?)
            } else {
                None
            };
        }
        loop {
            let mut progress = false;
            for gf in 0..n {
                if actions[gf].is_some() {
                    continue;
                }
                let a = base.src(gf);
                'search: for &f in base.outgoing(a) {
                    for &g in base.outgoing(base.tgt(f)) {
                        if base.compose(g, f) != gf || base.is_identity(f) || base.is_identity(g) {
                            continue;
                        }
                        if let (Some(af), Some(ag)) = (&actions[f], &actions[g]) {
                            let c = if V::COVARIANT {
                                af.then(ag)?
                            } else {
                                ag.then(af)?
                            };
                            actions[gf] = Some(c);
                            progress = true;
                            break 'search;
                        }
                    }
                }
            }
            if !progress {
                break;
            }
        }
        let actions = actions
            .into_iter()
            .enumerate()
            .map(|(f, a)| {
                a.ok_or_else(|| {
                    Error::input(format!("no action given for `{}`", base.morphism(f).id))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Diagram::new(base, values, actions)
    }

    pub fn to_json(&self) -> Value {
        let values: Map<String, Value> = self
            .base
            .objects()
            .iter()
            .zip(&self.values)
            .map(|(o, v)| (o.clone(), sjson::to_json(v)))
            .collect();
        let actions: Map<String, Value> = self
            .base
            .morphisms()
            .iter()
            .zip(&self.actions)
            .map(|(m, a)| (m.id.clone(), sjson::map_to_json(a)))
            .collect();
        serde_json::json!({"values": values, "actions": actions})
    }
}

pub(crate) fn same<T: PartialEq>(a: &Arc<T>, b: &Arc<T>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// The presheaf on the sieve category of `s` (objects are the members of `s`).
pub fn restrict(g: &Presheaf, s: &Sieve) -> Result<Presheaf> {
    let cat = g.base();
    if s.base >= cat.object_count()
        || s.members.iter().any(|f| *f >= cat.morphism_count())
        || !s.is_closed(cat)
    {
        return Err(Error::BaseMismatch(
            "sieve is not a sieve of the presheaf's base".into(),
        ));
    }
    g.pullback(&sieve_category(cat, s)?)
}

/// Objectwise components; component `i` is labeled by its first vertex.
pub fn pi0_presheaf(g: &Presheaf) -> Result<SetPresheaf> {
    let cat = g.base();
    let comps: Vec<_> = g.values().iter().map(|v| v.pi0()).collect();
    let labels: Vec<Vec<String>> = g
        .values()
        .iter()
        .zip(&comps)
        .map(|(v, c)| {
            let mut first = vec![None; c.count];
            for (x, comp) in c.vertex_component.iter().enumerate() {
                first[*comp].get_or_insert(x);
            }
            first
                .into_iter()
                .map(|x| v.label(0, x.expect("nonempty component")).to_string())
                .collect()
        })
        .collect();
    let actions = cat
        .morphisms()
        .iter()
        .enumerate()
        .map(|(f, m)| {
            let (src_c, tgt_c) = (&comps[m.tgt], &comps[m.src]);
            let mut table = vec![usize::MAX; src_c.count];
            for (x, c) in src_c.vertex_component.iter().enumerate() {
                table[*c] = tgt_c.vertex_component[g.action(f).apply(0, x)];
            }
            table
        })
        .collect();
    SetPresheaf::new(cat.clone(), labels, actions)
}

/// Componentwise simplicial maps commuting with the actions.
#[derive(Clone, Debug)]
pub struct PresheafMap {
    source: Arc<Presheaf>,
    target: Arc<Presheaf>,
    components: Vec<SimplicialMap>,
}

impl PresheafMap {
    pub fn new(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        components: Vec<SimplicialMap>,
    ) -> Result<Self> {
        if !same(source.base(), target.base()) {
            return Err(Error::BaseMismatch(
                "presheaf map between different bases".into(),
            ));
        }
        if components.len() != source.base().object_count() {
            return Err(Error::input("one component per object required"));
        }
        for (x, c) in components.iter().enumerate() {
            if !same(c.source(), source.value(x)) || !same(c.target(), target.value(x)) {
                return Err(Error::input(format!(
                    "component at `{}` has the wrong endpoints",
                    source.base().object(x)
                )));
            }
        }
        Ok(PresheafMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(g: Arc<Presheaf>) -> Self {
        let components = g
            .values()
            .iter()
            .map(|v| SimplicialMap::identity(v.clone()))
            .collect();
        PresheafMap {
            source: g.clone(),
            target: g,
            components,
        }
    }

    pub fn source(&self) -> &Arc<Presheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presheaf> {
        &self.target
    }

    pub fn component(&self, x: usize) -> &SimplicialMap {
        &self.components[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PresheafMap) -> Result<PresheafMap> {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.then(b))
            .collect::<Result<_>>()?;
        PresheafMap::new(self.source.clone(), other.target.clone(), components)
    }

    /// Components validate and every naturality square commutes.
    pub fn validate(&self) -> Result<()> {
        let cat = self.source.base();
        for (x, c) in self.components.iter().enumerate() {
            c.validate()
                .map_err(|v| Error::validation(format!("component at `{}`: {v}", cat.object(x))))?;
        }
        for (f, m) in cat.morphisms().iter().enumerate() {
            let left = self.source.action(f).then(&self.components[m.src])?;
            let right = self.components[m.tgt].then(self.target.action(f))?;
            if !left.same_tables(&right) {
                return Err(Error::validation(format!("naturality fails at `{}`", m.id)));
            }
        }
        Ok(())
    }

    /// Induced map of objectwise components.
    pub fn pi0(&self) -> Result<SetPresheafMap> {
        let (a, b) = (
            Arc::new(pi0_presheaf(&self.source)?),
            Arc::new(pi0_presheaf(&self.target)?),
        );
        let components = (0..a.base().object_count())
            .map(|x| {
                let (ca, cb) = (self.source.value(x).pi0(), self.target.value(x).pi0());
                let mut table = vec![usize::MAX; ca.count];
                for (v, c) in ca.vertex_component.iter().enumerate() {
                    table[*c] = cb.vertex_component[self.components[x].apply(0, v)];
                }
                table
            })
            .collect();
        SetPresheafMap::new(a, b, components)
    }

    pub fn to_json(&self) -> Value {
        let cat = self.source.base();
        let comps: Map<String, Value> = cat
            .objects()
            .iter()
            .zip(&self.components)
            .map(|(o, m)| (o.clone(), sjson::map_to_json(m)))
            .collect();
        Value::Object(comps)
    }

    /// `{obj: map}` with maps in any accepted simplicial map form.
    pub fn from_json(v: &Value, source: Arc<Presheaf>, target: Arc<Presheaf>) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::input("presheaf map must be an object keyed by object"))?;
        let cat = source.base().clone();
        for key in obj.keys() {
            cat.object_id(key)?;
        }
        let components = cat
            .objects()
            .iter()
            .enumerate()
            .map(|(x, o)| {
                let raw = obj
                    .get(o)
                    .ok_or_else(|| Error::input(format!("no component at `{o}`")))?;
                sjson::map_from_json(raw, source.value(x).clone(), target.value(x).clone())
            })
            .collect::<Result<Vec<_>>>()?;
        PresheafMap::new(source, target, components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catsite::{
        generate_sieve, has_final_object, site_from_finite_space, FiniteSpace, Site,
    };
    use serde_json::json;

    pub(crate) fn pseudo_circle_site() -> Site {
        let pts = ["a", "b", "c", "d"].map(String::from).to_vec();
        let opens: Vec<Vec<String>> = [
            &[][..],
            &["a"],
            &["b"],
            &["a", "b"],
            &["a", "b", "c"],
            &["a", "b", "d"],
            &["a", "b", "c", "d"],
        ]
        .iter()
        .map(|o| o.iter().map(|s| s.to_string()).collect())
        .collect();
        site_from_finite_space(&FiniteSpace::new(pts, opens).unwrap()).unwrap()
    }

    #[test]
    fn restrict_along_sieves() {
        let site = pseudo_circle_site();
        let cat = site.category().clone();
        let circle = Arc::new(SimplicialSet::discrete(&["p".into(), "q".into()], 2));
        let g = Presheaf::constant(cat.clone(), circle);
        let x = cat.object_id("{a,b,c,d}").unwrap();
        let r = restrict(&g, &Sieve::maximal(&cat, x)).unwrap();
        assert_eq!(r.base().object_count(), 6);
        assert!(r.validate().is_ok());
        assert!(has_final_object(r.base()).is_some());
        let e = restrict(&g, &Sieve::empty(x)).unwrap();
        assert_eq!(e.base().object_count(), 0);
        let s = generate_sieve(&cat, x, &[cat.morphism_id("{a,b,c}<{a,b,c,d}").unwrap()]).unwrap();
        let r = restrict(&g, &s).unwrap();
        assert!(r.values().iter().all(|v| v.count(0) == 2));
    }

    #[test]
    fn json_with_derived_composites() {
        let els: Vec<String> = ["0", "1", "2"].iter().map(|s| s.to_string()).collect();
        let cat = Arc::new(FinCat::from_poset(&els, |i, j| i <= j).unwrap());
        let v = json!({
            "values": {"0": ["x"], "1": ["y", "z"], "2": ["u", "w"]},
            "actions": {"1<2": {"u": "y", "w": "z"}}
        });
        let g = Presheaf::from_json(&v, cat.clone(), 2).unwrap();
        assert!(g.validate().is_ok());
        let back = Presheaf::from_json(&g.to_json(), cat.clone(), 2).unwrap();
        assert!(back.validate().is_ok());
        let missing = json!({"values": {"0": ["x"], "1": ["y", "z"], "2": ["u", "w"]}});
        assert!(Presheaf::from_json(&missing, cat, 2).is_err());
    }

    #[test]
    fn pi0_of_circle_plus_point() {
        let cat = Arc::new(FinCat::discrete(&["*".into()]).unwrap());
        let circle = crate::sset::GeneratorSet::from_faces(
            vec![vec!["v".into()], vec!["e".into()]],
            &[("e", &["v", "v"][..])],
        )
        .unwrap()
        .expand(2)
        .unwrap();
        let both = SimplicialSet::disjoint_union(&[circle, SimplicialSet::point(2)], 2).unwrap();
        let g = Presheaf::constant(cat, Arc::new(both));
        let p = pi0_presheaf(&g).unwrap();
        assert_eq!(p.value(0).len(), 2);
    }

    #[test]
    fn naturality_is_checked() {
        let els: Vec<String> = ["0", "1"].iter().map(|s| s.to_string()).collect();
        let cat = Arc::new(FinCat::from_poset(&els, |i, j| i <= j).unwrap());
        let v = json!({"values": {"0": ["x", "y"], "1": ["u"]}, "actions": {"0<1": {"u": "x"}}});
        let g = Arc::new(Presheaf::from_json(&v, cat.clone(), 1).unwrap());
        assert!(PresheafMap::identity(g.clone()).validate().is_ok());
        let swap = json!({"0": {"x": "y", "y": "x"}, "1": {"u": "u"}});
        let m = PresheafMap::from_json(&swap, g.clone(), g).unwrap();
        assert!(m.validate().is_err());
    }
}
