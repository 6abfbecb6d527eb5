use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{Map, Value};

use super::{same, Presheaf, PresheafMap};
use crate::catsite::{FinCat, Functor, Sieve};
use crate::error::{Error, Result};
use crate::sset::{SimplicialMap, SimplicialSet};

/// A presheaf of finite sets: `actions[f][z]` for `f: a -> b` sends
/// `z ∈ values[b]` to an element of `values[a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetPresheaf {
    base: Arc<FinCat>,
    values: Vec<Vec<String>>,
    actions: Vec<Vec<usize>>,
}

impl SetPresheaf {
    pub fn new(
        base: Arc<FinCat>,
        values: Vec<Vec<String>>,
        actions: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if values.len() != base.object_count() || actions.len() != base.morphism_count() {
            return Err(Error::input(
                "set presheaf needs one value per object and one action per morphism",
            ));
        }
        for (x, v) in values.iter().enumerate() {
            let mut sorted: Vec<&String> = v.iter().collect();
            sorted.sort();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!(
                    "repeated element at `{}`",
                    base.object(x)
                )));
            }
        }
        for (f, m) in base.morphisms().iter().enumerate() {
            if actions[f].len() != values[m.tgt].len()
                || actions[f].iter().any(|z| *z >= values[m.src].len())
            {
                return Err(Error::input(format!(
                    "action of `{}` has the wrong shape",
                    m.id
                )));
            }
        }
        Ok(SetPresheaf {
            base,
            values,
            actions,
        })
    }

    /// `Hom(-, u)`: elements are morphism ids, restriction is precomposition.
    pub fn representable(base: Arc<FinCat>, u: usize) -> Self {
        let cat = base.clone();
        let homs: Vec<Vec<usize>> = (0..cat.object_count()).map(|y| cat.hom(y, u)).collect();
        let values = homs
            .iter()
            .map(|hs| hs.iter().map(|h| cat.morphism(*h).id.clone()).collect())
            .collect();
        let actions = cat
            .morphisms()
            .iter()
            .enumerate()
            .map(|(f, m)| {
                homs[m.tgt]
                    .iter()
                    .map(|h| {
                        let hf = cat.compose(*h, f);
                        homs[m.src]
                            .iter()
                            .position(|k| *k == hf)
                            .expect("composite lies in the hom set")
                    })
                    .collect()
            })
            .collect();
        SetPresheaf {
            base,
            values,
            actions,
        }
    }

    pub fn constant(base: Arc<FinCat>, labels: &[String]) -> Self {
        let values = vec![labels.to_vec(); base.object_count()];
        let actions = vec![(0..labels.len()).collect(); base.morphism_count()];
        SetPresheaf {
            base,
            values,
            actions,
        }
    }

    pub fn terminal(base: Arc<FinCat>) -> Self {
        SetPresheaf::constant(base, &["*".to_string()])
    }

    /// Objectwise disjoint union; elements of part `i` are tagged `i:`.
    pub fn coproduct(parts: &[&SetPresheaf]) -> Result<Self> {
        let base = parts
            .first()
            .ok_or_else(|| Error::input("coproduct of nothing needs a base"))?
            .base
            .clone();
        if parts.iter().any(|p| !same(&p.base, &base)) {
            return Err(Error::BaseMismatch(
                "coproduct of presheaves on different bases".into(),
            ));
        }
        let values = (0..base.object_count())
            .map(|x| {
                parts
                    .iter()
                    .enumerate()
                    .flat_map(|(i, p)| p.values[x].iter().map(move |l| format!("{i}:{l}")))
                    .collect()
            })
            .collect();
        let actions = base
            .morphisms()
            .iter()
            .enumerate()
            .map(|(f, m)| {
                let mut offset = 0;
                let mut table = Vec::new();
                for p in parts {
                    table.extend(p.actions[f].iter().map(|z| z + offset));
                    offset += p.values[m.src].len();
                }
                table
            })
            .collect();
        SetPresheaf::new(base, values, actions)
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn value(&self, x: usize) -> &[String] {
        &self.values[x]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.values.iter().map(Vec::len).collect()
    }

    pub fn action(&self, f: usize) -> &[usize] {
        &self.actions[f]
    }

    pub fn validate(&self) -> Result<()> {
        let cat = &*self.base;
        for x in 0..cat.object_count() {
            if self.actions[cat.identity(x)]
                .iter()
                .enumerate()
                .any(|(i, z)| i != *z)
            {
                return Err(Error::validation(format!(
                    "identity of `{}` does not act trivially",
                    cat.object(x)
                )));
            }
        }
        for f in 0..cat.morphism_count() {
            for &g in cat.outgoing(cat.tgt(f)) {
                let gf = cat.compose(g, f);
                let ok = (0..self.values[cat.tgt(g)].len())
                    .all(|z| self.actions[f][self.actions[g][z]] == self.actions[gf][z]);
                if !ok {
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

    pub fn pullback(&self, functor: &Functor) -> Result<Self> {
        if !same(&functor.target, &self.base) {
            return Err(Error::BaseMismatch(
                "functor does not land in the presheaf's base".into(),
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
        SetPresheaf::new(functor.source.clone(), values, actions)
    }

    /// Discrete simplicial presheaf with these vertex sets.
    pub fn to_presheaf(&self, dim_cap: usize) -> Presheaf {
        let values: Vec<Arc<SimplicialSet>> = self
            .values
            .iter()
            .map(|v| Arc::new(SimplicialSet::discrete(v, dim_cap)))
            .collect();
        let actions = self
            .base
            .morphisms()
            .iter()
            .enumerate()
            .map(|(f, m)| {
                SimplicialMap::from_nondegenerate(
                    values[m.tgt].clone(),
                    values[m.src].clone(),
                    |k, z| (k == 0).then(|| self.actions[f][z]),
                )
                .expect("discrete extension")
            })
            .collect();
        Presheaf::new(self.base.clone(), values, actions).expect("discrete presheaf")
    }

    /// Requires every value to be discrete.
    pub fn from_presheaf(g: &Presheaf) -> Result<Self> {
        for (x, v) in g.values().iter().enumerate() {
            if v.nondegenerate_counts().iter().skip(1).any(|c| *c > 0) {
                return Err(Error::input(format!(
                    "value at `{}` is not discrete",
                    g.base().object(x)
                )));
            }
        }
        let values = g.values().iter().map(|v| v.labels(0).to_vec()).collect();
        let actions = (0..g.base().morphism_count())
            .map(|f| g.action(f).level(0).to_vec())
            .collect();
        SetPresheaf::new(g.base().clone(), values, actions)
    }

    /// `{"values": {obj: [..]}, "actions": {mor: {elem: elem}}}`, with the
    /// same omissions allowed as for simplicial presheaves.
    pub fn from_json(v: &Value, base: Arc<FinCat>) -> Result<Self> {
        SetPresheaf::from_presheaf(&Presheaf::from_json(v, base, 0)?)
    }

    pub fn to_json(&self) -> Value {
        let values: Map<String, Value> = self
            .base
            .objects()
            .iter()
            .zip(&self.values)
            .map(|(o, v)| (o.clone(), serde_json::json!(v)))
            .collect();
        let actions: Map<String, Value> = self
            .base
            .morphisms()
            .iter()
            .zip(&self.actions)
            .map(|(m, a)| {
                let table: Map<String, Value> = a
                    .iter()
                    .enumerate()
                    .map(|(z, y)| {
                        (
                            self.values[m.tgt][z].clone(),
                            Value::String(self.values[m.src][*y].clone()),
                        )
                    })
                    .collect();
                (m.id.clone(), Value::Object(table))
            })
            .collect();
        serde_json::json!({"values": values, "actions": actions})
    }
}

/// Componentwise functions commuting with the actions.
#[derive(Clone, Debug)]
pub struct SetPresheafMap {
    source: Arc<SetPresheaf>,
    target: Arc<SetPresheaf>,
    components: Vec<Vec<usize>>,
}

impl SetPresheafMap {
    pub fn new(
        source: Arc<SetPresheaf>,
        target: Arc<SetPresheaf>,
        components: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if !same(source.base(), target.base()) {
            return Err(Error::BaseMismatch(
                "map between presheaves on different bases".into(),
            ));
        }
        if components.len() != source.values.len() {
            return Err(Error::input("one component per object required"));
        }
        for (x, c) in components.iter().enumerate() {
            if c.len() != source.values[x].len() || c.iter().any(|y| *y >= target.values[x].len()) {
                return Err(Error::input(format!(
                    "component at `{}` has the wrong shape",
                    source.base.object(x)
                )));
            }
        }
        Ok(SetPresheafMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(g: Arc<SetPresheaf>) -> Self {
        let components = g.values.iter().map(|v| (0..v.len()).collect()).collect();
        SetPresheafMap {
            source: g.clone(),
            target: g,
            components,
        }
    }

    pub fn source(&self) -> &Arc<SetPresheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SetPresheaf> {
        &self.target
    }

    pub fn component(&self, x: usize) -> &[usize] {
        &self.components[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SetPresheafMap) -> Result<Self> {
        if !same(&self.target, &other.source) {
            return Err(Error::input(
                "composing presheaf maps with mismatched middle object",
            ));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.iter().map(|z| b[*z]).collect())
            .collect();
        SetPresheafMap::new(self.source.clone(), other.target.clone(), components)
    }

    pub fn validate(&self) -> Result<()> {
        for (f, m) in self.source.base.morphisms().iter().enumerate() {
            for z in 0..self.source.values[m.tgt].len() {
                let left = self.components[m.src][self.source.actions[f][z]];
                let right = self.target.actions[f][self.components[m.tgt][z]];
                if left != right {
                    return Err(Error::validation(format!("naturality fails at `{}`", m.id)));
                }
            }
        }
        Ok(())
    }

    pub fn is_bijective(&self) -> bool {
        self.components.iter().enumerate().all(|(x, c)| {
            let mut seen = vec![false; self.target.values[x].len()];
            c.len() == seen.len() && c.iter().all(|y| !std::mem::replace(&mut seen[*y], true))
        })
    }

    pub fn to_presheaf_map(
        &self,
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
    ) -> Result<PresheafMap> {
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(x, c)| {
                SimplicialMap::from_nondegenerate(
                    source.value(x).clone(),
                    target.value(x).clone(),
                    |k, z| (k == 0).then(|| c[z]),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        PresheafMap::new(source, target, components)
    }
}

/// All `x` with `x[to] == table[x[from]]` for each constraint, sorted.
fn solve(domains: &[usize], constraints: &[(usize, usize, &[usize])]) -> Vec<Vec<usize>> {
    let n = domains.len();
    // Nodes that constrain many others go first so later ones are forced.
    let mut out_degree = vec![0usize; n];
    for (from, _, _) in constraints {
        out_degree[*from] += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|v| (std::cmp::Reverse(out_degree[*v]), *v));
    let mut rank = vec![0; n];
    for (i, v) in order.iter().enumerate() {
        rank[*v] = i;
    }
    let mut checks: Vec<Vec<(usize, usize, &[usize])>> = vec![Vec::new(); n];
    for &(from, to, table) in constraints {
        let last = if rank[from] >= rank[to] { from } else { to };
        checks[rank[last]].push((from, to, table));
    }
    let mut out = Vec::new();
    let mut x = vec![usize::MAX; n];
    fn rec(
        i: usize,
        order: &[usize],
        domains: &[usize],
        checks: &[Vec<(usize, usize, &[usize])>],
        x: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == order.len() {
            out.push(x.clone());
            return;
        }
        let v = order[i];
        // A constraint from an assigned node forces the value.
        let forced = checks[i]
            .iter()
            .find(|(from, to, _)| *to == v && *from != v)
            .map(|(from, _, t)| t[x[*from]]);
        let candidates: Vec<usize> = match forced {
            Some(val) => vec![val],
            None => (0..domains[v]).collect(),
        };
        for val in candidates {
            x[v] = val;
            if checks[i].iter().all(|(from, to, t)| t[x[*from]] == x[*to]) {
                rec(i + 1, order, domains, checks, x, out);
            }
        }
        x[v] = usize::MAX;
    }
    rec(0, &order, domains, &checks, &mut x, &mut out);
    out.sort();
    out
}

/// Compatible families over the objects of `g`'s base: the limit of `g`.
pub fn sections_set(g: &SetPresheaf) -> Vec<Vec<usize>> {
    let cat = &*g.base;
    let domains: Vec<usize> = g.values.iter().map(Vec::len).collect();
    let constraints: Vec<(usize, usize, &[usize])> = cat
        .morphisms()
        .iter()
        .enumerate()
        .map(|(f, m)| (m.tgt, m.src, g.actions[f].as_slice()))
        .collect();
    solve(&domains, &constraints)
}

/// Compatible families over a sieve, indexed like `s.members`: the value at
/// member `f: Y -> X` lies in `g(Y)`.
pub fn sieve_sections(g: &SetPresheaf, s: &Sieve) -> Vec<Vec<usize>> {
    let cat = &*g.base;
    let position: HashMap<usize, usize> =
        s.members.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let domains: Vec<usize> = s
        .members
        .iter()
        .map(|f| g.values[cat.src(*f)].len())
        .collect();
    let mut constraints: Vec<(usize, usize, &[usize])> = Vec::new();
    for (i, &f) in s.members.iter().enumerate() {
        for &u in cat.incoming(cat.src(f)) {
            if cat.is_identity(u) {
                continue;
            }
            let j = position[&cat.compose(f, u)];
            constraints.push((i, j, g.actions[u].as_slice()));
        }
    }
    solve(&domains, &constraints)
}
