//! Finite categories, functors, slices, nerves, sieves, sites and finite spaces.

mod functor;
mod nerve;
mod sieve;
mod space;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};

pub use functor::{slice, Functor};
pub use nerve::nerve;
pub use sieve::{
    all_sieves, generate_sieve, sieve_category, validate_site, Sieve, Site, SiteViolation,
};
pub use space::{site_from_finite_space, FiniteSpace};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category given by explicit tables.
///
/// Objects and morphisms are sorted by identifier. The composition table may
/// be inconsistent; [`validate_category`] reports the first broken law.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    // comp[g * n + f] = g∘f, NONE if absent.
    comp: Vec<usize>,
    object_index: HashMap<String, usize>,
    morphism_index: HashMap<String, usize>,
    out_of: Vec<Vec<usize>>,
    into: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CategoryViolation {
    /// `g∘f` is missing for a composable pair.
    MissingComposite { g: String, f: String },
    /// A composite is listed for a pair that does not compose.
    NotComposable { g: String, f: String },
    /// `g∘f` lands in a morphism with the wrong endpoints.
    Typing {
        g: String,
        f: String,
        composite: String,
    },
    /// An identity law fails.
    Identity { identity: String, other: String },
    /// `(h∘g)∘f != h∘(g∘f)`.
    Associativity { h: String, g: String, f: String },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryViolation::MissingComposite { g, f: ff } => {
                write!(f, "missing composite {g}∘{ff}")
            }
            CategoryViolation::NotComposable { g, f: ff } => {
                write!(f, "composite {g}∘{ff} given for a non-composable pair")
            }
            CategoryViolation::Typing {
                g,
                f: ff,
                composite,
            } => {
                write!(
                    f,
                    "composite {g}∘{ff} = {composite} has the wrong endpoints"
                )
            }
            CategoryViolation::Identity { identity, other } => {
                write!(f, "identity law fails for {identity} with {other}")
            }
            CategoryViolation::Associativity { h, g, f: ff } => {
                write!(f, "associativity fails on ({h}, {g}, {ff})")
            }
        }
    }
}

impl CategoryViolation {
    pub fn kind(&self) -> &'static str {
        match self {
            CategoryViolation::MissingComposite { .. }
            | CategoryViolation::NotComposable { .. } => "typing",
            CategoryViolation::Typing { .. } => "typing",
            CategoryViolation::Identity { .. } => "identity",
            CategoryViolation::Associativity { .. } => "associativity",
        }
    }

    /// Morphism ids witnessing the violation.
    pub fn witnesses(&self) -> Vec<String> {
        match self {
            CategoryViolation::MissingComposite { g, f }
            | CategoryViolation::NotComposable { g, f } => {
                vec![g.clone(), f.clone()]
            }
            CategoryViolation::Typing { g, f, .. } => vec![g.clone(), f.clone()],
            CategoryViolation::Identity { identity, other } => {
                vec![identity.clone(), other.clone()]
            }
            CategoryViolation::Associativity { h, g, f } => vec![h.clone(), g.clone(), f.clone()],
        }
    }
}

pub fn identity_name(object: &str) -> String {
    format!("id_{object}")
}

impl FinCat {
    /// Builds from identifier tables. Identities default to `id_<obj>` and are
    /// synthesized, together with their composites, when absent.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        identities: &BTreeMap<String, String>,
        composition: Vec<(String, String, String)>,
    ) -> Result<Self> {
        let mut objects = objects;
        objects.sort();
        if objects.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("object listed twice"));
        }
        let object_index: HashMap<String, usize> = objects
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, o)| (o, i))
            .collect();
        let mut raw: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for (id, s, t) in morphisms {
            let s = *object_index.get(&s).ok_or(Error::UnknownObject(s))?;
            let t = *object_index.get(&t).ok_or(Error::UnknownObject(t))?;
            if raw.insert(id.clone(), (s, t)).is_some() {
                return Err(Error::input(format!("morphism `{id}` listed twice")));
            }
        }
        let mut identity_ids = Vec::with_capacity(objects.len());
        for (i, o) in objects.iter().enumerate() {
            if let Some(o2) = identities.keys().find(|k| !object_index.contains_key(*k)) {
                return Err(Error::UnknownObject(o2.clone()));
            }
            let id = identities
                .get(o)
                .cloned()
                .unwrap_or_else(|| identity_name(o));
            match raw.get(&id) {
                Some(&(s, t)) if s == i && t == i => {}
                Some(_) => {
                    return Err(Error::input(format!(
                        "identity `{id}` must be an endomorphism of `{o}`"
                    )))
                }
                None if identities.contains_key(o) => return Err(Error::UnknownMorphism(id)),
                None => {
                    raw.insert(id.clone(), (i, i));
                }
            }
            identity_ids.push(id);
        }
        let morphisms: Vec<Morphism> = raw
            .into_iter()
            .map(|(id, (src, tgt))| Morphism { id, src, tgt })
            .collect();
        let morphism_index: HashMap<String, usize> = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.clone(), i))
            .collect();
        let identities: Vec<usize> = identity_ids.iter().map(|id| morphism_index[id]).collect();
        let n = morphisms.len();
        let mut comp = vec![NONE; n * n];
        let lookup = |id: &str| {
            morphism_index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownMorphism(id.to_string()))
        };
        for (g, f, gf) in composition {
            let (gi, fi, gfi) = (lookup(&g)?, lookup(&f)?, lookup(&gf)?);
            let slot = &mut comp[gi * n + fi];
            if *slot != NONE && *slot != gfi {
                return Err(Error::input(format!(
                    "composite {g}∘{f} listed twice with different values"
                )));
            }
            *slot = gfi;
        }
        for (f, m) in morphisms.iter().enumerate() {
            let left = identities[m.tgt] * n + f;
            if comp[left] == NONE {
                comp[left] = f;
            }
            let right = f * n + identities[m.src];
            if comp[right] == NONE {
                comp[right] = f;
            }
        }
        let mut out_of = vec![Vec::new(); objects.len()];
        let mut into = vec![Vec::new(); objects.len()];
        for (f, m) in morphisms.iter().enumerate() {
            out_of[m.src].push(f);
            into[m.tgt].push(f);
        }
        Ok(FinCat {
            objects,
            morphisms,
            identities,
            comp,
            object_index,
            morphism_index,
            out_of,
            into,
        })
    }

    /// A poset category on `elements` with `leq(i, j)` meaning `i <= j`.
    /// Non-identity morphisms are named `a<b`.
    pub fn from_poset(elements: &[String], leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = elements.len();
        let name = |i: usize, j: usize| {
            if i == j {
                identity_name(&elements[i])
            } else {
                format!("{}<{}", elements[i], elements[j])
            }
        };
        let mut morphisms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    if i != j && leq(j, i) {
                        return Err(Error::input("relation is not antisymmetric"));
                    }
                    morphisms.push((name(i, j), elements[i].clone(), elements[j].clone()));
                }
            }
        }
        let mut composition = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if leq(i, j) && leq(j, k) {
                        if !leq(i, k) {
                            return Err(Error::input("relation is not transitive"));
                        }
                        composition.push((name(j, k), name(i, j), name(i, k)));
                    }
                }
            }
        }
        FinCat::new(elements.to_vec(), morphisms, &BTreeMap::new(), composition)
    }

    /// One object `*` with morphisms `elements` and `mult(a, b) = a·b`; the
    /// first element must be the unit.
    pub fn monoid(elements: &[String], mult: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let star = "*".to_string();
        let morphisms = elements
            .iter()
            .map(|e| (e.clone(), star.clone(), star.clone()))
            .collect();
        let mut composition = Vec::new();
        for (a, ea) in elements.iter().enumerate() {
            for (b, eb) in elements.iter().enumerate() {
                composition.push((ea.clone(), eb.clone(), elements[mult(a, b)].clone()));
            }
        }
        let identities = BTreeMap::from([(star.clone(), elements[0].clone())]);
        FinCat::new(vec![star], morphisms, &identities, composition)
    }

    pub fn discrete(objects: &[String]) -> Result<Self> {
        FinCat::new(objects.to_vec(), Vec::new(), &BTreeMap::new(), Vec::new())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object(&self, i: usize) -> &str {
        &self.objects[i]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, f: usize) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn src(&self, f: usize) -> usize {
        self.morphisms[f].src
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.morphisms[f].tgt
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.src(f)] == f
    }

    pub fn object_id(&self, name: &str) -> Result<usize> {
        self.object_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism_id(&self, name: &str) -> Result<usize> {
        self.morphism_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    /// `g∘f`, assuming the tables are valid and the pair composes.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        let gf = self.comp[g * self.morphisms.len() + f];
        debug_assert!(gf != NONE, "composing a non-composable pair");
        gf
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        let gf = self.comp[g * self.morphisms.len() + f];
        (gf != NONE).then_some(gf)
    }

    /// Morphisms with source `x`.
    pub fn outgoing(&self, x: usize) -> &[usize] {
        &self.out_of[x]
    }

    /// Morphisms with target `x`.
    pub fn incoming(&self, x: usize) -> &[usize] {
        &self.into[x]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.out_of[a]
            .iter()
            .copied()
            .filter(|f| self.tgt(*f) == b)
            .collect()
    }

    /// Composable `k`-chains `φ1, .., φk` (identities allowed). A level-0
    /// chain is represented by the identity of its object.
    pub fn chains(&self, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return self.identities.iter().map(|i| vec![*i]).collect();
        }
        let mut level: Vec<Vec<usize>> = (0..self.morphisms.len()).map(|f| vec![f]).collect();
        for _ in 1..k {
            level = level
                .into_iter()
                .flat_map(|c| {
                    let end = self.tgt(*c.last().unwrap());
                    self.out_of[end].iter().map(move |g| {
                        let mut next = c.clone();
                        next.push(*g);
                        next
                    })
                })
                .collect();
        }
        level
    }

    pub fn chain_start(&self, c: &[usize]) -> usize {
        self.src(c[0])
    }

    /// Last object of a level-`k` chain.
    pub fn chain_end(&self, k: usize, c: &[usize]) -> usize {
        if k == 0 {
            self.src(c[0])
        } else {
            self.tgt(c[k - 1])
        }
    }

    /// `d_i` of a level-`k` chain, `k >= 1`.
    pub fn chain_face(&self, k: usize, c: &[usize], i: usize) -> Vec<usize> {
        if k == 1 {
            let x = if i == 0 {
                self.tgt(c[0])
            } else {
                self.src(c[0])
            };
            return vec![self.identities[x]];
        }
        let mut out = c.to_vec();
        if i == 0 {
            out.remove(0);
        } else if i == k {
            out.pop();
        } else {
            let gf = self.compose(c[i], c[i - 1]);
            out.splice(i - 1..=i, [gf]);
        }
        out
    }

    /// `s_i` of a level-`k` chain: insert an identity at the `i`-th object.
    pub fn chain_degeneracy(&self, k: usize, c: &[usize], i: usize) -> Vec<usize> {
        if k == 0 {
            // The identity of the object, now read as a 1-chain.
            return c.to_vec();
        }
        let x = if i < k {
            self.src(c[i])
        } else {
            self.tgt(c[k - 1])
        };
        let mut out = c.to_vec();
        out.insert(i, self.identities[x]);
        out
    }

    pub fn chain_label(&self, k: usize, c: &[usize]) -> String {
        if k == 0 {
            return self.objects[self.src(c[0])].clone();
        }
        c.iter()
            .map(|f| self.morphisms[*f].id.as_str())
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Full subcategory on the given objects (kept in the given order's
    /// sorted form) with its inclusion functor.
    pub fn full_subcategory(&self, keep: &[usize]) -> Result<(FinCat, Vec<usize>)> {
        let mut inside = vec![false; self.objects.len()];
        for x in keep {
            inside[*x] = true;
        }
        let objects = keep.iter().map(|x| self.objects[*x].clone()).collect();
        let mors: Vec<usize> = (0..self.morphisms.len())
            .filter(|f| inside[self.src(*f)] && inside[self.tgt(*f)])
            .collect();
        let morphisms = mors
            .iter()
            .map(|f| {
                let m = &self.morphisms[*f];
                (
                    m.id.clone(),
                    self.objects[m.src].clone(),
                    self.objects[m.tgt].clone(),
                )
            })
            .collect();
        let identities = keep
            .iter()
            .map(|x| {
                (
                    self.objects[*x].clone(),
                    self.morphisms[self.identities[*x]].id.clone(),
                )
            })
            .collect();
        let mut composition = Vec::new();
        for g in &mors {
            for f in &mors {
                if let Some(gf) = self.try_compose(*g, *f) {
                    let id = |h: usize| self.morphisms[h].id.clone();
                    composition.push((id(*g), id(*f), id(gf)));
                }
            }
        }
        let sub = FinCat::new(objects, morphisms, &identities, composition)?;
        let map = sub.objects.iter().map(|o| self.object_index[o]).collect();
        Ok((sub, map))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::input("category must be an object"))?;
        let strings = |key: &str| -> Result<Vec<String>> {
            match obj.get(key) {
                None => Ok(Vec::new()),
                Some(Value::Array(xs)) => xs
                    .iter()
                    .map(|x| {
                        x.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| Error::input(format!("{key} must hold strings")))
                    })
                    .collect(),
                Some(_) => Err(Error::input(format!("{key} must be a list"))),
            }
        };
        let objects = strings("objects")?;
        let mut morphisms = Vec::new();
        for m in obj
            .get("morphisms")
            .and_then(Value::as_array)
            .map(Vec::as_slice)
            .unwrap_or(&[])
        {
            let field = |k: &str| {
                m.get(k)
                    .and_then(Value::as_str)
                    .map(str::to_string)
                    .ok_or_else(|| Error::input(format!("morphism needs `{k}`")))
            };
            morphisms.push((field("id")?, field("src")?, field("tgt")?));
        }
        let mut composition = Vec::new();
        for row in obj
            .get("composition")
            .and_then(Value::as_array)
            .map(Vec::as_slice)
            .unwrap_or(&[])
        {
            let parts: Option<Vec<String>> = row.as_array().map(|r| {
                r.iter()
                    .filter_map(|x| x.as_str().map(str::to_string))
                    .collect()
            });
            match parts {
                Some(p) if p.len() == 3 => {
                    composition.push((p[0].clone(), p[1].clone(), p[2].clone()))
                }
                _ => return Err(Error::input("composition rows must be [g, f, g∘f]")),
            }
        }
        let mut identities = BTreeMap::new();
        if let Some(ids) = obj.get("identities") {
            for (o, m) in ids
                .as_object()
                .ok_or_else(|| Error::input("identities must be an object"))?
            {
                identities.insert(
                    o.clone(),
                    m.as_str()
                        .ok_or_else(|| Error::input("identity ids must be strings"))?
                        .to_string(),
                );
            }
        }
        FinCat::new(objects, morphisms, &identities, composition)
    }

    pub fn to_json(&self) -> Value {
        let n = self.morphisms.len();
        let morphisms: Vec<Value> = self
            .morphisms
            .iter()
            .map(|m| json!({"id": m.id, "src": self.objects[m.src], "tgt": self.objects[m.tgt]}))
            .collect();
        let mut composition = Vec::new();
        for g in 0..n {
            for f in 0..n {
                if let Some(gf) = self.try_compose(g, f) {
                    composition.push(json!([
                        self.morphisms[g].id,
                        self.morphisms[f].id,
                        self.morphisms[gf].id
                    ]));
                }
            }
        }
        let identities: serde_json::Map<String, Value> = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| {
                (
                    o.clone(),
                    Value::String(self.morphisms[self.identities[i]].id.clone()),
                )
            })
            .collect();
        json!({"objects": self.objects, "morphisms": morphisms, "identities": identities, "composition": composition})
    }
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("objects", &self.objects)
            .field(
                "morphisms",
                &self.morphisms.iter().map(|m| &m.id).collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Checks typing, identity laws and associativity, in that order.
pub fn validate_category(cat: &FinCat) -> Result<(), CategoryViolation> {
    let n = cat.morphisms.len();
    let id = |f: usize| cat.morphisms[f].id.clone();
    for g in 0..n {
        for f in 0..n {
            let composable = cat.tgt(f) == cat.src(g);
            match (composable, cat.try_compose(g, f)) {
                (true, None) => {
                    return Err(CategoryViolation::MissingComposite { g: id(g), f: id(f) })
                }
                (false, Some(_)) => {
                    return Err(CategoryViolation::NotComposable { g: id(g), f: id(f) })
                }
                (true, Some(gf)) if cat.src(gf) != cat.src(f) || cat.tgt(gf) != cat.tgt(g) => {
                    return Err(CategoryViolation::Typing {
                        g: id(g),
                        f: id(f),
                        composite: id(gf),
                    })
                }
                _ => {}
            }
        }
    }
    for f in 0..n {
        let (l, r) = (cat.identity(cat.tgt(f)), cat.identity(cat.src(f)));
        if cat.compose(l, f) != f {
            return Err(CategoryViolation::Identity {
                identity: id(l),
                other: id(f),
            });
        }
        if cat.compose(f, r) != f {
            return Err(CategoryViolation::Identity {
                identity: id(r),
                other: id(f),
            });
        }
    }
    for f in 0..n {
        for &g in cat.outgoing(cat.tgt(f)) {
            let gf = cat.compose(g, f);
            for &h in cat.outgoing(cat.tgt(g)) {
                if cat.compose(cat.compose(h, g), f) != cat.compose(h, gf) {
                    return Err(CategoryViolation::Associativity {
                        h: id(h),
                        g: id(g),
                        f: id(f),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Object receiving exactly one morphism from every object, first by order.
pub fn has_final_object(cat: &FinCat) -> Option<usize> {
    (0..cat.object_count()).find(|&t| {
        let mut counts = vec![0usize; cat.object_count()];
        for f in cat.incoming(t) {
            counts[cat.src(*f)] += 1;
        }
        counts.iter().all(|c| *c == 1)
    })
}
