use std::collections::BTreeMap;
use std::sync::Arc;

use super::FinCat;
use crate::error::{Error, Result};

/// A functor between finite categories, given on objects and morphisms.
#[derive(Clone, Debug)]
pub struct Functor {
    pub source: Arc<FinCat>,
    pub target: Arc<FinCat>,
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl Functor {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Result<Self> {
        let f = Functor {
            source,
            target,
            objects,
            morphisms,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(cat: Arc<FinCat>) -> Self {
        let objects = (0..cat.object_count()).collect();
        let morphisms = (0..cat.morphism_count()).collect();
        Functor {
            source: cat.clone(),
            target: cat,
            objects,
            morphisms,
        }
    }

    /// Inclusion of a full subcategory built by [`FinCat::full_subcategory`].
    pub fn inclusion(cat: Arc<FinCat>, keep: &[usize]) -> Result<Self> {
        let (sub, objects) = cat.full_subcategory(keep)?;
        let morphisms = sub
            .morphisms()
            .iter()
            .map(|m| cat.morphism_id(&m.id))
            .collect::<Result<_>>()?;
        Ok(Functor {
            source: Arc::new(sub),
            target: cat,
            objects,
            morphisms,
        })
    }

    pub fn on_object(&self, x: usize) -> usize {
        self.objects[x]
    }

    pub fn on_morphism(&self, f: usize) -> usize {
        self.morphisms[f]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Functor) -> Functor {
        Functor {
            source: self.source.clone(),
            target: other.target.clone(),
            objects: self.objects.iter().map(|x| other.objects[*x]).collect(),
            morphisms: self.morphisms.iter().map(|f| other.morphisms[*f]).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = (&*self.source, &*self.target);
        if self.objects.len() != a.object_count() || self.morphisms.len() != a.morphism_count() {
            return Err(Error::input("functor tables have the wrong size"));
        }
        if self.objects.iter().any(|x| *x >= b.object_count())
            || self.morphisms.iter().any(|f| *f >= b.morphism_count())
        {
            return Err(Error::input("functor image out of range"));
        }
        for (f, m) in a.morphisms().iter().enumerate() {
            let g = self.morphisms[f];
            if b.src(g) != self.objects[m.src] || b.tgt(g) != self.objects[m.tgt] {
                return Err(Error::validation(format!(
                    "functor breaks endpoints of `{}`",
                    m.id
                )));
            }
        }
        for x in 0..a.object_count() {
            if self.morphisms[a.identity(x)] != b.identity(self.objects[x]) {
                return Err(Error::validation(format!(
                    "functor does not preserve the identity of `{}`",
                    a.object(x)
                )));
            }
        }
        for f in 0..a.morphism_count() {
            for &g in a.outgoing(a.tgt(f)) {
                if self.morphisms[a.compose(g, f)]
                    != b.compose(self.morphisms[g], self.morphisms[f])
                {
                    return Err(Error::validation(format!(
                        "functor does not preserve the composite of `{}` and `{}`",
                        a.morphism(g).id,
                        a.morphism(f).id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The slice `cat/x` with its projection. Objects are named by the morphism
/// into `x`; a morphism `u` from `f` to `g` (with `g∘u = f`) is named `u:f>g`.
pub fn slice(cat: &Arc<FinCat>, x: usize) -> Result<Functor> {
    if x >= cat.object_count() {
        return Err(Error::UnknownObject(format!("#{x}")));
    }
    let over: &[usize] = cat.incoming(x);
    let name = |f: usize| cat.morphism(f).id.clone();
    let mor_name = |u: usize, f: usize, g: usize| {
        if cat.is_identity(u) && f == g {
            format!("id_{}", name(f))
        } else {
            format!("{}:{}>{}", name(u), name(f), name(g))
        }
    };
    let mut morphisms = Vec::new();
    // (slice morphism name, u, f, g)
    let mut records: Vec<(String, usize, usize, usize)> = Vec::new();
    for &f in over {
        for &g in over {
            for u in cat.hom(cat.src(f), cat.src(g)) {
                if cat.compose(g, u) == f {
                    let id = mor_name(u, f, g);
                    morphisms.push((id.clone(), name(f), name(g)));
                    records.push((id, u, f, g));
                }
            }
        }
    }
    let mut composition = Vec::new();
    for (vid, v, g, h) in &records {
        for (uid, u, f, g2) in &records {
            if g == g2 {
                let vu = cat.compose(*v, *u);
                composition.push((vid.clone(), uid.clone(), mor_name(vu, *f, *h)));
            }
        }
    }
    let objects: Vec<String> = over.iter().map(|f| name(*f)).collect();
    let identities: BTreeMap<String, String> = over
        .iter()
        .map(|f| (name(*f), format!("id_{}", name(*f))))
        .collect();
    let sl = Arc::new(FinCat::new(objects, morphisms, &identities, composition)?);
    let proj_objects = sl
        .objects()
        .iter()
        .map(|o| cat.src(cat.morphism_id(o).unwrap()))
        .collect();
    let by_name: BTreeMap<&str, usize> = records
        .iter()
        .map(|(id, u, _, _)| (id.as_str(), *u))
        .collect();
    let proj_morphisms = sl
        .morphisms()
        .iter()
        .map(|m| by_name[m.id.as_str()])
        .collect();
    Ok(Functor {
        source: sl,
        target: cat.clone(),
        objects: proj_objects,
        morphisms: proj_morphisms,
    })
}
