use std::path::Path;
use std::sync::Arc;

use serde_json::Value;
use toporeal_core::catsite::{
    generate_sieve, site_from_finite_space, validate_category, validate_site, FinCat, FiniteSpace,
    Sieve, Site,
};
use toporeal_core::gallery::{self, FunctorSpec};
use toporeal_core::presheaf::{CovariantDiagram, Presheaf, PresheafMap};
use toporeal_core::realization::order_complex_functor;
use toporeal_core::{Error, Result};

use crate::Opts;

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{} is not valid JSON: {e}", path.display())))
}

enum FunctorSource {
    Point,
    OrderComplex,
    File(Value),
}

/// Everything a command may need, loaded and validated.
pub struct Inputs {
    pub site: Site,
    pub space: Option<FiniteSpace>,
    pub dim_cap: usize,
    pub max_deg: usize,
    functor: FunctorSource,
    pub presheaves: Vec<Presheaf>,
    pub object: Option<usize>,
    pub sieve: Option<Sieve>,
    map: Option<Value>,
}

impl Inputs {
    pub fn load(o: &Opts) -> Result<Self> {
        let example = o
            .example
            .as_deref()
            .map(|n| gallery::instance(n, o.dim_cap.unwrap_or(4).max(1)))
            .transpose()?;
        let dim_cap = o
            .dim_cap
            .or(example.as_ref().map(|e| e.dim_cap))
            .unwrap_or(4);
        if dim_cap == 0 {
            return Err(Error::input("dim-cap must be at least 1"));
        }
        let max_deg = o.max_deg.unwrap_or(dim_cap - 1);
        if max_deg > dim_cap - 1 {
            return Err(Error::DegreeOutOfRange {
                degree: max_deg,
                available: dim_cap - 1,
            });
        }

        let (site, space) = if let Some(p) = &o.space {
            let space = FiniteSpace::from_json(&read_json(p)?)?;
            (site_from_finite_space(&space)?, Some(space))
        } else if let Some(p) = &o.cat {
            let v = read_json(p)?;
            let cat = FinCat::from_json(&v)?;
            validate_category(&cat).map_err(|e| Error::validation(format!("{}: {e}", e.kind())))?;
            let site = Site::from_json(&v)?;
            validate_site(&site).map_err(|e| Error::validation(format!("{}: {e}", e.kind())))?;
            (site, None)
        } else if let Some(e) = &example {
            (e.site.clone(), e.space.clone())
        } else {
            return Err(Error::input(
                "one of --cat, --space or --example is required",
            ));
        };
        let cat = site.category().clone();

        let functor = match o.functor.as_deref() {
            Some("point") => FunctorSource::Point,
            Some("order-complex") => FunctorSource::OrderComplex,
            Some(path) => FunctorSource::File(read_json(Path::new(path))?),
            None => match example.as_ref().map(|e| &e.functor) {
                Some(FunctorSpec::OrderComplex) => FunctorSource::OrderComplex,
                _ => FunctorSource::Point,
            },
        };
        if matches!(functor, FunctorSource::OrderComplex) && space.is_none() {
            return Err(Error::input(
                "the order-complex functor needs a finite space",
            ));
        }

        let mut presheaves = Vec::new();
        for p in &o.presheaf {
            let g = Presheaf::from_json(&read_json(p)?, cat.clone(), dim_cap)?;
            g.validate()?;
            presheaves.push(g);
        }
        if presheaves.is_empty() && o.cat.is_none() && o.space.is_none() {
            if let Some(e) = &example {
                presheaves.push(e.presheaf.clone());
            }
        }

        let object = match (&o.object, example.as_ref().and_then(|e| e.object.clone())) {
            (Some(n), _) => Some(cat.object_id(n)?),
            (None, Some(n)) if o.sieve.is_none() => Some(cat.object_id(&n)?),
            _ => None,
        };
        let sieve = match &o.sieve {
            Some(p) => {
                let x = object.ok_or_else(|| Error::input("--sieve needs --object"))?;
                let gens = read_json(p)?;
                let gens = gens
                    .as_array()
                    .ok_or_else(|| Error::input("a sieve file is a list of morphism ids"))?
                    .iter()
                    .map(|g| {
                        g.as_str()
                            .ok_or_else(|| Error::input("morphism ids must be strings"))
                            .and_then(|s| cat.morphism_id(s))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(generate_sieve(&cat, x, &gens)?)
            }
            None => match &example {
                Some(e) if o.object.is_none() => e.sieve()?,
                _ => None,
            },
        };
        let map = o.map.as_deref().map(read_json).transpose()?;
        Ok(Inputs {
            site,
            space,
            dim_cap,
            max_deg,
            functor,
            presheaves,
            object,
            sieve,
            map,
        })
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        self.site.category()
    }

    pub fn functor(&self) -> Result<CovariantDiagram> {
        let cat = self.cat().clone();
        let f = match &self.functor {
            FunctorSource::Point => CovariantDiagram::terminal(cat, self.dim_cap),
            FunctorSource::OrderComplex => {
                let f = order_complex_functor(
                    self.space.as_ref().expect("checked at load"),
                    self.dim_cap,
                )?;
                let actions = (0..cat.morphism_count())
                    .map(|m| f.action(m).clone())
                    .collect();
                CovariantDiagram::new(cat, f.values().to_vec(), actions)?
            }
            FunctorSource::File(v) => CovariantDiagram::from_json(v, cat, self.dim_cap)?,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn functor_name(&self) -> &'static str {
        match self.functor {
            FunctorSource::Point => "point",
            FunctorSource::OrderComplex => "order-complex",
            FunctorSource::File(_) => "file",
        }
    }

    pub fn presheaf(&self, i: usize) -> Presheaf {
        self.presheaves
            .get(i)
            .cloned()
            .unwrap_or_else(|| Presheaf::terminal(self.cat().clone(), self.dim_cap))
    }

    pub fn map(&self, source: Arc<Presheaf>, target: Arc<Presheaf>) -> Result<Option<PresheafMap>> {
        let Some(v) = &self.map else { return Ok(None) };
        let m = PresheafMap::from_json(v, source, target)?;
        m.validate()?;
        Ok(Some(m))
    }

    pub fn has_map(&self) -> bool {
        self.map.is_some()
    }
}
