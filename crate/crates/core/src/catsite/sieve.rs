use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use super::functor::{slice, Functor};
use super::FinCat;
use crate::error::{Error, Result};

/// A set of morphisms into `base`, closed under precomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sieve {
    pub base: usize,
    /// Sorted morphism indices.
    pub members: Vec<usize>,
}

impl Sieve {
    pub fn maximal(cat: &FinCat, x: usize) -> Sieve {
        Sieve {
            base: x,
            members: cat.incoming(x).to_vec(),
        }
    }

    pub fn empty(x: usize) -> Sieve {
        Sieve {
            base: x,
            members: Vec::new(),
        }
    }

    pub fn contains(&self, f: usize) -> bool {
        self.members.binary_search(&f).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_maximal(&self, cat: &FinCat) -> bool {
        self.members.len() == cat.incoming(self.base).len()
    }

    /// Sources of the members, sorted and deduplicated.
    pub fn member_objects(&self, cat: &FinCat) -> Vec<usize> {
        let set: BTreeSet<usize> = self.members.iter().map(|f| cat.src(*f)).collect();
        set.into_iter().collect()
    }

    /// `f*S = { g | f∘g ∈ S }` on the source of `f`.
    pub fn pullback(&self, cat: &FinCat, f: usize) -> Sieve {
        let y = cat.src(f);
        let members = cat
            .incoming(y)
            .iter()
            .copied()
            .filter(|g| self.contains(cat.compose(f, *g)))
            .collect();
        Sieve { base: y, members }
    }

    pub fn is_closed(&self, cat: &FinCat) -> bool {
        self.members.iter().all(|f| {
            cat.tgt(*f) == self.base
                && cat
                    .incoming(cat.src(*f))
                    .iter()
                    .all(|g| self.contains(cat.compose(*f, *g)))
        })
    }

    /// Members contained in `self` are all in `other`.
    pub fn is_subset(&self, other: &Sieve) -> bool {
        self.members.iter().all(|f| other.contains(*f))
    }

    pub fn label(&self, cat: &FinCat) -> String {
        let ids: Vec<&str> = self
            .members
            .iter()
            .map(|f| cat.morphism(*f).id.as_str())
            .collect();
        format!("[{}]", ids.join(","))
    }
}

/// Smallest sieve on `x` containing `generators`.
pub fn generate_sieve(cat: &FinCat, x: usize, generators: &[usize]) -> Result<Sieve> {
    let mut members = BTreeSet::new();
    for &g in generators {
        if cat.tgt(g) != x {
            return Err(Error::input(format!(
                "generator `{}` does not target `{}`",
                cat.morphism(g).id,
                cat.object(x)
            )));
        }
        for &h in cat.incoming(cat.src(g)) {
            members.insert(cat.compose(g, h));
        }
    }
    Ok(Sieve {
        base: x,
        members: members.into_iter().collect(),
    })
}

/// Every sieve on `x`, ordered by size and then members.
pub fn all_sieves(cat: &FinCat, x: usize) -> Vec<Sieve> {
    let mut seen: HashSet<Sieve> = HashSet::new();
    let mut frontier = vec![Sieve::empty(x)];
    seen.insert(Sieve::empty(x));
    while let Some(s) = frontier.pop() {
        for &f in cat.incoming(x) {
            if !s.contains(f) {
                let mut gens = s.members.clone();
                gens.push(f);
                let t = generate_sieve(cat, x, &gens).expect("members target x");
                if seen.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
    }
    let mut out: Vec<Sieve> = seen.into_iter().collect();
    out.sort_by(|a, b| (a.len(), &a.members).cmp(&(b.len(), &b.members)));
    out
}

/// The sieve as a full subcategory of the slice over its base, with the
/// projection into `cat`.
pub fn sieve_category(cat: &Arc<FinCat>, s: &Sieve) -> Result<Functor> {
    let proj = slice(cat, s.base)?;
    let keep: Vec<usize> = s
        .members
        .iter()
        .map(|f| proj.source.object_id(&cat.morphism(*f).id))
        .collect::<Result<_>>()?;
    let mut keep = keep;
    keep.sort_unstable();
    let inc = Functor::inclusion(proj.source.clone(), &keep)?;
    Ok(inc.then(&proj))
}

/// A finite category with saturated covering sieves.
#[derive(Clone, Debug)]
pub struct Site {
    cat: Arc<FinCat>,
    coverings: Vec<Vec<Sieve>>,
    lookup: Vec<HashSet<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SiteViolation {
    MissingMaximal {
        object: String,
    },
    Stability {
        object: String,
        sieve: String,
        morphism: String,
    },
    Transitivity {
        object: String,
        sieve: String,
        covering: String,
    },
}

impl fmt::Display for SiteViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteViolation::MissingMaximal { object } => {
                write!(f, "maximal sieve on `{object}` is not covering")
            }
            SiteViolation::Stability {
                object,
                sieve,
                morphism,
            } => {
                write!(f, "pullback of covering sieve {sieve} on `{object}` along `{morphism}` is not covering")
            }
            SiteViolation::Transitivity {
                object,
                sieve,
                covering,
            } => write!(
                f,
                "sieve {sieve} on `{object}` is locally covering over {covering} but not covering"
            ),
        }
    }
}

impl SiteViolation {
    pub fn kind(&self) -> &'static str {
        match self {
            SiteViolation::MissingMaximal { .. } => "maximal",
            SiteViolation::Stability { .. } => "stability",
            SiteViolation::Transitivity { .. } => "transitivity",
        }
    }
}

impl Site {
    /// `coverings[x]` lists the covering sieves on object `x`.
    pub fn new(cat: Arc<FinCat>, coverings: Vec<Vec<Sieve>>) -> Result<Self> {
        if coverings.len() != cat.object_count() {
            return Err(Error::input("one covering list per object required"));
        }
        let mut sorted = Vec::with_capacity(coverings.len());
        for (x, list) in coverings.into_iter().enumerate() {
            let mut set: Vec<Sieve> = list
                .into_iter()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            for s in &set {
                if s.base != x || !s.is_closed(&cat) {
                    return Err(Error::input(format!(
                        "covering on `{}` is not a sieve on it",
                        cat.object(x)
                    )));
                }
            }
            set.sort_by(|a, b| (a.len(), &a.members).cmp(&(b.len(), &b.members)));
            sorted.push(set);
        }
        let lookup = sorted
            .iter()
            .map(|l| l.iter().map(|s| s.members.clone()).collect())
            .collect();
        Ok(Site {
            cat,
            coverings: sorted,
            lookup,
        })
    }

    /// Covering sieves are exactly those accepted by `covers`.
    pub fn saturated(cat: Arc<FinCat>, covers: impl Fn(usize, &Sieve) -> bool) -> Result<Self> {
        let coverings = (0..cat.object_count())
            .map(|x| {
                all_sieves(&cat, x)
                    .into_iter()
                    .filter(|s| covers(x, s))
                    .collect()
            })
            .collect();
        Site::new(cat, coverings)
    }

    /// Only maximal sieves cover.
    pub fn trivial(cat: Arc<FinCat>) -> Self {
        let coverings = (0..cat.object_count())
            .map(|x| vec![Sieve::maximal(&cat, x)])
            .collect();
        Site::new(cat, coverings).expect("maximal sieves")
    }

    pub fn category(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn coverings(&self, x: usize) -> &[Sieve] {
        &self.coverings[x]
    }

    pub fn is_covering(&self, s: &Sieve) -> bool {
        self.lookup[s.base].contains(&s.members)
    }

    /// Category JSON with an optional `"coverings": {obj: [[generators], ..]}`;
    /// without it only maximal sieves cover.
    pub fn from_json(v: &Value) -> Result<Self> {
        let cat = Arc::new(FinCat::from_json(v)?);
        let Some(cov) = v.get("coverings") else {
            return Ok(Site::trivial(cat));
        };
        let cov = cov
            .as_object()
            .ok_or_else(|| Error::input("coverings must be an object"))?;
        let mut coverings: Vec<Vec<Sieve>> = (0..cat.object_count())
            .map(|x| vec![Sieve::maximal(&cat, x)])
            .collect();
        for (o, lists) in cov {
            let x = cat.object_id(o)?;
            for gens in lists
                .as_array()
                .ok_or_else(|| Error::input("coverings per object must be a list"))?
            {
                let gens = gens
                    .as_array()
                    .ok_or_else(|| Error::input("a covering is a list of generating morphisms"))?
                    .iter()
                    .map(|g| {
                        g.as_str()
                            .ok_or_else(|| Error::input("generators must be strings"))
                            .and_then(|g| cat.morphism_id(g))
                    })
                    .collect::<Result<Vec<_>>>()?;
                coverings[x].push(generate_sieve(&cat, x, &gens)?);
            }
        }
        Site::new(cat, coverings)
    }
}

/// Checks maximality, pullback stability and transitivity exhaustively.
pub fn validate_site(site: &Site) -> Result<(), SiteViolation> {
    let cat = &*site.cat;
    let name = |x: usize| cat.object(x).to_string();
    for x in 0..cat.object_count() {
        if !site.is_covering(&Sieve::maximal(cat, x)) {
            return Err(SiteViolation::MissingMaximal { object: name(x) });
        }
    }
    for x in 0..cat.object_count() {
        for s in site.coverings(x) {
            for &f in cat.incoming(x) {
                if !site.is_covering(&s.pullback(cat, f)) {
                    return Err(SiteViolation::Stability {
                        object: name(x),
                        sieve: s.label(cat),
                        morphism: cat.morphism(f).id.clone(),
                    });
                }
            }
        }
    }
    for x in 0..cat.object_count() {
        let sieves = all_sieves(cat, x);
        for s in site.coverings(x) {
            for r in &sieves {
                if site.is_covering(r) {
                    continue;
                }
                if s.members
                    .iter()
                    .all(|f| site.is_covering(&r.pullback(cat, *f)))
                {
                    return Err(SiteViolation::Transitivity {
                        object: name(x),
                        sieve: r.label(cat),
                        covering: s.label(cat),
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catsite::validate_category;

    fn vee() -> Arc<FinCat> {
        // a, b below t.
        let els: Vec<String> = ["a", "b", "t"].iter().map(|s| s.to_string()).collect();
        Arc::new(FinCat::from_poset(&els, |i, j| i == j || j == 2).unwrap())
    }

    #[test]
    fn generation() {
        let c = vee();
        let t = c.object_id("t").unwrap();
        let id = c.identity(t);
        assert_eq!(generate_sieve(&c, t, &[id]).unwrap(), Sieve::maximal(&c, t));
        assert!(generate_sieve(&c, t, &[]).unwrap().is_empty());
        let a_t = c.morphism_id("a<t").unwrap();
        let s = generate_sieve(&c, t, &[a_t]).unwrap();
        assert_eq!(s.members, vec![a_t]);
        assert!(generate_sieve(&c, c.object_id("a").unwrap(), &[a_t]).is_err());
        assert_eq!(all_sieves(&c, t).len(), 5);
    }

    #[test]
    fn sieve_category_of_a_cover() {
        let c = vee();
        let t = c.object_id("t").unwrap();
        let s = generate_sieve(
            &c,
            t,
            &[c.morphism_id("a<t").unwrap(), c.morphism_id("b<t").unwrap()],
        )
        .unwrap();
        let f = sieve_category(&c, &s).unwrap();
        assert!(validate_category(&f.source).is_ok());
        assert!(f.validate().is_ok());
        assert_eq!(f.source.object_count(), 2);
        assert_eq!(f.source.morphism_count(), 2);
    }

    #[test]
    fn site_axioms() {
        let c = vee();
        assert!(validate_site(&Site::trivial(c.clone())).is_ok());
        let t = c.object_id("t").unwrap();
        let a_t = c.morphism_id("a<t").unwrap();
        let b_t = c.morphism_id("b<t").unwrap();
        let mut cov: Vec<Vec<Sieve>> = (0..3).map(|x| vec![Sieve::maximal(&c, x)]).collect();
        cov[t].push(generate_sieve(&c, t, &[a_t, b_t]).unwrap());
        let site = Site::new(c.clone(), cov.clone()).unwrap();
        assert!(validate_site(&site).is_ok());

        // A cover by `a` alone: its pullback along `b<t` is empty.
        let mut bad = cov.clone();
        bad[t].push(generate_sieve(&c, t, &[a_t]).unwrap());
        let v = validate_site(&Site::new(c.clone(), bad).unwrap()).unwrap_err();
        assert_eq!(
            v,
            SiteViolation::Stability {
                object: "t".into(),
                sieve: "[a<t]".into(),
                morphism: "b<t".into()
            }
        );

        let mut missing = cov;
        missing[0].clear();
        assert_eq!(
            validate_site(&Site::new(c, missing).unwrap())
                .unwrap_err()
                .kind(),
            "maximal"
        );
    }
}
