//! Built-in example instances.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::catsite::{generate_sieve, site_from_finite_space, FinCat, FiniteSpace, Sieve, Site};
use crate::error::{Error, Result};
use crate::presheaf::{CovariantDiagram, Presheaf, SetPresheaf};
use crate::realization::order_complex_functor;
use crate::sset::{GeneratorSet, SimplicialSet};

pub const NAMES: &[&str] = &[
    "sierpinski",
    "pseudo_circle",
    "interval_cover",
    "bz2",
    "action_z2_free",
    "point_site",
    "pseudo_circle_terminal",
    "pseudo_circle_constant2",
    "collapse",
    "pseudo_circle_order_complex",
    "pseudo_circle_constant_point_F",
];

/// Where the covariant diagram comes from.
#[derive(Clone, Debug)]
pub enum FunctorSpec {
    Point,
    OrderComplex,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: &'static str,
    pub description: &'static str,
    /// The command the instance is meant for.
    pub command: &'static str,
    pub space: Option<FiniteSpace>,
    pub site: Site,
    pub functor: FunctorSpec,
    pub presheaf: Presheaf,
    pub object: Option<String>,
    /// Generators of the sieve to check, by morphism id.
    pub sieve: Option<Vec<String>>,
    pub dim_cap: usize,
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

pub fn sierpinski_space() -> FiniteSpace {
    FiniteSpace::new(
        strings(&["o", "c"]),
        vec![vec![], strings(&["o"]), strings(&["o", "c"])],
    )
    .expect("sierpinski")
}

pub fn pseudo_circle_space() -> FiniteSpace {
    let opens = [
        &[][..],
        &["a"],
        &["b"],
        &["a", "b"],
        &["a", "b", "c"],
        &["a", "b", "d"],
        &["a", "b", "c", "d"],
    ];
    FiniteSpace::new(
        strings(&["a", "b", "c", "d"]),
        opens.iter().map(|o| strings(o)).collect(),
    )
    .expect("pseudo-circle")
}

/// An interval covered by three opens `{p,x}`, `{p,q,y}`, `{q,z}` that meet
/// in the open points `p` and `q`.
pub fn interval_cover_space() -> FiniteSpace {
    let minimal = [
        &["p"][..],
        &["q"],
        &["p", "x"],
        &["p", "q", "y"],
        &["q", "z"],
    ];
    let mut opens: BTreeSet<BTreeSet<&str>> = BTreeSet::new();
    opens.insert(BTreeSet::new());
    for _ in 0..minimal.len() {
        let current: Vec<BTreeSet<&str>> = opens.iter().cloned().collect();
        for o in &current {
            for m in &minimal {
                opens.insert(o.iter().copied().chain(m.iter().copied()).collect());
            }
        }
    }
    FiniteSpace::new(
        strings(&["p", "q", "x", "y", "z"]),
        opens
            .into_iter()
            .map(|o| o.into_iter().map(String::from).collect())
            .collect(),
    )
    .expect("interval cover")
}

/// `Z/2` as a one-object category.
pub fn z2() -> Arc<FinCat> {
    Arc::new(FinCat::monoid(&strings(&["e", "t"]), |a, b| a ^ b).expect("Z/2"))
}

pub fn point_category() -> Arc<FinCat> {
    Arc::new(FinCat::discrete(&strings(&["*"])).expect("point"))
}

/// Boundary of the 2-simplex.
pub fn circle(dim_cap: usize) -> SimplicialSet {
    GeneratorSet::from_faces(
        vec![strings(&["0", "1", "2"]), strings(&["01", "02", "12"])],
        &[
            ("01", &["1", "0"][..]),
            ("02", &["2", "0"][..]),
            ("12", &["2", "1"][..]),
        ],
    )
    .and_then(|g| g.expand(dim_cap))
    .expect("circle")
}

/// `{0,1}` at the whole space and a point elsewhere.
pub fn collapse_presheaf(cat: &Arc<FinCat>, top: usize) -> SetPresheaf {
    let values: Vec<Vec<String>> = (0..cat.object_count())
        .map(|y| {
            if y == top {
                strings(&["0", "1"])
            } else {
                strings(&["*"])
            }
        })
        .collect();
    let actions = cat
        .morphisms()
        .iter()
        .map(|m| {
            if m.src == top {
                vec![0, 1]
            } else {
                vec![0; values[m.tgt].len()]
            }
        })
        .collect();
    SetPresheaf::new(cat.clone(), values, actions).expect("collapse presheaf")
}

/// The named instance with presheaves built up to `cap`.
pub fn instance(name: &str, cap: usize) -> Result<Instance> {
    let space_site = |s: FiniteSpace| -> Result<(Option<FiniteSpace>, Site)> {
        let site = site_from_finite_space(&s)?;
        Ok((Some(s), site))
    };
    let (space, site) = match name {
        "sierpinski" => space_site(sierpinski_space())?,
        "interval_cover" => space_site(interval_cover_space())?,
        "bz2" | "action_z2_free" => (None, Site::trivial(z2())),
        "point_site" => (None, Site::trivial(point_category())),
        n if NAMES.contains(&n) => space_site(pseudo_circle_space())?,
        _ => {
            return Err(Error::input(format!(
                "unknown example `{name}`; known: {}",
                NAMES.join(", ")
            )))
        }
    };
    let cat = site.category().clone();
    let terminal = Presheaf::terminal(cat.clone(), cap);
    let whole = "{a,b,c,d}".to_string();
    let nontrivial = Some(strings(&["{a,b,c}<{a,b,c,d}", "{a,b,d}<{a,b,c,d}"]));
    let mut inst = Instance {
        name: NAMES.iter().find(|n| **n == name).expect("known name"),
        description: "",
        command: "realize",
        space,
        site,
        functor: FunctorSpec::OrderComplex,
        presheaf: terminal,
        object: None,
        sieve: None,
        dim_cap: cap,
    };
    match name {
        "sierpinski" => {
            inst.description = "order complex of the Sierpinski space against the terminal presheaf"
        }
        "pseudo_circle" => {
            inst.description = "order complex of the pseudo-circle against the terminal presheaf"
        }
        "pseudo_circle_terminal" => {
            inst.description =
                "realization of the order complex functor against the terminal presheaf"
        }
        "interval_cover" => {
            inst.description =
                "an interval covered by three opens; the order complex functor descends";
            inst.command = "descent-check";
        }
        "bz2" => {
            inst.description =
                "nerve of Z/2 as the realization of points over the one-object category";
            inst.functor = FunctorSpec::Point;
        }
        "action_z2_free" => {
            inst.description = "Z/2 acting freely on two points; the homotopy quotient is a point";
            inst.functor = FunctorSpec::Point;
            let g = SetPresheaf::new(cat.clone(), vec![strings(&["p", "q"])], {
                let t = cat.morphism_id("t")?;
                (0..cat.morphism_count())
                    .map(|f| if f == t { vec![1, 0] } else { vec![0, 1] })
                    .collect()
            })?;
            inst.presheaf = g.to_presheaf(cap);
        }
        "point_site" => {
            inst.description = "trivial base category with a circle as G";
            inst.functor = FunctorSpec::Point;
            inst.presheaf = Presheaf::constant(cat.clone(), Arc::new(circle(cap)));
        }
        "pseudo_circle_constant2" => {
            inst.description = "sheafification of the constant {0,1} presheaf on the pseudo-circle";
            inst.command = "sheafify";
            inst.presheaf =
                SetPresheaf::constant(cat.clone(), &strings(&["0", "1"])).to_presheaf(cap);
        }
        "collapse" => {
            inst.description =
                "{0,1} at the whole space and a point elsewhere; sheafifies to the terminal sheaf";
            inst.command = "sheafify";
            inst.presheaf = collapse_presheaf(&cat, cat.object_id(&whole)?).to_presheaf(cap);
        }
        "pseudo_circle_order_complex" => {
            inst.description = "covariant descent of the order complex functor on the two-open cover of the pseudo-circle";
            inst.command = "descent-check";
            inst.object = Some(whole);
            inst.sieve = nontrivial;
        }
        "pseudo_circle_constant_point_F" => {
            inst.description =
                "covariant descent of the constant point functor on every covering sieve";
            inst.command = "descent-check";
            inst.functor = FunctorSpec::Point;
        }
        _ => unreachable!(),
    }
    Ok(inst)
}

impl Instance {
    pub fn covariant(&self, dim_cap: usize) -> Result<CovariantDiagram> {
        let cat = self.site.category().clone();
        match (&self.functor, &self.space) {
            (FunctorSpec::OrderComplex, Some(s)) => {
                let f = order_complex_functor(s, dim_cap)?;
                // Rebuild on this instance's category so bases are shared.
                CovariantDiagram::new(
                    cat,
                    f.values().to_vec(),
                    (0..f.base().morphism_count())
                        .map(|m| f.action(m).clone())
                        .collect(),
                )
            }
            _ => Ok(CovariantDiagram::terminal(cat, dim_cap)),
        }
    }

    pub fn sieve(&self) -> Result<Option<Sieve>> {
        let cat = self.site.category();
        match (&self.object, &self.sieve) {
            (Some(o), Some(gens)) => {
                let x = cat.object_id(o)?;
                let gens = gens
                    .iter()
                    .map(|g| cat.morphism_id(g))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Some(generate_sieve(cat, x, &gens)?))
            }
            _ => Ok(None),
        }
    }

    /// File name and content of every input, plus a manifest.
    pub fn files(&self) -> Vec<(String, Value)> {
        let mut out = Vec::new();
        let mut args: Vec<String> = vec![self.command.to_string()];
        match &self.space {
            Some(s) => {
                out.push(("space.json".to_string(), s.to_json()));
                args.extend(["--space".into(), "space.json".into()]);
            }
            None => {
                out.push(("cat.json".to_string(), self.site.category().to_json()));
                args.extend(["--cat".into(), "cat.json".into()]);
            }
        }
        if matches!(self.functor, FunctorSpec::OrderComplex) {
            args.extend(["--functor".into(), "order-complex".into()]);
        }
        if self.command != "descent-check" {
            out.push(("presheaf.json".to_string(), self.presheaf.to_json()));
            args.extend(["--presheaf".into(), "presheaf.json".into()]);
        }
        if let (Some(o), Some(gens)) = (&self.object, &self.sieve) {
            out.push(("sieve.json".to_string(), json!(gens)));
            args.extend([
                "--object".into(),
                o.clone(),
                "--sieve".into(),
                "sieve.json".into(),
            ]);
        }
        args.extend(["--dim-cap".into(), self.dim_cap.to_string()]);
        out.push((
            "manifest.json".to_string(),
            json!({"name": self.name, "description": self.description, "command": self.command, "args": args}),
        ));
        out
    }
}
