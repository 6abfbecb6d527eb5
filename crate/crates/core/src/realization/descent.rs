use serde::Serialize;

use super::realize;
use crate::catsite::{sieve_category, Sieve, Site};
use crate::error::{Error, Result};
use crate::homology::{simplicial_homology, HomologyGroup};
use crate::presheaf::{CovariantDiagram, Presheaf};

pub const DESCENT_NOTE: &str =
    "per-instance certificate: compares pi0 and homology up to max_deg; not a proof of weak equivalence";

#[derive(Clone, Debug, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub realization: HomologyGroup,
    pub value: HomologyGroup,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub object: String,
    pub sieve: String,
    pub max_deg: usize,
    /// Degrees above this bound were not computed.
    pub trusted_up_to: usize,
    pub pi0_realization: usize,
    pub pi0_value: usize,
    pub degrees: Vec<DegreeComparison>,
    pub first_mismatch: Option<usize>,
    pub passes: bool,
    pub note: &'static str,
}

/// Compares `Re` over the sieve category of `s` (of `F` restricted, against
/// the terminal presheaf) with `F(x)`.
pub fn covariant_descent_check(
    site: &Site,
    f: &CovariantDiagram,
    x: usize,
    s: &Sieve,
    max_deg: usize,
) -> Result<DescentReport> {
    let cat = site.category();
    if !crate::presheaf::same(cat, f.base()) {
        return Err(Error::BaseMismatch(
            "F is not on the site's category".into(),
        ));
    }
    if s.base != x || !site.is_covering(s) {
        return Err(Error::validation(format!(
            "{} is not a covering sieve of `{}`",
            s.label(cat),
            cat.object(x)
        )));
    }
    let cap = max_deg + 1;
    if f.dim_cap() < cap {
        return Err(Error::DegreeOutOfRange {
            degree: max_deg,
            available: f.dim_cap().saturating_sub(1),
        });
    }
    let inclusion = sieve_category(cat, s)?;
    let restricted = f.pullback(&inclusion)?;
    let sub = inclusion.source.clone();
    let terminal = Presheaf::terminal(sub.clone(), cap);
    let re = realize(&sub, &restricted, &terminal, cap)?;
    let lhs = simplicial_homology(re.set(), max_deg)?;
    let rhs = simplicial_homology(&f.value(x).truncate(cap)?, max_deg)?;
    let degrees: Vec<DegreeComparison> = lhs
        .into_iter()
        .zip(rhs)
        .enumerate()
        .map(|(degree, (a, b))| DegreeComparison {
            degree,
            equal: a == b,
            realization: a,
            value: b,
        })
        .collect();
    let (pi0_realization, pi0_value) = (re.set().pi0().count, f.value(x).pi0().count);
    let first_mismatch = degrees.iter().find(|d| !d.equal).map(|d| d.degree);
    Ok(DescentReport {
        object: cat.object(x).to_string(),
        sieve: s.label(cat),
        max_deg,
        trusted_up_to: max_deg,
        pi0_realization,
        pi0_value,
        passes: first_mismatch.is_none() && pi0_realization == pi0_value,
        first_mismatch,
        degrees,
        note: DESCENT_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catsite::{generate_sieve, site_from_finite_space, FiniteSpace};
    use crate::realization::order_complex_functor;
    use crate::sset::SimplicialSet;
    use std::sync::Arc;

    fn pseudo_circle() -> FiniteSpace {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        FiniteSpace::new(
            s(&["a", "b", "c", "d"]),
            vec![
                s(&[]),
                s(&["a"]),
                s(&["b"]),
                s(&["a", "b"]),
                s(&["a", "b", "c"]),
                s(&["a", "b", "d"]),
                s(&["a", "b", "c", "d"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn order_complex_descends_constant_point_does_not() {
        let space = pseudo_circle();
        let site = site_from_finite_space(&space).unwrap();
        let cat = site.category().clone();
        let f = order_complex_functor(&space, 3).unwrap();
        let x = cat.object_id("{a,b,c,d}").unwrap();
        let s = generate_sieve(
            &cat,
            x,
            &[
                cat.morphism_id("{a,b,c}<{a,b,c,d}").unwrap(),
                cat.morphism_id("{a,b,d}<{a,b,c,d}").unwrap(),
            ],
        )
        .unwrap();
        let report = covariant_descent_check(&site, &f, x, &s, 2).unwrap();
        assert!(report.passes, "{report:?}");
        assert_eq!(report.degrees[1].realization.to_string(), "Z");

        // The sieve category of this cover is a cone on {a,b}, so a constant
        // point sees no loop here.
        let point = CovariantDiagram::constant(cat.clone(), Arc::new(SimplicialSet::point(3)));
        let report = covariant_descent_check(&site, &point, x, &s, 2).unwrap();
        assert!(report.passes);
        assert_eq!(report.degrees[1].realization.to_string(), "0");

        // Two disjoint opens covering {a,b}: two components against one.
        let ab = cat.object_id("{a,b}").unwrap();
        let split = generate_sieve(
            &cat,
            ab,
            &[
                cat.morphism_id("{a}<{a,b}").unwrap(),
                cat.morphism_id("{b}<{a,b}").unwrap(),
            ],
        )
        .unwrap();
        let report = covariant_descent_check(&site, &point, ab, &split, 2).unwrap();
        assert!(!report.passes);
        assert_eq!(report.first_mismatch, Some(0));
        assert_eq!((report.pi0_realization, report.pi0_value), (2, 1));
        assert!(
            covariant_descent_check(&site, &f, ab, &split, 2)
                .unwrap()
                .passes
        );

        let max = Sieve::maximal(&cat, x);
        assert!(
            covariant_descent_check(&site, &point, x, &max, 2)
                .unwrap()
                .passes
        );
        let not_covering =
            generate_sieve(&cat, x, &[cat.morphism_id("{a,b,c}<{a,b,c,d}").unwrap()]).unwrap();
        assert!(matches!(
            covariant_descent_check(&site, &f, x, &not_covering, 2),
            Err(Error::Validation(_))
        ));
    }
}
