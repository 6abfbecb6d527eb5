use std::sync::Arc;

use crate::catsite::{nerve, site_from_finite_space, FinCat, FiniteSpace};
use crate::error::{Error, Result};
use crate::presheaf::CovariantDiagram;
use crate::sset::{SimplicialMap, SimplicialSet};

/// `x ↦` nerve of the subposet `members[x]` of a fixed poset on `points`;
/// morphisms act by inclusion, so `members` must grow along morphisms.
pub fn subposet_nerves(
    base: Arc<FinCat>,
    points: &[String],
    leq: impl Fn(usize, usize) -> bool,
    members: &[Vec<usize>],
    dim_cap: usize,
) -> Result<CovariantDiagram> {
    if members.len() != base.object_count() {
        return Err(Error::input("one member list per object is required"));
    }
    let values: Vec<Arc<SimplicialSet>> = members
        .iter()
        .map(|ms| {
            let mut ms = ms.clone();
            ms.sort_unstable();
            let names: Vec<String> = ms.iter().map(|p| points[*p].clone()).collect();
            let sub = FinCat::from_poset(&names, |i, j| leq(ms[i], ms[j]))?;
            Ok(Arc::new(nerve(&sub, dim_cap)))
        })
        .collect::<Result<_>>()?;
    CovariantDiagram::from_fn(
        base.clone(),
        |x| values[x].clone(),
        |f, from, to| {
            let m = base.morphism(f);
            let levels = (0..=dim_cap)
                .map(|k| {
                    let index = to.index(k);
                    from.labels(k)
                        .iter()
                        .map(|l| {
                            index.get(l.as_str()).copied().ok_or_else(|| {
                                Error::validation(format!(
                                    "`{}` is not contained in `{}`",
                                    base.object(m.src),
                                    base.object(m.tgt)
                                ))
                            })
                        })
                        .collect::<Result<Vec<usize>>>()
                })
                .collect::<Result<_>>()?;
            SimplicialMap::new(from.clone(), to.clone(), levels)
        },
    )
}

/// Order complex of each open of a finite space, over the site of the space.
pub fn order_complex_functor(space: &FiniteSpace, dim_cap: usize) -> Result<CovariantDiagram> {
    let site = site_from_finite_space(space)?;
    let members: Vec<Vec<usize>> = space.site_objects().into_iter().map(|(_, o)| o).collect();
    subposet_nerves(
        site.category().clone(),
        space.points(),
        |p, q| space.specializes(p, q),
        &members,
        dim_cap,
    )
}
