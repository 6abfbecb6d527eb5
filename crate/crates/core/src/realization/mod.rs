//! The two-sided bar realization `Re(F, G)` as the diagonal of a
//! bisimplicial set, plus the maps and checks built on it.
//!
//! A level-`k` simplex is a composable `k`-chain `X0 -> .. -> Xk` (identities
//! allowed) with a `k`-simplex of `F(X0)` and a `k`-simplex of `G(Xk)`.

mod descent;
mod order;
mod projector;

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catsite::FinCat;
use crate::error::{Error, Result};
use crate::presheaf::{same, CovariantDiagram, Presheaf, PresheafMap, SetPresheaf, SetPresheafMap};
use crate::sset::{json as sjson, SimplicialMap, SimplicialSet};

pub use descent::{covariant_descent_check, DegreeComparison, DescentReport, DESCENT_NOTE};
pub use order::{order_complex_functor, subposet_nerves};
pub use projector::{projector_maps, triples_category, ProjectorData, Triples};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BarSimplex {
    pub chain: Vec<usize>,
    pub f: usize,
    pub g: usize,
}

/// A realization together with the layout of its simplices.
#[derive(Clone, Debug)]
pub struct Realization {
    set: Arc<SimplicialSet>,
    f: CovariantDiagram,
    g: Presheaf,
    chains: Vec<Vec<Vec<usize>>>,
    chain_index: Vec<HashMap<Vec<usize>, usize>>,
    // offsets[k][c] is the index of the first simplex over chain c; one extra
    // entry at the end holds the level count.
    offsets: Vec<Vec<usize>>,
    ends: Vec<Vec<(usize, usize)>>,
}

impl Realization {
    pub fn set(&self) -> &Arc<SimplicialSet> {
        &self.set
    }

    pub fn base(&self) -> &Arc<FinCat> {
        self.f.base()
    }

    pub fn covariant(&self) -> &CovariantDiagram {
        &self.f
    }

    pub fn presheaf(&self) -> &Presheaf {
        &self.g
    }

    pub fn dim_cap(&self) -> usize {
        self.set.dim_cap()
    }

    fn g_count(&self, k: usize, c: usize) -> usize {
        self.g.value(self.ends[k][c].1).count(k)
    }

    fn position(&self, k: usize, c: usize, a: usize, b: usize) -> usize {
        self.offsets[k][c] + a * self.g_count(k, c) + b
    }

    pub fn simplex(&self, k: usize, x: usize) -> BarSimplex {
        let c = self.offsets[k].partition_point(|o| *o <= x) - 1;
        let r = x - self.offsets[k][c];
        let n = self.g_count(k, c);
        BarSimplex {
            chain: self.chains[k][c].clone(),
            f: r / n,
            g: r % n,
        }
    }

    pub fn index_of(&self, k: usize, s: &BarSimplex) -> Option<usize> {
        let c = *self.chain_index.get(k)?.get(&s.chain)?;
        let (x0, xk) = self.ends[k][c];
        (s.f < self.f.value(x0).count(k) && s.g < self.g.value(xk).count(k))
            .then(|| self.position(k, c, s.f, s.g))
    }

    /// The sset JSON form with a per-simplex annotation
    /// `{"chain": [..], "f": id, "g": id}` under `"bar"`.
    pub fn to_json(&self) -> Value {
        let cat = self.base();
        let mut v = sjson::to_json(&self.set);
        let bar: Vec<Vec<Value>> = (0..=self.dim_cap())
            .map(|k| {
                (0..self.set.count(k))
                    .map(|x| {
                        let s = self.simplex(k, x);
                        let (x0, xk) = self.ends[k][self.chain_index[k][&s.chain]];
                        json!({
                            "chain": s.chain.iter().map(|f| cat.morphism(*f).id.as_str()).collect::<Vec<_>>(),
                            "f": self.f.value(x0).label(k, s.f),
                            "g": self.g.value(xk).label(k, s.g),
                        })
                    })
                    .collect()
            })
            .collect();
        v["bar"] = json!(bar);
        v
    }
}

fn check_inputs(
    cat: &Arc<FinCat>,
    f: &CovariantDiagram,
    g: &Presheaf,
    dim_cap: usize,
) -> Result<()> {
    if !same(cat, f.base()) || !same(cat, g.base()) {
        return Err(Error::BaseMismatch(
            "F and G must live on the given category".into(),
        ));
    }
    if f.dim_cap() < dim_cap || g.dim_cap() < dim_cap {
        return Err(Error::CapMismatch(format!(
            "realization cap {dim_cap} exceeds the caps of F ({}) or G ({})",
            f.dim_cap(),
            g.dim_cap()
        )));
    }
    Ok(())
}

/// `Re(F, G)` up to `dim_cap`.
pub fn realize(
    cat: &Arc<FinCat>,
    f: &CovariantDiagram,
    g: &Presheaf,
    dim_cap: usize,
) -> Result<Realization> {
    check_inputs(cat, f, g, dim_cap)?;
    let chains: Vec<Vec<Vec<usize>>> = (0..=dim_cap).map(|k| cat.chains(k)).collect();
    let chain_index: Vec<HashMap<Vec<usize>, usize>> = chains
        .iter()
        .map(|lv| lv.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
        .collect();
    let ends: Vec<Vec<(usize, usize)>> = chains
        .iter()
        .enumerate()
        .map(|(k, lv)| {
            lv.iter()
                .map(|c| (cat.chain_start(c), cat.chain_end(k, c)))
                .collect()
        })
        .collect();
    let offsets: Vec<Vec<usize>> = ends
        .iter()
        .enumerate()
        .map(|(k, lv)| {
            let mut out = Vec::with_capacity(lv.len() + 1);
            let mut total = 0;
            out.push(0);
            for (x0, xk) in lv {
                total += f.value(*x0).count(k) * g.value(*xk).count(k);
                out.push(total);
            }
            out
        })
        .collect();
    let mut r = Realization {
        set: Arc::new(SimplicialSet::empty(dim_cap)),
        f: f.clone(),
        g: g.clone(),
        chains,
        chain_index,
        offsets,
        ends,
    };

    let labels: Vec<Vec<String>> = (0..=dim_cap)
        .map(|k| {
            r.chains[k]
                .par_iter()
                .zip(&r.ends[k])
                .flat_map_iter(|(c, (x0, xk))| {
                    let (fv, gv) = (f.value(*x0), g.value(*xk));
                    let cl = cat.chain_label(k, c);
                    (0..fv.count(k)).flat_map(move |a| {
                        let cl = cl.clone();
                        (0..gv.count(k)).map(move |b| {
                            format!("({cl} | {} | {})", fv.label(k, a), gv.label(k, b))
                        })
                    })
                })
                .collect()
        })
        .collect();

    let mut faces = vec![Vec::new()];
    for k in 1..=dim_cap {
        let rr = &r;
        let per_chain: Vec<Vec<usize>> = (0..r.chains[k].len())
            .into_par_iter()
            .map(|c| {
                let chain = &rr.chains[k][c];
                let (x0, xk) = rr.ends[k][c];
                let (fv, gv) = (f.value(x0), g.value(xk));
                let targets: Vec<usize> = (0..=k)
                    .map(|i| rr.chain_index[k - 1][&cat.chain_face(k, chain, i)])
                    .collect();
                let (push, pull) = (f.action(chain[0]), g.action(chain[k - 1]));
                let (fx1, gxl) = (f.value(cat.tgt(chain[0])), g.value(cat.src(chain[k - 1])));
                let mut out = Vec::with_capacity(fv.count(k) * gv.count(k) * (k + 1));
                for a in 0..fv.count(k) {
                    for b in 0..gv.count(k) {
                        for (i, t) in targets.iter().enumerate() {
                            let (a2, b2) = if i == 0 {
                                (fx1.face(k, push.apply(k, a), 0), gv.face(k, b, 0))
                            } else if i == k {
                                (fv.face(k, a, k), gxl.face(k, pull.apply(k, b), k))
                            } else {
                                (fv.face(k, a, i), gv.face(k, b, i))
                            };
                            out.push(rr.position(k - 1, *t, a2, b2));
                        }
                    }
                }
                out
            })
            .collect();
        faces.push(per_chain.into_iter().flatten().collect());
    }

    let mut degeneracies = Vec::with_capacity(dim_cap + 1);
    for k in 0..=dim_cap {
        if k == dim_cap {
            degeneracies.push(Vec::new());
            continue;
        }
        let rr = &r;
        let per_chain: Vec<Vec<usize>> = (0..r.chains[k].len())
            .into_par_iter()
            .map(|c| {
                let chain = &rr.chains[k][c];
                let (x0, xk) = rr.ends[k][c];
                let (fv, gv) = (f.value(x0), g.value(xk));
                let targets: Vec<usize> = (0..=k)
                    .map(|i| rr.chain_index[k + 1][&cat.chain_degeneracy(k, chain, i)])
                    .collect();
                let mut out = Vec::with_capacity(fv.count(k) * gv.count(k) * (k + 1));
                for a in 0..fv.count(k) {
                    for b in 0..gv.count(k) {
                        for (i, t) in targets.iter().enumerate() {
                            out.push(rr.position(
                                k + 1,
                                *t,
                                fv.degeneracy(k, a, i),
                                gv.degeneracy(k, b, i),
                            ));
                        }
                    }
                }
                out
            })
            .collect();
        degeneracies.push(per_chain.into_iter().flatten().collect());
    }

    r.set = Arc::new(SimplicialSet::from_tables(
        dim_cap,
        labels,
        faces,
        degeneracies,
    )?);
    Ok(r)
}

/// Builds a map of realizations from maps on chains and on the two parts.
/// `on_f` and `on_g` receive the level, the source chain and the part.
pub fn map_realizations(
    src: &Realization,
    tgt: &Realization,
    on_chain: impl Fn(usize, &[usize]) -> Vec<usize> + Sync,
    on_f: impl Fn(usize, &[usize], usize) -> usize + Sync,
    on_g: impl Fn(usize, &[usize], usize) -> usize + Sync,
) -> Result<SimplicialMap> {
    if src.dim_cap() != tgt.dim_cap() {
        return Err(Error::CapMismatch(
            "realizations have different caps".into(),
        ));
    }
    let levels = (0..=src.dim_cap())
        .map(|k| {
            let per_chain: Result<Vec<Vec<usize>>> = (0..src.chains[k].len())
                .into_par_iter()
                .map(|c| {
                    let chain = &src.chains[k][c];
                    let image = on_chain(k, chain);
                    let t = *tgt.chain_index[k].get(&image).ok_or_else(|| {
                        Error::invariant("chain image is not a chain of the target")
                    })?;
                    let (x0, xk) = src.ends[k][c];
                    let (fa, gb) = (src.f.value(x0).count(k), src.g.value(xk).count(k));
                    let mut out = Vec::with_capacity(fa * gb);
                    for a in 0..fa {
                        let a2 = on_f(k, chain, a);
                        for b in 0..gb {
                            out.push(tgt.position(k, t, a2, on_g(k, chain, b)));
                        }
                    }
                    Ok(out)
                })
                .collect();
            Ok(per_chain?.into_iter().flatten().collect())
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    SimplicialMap::new(src.set.clone(), tgt.set.clone(), levels)
}

/// `(chain, f, g) -> (chain, f, m(g))` between realizations of the source and
/// target of `m` against the same `F`.
pub fn induced_map(src: &Realization, tgt: &Realization, m: &PresheafMap) -> Result<SimplicialMap> {
    if !src.f.same_as(&tgt.f) {
        return Err(Error::BaseMismatch(
            "realizations use different covariant diagrams".into(),
        ));
    }
    if !src.g.same_as(m.source()) || !tgt.g.same_as(m.target()) {
        return Err(Error::BaseMismatch(
            "map does not go between the realized presheaves".into(),
        ));
    }
    let cat = src.base().clone();
    map_realizations(
        src,
        tgt,
        |_, c| c.to_vec(),
        |_, _, a| a,
        |k, c, b| m.component(cat.chain_end(k, c)).apply(k, b),
    )
}

pub fn induced_realization_map(
    f: &CovariantDiagram,
    m: &PresheafMap,
    dim_cap: usize,
) -> Result<SimplicialMap> {
    let cat = f.base();
    let src = realize(cat, f, m.source(), dim_cap)?;
    let tgt = realize(cat, f, m.target(), dim_cap)?;
    induced_map(&src, &tgt, m)
}

/// The set presheaf of `m`-simplices of `g`.
pub fn level_presheaf(g: &Presheaf, m: usize) -> Result<SetPresheaf> {
    let cat = g.base();
    let values = g.values().iter().map(|v| v.labels(m).to_vec()).collect();
    let actions = (0..cat.morphism_count())
        .map(|f| g.action(f).level(m).to_vec())
        .collect();
    SetPresheaf::new(cat.clone(), values, actions)
}

/// Realizes each level `G_m` separately (as a discrete presheaf) and takes
/// the diagonal of the resulting bisimplicial set.
pub fn levelwise_diagonal(
    f: &CovariantDiagram,
    g: &Presheaf,
    dim_cap: usize,
) -> Result<SimplicialSet> {
    let cat = f.base();
    check_inputs(cat, f, g, dim_cap)?;
    let levels: Vec<Arc<SetPresheaf>> = (0..=dim_cap)
        .map(|m| level_presheaf(g, m).map(Arc::new))
        .collect::<Result<_>>()?;
    let discrete: Vec<Arc<Presheaf>> = levels
        .iter()
        .map(|l| Arc::new(l.to_presheaf(dim_cap)))
        .collect();
    let reals: Vec<Realization> = discrete
        .iter()
        .map(|d| realize(cat, f, d, dim_cap))
        .collect::<Result<_>>()?;
    let vertical =
        |from: usize, to: usize, table: &dyn Fn(usize, usize) -> usize| -> Result<SimplicialMap> {
            let comps = (0..cat.object_count())
                .map(|x| {
                    (0..levels[from].value(x).len())
                        .map(|z| table(x, z))
                        .collect()
                })
                .collect();
            let sm = SetPresheafMap::new(levels[from].clone(), levels[to].clone(), comps)?;
            let pm = sm.to_presheaf_map(discrete[from].clone(), discrete[to].clone())?;
            induced_map(&reals[from], &reals[to], &pm)
        };
    let mut labels = Vec::with_capacity(dim_cap + 1);
    let mut faces = vec![Vec::new()];
    let mut degeneracies = Vec::with_capacity(dim_cap + 1);
    for k in 0..=dim_cap {
        let rk = reals[k].set();
        labels.push(rk.labels(k).to_vec());
        if k > 0 {
            let vs: Vec<SimplicialMap> = (0..=k)
                .map(|i| vertical(k, k - 1, &|x, z| g.value(x).face(k, z, i)))
                .collect::<Result<_>>()?;
            faces.push(
                (0..rk.count(k))
                    .flat_map(|z| (0..=k).map(move |i| (z, i)))
                    .map(|(z, i)| vs[i].apply(k - 1, rk.face(k, z, i)))
                    .collect(),
            );
        }
        if k < dim_cap {
            let vs: Vec<SimplicialMap> = (0..=k)
                .map(|i| vertical(k, k + 1, &|x, z| g.value(x).degeneracy(k, z, i)))
                .collect::<Result<_>>()?;
            degeneracies.push(
                (0..rk.count(k))
                    .flat_map(|z| (0..=k).map(move |i| (z, i)))
                    .map(|(z, i)| vs[i].apply(k + 1, rk.degeneracy(k, z, i)))
                    .collect(),
            );
        } else {
            degeneracies.push(Vec::new());
        }
    }
    SimplicialSet::from_tables(dim_cap, labels, faces, degeneracies)
}
