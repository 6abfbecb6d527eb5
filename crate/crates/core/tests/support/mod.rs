//! Random instances and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toporeal_core::catsite::{FinCat, FiniteSpace};
use toporeal_core::presheaf::{CovariantDiagram, SetPresheaf, SetPresheafMap};
use toporeal_core::realization::subposet_nerves;
use toporeal_core::Int;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Random partial order on `0..n` refining the natural order, as a
/// reflexive transitive `leq` table.
pub fn random_order(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Vec<Vec<bool>> {
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
        for j in i + 1..n {
            leq[i][j] = rng.random_bool(density);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    leq
}

/// Random poset on `n` elements whose last element is a maximum.
pub fn random_poset_with_max(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<bool>> {
    let mut leq = random_order(rng, n, 0.4);
    for row in leq.iter_mut() {
        row[n - 1] = true;
    }
    leq
}

pub fn poset_category(prefix: &str, leq: &[Vec<bool>]) -> Arc<FinCat> {
    Arc::new(
        FinCat::from_poset(&names(prefix, leq.len()), |i, j| leq[i][j]).expect("poset category"),
    )
}

/// `x ↦` nerve of the points born at or below `x`, for a random point poset
/// and random birth objects.
pub fn random_subposet_diagram(
    rng: &mut ChaCha8Rng,
    cat: &Arc<FinCat>,
    leq: &[Vec<bool>],
    dim_cap: usize,
) -> CovariantDiagram {
    let m = rng.random_range(2..=5);
    let order = random_order(rng, m, 0.5);
    let births: Vec<usize> = (0..m).map(|_| rng.random_range(0..leq.len())).collect();
    let members: Vec<Vec<usize>> = (0..leq.len())
        .map(|x| (0..m).filter(|q| leq[births[*q]][x]).collect())
        .collect();
    // FinCat sorts objects by name, so map table indices through names.
    let table = names("x", leq.len());
    let by_name: Vec<Vec<usize>> = cat
        .objects()
        .iter()
        .map(|o| members[table.iter().position(|t| t == o).expect("object name")].clone())
        .collect();
    subposet_nerves(
        cat.clone(),
        &names("p", m),
        |a, b| order[a][b],
        &by_name,
        dim_cap,
    )
    .expect("diagram")
}

/// Random presheaf of sets on a poset category: `G(U) = E_U / ~_U` where
/// `E_U` shrinks and `~_U` refines as `U` grows.
pub fn random_set_presheaf(rng: &mut ChaCha8Rng, cat: &Arc<FinCat>) -> SetPresheaf {
    let n = cat.object_count();
    let below =
        |u: usize| -> Vec<usize> { (0..n).filter(|w| !cat.hom(*w, u).is_empty()).collect() };
    let e = rng.random_range(1..=4);
    let tops: Vec<Option<usize>> = (0..e)
        .map(|_| {
            if rng.random_bool(0.6) {
                None
            } else {
                Some(rng.random_range(0..n))
            }
        })
        .collect();
    let labels: Vec<Vec<u8>> = (0..n)
        .map(|_| (0..e).map(|_| rng.random_range(0..3)).collect())
        .collect();
    let alive = |u: usize, x: usize| tops[x].is_none_or(|t| !cat.hom(u, t).is_empty());
    let key = |u: usize, x: usize| -> Vec<u8> { below(u).iter().map(|w| labels[*w][x]).collect() };
    // Classes per object, keyed by the label vector; value = least member.
    let classes: Vec<BTreeMap<Vec<u8>, usize>> = (0..n)
        .map(|u| {
            let mut m = BTreeMap::new();
            for x in (0..e).filter(|x| alive(u, *x)) {
                m.entry(key(u, x)).or_insert(x);
            }
            m
        })
        .collect();
    let values: Vec<Vec<String>> = classes
        .iter()
        .map(|m| m.values().map(|x| format!("e{x}")).collect())
        .collect();
    let actions = cat
        .morphisms()
        .iter()
        .map(|f| {
            let keys: Vec<&Vec<u8>> = classes[f.src].keys().collect();
            classes[f.tgt]
                .values()
                .map(|x| {
                    keys.iter()
                        .position(|k| **k == key(f.src, *x))
                        .expect("class restricts")
                })
                .collect()
        })
        .collect();
    SetPresheaf::new(cat.clone(), values, actions).expect("random presheaf")
}

/// Sheafification on a finite space by brute force: a section over `U` is a
/// choice of germ at every point of `U`, the germ at `p` living in
/// `G(U_p)`, with germs compatible along `U_p ⊆ U_q`.
pub struct GlueOracle {
    /// Site object of `U_p` per point.
    pub minimal: Vec<usize>,
    /// Families per site object, as germ indices in point order.
    pub families: Vec<Vec<Vec<usize>>>,
}

pub fn glue_oracle(space: &FiniteSpace, cat: &FinCat, g: &SetPresheaf) -> GlueOracle {
    let minimal: Vec<usize> = (0..space.points().len())
        .map(|p| {
            cat.object_id(&space.label(&space.minimal_open(p)))
                .expect("minimal open is a site object")
        })
        .collect();
    let restrict = |from: usize, to: usize, z: usize| -> usize {
        let h = cat.hom(to, from)[0];
        g.action(h)[z]
    };
    let families = space
        .site_objects()
        .into_iter()
        .map(|(_, pts)| {
            let mut out = Vec::new();
            let sizes: Vec<usize> = pts.iter().map(|p| g.value(minimal[*p]).len()).collect();
            let total: usize = sizes.iter().product();
            for mut code in 0..total {
                let germs: Vec<usize> = sizes
                    .iter()
                    .map(|s| {
                        let z = code % s;
                        code /= s;
                        z
                    })
                    .collect();
                let compatible = pts.iter().enumerate().all(|(i, p)| {
                    pts.iter().enumerate().all(|(j, q)| {
                        let (up, uq) = (minimal[*p], minimal[*q]);
                        cat.hom(up, uq).is_empty() || restrict(uq, up, germs[j]) == germs[i]
                    })
                });
                if compatible {
                    out.push(germs);
                }
            }
            out
        })
        .collect();
    GlueOracle { minimal, families }
}

/// Checks the computed sheafification against the oracle element by element:
/// germs of each section form a bijection onto the oracle's families, and the
/// unit sends a section to its germs.
pub fn agrees_with_oracle(
    space: &FiniteSpace,
    cat: &FinCat,
    g: &SetPresheaf,
    sh: &SetPresheaf,
    unit: &SetPresheafMap,
) -> Result<(), String> {
    let oracle = glue_oracle(space, cat, g);
    for (u, (label, pts)) in space.site_objects().into_iter().enumerate() {
        let germs_of = |z: usize| -> Result<Vec<usize>, String> {
            pts.iter()
                .map(|p| {
                    let up = oracle.minimal[*p];
                    let w = sh.action(cat.hom(up, u)[0])[z];
                    let inv: Vec<usize> = (0..g.value(up).len())
                        .filter(|x| unit.component(up)[*x] == w)
                        .collect();
                    match inv.as_slice() {
                        [x] => Ok(*x),
                        _ => Err(format!(
                            "unit at minimal open of point {p} is not bijective"
                        )),
                    }
                })
                .collect()
        };
        let mut seen: Vec<Vec<usize>> = (0..sh.value(u).len())
            .map(germs_of)
            .collect::<Result<_, _>>()?;
        for (x, z) in unit.component(u).iter().enumerate() {
            let direct: Vec<usize> = pts
                .iter()
                .map(|p| g.action(cat.hom(oracle.minimal[*p], u)[0])[x])
                .collect();
            if seen[*z] != direct {
                return Err(format!(
                    "{label}: unit of {x} has germs {:?}, expected {direct:?}",
                    seen[*z]
                ));
            }
        }
        seen.sort();
        let before = seen.len();
        seen.dedup();
        let mut expected = oracle.families[u].clone();
        expected.sort();
        if seen.len() != before || seen != expected {
            return Err(format!("{label}: sections {seen:?} vs oracle {expected:?}"));
        }
    }
    Ok(())
}

pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize) -> (usize, usize, Vec<i64>) {
    let r = rng.random_range(1..=max_dim);
    let c = rng.random_range(1..=max_dim);
    let sparse = rng.random_bool(0.3);
    let entries = (0..r * c)
        .map(|_| {
            if sparse && rng.random_bool(0.6) {
                0
            } else {
                rng.random_range(-9..=9)
            }
        })
        .collect();
    (r, c, entries)
}

/// Fraction-free determinant.
pub fn bareiss_det(mut a: Vec<Vec<Int>>) -> Int {
    let n = a.len();
    let mut sign = Int::from(1);
    let mut prev = Int::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|r| !a[*r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Int::from(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                let (q, r) = num.div_rem(&prev);
                assert!(r.is_zero(), "Bareiss division is exact");
                a[i][j] = q;
            }
        }
        prev = a[k][k].clone();
    }
    &sign * &a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors as ratios of determinantal divisors (gcds of minors).
pub fn determinantal_factors(rows: usize, cols: usize, entries: &[i64]) -> Vec<Int> {
    let mut factors = Vec::new();
    let mut prev = Int::from(1);
    for k in 1..=rows.min(cols) {
        let mut d = Int::from(0);
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor = rs
                    .iter()
                    .map(|r| {
                        cs.iter()
                            .map(|c| Int::from(entries[r * cols + c]))
                            .collect()
                    })
                    .collect();
                d = d.gcd(&bareiss_det(minor));
            }
        }
        if d.is_zero() {
            break;
        }
        factors.push(d.div_rem(&prev).0);
        prev = d;
    }
    factors
}
