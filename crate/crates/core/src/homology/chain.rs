//! Normalized chains, homology groups, canonical generators and induced maps.

use rayon::prelude::*;
use serde::Serialize;

use super::matrix::{IntMatrix, SparseRow};
use super::snf::{reduce, Track};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::sset::{SimplicialMap, SimplicialSet};

/// Normalized chain complex of a simplicial set up to `max_deg`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    max_deg: usize,
    // bases[k] = nondegenerate k-simplices, ascending.
    bases: Vec<Vec<usize>>,
    // positions[k][x] = index of x in bases[k], or usize::MAX if degenerate.
    positions: Vec<Vec<usize>>,
    // boundaries[k]: n_{k-1} x n_k; boundaries[0] is 0 x n_0.
    boundaries: Vec<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    pub torsion: Vec<Int>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn normalized_chain_complex(a: &SimplicialSet, max_deg: usize) -> Result<ChainComplex> {
    if max_deg > a.dim_cap() {
        return Err(Error::DegreeOutOfRange {
            degree: max_deg,
            available: a.dim_cap(),
        });
    }
    let mut bases = Vec::with_capacity(max_deg + 1);
    let mut positions = Vec::with_capacity(max_deg + 1);
    for k in 0..=max_deg {
        let basis = a.nondegenerate(k);
        let mut pos = vec![usize::MAX; a.count(k)];
        for (i, x) in basis.iter().enumerate() {
            pos[*x] = i;
        }
        bases.push(basis);
        positions.push(pos);
    }
    let boundaries: Vec<IntMatrix> = (0..=max_deg)
        .into_par_iter()
        .map(|k| {
            if k == 0 {
                return IntMatrix::zeros(0, bases[0].len());
            }
            let columns = bases[k]
                .iter()
                .map(|&x| {
                    (0..=k)
                        .filter_map(|i| {
                            let p = positions[k - 1][a.face(k, x, i)];
                            let sign = if i % 2 == 0 { Int::ONE } else { -Int::ONE };
                            (p != usize::MAX).then_some((p, sign))
                        })
                        .collect()
                })
                .collect();
            IntMatrix::from_columns(bases[k - 1].len(), bases[k].len(), columns)
        })
        .collect();
    for k in 2..=max_deg {
        if !boundaries[k - 1].mul(&boundaries[k]).is_zero() {
            return Err(Error::invariant(format!(
                "boundary squared is nonzero in degree {k}"
            )));
        }
    }
    Ok(ChainComplex {
        max_deg,
        bases,
        positions,
        boundaries,
    })
}

impl ChainComplex {
    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub fn rank(&self, k: usize) -> usize {
        self.bases[k].len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// Nondegenerate simplices forming the basis in degree `k`.
    pub fn basis(&self, k: usize) -> &[usize] {
        &self.bases[k]
    }

    /// Basis position of simplex `x` in degree `k`, if nondegenerate.
    pub fn position(&self, k: usize, x: usize) -> Option<usize> {
        let p = self.positions[k][x];
        (p != usize::MAX).then_some(p)
    }

    pub fn boundary(&self, k: usize) -> &IntMatrix {
        &self.boundaries[k]
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k + 1 > self.max_deg {
            return Err(Error::DegreeOutOfRange {
                degree: k,
                available: self.max_deg.saturating_sub(1),
            });
        }
        Ok(())
    }
}

pub fn homology(c: &ChainComplex, k: usize) -> Result<HomologyGroup> {
    c.check_degree(k)?;
    let here = reduce(c.boundary(k), Track::NONE).factors;
    let above = reduce(c.boundary(k + 1), Track::NONE).factors;
    Ok(group(c, k, here.len(), &above))
}

fn group(c: &ChainComplex, k: usize, rank_here: usize, above: &[Int]) -> HomologyGroup {
    HomologyGroup {
        degree: k,
        betti: c.rank(k) - rank_here - above.len(),
        torsion: above.iter().filter(|d| !d.is_one()).cloned().collect(),
    }
}

/// Homology in degrees `0..=top`, reducing each boundary matrix once.
pub fn homology_groups(c: &ChainComplex, top: usize) -> Result<Vec<HomologyGroup>> {
    c.check_degree(top)?;
    let factors: Vec<Vec<Int>> = (0..=top + 1)
        .into_par_iter()
        .map(|k| reduce(c.boundary(k), Track::NONE).factors)
        .collect();
    Ok((0..=top)
        .map(|k| group(c, k, factors[k].len(), &factors[k + 1]))
        .collect())
}

/// Homology of a simplicial set in degrees `0..=top`; needs `top + 1 <= dim_cap`.
pub fn simplicial_homology(a: &SimplicialSet, top: usize) -> Result<Vec<HomologyGroup>> {
    if top + 1 > a.dim_cap() {
        return Err(Error::DegreeOutOfRange {
            degree: top,
            available: a.dim_cap().saturating_sub(1),
        });
    }
    homology_groups(&normalized_chain_complex(a, top + 1)?, top)
}

/// Canonical generators of `H_k` with a coordinate map on cycles.
///
/// Generators are ordered torsion first, then free. `orders[i]` is the order
/// of generator `i`, zero for free generators.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub degree: usize,
    pub orders: Vec<Int>,
    // n_k x g: column i is generator i as a chain.
    generators: IntMatrix,
    // g x n_k: coordinates of a cycle.
    coords: IntMatrix,
}

impl HomologyBasis {
    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// Generator `i` as a sparse chain on the degree-`k` basis.
    pub fn generator(&self, i: usize) -> SparseRow {
        (0..self.generators.nrows())
            .filter_map(|r| {
                let v = self.generators.get(r, i);
                (!v.is_zero()).then_some((r, v))
            })
            .collect()
    }

    /// Coordinates of a cycle; torsion entries reduced into `0..order`.
    pub fn coordinates(&self, cycle: &[(usize, Int)]) -> Vec<Int> {
        let raw = self.coords.apply(cycle);
        let mut out = vec![Int::ZERO; self.len()];
        for (i, v) in raw {
            out[i] = v;
        }
        for (v, d) in out.iter_mut().zip(&self.orders) {
            if !d.is_zero() {
                *v = v.rem_euclid(d);
            }
        }
        out
    }

    pub fn group(&self) -> HomologyGroup {
        HomologyGroup {
            degree: self.degree,
            betti: self.orders.iter().filter(|d| d.is_zero()).count(),
            torsion: self
                .orders
                .iter()
                .filter(|d| !d.is_zero())
                .cloned()
                .collect(),
        }
    }
}

pub fn homology_basis(c: &ChainComplex, k: usize) -> Result<HomologyBasis> {
    c.check_degree(k)?;
    let n = c.rank(k);
    let here = reduce(
        c.boundary(k),
        Track {
            v: true,
            v_inv: true,
            ..Track::NONE
        },
    );
    let j: Vec<usize> = (here.factors.len()..n).collect();
    let kernel = here.v.unwrap().select_columns(&j);
    let to_kernel = here.v_inv.unwrap().select_rows(&j);
    let b = to_kernel.mul(c.boundary(k + 1));
    let red = reduce(
        &b,
        Track {
            u: true,
            u_inv: true,
            ..Track::NONE
        },
    );
    let mut keep = Vec::new();
    let mut orders = Vec::new();
    for (i, d) in red.factors.iter().enumerate() {
        if !d.is_one() {
            keep.push(i);
            orders.push(d.clone());
        }
    }
    for i in red.factors.len()..j.len() {
        keep.push(i);
        orders.push(Int::ZERO);
    }
    let generators = kernel.mul(&red.u_inv.unwrap().select_columns(&keep));
    let coords = red.u.unwrap().select_rows(&keep).mul(&to_kernel);
    Ok(HomologyBasis {
        degree: k,
        orders,
        generators,
        coords,
    })
}

/// Matrix of a map on homology generators: column `j` holds the coordinates of
/// the image of source generator `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedMap {
    pub degree: usize,
    pub source_orders: Vec<Int>,
    pub target_orders: Vec<Int>,
    pub matrix: Vec<Vec<Int>>,
}

impl InducedMap {
    pub fn is_identity(&self) -> bool {
        self.source_orders == self.target_orders
            && self.matrix.iter().enumerate().all(|(r, row)| {
                row.iter()
                    .enumerate()
                    .all(|(c, v)| if r == c { v.is_one() } else { v.is_zero() })
            })
    }

    /// Each row and column has a single entry `1`, matching generator orders.
    pub fn is_permutation(&self) -> bool {
        let (rows, cols) = (self.target_orders.len(), self.source_orders.len());
        if rows != cols {
            return false;
        }
        let mut hit = vec![false; cols];
        for (r, row) in self.matrix.iter().enumerate() {
            let ones: Vec<usize> = (0..cols).filter(|c| row[*c].is_one()).collect();
            if ones.len() != 1 || row.iter().filter(|v| !v.is_zero()).count() != 1 {
                return false;
            }
            let c = ones[0];
            if hit[c] || self.source_orders[c] != self.target_orders[r] {
                return false;
            }
            hit[c] = true;
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Int::is_zero)
    }
}

/// Image of a source chain under the normalized chain map of `f` in degree `k`.
fn push_chain(
    f: &SimplicialMap,
    src: &ChainComplex,
    tgt: &ChainComplex,
    k: usize,
    chain: &[(usize, Int)],
) -> SparseRow {
    let mut acc: Vec<(usize, Int)> = chain
        .iter()
        .filter_map(|(p, v)| {
            tgt.position(k, f.apply(k, src.basis(k)[*p]))
                .map(|q| (q, v.clone()))
        })
        .collect();
    acc.sort_by_key(|(q, _)| *q);
    let mut out: SparseRow = Vec::with_capacity(acc.len());
    for (q, v) in acc {
        match out.last_mut() {
            Some((lq, lv)) if *lq == q => *lv = &*lv + &v,
            _ => out.push((q, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

fn induced_between(
    f: &SimplicialMap,
    src: &ChainComplex,
    tgt: &ChainComplex,
    sb: &HomologyBasis,
    tb: &HomologyBasis,
) -> InducedMap {
    let k = sb.degree;
    let columns: Vec<Vec<Int>> = (0..sb.len())
        .map(|j| tb.coordinates(&push_chain(f, src, tgt, k, &sb.generator(j))))
        .collect();
    let matrix = (0..tb.len())
        .map(|r| columns.iter().map(|col| col[r].clone()).collect())
        .collect();
    InducedMap {
        degree: k,
        source_orders: sb.orders.clone(),
        target_orders: tb.orders.clone(),
        matrix,
    }
}

pub fn induced_homology_map(f: &SimplicialMap, k: usize) -> Result<InducedMap> {
    Ok(induced_homology_maps(f, k)?.pop().expect("degree present"))
}

/// Induced maps in degrees `0..=top`; needs `top + 1 <= dim_cap`.
pub fn induced_homology_maps(f: &SimplicialMap, top: usize) -> Result<Vec<InducedMap>> {
    let cap = f.source().dim_cap();
    if top + 1 > cap {
        return Err(Error::DegreeOutOfRange {
            degree: top,
            available: cap.saturating_sub(1),
        });
    }
    let (src, tgt) = rayon::join(
        || normalized_chain_complex(f.source(), top + 1),
        || normalized_chain_complex(f.target(), top + 1),
    );
    let (src, tgt) = (src?, tgt?);
    (0..=top)
        .into_par_iter()
        .map(|k| {
            let (sb, tb) = rayon::join(|| homology_basis(&src, k), || homology_basis(&tgt, k));
            Ok(induced_between(f, &src, &tgt, &sb?, &tb?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::sset::GeneratorSet;

    fn circle(cap: usize) -> SimplicialSet {
        GeneratorSet::from_faces(
            vec![
                vec!["a".into(), "b".into(), "c".into()],
                vec!["ab".into(), "ac".into(), "bc".into()],
            ],
            &[
                ("ab", &["b", "a"][..]),
                ("ac", &["c", "a"][..]),
                ("bc", &["c", "b"][..]),
            ],
        )
        .unwrap()
        .expand(cap)
        .unwrap()
    }

    fn z(b: usize, t: &[i64]) -> (usize, Vec<Int>) {
        (b, t.iter().map(|v| Int::from(*v)).collect())
    }

    #[test]
    fn point_and_interval() {
        let p = SimplicialSet::point(3);
        let c = normalized_chain_complex(&p, 3).unwrap();
        assert_eq!(c.ranks(), vec![1, 0, 0, 0]);
        let g = homology(&c, 0).unwrap();
        assert_eq!((g.betti, g.torsion.len()), (1, 0));

        let d1 = SimplicialSet::standard_simplex(1, 2);
        let c = normalized_chain_complex(&d1, 1).unwrap();
        assert_eq!(c.ranks(), vec![2, 1]);
        assert_eq!(
            c.boundary(1).to_dense(),
            vec![vec![Int::from(-1)], vec![Int::ONE]]
        );
    }

    #[test]
    fn square_boundary_squares_to_zero() {
        let d1 = SimplicialSet::standard_simplex(1, 3);
        let sq = d1.product(&d1).unwrap();
        let c = normalized_chain_complex(&sq, 3).unwrap();
        assert_eq!(c.ranks(), vec![4, 5, 2, 0]);
        assert!(c.boundary(1).mul(c.boundary(2)).is_zero());
    }

    #[test]
    fn circle_homology() {
        let hs = simplicial_homology(&circle(3), 2).unwrap();
        let got: Vec<_> = hs.iter().map(|h| (h.betti, h.torsion.clone())).collect();
        assert_eq!(got, vec![z(1, &[]), z(1, &[]), z(0, &[])]);
        assert_eq!(hs[1].to_string(), "Z");
    }

    #[test]
    fn degree_range_enforced() {
        let c = normalized_chain_complex(&circle(2), 2).unwrap();
        assert!(homology(&c, 2).is_err());
        assert!(normalized_chain_complex(&circle(2), 3).is_err());
    }

    #[test]
    fn swap_of_two_points() {
        let two = Arc::new(SimplicialSet::discrete(&["p".into(), "q".into()], 1));
        let swap = SimplicialMap::from_nondegenerate(two.clone(), two.clone(), |k, x| {
            (k == 0).then_some(1 - x)
        })
        .unwrap();
        let m = induced_homology_map(&swap, 0).unwrap();
        assert!(m.is_permutation());
        assert!(!m.is_identity());
        let id = induced_homology_map(&SimplicialMap::identity(two), 0).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn constant_map_kills_the_loop() {
        let s = Arc::new(circle(2));
        let pt = Arc::new(SimplicialSet::point(2));
        let f = SimplicialMap::from_nondegenerate(s, pt, |_, _| Some(0)).unwrap();
        assert!(f.validate().is_ok());
        let maps = induced_homology_maps(&f, 1).unwrap();
        assert!(maps[0].is_identity());
        assert_eq!(maps[1].source_orders.len(), 1);
        assert!(maps[1].target_orders.is_empty());
        assert!(maps[1].is_zero());
    }

    #[test]
    fn generators_are_cycles_with_unit_coordinates() {
        let c = normalized_chain_complex(&circle(3), 3).unwrap();
        for k in 0..=2 {
            let b = homology_basis(&c, k).unwrap();
            for i in 0..b.len() {
                let g = b.generator(i);
                if k > 0 {
                    assert!(c.boundary(k).apply(&g).is_empty());
                }
                let mut e = vec![Int::ZERO; b.len()];
                e[i] = Int::ONE;
                assert_eq!(b.coordinates(&g), e);
            }
        }
    }
}
