use super::FinCat;
use crate::sset::{build_from_model, SimplexModel, SimplicialSet};

impl SimplexModel for FinCat {
    type Simplex = Vec<usize>;

    fn simplices(&self, k: usize) -> Vec<Vec<usize>> {
        self.chains(k)
    }

    fn face(&self, k: usize, s: &Vec<usize>, i: usize) -> Vec<usize> {
        self.chain_face(k, s, i)
    }

    fn degeneracy(&self, k: usize, s: &Vec<usize>, i: usize) -> Vec<usize> {
        self.chain_degeneracy(k, s, i)
    }

    fn label(&self, k: usize, s: &Vec<usize>) -> String {
        self.chain_label(k, s)
    }
}

/// Nerve up to `dim_cap`: `k`-simplices are composable `k`-chains.
/// Assumes a valid category.
pub fn nerve(cat: &FinCat, dim_cap: usize) -> SimplicialSet {
    build_from_model(cat, dim_cap).expect("nerve of a valid category")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::simplicial_homology;
    use crate::int::Int;

    #[test]
    fn terminal_category() {
        let c = FinCat::discrete(&["*".into()]).unwrap();
        let n = nerve(&c, 3);
        assert_eq!(n.counts(), vec![1, 1, 1, 1]);
        assert_eq!(n.nondegenerate_counts(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn arrow() {
        let c = FinCat::from_poset(&["0".into(), "1".into()], |i, j| i <= j).unwrap();
        let n = nerve(&c, 3);
        assert!(n.validate().is_ok());
        assert_eq!(n.nondegenerate_counts(), vec![2, 1, 0, 0]);
    }

    #[test]
    fn z2_nerve() {
        let c = FinCat::monoid(&["e".into(), "t".into()], |a, b| a ^ b).unwrap();
        let n = nerve(&c, 4);
        assert!(n.validate().is_ok());
        assert_eq!(&n.nondegenerate_counts()[..4], &[1, 1, 1, 1]);
        let h = simplicial_homology(&n, 3).unwrap();
        let got: Vec<(usize, Vec<Int>)> = h.into_iter().map(|g| (g.betti, g.torsion)).collect();
        let two = vec![Int::from(2)];
        assert_eq!(
            got,
            vec![(1, vec![]), (0, two.clone()), (0, vec![]), (0, two)]
        );
    }
}
