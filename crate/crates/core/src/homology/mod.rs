mod chain;
mod matrix;
mod snf;

pub use chain::{
    homology, homology_basis, homology_groups, induced_homology_map, induced_homology_maps,
    normalized_chain_complex, simplicial_homology, ChainComplex, HomologyBasis, HomologyGroup,
    InducedMap,
};
pub use matrix::{IntMatrix, SparseRow};
pub use snf::{invariant_factors, smith_normal_form, SmithNormalForm};
