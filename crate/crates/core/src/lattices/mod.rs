//! Root lattices, singularity sets, Dynkin graphs and their discriminant forms.

mod discr;
mod dynkin;
mod gram;
mod set;

pub use discr::{component_form, coset_min_norm, Discriminant, SymGenerator, SymKind};
pub use dynkin::{degenerates_to, induced_of_type, induced_type, perturbations, DynkinGraph};
pub use gram::{dynkin_edges, gram_of, gram_of_h, root_gram, IntegerLattice};
pub use set::{all_sets, parse_marked, MarkedSet, RootType, SingularitySet};
