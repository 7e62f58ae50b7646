//! Coupling-coefficient providers, coupling trees, exact amplitudes and the vertex-by-vertex
//! sampler.

mod cg;
mod provider;
mod sixj;
mod spec;
mod tree;
mod validate;

pub use cg::{CgProvider, SequentialCgProvider};
pub use provider::{CouplingProvider, SupportIter};
pub use sixj::SixJProvider;
pub use spec::{ProviderSpec, TreeSpec, VertexSpec};
pub use tree::{BasisString, Child, CouplingTree, Leaf, Vertex, DEFAULT_DENSE_CAP, DEFAULT_SUPPORT_CAP};
pub use validate::{
    validate_axioms, validate_axioms_capped, Axiom, AxiomReport, Violation, DEFAULT_VALIDATION_SUPPORT_CAP,
};
