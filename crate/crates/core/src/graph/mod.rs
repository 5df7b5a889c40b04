//! Graph predicates, density functionals, copy search, and the collection/bunch
//! machinery used by the H-game Breaker.

pub mod collections;
pub mod conditions;
pub mod copies;
pub mod decomposition;
pub mod density;
pub mod predicates;
pub mod simple;

pub use collections::{
    bunch_density, extract_bunch, k_collections, BunchCertificate, CollectionReport, KCollection,
};
pub use conditions::{check_hamilton_conditions, check_pancyclicity_conditions, ConditionReport};
pub use copies::{contains_copy, count_embeddings, enumerate_copies, Copy};
pub use decomposition::{initial_forest_partition, spanning_tree_packing};
pub use density::{choose_k, choose_k_graph, format_ratio, max_2_density, max_density};
pub use predicates::{
    chromatic_number_at_most, components, cycle_lengths, independence_number, is_bipartite,
    is_connected, is_forest, is_hamiltonian, is_pancyclic, vertex_connectivity,
};
pub use simple::{edge_endpoints, edge_id, SimpleGraph};
