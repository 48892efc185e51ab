//! The orbit graph X₁(G) with k free loop orbits, attaching paths, their
//! acyclicity certificates, and partitions of unity over the group algebra.

pub mod certificate;
pub mod graph;
pub mod homology;
pub mod partition;
pub mod path;
pub mod words;

pub use certificate::{certify_acyclicity, pairing_matrix, search_attaching_path, AcyclicityCertificate, CycleBasis, SearchConfig, SearchDiagnostics, Verdict};
pub use graph::{build_graph, Cosets, EdgeOrbit, EdgeSpec, Extension, GraphFlavor, GroupPair, OrbitGraph, VertexOrbit};
pub use homology::{attached_complex_homology, IntegralHomology};
pub use partition::{lift_partition, solve_partition_of_unity, LiftedPartition, PartitionOfUnity};
pub use path::{path_from_cells, EdgePath, Step, Walker};
pub use words::{y0_word, Y0Word};
