//! Saito dicriticity of numbered resolution trees and the invariants built on it.

pub mod curve;
pub mod dicriticity;
pub mod error;
pub mod halfint;
pub mod io;
pub mod matrix;
pub mod moduli;
pub mod saito;
pub mod tree;

pub use curve::{builtin_family, milnor_number, tree_from_char_exponents, CurveDescriptor, MilnorResult};
pub use dicriticity::{saito_bruteforce, saito_inductive, Configuration, Dicriticity, InductiveSolver, SaitoSolution};
pub use error::{CurveError, DicriticityError, Error, FormatError, GluingError, ModuliError, TreeError};
pub use halfint::HalfInt;
pub use io::{emit_dot, parse_tree, serialize_tree, AnalysisReport};
pub use matrix::IntMatrix;
pub use moduli::{generic_moduli_dimension, generic_tjurina, ModuliReport};
pub use saito::{gluing_data, saito_number, saito_valuation_profile, GluingData, SaitoProfile};
pub use tree::{Numbering, ResolutionTree, Step, VertexId};
