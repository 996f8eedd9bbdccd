//! Toolkit for the tree ontology design pattern.
//!
//! The library covers the full round trip from external tree representations
//! to checked, queryable finite models:
//!
//! * [`model`] — ABoxes, interpretations, the pattern vocabulary, structure
//!   generators and the rooted-tree structural validator.
//! * [`ingest`] — Newick and Turtle-subset parsing and canonical writing.
//! * [`materialize`] — forward-chaining fixpoint derivation of the facts the
//!   pattern axioms entail under a closed-world reading, including the
//!   Child_i/R_i sibling derivation for n-bounded trees.
//! * [`axioms`] — machine representations of the tree, list, sequence and
//!   n-bounded axiom sets, plus a finite-model checker with witnesses.
//! * [`query`] — closed-world class-expression evaluation and the nine
//!   competency questions, each paired with an independent graph oracle.
//! * [`export`] — deterministic OWL 2 functional-syntax and Turtle writers.

pub mod axioms;
pub mod export;
pub mod ingest;
pub mod materialize;
pub mod model;
pub mod query;

pub use model::{
    abox_to_interpretation, example_tree, interpretation_to_abox, make_cycle, make_forest,
    random_tree, validate, validate_interpretation, Concept, Fact, Interpretation, ModelError,
    NodeId, Role, StructuralReport, TreeAbox, Vocabulary,
};
