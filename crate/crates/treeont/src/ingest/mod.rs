//! Parsing of external tree representations into ABoxes, and canonical
//! writing back. Two formats: Newick (phylogenetic tree text) and the
//! Turtle subset produced by [`crate::export::export_abox_turtle`].

pub mod newick;
pub mod turtle;

pub use newick::{parse_newick, write_newick, NewickDocument, NewickError};
pub use turtle::{parse_abox_turtle, TurtleError};
