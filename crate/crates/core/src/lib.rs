//! Symbolic Kirby calculus for 4-dimensional handlebodies.
//!
//! A [`HandleDiagram`] records dotted circles (1-handles) as free generators,
//! 2-handles as reduced words with integer framings, pairwise linking numbers
//! and counts of 3- and 4-handles. Moves rewrite this data exactly; the
//! invariants, canonical forms and the Gluck-twist operations are computed
//! from it.

pub mod canonical;
pub mod corpus;
pub mod diagram;
pub mod gluck;
pub mod invariants;
pub mod lang;
pub mod matrix;
pub mod moves;

pub use canonical::{canonical_diagram, canonical_form, canonical_hash, CanonicalHash};
pub use diagram::{DiagramError, FreeWord, GeneratorId, HandleDiagram, HandleId, LinkingData, Sign, TwoHandle};
pub use gluck::{
    check_gluck_triviality_hypothesis, gluck_twist, represent_spherical_class, surger_sphere, trivialize_gluck,
    CertificateTerm, GluckError, SearchBudget, SphericalClassCertificate, Verdict, Witness,
};
pub use invariants::{intersection_form, FormData, InvariantSummary, Parity};
pub use lang::{parse_certificate, parse_diagram, parse_script, serialize_diagram, serialize_script, ParseError};
pub use matrix::{smith_normal_form, IntMatrix, SmithForm};
pub use moves::{apply_script, Move, MoveError, MoveLog, MoveScript};
