//! Exact verification and search tools for the action of the Long–Reid
//! surface group on the product of Bruhat–Tits trees `T₃ × T₄`.
//!
//! The group is generated by the images of `a`, `b` in PGL₂(ℤ[1/6]) under the
//! `t = 9` member of a one-parameter family of representations of
//! ⟨a, b | [a,b]² = 1⟩. Its action on `T₃ × T₄` is proper iff its intersection
//! with PGL₂(ℤ), the stabilizer of the base vertex pair, is finite; a word
//! evaluating to an infinite-order element of PGL₂(ℤ) therefore certifies
//! improperness.

pub mod certificate;
pub mod exact;
pub mod family;
pub mod search;
pub mod tree;
pub mod witness;
pub mod words;

pub use certificate::{verify_certificate, verify_paper_certificate, VerificationReport};
pub use exact::{canonicalize, valuation, BigRational, ExactError, ProjectiveMatrix};
pub use family::{long_reid_generators, make_family, Generators, RepFamily};
pub use search::{SearchConfig, SearchMode};
pub use tree::{
    displacement, is_vertex_stabilizer, vertex_key, vertex_pair, PrimeContext, VertexKey,
};
pub use witness::{build_record, classify_order, OrderClass, WitnessRecord};
pub use words::{paper_witness_word, parse_word, Letter, Word, WordStyle};
