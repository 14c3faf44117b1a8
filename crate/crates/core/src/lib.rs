//! Image-based bilingual lexicon induction.
//!
//! Words are represented by the sets of images retrieved for them. Candidate
//! translations are ranked by how similar their image sets are, either with
//! unsupervised set similarities ([`similarity`]) or a learned linear
//! ranker ([`ranker`]), and rankings are scored with MRR and P@k per part of
//! speech ([`eval`]). [`synth`] builds synthetic corpora with controlled
//! image dispersion.

pub mod corpus;
pub mod eval;
pub mod features;
pub mod numerics;
pub mod parallel;
pub mod ranker;
pub mod similarity;
pub mod synth;
