//! Verification and model search for finite left-almost hypergroupoids.
//!
//! A hypergroupoid `(H, ∘)` assigns a nonempty subset `a∘b` of `H` to every
//! ordered pair. Products of subsets go through the induced operation
//! `A*B = ⋃ a∘b`, so an identity such as the left invertive law reads
//! `(a∘b)*{c} = (c∘b)*{a}`.

pub mod brackets;
pub mod cli;
pub mod elemset;
pub mod expr;
pub mod fixtures;
pub mod ideals;
pub mod laws;
pub mod report;
pub mod search;
pub mod table;
pub mod tablefile;

pub use elemset::ElemSet;
pub use laws::{LawId, LawReport, Verdict, Witness};
pub use table::{validate_table, CoreError, HyperTable};
