//! Common factors of k-automatic and Sturmian sequences.
//!
//! The crate generates both kinds of sequence exactly, enumerates certified
//! factor sets, intersects them, and derives an explicit bound on the length
//! of any common factor together with a certificate that can be re-checked
//! from scratch.

pub mod automatic;
pub mod certifier;
pub mod common;
pub mod exactnum;
pub mod sturmian;
pub mod words;
