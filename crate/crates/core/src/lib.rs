//! Exact computations in free products with amalgamation `L *_H G` of
//! finite groups: normal forms, small cancellation over the amalgam, and
//! the special relator construction used to embed `L` into a quotient
//! in which `G` is malnormal.

pub mod amalgam;
pub mod fingroup;
pub mod instances;
pub mod shelah;
pub mod smallcancel;
