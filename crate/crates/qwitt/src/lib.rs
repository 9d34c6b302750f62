//! Exact computations with big Witt vectors, q-Witt vectors and the q-Hodge
//! cohomology of polynomial rings.

pub mod cli;
pub mod qcomplex;
pub mod qdrwmodel;
pub mod qwittring;
pub mod report;
pub mod ringkit;
pub mod wittcore;
