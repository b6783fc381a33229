//! Exact finite-scale engine for transfer maps between group (co)homology of
//! continuously orbit equivalent actions.
//!
//! The crate is layered bottom-up:
//! [`linalg`] (exact rational matrices, rank, kernels, simplex),
//! [`group`] and [`action`] (finite groups and permutation actions),
//! [`coe`] (orbit-equivalence links and their cocycles),
//! [`modules`] (coefficient modules and norms),
//! [`bar`] (bar-resolution complexes) and
//! [`transfer`] (the transfer matrices and their verification).

pub mod action;
pub mod bar;
pub mod coe;
pub mod config;
pub mod exec;
pub mod fixtures;
pub mod group;
pub mod linalg;
pub mod modules;
pub mod report;
pub mod transfer;

pub use config::Config;
pub use exec::Exec;
