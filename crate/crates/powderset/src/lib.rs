//! Finite-scale toolkit for topological monoids acting on set-theoretic
//! universes.
//!
//! The library builds hereditarily finite set universes over atom tables,
//! extends monoid and group actions through the membership structure, and
//! checks the machinery that grows out of that: left congruences and the
//! powder topologies their filters generate, stabiliser relations and
//! continuity, symmetric cores, first-order elementarity of embeddings,
//! left/right powder and chirality criteria on window-truncated function
//! monoids, and inverse-limit completeness.
//!
//! Everything is exact and finite: checks either verify a law exhaustively or
//! return a concrete witness against it. See the `examples/` directory for a
//! runnable tour of each capability, and the `powderset` binary for the
//! batch-check command line.

pub mod action;
pub mod cli;
pub mod completion;
pub mod formula_text;
pub mod hf;
pub mod logic;
pub mod monoid;
pub mod powder;
pub mod symcore;
