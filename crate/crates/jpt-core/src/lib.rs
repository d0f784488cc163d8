//! Core building blocks for working with RDF Patch change streams.
//!
//! The crate is split along the lifecycle of a patch:
//!
//! - [`term`] and [`patch`] define the data model: RDF terms (including
//!   quoted triples and generalized positions), statements, and the patch
//!   operation sequence.
//! - [`text`] reads and writes the line-oriented patch text format, parses
//!   N-Quads into datasets, and renders patches as SPARQL Update requests.
//! - [`wire`] implements the framed binary stream format (magic `JPT1`) with
//!   its streaming lookup tables, plus a stats collector over encoded bytes.
//! - [`dataset`] and [`diff`] hold the in-memory quad set and the
//!   difference/apply engine that connects snapshots to patches.
//!
//! Everything here is pure computation over in-memory buffers; file and
//! process plumbing lives in the companion CLI crate. The crate is
//! `no_std`-compatible (with `alloc`) when built without the default `std`
//! feature.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod dataset;
pub mod diff;
pub mod patch;
pub mod term;
pub mod text;
pub mod wire;

pub use dataset::Dataset;
pub use patch::{Patch, PatchOp};
pub use term::{QuotedTriple, Statement, Term};
