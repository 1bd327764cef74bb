//! Composition of crowdsourced wireless energy services.
//!
//! Providers advertise energy offers in a confined area; a consumer asks for
//! a quantity of energy over a time window. The pipeline is:
//!
//! 1. [`index::build_index`] and [`index::select_candidates`] find services in
//!    range and clip them to the query window.
//! 2. [`composability::eligible`] drops slices not worth a connection.
//! 3. A composer from [`compose`] picks per-chunk selections under the
//!    consumer's intensity cap.
//!
//! [`workload`] and [`experiment`] generate synthetic scenarios and run the
//! completeness and runtime sweeps.

pub mod chunking;
pub mod cli;
pub mod composability;
pub mod compose;
pub mod error;
pub mod experiment;
pub mod fixtures;
pub mod index;
pub mod model;
pub mod pipeline;
pub mod qos;
pub mod workload;

pub use error::{Error, Result};
pub use pipeline::{Engine, EngineConfig};
