//! File ingestion and emission: unit-suffixed CSV tables, the run
//! configuration document, and a small standalone SVG line-plot writer.

pub mod config;
pub mod svg;
pub mod tables;

pub use config::{CarbonConfig, NitrogenConfig, RunConfig, SimulationConfig, SystemConfig};
pub use tables::{
    parse_expansion_table, parse_measurements, parse_phonon_table, parse_trace,
    write_expansion_table, write_phonon_table, write_trace, MeasurementRecord,
};
