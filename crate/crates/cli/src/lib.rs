//! Command-line workbench over `dualram-core`: a catalog of named
//! structures, JSON file formats, run reports and the lemma battery.

pub mod catalog;
pub mod cli;
pub mod io;
pub mod report;
pub mod suite;
