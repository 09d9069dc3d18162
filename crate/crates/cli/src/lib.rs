//! Serialization layer of the splitmat command-line tool: JSON documents for
//! matrices, certificates, canonical reports and oracle verdicts.

pub mod doc;
