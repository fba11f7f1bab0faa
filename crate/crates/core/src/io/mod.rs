//! Loaders and writers.

pub mod builder;
pub mod off;
pub mod report;
pub mod table;
pub mod voxels;

use std::path::Path;

use clap::ValueEnum;

use crate::error::Result;
use crate::gmap::GMap;

pub use off::{load_off, OffMesh};
pub use report::{write_report, BatchReport, RunReport};
pub use table::{read_gmap_table, write_gmap_table};
pub use voxels::{load_voxels, voxels_to_gmap};

/// Input formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Off,
    Voxels,
    Gmap,
}

impl Format {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "off" => Some(Format::Off),
            "vox" | "voxels" | "xyz" => Some(Format::Voxels),
            "gmap" => Some(Format::Gmap),
            _ => None,
        }
    }
}

/// Loads a map in the given format.
pub fn load(path: &Path, format: Format) -> Result<GMap> {
    match format {
        Format::Off => Ok(load_off(path)?.gmap),
        Format::Voxels => load_voxels(path),
        Format::Gmap => read_gmap_table(path),
    }
}
