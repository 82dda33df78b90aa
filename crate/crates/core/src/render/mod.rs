//! Offline rendering, file formats and run configuration.

mod config;
mod ink;
mod svg;
mod traj_file;

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub use config::{OutputFormat, RunConfig};
pub use ink::{render_offline, InkModel, DEFAULT_RESOLUTION};
pub use svg::{export_svg, format_svg};
pub use traj_file::{
    export_trajectory, format_trajectory, import_trajectory, parse_trajectory, TRAJ_HEADER,
};

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Renders `raster` as PNG and writes it atomically.
pub fn export_png(raster: &crate::raster::Raster, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &raster.encode_png()?)
}
