pub mod analyze;
pub mod bfnull;
pub mod exact;
pub mod generate;
pub mod reduce;
pub mod report;
pub mod timing;

use std::path::Path;

use crate::{CliError, CliResult};

/// Create the output directory, refusing to write into a non-empty one
/// unless forced.
pub fn prepare_out_dir(path: &Path, force: bool) -> CliResult<()> {
    if path.exists() {
        if !path.is_dir() {
            return Err(CliError::validation(format!(
                "{} exists and is not a directory",
                path.display()
            )));
        }
        let non_empty = std::fs::read_dir(path)?.next().is_some();
        if non_empty && !force {
            return Err(CliError::validation(format!(
                "output directory {} is not empty (pass --force to overwrite)",
                path.display()
            )));
        }
    } else {
        std::fs::create_dir_all(path)?;
    }
    Ok(())
}

pub fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}
