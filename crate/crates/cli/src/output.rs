use std::io::Write;
use std::path::{Path, PathBuf};

use qmetro::dataset::Format;
use qmetro::FigureDataset;
use tempfile::NamedTempFile;

use crate::CliError;

/// Default directory for outputs when `--out` is not given.
pub const OUT_DIR_ENV: &str = "QMETRO_OUT_DIR";

/// Where the encoded dataset goes: `--out`, else `$QMETRO_OUT_DIR`, else
/// standard output (`None`).
pub fn destination(out: Option<&Path>, ds: &FigureDataset, format: Format) -> Option<PathBuf> {
    if let Some(p) = out {
        return Some(p.to_path_buf());
    }
    let dir = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty())?;
    Some(PathBuf::from(dir).join(format!("{}.{}", ds.figure_id, format.extension())))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn emit(ds: &FigureDataset, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    ds.validate()?;
    let text = ds.encode(format)?;
    match destination(out, ds, format) {
        Some(path) => write_atomic(&path, &text).map_err(|e| CliError::Write(path, e))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Write(PathBuf::from("<stdout>"), e))?;
        }
    }
    Ok(())
}
