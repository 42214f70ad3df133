use std::fs;
use std::io::Write;
use std::path::Path;

use crate::{Error, Result};

/// Locale-independent rendering with 13 significant digits.
pub(crate) fn number(v: f64) -> String {
    format!("{v:.12e}")
}

pub(crate) fn write_csv<W: Write>(
    out: W,
    header: &[String],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub(crate) fn create_file(path: &Path) -> Result<fs::File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?;
    }
    fs::File::create(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub(crate) fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = create_file(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
