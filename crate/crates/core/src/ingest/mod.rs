//! Dataset input and output: UEA `.ts` text, `.mtsb` binary, CSV previews and
//! validation against the archive's published summary statistics.

mod binary;
mod export;
mod meta;
mod ts;

use std::path::Path;

pub use binary::{read_binary, write_binary, MAGIC, VERSION as BINARY_VERSION};
pub use export::{export_csv, fmt_sig9, preview_csv};
pub use meta::{lookup_meta, validate_meta, validate_pair, DatasetMeta, FieldCheck, ValidationReport, UEA_EQUAL_LENGTH};
pub use ts::{parse_ts, serialize_ts, TsHeader};

use crate::error::{Error, Result};
use crate::series::Dataset;

/// Load a `.ts` or `.mtsb` file, chosen by extension (`.mtsb` binary, anything else text).
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    if is_binary_path(path) {
        read_binary(&bytes)
    } else {
        let text = String::from_utf8(bytes).map_err(|e| Error::Parse {
            line: 0,
            message: format!("{}: not valid UTF-8: {e}", path.display()),
        })?;
        parse_ts(&text)
    }
}

/// Write `.mtsb`, `.csv` or `.ts` according to the extension.
pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    let bytes = match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => export_csv(&ds.examples, &ds.class_names).into_bytes(),
        Some("ts") => serialize_ts(ds).into_bytes(),
        _ => write_binary(ds),
    };
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn is_binary_path(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()) == Some("mtsb")
}
