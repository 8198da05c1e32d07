//! Optional on-disk cache of field exponent tables.
//!
//! When `POWMAP_CACHE_DIR` is set, the exponent table of each field is kept
//! there as little-endian `u32` words in a file named after `(p, n, modulus)`.
//! A blob that fails validation is rebuilt and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use powmap_core::field::DEFAULT_FIELD_CAP;
use powmap_core::{FieldContext, FieldParams, Result};

pub const CACHE_ENV: &str = "POWMAP_CACHE_DIR";

pub fn blob_name(params: &FieldParams) -> String {
    let modulus: Vec<String> = params.modulus.iter().map(u32::to_string).collect();
    format!("gf-{}-{}-{}.bin", params.p, params.n, modulus.join("_"))
}

/// Builds the standard field, going through the cache directory if one is
/// configured.
pub fn load_field(p: u32, n: u32, cap: Option<u64>) -> Result<FieldContext> {
    let cap = cap.unwrap_or(DEFAULT_FIELD_CAP);
    let params = FieldParams::standard_with_cap(p, n, cap)?;
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => load_or_store(Path::new(&dir), params, cap),
        _ => FieldContext::build_with_cap(params, cap),
    }
}

pub fn load_or_store(dir: &Path, params: FieldParams, cap: u64) -> Result<FieldContext> {
    let path = dir.join(blob_name(&params));
    if let Some(exp) = read_blob(&path) {
        if let Ok(field) = FieldContext::from_exp_table(params.clone(), exp, cap) {
            return Ok(field);
        }
    }
    let field = FieldContext::build_with_cap(params, cap)?;
    if let Err(e) = write_blob(dir, &path, field.exp_table()) {
        eprintln!("warning: could not cache field table at {}: {e}", path.display());
    }
    Ok(field)
}

fn read_blob(path: &Path) -> Option<Vec<u32>> {
    let bytes = fs::read(path).ok()?;
    if bytes.len() % 4 != 0 {
        return None;
    }
    Some(
        bytes
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect(),
    )
}

fn write_blob(dir: &Path, path: &Path, exp: &[u32]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let bytes: Vec<u8> = exp.iter().flat_map(|w| w.to_le_bytes()).collect();
    // Write then rename so a concurrent reader never sees a partial blob.
    let tmp: PathBuf = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}
