use anyhow::{Context, Result};
use std::io::Write;
use std::path::Path;

/// Write `text` to `path` through a temporary file in the same directory
/// followed by a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot move output into place at {}", path.display()))?;
    Ok(())
}

/// CSV field for an optional number: empty when absent.
pub fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
