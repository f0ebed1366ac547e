//! Small file-output helpers shared by the experiment runners.

use consensus_core::Result;
use std::path::Path;

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, content)?;
    Ok(())
}

/// Build a CSV from a header and preformatted rows.
pub fn csv_string(header: &str, rows: &[String]) -> String {
    let mut out = String::with_capacity(header.len() + rows.iter().map(|r| r.len() + 1).sum::<usize>() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    out
}

/// Indices 0, s, 2s, ... plus the final index, for plot decimation.
pub fn decimate_indices(len: usize, target: usize) -> Vec<usize> {
    if len == 0 {
        return Vec::new();
    }
    let step = len.div_ceil(target.max(1)).max(1);
    let mut out: Vec<usize> = (0..len).step_by(step).collect();
    if *out.last().unwrap() != len - 1 {
        out.push(len - 1);
    }
    out
}
