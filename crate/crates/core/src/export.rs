//! CSV/JSON writers shared by the library and the CLI.
//!
//! CSV files use a header row, `,` separators, `.` decimals, LF line endings
//! and 17 significant digits, so output is byte-reproducible.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::Result;

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a CSV with the given header and rows of numbers.
pub fn write_csv<W: Write>(mut w: W, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> std::io::Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let line: Vec<String> = row.into_iter().map(fmt_f64).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_csv_file(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    write_csv(&mut w, header, rows)?;
    w.flush()?;
    Ok(())
}

pub fn write_json_file<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Builds a directory under a temporary sibling name and renames it into
/// place only when `fill` succeeds; on failure nothing is left behind.
pub fn write_dir_atomically<F>(dest: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&Path) -> Result<()>,
{
    let parent = dest.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(parent)?;
    let name = dest
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp: PathBuf = parent.join(format!(".{name}.tmp-{}", std::process::id()));
    if tmp.exists() {
        fs::remove_dir_all(&tmp)?;
    }
    fs::create_dir_all(&tmp)?;
    match fill(&tmp) {
        Ok(()) => {
            if dest.exists() {
                fs::remove_dir_all(dest)?;
            }
            fs::rename(&tmp, dest)?;
            Ok(())
        }
        Err(e) => {
            let _ = fs::remove_dir_all(&tmp);
            Err(e)
        }
    }
}

/// Writes a single file through a temporary name in the same directory.
pub fn write_file_atomically<F>(dest: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&Path) -> Result<()>,
{
    let parent = dest.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(parent)?;
    let name = dest
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = parent.join(format!(".{name}.tmp-{}", std::process::id()));
    match fill(&tmp) {
        Ok(()) => {
            fs::rename(&tmp, dest)?;
            Ok(())
        }
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e)
        }
    }
}

/// Writes files into `dest` (created if needed) all-or-nothing: `fill`
/// works in a temporary sibling directory and the files are moved in only
/// when it succeeds. Existing unrelated files in `dest` are kept.
pub fn publish_files<F>(dest: &Path, fill: F) -> Result<Vec<PathBuf>>
where
    F: FnOnce(&Path) -> Result<()>,
{
    let staging = dest.with_file_name(format!(
        ".{}.staging-{}",
        dest.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into()),
        std::process::id()
    ));
    write_dir_atomically(&staging, fill)?;
    let result = (|| {
        fs::create_dir_all(dest)?;
        let mut names: Vec<PathBuf> = fs::read_dir(&staging)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        names.sort();
        let mut out = Vec::with_capacity(names.len());
        for src in names {
            let target = dest.join(src.file_name().expect("file name"));
            fs::rename(&src, &target)?;
            out.push(target);
        }
        Ok(out)
    })();
    let _ = fs::remove_dir_all(&staging);
    result
}
