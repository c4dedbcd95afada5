//! CSV files stamped with the invocation that produced them.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use relmass::Result;

/// The command line after the program name, quoted where needed so it can be
/// pasted back into a shell.
pub fn invocation(args: &[String]) -> String {
    let quoted: Vec<String> = args
        .iter()
        .map(|a| {
            if !a.is_empty() && a.chars().all(|c| c.is_ascii_alphanumeric() || "-_.,:/=+".contains(c)) {
                a.clone()
            } else {
                format!("'{}'", a.replace('\'', r"'\''"))
            }
        })
        .collect();
    std::iter::once("relmass".to_string()).chain(quoted).collect::<Vec<_>>().join(" ")
}

pub struct CsvFile {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CsvFile {
    /// Creates `dir/name` and writes the `#` header lines.
    pub fn create(dir: &Path, name: &str, header: &[String]) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        let mut out = BufWriter::new(File::create(&path)?);
        for line in header {
            writeln!(out, "# {line}")?;
        }
        Ok(Self { path, out })
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) -> Result<()> {
        let line = fields.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(",");
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    pub fn writer(&mut self) -> &mut BufWriter<File> {
        &mut self.out
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.out.flush()?;
        Ok(self.path)
    }
}
