use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::CliError;

/// Compact JSON with every float written as `{:.16e}`.
struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats);
    value.serialize(&mut ser).expect("serializing to memory");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// Collects artifact paths and writes them under the output directory.
pub struct Artifacts {
    dir: Option<PathBuf>,
    pub written: Vec<String>,
}

impl Artifacts {
    pub fn new(dir: Option<&Path>) -> Result<Artifacts, CliError> {
        if let Some(d) = dir {
            std::fs::create_dir_all(d).map_err(|e| CliError::Io(format!("creating {}: {e}", d.display())))?;
        }
        Ok(Artifacts { dir: dir.map(Path::to_path_buf), written: Vec::new() })
    }

    pub fn enabled(&self) -> bool {
        self.dir.is_some()
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        if let Some(d) = &self.dir {
            let path = d.join(name);
            std::fs::write(&path, contents).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
            self.written.push(path.display().to_string());
        }
        Ok(())
    }

    /// Path the summary will be written to, if any.
    pub fn summary_path(&self) -> Option<String> {
        self.dir.as_ref().map(|d| d.join("summary.json").display().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_are_fixed_width() {
        assert_eq!(to_json(&serde_json::json!({"a": [1.5, 2], "b": -0.25})), r#"{"a":[1.5000000000000000e0,2],"b":-2.5000000000000000e-1}"#);
    }
}
