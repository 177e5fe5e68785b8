//! Run manifests: one `key=value` line per entry, written next to a
//! command's primary output. A manifest records every parameter that
//! influenced the run plus per-stage wall-clock times, so any output can
//! be traced and reproduced byte for byte.

use std::fmt::Display;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Duration;

/// Ordered key=value record of one command invocation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunManifest {
    entries: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        let mut manifest = RunManifest::default();
        manifest.set("subcommand", subcommand);
        manifest
    }

    /// Appends an entry; keys may repeat, later wins on lookup.
    pub fn set(&mut self, key: &str, value: impl Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn set_path(&mut self, key: &str, path: &Path) {
        self.set(key, path.display());
    }

    /// Records a stage duration as integer milliseconds under
    /// `stage_ms.<stage>`.
    pub fn stage(&mut self, stage: &str, elapsed: Duration) {
        self.set(&format!("stage_ms.{stage}"), elapsed.as_millis());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            out.push_str(key);
            out.push('=');
            out.push_str(value);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.render())
    }

    /// Parses manifest text; lines without `=` are ignored.
    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .filter_map(|line| {
                line.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
            })
            .collect();
        RunManifest { entries }
    }

    pub fn load(path: &Path) -> io::Result<Self> {
        Ok(Self::parse(&fs::read_to_string(path)?))
    }
}

/// Manifest path for a primary output file: `<output>.manifest`.
pub fn manifest_path_for(output: &Path) -> PathBuf {
    let mut os = output.as_os_str().to_os_string();
    os.push(".manifest");
    PathBuf::from(os)
}
