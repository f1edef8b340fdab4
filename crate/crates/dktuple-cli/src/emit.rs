//! Result emission: JSON Lines to stdout or to files, with a run manifest
//! next to every results file.
//!
//! Results files are deterministic byte-for-byte across reruns: the header
//! line carries only the tool version, the manifest file name, and (for
//! searches) the checkpoint. Timestamps live in the manifest alone.

use anyhow::{Context, Result};
use dktuple::tuples::SearchCheckpoint;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

pub fn input_digest(argv: &[String]) -> String {
    let mut h = Sha256::new();
    h.update(argv.join("\u{1f}"));
    let out = h.finalize();
    out[..8].iter().map(|b| format!("{b:02x}")).collect()
}

pub fn to_line<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(value)?)
}

pub struct Emitter {
    pub out: Option<PathBuf>,
    pub argv: Vec<String>,
}

impl Emitter {
    /// Writes result lines to stdout, or to the `--out` file as JSON Lines
    /// under a header line referencing the run manifest.
    pub fn emit(&self, lines: &[String], checkpoint: Option<&SearchCheckpoint>) -> Result<()> {
        match &self.out {
            None => {
                for line in lines {
                    println!("{line}");
                }
                Ok(())
            }
            Some(path) => {
                let manifest_path = manifest_path_for(path);
                let manifest_name = manifest_path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                let mut header = json!({
                    "type": "header",
                    "tool": "dktuple",
                    "version": env!("CARGO_PKG_VERSION"),
                    "manifest": manifest_name,
                });
                if let Some(cp) = checkpoint {
                    header["checkpoint"] = serde_json::to_value(cp)?;
                }
                let mut body = serde_json::to_string(&header)?;
                body.push('\n');
                for line in lines {
                    body.push_str(line);
                    body.push('\n');
                }
                fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
                self.write_manifest(&manifest_path, path)?;
                Ok(())
            }
        }
    }

    fn write_manifest(&self, manifest_path: &Path, output: &Path) -> Result<()> {
        let manifest = json!({
            "command": self.argv.join(" "),
            "version": env!("CARGO_PKG_VERSION"),
            "timestamp": chrono::Utc::now().to_rfc3339(),
            "input_digest": input_digest(&self.argv),
            "outputs": [output.to_string_lossy()],
        });
        fs::write(manifest_path, serde_json::to_string_pretty(&manifest)?)
            .with_context(|| format!("writing {}", manifest_path.display()))?;
        Ok(())
    }
}

pub fn manifest_path_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Per-prime CSV rows for sieve reports: `p,log_p,weight,residues`.
pub fn write_sieve_csv(path: &Path, rows: &[dktuple::sieve::PrimeRow]) -> Result<()> {
    let mut body = String::from("p,log_p,weight,residues\n");
    for row in rows {
        let residues = row.residues.map(|r| r.to_string()).unwrap_or_default();
        body.push_str(&format!(
            "{},{},{},{}\n",
            row.p, row.log_p, row.weight, residues
        ));
    }
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
