use std::fs;
use std::io::Write;
use std::path::Path;

use aumcf::ErrorKind;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Failure reported as a JSON record on stderr.
#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    pub fn validation(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Validation,
            code,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError {
            kind: ErrorKind::Io,
            code: "io",
            message: format!("{}: {err}", path.display()),
        }
    }

    /// 2 validation (and unreadable input), 3 numerical degeneracy, 4 config.
    pub fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::Validation | ErrorKind::Io => 2,
            ErrorKind::Degenerate => 3,
            ErrorKind::Config => 4,
        }
    }

    pub fn to_json(&self) -> String {
        let kind = match self.kind {
            ErrorKind::Validation => "validation",
            ErrorKind::Degenerate => "degenerate",
            ErrorKind::Config => "config",
            ErrorKind::Io => "io",
        };
        serde_json::json!({
            "error": {
                "code": self.code,
                "kind": kind,
                "exit_code": self.exit_code(),
                "message": self.message,
            }
        })
        .to_string()
    }
}

impl From<aumcf::Error> for CliError {
    fn from(err: aumcf::Error) -> Self {
        CliError {
            kind: err.kind(),
            code: err.code(),
            message: err.to_string(),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Settings that produced a report. Contains no timestamps so identical
/// inputs give byte-identical output.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub entries: Vec<(&'static str, String)>,
}

impl Provenance {
    pub fn new(command: &'static str) -> Self {
        Provenance {
            tool: "aumcf",
            version: env!("CARGO_PKG_VERSION"),
            command,
            entries: Vec::new(),
        }
    }

    pub fn with(mut self, key: &'static str, value: impl ToString) -> Self {
        self.entries.push((key, value.to_string()));
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("tool".into(), self.tool.into());
        map.insert("version".into(), self.version.into());
        map.insert("command".into(), self.command.into());
        for (k, v) in &self.entries {
            map.insert((*k).into(), v.clone().into());
        }
        serde_json::Value::Object(map)
    }

    /// `# key: value` comment lines for CSV output.
    pub fn csv_header(&self) -> String {
        let mut out = format!(
            "# tool: {}\n# version: {}\n# command: {}\n",
            self.tool, self.version, self.command
        );
        for (k, v) in &self.entries {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out
    }
}

pub fn json_report(provenance: &Provenance, warnings: &[String], result: impl Serialize) -> String {
    let value = serde_json::json!({
        "provenance": provenance.to_json(),
        "warnings": warnings,
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
    text.push('\n');
    text
}

pub fn csv_report(provenance: &Provenance, warnings: &[String], body: &str) -> String {
    let mut text = provenance.csv_header();
    for w in warnings {
        text.push_str(&format!("# warning: {w}\n"));
    }
    text.push_str(body);
    text
}

/// Writes to `path` through a temporary sibling and a rename, so a failed
/// run never leaves a partial file; without a path, writes to stdout.
pub fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(content.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e));
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = fs::write(&tmp, content).and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(CliError::io(path, e));
    }
    Ok(())
}
