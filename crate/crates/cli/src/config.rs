//! Flag and config-file merging. A config file is a JSON object, an output
//! JSON document with a `config` field, or a CSV whose `# config:` line
//! holds the object. Explicit flags win over the file.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

pub const SEED_ENV: &str = "LOCALITY_LAB_SEED";
pub const CONFIG_PREFIX: &str = "# config: ";

pub fn load(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let json = match text.lines().find_map(|l| l.strip_prefix(CONFIG_PREFIX)) {
        Some(line) => line.to_string(),
        None => text,
    };
    let value: Value = serde_json::from_str(&json)
        .map_err(|e| CliError::Usage(format!("config {} is not valid JSON: {e}", path.display())))?;
    match value {
        Value::Object(mut m) => match m.remove("config") {
            Some(Value::Object(inner)) => Ok(inner),
            Some(_) => Err(CliError::Usage("`config` field must be an object".into())),
            None => Ok(m),
        },
        _ => Err(CliError::Usage("config must be a JSON object".into())),
    }
}

/// Overlays the explicitly given flags onto the config file and fills the
/// seed from the environment when neither sets it.
pub fn resolve<F: Serialize, R: DeserializeOwned>(flags: &F, file: Option<&Path>) -> Result<R, CliError> {
    let mut merged = match file {
        Some(p) => load(p)?,
        None => Map::new(),
    };
    if let Value::Object(given) = serde_json::to_value(flags).expect("flags serialize") {
        for (k, v) in given {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    if !merged.contains_key("seed") {
        let seed = match std::env::var(SEED_ENV) {
            Ok(s) => s
                .trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got {s:?}")))?,
            Err(_) => 0,
        };
        merged.insert("seed".into(), Value::from(seed));
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Usage(format!("bad configuration: {e}")))
}
