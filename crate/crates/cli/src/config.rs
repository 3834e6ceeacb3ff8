//! Config files: TOML, JSON, or the header of an earlier output file.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

pub fn load(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let value = if text.starts_with('#') {
        kitaev_core::io::read_config(&text).map_err(|e| CliError::usage(e.to_string()))?
    } else if ext.eq_ignore_ascii_case("toml") {
        let table: toml::Table = toml::from_str(&text).map_err(|e| CliError::usage(format!("bad TOML config: {e}")))?;
        serde_json::to_value(table).map_err(|e| CliError::usage(e.to_string()))?
    } else {
        let value: Value = serde_json::from_str(&text).map_err(|e| CliError::usage(format!("bad JSON config: {e}")))?;
        // a JSON report carries its configuration under `config`
        match value.get("format").and(value.get("config")) {
            Some(config) => config.clone(),
            None => value,
        }
    };
    match value {
        Value::Object(map) => Ok(map.into_iter().map(|(k, v)| (k.replace('_', "-"), v)).collect()),
        _ => Err(CliError::usage("config must be a table of flag names to values")),
    }
}

/// Read the keys belonging to `command` out of a config table.
pub fn layer<T>(config: Option<&Map<String, Value>>, command: &str) -> Result<T, CliError>
where
    T: DeserializeOwned + Serialize + Default,
{
    let Some(map) = config else {
        return Ok(T::default());
    };
    let mut map = map.clone();
    if let Some(c) = map.remove("command") {
        if c.as_str() != Some(command) {
            return Err(CliError::usage(format!("config is for command {c}, not {command}")));
        }
    }
    let known = match serde_json::to_value(T::default()) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    };
    if let Some(key) = map.keys().find(|k| !known.contains_key(*k)) {
        return Err(CliError::usage(format!("unknown config key `{key}` for {command}")));
    }
    serde_json::from_value(Value::Object(map)).map_err(|e| CliError::usage(format!("bad config value: {e}")))
}

/// The configuration as embedded in output headers.
pub fn header<T: Serialize>(command: &str, args: &T) -> Value {
    let mut map = Map::new();
    map.insert("command".into(), Value::String(command.into()));
    if let Ok(Value::Object(fields)) = serde_json::to_value(args) {
        map.extend(fields);
    }
    Value::Object(map)
}
