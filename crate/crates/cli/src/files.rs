//! Instance and pattern file I/O with field-level diagnostics.

use std::path::Path;

use spansign::graph::{InstanceFile, PatternFile};
use spansign::{Pattern, SignedCompleteGraph};

use crate::CliError;

pub fn load_instance(path: &Path) -> Result<SignedCompleteGraph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    SignedCompleteGraph::try_from(&file)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_pattern(path: &Path) -> Result<Pattern, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let file: PatternFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Pattern::try_from(&file).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn save_instance(path: &Path, host: &SignedCompleteGraph) -> Result<(), CliError> {
    let file = InstanceFile::from(host);
    let text = serde_json::to_string_pretty(&file).expect("instance serializes");
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn save_pattern(path: &Path, pattern: &Pattern) -> Result<(), CliError> {
    let file = PatternFile::from(pattern);
    let text = serde_json::to_string_pretty(&file).expect("pattern serializes");
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
