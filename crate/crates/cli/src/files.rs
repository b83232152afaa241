use std::path::Path;

use quadforms::rings::{Poly, Ring, RingDescriptor};
use quadforms::springer::EtaleExtension;
use quadforms::QuadraticSpace;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// `{"base": <ring descriptor>, "modulus": [c_0, ..., c_n]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionFile {
    pub base: RingDescriptor,
    pub modulus: Vec<Value>,
}

impl ExtensionFile {
    pub fn from_extension(ext: &EtaleExtension) -> Self {
        let modulus = match ext.base().encode_poly(ext.modulus()) {
            Value::Array(items) => items,
            other => vec![other],
        };
        ExtensionFile { base: ext.base().descriptor(), modulus }
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> Result<T, CliError> {
    serde_json::from_value(read_json(path)?)
        .map_err(|e| CliError::Parse(format!("{} is not a {what} file: {e}", path.display())))
}

pub fn load_ring(path: &Path) -> Result<Ring, CliError> {
    let d: RingDescriptor = parse(path, "ring")?;
    Ring::from_descriptor(&d).map_err(CliError::from)
}

pub fn load_form(path: &Path) -> Result<QuadraticSpace, CliError> {
    let file: quadforms::quadspace::SpaceFile = parse(path, "form")?;
    QuadraticSpace::from_file(&file).map_err(CliError::from)
}

pub fn load_extension(path: &Path) -> Result<EtaleExtension, CliError> {
    let file: ExtensionFile = parse(path, "extension")?;
    let base = Ring::from_descriptor(&file.base)?;
    let f: Poly = base.decode_poly(&Value::Array(file.modulus))?;
    EtaleExtension::new(&base, &f).map_err(CliError::from)
}
