//! Scenarios shipped with the binary.

use crate::config::{parse, ScenarioConfig};
use crate::error::CliError;

pub struct Preset {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! preset {
    ($name:literal) => {
        Preset { name: $name, text: include_str!(concat!("../presets/", $name, ".json")) }
    };
}

pub const PRESETS: &[Preset] = &[
    preset!("paper-sec5-symmetric"),
    preset!("paper-sec5-asymmetric"),
    preset!("transmon-obstruction"),
    preset!("fig4-cuts"),
    preset!("oracle-default"),
    preset!("oracle-non-dispersive"),
    preset!("oracle-decoupled"),
];

pub fn load(name: &str) -> Result<ScenarioConfig, CliError> {
    let preset = PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let known: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        CliError::Config(format!("unknown preset `{name}`; known presets: {}", known.join(", ")))
    })?;
    parse(preset.text, &format!("preset {name}"))
}
