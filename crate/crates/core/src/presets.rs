//! Scenario files shipped with the crate.

use crate::config::{parse_scenario, ConfigError, Scenario};

pub const NAMES: &[&str] = &["fig2", "fig3", "fig4"];

pub fn preset_text(name: &str) -> Option<&'static str> {
    match name {
        "fig2" => Some(include_str!("../../../presets/fig2.cfg")),
        "fig3" => Some(include_str!("../../../presets/fig3.cfg")),
        "fig4" => Some(include_str!("../../../presets/fig4.cfg")),
        _ => None,
    }
}

pub fn preset(name: &str) -> Option<Result<Scenario, ConfigError>> {
    preset_text(name).map(parse_scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_parse() {
        for name in NAMES {
            preset(name).unwrap().unwrap();
        }
        assert!(preset("fig9").is_none());
        assert!(preset("fig4").unwrap().unwrap().cavity.is_some());
    }
}
