#![no_main]

use libfuzzer_sys::fuzz_target;
use spinqsl::config::ScenarioConfig;
use spinqsl::validate::Suite;
use std::str::FromStr;

fuzz_target!(|data: &[u8]| {
    if let Ok(name) = std::str::from_utf8(data) {
        if let Some(cfg) = ScenarioConfig::preset(name) {
            cfg.validate().expect("presets are valid");
        }
        let _ = Suite::from_str(name);
    }
});
