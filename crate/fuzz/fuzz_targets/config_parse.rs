#![no_main]

use libfuzzer_sys::fuzz_target;
use spinqsl::config::ScenarioConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = ScenarioConfig::from_json_str(text) {
            // anything that validated must survive a serialization round trip
            let again = ScenarioConfig::from_json_str(&cfg.to_json())
                .expect("validated config must re-parse");
            assert_eq!(again.outputs, cfg.outputs);
            assert_eq!(again.spin.to_bits(), cfg.spin.to_bits());
        }
    }
});
