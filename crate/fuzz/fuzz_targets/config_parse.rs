#![no_main]

use libfuzzer_sys::fuzz_target;
use pulsewall::config::{apply_override, overlay_config, SimConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut cfg = SimConfig::default();
    if overlay_config(&mut cfg, text).is_ok() {
        // Whatever parses must be safe to range-check.
        let _ = cfg.validate();
    }
    let mut cfg = SimConfig::default();
    for line in text.lines().take(64) {
        let _ = apply_override(&mut cfg, line);
    }
});
