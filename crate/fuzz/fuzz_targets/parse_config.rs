#![no_main]

use libfuzzer_sys::fuzz_target;
use permuton_lab::config::{config_to_args, parse_config};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(entries) = parse_config(text) {
        let expected: usize = entries
            .iter()
            .map(|(_, v)| match v.as_str() {
                "true" => 1,
                "false" => 0,
                _ => 2,
            })
            .sum();
        assert_eq!(config_to_args(&entries).len(), expected);
    }
});
