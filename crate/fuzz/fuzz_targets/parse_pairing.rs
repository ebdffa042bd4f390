#![no_main]

use libfuzzer_sys::fuzz_target;
use permuton_lab_core::bwx::parse_pairing;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(pairs) = parse_pairing(text) {
        let lines = text.lines().filter(|l| !l.trim().is_empty()).count();
        assert_eq!(pairs.len(), lines);
    }
});
