#![no_main]

use libfuzzer_sys::fuzz_target;
use permuton_lab_core::shape::FerrersShape;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = text.parse::<FerrersShape>() {
        let again: FerrersShape = x.to_string().parse().expect("display output parses");
        assert_eq!(again, x);
    }
});
