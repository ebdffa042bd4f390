#![no_main]

use libfuzzer_sys::fuzz_target;
use permuton_lab::experiments::read_sample_lines;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = read_sample_lines(text);
});
