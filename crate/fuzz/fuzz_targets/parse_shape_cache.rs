#![no_main]

use libfuzzer_sys::fuzz_target;
use permuton_lab_core::sampler::parse_shape_cache;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_shape_cache(text) {
        assert_eq!(file.conj.len(), file.cuts.len());
        assert!(file.cuts.windows(2).all(|w| w[0] <= w[1]));
        assert!(file.conj.iter().all(|mu| mu.len() == file.d));
    }
});
