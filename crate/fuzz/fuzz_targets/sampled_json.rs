//! Sampled-function JSON: parsing must never panic, and any accepted
//! input must reach a serialization fixed point in one step.

#![no_main]

use libfuzzer_sys::fuzz_target;

use conecalc::formats;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(u) = formats::sampled_from_json(text) {
        let once = formats::sampled_to_json(&u);
        let again = formats::sampled_from_json(&once).expect("canonical form must reparse");
        assert_eq!(once, formats::sampled_to_json(&again));
    }
});
