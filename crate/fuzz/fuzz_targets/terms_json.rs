//! Asymptotic-term JSON: parsing must never panic, and any accepted
//! input must reach a serialization fixed point in one step.

#![no_main]

use libfuzzer_sys::fuzz_target;

use conecalc::formats;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((from, to, terms)) = formats::terms_from_json(text) {
        let once = formats::terms_to_json(from, to, &terms);
        let (from2, to2, terms2) =
            formats::terms_from_json(&once).expect("canonical form must reparse");
        assert_eq!(once, formats::terms_to_json(from2, to2, &terms2));
    }
});
