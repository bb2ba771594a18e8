//! Exponent-set JSON: parsing must never panic, and any accepted input
//! must reach a serialization fixed point in one step.

#![no_main]

use libfuzzer_sys::fuzz_target;

use conecalc::formats;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((set, intervals)) = formats::exponents_from_json(text) {
        let once = formats::exponents_to_json(&set, &intervals);
        let (set2, intervals2) =
            formats::exponents_from_json(&once).expect("canonical form must reparse");
        assert_eq!(once, formats::exponents_to_json(&set2, &intervals2));
    }
});
