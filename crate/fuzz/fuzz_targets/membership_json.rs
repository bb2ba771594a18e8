//! Membership-report JSON: parsing must never panic, and any accepted
//! input must reach a serialization fixed point in one step.

#![no_main]

use libfuzzer_sys::fuzz_target;

use conecalc::formats;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = formats::membership_from_json(text) {
        let once = formats::membership_to_json(&report);
        let again = formats::membership_from_json(&once).expect("canonical form must reparse");
        assert_eq!(once, formats::membership_to_json(&again));
    }
});
