//! Geometry labels: parsing must never panic, and the canonical label
//! of any accepted input must parse back to the same label.

#![no_main]

use libfuzzer_sys::fuzz_target;

use conecalc::formats;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(geometry) = formats::parse_geometry(text) {
        let label = formats::geometry_label(&geometry);
        let reparsed = formats::parse_geometry(&label).expect("canonical label must parse");
        assert_eq!(label, formats::geometry_label(&reparsed));
    }
});
