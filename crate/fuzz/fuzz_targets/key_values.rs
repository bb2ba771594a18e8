//! Config key=value text: parsing must never panic, and re-rendering
//! any accepted map must parse back to the same map.

#![no_main]

use libfuzzer_sys::fuzz_target;

use conecalc::formats;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(map) = formats::parse_key_values(text) {
        let mut rendered = String::new();
        for (key, value) in &map {
            rendered.push_str(key);
            rendered.push_str(" = ");
            rendered.push_str(value);
            rendered.push('\n');
        }
        let reparsed = formats::parse_key_values(&rendered).expect("rendered config must parse");
        assert_eq!(map, reparsed);
    }
});
