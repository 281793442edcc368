#![no_main]

use libfuzzer_sys::fuzz_target;
use torus_rigidity::formats::parse_folner;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(value) = parse_folner(text) {
            let again = serde_json::to_string(&value).expect("serializable");
            assert_eq!(parse_folner(&again).expect("re-parses"), value);
        }
    }
});
