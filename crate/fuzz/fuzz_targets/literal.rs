#![no_main]

use libfuzzer_sys::fuzz_target;
use torus_rigidity::literal::{fmt_rational, parse_int, parse_rational};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(q) = parse_rational(text) {
            assert_eq!(parse_rational(&fmt_rational(&q)).expect("re-parses"), q);
        }
        if let Ok(n) = parse_int(text) {
            assert_eq!(parse_int(&n.to_string()).expect("re-parses"), n);
        }
    }
});
