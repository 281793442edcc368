#![no_main]

use libfuzzer_sys::fuzz_target;
use torus_rigidity::formats::parse_measure;
use torus_rigidity::measures::MeasureSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(mu) = parse_measure(text) {
            let again = serde_json::to_string(&mu).expect("serializable");
            assert_eq!(parse_measure(&again).expect("re-parses"), mu);
            if let MeasureSpec::Atomic(m) = &mu {
                assert_eq!(m.total_weight(), num_one());
            }
        }
    }
});

fn num_one() -> num_rational::BigRational {
    num_rational::BigRational::from_integer(1.into())
}
