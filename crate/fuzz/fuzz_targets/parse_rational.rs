#![no_main]

use conestab_core::exactgeom::parse_rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Some(q) = parse_rational(data) {
        assert_eq!(parse_rational(&q.to_string()), Some(q));
    }
});
