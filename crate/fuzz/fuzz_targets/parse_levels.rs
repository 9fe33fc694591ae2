#![no_main]

use conestab_cli::parse_levels;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(levels) = parse_levels(data) {
        assert!(levels.windows(2).all(|w| w[0] < w[1]));
        assert!(!levels.contains(&0));
    }
});
