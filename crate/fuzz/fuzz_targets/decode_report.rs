#![no_main]

use conestab_core::estimators::EstimatorSweep;
use conestab_core::invariants::InvariantReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(rep) = serde_json::from_slice::<InvariantReport>(data) {
        let text = serde_json::to_string(&rep).unwrap();
        assert_eq!(serde_json::from_str::<InvariantReport>(&text).unwrap(), rep);
    }
    if let Ok(sw) = serde_json::from_slice::<EstimatorSweep>(data) {
        let text = serde_json::to_string(&sw).unwrap();
        assert_eq!(serde_json::from_str::<EstimatorSweep>(&text).unwrap(), sw);
    }
});
