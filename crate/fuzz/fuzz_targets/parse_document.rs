#![no_main]

use conestab_cli::parse_document;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(raw) = parse_document(data) {
        // every stage may reject, none may panic
        if let Ok(doc) = raw.build() {
            for name in doc.filtrations.keys() {
                let _ = doc.filtration(name);
            }
        }
    }
});
