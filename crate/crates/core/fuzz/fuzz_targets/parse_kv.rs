#![no_main]

use libfuzzer_sys::fuzz_target;
use qslsim::cli::parse_kv;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(entries) = parse_kv(text) {
        for (i, a) in entries.iter().enumerate() {
            assert!(!a.key.is_empty());
            assert!(entries[i + 1..].iter().all(|b| b.key != a.key));
        }
    }
});
