#![no_main]

use libfuzzer_sys::fuzz_target;
use selmer3::sieve::{ExperimentKind, Family};
use selmer3::verify::Suite;

// Names that parse must print back to themselves.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(k) = s.parse::<ExperimentKind>() {
        assert_eq!(k.to_string(), s);
    }
    if let Ok(f) = s.parse::<Family>() {
        assert_eq!(f.to_string(), s);
    }
    if let Ok(suite) = s.parse::<Suite>() {
        assert_eq!(suite.to_string(), s);
    }
});
