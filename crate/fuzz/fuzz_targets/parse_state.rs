#![no_main]

use libfuzzer_sys::fuzz_target;
use qsteer::io;
use qsteer::Limits;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let limits = Limits::default();
    if let Ok(state) = io::parse_state(text, &limits) {
        // Accepted inputs round-trip through the canonical form.
        let canon = io::to_canonical_json(&io::state_to_file(&state));
        let reparsed = io::parse_state(&canon, &limits).unwrap();
        assert_eq!(reparsed, state);
        assert_eq!(canon, io::to_canonical_json(&io::state_to_file(&reparsed)));
    }
});
