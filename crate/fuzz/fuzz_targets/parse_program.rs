#![no_main]

use libfuzzer_sys::fuzz_target;
use qsteer::io;
use qsteer::Limits;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let limits = Limits::default();
    if let Ok(prog) = io::parse_program(text, &limits) {
        let canon = io::to_canonical_json(&io::program_to_file(&prog));
        let reparsed = io::parse_program(&canon, &limits).unwrap();
        assert_eq!(reparsed, prog);
        // Canonical serialization is a fixed point.
        assert_eq!(canon, io::to_canonical_json(&io::program_to_file(&reparsed)));
    }
});
