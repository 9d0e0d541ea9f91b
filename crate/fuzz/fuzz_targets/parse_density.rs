#![no_main]

use libfuzzer_sys::fuzz_target;
use qsteer::io;
use qsteer::Limits;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // A small cap keeps huge matrices from slowing the fuzzer down.
    let limits = Limits::with_window_cap(64);
    if let Ok(rho) = io::parse_density(text, &limits) {
        rho.validate(1e-10).unwrap();
        let canon = io::to_canonical_json(&io::density_to_file(&rho));
        let reparsed = io::parse_density(&canon, &limits).unwrap();
        assert_eq!(reparsed, rho);
    }
});
