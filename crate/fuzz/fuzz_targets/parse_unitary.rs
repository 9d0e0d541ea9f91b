#![no_main]

use libfuzzer_sys::fuzz_target;
use qsteer::io;
use qsteer::Limits;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let limits = Limits::with_window_cap(64);
    if let Ok((window, matrix)) = io::parse_unitary(text, &limits) {
        assert_eq!(window.len, matrix.nrows());
        assert_eq!(matrix.nrows(), matrix.ncols());
        assert!(matrix.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
    }
});
