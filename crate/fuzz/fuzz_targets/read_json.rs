#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Any input must either parse or fail with an error value.
    let _ = kleisli_core::io::read_json(data);
});
