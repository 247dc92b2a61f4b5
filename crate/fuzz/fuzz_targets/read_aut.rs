#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(model) = kleisli_core::io::read_aut(data) {
        let text = kleisli_core::io::write_aut(&model.system, model.initial).expect("read systems are writable");
        let again = kleisli_core::io::read_aut_in(text.as_bytes(), model.system.alphabet()).expect("written files parse");
        assert_eq!(again, model);
    }
});
