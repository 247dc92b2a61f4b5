#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(model) = kleisli_core::io::read_json(data) {
        let text = kleisli_core::io::write_json(&model.system, model.initial);
        let again = kleisli_core::io::read_json(text.as_bytes()).expect("written documents parse");
        assert_eq!(again, model);
        assert_eq!(kleisli_core::io::write_json(&again.system, again.initial), text);
    }
});
