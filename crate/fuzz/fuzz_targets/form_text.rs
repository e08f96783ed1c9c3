//! Text-grammar entry point: arbitrary input must either fail cleanly or
//! produce a form whose canonical rendering re-parses to the same value.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(form) = cubist::forms::parse_form(src) {
        let text = form.to_text();
        let again = cubist::forms::parse_form(&text).expect("canonical text re-parses");
        assert_eq!(again, form, "text round-trip changed the form");
    }
});
