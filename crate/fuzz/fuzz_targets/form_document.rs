//! Structured-document entry point: arbitrary JSON must either be rejected
//! with an error or round-trip exactly through the canonical document.

#![no_main]

use cubist::forms::{parse_form, CubicForm, FormDocument};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(doc) = serde_json::from_slice::<FormDocument>(data) else {
        return;
    };
    if let Ok(form) = CubicForm::from_document(&doc) {
        let json = serde_json::to_string(&form.to_document()).expect("document serializes");
        let again = parse_form(&json).expect("canonical document re-parses");
        assert_eq!(again, form, "document round-trip changed the form");
    }
});
