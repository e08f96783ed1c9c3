//! Rational-literal entry point: integers, fractions, and finite decimals
//! must parse without panicking and round-trip through the canonical string.

#![no_main]

use cubist::cli::{parse_rational, rational_string};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_rational(src) {
        let canon = rational_string(&r);
        let again = parse_rational(&canon).expect("canonical rational re-parses");
        assert_eq!(again, r, "rational round-trip changed the value");
    }
});
