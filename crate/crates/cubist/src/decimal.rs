//! Assembly of decimal strings from significant digits, shared by the exact
//! (quadratic-field) renderer and the floating-point presentation layer.
//!
//! Values are described as `0.d1 d2 … × 10^exp10` with `d1 ≠ 0`. Rendering is
//! plain positional notation for moderate exponents and falls back to `…e±k`
//! outside that window, with trailing zeros stripped so that exact quantities
//! print in their shortest form ("2154.556", not "2154.5560000…0").

/// Round a digit sequence to `target` significant digits, half away from zero.
/// Returns true when the carry lengthened the number (999… → 1000…), in which
/// case the caller must bump the decimal exponent by one.
pub fn round_to(digits: &mut Vec<u8>, target: usize) -> bool {
    if digits.len() <= target {
        return false;
    }
    let round_up = digits[target] >= 5;
    digits.truncate(target);
    if round_up {
        for d in digits.iter_mut().rev() {
            if *d == 9 {
                *d = 0;
            } else {
                *d += 1;
                return false;
            }
        }
        digits.insert(0, 1);
        digits.pop();
        return true;
    }
    false
}

/// Render `0.digits × 10^exp10` (digits already rounded to the desired
/// precision). `neg` applies a leading minus sign; a zero value is the empty
/// digit slice.
pub fn format_digits(neg: bool, digits: &[u8], exp10: i64) -> String {
    // Strip trailing zeros; all-zero means the value is exactly zero.
    let mut last = digits.len();
    while last > 0 && digits[last - 1] == 0 {
        last -= 1;
    }
    let digits = &digits[..last];
    if digits.is_empty() {
        return "0".to_string();
    }
    let body: String = digits.iter().map(|d| (b'0' + d) as char).collect();
    let sign = if neg { "-" } else { "" };
    let k = digits.len() as i64;
    if exp10 > 0 && exp10 <= 27.max(k) {
        // Integer part present: d1…d_exp10 . rest
        if exp10 >= k {
            let zeros = "0".repeat((exp10 - k) as usize);
            format!("{sign}{body}{zeros}")
        } else {
            format!("{sign}{}.{}", &body[..exp10 as usize], &body[exp10 as usize..])
        }
    } else if exp10 <= 0 && exp10 > -6 {
        let zeros = "0".repeat((-exp10) as usize);
        format!("{sign}0.{zeros}{body}")
    } else {
        // Scientific fallback: d1.d2… e (exp10-1)
        let e = exp10 - 1;
        if k == 1 {
            format!("{sign}{body}e{e}")
        } else {
            format!("{sign}{}.{}e{e}", &body[..1], &body[1..])
        }
    }
}
