//! Decimal formatting with a fixed number of significant digits, used for
//! every emitted CSV value.

/// Significant digits written to CSV files.
pub const SIG_DIGITS: usize = 12;

/// Formats `x` with [`SIG_DIGITS`] significant digits, trailing zeros
/// trimmed. Plain decimal notation for moderate magnitudes, scientific
/// otherwise.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Round first so the exponent reflects the rounded value (9.9999999999995 -> 10).
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let rounded: f64 = sci.parse().expect("formatted float parses");
    let exp = rounded.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        let (mantissa, e) = sci.split_once('e').expect("scientific notation");
        return format!("{}e{}", trim_zeros(mantissa), e);
    }
    let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{rounded:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
