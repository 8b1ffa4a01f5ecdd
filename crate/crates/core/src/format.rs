//! Stable textual formatting of reals for CSV and report output.
//!
//! Every real written by the harness goes through [`fmt_real`]: twelve
//! significant digits, trailing zeros trimmed, plain decimal notation for
//! magnitudes in `[1e-5, 1e12)` and scientific notation otherwise. The
//! output is a pure function of the `f64` bit pattern, so golden files and
//! byte-level determinism checks stay stable.

/// Significant digits used by [`fmt_real`].
pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_owned();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_owned();
    }
    if x == 0.0 {
        return "0".to_owned();
    }
    // Rounding to 12 significant digits happens here, so the exponent
    // already reflects any carry (9.9999999999995 -> 1.00000000000e1).
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_owned()), exp)
    }
}

/// Formats an optional value, writing an empty field for `None`.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".to_owned()
    } else {
        t.to_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_real(5.0 / 6.0), "0.833333333333");
        assert_eq!(fmt_real(0.5), "0.5");
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(-0.25), "-0.25");
        assert_eq!(fmt_real(11.512925464970229), "11.512925465");
        assert_eq!(fmt_real(100.0), "100");
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(-0.0), "0");
    }

    #[test]
    fn carry_and_extremes() {
        assert_eq!(fmt_real(9.99999999999995), "10");
        assert_eq!(fmt_real(1.5e-7), "1.5e-7");
        assert_eq!(fmt_real(2.0e13), "2e13");
        assert_eq!(fmt_real(0.00012345), "0.00012345");
        assert_eq!(fmt_real(f64::NAN), "nan");
    }

    #[test]
    fn optional_fields() {
        assert_eq!(fmt_opt(None), "");
        assert_eq!(fmt_opt(Some(0.75)), "0.75");
    }
}
