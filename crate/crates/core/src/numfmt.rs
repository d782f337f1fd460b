//! Fixed-precision number formatting for reports.

/// Significant digits used in every textual report.
pub const SIG_DIGITS: usize = 12;

/// Formats `x` with [`SIG_DIGITS`] significant digits, dropping trailing
/// zeros, in the spirit of C's `%.12g`.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig;

    #[test]
    fn formats() {
        assert_eq!(sig(0.25), "0.25");
        assert_eq!(sig(1.0), "1");
        assert_eq!(sig(-0.5), "-0.5");
        assert_eq!(sig(std::f64::consts::PI), "3.14159265359");
        assert_eq!(sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig(1e-20), "1e-20");
        assert_eq!(sig(123456789012345.0), "1.23456789012e14");
        assert_eq!(sig(0.0), "0");
    }
}
