//! Number formatting shared by every CSV writer.

/// `printf("%.{digits}g")`-style formatting: `digits` significant digits,
/// trailing zeros trimmed, exponent form outside `[1e-5, 10^digits)`.
pub fn significant(value: f64, digits: usize) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{value:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn exact(value: f64) -> String {
    format!("{value}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(significant(0.0, 10), "0");
        assert_eq!(significant(1.0, 10), "1");
        assert_eq!(significant(1.0 / 3.0, 10), "0.3333333333");
        assert_eq!(significant(-2.5e-7, 10), "-2.5e-7");
        assert_eq!(significant(123456.789012345, 10), "123456.789");
        assert_eq!(significant(9.99999999999, 10), "10");
        assert_eq!(significant(1.5e12, 10), "1.5e12");
    }
}
