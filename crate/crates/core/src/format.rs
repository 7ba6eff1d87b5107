// SPDX-License-Identifier: Apache-2.0

//! Locale-free decimal formatting with 15 significant digits, in the style
//! of C's `%.15g`.

/// Formats `x` with 15 significant digits, trimming trailing zeros and
/// switching to exponent form outside `[1e-4, 1e15)`.
pub fn g15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (14 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Parses a decimal real, rejecting NaN and infinities.
pub fn parse_real(s: &str) -> crate::Result<f64> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| crate::Error::Parse(format!("not a number: {s:?}")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(crate::Error::Parse(format!("not a finite number: {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(g15(0.0), "0");
        assert_eq!(g15(1.0), "1");
        assert_eq!(g15(-0.5), "-0.5");
        assert_eq!(g15(0.1 + 0.2), "0.3");
        assert_eq!(g15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(g15(123456.789), "123456.789");
        assert_eq!(g15(1e-5), "1e-05");
        assert_eq!(g15(2.5e20), "2.5e+20");
        assert_eq!(g15(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(g15(0.0001), "0.0001");
        assert_eq!(g15(999999999999999.0), "999999999999999");
        assert_eq!(g15(1e15), "1e+15");
    }

    #[test]
    fn round_trips_to_15_digits() {
        for &x in &[1.0 / 7.0, -2.0 / 3.0, 6.02214076e23, 1.602e-19] {
            let y: f64 = g15(x).parse().unwrap();
            assert!(((y - x) / x).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(parse_real("nan").is_err());
        assert!(parse_real("inf").is_err());
        assert_eq!(parse_real(" 2.5 ").unwrap(), 2.5);
    }
}
