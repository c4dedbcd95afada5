//! Shared text formatting for CSV and edge-list output.

/// Formats a float with 17 significant digits.
///
/// Seventeen digits round-trip every finite `f64`, so files written with this
/// helper reproduce their inputs exactly when parsed back.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        // normalise -0.0 so byte-identical reruns do not depend on sign of zero
        return "0.0000000000000000e0".to_string();
    }
    format!("{:.16e}", x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for &x in &[1.0, 0.1, std::f64::consts::PI, 1e-300, -2.5e17, 0.359_611_796_797_792_3] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
        assert_eq!(fmt17(-0.0), fmt17(0.0));
    }
}
