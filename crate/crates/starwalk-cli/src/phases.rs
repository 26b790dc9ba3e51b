//! Phase-class grammar: `phase:count` pairs separated by commas, with
//! phases given as rational multiples of pi (`2pi/3`, `-pi`, `pi/2`) or as
//! decimals. Rational multiples are evaluated as one multiplication and one
//! division on `PI`, so class phases never pass through a decimal
//! round-trip.

use std::f64::consts::PI;

/// Parses one phase token. Returns `None` on any malformed input.
fn parse_phase(token: &str) -> Option<f64> {
    let t = token.trim();
    if let Some(pos) = t.find("pi") {
        let head = &t[..pos];
        let tail = &t[pos + 2..];
        let numerator: f64 = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse().ok()?,
        };
        let denominator: f64 = if tail.is_empty() {
            1.0
        } else {
            let d: f64 = tail.strip_prefix('/')?.trim().parse().ok()?;
            if d == 0.0 {
                return None;
            }
            d
        };
        Some(numerator * PI / denominator)
    } else {
        t.parse().ok()
    }
}

/// Parses a full class list such as `2pi/3:50,-2pi/3:50,0:1`.
///
/// # Errors
///
/// A human-readable message naming the offending token.
pub fn parse_classes(input: &str) -> Result<Vec<(f64, usize)>, String> {
    input
        .split(',')
        .map(|part| {
            let (phase_str, count_str) = part
                .split_once(':')
                .ok_or_else(|| format!("class `{part}` is not of the form phase:count"))?;
            let phase = parse_phase(phase_str)
                .ok_or_else(|| format!("cannot parse phase `{}`", phase_str.trim()))?;
            let count: usize = count_str
                .trim()
                .parse()
                .map_err(|_| format!("cannot parse count `{}`", count_str.trim()))?;
            Ok((phase, count))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_multiples_of_pi_parse_exactly() {
        assert_eq!(parse_phase("pi"), Some(PI));
        assert_eq!(parse_phase("-pi"), Some(-PI));
        assert_eq!(parse_phase("+pi"), Some(PI));
        assert_eq!(parse_phase("2pi/3"), Some(2.0 * PI / 3.0));
        assert_eq!(parse_phase("-2pi/3"), Some(-2.0 * PI / 3.0));
        assert_eq!(parse_phase("pi/2"), Some(PI / 2.0));
        assert_eq!(parse_phase("3pi/4"), Some(3.0 * PI / 4.0));
    }

    #[test]
    fn decimals_parse_too() {
        assert_eq!(parse_phase("0"), Some(0.0));
        assert_eq!(parse_phase("1.25"), Some(1.25));
        assert_eq!(parse_phase("-0.25"), Some(-0.25));
    }

    #[test]
    fn malformed_phases_are_rejected() {
        assert_eq!(parse_phase("spin"), None);
        assert_eq!(parse_phase("pie"), None);
        assert_eq!(parse_phase("pi/0"), None);
        assert_eq!(parse_phase("pi/x"), None);
        assert_eq!(parse_phase(""), None);
        assert_eq!(parse_phase("2pi3"), None);
    }

    #[test]
    fn class_lists_parse_in_order() {
        let classes = parse_classes("2pi/3:50,-2pi/3:50,0:1").unwrap();
        assert_eq!(classes.len(), 3);
        assert_eq!(classes[0], (2.0 * PI / 3.0, 50));
        assert_eq!(classes[1], (-2.0 * PI / 3.0, 50));
        assert_eq!(classes[2], (0.0, 1));

        let grover = parse_classes("pi:1,0:63").unwrap();
        assert_eq!(grover, vec![(PI, 1), (0.0, 63)]);
    }

    #[test]
    fn malformed_class_lists_name_the_offender() {
        assert!(parse_classes("pi").unwrap_err().contains("phase:count"));
        assert!(parse_classes("x:3").unwrap_err().contains("phase `x`"));
        assert!(parse_classes("pi:many")
            .unwrap_err()
            .contains("count `many`"));
        assert!(parse_classes("").is_err());
    }
}
