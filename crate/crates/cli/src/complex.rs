//! `a+bi` syntax for complex flags.

use num_complex::Complex64;

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`, with optional exponents and
/// whitespace. `j` is accepted in place of `i`.
pub fn parse_complex(input: &str) -> Result<Complex64, String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('j', "i");
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    let bad = || format!("cannot parse '{input}' as a complex number (expected a+bi)");

    if let Some(body) = s.strip_suffix('i') {
        // Split before the last sign that is not a leading sign or part of an exponent.
        let bytes = body.as_bytes();
        let split =
            (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let im = match im_part {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => parse_real(other).ok_or_else(bad)?,
        };
        let re = if re_part.is_empty() { 0.0 } else { parse_real(re_part).ok_or_else(bad)? };
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(parse_real(&s).ok_or_else(bad)?, 0.0))
    }
}

fn parse_real(s: &str) -> Option<f64> {
    // Rust's float parser also takes "inf" and "nan"; those are not coordinates.
    if !s.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E')) {
        return None;
    }
    s.parse::<f64>().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn accepted_forms() {
        let cases = [
            ("2", c(2.0, 0.0)),
            ("-0.5", c(-0.5, 0.0)),
            ("0.3+0.2i", c(0.3, 0.2)),
            ("0.3-0.2i", c(0.3, -0.2)),
            ("i", c(0.0, 1.0)),
            ("-i", c(0.0, -1.0)),
            ("1-i", c(1.0, -1.0)),
            ("2.5i", c(0.0, 2.5)),
            ("1e-3+2e+1i", c(1e-3, 20.0)),
            ("-1.5E-2-3.25i", c(-0.015, -3.25)),
            (" 0.25 + 0.25 i ", c(0.25, 0.25)),
            ("1+2j", c(1.0, 2.0)),
            ("+1+i", c(1.0, 1.0)),
        ];
        for (text, want) in cases {
            assert_eq!(parse_complex(text).unwrap(), want, "{text}");
        }
    }

    #[test]
    fn rejected_forms() {
        for text in ["", "abc", "1+2", "1+2k", "i2", "nan", "inf+i", "1++2i", "--1"] {
            assert!(parse_complex(text).is_err(), "{text}");
        }
    }
}
