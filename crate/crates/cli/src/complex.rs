//! Complex numbers on the command line: `a+bi`, `a-bi`, `bi`, `a`, `-i`, with
//! optional whitespace and `j` accepted for `i`.

use num_complex::Complex64;

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse {s:?} as a complex number (expected e.g. \"-0.75-0.1i\")");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not a leading sign or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() { 0.0 } else { re_part.parse::<f64>().map_err(|_| bad())? };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        p => p.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn accepted_forms() {
        assert_eq!(parse_complex("-0.75-0.1i"), Ok(c(-0.75, -0.1)));
        assert_eq!(parse_complex("1+i"), Ok(c(1.0, 1.0)));
        assert_eq!(parse_complex(" 1 - 2 i "), Ok(c(1.0, -2.0)));
        assert_eq!(parse_complex("2.5"), Ok(c(2.5, 0.0)));
        assert_eq!(parse_complex("-3i"), Ok(c(0.0, -3.0)));
        assert_eq!(parse_complex("-i"), Ok(c(0.0, -1.0)));
        assert_eq!(parse_complex("i"), Ok(c(0.0, 1.0)));
        assert_eq!(parse_complex("1e-3+2E+1j"), Ok(c(1e-3, 20.0)));
        assert_eq!(parse_complex("-1.5e2-4e-2i"), Ok(c(-150.0, -0.04)));
    }

    #[test]
    fn rejected_forms() {
        for s in ["", "abc", "1+", "1+2", "1+2k", "++1i", "1..2i"] {
            assert!(parse_complex(s).is_err(), "{s:?}");
        }
    }
}
