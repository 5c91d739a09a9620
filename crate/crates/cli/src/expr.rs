//! Scalar expressions accepted wherever the config expects a real number.
//!
//! Grammar: `expr := factor (('*' | '/') factor)*`,
//! `factor := ['-'] (number | "pi")`. Whitespace is ignored.
//! Examples: `"2*pi*300"`, `"pi/4"`, `"-0.5*pi"`, `"1e-3"`.

use std::f64::consts::PI;

pub fn parse_scalar(src: &str) -> Result<f64, String> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty expression".into());
    }
    let mut value = 1.0;
    let mut op = '*';
    let mut rest = s.as_str();
    loop {
        let (factor, tail) = split_factor(rest)?;
        let f =
            parse_factor(factor).ok_or_else(|| format!("cannot parse `{factor}` in `{src}`"))?;
        value = if op == '*' { value * f } else { value / f };
        let mut chars = tail.chars();
        match chars.next() {
            None => break,
            Some(c @ ('*' | '/')) => {
                op = c;
                rest = chars.as_str();
            }
            Some(c) => return Err(format!("unexpected `{c}` in `{src}`")),
        }
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{src}` is not finite"))
    }
}

fn split_factor(s: &str) -> Result<(&str, &str), String> {
    let i = s.find(['*', '/']).unwrap_or(s.len());
    if i == 0 {
        return Err(format!("missing operand in `{s}`"));
    }
    Ok((&s[..i], &s[i..]))
}

fn parse_factor(f: &str) -> Option<f64> {
    let (sign, body) = match f.strip_prefix('-') {
        Some(b) => (-1.0, b),
        None => (1.0, f.strip_prefix('+').unwrap_or(f)),
    };
    if body.eq_ignore_ascii_case("pi") {
        return Some(sign * PI);
    }
    // reject things like "inf" and "nan" that f64::from_str accepts
    if !body.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        return None;
    }
    body.parse::<f64>().ok().map(|v| sign * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepted_forms() {
        assert_eq!(parse_scalar("0.25").unwrap(), 0.25);
        assert_eq!(parse_scalar("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_scalar("2*pi*300").unwrap(), 2.0 * PI * 300.0);
        assert_eq!(parse_scalar(" 2 * PI * 0.056 ").unwrap(), 2.0 * PI * 0.056);
        assert_eq!(parse_scalar("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_scalar("1e-3*2").unwrap(), 2e-3);
        assert_eq!(parse_scalar("2*pi/3").unwrap(), 2.0 * PI / 3.0);
    }

    #[test]
    fn rejected_forms() {
        for bad in [
            "", "pi+1", "2**3", "*2", "2/", "inf", "nan", "1/0", "sqrt(2)", "2x",
        ] {
            assert!(parse_scalar(bad).is_err(), "{bad}");
        }
    }
}
