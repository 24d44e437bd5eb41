//! Plain-text matrix files.
//!
//! The first line holds `n_rows n_cols`; each following line holds one row of
//! whitespace-separated numbers. Decimal output uses 17 significant digits,
//! which round-trips every finite `f64`. Hexadecimal float literals
//! (`0x1.8p+1`) are accepted on input and can be requested on output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FloatFormat {
    #[default]
    Decimal,
    Hex,
}

pub fn format_f64(v: f64, format: FloatFormat) -> String {
    match format {
        FloatFormat::Decimal => format!("{v:.16e}"),
        FloatFormat::Hex => format_hex_f64(v),
    }
}

/// C99-style hexadecimal literal, exact for every finite value.
pub fn format_hex_f64(v: f64) -> String {
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0x7ff {
        return if frac == 0 { format!("{sign}inf") } else { "nan".to_string() };
    }
    if exp_bits == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exp_bits == 0 { (0, -1022) } else { (1, exp_bits - 1023) };
    let exp_sign = if exp < 0 { '-' } else { '+' };
    format!("{sign}0x{lead}.{frac:013x}p{exp_sign}{}", exp.abs())
}

fn pow2(e: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((e + 1023) as u64) << 52)
}

fn parse_hex_f64(s: &str) -> Option<f64> {
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let body = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X"))?;
    let (mant, exp) = body.split_once(['p', 'P'])?;
    let exp: i32 = exp.parse().ok()?;
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = digits.trim_start_matches('0');
    if digits.len() > 15 {
        return None;
    }
    let m = if digits.is_empty() { 0 } else { u64::from_str_radix(digits, 16).ok()? };
    let mut e = exp.checked_sub(4 * frac_part.len() as i32)?;
    // Exact while the mantissa fits in 53 bits and the result is representable.
    let mut v = m as f64;
    if v != 0.0 {
        while e > 1023 {
            v *= pow2(1023);
            e -= 1023;
        }
        if e < -1022 {
            if e + 1022 < -1022 {
                return Some(if neg { -0.0 } else { 0.0 });
            }
            // Stays normal; only the final multiply can round.
            v *= pow2(e + 1022);
            e = -1022;
        }
        v *= pow2(e);
    }
    Some(if neg { -v } else { v })
}

pub fn parse_f64(token: &str) -> Option<f64> {
    let lower = token.to_ascii_lowercase();
    if lower.contains("0x") {
        parse_hex_f64(token)
    } else {
        token.parse().ok()
    }
}

pub fn format_matrix(m: &DenseMatrix, format: FloatFormat) -> String {
    let mut out = String::with_capacity(m.rows() * m.cols() * 25 + 16);
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&v| format_f64(v, format)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the text format. `origin` is only used in error messages.
pub fn parse_matrix(text: &str, origin: &Path) -> Result<DenseMatrix> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(hline + 1, format!("bad header: {e}")))?;
    let [rows, cols] = dims[..] else {
        return Err(parse_err(hline + 1, "header must be `n_rows n_cols`".into()));
    };
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen_rows = 0;
    for (lno, line) in lines {
        if seen_rows == rows {
            return Err(parse_err(lno + 1, format!("more than {rows} rows")));
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            let v = parse_f64(tok).ok_or_else(|| parse_err(lno + 1, format!("not a number: `{tok}`")))?;
            if !v.is_finite() {
                return Err(parse_err(lno + 1, format!("non-finite entry `{tok}`")));
            }
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(parse_err(
                lno + 1,
                format!("expected {cols} entries, found {}", data.len() - before),
            ));
        }
        seen_rows += 1;
    }
    if seen_rows != rows {
        return Err(parse_err(text.lines().count(), format!("expected {rows} rows, found {seen_rows}")));
    }
    DenseMatrix::from_vec_finite(rows, cols, data)
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text, path)
}

pub fn write_matrix(path: &Path, m: &DenseMatrix, format: FloatFormat) -> Result<()> {
    fs::write(path, format_matrix(m, format)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_simple_file() {
        let m = parse_matrix("2 3\n1 2 3\n-4.5 0x1.8p+1 1e-3\n", Path::new("t")).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.as_slice(), &[1.0, 2.0, 3.0, -4.5, 3.0, 1e-3]);
    }

    #[test]
    fn rejects_bad_input() {
        let p = Path::new("t");
        assert!(parse_matrix("", p).is_err());
        assert!(parse_matrix("2 2\n1 2\n", p).is_err());
        assert!(parse_matrix("1 2\n1 2 3\n", p).is_err());
        assert!(parse_matrix("1 2\n1 NaN\n", p).is_err());
        assert!(parse_matrix("1 2\n1 inf\n", p).is_err());
        assert!(parse_matrix("1 1\n1\n2\n", p).is_err());
        assert!(parse_matrix("1 x\n1\n", p).is_err());
    }

    #[test]
    fn error_names_line() {
        let err = parse_matrix("1 2\n1 oops\n", Path::new("m.txt")).unwrap_err();
        assert_eq!(err.to_string(), "m.txt:2: not a number: `oops`");
    }

    #[test]
    fn hex_formatting_examples() {
        assert_eq!(format_hex_f64(3.0), "0x1.8000000000000p+1");
        assert_eq!(format_hex_f64(-0.0), "-0x0p+0");
        assert_eq!(format_hex_f64(f64::from_bits(1)), "0x0.0000000000001p-1022");
    }

    proptest! {
        #[test]
        fn text_formats_round_trip(bits in any::<u64>()) {
            let v = f64::from_bits(bits);
            prop_assume!(v.is_finite());
            for fmt in [FloatFormat::Decimal, FloatFormat::Hex] {
                let back = parse_f64(&format_f64(v, fmt)).unwrap();
                prop_assert_eq!(back.to_bits(), v.to_bits());
            }
        }
    }
}
