//! Plain-text matrices: the dimension `d` on the first line, then `d` rows
//! of `d` whitespace-separated entries written `re+imj`, `re-imj`, `re` or
//! `imj`. Blank lines and lines starting with `#` are ignored.

use entropyne_core::{Complex64, HermitianMatrix};
use nalgebra::DMatrix;

pub fn parse_complex(token: &str) -> Result<Complex64, String> {
    let bad = || format!("cannot parse complex entry '{token}'");
    let Some(body) = token.strip_suffix(['j', 'i']) else {
        return token
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // The real/imaginary split is the last sign that is neither leading nor
    // part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        s => s,
    };
    Ok(Complex64::new(
        re.parse().map_err(|_| bad())?,
        im.parse().map_err(|_| bad())?,
    ))
}

pub fn parse_matrix(text: &str) -> Result<HermitianMatrix, String> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or("empty matrix file")?;
    let d: usize = header
        .parse()
        .map_err(|_| format!("first line must be the dimension, got '{header}'"))?;
    if d == 0 {
        return Err("dimension must be positive".into());
    }
    let mut entries = Vec::with_capacity(d * d);
    for row in 0..d {
        let line = lines.next().ok_or_else(|| format!("expected {d} rows, found {row}"))?;
        let parsed = line
            .split_whitespace()
            .map(parse_complex)
            .collect::<Result<Vec<_>, _>>()?;
        if parsed.len() != d {
            return Err(format!("row {} has {} entries, expected {d}", row + 1, parsed.len()));
        }
        entries.extend(parsed);
    }
    if lines.next().is_some() {
        return Err(format!("more than {d} rows"));
    }
    HermitianMatrix::new(DMatrix::from_row_slice(d, d, &entries)).map_err(|e| e.to_string())
}
