//! Phase expressions for command-line flags: plain radians or rational
//! multiples of pi such as `pi`, `-pi`, `2pi/3`, `0.5pi`.

use std::f64::consts::PI;

pub fn parse_phase_expr(raw: &str) -> Result<f64, String> {
    let s = raw.trim();
    if s.is_empty() {
        return Err("empty phase expression".into());
    }
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let (body, divisor) = match rest.split_once('/') {
        Some((b, d)) => {
            let divisor: f64 = d
                .trim()
                .parse()
                .map_err(|_| format!("bad divisor in phase expression `{raw}`"))?;
            if divisor == 0.0 {
                return Err(format!("zero divisor in phase expression `{raw}`"));
            }
            (b.trim(), divisor)
        }
        None => (rest.trim(), 1.0),
    };
    let value = if let Some(coefficient) = body.strip_suffix("pi") {
        let coefficient = coefficient.trim();
        if coefficient.is_empty() {
            PI
        } else {
            coefficient
                .parse::<f64>()
                .map_err(|_| format!("bad coefficient in phase expression `{raw}`"))?
                * PI
        }
    } else {
        body.parse::<f64>()
            .map_err(|_| format!("bad phase expression `{raw}`"))?
    };
    Ok(sign * value / divisor)
}

/// Parse a comma-separated list of phase expressions.
pub fn parse_phase_list(raw: &str) -> Result<Vec<f64>, String> {
    raw.split(',').map(parse_phase_expr).collect()
}
