//! Distribution file loading: a single-column CSV of numbers, or a JSON
//! array of numbers (detected by the first non-whitespace byte). A counts
//! flag selects additive smoothing; probability mode validates strictly.

use divkit::Distribution;

pub fn load_distribution(path: &str, counts: bool, alpha: f64) -> Result<Distribution, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let values = if text.trim_start().starts_with('[') {
        parse_json_array(&text).map_err(|e| format!("{path}: {e}"))?
    } else {
        parse_csv_column(&text).map_err(|(line, e)| format!("{path}:{line}: {e}"))?
    };
    if counts {
        let mut c = Vec::with_capacity(values.len());
        for (i, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v >= 0.0 && v.fract() == 0.0) {
                return Err(format!("{path}: entry {} = {v} is not a nonnegative integer count", i + 1));
            }
            c.push(v as u64);
        }
        Distribution::from_counts_smoothed(&c, alpha).map_err(|e| format!("{path}: {e}"))
    } else {
        Distribution::from_weights(&values, 1e-9).map_err(|e| format!("{path}: {e}"))
    }
}

fn parse_csv_column(text: &str) -> Result<Vec<f64>, (usize, String)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let field = raw.trim().trim_end_matches(',').trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) => return Err((i + 1, format!("`{field}` is not a number"))),
        }
    }
    Ok(out)
}

/// Minimal parser for a flat JSON array of numbers.
fn parse_json_array(text: &str) -> Result<Vec<f64>, String> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or("expected a JSON array of numbers")?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .enumerate()
        .map(|(i, f)| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| format!("element {}: `{}` is not a number", i + 1, f.trim()))
        })
        .collect()
}
