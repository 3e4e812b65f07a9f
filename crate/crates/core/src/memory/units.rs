//! Display helpers. GiB values are rounded half-up to two decimals using
//! integer arithmetic, so the printed string is a pure function of the byte
//! count.

pub const GIB: u64 = 1 << 30;
pub const KIB: u64 = 1 << 10;

/// `bytes / 2^30` rounded half-up to two decimals, e.g. `"117.19"`.
pub fn gib_2dp(bytes: u64) -> String {
    let hundredths = u128::from(bytes) * 100;
    let gib = u128::from(GIB);
    let mut q = hundredths / gib;
    if (hundredths % gib) * 2 >= gib {
        q += 1;
    }
    format!("{}.{:02}", q / 100, q % 100)
}

/// `"0 B"` for zero, otherwise `"<x.xx> GiB"`.
pub fn human(bytes: u64) -> String {
    if bytes == 0 {
        "0 B".to_string()
    } else {
        format!("{} GiB", gib_2dp(bytes))
    }
}

pub fn gib_f64(bytes: u64) -> f64 {
    bytes as f64 / GIB as f64
}

/// Parses a byte budget: a plain integer, a number with a `B`, `KiB`, `MiB`,
/// `GiB` (binary) or `KB`, `MB`, `GB` (decimal) suffix, or `inf`.
/// Returns `None` for an unlimited budget.
pub fn parse_byte_budget(text: &str) -> Result<Option<f64>, String> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(None);
    }
    let split = t
        .find(|c: char| c.is_ascii_alphabetic())
        .unwrap_or(t.len());
    let (number, suffix) = t.split_at(split);
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| format!("invalid budget {text:?}"))?;
    let scale = match suffix.trim().to_ascii_lowercase().as_str() {
        "" | "b" => 1.0,
        "kib" => KIB as f64,
        "mib" => (1u64 << 20) as f64,
        "gib" => GIB as f64,
        "kb" => 1e3,
        "mb" => 1e6,
        "gb" => 1e9,
        other => return Err(format!("unknown budget unit {other:?}")),
    };
    let bytes = value * scale;
    if !(bytes > 0.0) {
        return Err(format!("budget must be positive, got {text:?}"));
    }
    Ok(Some(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(gib_2dp(0), "0.00");
        assert_eq!(gib_2dp(GIB), "1.00");
        // 117.1875 GiB -> 117.19
        assert_eq!(gib_2dp(125_829_120_000), "117.19");
        // 0.125 GiB is an exact half-hundredth
        assert_eq!(gib_2dp(1 << 27), "0.13");
        assert_eq!(gib_2dp((1 << 27) - 1), "0.12");
        assert_eq!(human(0), "0 B");
        assert_eq!(human(229_376_000), "0.21 GiB");
    }

    #[test]
    fn budgets() {
        assert_eq!(parse_byte_budget("inf").unwrap(), None);
        assert_eq!(parse_byte_budget("8GiB").unwrap(), Some(8.0 * GIB as f64));
        assert_eq!(parse_byte_budget("1.5 GB").unwrap(), Some(1.5e9));
        assert_eq!(parse_byte_budget("4096").unwrap(), Some(4096.0));
        assert!(parse_byte_budget("0").is_err());
        assert!(parse_byte_budget("-3GiB").is_err());
        assert!(parse_byte_budget("3 parsecs").is_err());
    }
}
