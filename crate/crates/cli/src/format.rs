//! Rendering helpers: 9-significant-digit CSV values and 2-decimal text
//! tables.

/// Format with 9 significant digits in plain decimal notation, the fixed
/// convention for all CSV output. Deterministic for any finite input.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).clamp(0, 40) as usize;
    format!("{x:.decimals$}")
}

pub fn csv_row(fields: &[String]) -> String {
    fields.join(",")
}

/// Right-align to `width` with two decimal places, the text-table style.
pub fn cell2(x: f64, width: usize) -> String {
    format!("{x:>width$.2}")
}

pub fn cell_str(s: &str, width: usize) -> String {
    format!("{s:>width$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(0.5), "0.500000000");
        assert_eq!(sig9(123.456), "123.456000");
        assert_eq!(sig9(-0.0078125), "-0.00781250000");
        assert_eq!(sig9(1e-10), "0.000000000100000000");
        assert_eq!(sig9(987654321.0), "987654321");
        assert_eq!(sig9(f64::NAN), "nan");
    }

    #[test]
    fn text_cells_use_two_decimals() {
        assert_eq!(cell2(0.785, 8), "    0.79");
        assert_eq!(cell2(0.5, 6), "  0.50");
    }
}
