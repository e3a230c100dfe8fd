/// Formats with 17 significant digits, `.` decimal separator, no locale.
/// Parsing the result gives back the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // keep the sign of negative zero out of CSV bodies
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}
