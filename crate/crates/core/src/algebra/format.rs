/// Rounds to 12 significant digits and renders with the shortest
/// representation that round-trips the rounded value.
///
/// `debug_style` keeps a trailing `.0` on integral values (`1.0`), which is
/// the style used for blade coefficients; plain reals print as `1`.
pub fn format_real(x: f64, debug_style: bool) -> String {
    let rounded = round_significant(x);
    if debug_style {
        format!("{rounded:?}")
    } else {
        format!("{rounded}")
    }
}

fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}
