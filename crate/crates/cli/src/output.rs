//! Locale-free number formatting and the CSV/JSON envelopes shared by all
//! subcommands.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::config::{Command, RunConfig};

pub const TOOL: &str = "rotometry";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant digits of every CSV float.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.{digits}g` formatting: shortest of fixed and scientific notation,
/// trailing zeros removed, two-digit signed exponent.
pub fn general(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV float at [`SIGNIFICANT_DIGITS`].
pub fn num(x: f64) -> String {
    general(x, SIGNIFICANT_DIGITS)
}

/// Comment lines that open every CSV artifact.
pub fn csv_preamble(command: Command, config: &RunConfig, unit: &str) -> String {
    let mut s = String::new();
    writeln!(s, "# {TOOL} {VERSION}").unwrap();
    writeln!(s, "# command {}", command_name(command)).unwrap();
    writeln!(
        s,
        "# config {}",
        serde_json::to_string(config).expect("config serializes")
    )
    .unwrap();
    writeln!(s, "# unit {unit}").unwrap();
    s
}

pub fn csv_row<I: IntoIterator<Item = String>>(out: &mut String, cells: I) {
    let cells: Vec<String> = cells.into_iter().collect();
    out.push_str(&cells.join(","));
    out.push('\n');
}

/// JSON document with the common metadata; `body` keys are merged in.
pub fn json_document(command: Command, config: &RunConfig, unit: &str, body: Value) -> String {
    let mut doc = json!({
        "tool": TOOL,
        "version": VERSION,
        "command": command_name(command),
        "config": config,
        "unit": unit,
    });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
    s.push('\n');
    s
}

pub fn command_name(command: Command) -> &'static str {
    match command {
        Command::Spectrum => "spectrum",
        Command::Groundstate => "groundstate",
        Command::Qfi => "qfi",
        Command::Protocol => "protocol",
        Command::Anticrossing => "anticrossing",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_c_general_format() {
        let cases = [
            (100.0, "100"),
            (0.1, "0.1"),
            (1.0 / 3.0, "0.333333333333"),
            (-2.0 / 3.0, "-0.666666666667"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (9.9999999999996, "10"),
            (std::f64::consts::PI, "3.14159265359"),
            (0.0, "0"),
            (-0.0, "0"),
            (f64::INFINITY, "inf"),
        ];
        for (x, want) in cases {
            assert_eq!(general(x, 12), want, "formatting {x:e}");
        }
    }

    #[test]
    fn twelve_digits_round_trip_to_relative_precision() {
        for &x in &[1.0 / 7.0, 12345.678901234567, -9.87654321e-7] {
            let y: f64 = num(x).parse().unwrap();
            assert!(((x - y) / x).abs() < 5e-12);
        }
    }
}
