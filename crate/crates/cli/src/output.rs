//! Output format selection.

use clap::ValueEnum;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Print a value either as JSON or through the plain-text renderer.
pub fn emit(fmt: Format, value: serde_json::Value, text: impl Fn(&serde_json::Value) -> String) {
    match fmt {
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
        _ => println!("{}", text(&value)),
    }
}
