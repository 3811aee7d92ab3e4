//! CSV emission with fixed significant digits.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::Context;
use sqdiscord::measure::Strength;

const SIGNIFICANT_DIGITS: i32 = 10;

/// Fixed notation with 10 significant digits; zero prints as `0`.
pub fn sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn strength(x: Strength) -> String {
    match x {
        Strength::Finite(v) => sig(v),
        Strength::Strong => "inf".into(),
    }
}

/// Opens `path`, or stdout when absent.
pub fn sink(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot write {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn csv_writer(sink: Box<dyn Write>) -> csv::Writer<Box<dyn Write>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink)
}
