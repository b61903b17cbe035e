use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// Decimal notation with 12 significant digits, independent of locale.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x == 0.0 { "0.00000000000".into() } else { format!("{x}") };
    }
    // the exponent after rounding to 12 significant digits
    let sci = format!("{x:.11e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).expect("rust float exponent");
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Opens `path` for CSV output, or stdout when absent.
pub fn csv_writer(path: Option<&Path>) -> io::Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink))
}
