//! Output encoding: JSON with fixed-width floats and the sweep CSV.
//!
//! Floats are printed with 17 significant digits in both formats so that a
//! run is reproducible byte for byte given a seed.

use std::io;

use serde::Serialize;

struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes to JSON with 17-significant-digit floats.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value
        .serialize(&mut ser)
        .expect("serialization of output types cannot fail");
    String::from_utf8(out).expect("serialized JSON is UTF-8")
}

/// One float cell with 17 significant digits.
pub fn float_cell(value: f64) -> String {
    format!("{value:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_significant_digits() {
        let s = to_json(&vec![0.5_f64, 11.0 / 18.0]);
        assert_eq!(s, "[5.0000000000000000e-1,6.1111111111111116e-1]");
        let parsed: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed[1], 11.0 / 18.0);
        assert_eq!(float_cell(2.0 / 3.0), "6.6666666666666663e-1");
    }
}
