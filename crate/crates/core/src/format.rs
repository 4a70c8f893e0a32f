//! Float formatting shared by every CSV and JSON writer: 17 significant
//! digits, so any `f64` survives a text round trip bit for bit.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no non-finite literals; callers validate before writing.
        format!("{x}")
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with every float at 17 significant digits.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    value.serialize(&mut ser).expect("in-memory JSON serialization cannot fail");
    let mut s = String::from_utf8(buf).expect("serde_json emits UTF-8");
    s.push('\n');
    s
}
