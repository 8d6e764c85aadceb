//! Canonical JSON writing shared by every file format in the crate.
//!
//! Reals are written in scientific notation with 17 significant digits,
//! enough to round-trip any `f64` exactly. Output is compact; object keys come
//! out in struct declaration order, so the byte stream is canonical and can be
//! hashed.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;
use sha2::{Digest, Sha256};

/// Compact layout (the trait defaults) with 17-digit reals.
struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits);
    value.serialize(&mut ser).expect("in-memory JSON serialization cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// `sha256:<hex>` over the canonical serialization.
pub fn content_hash<T: Serialize>(value: &T) -> String {
    let digest = Sha256::digest(to_canonical_string(value).as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}
