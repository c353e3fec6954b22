//! Table and JSON rendering.
//!
//! CSV cells are written with 17 significant digits (`{:.16e}`), which
//! round-trips every double; rows end in `\n`.

use serde::Serialize;

/// Renders a header and rows as CSV.
pub fn csv<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = [f64; N]>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!("{v:.16e}"));
        }
        s.push('\n');
    }
    s
}

/// Same rows as a JSON array of objects keyed by the header.
pub fn json_records<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = [f64; N]>) -> String {
    let records: Vec<serde_json::Map<String, serde_json::Value>> = rows
        .into_iter()
        .map(|row| {
            header
                .iter()
                .zip(row)
                .map(|(k, v)| (k.to_string(), serde_json::Value::from(v)))
                .collect()
        })
        .collect();
    json(&records)
}

/// Pretty JSON with a trailing newline.
pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
