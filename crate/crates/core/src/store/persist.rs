use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use super::{EdgeAttributes, Store};
use crate::hedge::parse_notation;

pub const HEADER: &str = "shg v1";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

fn fmt_err(line: usize, message: impl Into<String>) -> StoreError {
    StoreError::Format {
        line,
        message: message.into(),
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '%' | ';' | '=' | '\t' | '\n' | '\r' => {
                let _ = write!(out, "%{:02X}", c as u32);
            }
            _ => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Option<String> {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            let hex = s.get(i + 1..i + 3)?;
            out.push(u8::from_str_radix(hex, 16).ok()?);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).ok()
}

impl Store {
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", HEADER)?;
        for (e, a) in self.iter() {
            let mut fields = vec![format!("count={}", a.count)];
            if let Some(t) = &a.text {
                fields.push(format!("text={}", escape(t)));
            }
            for (k, v) in &a.tags {
                fields.push(format!("tag.{}={}", escape(k), escape(v)));
            }
            writeln!(w, "{}\t{}", e, fields.join(";"))?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Store, StoreError> {
        let mut store = Store::new();
        let mut lines = r.lines();
        let first = lines.next().transpose()?;
        if first.as_deref().map(str::trim_end) != Some(HEADER) {
            return Err(fmt_err(1, format!("expected header '{}'", HEADER)));
        }
        for (i, line) in lines.enumerate() {
            let n = i + 2;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (notation, attrs) = line.split_once('\t').unwrap_or((line.as_str(), ""));
            let edge = parse_notation(notation).map_err(|e| fmt_err(n, e.to_string()))?;
            let mut a = EdgeAttributes {
                count: 1,
                text: None,
                tags: BTreeMap::new(),
            };
            for field in attrs.split(';').filter(|f| !f.is_empty()) {
                let (k, v) = field
                    .split_once('=')
                    .ok_or_else(|| fmt_err(n, format!("malformed attribute '{}'", field)))?;
                let v = unescape(v).ok_or_else(|| fmt_err(n, "bad escape"))?;
                if k == "count" {
                    a.count = v
                        .parse()
                        .ok()
                        .filter(|c| *c > 0)
                        .ok_or_else(|| fmt_err(n, "count must be a positive integer"))?;
                } else if k == "text" {
                    a.text = Some(v);
                } else if let Some(tag) = k.strip_prefix("tag.") {
                    let tag = unescape(tag).ok_or_else(|| fmt_err(n, "bad escape"))?;
                    a.tags.insert(tag, v);
                } else {
                    return Err(fmt_err(n, format!("unknown attribute '{}'", k)));
                }
            }
            store.insert(edge, a);
        }
        Ok(store)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), StoreError> {
        let tmp = path.as_ref().with_extension("tmp");
        {
            let f = std::fs::File::create(&tmp)?;
            let mut w = std::io::BufWriter::new(f);
            self.write_to(&mut w)?;
            w.flush()?;
        }
        std::fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Store, StoreError> {
        let f = std::fs::File::open(path)?;
        Store::read_from(std::io::BufReader::new(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_with_awkward_text() {
        let mut s = Store::new();
        let mut tags = BTreeMap::new();
        tags.insert("src=a;b".to_string(), "50% off\tnow".to_string());
        s.add_with(
            "(is/P berlin/C nice/C)".parse().unwrap(),
            Some("Berlin is nice; really = yes\n".into()),
            tags,
        );
        s.add("(is/P berlin/C nice/C)".parse().unwrap());
        let mut buf = Vec::new();
        s.write_to(&mut buf).unwrap();
        let back = Store::read_from(&buf[..]).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn empty_store_has_header_only() {
        let mut buf = Vec::new();
        Store::new().write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "shg v1\n");
    }

    #[test]
    fn bad_line_is_reported() {
        let mut text = String::from("shg v1\n");
        for i in 0..5 {
            text.push_str(&format!("(is/P a{}/C b/C)\tcount=1\n", i));
        }
        text.push_str("(is/P broken\tcount=1\n");
        match Store::read_from(text.as_bytes()) {
            Err(StoreError::Format { line, .. }) => assert_eq!(line, 7),
            other => panic!("unexpected {:?}", other.map(|s| s.len())),
        }
    }
}
