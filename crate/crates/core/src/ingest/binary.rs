//! `.mtsb`: compact little-endian dataset container.
//!
//! ```text
//! magic     4 bytes  "MTSB"
//! version   u16      1
//! reserved  u16      0
//! k         u32      number of classes
//! c         u32      channels (0 when n = 0)
//! l         u32      series length (0 when n = 0)
//! n         u32      number of examples
//! classes   k x (u32 byte length, UTF-8 bytes)
//! name      u32 byte length, UTF-8 bytes
//! values    n*c*l f32, example-major, then channel, then time
//! labels    n*k f64, example-major
//! ```
//!
//! No trailing bytes are allowed.

use crate::error::{Error, Result};
use crate::series::{Dataset, LabeledExample, Series};

pub const MAGIC: [u8; 4] = *b"MTSB";
pub const VERSION: u16 = 1;

fn put_u32(out: &mut Vec<u8>, v: usize) {
    let v = u32::try_from(v).expect("dimension exceeds u32 range");
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    put_u32(out, s.len());
    out.extend_from_slice(s.as_bytes());
}

pub fn write_binary(ds: &Dataset) -> Vec<u8> {
    let (c, l) = ds.shape().unwrap_or((0, 0));
    let k = ds.n_classes();
    let mut out = Vec::with_capacity(32 + ds.len() * (c * l * 4 + k * 8));
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&0u16.to_le_bytes());
    for v in [k, c, l, ds.len()] {
        put_u32(&mut out, v);
    }
    for name in &ds.class_names {
        put_str(&mut out, name);
    }
    put_str(&mut out, &ds.name);
    for ex in &ds.examples {
        for v in ex.series.values() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    for ex in &ds.examples {
        for p in &ex.label {
            out.extend_from_slice(&p.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).ok_or(Error::Truncated(what))?;
        let bytes = self.buf.get(self.pos..end).ok_or(Error::Truncated(what))?;
        self.pos = end;
        Ok(bytes)
    }

    fn u16(&mut self, what: &'static str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u32(&mut self, what: &'static str) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()) as usize)
    }

    fn string(&mut self, what: &'static str) -> Result<String> {
        let n = self.u32(what)?;
        let bytes = self.take(n, what)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| Error::Format(format!("{what} is not valid UTF-8")))
    }

    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }
}

pub fn read_binary(bytes: &[u8]) -> Result<Dataset> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4, "magic")? != MAGIC {
        return Err(Error::Format("bad magic, not an .mtsb stream".into()));
    }
    let version = r.u16("version")?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    r.u16("reserved")?;
    let k = r.u32("class count")?;
    let c = r.u32("channel count")?;
    let l = r.u32("series length")?;
    let n = r.u32("example count")?;

    // Each class name needs at least its 4-byte length prefix.
    if k > r.remaining() / 4 {
        return Err(Error::Truncated("class names"));
    }
    let class_names = (0..k).map(|_| r.string("class name")).collect::<Result<Vec<_>>>()?;
    let name = r.string("dataset name")?;

    let per_example = c
        .checked_mul(l)
        .and_then(|cl| cl.checked_mul(4))
        .and_then(|b| b.checked_add(k.checked_mul(8)?))
        .ok_or_else(|| Error::Format("dimensions overflow".into()))?;
    let body = n
        .checked_mul(per_example)
        .ok_or_else(|| Error::Format("dimensions overflow".into()))?;
    if body > r.remaining() {
        return Err(Error::Truncated("values"));
    }
    if n > 0 && (c == 0 || l == 0) {
        return Err(Error::Format(format!("examples present with shape ({c}, {l})")));
    }

    let values = r.take(n * c * l * 4, "values")?;
    let labels = r.take(n * k * 8, "labels")?;
    if r.remaining() != 0 {
        return Err(Error::Format(format!("{} trailing bytes", r.remaining())));
    }

    let mut examples = Vec::with_capacity(n);
    for i in 0..n {
        let vals = values[i * c * l * 4..(i + 1) * c * l * 4]
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes(b.try_into().unwrap()))
            .collect();
        let label = labels[i * k * 8..(i + 1) * k * 8]
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
            .collect();
        let series = Series::new(c, l, vals).map_err(|e| Error::Format(format!("example {i}: {e}")))?;
        let ex = LabeledExample::new(series, label).map_err(|e| Error::Format(format!("example {i}: {e}")))?;
        examples.push(ex);
    }
    Dataset::new(name, class_names, examples).map_err(|e| Error::Format(e.to_string()))
}
