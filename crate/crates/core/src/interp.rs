//! Linear resampling along the time axis.
//!
//! Uses the half-pixel-centre convention of image resizers: output step `i`
//! reads source coordinate `(i + 0.5) * src_len / dst_len - 0.5`, clamped to
//! `[0, src_len - 1]`, and interpolates linearly between its two neighbours.
//! Arithmetic is carried out in `f64` and rounded once to `f32` on output.

use crate::error::{Error, Result};
use crate::series::Series;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResizeSpec {
    pub src_len: usize,
    pub dst_len: usize,
}

impl ResizeSpec {
    pub fn new(src_len: usize, dst_len: usize) -> Result<Self> {
        if src_len == 0 || dst_len == 0 {
            return Err(Error::Contract(format!(
                "resize lengths must be >= 1, got {src_len} -> {dst_len}"
            )));
        }
        Ok(Self { src_len, dst_len })
    }

    /// Left neighbour, right neighbour and weight of the right neighbour for output step `i`.
    fn taps(&self, i: usize) -> (usize, usize, f64) {
        let scale = self.src_len as f64 / self.dst_len as f64;
        let last = (self.src_len - 1) as f64;
        let x = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, last);
        let left = x.floor() as usize;
        let right = (left + 1).min(self.src_len - 1);
        (left, right, x - left as f64)
    }

    fn resample_into(&self, src: &[f32], dst: &mut [f32]) {
        for (i, out) in dst.iter_mut().enumerate() {
            let (l, r, w) = self.taps(i);
            let a = src[l] as f64;
            let b = src[r] as f64;
            // a + (b - a) * w stays inside [min(a, b), max(a, b)] under rounding
            *out = (a + (b - a) * w) as f32;
        }
    }
}

/// Resize every channel of `segment` to `dst_len` time steps.
pub fn resize_linear(segment: &Series, dst_len: usize) -> Result<Series> {
    let spec = ResizeSpec::new(segment.length(), dst_len)?;
    let mut out = Series::zeros(segment.channels(), dst_len);
    for ch in 0..segment.channels() {
        spec.resample_into(segment.channel(ch), out.channel_mut(ch));
    }
    Ok(out)
}

/// Resize a single channel slice; used by window warp to avoid building a sub-series.
pub(crate) fn resize_slice(src: &[f32], dst_len: usize) -> Result<Vec<f32>> {
    let spec = ResizeSpec::new(src.len(), dst_len)?;
    let mut out = vec![0.0; dst_len];
    spec.resample_into(src, &mut out);
    Ok(out)
}
