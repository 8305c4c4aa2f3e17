//! The four augmentation kernels.
//!
//! Each kernel is a pure function of its inputs, parameters and a
//! [`RandomStream`]. Draws are consumed in a fixed order so outputs are
//! reproducible:
//!
//! * cutout / cutmix: gate, segment length, segment start, one draw per channel
//! * mixup: gate, blend weight `m`
//! * window warp: gate, segment length, segment start
//!
//! The gate draw is always taken, even when `P` is 0 or 1. The `apply_*`
//! functions perform the deterministic part of each kernel given already
//! sampled segments, and are public so callers can force a segment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::resize_slice;
use crate::rng::RandomStream;
use crate::series::{average_labels, LabeledExample};

/// Segment length fractions of the series length for cutout and cutmix.
pub const CUT_LEN_FRACS: (f64, f64) = (0.5, 1.0);
/// Segment length fractions of the series length for window warp.
pub const WARP_LEN_FRACS: (f64, f64) = (1.0 / 8.0, 1.0 / 3.0);

// Absorbs representation error such as (1/3) * 99 = 32.999999999999996.
const FLOOR_EPS: f64 = 1e-9;

/// A contiguous window `[start, start + len)` of time steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeWindow {
    pub start: usize,
    pub len: usize,
}

impl TimeWindow {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

/// A sampled window together with the channels it applies to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentSpec {
    pub window: TimeWindow,
    pub channel_mask: Vec<bool>,
}

/// How cutmix assigns the label of the mixed example.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelMode {
    /// Keep the first example's label.
    #[default]
    KeepFirst,
    /// Average both labels, as mixup does.
    Average,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutParams {
    pub p_apply: f64,
    pub channel_prob: f64,
    pub len_frac_min: f64,
    pub len_frac_max: f64,
}

impl CutParams {
    pub fn new(p_apply: f64, channel_prob: f64) -> Self {
        Self {
            p_apply,
            channel_prob,
            len_frac_min: CUT_LEN_FRACS.0,
            len_frac_max: CUT_LEN_FRACS.1,
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        check_prob("p", self.p_apply)?;
        check_prob("cp", self.channel_prob)?;
        check_fracs(self.len_frac_min, self.len_frac_max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixupParams {
    pub p_apply: f64,
    pub m_min: f64,
    pub m_max: f64,
}

impl MixupParams {
    /// `m ~ U(0, 1)` when no range is configured.
    pub fn new(p_apply: f64) -> Self {
        Self {
            p_apply,
            m_min: 0.0,
            m_max: 1.0,
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        check_prob("p", self.p_apply)?;
        check_prob("m_min", self.m_min)?;
        check_prob("m_max", self.m_max)?;
        if self.m_min > self.m_max {
            return Err(format!("m_min {} exceeds m_max {}", self.m_min, self.m_max));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WarpParams {
    pub p_apply: f64,
    /// Multiplier on the window length; 2.0 doubles it.
    pub scale: f64,
    pub len_frac_min: f64,
    pub len_frac_max: f64,
}

impl WarpParams {
    pub fn new(p_apply: f64, scale: f64) -> Self {
        Self {
            p_apply,
            scale,
            len_frac_min: WARP_LEN_FRACS.0,
            len_frac_max: WARP_LEN_FRACS.1,
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        check_prob("p", self.p_apply)?;
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(format!("s must be a positive number, got {}", self.scale));
        }
        check_fracs(self.len_frac_min, self.len_frac_max)
    }
}

fn check_prob(field: &str, v: f64) -> std::result::Result<(), String> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(format!("{field} = {v} is outside [0, 1]"))
    }
}

fn check_fracs(lo: f64, hi: f64) -> std::result::Result<(), String> {
    if lo > 0.0 && lo <= hi && hi <= 1.0 {
        Ok(())
    } else {
        Err(format!("length fractions ({lo}, {hi}) must satisfy 0 < min <= max <= 1"))
    }
}

fn floor_frac(frac: f64, l_max: usize) -> usize {
    (frac * l_max as f64 + FLOOR_EPS).floor() as usize
}

/// Inclusive range of segment lengths for a series of length `l_max`.
///
/// `[max(1, floor(frac_min * l)), floor(frac_max * l)]`, clamped so the range is
/// never empty and never exceeds `l_max`.
pub fn segment_len_range(l_max: usize, frac_min: f64, frac_max: f64) -> (usize, usize) {
    let lo = floor_frac(frac_min, l_max).max(1).min(l_max.max(1));
    let hi = floor_frac(frac_max, l_max).clamp(lo, l_max.max(lo));
    (lo, hi)
}

/// Draw a segment length then a start position `p ~ U(0, max(0, l - len - 1))`.
pub fn sample_segment(
    stream: &mut RandomStream,
    l_max: usize,
    frac_min: f64,
    frac_max: f64,
) -> TimeWindow {
    let (lo, hi) = segment_len_range(l_max, frac_min, frac_max);
    let len = stream.uniform_index(lo, hi);
    let start = stream.uniform_index(0, l_max.saturating_sub(len + 1));
    TimeWindow { start, len }
}

/// Each channel is selected independently with probability `channel_prob`.
pub fn sample_channel_mask(stream: &mut RandomStream, channels: usize, channel_prob: f64) -> Vec<bool> {
    (0..channels).map(|_| stream.bernoulli(channel_prob)).collect()
}

fn sample_cut(stream: &mut RandomStream, x: &LabeledExample, params: &CutParams) -> SegmentSpec {
    let window = sample_segment(stream, x.series.length(), params.len_frac_min, params.len_frac_max);
    let channel_mask = sample_channel_mask(stream, x.series.channels(), params.channel_prob);
    SegmentSpec {
        window,
        channel_mask,
    }
}

fn check_pair(x1: &LabeledExample, x2: &LabeledExample) -> Result<()> {
    if x1.series.shape() != x2.series.shape() {
        return Err(Error::Shape {
            expected: format!("{:?}", x1.series.shape()),
            actual: format!("{:?}", x2.series.shape()),
        });
    }
    if x1.label.len() != x2.label.len() {
        return Err(Error::Label(format!(
            "class counts differ: {} vs {}",
            x1.label.len(),
            x2.label.len()
        )));
    }
    Ok(())
}

/// Zero the masked channels inside the window.
pub fn apply_cutout(x: &LabeledExample, seg: &SegmentSpec) -> LabeledExample {
    let mut out = x.clone();
    let w = seg.window;
    for (ch, &on) in seg.channel_mask.iter().enumerate() {
        if on {
            out.series.channel_mut(ch)[w.start..w.end()].fill(0.0);
        }
    }
    out
}

pub fn cutout(x: &LabeledExample, params: &CutParams, stream: &mut RandomStream) -> LabeledExample {
    if !stream.bernoulli(params.p_apply) {
        return x.clone();
    }
    let seg = sample_cut(stream, x, params);
    apply_cutout(x, &seg)
}

/// Copy `x2`'s values into `x1` on the masked channels inside the window.
pub fn apply_cutmix(
    x1: &LabeledExample,
    x2: &LabeledExample,
    seg: &SegmentSpec,
    label_mode: LabelMode,
) -> Result<LabeledExample> {
    check_pair(x1, x2)?;
    let mut out = x1.clone();
    let w = seg.window;
    for (ch, &on) in seg.channel_mask.iter().enumerate() {
        if on {
            out.series.channel_mut(ch)[w.start..w.end()]
                .copy_from_slice(&x2.series.channel(ch)[w.start..w.end()]);
        }
    }
    if label_mode == LabelMode::Average {
        out.label = average_labels(&x1.label, &x2.label)?;
    }
    Ok(out)
}

pub fn cutmix(
    x1: &LabeledExample,
    x2: &LabeledExample,
    params: &CutParams,
    label_mode: LabelMode,
    stream: &mut RandomStream,
) -> Result<LabeledExample> {
    check_pair(x1, x2)?;
    if !stream.bernoulli(params.p_apply) {
        return Ok(x1.clone());
    }
    let seg = sample_cut(stream, x1, params);
    apply_cutmix(x1, x2, &seg, label_mode)
}

/// `m * x1 + (1 - m) * x2` on every channel, labels averaged.
pub fn apply_mixup(x1: &LabeledExample, x2: &LabeledExample, m: f64) -> Result<LabeledExample> {
    check_pair(x1, x2)?;
    let values: Vec<f32> = x1
        .series
        .values()
        .iter()
        .zip(x2.series.values())
        .map(|(&a, &b)| (m * a as f64 + (1.0 - m) * b as f64) as f32)
        .collect();
    let (c, l) = x1.series.shape();
    Ok(LabeledExample {
        series: crate::series::Series::new(c, l, values)?,
        label: average_labels(&x1.label, &x2.label)?,
    })
}

pub fn mixup(
    x1: &LabeledExample,
    x2: &LabeledExample,
    params: &MixupParams,
    stream: &mut RandomStream,
) -> Result<LabeledExample> {
    check_pair(x1, x2)?;
    if !stream.bernoulli(params.p_apply) {
        return Ok(x1.clone());
    }
    let m = params.m_min + (params.m_max - params.m_min) * stream.uniform_real();
    apply_mixup(x1, x2, m)
}

/// Resized window length: `max(1, round(scale * len))`, halves rounded away from zero.
pub fn warped_len(len: usize, scale: f64) -> usize {
    ((scale * len as f64).round() as usize).max(1)
}

/// Resize the window by `scale`, splice it back in place and crop or
/// zero-pad the tail so the length is unchanged.
pub fn apply_window_warp(x: &LabeledExample, window: TimeWindow, scale: f64) -> Result<LabeledExample> {
    let l = x.series.length();
    if window.len == 0 || window.end() > l {
        return Err(Error::Contract(format!(
            "window [{}, {}) does not fit a series of length {l}",
            window.start,
            window.end()
        )));
    }
    let new_len = warped_len(window.len, scale);
    let mut out = x.clone();
    for ch in 0..x.series.channels() {
        let src = x.series.channel(ch);
        let resized = resize_slice(&src[window.start..window.end()], new_len)?;
        let dst = out.series.channel_mut(ch);
        let spliced = resized.iter().chain(&src[window.end()..]);
        dst[window.start..].fill(0.0);
        for (d, &v) in dst[window.start..].iter_mut().zip(spliced) {
            *d = v;
        }
    }
    Ok(out)
}

pub fn window_warp(x: &LabeledExample, params: &WarpParams, stream: &mut RandomStream) -> Result<LabeledExample> {
    if !stream.bernoulli(params.p_apply) {
        return Ok(x.clone());
    }
    let window = sample_segment(stream, x.series.length(), params.len_frac_min, params.len_frac_max);
    apply_window_warp(x, window, params.scale)
}
