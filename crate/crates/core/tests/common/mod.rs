#![allow(dead_code)]

use mtsaug::{Dataset, LabeledExample, RandomStream, Series};
use rand_distr::{Distribution, Normal};

pub fn random_series(s: &mut RandomStream, c: usize, l: usize) -> Series {
    let v = (0..c * l).map(|_| (s.uniform_real() * 20.0 - 10.0) as f32).collect();
    Series::new(c, l, v).unwrap()
}

pub fn random_example(s: &mut RandomStream, c: usize, l: usize, k: usize) -> LabeledExample {
    let series = random_series(s, c, l);
    let class = s.uniform_int(0, k as i64 - 1).unwrap() as usize;
    LabeledExample::with_class(series, class, k).unwrap()
}

pub fn random_dataset(seed: u64, n: usize, c: usize, l: usize, k: usize) -> Dataset {
    let mut s = RandomStream::new(seed);
    let ex = (0..n).map(|_| random_example(&mut s, c, l, k)).collect();
    Dataset::new("rand", (0..k).map(|i| format!("c{i}")).collect(), ex).unwrap()
}

/// Brute-force half-pixel linear resize: evaluate the piecewise-linear
/// interpolant through `(k, src[k])` at each destination sample centre by
/// scanning every segment.
pub fn resize_oracle(src: &[f32], dst_len: usize) -> Vec<f64> {
    let n = src.len();
    let v: Vec<f64> = src.iter().map(|&x| x as f64).collect();
    (0..dst_len)
        .map(|i| {
            let x = ((i as f64 + 0.5) * n as f64 / dst_len as f64 - 0.5).clamp(0.0, (n - 1) as f64);
            if n == 1 {
                return v[0];
            }
            for k in 0..n - 1 {
                let (x0, x1) = (k as f64, (k + 1) as f64);
                if x >= x0 && x <= x1 {
                    return v[k] + (v[k + 1] - v[k]) * (x - x0);
                }
            }
            unreachable!("x = {x} outside [0, {}]", n - 1)
        })
        .collect()
}

/// Tanh-sinh quadrature of `f` over `[a, b]`. `f` receives the abscissa and
/// its distance from `a`, so integrands singular at `a` stay accurate.
pub fn tanh_sinh(f: impl Fn(f64, f64) -> f64, a: f64, b: f64) -> f64 {
    let h = 1.0 / 64.0;
    let half = std::f64::consts::FRAC_PI_2;
    let w = b - a;
    let mut sum = 0.0;
    for k in -256i32..=256 {
        let t = k as f64 * h;
        let u = half * t.sinh();
        // distance from a, (b - a) * (1 + tanh u) / 2, without cancellation
        let da = w / (1.0 + (-2.0 * u).exp());
        if da <= 0.0 || da >= w {
            continue;
        }
        let weight = half * t.cosh() / u.cosh().powi(2) * w / 2.0;
        sum += weight * f(a + da, da);
    }
    sum * h
}

/// Two-sided Student t tail by integrating the density in angle form:
/// with `x = sqrt(nu) tan(theta)` the density is proportional to
/// `cos^(nu-1)(theta)`, and with `phi = pi/2 - theta` the tail beyond `|t|`
/// is `int_0^{atan(sqrt(nu)/|t|)} sin^(nu-1)(phi)` over the same integral
/// up to `pi/2`.
pub fn t_two_sided_oracle(t: f64, nu: f64) -> f64 {
    let g = |_x: f64, d: f64| d.sin().powf(nu - 1.0);
    let upper = (nu.sqrt() / t.abs()).atan();
    let tail = tanh_sinh(g, 0.0, upper);
    let total = tanh_sinh(g, 0.0, std::f64::consts::FRAC_PI_2);
    tail / total
}

pub struct WelchOracle {
    pub t: f64,
    pub dof: f64,
    pub p: f64,
}

pub fn welch_oracle(a: &[f64], b: &[f64]) -> WelchOracle {
    fn moments(x: &[f64]) -> (f64, f64, f64) {
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        let v = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
        (n, m, v)
    }
    let (na, ma, va) = moments(a);
    let (nb, mb, vb) = moments(b);
    let se2 = va / na + vb / nb;
    let t = (ma - mb) / se2.sqrt();
    let dof = se2.powi(2) / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
    WelchOracle {
        t,
        dof,
        p: t_two_sided_oracle(t, dof),
    }
}

pub fn gaussian_sample(s: &mut RandomStream, n: usize, mean: f64, sd: f64) -> Vec<f64> {
    let d = Normal::new(mean, sd).unwrap();
    (0..n).map(|_| d.sample(s)).collect()
}
