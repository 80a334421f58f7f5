//! Monte Carlo simulation of the walk: endpoint distances, histograms and
//! moment estimates.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{domain, Result, WalkError};
use crate::moments::{MomentMethod, MomentValue};

pub const MAX_SAMPLES: u64 = 1_000_000_000;
/// Samples per independent sub-stream. Fixed so results do not depend on
/// the number of worker threads.
const CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSpec { seed, stream }
    }

    fn chunk_rng(&self, chunk: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream.wrapping_shl(24) ^ chunk);
        r
    }
}

fn draw(n: usize, rng: &mut ChaCha8Rng) -> f64 {
    let (mut x, mut y) = (0.0, 0.0);
    for _ in 0..n {
        let (s, c) = (TAU * rng.gen::<f64>()).sin_cos();
        x += c;
        y += s;
    }
    x.hypot(y)
}

fn check(n: usize, samples: u64) -> Result<()> {
    if n == 0 {
        return Err(domain("walks need n ≥ 1 steps"));
    }
    if samples > MAX_SAMPLES {
        return Err(WalkError::GuardExceeded(format!("{samples} samples > {MAX_SAMPLES}")));
    }
    Ok(())
}

/// First endpoint distance of the stream described by `rng`.
pub fn sample_distance(n: usize, rng: &RngSpec) -> Result<f64> {
    check(n, 1)?;
    Ok(draw(n, &mut rng.chunk_rng(0)))
}

/// Runs `samples` walks in fixed-size chunks (in parallel) and folds each
/// chunk with `f`; the chunk results are returned in stream order.
fn run_chunks<T, F>(n: usize, samples: u64, rng: &RngSpec, init: impl Fn() -> T + Sync, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut T, f64) + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng.chunk_rng(c);
            let len = CHUNK.min(samples - c * CHUNK);
            let mut acc = init();
            for _ in 0..len {
                f(&mut acc, draw(n, &mut r));
            }
            acc
        })
        .collect()
}

/// `samples` endpoint distances in stream order.
pub fn sample_distances(n: usize, samples: u64, rng: &RngSpec) -> Result<Vec<f64>> {
    check(n, samples)?;
    let parts = run_chunks(n, samples, rng, Vec::new, |v: &mut Vec<f64>, d| v.push(d));
    Ok(parts.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkHistogram {
    pub n: usize,
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub samples: u64,
}

impl WalkHistogram {
    pub fn empty(n: usize, bins: usize) -> Self {
        let w = n as f64 / bins as f64;
        let mut edges: Vec<f64> = (0..=bins).map(|i| i as f64 * w).collect();
        edges[bins] = n as f64;
        WalkHistogram { n, edges, counts: vec![0; bins], samples: 0 }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn add(&mut self, d: f64) {
        let b = self.bins();
        let i = ((d / self.n as f64) * b as f64).floor();
        let i = if i.is_nan() || i < 0.0 { 0 } else { (i as usize).min(b - 1) };
        self.counts[i] += 1;
        self.samples += 1;
    }

    /// Merging is associative and commutative.
    pub fn merge(&mut self, other: &WalkHistogram) -> Result<()> {
        if self.n != other.n || self.edges != other.edges {
            return Err(domain("histograms with different binning cannot be merged"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.samples += other.samples;
        Ok(())
    }

    pub fn width(&self, i: usize) -> f64 {
        self.edges[i + 1] - self.edges[i]
    }

    /// Relative frequency per unit length in each bin.
    pub fn density(&self) -> Vec<f64> {
        let n = self.samples.max(1) as f64;
        self.counts.iter().enumerate().map(|(i, &c)| c as f64 / n / self.width(i)).collect()
    }

    /// Binomial standard error of [`Self::density`].
    pub fn stderr(&self) -> Vec<f64> {
        let n = self.samples.max(1) as f64;
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let p = c as f64 / n;
                (p * (1.0 - p) / n).sqrt() / self.width(i)
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("left,right,count,density,stderr\n");
        let (d, e) = (self.density(), self.stderr());
        for i in 0..self.bins() {
            let _ = writeln!(s, "{},{},{},{},{}", self.edges[i], self.edges[i + 1], self.counts[i], d[i], e[i]);
        }
        s
    }
}

pub fn estimate_density(n: usize, bins: usize, samples: u64, rng: &RngSpec) -> Result<WalkHistogram> {
    check(n, samples)?;
    if bins < 10 {
        return Err(domain(format!("need at least 10 bins, got {bins}")));
    }
    if samples < 10_000 {
        return Err(domain(format!("need at least 10^4 samples, got {samples}")));
    }
    Ok(histogram_unchecked(n, bins, samples, rng))
}

/// Same as [`estimate_density`] without the minimum-size checks.
pub fn histogram_unchecked(n: usize, bins: usize, samples: u64, rng: &RngSpec) -> WalkHistogram {
    let parts = run_chunks(n, samples, rng, || WalkHistogram::empty(n, bins), |h, d| h.add(d));
    let mut h = WalkHistogram::empty(n, bins);
    for p in &parts {
        h.merge(p).expect("same binning");
    }
    h
}

#[derive(Clone, Copy, Default)]
struct Welford {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, v: f64) {
        self.n += 1.0;
        let d = v - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, o: Welford) -> Welford {
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Welford { n, mean: self.mean + d * o.n / n, m2: self.m2 + o.m2 + d * d * self.n * o.n / n }
    }
}

/// Sample mean of `d^s` with its standard error.
pub fn estimate_moment(n: usize, s: f64, samples: u64, rng: &RngSpec) -> Result<MomentValue> {
    check(n, samples)?;
    if !(s > -1.0) || !s.is_finite() {
        return Err(domain(format!("Monte Carlo moments need s > -1, got {s}")));
    }
    if samples < 2 {
        return Err(domain("need at least two samples"));
    }
    let parts = run_chunks(n, samples, rng, Welford::default, |w, d| w.push(d.powf(s)));
    let w = parts.into_iter().fold(Welford::default(), Welford::merge);
    let var = w.m2 / (w.n - 1.0);
    Ok(MomentValue::new(w.mean, (var / w.n).sqrt(), MomentMethod::MonteCarlo))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson χ² of the histogram against bin probabilities. Bins with an
/// expected count below 5 are pooled with their neighbours.
pub fn chi_square(h: &WalkHistogram, probs: &[f64]) -> Result<ChiSquare> {
    if probs.len() != h.bins() {
        return Err(domain("one probability per bin required"));
    }
    let n = h.samples as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut o, mut e) = (0.0, 0.0);
    for (i, &p) in probs.iter().enumerate() {
        o += h.counts[i] as f64;
        e += p * n;
        if e >= 5.0 {
            stat += (o - e).powi(2) / e;
            cells += 1;
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 {
        stat += (o - e).powi(2) / e;
        cells += 1;
    }
    let dof = cells.saturating_sub(1).max(1);
    let dist = ChiSquared::new(dof as f64).map_err(|e| domain(e.to_string()))?;
    Ok(ChiSquare { statistic: stat, dof, p_value: 1.0 - dist.cdf(stat) })
}
