//! Deterministic synthetic demand corpora for tests and demos.
//!
//! Generation is seeded and platform-independent: the generator is a
//! splitmix64 stream and all float shaping goes through IEEE-deterministic
//! operations, so the same (kind, length, seed, params) always yields the
//! same series.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::series::DemandSeries;

/// Minimal splitmix64 stream; plenty for shaping test corpora.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [-1, 1).
    pub fn next_signed(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }

    /// Standard normal via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_f64().max(1e-12);
        let u2 = self.next_f64();
        math::sqrt(-2.0 * math::ln(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
    }
}

/// Synthetic series families, named for the demand regime they target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// Positive seasonal pattern plus bounded noise; regular demand with a
    /// stable trajectory.
    StableSeasonal,
    /// Bernoulli demand occurrence with moderate sizes; low demand
    /// frequency.
    Intermittent,
    /// Intermittent occurrence with heavy-tailed sizes; high relative
    /// variability.
    Lumpy,
    /// Linear trend plus bounded noise.
    Trending,
    /// Multiplicative random walk.
    Explosive,
}

impl SyntheticKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SyntheticKind::StableSeasonal => "stable_seasonal",
            SyntheticKind::Intermittent => "intermittent",
            SyntheticKind::Lumpy => "lumpy",
            SyntheticKind::Trending => "trending",
            SyntheticKind::Explosive => "explosive",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "stable_seasonal" => Ok(SyntheticKind::StableSeasonal),
            "intermittent" => Ok(SyntheticKind::Intermittent),
            "lumpy" => Ok(SyntheticKind::Lumpy),
            "trending" => Ok(SyntheticKind::Trending),
            "explosive" => Ok(SyntheticKind::Explosive),
            other => Err(Error::InvalidParams(alloc::format!("unknown synthetic kind `{other}`"))),
        }
    }
}

/// Shape parameters shared by the generator families; each kind reads the
/// fields it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    /// Base demand level.
    pub base: f64,
    /// Seasonal amplitude (stable_seasonal).
    pub amplitude: f64,
    /// Noise half-width for bounded noise, or walk volatility for
    /// explosive.
    pub noise: f64,
    /// Seasonal period.
    pub period: usize,
    /// Probability of a demand occurrence per period (intermittent, lumpy).
    pub occurrence: f64,
    /// Per-period trend increment (trending).
    pub trend: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self { base: 50.0, amplitude: 20.0, noise: 2.0, period: 12, occurrence: 0.3, trend: 0.5 }
    }
}

fn validate(kind: SyntheticKind, len: usize, params: &SynthParams) -> Result<()> {
    if len < 20 {
        return Err(Error::InvalidParams(alloc::format!("length must be >= 20, got {len}")));
    }
    if params.period == 0 {
        return Err(Error::InvalidParams("period must be >= 1".into()));
    }
    if !(params.base >= 0.0 && params.amplitude >= 0.0 && params.noise >= 0.0) {
        return Err(Error::InvalidParams("base, amplitude and noise must be >= 0".into()));
    }
    match kind {
        SyntheticKind::Intermittent | SyntheticKind::Lumpy => {
            if !(params.occurrence > 0.0 && params.occurrence <= 1.0) {
                return Err(Error::InvalidParams(alloc::format!(
                    "occurrence must be in (0,1], got {}",
                    params.occurrence
                )));
            }
        }
        SyntheticKind::Explosive if params.base <= 0.0 => {
            return Err(Error::InvalidParams("explosive walk needs base > 0".into()));
        }
        _ => {}
    }
    Ok(())
}

/// Generate one deterministic synthetic series.
pub fn generate_synthetic(
    kind: SyntheticKind,
    len: usize,
    seed: u64,
    params: &SynthParams,
) -> Result<DemandSeries> {
    validate(kind, len, params)?;
    let mut rng = SplitMix64::new(seed ^ (kind as u64).wrapping_mul(0x9e37_79b9));
    let mut values = Vec::with_capacity(len);
    match kind {
        SyntheticKind::StableSeasonal => {
            // deterministic per-series phase so corpora are not in lockstep
            let phase = rng.next_f64() * 2.0 * core::f64::consts::PI;
            for t in 0..len {
                let angle =
                    2.0 * core::f64::consts::PI * (t % params.period) as f64 / params.period as f64;
                let v = params.base
                    + params.amplitude * libm::sin(angle + phase)
                    + params.noise * rng.next_signed();
                values.push(v.max(0.0));
            }
        }
        SyntheticKind::Intermittent => {
            for _ in 0..len {
                let hit = rng.next_f64() < params.occurrence;
                let size = 1.0 + math::floor(rng.next_f64() * params.base.max(1.0));
                values.push(if hit { size } else { 0.0 });
            }
        }
        SyntheticKind::Lumpy => {
            for _ in 0..len {
                let hit = rng.next_f64() < params.occurrence;
                // lognormal sizes give the heavy tail
                let size = math::exp(1.0 + 1.2 * rng.next_normal());
                values.push(if hit { size } else { 0.0 });
            }
        }
        SyntheticKind::Trending => {
            for t in 0..len {
                let v = params.base + params.trend * t as f64 + params.noise * rng.next_signed();
                values.push(v.max(0.0));
            }
        }
        SyntheticKind::Explosive => {
            let mut level = params.base;
            for _ in 0..len {
                values.push(level);
                let vol = if params.noise > 0.0 { params.noise } else { 0.2 };
                level *= math::exp(vol * rng.next_normal());
                level = level.clamp(1e-6, 1e12);
            }
        }
    }
    let id = alloc::format!("{}-{seed:06}", kind.as_str());
    DemandSeries::new(id, values, params.period)
}

/// A noiseless strictly positive seasonal series; the seasonal naive model
/// reproduces it exactly.
pub fn exact_seasonal(id: impl Into<String>, len: usize, period: usize, seed: u64) -> Result<DemandSeries> {
    if period == 0 || len < period {
        return Err(Error::InvalidParams("need len >= period >= 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let pattern: Vec<f64> = (0..period).map(|_| 10.0 + 40.0 * rng.next_f64()).collect();
    let values: Vec<f64> = (0..len).map(|t| pattern[t % period]).collect();
    DemandSeries::new(id, values, period)
}
