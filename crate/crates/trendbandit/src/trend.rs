//! Trend functions `D(n)`: known deterministic reward modulation as a
//! function of how many times an arm has been pulled.
//!
//! A [`TrendFunction`] is built from an analytic shape ([`TrendKind`]), a
//! `horizon_cap` bounding the pull counts it will ever be evaluated at, and a
//! non-negative `floor` clamp. Construction scans the whole range
//! `[1, horizon_cap]` once, so the per-pull values, the cumulative sums
//! `F(n) = Σ_{s=1}^{n} D(s)` and the extrema `D_min`/`D_max` are all cached
//! and every later lookup is O(1) and infallible.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrendError {
    #[error("trend value at n = {n} is not finite ({value})")]
    NonFinite { n: u64, value: f64 },

    #[error("horizon_cap must be at least 1")]
    ZeroHorizonCap,

    #[error("floor must be finite and non-negative, got {0}")]
    InvalidFloor(f64),

    #[error("invalid trend parameter: {0}")]
    InvalidParam(String),
}

/// Analytic shape of a trend, before flooring and caching.
#[derive(Debug, Clone, PartialEq)]
pub enum TrendKind {
    /// `D(n) = level`
    Constant { level: f64 },
    /// `D(n) = a·ln(n) + b`
    LogDecreasing { a: f64, b: f64 },
    /// `D(n) = scale·exp(rate·n)`
    ExpGrowth { scale: f64, rate: f64 },
    /// `D(n) = exp(−(n − center)² / width)`
    Gaussian { center: f64, width: f64 },
    /// `D(n) = max / (1 + exp(−steepness·(n − midpoint)))`
    Logistic {
        max: f64,
        steepness: f64,
        midpoint: f64,
    },
    /// Explicit per-pull values; extended by the last entry when shorter
    /// than the horizon cap.
    Tabulated { values: Vec<f64> },
}

impl TrendKind {
    fn validate(&self) -> Result<(), TrendError> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(TrendError::InvalidParam(format!("{name} = {v}")))
            }
        };
        match self {
            TrendKind::Constant { level } => finite("level", *level),
            TrendKind::LogDecreasing { a, b } => {
                finite("a", *a)?;
                finite("b", *b)
            }
            TrendKind::ExpGrowth { scale, rate } => {
                finite("scale", *scale)?;
                finite("rate", *rate)
            }
            TrendKind::Gaussian { center, width } => {
                finite("center", *center)?;
                finite("width", *width)?;
                if *width <= 0.0 {
                    return Err(TrendError::InvalidParam(format!("width = {width} (must be > 0)")));
                }
                Ok(())
            }
            TrendKind::Logistic {
                max,
                steepness,
                midpoint,
            } => {
                finite("max", *max)?;
                finite("steepness", *steepness)?;
                finite("midpoint", *midpoint)
            }
            TrendKind::Tabulated { values } => {
                if values.is_empty() {
                    return Err(TrendError::InvalidParam("tabulated trend has no values".into()));
                }
                for (i, v) in values.iter().enumerate() {
                    if !v.is_finite() || *v < 0.0 {
                        return Err(TrendError::InvalidParam(format!(
                            "tabulated value #{i} = {v} (must be finite and >= 0)"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Raw formula value at pull count `n >= 1`, before flooring.
    fn raw(&self, n: u64) -> f64 {
        let x = n as f64;
        match self {
            TrendKind::Constant { level } => *level,
            TrendKind::LogDecreasing { a, b } => a * x.ln() + b,
            TrendKind::ExpGrowth { scale, rate } => scale * (rate * x).exp(),
            TrendKind::Gaussian { center, width } => (-(x - center).powi(2) / width).exp(),
            TrendKind::Logistic {
                max,
                steepness,
                midpoint,
            } => max / (1.0 + (-steepness * (x - midpoint)).exp()),
            TrendKind::Tabulated { values } => {
                let i = (n as usize - 1).min(values.len() - 1);
                values[i]
            }
        }
    }
}

/// A validated, fully tabulated trend function.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendFunction {
    kind: TrendKind,
    horizon_cap: u64,
    floor: f64,
    /// `table[s-1] = D(s)` for s in `[1, horizon_cap]`, after flooring.
    table: Vec<f64>,
    /// `prefix[n] = F(n)`, with `prefix[0] = 0`.
    prefix: Vec<f64>,
    d_min: f64,
    d_max: f64,
}

impl TrendFunction {
    /// Builds the trend, evaluating `D(n)` for every `n` in
    /// `[1, horizon_cap]`. A non-finite formula value (e.g. an overflowing
    /// exponential) is reported as a domain error naming the offending `n`.
    pub fn new(kind: TrendKind, horizon_cap: u64, floor: f64) -> Result<Self, TrendError> {
        if horizon_cap == 0 {
            return Err(TrendError::ZeroHorizonCap);
        }
        if !floor.is_finite() || floor < 0.0 {
            return Err(TrendError::InvalidFloor(floor));
        }
        kind.validate()?;

        let mut table = Vec::with_capacity(horizon_cap as usize);
        let mut prefix = Vec::with_capacity(horizon_cap as usize + 1);
        prefix.push(0.0);
        let mut d_min = f64::INFINITY;
        let mut d_max = f64::NEG_INFINITY;
        for n in 1..=horizon_cap {
            let value = kind.raw(n);
            if !value.is_finite() {
                return Err(TrendError::NonFinite { n, value });
            }
            let d = value.max(floor);
            d_min = d_min.min(d);
            d_max = d_max.max(d);
            prefix.push(prefix[n as usize - 1] + d);
            table.push(d);
        }

        Ok(Self {
            kind,
            horizon_cap,
            floor,
            table,
            prefix,
            d_min,
            d_max,
        })
    }

    /// Convenience constructor with the default floor of 0.
    pub fn with_default_floor(kind: TrendKind, horizon_cap: u64) -> Result<Self, TrendError> {
        Self::new(kind, horizon_cap, 0.0)
    }

    pub fn kind(&self) -> &TrendKind {
        &self.kind
    }

    pub fn horizon_cap(&self) -> u64 {
        self.horizon_cap
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Minimum of `D(n)` over `[1, horizon_cap]`.
    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    /// Maximum of `D(n)` over `[1, horizon_cap]`.
    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    /// `D(n)` for `n >= 1`; `n` above the horizon cap is clamped to the cap.
    ///
    /// Panics if `n == 0`: pull counts are 1-based and `D(0)` is undefined
    /// for several shapes.
    pub fn eval(&self, n: u64) -> f64 {
        assert!(n >= 1, "trend is evaluated at pull counts >= 1");
        let i = n.min(self.horizon_cap) as usize - 1;
        self.table[i]
    }

    /// `F(n) = Σ_{s=1}^{n} D(s)`, with `F(0) = 0`.
    ///
    /// Beyond the horizon cap the sum keeps accumulating the clamped value
    /// `D(horizon_cap)`, consistent with [`TrendFunction::eval`].
    pub fn cumulative(&self, n: u64) -> f64 {
        if n <= self.horizon_cap {
            self.prefix[n as usize]
        } else {
            let tail = (n - self.horizon_cap) as f64;
            self.prefix[self.horizon_cap as usize] + tail * self.table[self.horizon_cap as usize - 1]
        }
    }

    /// True when the cached table never increases; the greedy oracle is
    /// provably optimal exactly in this case.
    pub fn is_non_increasing(&self) -> bool {
        self.table.windows(2).all(|w| w[1] <= w[0])
    }
}
