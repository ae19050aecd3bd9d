//! Phase distributions on `[-π, π]`.
//!
//! All implemented densities are even, so the integrators work on `[0, s]` and
//! double. Densities that blow up at the origin (`PowerLaw`, `LogSingular`) or at
//! the support edge (`UlaArrival` with `α = π/2`) are integrated with the dyadic
//! shell scheme in [`crate::quad::graded`].

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::quad::{gl20, graded, sine_integral, Graded};

/// Symmetric piecewise-linear density on a uniform grid over `[0, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    values: Vec<f64>,
}

impl Tabulated {
    /// `values[k]` is the (unnormalized) density at `kπ/(K-1)`; mirrored to negative angles.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::DensityPrecondition("tabulated density needs at least two knots".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::DensityPrecondition(
                "tabulated density must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { values })
    }

    fn step(&self) -> f64 {
        PI / (self.values.len() - 1) as f64
    }

    fn at(&self, x: f64) -> f64 {
        let x = x.abs();
        if x > PI {
            return 0.0;
        }
        let h = self.step();
        let k = ((x / h) as usize).min(self.values.len() - 2);
        let t = (x - k as f64 * h) / h;
        self.values[k] * (1.0 - t) + self.values[k + 1] * t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhaseKind {
    Uniform,
    /// `p_α(x) = c|x|^{-α}`, `c = (1-α)/(2π^{1-α})`.
    PowerLaw { alpha: f64 },
    /// `(1/2π) log(π/|x|)`.
    LogSingular,
    /// Phase seen by a uniform linear array for arrival angles uniform on `(-α, α)`.
    UlaArrival { alpha: f64, ratio: f64 },
    /// `2/(π√(π²-θ²))` on `|θ| ≤ π/√2`.
    ArcsineLike,
    Tabulated(Tabulated),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution {
    kind: PhaseKind,
    normalization: f64,
    sup_norm: f64,
}

impl PhaseDistribution {
    pub fn new(kind: PhaseKind) -> Result<Self> {
        match &kind {
            PhaseKind::PowerLaw { alpha } if !(*alpha > 0.0 && *alpha < 1.0) => {
                return Err(Error::InvalidParameter(format!("power-law alpha must lie in (0,1), got {alpha}")));
            }
            PhaseKind::UlaArrival { alpha, ratio } => {
                if !(*alpha > 0.0 && *alpha < PI) {
                    return Err(Error::InvalidParameter(format!("ULA alpha must lie in (0,π), got {alpha}")));
                }
                if !(*ratio > 0.0 && ratio.is_finite()) {
                    return Err(Error::InvalidParameter(format!("ULA ratio must be positive, got {ratio}")));
                }
                if 2.0 * PI * ratio * alpha.sin() > PI * (1.0 + 1e-12) {
                    return Err(Error::InvalidParameter(format!(
                        "ULA support 2π·{ratio}·sin({alpha}) exceeds π"
                    )));
                }
            }
            _ => {}
        }
        let mut dist = Self { kind, normalization: 1.0, sup_norm: f64::INFINITY };
        let mass = dist.raw_power_integral(1, 0.0).ok_or_else(|| {
            Error::DensityPrecondition("density is not integrable".into())
        })?;
        if !(mass > 0.0) {
            return Err(Error::DensityPrecondition("density has zero mass".into()));
        }
        match dist.kind {
            PhaseKind::UlaArrival { .. } | PhaseKind::Tabulated(_) => dist.normalization = mass,
            _ => {
                if (mass - 1.0).abs() > 1e-10 {
                    return Err(Error::DensityPrecondition(format!("density integrates to {mass}, not 1")));
                }
            }
        }
        dist.sup_norm = dist.compute_sup();
        Ok(dist)
    }

    pub fn uniform() -> Self {
        Self::new(PhaseKind::Uniform).expect("uniform density is valid")
    }

    pub fn power_law(alpha: f64) -> Result<Self> {
        Self::new(PhaseKind::PowerLaw { alpha })
    }

    pub fn log_singular() -> Self {
        Self::new(PhaseKind::LogSingular).expect("log density is valid")
    }

    pub fn ula(alpha: f64, ratio: f64) -> Result<Self> {
        Self::new(PhaseKind::UlaArrival { alpha, ratio })
    }

    pub fn arcsine_like() -> Self {
        Self::new(PhaseKind::ArcsineLike).expect("arcsine-like density is valid")
    }

    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        Self::new(PhaseKind::Tabulated(Tabulated::new(values)?))
    }

    pub fn kind(&self) -> &PhaseKind {
        &self.kind
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.kind, PhaseKind::Uniform)
    }

    /// Mass of the density as written; densities are divided by it.
    /// Equal to 1 except for `UlaArrival` beyond `π/2` and tabulated input.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `sup p`, `+∞` for unbounded densities.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    /// Half-width `s` of the support `[-s, s]`.
    pub fn support_half_width(&self) -> f64 {
        match self.kind {
            PhaseKind::UlaArrival { alpha, ratio } => 2.0 * PI * ratio * alpha.sin(),
            PhaseKind::ArcsineLike => PI / 2f64.sqrt(),
            _ => PI,
        }
    }

    fn singular_at_origin(&self) -> bool {
        matches!(self.kind, PhaseKind::PowerLaw { .. } | PhaseKind::LogSingular)
    }

    fn singular_at_edge(&self) -> bool {
        match self.kind {
            PhaseKind::UlaArrival { alpha, .. } => (alpha - PI / 2.0).abs() < 1e-3,
            _ => false,
        }
    }

    fn raw(&self, x: f64) -> f64 {
        let a = x.abs();
        if a > self.support_half_width() {
            return 0.0;
        }
        match &self.kind {
            PhaseKind::Uniform => 1.0 / (2.0 * PI),
            PhaseKind::PowerLaw { alpha } => {
                if a == 0.0 {
                    return f64::INFINITY;
                }
                (1.0 - alpha) / (2.0 * PI.powf(1.0 - alpha)) * a.powf(-alpha)
            }
            PhaseKind::LogSingular => {
                if a == 0.0 {
                    return f64::INFINITY;
                }
                (PI / a).ln() / (2.0 * PI)
            }
            PhaseKind::UlaArrival { alpha, ratio } => {
                let r = 2.0 * PI * ratio;
                let d = r * r - a * a;
                if d <= 0.0 {
                    return f64::INFINITY;
                }
                1.0 / (2.0 * alpha * d.sqrt())
            }
            PhaseKind::ArcsineLike => 2.0 / (PI * (PI * PI - a * a).sqrt()),
            PhaseKind::Tabulated(t) => t.at(a),
        }
    }

    /// Pointwise density; `+∞` at a singular point, 0 outside the support.
    pub fn density(&self, x: f64) -> f64 {
        self.raw(x) / self.normalization
    }

    fn compute_sup(&self) -> f64 {
        if self.singular_at_origin() {
            return f64::INFINITY;
        }
        match &self.kind {
            PhaseKind::Uniform => 1.0 / (2.0 * PI),
            PhaseKind::UlaArrival { alpha, ratio } => {
                let c = alpha.cos().abs();
                if c < 1e-15 {
                    return f64::INFINITY;
                }
                1.0 / (2.0 * alpha * 2.0 * PI * ratio * c) / self.normalization
            }
            PhaseKind::ArcsineLike => 2.0 * 2f64.sqrt() / (PI * PI),
            PhaseKind::Tabulated(t) => t.values.iter().cloned().fold(0.0, f64::max) / self.normalization,
            PhaseKind::PowerLaw { .. } | PhaseKind::LogSingular => f64::INFINITY,
        }
    }

    /// `2∫_0^s raw(x)^r cos(m x) dx`, `None` when divergent.
    fn raw_power_integral(&self, r: i32, m: f64) -> Option<f64> {
        let s = self.support_half_width();
        let f = |x: f64| {
            let v = self.raw(x).powi(r);
            if m == 0.0 {
                v
            } else {
                v * (m * x).cos()
            }
        };
        let osc = m.abs();
        if let PhaseKind::Tabulated(t) = &self.kind {
            let h = t.step();
            let rule = gl20();
            let panels_per_cell = ((h * osc / PI).ceil() as usize).max(1);
            let total: f64 = (0..t.values.len() - 1)
                .map(|k| rule.composite(f, k as f64 * h, (k + 1) as f64 * h, panels_per_cell))
                .sum();
            return Some(2.0 * total);
        }
        let half = match (self.singular_at_origin(), self.singular_at_edge()) {
            (false, false) => {
                // Smooth on the support; the edge-graded rule still resolves
                // steep growth near the ULA support end.
                match self.kind {
                    PhaseKind::Uniform => Graded::Finite(gl20().composite(f, 0.0, s, ((s * osc / PI).ceil() as usize).max(1))),
                    _ => graded(f, 0.0, s, false, osc),
                }
            }
            (true, false) => graded(f, 0.0, s, true, osc),
            (false, true) => graded(f, 0.0, s, false, osc),
            (true, true) => {
                let mid = 0.5 * s;
                match (graded(f, 0.0, mid, true, osc), graded(f, mid, s, false, osc)) {
                    (Graded::Finite(a), Graded::Finite(b)) => Graded::Finite(a + b),
                    _ => Graded::Divergent,
                }
            }
        };
        match half {
            Graded::Finite(v) => Some(2.0 * v),
            Graded::Divergent => None,
        }
    }

    /// `∫ p(x)^r dx`; `+∞` when the integral diverges.
    pub fn density_power_integral(&self, r: u32) -> f64 {
        assert!(r >= 1, "density power must be at least 1");
        match self.raw_power_integral(r as i32, 0.0) {
            Some(v) => v / self.normalization.powi(r as i32),
            None => f64::INFINITY,
        }
    }

    /// `a(m) = ∫ e^{imx} p(x) dx`, real because every implemented density is even.
    pub fn fourier_coefficient(&self, m: i64) -> f64 {
        let m = m.unsigned_abs() as f64;
        if m == 0.0 {
            return 1.0;
        }
        self.raw_power_integral(1, m).unwrap_or(f64::NAN) / self.normalization
    }

    /// Draw one phase.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            PhaseKind::Uniform => PI * (2.0 * rng.random::<f64>() - 1.0),
            PhaseKind::PowerLaw { alpha } => {
                let u: f64 = rng.random();
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                sign * power_law_quantile(u, *alpha)
            }
            PhaseKind::LogSingular => {
                // Envelope p_{1/2}; with y = |x|/π the ratio target/envelope is
                // 2√y·log(1/y) ≤ 4/e.
                let m = 4.0 / E;
                loop {
                    let u: f64 = rng.random();
                    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                    let x = power_law_quantile(u, 0.5);
                    let y = x / PI;
                    if y <= 0.0 {
                        continue;
                    }
                    let ratio = 2.0 * y.sqrt() * (1.0 / y).ln();
                    if rng.random::<f64>() * m <= ratio {
                        return sign * x;
                    }
                }
            }
            PhaseKind::UlaArrival { alpha, ratio } => {
                let a = alpha.min(PI - alpha);
                let phi = a * (2.0 * rng.random::<f64>() - 1.0);
                ula_phase(phi, *ratio)
            }
            PhaseKind::ArcsineLike => {
                let phi = PI / 4.0 * (2.0 * rng.random::<f64>() - 1.0);
                PI * phi.sin()
            }
            PhaseKind::Tabulated(t) => sample_tabulated(t, rng),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<f64> {
        (0..count).map(|_| self.sample_one(rng)).collect()
    }
}

/// `|θ|` for a uniform draw `u` under `p_α`: the CDF of `|θ|` is `(x/π)^{1-α}`.
pub fn power_law_quantile(u: f64, alpha: f64) -> f64 {
    PI * u.powf(1.0 / (1.0 - alpha))
}

/// Phase seen at arrival angle `phi` with spacing-to-wavelength ratio `ratio`.
pub fn ula_phase(phi: f64, ratio: f64) -> f64 {
    2.0 * PI * ratio * phi.sin()
}

fn sample_tabulated<R: Rng + ?Sized>(t: &Tabulated, rng: &mut R) -> f64 {
    let h = t.step();
    let masses: Vec<f64> = t.values.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).collect();
    let total: f64 = masses.iter().sum();
    let mut target = rng.random::<f64>() * total;
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let mut k = masses.len() - 1;
    for (i, m) in masses.iter().enumerate() {
        if target < *m {
            k = i;
            break;
        }
        target -= m;
    }
    let a = t.values[k];
    let b = (t.values[k + 1] - a) / h;
    // Solve a·s + b·s²/2 = target on [0, h].
    let s = if b.abs() < 1e-300 {
        if a > 0.0 { target / a } else { 0.5 * h }
    } else {
        let disc = (a * a + 2.0 * b * target).max(0.0);
        2.0 * target / (a + disc.sqrt())
    };
    sign * (k as f64 * h + s.clamp(0.0, h))
}

/// True iff `a(m) ≥ -tol` for every `m` in `ms`, after checking the density is even,
/// integrable, and convex decreasing on `(0, π]`.
pub fn convexity_fourier_check(dist: &PhaseDistribution, ms: impl IntoIterator<Item = i64>, tol: f64) -> Result<bool> {
    if !dist.density_power_integral(1).is_finite() {
        return Err(Error::DensityPrecondition("density is not integrable".into()));
    }
    let grid: Vec<f64> = (1..=400).map(|k| PI * k as f64 / 400.0).collect();
    let vals: Vec<f64> = grid.iter().map(|&x| dist.density(x)).collect();
    let scale = vals.iter().cloned().fold(0.0, f64::max).max(1e-300);
    for w in vals.windows(2) {
        if w[1] > w[0] + 1e-12 * scale {
            return Err(Error::DensityPrecondition("density is not decreasing on (0,π]".into()));
        }
    }
    for w in vals.windows(3) {
        if w[0] - 2.0 * w[1] + w[2] < -1e-9 * scale {
            return Err(Error::DensityPrecondition("density is not convex on (0,π]".into()));
        }
    }
    Ok(ms.into_iter().all(|m| dist.fourier_coefficient(m) >= -tol))
}

/// Closed form of `Si(|m|π)/(|m|π)` for the log density.
pub fn log_singular_fourier(m: i64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let t = m.unsigned_abs() as f64 * PI;
    sine_integral(t) / t
}

impl fmt::Display for PhaseDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PhaseKind::Uniform => write!(f, "uniform"),
            PhaseKind::PowerLaw { alpha } => write!(f, "power:alpha={alpha}"),
            PhaseKind::LogSingular => write!(f, "log"),
            PhaseKind::UlaArrival { alpha, ratio } => write!(f, "ula:alpha={alpha},ratio={ratio}"),
            PhaseKind::ArcsineLike => write!(f, "arcsine"),
            PhaseKind::Tabulated(t) => write!(f, "tabulated:{}", t.values.len()),
        }
    }
}

impl FromStr for PhaseDistribution {
    type Err = Error;

    /// Accepts `uniform`, `power:alpha=A`, `log`, `ula:alpha=A,ratio=R`, `arcsine`.
    fn from_str(spec: &str) -> Result<Self> {
        let bad = |reason: &str| Error::DistributionSpec { spec: spec.to_string(), reason: reason.to_string() };
        let spec_trim = spec.trim();
        let (name, params) = match spec_trim.split_once(':') {
            Some((n, p)) => (n.trim(), p.trim()),
            None => (spec_trim, ""),
        };
        let mut alpha = None;
        let mut ratio = None;
        for kv in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad("parameters must be key=value"))?;
            let v: f64 = v.trim().parse().map_err(|_| bad("parameter value is not a number"))?;
            match k.trim() {
                "alpha" => alpha = Some(v),
                "ratio" => ratio = Some(v),
                other => return Err(bad(&format!("unknown parameter `{other}`"))),
            }
        }
        let no_params = |d: PhaseDistribution| {
            if alpha.is_some() || ratio.is_some() {
                Err(bad("this distribution takes no parameters"))
            } else {
                Ok(d)
            }
        };
        let remap = |e: Error| match e {
            Error::InvalidParameter(r) | Error::DensityPrecondition(r) => bad(&r),
            other => other,
        };
        match name {
            "uniform" => no_params(Self::uniform()),
            "log" => no_params(Self::log_singular()),
            "arcsine" => no_params(Self::arcsine_like()),
            "power" => {
                if ratio.is_some() {
                    return Err(bad("power takes only alpha"));
                }
                Self::power_law(alpha.ok_or_else(|| bad("missing alpha"))?).map_err(remap)
            }
            "ula" => Self::ula(alpha.ok_or_else(|| bad("missing alpha"))?, ratio.unwrap_or(0.5)).map_err(remap),
            _ => Err(bad("unknown distribution name")),
        }
    }
}
