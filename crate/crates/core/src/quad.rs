//! Gauss–Legendre rules and the graded integrators used for singular densities.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrate `f` over `[a, b]` with a single panel.
    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }

    /// Composite rule over `panels` equal panels.
    pub fn composite(&self, f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| self.integrate(&f, a + k as f64 * h, a + (k + 1) as f64 * h))
            .sum()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (c + h * x, w * h))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub(crate) fn gl20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

/// Sine integral `Si(x) = ∫_0^x sin t / t dt`.
pub fn sine_integral(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let panels = (x.abs().ceil() as usize).max(1);
    gl20().composite(|t| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, x, panels)
}

/// Result of a graded integration toward an endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Graded {
    Finite(f64),
    Divergent,
}

/// Integrate `f` over `[a, b]` where `f` may blow up at `a` (`toward_left`) or at `b`.
///
/// The interval is cut into dyadic shells shrinking toward the singular end. Each
/// shell gets a composite Gauss rule with enough panels for `oscillation` (an upper
/// bound on the angular frequency of `f`). Successive shell contributions are
/// compared: a ratio pinned at or above one over a long run means divergence, a
/// steady ratio below one lets the geometric tail be summed in closed form.
pub fn graded(f: impl Fn(f64) -> f64, a: f64, b: f64, toward_left: bool, oscillation: f64) -> Graded {
    const MAX_SHELLS: usize = 1000;
    const RUN: usize = 12;
    let len = b - a;
    let rule = gl20();
    let mut total = 0.0;
    let mut prev = 0.0;
    let mut ratios: Vec<f64> = Vec::new();
    for k in 0..MAX_SHELLS {
        let outer = len * 0.5f64.powi(k as i32);
        let inner = if k + 1 == MAX_SHELLS { 0.0 } else { outer * 0.5 };
        let (lo, hi) = if toward_left {
            (a + inner, a + outer)
        } else {
            (b - outer, b - inner)
        };
        let panels = ((hi - lo) * oscillation / PI).ceil().max(1.0) as usize;
        let c = rule.composite(&f, lo, hi, panels);
        total += c;
        if !total.is_finite() {
            return Graded::Divergent;
        }
        if k > 0 && prev != 0.0 {
            ratios.push((c / prev).abs());
        }
        prev = c;
        if k >= 8 && c.abs() <= 1e-17 * total.abs() {
            return Graded::Finite(total);
        }
        if ratios.len() >= RUN && k >= 24 {
            let tail = &ratios[ratios.len() - RUN..];
            if tail.iter().all(|&q| q >= 1.0 - 1e-9) {
                return Graded::Divergent;
            }
            let hi_q = tail.iter().cloned().fold(f64::MIN, f64::max);
            let lo_q = tail.iter().cloned().fold(f64::MAX, f64::min);
            if hi_q < 1.0 && hi_q - lo_q < 1e-6 {
                let q = tail[RUN - 1];
                return Graded::Finite(total + c * q / (1.0 - q));
            }
        }
    }
    Graded::Finite(total)
}
