//! Distribution functions, non-increasing rearrangements of step data and the
//! Hardy-type sums `δ_k = Σ_{j≤k} a^{k-j} ε_j`, `η_k = Σ_{j≥k} a^{j-k} ε_j`.

use serde::Serialize;

use crate::dyadic::{Dyadic, PiecewiseConstantFunction, Segment, StepFunction};
use crate::{Complex64, Error, Exponent, Partition1D, Result};

/// `(|value|, measure)` pieces of a piecewise-constant function, zero pieces dropped.
fn pieces(f: &PiecewiseConstantFunction) -> Vec<(f64, Dyadic)> {
    match f {
        PiecewiseConstantFunction::Line(step) => step
            .segments()
            .iter()
            .map(|s| (s.value.norm(), s.len()))
            .filter(|p| p.0 > 0.0)
            .collect(),
        PiecewiseConstantFunction::Cubes(cf) => cf
            .cells()
            .iter()
            .map(|(c, z)| (z.norm(), Dyadic::pow2(-(c.level() as i32) * c.dim() as i32)))
            .filter(|p| p.0 > 0.0)
            .collect(),
    }
}

/// `|{x : |f(x)| > level}|` as an exact dyadic rational.
pub fn distribution_measure(f: &PiecewiseConstantFunction, level: f64) -> Dyadic {
    pieces(f)
        .into_iter()
        .filter(|p| p.0 > level)
        .fold(Dyadic::ZERO, |acc, p| acc + p.1)
}

/// The distribution function `m_f(level)`.
pub fn distribution_function(f: &PiecewiseConstantFunction, level: f64) -> f64 {
    distribution_measure(f, level).to_f64()
}

/// A nonnegative, nonincreasing step function on `[0, ∞)`, zero past the last breakpoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepFunctionOnHalfLine {
    /// `0 = t_0 < t_1 < … < t_J`.
    breakpoints: Vec<Dyadic>,
    /// Value on `[t_{i}, t_{i+1})`; strictly decreasing and positive.
    values: Vec<f64>,
}

impl StepFunctionOnHalfLine {
    pub fn breakpoints(&self) -> &[Dyadic] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support_length(&self) -> Dyadic {
        *self.breakpoints.last().unwrap_or(&Dyadic::ZERO)
    }

    pub fn value_at(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let i = self.breakpoints[1..].partition_point(|b| b.to_f64() <= t);
        self.values.get(i).copied().unwrap_or(0.0)
    }

    pub fn distribution_measure(&self, level: f64) -> Dyadic {
        let i = self.values.partition_point(|&v| v > level);
        self.breakpoints.get(i).copied().unwrap_or(Dyadic::ZERO)
    }

    pub fn distribution_function(&self, level: f64) -> f64 {
        self.distribution_measure(level).to_f64()
    }

    fn segments(&self) -> Vec<Segment<f64>> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &value)| Segment {
                start: self.breakpoints[i],
                end: self.breakpoints[i + 1],
                value,
            })
            .collect()
    }

    /// `‖f* | L^p(0,∞)‖`.
    pub fn lp_norm(&self, p: Exponent) -> f64 {
        lp_of(self.segments().iter().map(|s| (s.value, s.len())), p)
    }

    /// The pointwise sum, as an ordinary step function on the line.
    pub fn sum(&self, other: &Self) -> StepFunction {
        let a = Partition1D::new(self.segments()).expect("ordered by construction");
        let b = Partition1D::new(other.segments()).expect("ordered by construction");
        add_steps(&a.map(|v| Complex64::new(*v, 0.0)), &b.map(|v| Complex64::new(*v, 0.0)))
    }
}

fn lp_of(items: impl Iterator<Item = (f64, Dyadic)>, p: Exponent) -> f64 {
    match p {
        Exponent::Finite(p) => items
            .filter(|i| i.0 > 0.0)
            .map(|(v, len)| v.powf(p) * len.to_f64())
            .sum::<f64>()
            .powf(1.0 / p),
        Exponent::Infinite => items.map(|i| i.0).fold(0.0, f64::max),
    }
}

/// `‖f‖_{L^p}` of a piecewise-constant function.
pub fn lp_norm(f: &PiecewiseConstantFunction, p: Exponent) -> f64 {
    lp_of(pieces(f).into_iter(), p)
}

/// The non-increasing rearrangement `f*(t) = sup{λ > 0 : m_f(λ) > t}`.
pub fn rearrangement(f: &PiecewiseConstantFunction) -> StepFunctionOnHalfLine {
    let mut ps = pieces(f);
    ps.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut breakpoints = vec![Dyadic::ZERO];
    let mut values: Vec<f64> = Vec::new();
    for (v, len) in ps {
        let end = *breakpoints.last().unwrap() + len;
        if values.last() == Some(&v) {
            *breakpoints.last_mut().unwrap() = end;
        } else {
            values.push(v);
            breakpoints.push(end);
        }
    }
    StepFunctionOnHalfLine { breakpoints, values }
}

/// Pointwise sum of two step functions on their common refinement.
pub fn add_steps(f: &StepFunction, g: &StepFunction) -> StepFunction {
    let mut cuts: Vec<Dyadic> = f.breakpoints();
    cuts.extend(g.breakpoints());
    cuts.sort();
    cuts.dedup();
    let zero = Complex64::new(0.0, 0.0);
    let segments = cuts
        .windows(2)
        .filter_map(|w| {
            let a = f.value_at(w[0]).copied().unwrap_or(zero);
            let b = g.value_at(w[0]).copied().unwrap_or(zero);
            let covered = f.value_at(w[0]).is_some() || g.value_at(w[0]).is_some();
            covered.then(|| Segment {
                start: w[0],
                end: w[1],
                value: a + b,
            })
        })
        .collect();
    Partition1D::new(segments).expect("refinement of ordered partitions")
}

/// Both sides of `‖f + g‖_p ≤ ‖f* + g*‖_{L^p(0,∞)}` for nonnegative `f`, `g`.
pub fn property2_sides(f: &StepFunction, g: &StepFunction, p: Exponent) -> Result<(f64, f64)> {
    for s in f.segments().iter().chain(g.segments()) {
        if s.value.im != 0.0 || s.value.re < 0.0 {
            return Err(Error::InvalidParameter(
                "property2 needs nonnegative real functions".into(),
            ));
        }
    }
    let lhs = lp_norm(&add_steps(f, g).into(), p);
    let fs = rearrangement(&f.clone().into());
    let gs = rearrangement(&g.clone().into());
    let rhs = lp_norm(&fs.sum(&gs).into(), p);
    Ok((lhs, rhs))
}

/// Data of the Hardy-type lemma: `0 < a < 1`, `0 < q ≤ ∞`, positive `ε_k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardyInput {
    a: f64,
    q: Exponent,
    eps: Vec<f64>,
}

impl HardyInput {
    pub fn new(a: f64, q: Exponent, eps: Vec<f64>) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParameter(format!("a must lie in (0, 1), got {a}")));
        }
        if let Some(e) = eps.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "eps entries must be finite and nonnegative, got {e}"
            )));
        }
        Ok(HardyInput { a, q, eps })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn q(&self) -> Exponent {
        self.q
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardySums {
    pub delta: Vec<f64>,
    /// Uses only the available finite tail.
    pub eta: Vec<f64>,
}

pub fn hardy_sums(input: &HardyInput) -> HardySums {
    let (a, eps) = (input.a, &input.eps);
    let mut delta = Vec::with_capacity(eps.len());
    let mut acc = 0.0;
    for &e in eps {
        acc = a * acc + e;
        delta.push(acc);
    }
    let mut eta = vec![0.0; eps.len()];
    let mut acc = 0.0;
    for k in (0..eps.len()).rev() {
        acc = a * acc + eps[k];
        eta[k] = acc;
    }
    HardySums { delta, eta }
}

/// `c(a, q) = 2 (1 - a^{q̃})^{-1/q̃}` with `q̃ = min(1, q)`.
pub fn hardy_constant(a: f64, q: Exponent) -> f64 {
    let qt = q.tilde();
    2.0 * (1.0 - a.powf(qt)).powf(-1.0 / qt)
}

/// `‖x‖_{ℓ^q}` (a quasi-norm for `q < 1`).
pub fn sequence_norm(x: &[f64], q: Exponent) -> f64 {
    match q {
        Exponent::Finite(q) => x.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q),
        Exponent::Infinite => x.iter().map(|v| v.abs()).fold(0.0, f64::max),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HardyCheck {
    /// `‖δ‖_q + ‖η‖_q`.
    pub lhs: f64,
    /// `c(a, q) ‖ε‖_q`.
    pub rhs: f64,
    pub holds: bool,
}

pub fn check_hardy(input: &HardyInput) -> HardyCheck {
    let sums = hardy_sums(input);
    let lhs = sequence_norm(&sums.delta, input.q) + sequence_norm(&sums.eta, input.q);
    let rhs = hardy_constant(input.a, input.q) * sequence_norm(&input.eps, input.q);
    HardyCheck {
        lhs,
        rhs,
        holds: lhs <= rhs,
    }
}

/// Both sides of `(Σ|a_j|)^ρ ≤ Σ|a_j|^ρ`, valid for `0 < ρ ≤ 1`.
pub fn power_inequality_sides(a: &[f64], rho: f64) -> (f64, f64) {
    let lhs = a.iter().map(|x| x.abs()).sum::<f64>().powf(rho);
    let rhs = a.iter().map(|x| x.abs().powf(rho)).sum();
    (lhs, rhs)
}
