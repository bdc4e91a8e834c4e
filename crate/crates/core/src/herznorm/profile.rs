use std::collections::BTreeMap;

use super::NormValue;
use crate::Exponent;

/// Closed-form contribution of the annuli `k ≤ k_split`, on which the
/// integrand is constant per orthant so that `mass_k = coeff · 2^{kn}`
/// (finite `q`) or `sup = coeff` (`q = ∞`).
#[derive(Clone, Copy, Debug)]
pub(crate) struct OriginTail {
    pub k_split: i64,
    pub coeff: f64,
}

/// Per-annulus masses `∫_{C_k} |f|^q` (or the essential sup when `q = ∞`)
/// with one-sigma errors, plus an optional origin tail.
#[derive(Clone, Debug)]
pub(crate) struct AnnulusProfile {
    pub n: usize,
    pub q: Exponent,
    pub masses: BTreeMap<i64, (f64, f64)>,
    pub tail: Option<OriginTail>,
    pub exact: bool,
}

impl AnnulusProfile {
    pub fn new(n: usize, q: Exponent, exact: bool) -> Self {
        AnnulusProfile {
            n,
            q,
            masses: BTreeMap::new(),
            tail: None,
            exact,
        }
    }

    /// Adds `|value|^q · measure` on annulus `k` (or raises the sup when `q = ∞`).
    pub fn add(&mut self, k: i64, abs_value: f64, measure: f64, std_error: f64) {
        if abs_value == 0.0 || measure <= 0.0 {
            return;
        }
        let entry = self.masses.entry(k).or_insert((0.0, 0.0));
        match self.q {
            Exponent::Finite(q) => {
                let w = abs_value.powf(q);
                entry.0 += w * measure;
                entry.1 += w * std_error;
            }
            Exponent::Infinite => entry.0 = entry.0.max(abs_value),
        }
    }

    /// Adds a signed mass correction (used for cells with holes); masses are
    /// clamped at zero when the profile is evaluated.
    pub fn add_signed(&mut self, k: i64, abs_value: f64, measure: f64, std_error: f64) {
        if abs_value == 0.0 || (measure == 0.0 && std_error == 0.0) {
            return;
        }
        let w = match self.q {
            Exponent::Finite(q) => abs_value.powf(q),
            Exponent::Infinite => unreachable!("signed masses require finite q"),
        };
        let entry = self.masses.entry(k).or_insert((0.0, 0.0));
        entry.0 += w * measure;
        entry.1 += w * std_error;
    }

    /// `(Σ_k 2^{kαp} (mass_k)^{p/q})^{1/p}` with the usual supremum forms.
    pub fn norm(&self, alpha: f64, p: Exponent) -> NormValue {
        let inv_q = self.q.recip();
        // log2 of the per-annulus amplitude 2^{kα}‖f χ_k‖_q, and its relative error.
        let mut amps: Vec<(f64, f64)> = Vec::with_capacity(self.masses.len());
        for (&k, &(mass, err)) in &self.masses {
            if mass <= 0.0 {
                continue;
            }
            let la = match self.q {
                Exponent::Finite(_) => k as f64 * alpha + mass.log2() * inv_q,
                Exponent::Infinite => k as f64 * alpha + mass.log2(),
            };
            amps.push((la, inv_q * err / mass));
        }
        let explicit_terms = amps.len();

        let mut tail_log: Option<f64> = None;
        let mut tail_from = None;
        if let Some(t) = self.tail.filter(|t| t.coeff > 0.0) {
            let gamma = alpha + self.n as f64 * inv_q;
            let la = match self.q {
                Exponent::Finite(_) => t.coeff.log2() * inv_q,
                Exponent::Infinite => t.coeff.log2(),
            };
            let k0 = t.k_split as f64;
            tail_from = Some(t.k_split);
            match p {
                Exponent::Finite(p) => {
                    if gamma * p <= 0.0 {
                        return NormValue::divergent(tail_from);
                    }
                    let denom = 1.0 - (-gamma * p).exp2();
                    tail_log = Some(p * (la + k0 * gamma) - denom.log2());
                }
                Exponent::Infinite => {
                    if gamma < 0.0 {
                        return NormValue::divergent(tail_from);
                    }
                    tail_log = Some(if gamma == 0.0 { la } else { la + k0 * gamma });
                }
            }
        }

        if amps.is_empty() && tail_log.is_none() {
            return NormValue::zero();
        }

        let (value, rel) = match p {
            Exponent::Finite(p) => {
                // Work with log2 of p-th powers, shifted by the maximum.
                let logs: Vec<f64> = amps.iter().map(|a| p * a.0).chain(tail_log).collect();
                let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let weights: Vec<f64> = logs.iter().map(|l| (l - top).exp2()).collect();
                let total: f64 = weights.iter().sum();
                let rel: f64 = amps.iter().zip(&weights).map(|(a, w)| a.1 * w / total).sum();
                (((top + total.log2()) / p).exp2(), rel)
            }
            Exponent::Infinite => {
                let mut best = (f64::NEG_INFINITY, 0.0);
                for &(la, r) in &amps {
                    if la > best.0 {
                        best = (la, r);
                    }
                }
                if let Some(t) = tail_log {
                    if t >= best.0 {
                        best = (t, 0.0);
                    }
                }
                (best.0.exp2(), best.1)
            }
        };

        NormValue {
            value,
            exact: self.exact,
            error_bound: if self.exact { 0.0 } else { value * rel },
            explicit_terms,
            tail_from,
            divergent: false,
        }
    }
}
