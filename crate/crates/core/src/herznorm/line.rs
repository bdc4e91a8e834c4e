use super::profile::{AnnulusProfile, OriginTail};
use super::{HerzParams, NormValue, TailMode};
use crate::dyadic::{interval_overlap, Dyadic, StepFunction};
use crate::Exponent;

/// Exact annulus profile of a step function on the line.
pub(crate) fn line_profile(f: &StepFunction, q: Exponent, tail: TailMode) -> Option<AnnulusProfile> {
    let segs: Vec<_> = f
        .segments()
        .iter()
        .filter(|s| s.value.norm() > 0.0)
        .map(|s| (s.start, s.end, s.value.norm()))
        .collect();
    if segs.is_empty() {
        return None;
    }

    // Constant regions (0, a_pos) and (-b_neg, 0) next to the origin.
    let (mut v_pos, mut v_neg) = (0.0, 0.0);
    let mut a_pos: Option<Dyadic> = None;
    let mut b_neg: Option<Dyadic> = None;
    for &(a, b, v) in &segs {
        if a <= Dyadic::ZERO && b > Dyadic::ZERO {
            v_pos = v;
            a_pos = Some(b);
        } else if a > Dyadic::ZERO && a_pos.is_none_or(|x| a < x) {
            a_pos = Some(a);
        }
        if a < Dyadic::ZERO && b >= Dyadic::ZERO {
            v_neg = v;
            b_neg = Some(-a);
        } else if b < Dyadic::ZERO && b_neg.is_none_or(|x| -b < x) {
            b_neg = Some(-b);
        }
    }
    let reach = match (a_pos, b_neg) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => unreachable!("nonempty support"),
    };
    let k0 = reach.floor_log2() as i64;
    let k_split = match tail {
        TailMode::Analytic => k0,
        TailMode::Explicit(extra) => k0 - extra as i64,
    };

    let mut profile = AnnulusProfile::new(1, q, true);
    let coeff = match q {
        Exponent::Finite(q) => (v_pos.powf(q) + v_neg.powf(q)) / 2.0,
        Exponent::Infinite => f64::max(v_pos, v_neg),
    };
    profile.tail = Some(OriginTail { k_split, coeff });

    for &(a, b, v) in &segs {
        let mut parts = Vec::with_capacity(2);
        if b > Dyadic::ZERO {
            parts.push((a.max(Dyadic::ZERO), b));
        }
        if a < Dyadic::ZERO {
            parts.push(((-b).max(Dyadic::ZERO), -a));
        }
        for (c, d) in parts {
            let k_lo = if c.is_zero() {
                k_split + 1
            } else {
                (c.floor_log2() as i64 + 1).max(k_split + 1)
            };
            let k_hi = d.ceil_log2() as i64;
            for k in k_lo..=k_hi {
                let ov = interval_overlap(c, d, Dyadic::pow2(k as i32 - 1), Dyadic::pow2(k as i32));
                profile.add(k, v, ov.to_f64(), 0.0);
            }
        }
    }
    Some(profile)
}

pub(crate) fn herz_norm_line(f: &StepFunction, hp: &HerzParams, tail: TailMode) -> NormValue {
    match line_profile(f, hp.q, tail) {
        Some(profile) => profile.norm(hp.alpha, hp.p),
        None => NormValue::zero(),
    }
}
