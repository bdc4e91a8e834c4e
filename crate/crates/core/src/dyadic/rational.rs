use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// An exact dyadic rational `mantissa · 2^exponent`.
///
/// Values are kept normalized (odd mantissa, or zero with exponent 0), so
/// structural equality coincides with numerical equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: i128,
    exp: i32,
}

fn shl_exact(m: i128, shift: u32) -> i128 {
    if m == 0 {
        return 0;
    }
    let room = m.unsigned_abs().leading_zeros();
    assert!(shift < room, "dyadic mantissa overflow while aligning (shift {shift})");
    m << shift
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { mant: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { mant: 1, exp: 0 };

    pub fn new(mant: i128, exp: i32) -> Self {
        if mant == 0 {
            return Self::ZERO;
        }
        let tz = mant.trailing_zeros();
        Dyadic {
            mant: mant >> tz,
            exp: exp + tz as i32,
        }
    }

    pub fn from_int(i: i64) -> Self {
        Self::new(i as i128, 0)
    }

    /// `2^e`.
    pub fn pow2(e: i32) -> Self {
        Dyadic { mant: 1, exp: e }
    }

    pub fn mantissa(self) -> i128 {
        self.mant
    }

    pub fn exponent(self) -> i32 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0
    }

    pub fn signum(self) -> i32 {
        self.mant.signum() as i32
    }

    pub fn abs(self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn mul_pow2(self, e: i32) -> Self {
        if self.mant == 0 {
            self
        } else {
            Dyadic {
                mant: self.mant,
                exp: self.exp + e,
            }
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(self) -> i128 {
        if self.exp >= 0 {
            shl_exact(self.mant, self.exp as u32)
        } else if self.exp <= -127 {
            if self.mant < 0 {
                -1
            } else {
                0
            }
        } else {
            self.mant >> (-self.exp) as u32
        }
    }

    /// `⌊log₂ x⌋` for `x > 0`.
    pub fn floor_log2(self) -> i32 {
        assert!(self.mant > 0, "floor_log2 of a non-positive dyadic");
        self.exp + (127 - self.mant.leading_zeros() as i32)
    }

    /// `⌈log₂ x⌉` for `x > 0`.
    pub fn ceil_log2(self) -> i32 {
        let f = self.floor_log2();
        if self.mant == 1 {
            f
        } else {
            f + 1
        }
    }

    /// The exact value of a finite float.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::ZERO);
        }
        let bits = x.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i32;
        let frac = (bits & ((1u64 << 52) - 1)) as i128;
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1i128 << 52), biased - 1075)
        };
        let mant = if x < 0.0 { -mant } else { mant };
        Some(Self::new(mant, exp))
    }

    pub fn to_f64(self) -> f64 {
        if self.mant == 0 {
            return 0.0;
        }
        let m = self.mant as f64;
        // split the scaling so intermediate powers stay finite
        let e = self.exp;
        if (-1000..=1000).contains(&e) {
            m * 2f64.powi(e)
        } else {
            m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
        }
    }

    fn aligned(self, other: Self) -> (i128, i128, i32) {
        if self.mant == 0 {
            return (0, other.mant, other.exp);
        }
        if other.mant == 0 {
            return (self.mant, 0, self.exp);
        }
        let e = self.exp.min(other.exp);
        (
            shl_exact(self.mant, (self.exp - e) as u32),
            shl_exact(other.mant, (other.exp - e) as u32),
            e,
        )
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a.checked_add(b).expect("dyadic overflow"), e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a.checked_sub(b).expect("dyadic overflow"), e)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mant.signum(), other.mant.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes by binary length first to avoid huge shifts
        let la = self.abs().floor_log2();
        let lb = other.abs().floor_log2();
        if la != lb {
            let mag = la.cmp(&lb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let (a, b, _) = self.aligned(*other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Serialized as the nearest float.
impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

impl From<i64> for Dyadic {
    fn from(i: i64) -> Self {
        Dyadic::from_int(i)
    }
}
