use std::collections::btree_map::{self, BTreeMap};
use std::collections::BTreeSet;

use num_complex::Complex64;

use super::DyadicCube;
use crate::{Error, Result};

/// Sparse coefficients `λ_{v,m}` on dyadic cubes; absent entries are zero.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CoefficientField {
    n: usize,
    entries: BTreeMap<DyadicCube, Complex64>,
}

impl CoefficientField {
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        Ok(CoefficientField {
            n,
            entries: BTreeMap::new(),
        })
    }

    /// Builds a one-dimensional field from `(v, m, value)` triples.
    pub fn from_line_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, i64, Complex64)>,
    {
        let mut field = Self::new(1)?;
        for (v, m, value) in entries {
            field.insert(DyadicCube::line(v, m)?, value)?;
        }
        Ok(field)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Stores `value` at `cube`, replacing any previous value; zero removes the entry.
    pub fn insert(&mut self, cube: DyadicCube, value: Complex64) -> Result<()> {
        if cube.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: cube.dim(),
            });
        }
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::NonFinite { v: cube.level() });
        }
        if value == Complex64::new(0.0, 0.0) {
            self.entries.remove(&cube);
        } else {
            self.entries.insert(cube, value);
        }
        Ok(())
    }

    /// Adds `value` to the entry at `cube`.
    pub fn accumulate(&mut self, cube: DyadicCube, value: Complex64) -> Result<()> {
        let current = self.get(&cube);
        self.insert(cube, current + value)
    }

    pub fn get(&self, cube: &DyadicCube) -> Complex64 {
        self.entries.get(cube).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, DyadicCube, Complex64> {
        self.entries.iter()
    }

    pub(crate) fn entries(&self) -> &BTreeMap<DyadicCube, Complex64> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest occupied level.
    pub fn vmax(&self) -> Option<u32> {
        self.entries.keys().map(DyadicCube::level).max()
    }

    pub fn levels(&self) -> BTreeSet<u32> {
        self.entries.keys().map(DyadicCube::level).collect()
    }

    /// Entries on a single level, in index order.
    pub fn level_entries(&self, v: u32) -> impl Iterator<Item = (&DyadicCube, &Complex64)> {
        self.entries
            .range(DyadicCube::level_floor(v)..DyadicCube::level_floor(v + 1))
    }

    pub fn scaled(&self, c: Complex64) -> CoefficientField {
        let mut out = CoefficientField {
            n: self.n,
            entries: BTreeMap::new(),
        };
        for (cube, value) in &self.entries {
            let scaled = *value * c;
            if scaled != Complex64::new(0.0, 0.0) {
                out.entries.insert(cube.clone(), scaled);
            }
        }
        out
    }

    /// `a·self + b·other`, entrywise.
    pub fn combine(&self, a: Complex64, other: &CoefficientField, b: Complex64) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = self.scaled(a);
        for (cube, value) in &other.entries {
            out.accumulate(cube.clone(), *value * b)?;
        }
        Ok(out)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
