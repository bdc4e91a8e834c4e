use std::collections::{BTreeSet, HashSet};

use num_complex::Complex64;

use super::{Annulus, CoefficientField, Dyadic, DyadicCube};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Segment<T> {
    pub start: Dyadic,
    pub end: Dyadic,
    pub value: T,
}

impl<T> Segment<T> {
    pub fn len(&self) -> Dyadic {
        self.end - self.start
    }
}

/// Ordered, pairwise disjoint half-open segments with exact dyadic endpoints.
/// Points outside every segment carry the zero value.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition1D<T> {
    segments: Vec<Segment<T>>,
}

impl<T> Default for Partition1D<T> {
    fn default() -> Self {
        Partition1D { segments: Vec::new() }
    }
}

impl<T> Partition1D<T> {
    pub fn new(segments: Vec<Segment<T>>) -> Result<Self> {
        for (i, seg) in segments.iter().enumerate() {
            if seg.start >= seg.end {
                return Err(Error::InvalidPartition(format!(
                    "segment {i} is empty or reversed: [{}, {})",
                    seg.start, seg.end
                )));
            }
            if i > 0 && segments[i - 1].end > seg.start {
                return Err(Error::InvalidPartition(format!(
                    "segment {i} overlaps or precedes its predecessor"
                )));
            }
        }
        Ok(Partition1D { segments })
    }

    /// Builds from `(start, end, value)` triples.
    pub fn from_triples<I>(items: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Dyadic, Dyadic, T)>,
    {
        Self::new(
            items
                .into_iter()
                .map(|(start, end, value)| Segment { start, end, value })
                .collect(),
        )
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Sorted distinct segment endpoints.
    pub fn breakpoints(&self) -> Vec<Dyadic> {
        let mut out: Vec<Dyadic> = Vec::with_capacity(2 * self.segments.len());
        for seg in &self.segments {
            if out.last() != Some(&seg.start) {
                out.push(seg.start);
            }
            out.push(seg.end);
        }
        out
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Partition1D<U> {
        Partition1D {
            segments: self
                .segments
                .iter()
                .map(|s| Segment {
                    start: s.start,
                    end: s.end,
                    value: f(&s.value),
                })
                .collect(),
        }
    }

    /// Value at `x`, if `x` lies in some segment.
    pub fn value_at(&self, x: Dyadic) -> Option<&T> {
        let i = self.segments.partition_point(|s| s.end <= x);
        self.segments.get(i).filter(|s| s.start <= x).map(|s| &s.value)
    }

    /// Restriction to `[lo, hi)`.
    pub fn clip(&self, lo: Dyadic, hi: Dyadic) -> Partition1D<T>
    where
        T: Clone,
    {
        let segments = self
            .segments
            .iter()
            .filter_map(|s| {
                let a = s.start.max(lo);
                let b = s.end.min(hi);
                (a < b).then(|| Segment {
                    start: a,
                    end: b,
                    value: s.value.clone(),
                })
            })
            .collect();
        Partition1D { segments }
    }
}

/// A piecewise-constant function on the line.
pub type StepFunction = Partition1D<Complex64>;

/// Piecewise-constant function on pairwise disjoint dyadic cubes in `ℝⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeFunction {
    n: usize,
    cells: Vec<(DyadicCube, Complex64)>,
}

impl CubeFunction {
    pub fn new(n: usize, mut cells: Vec<(DyadicCube, Complex64)>) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        let set: HashSet<&DyadicCube> = cells.iter().map(|c| &c.0).collect();
        if set.len() != cells.len() {
            return Err(Error::InvalidPartition("repeated cube".into()));
        }
        for (cube, _) in &cells {
            if cube.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: cube.dim(),
                });
            }
            let mut up = cube.parent();
            while let Some(p) = up {
                if set.contains(&p) {
                    return Err(Error::InvalidPartition(format!(
                        "cube at level {} is nested in an occupied ancestor",
                        cube.level()
                    )));
                }
                up = p.parent();
            }
        }
        Ok(CubeFunction { n, cells })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[(DyadicCube, Complex64)] {
        &self.cells
    }
}

/// The functions Herz norms are evaluated on.
#[derive(Clone, Debug, PartialEq)]
pub enum PiecewiseConstantFunction {
    /// Exact intervals on the line.
    Line(StepFunction),
    /// Disjoint dyadic cubes in `ℝⁿ`.
    Cubes(CubeFunction),
}

impl PiecewiseConstantFunction {
    pub fn dim(&self) -> usize {
        match self {
            PiecewiseConstantFunction::Line(_) => 1,
            PiecewiseConstantFunction::Cubes(c) => c.dim(),
        }
    }
}

impl From<StepFunction> for PiecewiseConstantFunction {
    fn from(f: StepFunction) -> Self {
        PiecewiseConstantFunction::Line(f)
    }
}

impl From<CubeFunction> for PiecewiseConstantFunction {
    fn from(f: CubeFunction) -> Self {
        PiecewiseConstantFunction::Cubes(f)
    }
}

/// Per-level coefficients active on a segment, ordered by level.
pub type LevelStack = Vec<(u32, Complex64)>;

/// Common refinement of every occupied cube of a one-dimensional field.
///
/// Each returned segment lies inside exactly one cube per level it lists;
/// points covered by no cube are omitted.
pub fn refine_line(field: &CoefficientField) -> Result<Partition1D<LevelStack>> {
    if field.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: field.dim(),
        });
    }
    let mut points = BTreeSet::new();
    for (cube, _) in field.iter() {
        let (a, b) = cube.extent()[0];
        points.insert(a);
        points.insert(b);
    }
    let levels: Vec<u32> = field.levels().into_iter().collect();
    let points: Vec<Dyadic> = points.into_iter().collect();
    let mut segments = Vec::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut stack = LevelStack::new();
        for &v in &levels {
            let m = a.mul_pow2(v as i32).floor() as i64;
            let value = field.get(&DyadicCube::line(v, m)?);
            if value != Complex64::new(0.0, 0.0) {
                stack.push((v, value));
            }
        }
        if !stack.is_empty() {
            segments.push(Segment {
                start: a,
                end: b,
                value: stack,
            });
        }
    }
    Ok(Partition1D { segments })
}

/// The refinement restricted to one annulus, split by sign.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnulusPartition {
    pub k: i64,
    /// Segments inside `[-2^k, -2^{k-1})`.
    pub negative: Partition1D<LevelStack>,
    /// Segments inside `[2^{k-1}, 2^k)`.
    pub positive: Partition1D<LevelStack>,
}

impl AnnulusPartition {
    pub fn is_empty(&self) -> bool {
        self.negative.is_empty() && self.positive.is_empty()
    }

    pub fn total_length(&self) -> Dyadic {
        self.negative
            .segments()
            .iter()
            .chain(self.positive.segments())
            .fold(Dyadic::ZERO, |acc, s| acc + s.len())
    }
}

/// Common refinement of the field inside `C_k`.
pub fn refine_to_partition(field: &CoefficientField, k: i64) -> Result<AnnulusPartition> {
    let whole = refine_line(field)?;
    let ann = Annulus::new(k);
    Ok(AnnulusPartition {
        k,
        negative: whole.clip(-ann.outer(), -ann.inner()),
        positive: whole.clip(ann.inner(), ann.outer()),
    })
}
