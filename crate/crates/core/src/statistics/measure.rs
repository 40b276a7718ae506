use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::error::{invalid, Error, Result};
use crate::process::runner::Observer;
use crate::process::tree::TreeState;
use crate::topology::{canonical_encode, extract_ball, CanonicalCode};
use crate::VertexId;

/// Counts of canonical `r`-ball codes seen from the walker.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    radius: u32,
    counts: BTreeMap<CanonicalCode, u64>,
    total: u64,
}

impl EmpiricalMeasure {
    pub fn new(radius: u32) -> Self {
        Self {
            radius,
            counts: BTreeMap::new(),
            total: 0,
        }
    }

    /// Rebuilds a measure from stored counts.
    pub fn from_counts(radius: u32, counts: impl IntoIterator<Item = (CanonicalCode, u64)>) -> Self {
        let mut m = Self::new(radius);
        for (code, c) in counts {
            m.add(code, c);
        }
        m
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Codes in ascending byte order with their counts.
    pub fn counts(&self) -> impl Iterator<Item = (&CanonicalCode, u64)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, code: &CanonicalCode) -> u64 {
        self.counts.get(code).copied().unwrap_or(0)
    }

    pub fn frequency(&self, code: &CanonicalCode) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(code) as f64 / self.total as f64
        }
    }

    pub fn frequencies(&self) -> impl Iterator<Item = (&CanonicalCode, f64)> {
        let total = self.total as f64;
        self.counts.iter().map(move |(k, &v)| (k, v as f64 / total))
    }

    pub fn add(&mut self, code: CanonicalCode, count: u64) {
        if count > 0 {
            *self.counts.entry(code).or_insert(0) += count;
            self.total += count;
        }
    }

    pub fn accumulate_ball(&mut self, tree: &TreeState, walker: VertexId) -> Result<()> {
        let ball = extract_ball(tree, walker, self.radius)?;
        self.add(canonical_encode(&ball), 1);
        Ok(())
    }

    /// Adds `other`'s counts into `self`.
    pub fn merge_from(&mut self, other: &EmpiricalMeasure) -> Result<()> {
        if self.radius != other.radius {
            return Err(Error::RadiusMismatch(self.radius, other.radius));
        }
        for (code, c) in other.counts() {
            self.add(code.clone(), c);
        }
        Ok(())
    }
}

pub fn accumulate_ball(measure: &mut EmpiricalMeasure, tree: &TreeState, walker: VertexId) -> Result<()> {
    measure.accumulate_ball(tree, walker)
}

pub fn merge_measures(a: &EmpiricalMeasure, b: &EmpiricalMeasure) -> Result<EmpiricalMeasure> {
    let mut out = a.clone();
    out.merge_from(b)?;
    Ok(out)
}

/// Half the L1 distance between the normalized frequencies.
pub fn tv_distance(a: &EmpiricalMeasure, b: &EmpiricalMeasure) -> Result<f64> {
    if a.radius != b.radius {
        return Err(Error::RadiusMismatch(a.radius, b.radius));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let (ta, tb) = (a.total as f64, b.total as f64);
    let mut sum = 0.0;
    for (code, &ca) in &a.counts {
        sum += (ca as f64 / ta - b.count(code) as f64 / tb).abs();
    }
    for (code, &cb) in &b.counts {
        if !a.counts.contains_key(code) {
            sum += cb as f64 / tb;
        }
    }
    Ok((sum / 2.0).min(1.0))
}

/// Accumulates one measure per radius at every `stride`-th time.
#[derive(Clone, Debug)]
pub struct MeasureRecorder {
    stride: u64,
    measures: Vec<EmpiricalMeasure>,
    error: Option<Error>,
}

impl MeasureRecorder {
    pub fn new(radii: &[u32], stride: u64) -> Result<Self> {
        if stride == 0 {
            return Err(invalid("stride", "must be >= 1"));
        }
        if radii.is_empty() {
            return Err(invalid("radii", "need at least one radius"));
        }
        Ok(Self {
            stride,
            measures: radii.iter().map(|&r| EmpiricalMeasure::new(r)).collect(),
            error: None,
        })
    }

    /// The measures, or the first error hit while accumulating.
    pub fn finish(self) -> Result<Vec<EmpiricalMeasure>> {
        match self.error {
            Some(e) => Err(e),
            None => Ok(self.measures),
        }
    }
}

impl Observer for MeasureRecorder {
    fn radius(&self) -> u32 {
        self.measures.iter().map(|m| m.radius).max().unwrap_or(0)
    }

    fn observe(&mut self, state: &TreeState) -> ControlFlow<()> {
        if !state.time().is_multiple_of(self.stride) {
            return ControlFlow::Continue(());
        }
        let w = state.walker();
        // one extraction at the largest radius serves every smaller one
        let r = self.radius();
        let ball = match extract_ball(state, w, r) {
            Ok(b) => b,
            Err(e) => {
                self.error = Some(e);
                return ControlFlow::Break(());
            }
        };
        for m in &mut self.measures {
            let code = if m.radius == r {
                canonical_encode(&ball)
            } else {
                canonical_encode(&ball.truncate(m.radius))
            };
            m.add(code, 1);
        }
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::provider::{make_initial_tree, InitialTree};
    use crate::topology::{leaf_code, path_code};

    fn measure(entries: &[(&CanonicalCode, u64)]) -> EmpiricalMeasure {
        EmpiricalMeasure::from_counts(1, entries.iter().map(|(c, n)| ((*c).clone(), *n)))
    }

    #[test]
    fn tv_arithmetic() {
        let (a, b) = (path_code(1), path_code(2));
        let m1 = measure(&[(&a, 3), (&b, 1)]);
        let m2 = measure(&[(&a, 1), (&b, 3)]);
        assert_eq!(tv_distance(&m1, &m2).unwrap(), 0.5);
        assert_eq!(tv_distance(&m1, &m1).unwrap(), 0.0);
        assert_eq!(tv_distance(&measure(&[(&a, 2)]), &measure(&[(&b, 5)])).unwrap(), 1.0);
    }

    #[test]
    fn tv_errors() {
        let a = EmpiricalMeasure::new(1);
        let b = EmpiricalMeasure::new(2);
        assert_eq!(tv_distance(&a, &b), Err(Error::RadiusMismatch(1, 2)));
        assert_eq!(tv_distance(&a, &a), Err(Error::EmptyMeasure));
        assert!(merge_measures(&a, &b).is_err());
    }

    #[test]
    fn single_accumulation() {
        let t = make_initial_tree(InitialTree::Single).unwrap();
        let mut m = EmpiricalMeasure::new(3);
        accumulate_ball(&mut m, &t, 0).unwrap();
        assert_eq!(m.distinct(), 1);
        assert_eq!(m.frequency(&leaf_code()), 1.0);
    }

    #[test]
    fn merge_with_empty_is_identity() {
        let a = path_code(1);
        let m = measure(&[(&a, 4)]);
        assert_eq!(merge_measures(&m, &EmpiricalMeasure::new(1)).unwrap(), m);
    }

    #[test]
    fn recorder_stride_and_radii() {
        use crate::process::runner::{run_trajectory, BgrwConfig};
        let c = BgrwConfig::new(1.0, 9, 3, InitialTree::Path(3));
        let mut rec = MeasureRecorder::new(&[0, 2], 2).unwrap();
        run_trajectory(&c, &mut [&mut rec]).unwrap();
        let ms = rec.finish().unwrap();
        // t = 0, 2, 4, 6, 8
        assert_eq!(ms[0].total(), 5);
        assert_eq!(ms[0].count(&leaf_code()), 5);
        assert_eq!(ms[1].total(), 5);
        assert!(MeasureRecorder::new(&[1], 0).is_err());
    }
}
