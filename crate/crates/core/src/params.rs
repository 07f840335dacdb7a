//! Flattened one-dimensional view of all network parameters.
//!
//! Matching, pruning and the trajectory buffers all operate on parameter
//! vectors of length `p`; the per-layer segment table records where each
//! layer's weights live so the flat view can be unflattened exactly.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One named contiguous run of parameter slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub name: String,
    pub offset: usize,
    pub len: usize,
}

/// Ordered per-layer segment table for one architecture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamLayout {
    segments: Vec<Segment>,
    total: usize,
}

impl ParamLayout {
    pub fn new(names_and_lens: impl IntoIterator<Item = (String, usize)>) -> Self {
        let mut segments = Vec::new();
        let mut offset = 0;
        for (name, len) in names_and_lens {
            segments.push(Segment { name, offset, len });
            offset += len;
        }
        ParamLayout {
            segments,
            total: offset,
        }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn range(&self, name: &str) -> Option<std::ops::Range<usize>> {
        self.segments
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.offset..s.offset + s.len)
    }
}

/// Flat parameter vector plus the layout that makes it unflattenable.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector<F> {
    values: Vec<F>,
    layout: Arc<ParamLayout>,
}

impl<F: Scalar> ParamVector<F> {
    pub fn new(values: Vec<F>, layout: Arc<ParamLayout>) -> Result<Self> {
        if values.len() != layout.total() {
            return Err(Error::structural(format!(
                "param vector has {} values, layout expects {}",
                values.len(),
                layout.total()
            )));
        }
        Ok(ParamVector { values, layout })
    }

    pub fn zeros(layout: Arc<ParamLayout>) -> Self {
        ParamVector {
            values: vec![F::zero(); layout.total()],
            layout,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [F] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<F> {
        self.values
    }

    pub fn layout(&self) -> &Arc<ParamLayout> {
        &self.layout
    }

    /// Per-segment slices, in table order. Re-flattening these in order
    /// reproduces the vector exactly.
    pub fn unflatten(&self) -> Vec<(&str, &[F])> {
        self.layout
            .segments()
            .iter()
            .map(|s| (s.name.as_str(), &self.values[s.offset..s.offset + s.len]))
            .collect()
    }

    /// Rebuild from per-segment slices produced by [`Self::unflatten`].
    pub fn flatten(parts: &[(&str, &[F])], layout: Arc<ParamLayout>) -> Result<Self> {
        let mut values = Vec::with_capacity(layout.total());
        for (seg, (name, part)) in layout.segments().iter().zip(parts) {
            if seg.name != *name || seg.len != part.len() {
                return Err(Error::structural(format!(
                    "segment {} (len {}) does not match layout entry {} (len {})",
                    name,
                    part.len(),
                    seg.name,
                    seg.len
                )));
            }
            values.extend_from_slice(part);
        }
        ParamVector::new(values, layout)
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout() -> Arc<ParamLayout> {
        Arc::new(ParamLayout::new(vec![
            ("l0.w".to_string(), 6),
            ("l0.b".to_string(), 2),
            ("l1.w".to_string(), 4),
        ]))
    }

    #[test]
    fn layout_offsets_are_contiguous() {
        let l = layout();
        assert_eq!(l.total(), 12);
        assert_eq!(l.range("l0.b"), Some(6..8));
        assert_eq!(l.range("missing"), None);
    }

    #[test]
    fn flatten_unflatten_round_trip_is_exact() {
        let l = layout();
        let v: Vec<f64> = (0..12).map(|i| i as f64 * 0.25 - 1.0).collect();
        let pv = ParamVector::new(v.clone(), l.clone()).unwrap();
        let parts = pv.unflatten();
        let back = ParamVector::flatten(&parts, l).unwrap();
        assert_eq!(back.values(), v.as_slice());
    }

    #[test]
    fn length_mismatch_is_structural_error() {
        assert!(ParamVector::<f32>::new(vec![0.0; 11], layout()).is_err());
    }
}
