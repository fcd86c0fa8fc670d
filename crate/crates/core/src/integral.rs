//! Summed-area tables.
//!
//! Prefix sums are kept as double-word (`hi + lo`) values so that box sums
//! obtained by four-corner differencing stay accurate to a few ulps of the
//! box itself, independent of how large the enclosing prefix has grown.

use crate::scalar::{Compensated, Real};

#[derive(Debug, Clone)]
pub struct IntegralImage<T> {
    width: usize,
    height: usize,
    // (height + 1) x (width + 1), first row and column are zero
    table: Vec<Compensated<T>>,
}

impl<T: Real> IntegralImage<T> {
    /// Build from a row-major grid of `width` columns.
    pub fn new(values: &[T], width: usize) -> Self {
        let mut sat = Self { width: 0, height: 0, table: Vec::new() };
        sat.rebuild(values, width);
        sat
    }

    /// Rebuild in place, reusing the allocation.
    pub fn rebuild(&mut self, values: &[T], width: usize) {
        assert!(width > 0 && values.len().is_multiple_of(width));
        let height = values.len() / width;
        let stride = width + 1;
        self.width = width;
        self.height = height;
        self.table.clear();
        self.table.resize(stride * (height + 1), Compensated::default());
        for r in 0..height {
            let mut run = Compensated::default();
            let (above, below) = self.table.split_at_mut((r + 1) * stride);
            let above = &above[r * stride..];
            let row = &mut below[..stride];
            for c in 0..width {
                run = run.add(Compensated::new(values[r * width + c]));
                row[c + 1] = run.add(above[c + 1]);
            }
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Inclusive prefix sum over rows `0..=row`, columns `0..=col`.
    pub fn value(&self, row: usize, col: usize) -> T {
        self.table[(row + 1) * (self.width + 1) + col + 1].value()
    }

    pub fn total(&self) -> T {
        self.value(self.height - 1, self.width - 1)
    }

    /// Sum over the inclusive rectangle `[r0, r1] x [c0, c1]`.
    #[inline]
    pub fn rect_sum(&self, r0: usize, c0: usize, r1: usize, c1: usize) -> T {
        debug_assert!(r0 <= r1 && c0 <= c1 && r1 < self.height && c1 < self.width);
        let s = self.width + 1;
        let t = &self.table;
        t[(r1 + 1) * s + c1 + 1]
            .sub(t[r0 * s + c1 + 1])
            .sub(t[(r1 + 1) * s + c0])
            .add(t[r0 * s + c0])
            .value()
    }
}
