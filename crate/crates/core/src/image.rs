//! Grayscale image container and mirror boundary handling.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row/column position. Signed so that positions outside the image can be
/// expressed and resolved through [`reflect_index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PixelIndex {
    pub row: isize,
    pub col: isize,
}

impl PixelIndex {
    pub fn new(row: isize, col: isize) -> Self {
        Self { row, col }
    }

    pub fn offset(self, d_row: isize, d_col: isize) -> Self {
        Self { row: self.row + d_row, col: self.col + d_col }
    }
}

/// Whole-sample symmetric reflection of `i` into `[0, n)`.
///
/// `-1 -> 1`, `-2 -> 2`, `n -> n-2`, `n+1 -> n-3`; the border sample is not
/// repeated. Larger excursions fold repeatedly with period `2(n-1)`.
pub fn reflect_index(i: isize, n: usize) -> usize {
    assert!(n >= 1, "reflect_index on empty axis");
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let m = i.rem_euclid(period);
    if m >= n as isize {
        (period - m) as usize
    } else {
        m as usize
    }
}

/// Real-valued grayscale image stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Real> Image<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "expected {} samples for {width}x{height}, got {}",
                width * height,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidImage(format!(
                "non-finite sample at row {}, col {}",
                pos / width,
                pos % width
            )));
        }
        Ok(Self { width, height, data })
    }

    /// Caller guarantees the invariants; used for internally produced buffers.
    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self { width, height, data }
    }

    pub fn filled(width: usize, height: usize, value: T) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                data.push(f(row, col));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.width + col]
    }

    /// Sample at `(row, col)` with out-of-range coordinates mirrored back in.
    #[inline]
    pub fn get_reflected(&self, row: isize, col: isize) -> T {
        self.get(reflect_index(row, self.height), reflect_index(col, self.width))
    }

    #[inline]
    pub fn at(&self, idx: PixelIndex) -> T {
        self.get_reflected(idx.row, idx.col)
    }

    pub fn min_max(&self) -> (T, T) {
        self.data.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
    }

    pub fn same_shape<U>(&self, other: &Image<U>) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn ensure_same_shape<U>(&self, other: &Image<U>) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                left_w: self.width,
                left_h: self.height,
                right_w: other.width,
                right_h: other.height,
            })
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(self.width, self.height, self.data.iter().map(|&v| f(v)).collect())
    }

    pub fn cast<U: Real>(&self) -> Image<U> {
        let data = self
            .data
            .iter()
            .map(|v| U::from_f64(v.as_f64()).expect("finite sample"))
            .collect();
        Image::from_raw(self.width, self.height, data)
    }

    /// Copy of the image padded by `pad` samples on every side using
    /// [`reflect_index`], returned with its new width.
    pub(crate) fn padded(&self, pad: usize) -> (Vec<T>, usize) {
        let pw = self.width + 2 * pad;
        let ph = self.height + 2 * pad;
        let mut out = Vec::with_capacity(pw * ph);
        for r in 0..ph {
            let src_r = reflect_index(r as isize - pad as isize, self.height);
            for c in 0..pw {
                let src_c = reflect_index(c as isize - pad as isize, self.width);
                out.push(self.get(src_r, src_c));
            }
        }
        (out, pw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reflect_examples() {
        assert_eq!(reflect_index(-1, 5), 1);
        assert_eq!(reflect_index(-2, 5), 2);
        assert_eq!(reflect_index(5, 5), 3);
        assert_eq!(reflect_index(6, 5), 2);
        assert_eq!(reflect_index(2, 5), 2);
        assert_eq!(reflect_index(-7, 1), 0);
        assert_eq!(reflect_index(3, 1), 0);
        assert_eq!(reflect_index(-1, 2), 1);
        assert_eq!(reflect_index(2, 2), 0);
    }

    #[test]
    fn reflected_reads_on_2x2() {
        let img = Image::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(img.get_reflected(-1, 0), 3.0);
        assert_eq!(img.get_reflected(0, 0), 1.0);
        assert_eq!(img.get_reflected(2, 2), 1.0);
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(Image::<f64>::new(0, 3, vec![]).is_err());
        assert!(Image::new(2, 2, vec![1.0; 3]).is_err());
        assert!(Image::new(1, 1, vec![f64::NAN]).is_err());
        assert!(Image::new(1, 1, vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn padding_matches_reflected_reads() {
        let img = Image::from_fn(4, 3, |r, c| (r * 10 + c) as f64).unwrap();
        let (pad, pw) = img.padded(3);
        for r in 0..9 {
            for c in 0..pw {
                assert_eq!(pad[r * pw + c], img.get_reflected(r as isize - 3, c as isize - 3));
            }
        }
    }

    proptest! {
        #[test]
        fn reflect_lands_in_range(n in 1usize..50, k in -200isize..200) {
            let r = reflect_index(k, n);
            prop_assert!(r < n);
            if k >= 0 && (k as usize) < n {
                prop_assert_eq!(r, k as usize);
            }
        }

        #[test]
        fn reflect_is_mirror_symmetric(n in 2usize..50, k in 0isize..49) {
            // i and -i land on the same sample; so do (n-1)+i and (n-1)-i
            prop_assert_eq!(reflect_index(-k, n), reflect_index(k, n));
            let e = n as isize - 1;
            prop_assert_eq!(reflect_index(e + k, n), reflect_index(e - k, n));
        }

        #[test]
        fn interior_reads_are_direct(w in 1usize..8, h in 1usize..8, seed in 0u64..1000) {
            let img = Image::from_fn(w, h, |r, c| ((r * 31 + c * 7) as u64 ^ seed) as f64).unwrap();
            for r in 0..h {
                for c in 0..w {
                    prop_assert_eq!(img.get_reflected(r as isize, c as isize), img.get(r, c));
                }
            }
        }
    }
}
