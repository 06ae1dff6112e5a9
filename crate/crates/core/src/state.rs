//! Small fixed-capacity vectors used for conserved and metric states.
//!
//! Both shipped models have at most two conserved components and at most two
//! metric components, so every state lives inline in a `[f64; MAX_DIM]` and is
//! `Copy`. Unused slots are always zero, which keeps derived equality honest.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const MAX_DIM: usize = 2;

#[derive(Clone, Copy, PartialEq, Default)]
pub struct StateVec {
    len: usize,
    data: [f64; MAX_DIM],
}

/// The vector `u` of conserved quantities in one cell.
pub type ConservedState = StateVec;
/// The vector `A` of metric components frozen in one cell.
pub type MetricState = StateVec;

impl StateVec {
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1 && len <= MAX_DIM, "state dimension {len} out of range");
        Self { len, data: [0.0; MAX_DIM] }
    }

    pub fn from_slice(values: &[f64]) -> Self {
        let mut v = Self::zeros(values.len());
        v.data[..values.len()].copy_from_slice(values);
        v
    }

    pub fn scalar(value: f64) -> Self {
        Self::from_slice(&[value])
    }

    pub fn pair(a: f64, b: f64) -> Self {
        Self::from_slice(&[a, b])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data[..self.len]
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.as_slice().iter().copied()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = *self;
        for k in 0..self.len {
            out.data[k] = f(self.data[k]);
        }
        out
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.len, other.len, "dimension mismatch");
        let mut out = *self;
        for k in 0..self.len {
            out.data[k] = f(self.data[k], other.data[k]);
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(f64::is_finite)
    }

    /// Vector 1-norm, the norm used for all jump and variation measurements.
    pub fn norm1(&self) -> f64 {
        self.iter().map(f64::abs).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.iter().zip(other.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.zip_with(other, |a, b| a - b).norm_inf()
    }
}

impl Index<usize> for StateVec {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.as_slice()[k]
    }
}

impl IndexMut<usize> for StateVec {
    fn index_mut(&mut self, k: usize) -> &mut f64 {
        assert!(k < self.len, "index {k} out of range for dimension {}", self.len);
        &mut self.data[k]
    }
}

impl Add for StateVec {
    type Output = StateVec;
    fn add(self, rhs: StateVec) -> StateVec {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl Sub for StateVec {
    type Output = StateVec;
    fn sub(self, rhs: StateVec) -> StateVec {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl Neg for StateVec {
    type Output = StateVec;
    fn neg(self) -> StateVec {
        self.map(|a| -a)
    }
}

impl Mul<f64> for StateVec {
    type Output = StateVec;
    fn mul(self, s: f64) -> StateVec {
        self.map(|a| a * s)
    }
}

impl Mul<StateVec> for f64 {
    type Output = StateVec;
    fn mul(self, v: StateVec) -> StateVec {
        v.map(|a| self * a)
    }
}

impl AddAssign for StateVec {
    fn add_assign(&mut self, rhs: StateVec) {
        *self = *self + rhs;
    }
}

impl SubAssign for StateVec {
    fn sub_assign(&mut self, rhs: StateVec) {
        *self = *self - rhs;
    }
}

impl fmt::Debug for StateVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

impl fmt::Display for StateVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for StateVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let values = Vec::<f64>::deserialize(d)?;
        if values.is_empty() || values.len() > MAX_DIM {
            return Err(serde::de::Error::custom(format!(
                "state vectors need between 1 and {MAX_DIM} components, got {}",
                values.len()
            )));
        }
        Ok(StateVec::from_slice(&values))
    }
}

/// Dense `rows × cols` matrix with at most `MAX_DIM` in each direction.
///
/// Used for the flux Jacobian `∂f/∂u` (d×d) and the metric gradient
/// `∇_A f` (d×m).
#[derive(Clone, Copy, PartialEq, Default)]
pub struct SmallMatrix {
    rows: usize,
    cols: usize,
    data: [[f64; MAX_DIM]; MAX_DIM],
}

impl SmallMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && rows <= MAX_DIM && cols >= 1 && cols <= MAX_DIM);
        Self { rows, cols, data: [[0.0; MAX_DIM]; MAX_DIM] }
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let mut m = Self::zeros(rows.len(), rows[0].len());
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), m.cols, "ragged matrix rows");
            m.data[r][..row.len()].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        assert!(r < self.rows && c < self.cols);
        self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: f64) {
        assert!(r < self.rows && c < self.cols);
        self.data[r][c] = value;
    }

    pub fn column(&self, c: usize) -> StateVec {
        let mut v = StateVec::zeros(self.rows);
        for r in 0..self.rows {
            v[r] = self.data[r][c];
        }
        v
    }

    pub fn mul_vec(&self, v: &StateVec) -> StateVec {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        let mut out = StateVec::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0.0;
            for c in 0..self.cols {
                acc += self.data[r][c] * v[c];
            }
            out[r] = acc;
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| self.data[r][c].is_finite()))
    }
}

impl fmt::Debug for SmallMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = (0..self.rows).map(|r| &self.data[r][..self.cols]).collect();
        f.debug_list().entries(rows).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_componentwise() {
        let a = StateVec::pair(1.0, -2.0);
        let b = StateVec::pair(0.5, 4.0);
        assert_eq!(a + b, StateVec::pair(1.5, 2.0));
        assert_eq!(a - b, StateVec::pair(0.5, -6.0));
        assert_eq!(2.0 * a, StateVec::pair(2.0, -4.0));
        assert_eq!((a - b).norm1(), 6.5);
    }

    #[test]
    fn unused_slots_stay_zero() {
        let a = StateVec::scalar(3.0);
        let b = StateVec::scalar(3.0).map(|x| x * 1.0);
        assert_eq!(a, b);
        assert_eq!(a.as_slice(), &[3.0]);
    }

    #[test]
    fn matrix_vector_product() {
        let m = SmallMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(m.mul_vec(&StateVec::pair(1.0, 1.0)), StateVec::pair(3.0, 7.0));
        let col = SmallMatrix::from_rows(&[&[2.0], &[5.0]]);
        assert_eq!(col.mul_vec(&StateVec::scalar(0.5)), StateVec::pair(1.0, 2.5));
    }

    #[test]
    fn serde_rejects_oversized_vectors() {
        #[derive(Deserialize)]
        struct W {
            v: StateVec,
        }
        let ok: W = toml::from_str("v = [1.0, 2.0]").unwrap();
        assert_eq!(ok.v, StateVec::pair(1.0, 2.0));
        assert!(toml::from_str::<W>("v = [1.0, 2.0, 3.0]").is_err());
        assert!(toml::from_str::<W>("v = []").is_err());
    }
}
