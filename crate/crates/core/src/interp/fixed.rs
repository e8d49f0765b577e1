//! Exact positional arithmetic.
//!
//! World positions are stored as integer multiples of 2^-96 m. Every finite
//! double of magnitude in [2^-44, 2^30) lies on this grid, so translating by
//! written values and reading them back through frame offsets is exact.

use std::ops::{Add, Neg, Sub};

use crate::geometry::{Axis, Vec3};

const FRACTION_BITS: i32 = 96;
/// Largest admissible coordinate magnitude in meters.
pub const COORD_LIMIT: f64 = 1073741824.0; // 2^30

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixed(i128);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutOfRange(pub f64);

impl Fixed {
    pub const ZERO: Fixed = Fixed(0);

    pub fn from_f64(v: f64) -> Result<Fixed, OutOfRange> {
        if !v.is_finite() || v.abs() >= COORD_LIMIT {
            return Err(OutOfRange(v));
        }
        let scaled = (v * 2f64.powi(FRACTION_BITS)).round();
        Ok(Fixed(scaled as i128))
    }

    /// Nearest double (round-half-even via the integer conversion).
    pub fn to_f64(self) -> f64 {
        (self.0 as f64) * 2f64.powi(-FRACTION_BITS)
    }
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(self, o: Fixed) -> Fixed {
        Fixed(self.0 + o.0)
    }
}

impl Sub for Fixed {
    type Output = Fixed;
    fn sub(self, o: Fixed) -> Fixed {
        Fixed(self.0 - o.0)
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-self.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FixedVec3 {
    pub x: Fixed,
    pub y: Fixed,
    pub z: Fixed,
}

impl FixedVec3 {
    pub fn from_vec3(v: Vec3) -> Result<Self, OutOfRange> {
        Ok(FixedVec3 {
            x: Fixed::from_f64(v.x)?,
            y: Fixed::from_f64(v.y)?,
            z: Fixed::from_f64(v.z)?,
        })
    }

    pub fn to_vec3(self) -> Vec3 {
        Vec3::new(self.x.to_f64(), self.y.to_f64(), self.z.to_f64())
    }

    pub fn get(&self, axis: Axis) -> Fixed {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    pub fn set(&mut self, axis: Axis, v: Fixed) {
        match axis {
            Axis::X => self.x = v,
            Axis::Y => self.y = v,
            Axis::Z => self.z = v,
        }
    }

    /// Clockwise quarter-turns in the horizontal plane.
    pub fn rotated_cw(self, turns: u8) -> Self {
        let (x, y) = match turns % 4 {
            0 => (self.x, self.y),
            1 => (self.y, -self.x),
            2 => (-self.x, -self.y),
            _ => (-self.y, self.x),
        };
        FixedVec3 { x, y, z: self.z }
    }
}

impl Add for FixedVec3 {
    type Output = FixedVec3;
    fn add(self, o: FixedVec3) -> FixedVec3 {
        FixedVec3 {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }
}

impl Sub for FixedVec3 {
    type Output = FixedVec3;
    fn sub(self, o: FixedVec3) -> FixedVec3 {
        FixedVec3 {
            x: self.x - o.x,
            y: self.y - o.y,
            z: self.z - o.z,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubles_round_trip() {
        for v in [0.0, 0.1, -0.1, 1.0 / 3.0, 12345.678, -7.25e-9, 1e8] {
            assert_eq!(Fixed::from_f64(v).unwrap().to_f64(), v);
        }
        assert!(Fixed::from_f64(f64::NAN).is_err());
        assert!(Fixed::from_f64(2e9).is_err());
    }

    #[test]
    fn offsets_are_exact() {
        let o = Fixed::from_f64(2.3).unwrap();
        let v = Fixed::from_f64(0.1).unwrap();
        assert_eq!(((v + o) - o).to_f64(), 0.1);
    }
}
