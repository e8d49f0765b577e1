//! Cuboid math in quarter-turn frames.
//!
//! Every orientation in a scene is one of four cardinals, so a frame is an
//! origin plus an integer number of clockwise quarter-turns (viewed from
//! above, looking down the z axis). Rotations are therefore exact: they only
//! swap and negate horizontal components.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn get(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    pub fn set(&mut self, axis: Axis, value: f64) {
        match axis {
            Axis::X => self.x = value,
            Axis::Y => self.y = value,
            Axis::Z => self.z = value,
        }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(v: [f64; 3]) -> Self {
        Vec3::new(v[0], v[1], v[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// Cardinal orientation in the horizontal plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Facing {
    #[serde(rename = "X_NEG")]
    XNeg,
    #[serde(rename = "X_POS")]
    XPos,
    #[serde(rename = "Y_NEG")]
    YNeg,
    #[serde(rename = "Y_POS")]
    YPos,
}

impl Facing {
    /// Listing order used wherever all cardinals are enumerated.
    pub const ALL: [Facing; 4] = [Facing::XNeg, Facing::XPos, Facing::YNeg, Facing::YPos];

    /// Clockwise quarter-turns from `Y_POS`.
    pub fn quarter_turns(self) -> u8 {
        match self {
            Facing::YPos => 0,
            Facing::XPos => 1,
            Facing::YNeg => 2,
            Facing::XNeg => 3,
        }
    }

    pub fn from_quarter_turns(turns: u8) -> Facing {
        match turns % 4 {
            0 => Facing::YPos,
            1 => Facing::XPos,
            2 => Facing::YNeg,
            _ => Facing::XNeg,
        }
    }

    /// Rotate clockwise by `turns` quarter-turns.
    pub fn rotated_cw(self, turns: u8) -> Facing {
        Facing::from_quarter_turns((self.quarter_turns() + turns % 4) % 4)
    }

    pub fn rotated_ccw(self, turns: u8) -> Facing {
        Facing::from_quarter_turns((self.quarter_turns() + 4 - turns % 4) % 4)
    }

    pub fn unit(self) -> (f64, f64) {
        match self {
            Facing::XNeg => (-1.0, 0.0),
            Facing::XPos => (1.0, 0.0),
            Facing::YNeg => (0.0, -1.0),
            Facing::YPos => (0.0, 1.0),
        }
    }

    pub fn opposite(self) -> Facing {
        self.rotated_cw(2)
    }

    /// True for `X_POS`/`X_NEG`: the object's width then runs along y.
    pub fn is_along_x(self) -> bool {
        matches!(self, Facing::XNeg | Facing::XPos)
    }

    pub fn name(self) -> &'static str {
        match self {
            Facing::XNeg => "X_NEG",
            Facing::XPos => "X_POS",
            Facing::YNeg => "Y_NEG",
            Facing::YPos => "Y_POS",
        }
    }

    pub fn from_name(name: &str) -> Option<Facing> {
        Facing::ALL.into_iter().find(|f| f.name() == name)
    }
}

impl fmt::Display for Facing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Coordinate frame: an origin and a clockwise quarter-turn count.
///
/// Local +y points along the world cardinal `Facing::from_quarter_turns(rotation)`,
/// local +x is a further quarter-turn clockwise, local +z is world up.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub origin: Vec3,
    rotation: u8,
}

impl Default for Frame {
    fn default() -> Self {
        Frame::IDENTITY
    }
}

impl Frame {
    pub const IDENTITY: Frame = Frame {
        origin: Vec3::ZERO,
        rotation: 0,
    };

    pub fn new(origin: Vec3, rotation: u8) -> Self {
        Frame {
            origin,
            rotation: rotation % 4,
        }
    }

    /// Frame centered at `origin` with its y axis along `facing`.
    pub fn facing(origin: Vec3, facing: Facing) -> Self {
        Frame::new(origin, facing.quarter_turns())
    }

    pub fn rotation(&self) -> u8 {
        self.rotation
    }

    /// World facing → facing as seen in this frame.
    pub fn facing_to_frame(&self, world: Facing) -> Facing {
        world.rotated_ccw(self.rotation)
    }

    pub fn facing_from_frame(&self, local: Facing) -> Facing {
        local.rotated_cw(self.rotation)
    }
}

/// Rotate a horizontal vector clockwise by `turns` quarter-turns.
pub fn rotate_cw(x: f64, y: f64, turns: u8) -> (f64, f64) {
    match turns % 4 {
        0 => (x, y),
        1 => (y, -x),
        2 => (-x, -y),
        _ => (-y, x),
    }
}

pub fn to_frame(p: Vec3, f: &Frame) -> Vec3 {
    let d = p - f.origin;
    let (x, y) = rotate_cw(d.x, d.y, (4 - f.rotation) % 4);
    Vec3::new(x, y, d.z)
}

pub fn from_frame(p: Vec3, f: &Frame) -> Vec3 {
    let (x, y) = rotate_cw(p.x, p.y, f.rotation);
    Vec3::new(x, y, p.z) + f.origin
}

/// Nearest cardinal to the horizontal direction `(dx, dy)`.
///
/// Ties resolve in the order `X_POS`, `Y_POS`, `X_NEG`, `Y_NEG`. A zero
/// vector has no direction and yields `fallback`.
pub fn quantize_direction(dx: f64, dy: f64, fallback: Facing) -> Facing {
    if dx == 0.0 && dy == 0.0 {
        return fallback;
    }
    const ORDER: [Facing; 4] = [Facing::XPos, Facing::YPos, Facing::XNeg, Facing::YNeg];
    let mut best = ORDER[0];
    let mut best_dot = f64::NEG_INFINITY;
    for f in ORDER {
        let (ux, uy) = f.unit();
        let dot = ux * dx + uy * dy;
        if dot > best_dot {
            best = f;
            best_dot = dot;
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dims {
    pub width: f64,
    pub depth: f64,
    pub height: f64,
}

impl Dims {
    pub fn new(width: f64, depth: f64, height: f64) -> Self {
        Dims {
            width,
            depth,
            height,
        }
    }

    pub fn volume(&self) -> f64 {
        self.width * self.depth * self.height
    }

    /// Full extents along (x, y, z) of a cuboid with this facing.
    pub fn extents(&self, facing: Facing) -> Vec3 {
        if facing.is_along_x() {
            Vec3::new(self.depth, self.width, self.height)
        } else {
            Vec3::new(self.width, self.depth, self.height)
        }
    }
}

/// A cardinal-oriented box in world coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cuboid {
    pub dims: Dims,
    pub center: Vec3,
    pub facing: Facing,
}

impl Cuboid {
    pub fn aabb(&self) -> Aabb {
        aabb_of(self, &Frame::IDENTITY)
    }
}

/// Bounding box of `cuboid` expressed in `frame`.
pub fn aabb_of(cuboid: &Cuboid, frame: &Frame) -> Aabb {
    let local_facing = frame.facing_to_frame(cuboid.facing);
    let half = cuboid.dims.extents(local_facing) * 0.5;
    let c = to_frame(cuboid.center, frame);
    Aabb::new(c - half, c + half)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        debug_assert!(min.x <= max.x && min.y <= max.y && min.z <= max.z);
        Aabb { min, max }
    }

    pub fn from_center(center: Vec3, extents: Vec3) -> Self {
        let half = extents * 0.5;
        Aabb::new(center - half, center + half)
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn extent(&self, axis: Axis) -> f64 {
        self.max.get(axis) - self.min.get(axis)
    }

    pub fn volume(&self) -> f64 {
        self.extent(Axis::X) * self.extent(Axis::Y) * self.extent(Axis::Z)
    }

    pub fn footprint_area(&self) -> f64 {
        self.extent(Axis::X) * self.extent(Axis::Y)
    }

    /// Length of the overlap of the two boxes' projections on `axis`, ≥ 0.
    pub fn overlap_along(&self, other: &Aabb, axis: Axis) -> f64 {
        let lo = self.min.get(axis).max(other.min.get(axis));
        let hi = self.max.get(axis).min(other.max.get(axis));
        (hi - lo).max(0.0)
    }
}

pub fn intersection_volume(a: &Aabb, b: &Aabb) -> f64 {
    a.overlap_along(b, Axis::X) * a.overlap_along(b, Axis::Y) * a.overlap_along(b, Axis::Z)
}

/// Area of the intersection of the two boxes' xy projections.
pub fn footprint_overlap_area(a: &Aabb, b: &Aabb) -> f64 {
    a.overlap_along(b, Axis::X) * a.overlap_along(b, Axis::Y)
}
