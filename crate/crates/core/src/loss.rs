//! Layout loss: out-of-bounds, overlap, standing support and wall mounting.
//!
//! Every term is measured in meters. An item whose magnitude exceeds
//! [`ERROR_THRESHOLD`] counts as one layout error.

use serde::{Deserialize, Serialize};

use crate::geometry::{footprint_overlap_area, Aabb, Axis, Facing};
use crate::interp::{Layout, ObjectState, Support};

/// Items above this magnitude (m) count as errors.
pub const ERROR_THRESHOLD: f64 = 0.01;
/// Vertical interpenetration ignored between a stander and its support (m).
pub const CONTACT_TOLERANCE: f64 = 1e-4;
/// Fraction of a stander's footprint a surface must cover to support it.
pub const SUPPORT_COVERAGE: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectItem {
    pub object: String,
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairItem {
    pub a: String,
    pub b: String,
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term<I> {
    pub total: f64,
    pub items: Vec<I>,
}

impl<I> Default for Term<I> {
    fn default() -> Self {
        Term {
            total: 0.0,
            items: Vec::new(),
        }
    }
}

pub trait Magnitude {
    fn magnitude(&self) -> f64;
}

impl Magnitude for ObjectItem {
    fn magnitude(&self) -> f64 {
        self.magnitude
    }
}

impl Magnitude for PairItem {
    fn magnitude(&self) -> f64 {
        self.magnitude
    }
}

impl<I: Magnitude> Term<I> {
    fn push(&mut self, item: I) {
        let m = item.magnitude();
        self.total += m;
        if m > 0.0 {
            self.items.push(item);
        }
    }

    pub fn error_count(&self) -> usize {
        self.items
            .iter()
            .filter(|i| i.magnitude() > ERROR_THRESHOLD)
            .count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    pub out_of_bounds: Term<ObjectItem>,
    pub overlap: Term<PairItem>,
    pub standing: Term<ObjectItem>,
    pub mounted: Term<ObjectItem>,
    pub total: f64,
    pub error_count: usize,
}

impl LossReport {
    /// Ids of every object involved in an item above the error threshold.
    pub fn violating_objects(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = Vec::new();
        fn add<'a>(id: &'a str, ids: &mut Vec<&'a str>) {
            if !ids.contains(&id) {
                ids.push(id);
            }
        }
        for term in [&self.out_of_bounds, &self.standing, &self.mounted] {
            for i in term.items.iter().filter(|i| i.magnitude > ERROR_THRESHOLD) {
                add(&i.object, &mut ids);
            }
        }
        for i in self.overlap.items.iter().filter(|i| i.magnitude > ERROR_THRESHOLD) {
            add(&i.a, &mut ids);
            add(&i.b, &mut ids);
        }
        ids
    }
}

fn is_opening(name: &str) -> bool {
    let lower = name.to_lowercase();
    lower.contains("door") || lower.contains("window")
}

/// Box used for overlap tests.
///
/// Doors and windows get their box extended on the facing side by their own
/// width, reserving the space in front of the opening.
pub fn collision_box(o: &ObjectState) -> Aabb {
    let mut b = o.aabb();
    if is_opening(&o.name) {
        match o.facing {
            Facing::XPos => b.max.x += o.width,
            Facing::XNeg => b.min.x -= o.width,
            Facing::YPos => b.max.y += o.width,
            Facing::YNeg => b.min.y -= o.width,
        }
    }
    b
}

/// Largest protrusion of `b` beyond the scene cuboid, 0 when inside.
fn protrusion(b: &Aabb, scene: &Aabb) -> f64 {
    let mut worst = 0.0f64;
    for axis in Axis::ALL {
        worst = worst
            .max(scene.min.get(axis) - b.min.get(axis))
            .max(b.max.get(axis) - scene.max.get(axis));
    }
    worst
}

pub fn out_of_bounds_loss(l: &Layout) -> Term<ObjectItem> {
    let scene = l.bounds();
    let mut term = Term::default();
    for o in &l.objects {
        term.push(ObjectItem {
            object: o.id.clone(),
            magnitude: protrusion(&o.aabb(), &scene).max(0.0),
        });
    }
    term
}

fn rests_on(top: &ObjectState, top_box: &Aabb, bottom_box: &Aabb) -> bool {
    top.support == Support::Standing
        && (top_box.min.z - bottom_box.max.z).abs() <= CONTACT_TOLERANCE
}

struct Boxes {
    raw: Vec<Aabb>,
    collision: Vec<Aabb>,
}

impl Boxes {
    fn of(l: &Layout) -> Self {
        Boxes {
            raw: l.objects.iter().map(ObjectState::aabb).collect(),
            collision: l.objects.iter().map(collision_box).collect(),
        }
    }
}

fn overlap_between(l: &Layout, boxes: &Boxes, i: usize, j: usize) -> f64 {
    let (a, b) = (&l.objects[i], &l.objects[j]);
    let (ca, cb) = (&boxes.collision[i], &boxes.collision[j]);
    let dx = ca.overlap_along(cb, Axis::X);
    if dx == 0.0 {
        return 0.0;
    }
    let dy = ca.overlap_along(cb, Axis::Y);
    if dy == 0.0 {
        return 0.0;
    }
    let mut dz = ca.overlap_along(cb, Axis::Z);
    let (ra, rb) = (&boxes.raw[i], &boxes.raw[j]);
    if rests_on(a, ra, rb) || rests_on(b, rb, ra) {
        dz = (dz - CONTACT_TOLERANCE).max(0.0);
    }
    (dx * dy * dz).cbrt()
}

/// Cube root of the collision-box intersection volume of one pair.
pub fn pair_overlap(a: &ObjectState, b: &ObjectState) -> f64 {
    let l = Layout {
        name: String::new(),
        dims: crate::geometry::Dims::new(1.0, 1.0, 1.0),
        objects: vec![a.clone(), b.clone()],
    };
    overlap_between(&l, &Boxes::of(&l), 0, 1)
}

pub fn overlap_loss(l: &Layout) -> Term<PairItem> {
    let boxes = Boxes::of(l);
    let mut term = Term::default();
    let n = l.objects.len();
    for i in 0..n {
        for j in i + 1..n {
            term.push(PairItem {
                a: l.objects[i].id.clone(),
                b: l.objects[j].id.clone(),
                magnitude: overlap_between(l, &boxes, i, j),
            });
        }
    }
    term
}

/// Distance from the bottom of standing object `i` to its nearest support.
fn support_gap(i: usize, boxes: &[Aabb], floor: f64) -> f64 {
    let b = &boxes[i];
    let needed = SUPPORT_COVERAGE * b.footprint_area();
    let mut best = (b.min.z - floor).abs();
    for (j, other) in boxes.iter().enumerate() {
        if j != i && footprint_overlap_area(b, other) >= needed {
            best = best.min((b.min.z - other.max.z).abs());
        }
    }
    best
}

pub fn standing_loss(l: &Layout) -> Term<ObjectItem> {
    let floor = l.bounds().min.z;
    let boxes: Vec<Aabb> = l.objects.iter().map(ObjectState::aabb).collect();
    let mut term = Term::default();
    for (i, o) in l.objects.iter().enumerate() {
        if o.support == Support::Standing {
            term.push(ObjectItem {
                object: o.id.clone(),
                magnitude: support_gap(i, &boxes, floor),
            });
        }
    }
    term
}

fn positive_overlap(a: &Aabb, b: &Aabb, axis: Axis) -> bool {
    a.overlap_along(b, axis) > 0.0
}

/// Distance from the back face of mounted object `i` to the nearest
/// parallel wall or object face whose projection overlaps it.
fn mount_gap(i: usize, facing: Facing, boxes: &[Aabb], scene: &Aabb) -> f64 {
    let b = &boxes[i];
    let (normal, across) = if facing.is_along_x() {
        (Axis::X, Axis::Y)
    } else {
        (Axis::Y, Axis::X)
    };
    let back = match facing {
        Facing::XPos | Facing::YPos => b.min.get(normal),
        Facing::XNeg | Facing::YNeg => b.max.get(normal),
    };
    let mut best = (back - scene.min.get(normal))
        .abs()
        .min((back - scene.max.get(normal)).abs());
    for (j, other) in boxes.iter().enumerate() {
        if j == i || !positive_overlap(b, other, across) || !positive_overlap(b, other, Axis::Z) {
            continue;
        }
        for plane in [other.min.get(normal), other.max.get(normal)] {
            best = best.min((back - plane).abs());
        }
    }
    best
}

pub fn mounted_loss(l: &Layout) -> Term<ObjectItem> {
    let scene = l.bounds();
    let boxes: Vec<Aabb> = l.objects.iter().map(ObjectState::aabb).collect();
    let mut term = Term::default();
    for (i, o) in l.objects.iter().enumerate() {
        if o.support == Support::WallMounted {
            term.push(ObjectItem {
                object: o.id.clone(),
                magnitude: mount_gap(i, o.facing, &boxes, &scene),
            });
        }
    }
    term
}

pub fn total_loss(l: &Layout) -> LossReport {
    let out_of_bounds = out_of_bounds_loss(l);
    let overlap = overlap_loss(l);
    let standing = standing_loss(l);
    let mounted = mounted_loss(l);
    let total = out_of_bounds.total + overlap.total + standing.total + mounted.total;
    let error_count = out_of_bounds.error_count()
        + overlap.error_count()
        + standing.error_count()
        + mounted.error_count();
    LossReport {
        out_of_bounds,
        overlap,
        standing,
        mounted,
        total,
        error_count,
    }
}

/// `total_loss(l).total` without building item lists. Summation order
/// matches the report, so the two agree bit for bit.
pub fn loss_value(l: &Layout) -> f64 {
    let scene = l.bounds();
    let boxes = Boxes::of(l);
    let n = l.objects.len();
    let oob: f64 = boxes.raw.iter().fold(0.0, |acc, b| acc + protrusion(b, &scene).max(0.0));
    let mut overlap = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            overlap += overlap_between(l, &boxes, i, j);
        }
    }
    let mut standing = 0.0;
    let mut mounted = 0.0;
    for (i, o) in l.objects.iter().enumerate() {
        match o.support {
            Support::Standing => standing += support_gap(i, &boxes.raw, scene.min.z),
            Support::WallMounted => mounted += mount_gap(i, o.facing, &boxes.raw, &scene),
            Support::Floating => {}
        }
    }
    oob + overlap + standing + mounted
}
