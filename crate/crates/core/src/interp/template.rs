use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::geometry::{Cuboid, Dims, Facing, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Support {
    Standing,
    WallMounted,
    Floating,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemplateObject {
    pub id: String,
    pub name: String,
    pub width: f64,
    pub depth: f64,
    pub height: f64,
    pub support: Support,
}

impl TemplateObject {
    pub fn dims(&self) -> Dims {
        Dims::new(self.width, self.depth, self.height)
    }
}

/// Scene dimensions and the fixed list of objects a program places.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneTemplate {
    pub name: String,
    pub dims: Dims,
    pub objects: Vec<TemplateObject>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TemplateError {
    #[error("scene dimensions must be positive")]
    SceneDims,
    #[error("object `{0}` has non-positive dimensions")]
    ObjectDims(String),
    #[error("duplicate object id `{0}`")]
    DuplicateId(String),
}

impl SceneTemplate {
    pub fn validate(&self) -> Result<(), TemplateError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.dims.width) && positive(self.dims.depth) && positive(self.dims.height))
        {
            return Err(TemplateError::SceneDims);
        }
        let mut seen = HashSet::new();
        for o in &self.objects {
            if !(positive(o.width) && positive(o.depth) && positive(o.height)) {
                return Err(TemplateError::ObjectDims(o.id.clone()));
            }
            if !seen.insert(o.id.as_str()) {
                return Err(TemplateError::DuplicateId(o.id.clone()));
            }
        }
        Ok(())
    }

    /// World-space scene cuboid: centered on the origin, floor at z = 0.
    pub fn bounds(&self) -> crate::geometry::Aabb {
        scene_bounds(&self.dims)
    }
}

pub fn scene_bounds(dims: &Dims) -> crate::geometry::Aabb {
    crate::geometry::Aabb::new(
        Vec3::new(-dims.width / 2.0, -dims.depth / 2.0, 0.0),
        Vec3::new(dims.width / 2.0, dims.depth / 2.0, dims.height),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectState {
    pub id: String,
    pub name: String,
    pub width: f64,
    pub depth: f64,
    pub height: f64,
    pub support: Support,
    pub center: Vec3,
    pub facing: Facing,
    #[serde(default)]
    pub placed: bool,
}

impl ObjectState {
    pub fn dims(&self) -> Dims {
        Dims::new(self.width, self.depth, self.height)
    }

    pub fn cuboid(&self) -> Cuboid {
        Cuboid {
            dims: self.dims(),
            center: self.center,
            facing: self.facing,
        }
    }

    pub fn aabb(&self) -> crate::geometry::Aabb {
        self.cuboid().aabb()
    }

    pub fn volume(&self) -> f64 {
        self.dims().volume()
    }
}

/// Final world placement of every template object, in template order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub name: String,
    pub dims: Dims,
    pub objects: Vec<ObjectState>,
}

impl Layout {
    pub fn bounds(&self) -> crate::geometry::Aabb {
        scene_bounds(&self.dims)
    }

    /// True when centers and facings agree bit for bit.
    pub fn same_placement(&self, other: &Layout) -> bool {
        self.objects.len() == other.objects.len()
            && self.objects.iter().zip(&other.objects).all(|(a, b)| {
                a.id == b.id
                    && a.center.x.to_bits() == b.center.x.to_bits()
                    && a.center.y.to_bits() == b.center.y.to_bits()
                    && a.center.z.to_bits() == b.center.z.to_bits()
                    && a.facing == b.facing
            })
    }
}
