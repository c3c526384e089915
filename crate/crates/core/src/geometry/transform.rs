use super::{GeometryError, Quat, Vec3};

/// Tolerance on the quaternion norm and ray direction length.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// A half-line with unit-length direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: Vec3,
    pub direction: Vec3,
}

impl Ray {
    /// Builds a ray, normalizing `direction`.
    pub fn new(origin: Vec3, direction: Vec3) -> Result<Self, GeometryError> {
        if !origin.is_finite() || !direction.is_finite() {
            return Err(GeometryError::NonFinite("ray"));
        }
        let direction = direction.try_normalize().ok_or(GeometryError::ZeroDirection)?;
        Ok(Self { origin, direction })
    }

    pub fn at(&self, t: f64) -> Vec3 {
        self.origin + self.direction * t
    }
}

/// Translation, rotation and positive per-axis scale; applied as scale, then rotate, then translate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    pub translation: Vec3,
    pub rotation: Quat,
    pub scale: Vec3,
}

impl Default for Transform {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Transform {
    pub const IDENTITY: Self = Self { translation: Vec3::ZERO, rotation: Quat::IDENTITY, scale: Vec3::splat(1.0) };

    pub fn from_translation(translation: Vec3) -> Self {
        Self { translation, ..Self::IDENTITY }
    }

    pub fn new(translation: Vec3, rotation: Quat, scale: Vec3) -> Result<Self, GeometryError> {
        let t = Self { translation, rotation, scale };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let q = self.rotation;
        if !self.translation.is_finite()
            || !self.scale.is_finite()
            || !(q.x.is_finite() && q.y.is_finite() && q.z.is_finite() && q.w.is_finite())
        {
            return Err(GeometryError::NonFinite("transform"));
        }
        if (q.norm() - 1.0).abs() > UNIT_TOLERANCE {
            return Err(GeometryError::NonUnitQuaternion(q.norm()));
        }
        if self.scale.x <= 0.0 || self.scale.y <= 0.0 || self.scale.z <= 0.0 {
            return Err(GeometryError::NonPositiveScale);
        }
        Ok(())
    }

    pub fn apply_point(&self, p: Vec3) -> Vec3 {
        self.rotation.rotate(p.mul_elem(self.scale)) + self.translation
    }

    pub fn apply_vector(&self, v: Vec3) -> Vec3 {
        self.rotation.rotate(v.mul_elem(self.scale))
    }

    /// Maps a surface normal (inverse-transpose of the linear part), renormalized.
    pub fn apply_normal(&self, n: Vec3) -> Vec3 {
        self.rotation.rotate(n.div_elem(self.scale)).try_normalize().unwrap_or(n)
    }
}
