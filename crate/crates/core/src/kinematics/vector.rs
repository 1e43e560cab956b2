use nalgebra::{Vector3, Vector4};

/// Spatial vector (length, or a dimensionless velocity with `c = 1`).
pub type ThreeVector = Vector3<f64>;

/// Index position of a four-vector's components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Contravariant,
    Covariant,
}

/// Four components in one inertial frame together with their index position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourVector {
    pub components: Vector4<f64>,
    pub variance: Variance,
}

impl FourVector {
    pub fn contravariant(t0: f64, spatial: ThreeVector) -> Self {
        Self {
            components: Vector4::new(t0, spatial.x, spatial.y, spatial.z),
            variance: Variance::Contravariant,
        }
    }

    pub fn covariant(t0: f64, spatial: ThreeVector) -> Self {
        Self {
            components: Vector4::new(t0, spatial.x, spatial.y, spatial.z),
            variance: Variance::Covariant,
        }
    }

    pub fn event(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self::contravariant(t, ThreeVector::new(x, y, z))
    }

    pub fn from_array(c: [f64; 4], variance: Variance) -> Self {
        Self {
            components: Vector4::from(c),
            variance,
        }
    }

    pub fn t0(&self) -> f64 {
        self.components[0]
    }

    pub fn spatial(&self) -> ThreeVector {
        ThreeVector::new(self.components[1], self.components[2], self.components[3])
    }

    pub fn is_contravariant(&self) -> bool {
        self.variance == Variance::Contravariant
    }

    pub fn to_array(&self) -> [f64; 4] {
        self.components.into()
    }
}
