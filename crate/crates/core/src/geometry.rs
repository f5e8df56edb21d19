//! Planar pose algebra: relative poses, the global→local frame alignment that
//! turns consecutive displacement vectors into forward/lateral motion `(dx, dy)`,
//! and the left-positive sign convention used everywhere downstream.

use std::f64::consts::PI;

use thiserror::Error;

/// Norm threshold below which a displacement vector is considered degenerate.
pub const EPS_ZERO: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("displacement vector norm {norm:.3e} m is below the degeneracy threshold")]
    DegenerateVector { norm: f64 },
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },
}

/// Normalizes an angle to the half-open interval (−π, π].
pub fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// A planar vehicle/camera pose: position in meters, heading in radians.
///
/// Headings are kept in (−π, π] by every constructor and operation, and all
/// fields are guaranteed finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPose {
    x: f64,
    y: f64,
    heading: f64,
}

impl PlanarPose {
    pub fn new(x: f64, y: f64, heading: f64) -> Result<Self, GeometryError> {
        if !(x.is_finite() && y.is_finite() && heading.is_finite()) {
            return Err(GeometryError::NonFinite {
                context: "PlanarPose",
            });
        }
        Ok(Self {
            x,
            y,
            heading: wrap_angle(heading),
        })
    }

    pub fn origin() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            heading: 0.0,
        }
    }

    /// Internal constructor for values already known finite.
    pub(crate) fn from_parts(x: f64, y: f64, heading: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite() && heading.is_finite());
        Self {
            x,
            y,
            heading: wrap_angle(heading),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn heading(&self) -> f64 {
        self.heading
    }

    /// Position as a displacement vector from the world origin.
    pub fn position(&self) -> PlanarVec {
        PlanarVec {
            vx: self.x,
            vy: self.y,
        }
    }

    /// Composes this pose with a pose expressed in its local frame:
    /// `a.compose(relative_pose(a, b)) == b`.
    pub fn compose(&self, local: &PlanarPose) -> PlanarPose {
        let (sin_h, cos_h) = self.heading.sin_cos();
        PlanarPose::from_parts(
            self.x + cos_h * local.x - sin_h * local.y,
            self.y + sin_h * local.x + cos_h * local.y,
            self.heading + local.heading,
        )
    }

    /// Euclidean distance between the positions of two poses.
    pub fn distance(&self, other: &PlanarPose) -> f64 {
        ((other.x - self.x).powi(2) + (other.y - self.y).powi(2)).sqrt()
    }
}

/// A displacement vector in the ground plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarVec {
    vx: f64,
    vy: f64,
}

impl PlanarVec {
    pub fn new(vx: f64, vy: f64) -> Result<Self, GeometryError> {
        if !(vx.is_finite() && vy.is_finite()) {
            return Err(GeometryError::NonFinite {
                context: "PlanarVec",
            });
        }
        Ok(Self { vx, vy })
    }

    pub(crate) fn from_parts(vx: f64, vy: f64) -> Self {
        debug_assert!(vx.is_finite() && vy.is_finite());
        Self { vx, vy }
    }

    /// Displacement from pose `from` to pose `to`, in the global frame.
    pub fn between(from: &PlanarPose, to: &PlanarPose) -> Self {
        Self {
            vx: to.x() - from.x(),
            vy: to.y() - from.y(),
        }
    }

    pub fn vx(&self) -> f64 {
        self.vx
    }

    pub fn vy(&self) -> f64 {
        self.vy
    }

    pub fn norm(&self) -> f64 {
        self.vx.hypot(self.vy)
    }

    /// 2D cross product; positive when `other` lies to the left of `self`.
    pub fn cross(&self, other: &PlanarVec) -> f64 {
        self.vx * other.vy - self.vy * other.vx
    }

    pub fn dot(&self, other: &PlanarVec) -> f64 {
        self.vx * other.vx + self.vy * other.vy
    }

    /// Rotates the vector counterclockwise by `theta` radians.
    pub fn rotate(&self, theta: f64) -> PlanarVec {
        let (sin_t, cos_t) = theta.sin_cos();
        PlanarVec {
            vx: cos_t * self.vx - sin_t * self.vy,
            vy: sin_t * self.vx + cos_t * self.vy,
        }
    }
}

/// Motion of one labeling step expressed in the local frame: `dx` forward,
/// `dy` lateral with left positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeMotion {
    pub dx: f64,
    pub dy: f64,
}

/// Pose of `to` expressed in the local frame of `from`.
///
/// Inverse of [`PlanarPose::compose`]: `from.compose(&relative_pose(from, to))`
/// reproduces `to` exactly.
pub fn relative_pose(from: &PlanarPose, to: &PlanarPose) -> PlanarPose {
    let (sin_h, cos_h) = from.heading().sin_cos();
    let dx = to.x() - from.x();
    let dy = to.y() - from.y();
    PlanarPose::from_parts(
        cos_h * dx + sin_h * dy,
        -sin_h * dx + cos_h * dy,
        to.heading() - from.heading(),
    )
}

/// Angle θ such that rotating `v` by θ aligns it with the positive x-axis:
/// `v.rotate(θ) == (‖v‖, 0)`.
pub fn align_rotation(v: &PlanarVec) -> Result<f64, GeometryError> {
    let norm = v.norm();
    if norm <= EPS_ZERO {
        return Err(GeometryError::DegenerateVector { norm });
    }
    Ok(wrap_angle(-v.vy().atan2(v.vx())))
}

/// Rotates `v_curr` into the local frame aligned with `v_prev`, yielding the
/// forward/lateral motion `(dx, dy)`.
///
/// `dy > 0` exactly when `v_curr` lies left of the ray along `v_prev`
/// (`v_prev × v_curr > 0`); the rotation is orthogonal, so
/// `dx² + dy² = ‖v_curr‖²`.
pub fn local_motion(v_prev: &PlanarVec, v_curr: &PlanarVec) -> Result<RelativeMotion, GeometryError> {
    let theta = align_rotation(v_prev)?;
    let aligned = v_curr.rotate(theta);
    Ok(RelativeMotion {
        dx: aligned.vx(),
        dy: aligned.vy(),
    })
}
