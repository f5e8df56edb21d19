//! Bicycle-model kinematics and dynamics: exact constant-curvature stepping,
//! the steering law `δ = atan(α·dy)`, the Ackermann front-wheel split, and a
//! linear single-track slip model for high-speed degradation studies.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::PlanarPose;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VehicleError {
    #[error("invalid step: dt = {dt} must be positive")]
    InvalidStep { dt: f64 },
    #[error("invalid vehicle parameters: {0}")]
    InvalidParams(String),
}

/// Steering lag time constant for the commanded-speed throttle model.
pub const SPEED_LAG_TAU: f64 = 0.5;

/// Below this speed the slip model is singular and the dynamic step falls
/// back to the kinematic one.
pub const SLIP_MIN_SPEED: f64 = 0.1;

/// Fraction of the wheelbase between the center of gravity and the front
/// axle; the front-biased mass distribution makes the single-track model
/// understeer at speed.
const CG_FRONT_FRACTION: f64 = 0.4;

/// Physical vehicle parameters.
///
/// The dynamic-model fields (`cornering_stiffness`, `mass`, `yaw_inertia`)
/// are ignored by the kinematic step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VehicleParams {
    /// Distance between rear and front axles, meters.
    pub wheelbase: f64,
    /// Distance between the two front wheels, meters.
    pub track_width: f64,
    /// Steering clamp, radians.
    pub max_steer: f64,
    /// Linear tire stiffness per axle, newtons per radian of slip.
    pub cornering_stiffness: f64,
    /// Vehicle mass, kilograms.
    pub mass: f64,
    /// Yaw moment of inertia, kg·m².
    pub yaw_inertia: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            wheelbase: 2.5,
            track_width: 1.5,
            max_steer: 70.0_f64.to_radians(),
            cornering_stiffness: 8.0e4,
            mass: 1500.0,
            yaw_inertia: 2500.0,
        }
    }
}

impl VehicleParams {
    pub fn validate(&self) -> Result<(), VehicleError> {
        let positive = [
            ("wheelbase", self.wheelbase),
            ("track_width", self.track_width),
            ("max_steer", self.max_steer),
            ("cornering_stiffness", self.cornering_stiffness),
            ("mass", self.mass),
            ("yaw_inertia", self.yaw_inertia),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(VehicleError::InvalidParams(format!(
                    "{name} = {v} must be finite and positive"
                )));
            }
        }
        if self.max_steer >= std::f64::consts::FRAC_PI_2 {
            return Err(VehicleError::InvalidParams(format!(
                "max_steer = {} must be below π/2",
                self.max_steer
            )));
        }
        Ok(())
    }

    pub fn clamp_steer(&self, steer: f64) -> f64 {
        steer.clamp(-self.max_steer, self.max_steer)
    }
}

/// Bicycle-model state advanced by the simulator. The pose tracks the rear
/// axle; `lateral_velocity` and `yaw_rate` are zero in kinematic mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleState {
    pub pose: PlanarPose,
    /// Longitudinal speed, m/s (≥ 0).
    pub speed: f64,
    /// Lateral velocity of the rear axle in the body frame, m/s.
    pub lateral_velocity: f64,
    /// Yaw rate, rad/s.
    pub yaw_rate: f64,
}

impl VehicleState {
    pub fn at_speed(pose: PlanarPose, speed: f64) -> Self {
        Self {
            pose,
            speed: speed.max(0.0),
            lateral_velocity: 0.0,
            yaw_rate: 0.0,
        }
    }
}

/// Diagnostics of one kinematic step along a constant-curvature arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcMotion {
    /// Distance traveled along the arc, meters.
    pub arc_length: f64,
    /// Heading change Δφ over the step, radians.
    pub heading_change: f64,
    /// Signed turn radius `wheelbase / tan(δ)` (positive = left turn);
    /// `None` for the straight-line case.
    pub turn_radius: Option<f64>,
}

/// Front-wheel steering angles of the Ackermann split, radians,
/// left-positive like every other angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AckermannAngles {
    pub left: f64,
    pub right: f64,
}

impl AckermannAngles {
    pub fn mean(&self) -> f64 {
        0.5 * (self.left + self.right)
    }
}

/// Steering law `δ = atan(dy · α)`. The result is unclamped; apply
/// [`VehicleParams::clamp_steer`] before commanding a vehicle.
pub fn steering_from_lateral(dy: f64, alpha: f64) -> f64 {
    debug_assert!(alpha > 0.0);
    (dy * alpha).atan()
}

/// The gain that makes the steering law exact for frame pairs spaced `dx`
/// apart: `α = wheelbase / dx²`.
pub fn canonical_alpha(params: &VehicleParams, dx: f64) -> f64 {
    assert!(dx > 0.0, "canonical_alpha requires dx > 0, got {dx}");
    params.wheelbase / (dx * dx)
}

/// Exact speed-lag update over one step: the commanded speed is approached
/// with a first-order lag of time constant [`SPEED_LAG_TAU`]. Returns the
/// end-of-step speed and the distance covered during the step.
fn speed_lag(speed: f64, target: f64, dt: f64) -> (f64, f64) {
    let target = target.max(0.0);
    let decay = (-dt / SPEED_LAG_TAU).exp();
    let new_speed = target + (speed - target) * decay;
    let distance = target * dt + (speed - target) * SPEED_LAG_TAU * (1.0 - decay);
    (new_speed, distance)
}

/// Advances the rear-axle pose along the exact constant-curvature arc for
/// one step (closed form, not Euler), so constant-input stepping is
/// step-size invariant.
pub fn step_kinematic(
    state: &VehicleState,
    steer: f64,
    throttle_speed: f64,
    dt: f64,
    params: &VehicleParams,
) -> Result<(VehicleState, ArcMotion), VehicleError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(VehicleError::InvalidStep { dt });
    }
    let steer = params.clamp_steer(steer);
    let (new_speed, arc_length) = speed_lag(state.speed, throttle_speed, dt);
    let curvature = steer.tan() / params.wheelbase;
    let heading_change = curvature * arc_length;
    if heading_change.abs() > std::f64::consts::PI {
        return Err(VehicleError::InvalidStep { dt });
    }

    let h = state.pose.heading();
    let pose = if curvature.abs() < 1e-12 {
        PlanarPose::from_parts(
            state.pose.x() + arc_length * h.cos(),
            state.pose.y() + arc_length * h.sin(),
            h,
        )
    } else {
        let h1 = h + heading_change;
        PlanarPose::from_parts(
            state.pose.x() + (h1.sin() - h.sin()) / curvature,
            state.pose.y() + (h.cos() - h1.cos()) / curvature,
            h1,
        )
    };

    let turn_radius = if curvature.abs() < 1e-12 {
        None
    } else {
        Some(params.wheelbase / steer.tan())
    };
    let new_state = VehicleState {
        pose,
        speed: new_speed,
        lateral_velocity: 0.0,
        yaw_rate: if dt > 0.0 { heading_change / dt } else { 0.0 },
    };
    Ok((
        new_state,
        ArcMotion {
            arc_length,
            heading_change,
            turn_radius,
        },
    ))
}

/// Lateral dynamics integrated by RK4: `[x, y, heading, w, r]` where `w` is
/// the lateral velocity of the rear axle and `r` the yaw rate. Longitudinal
/// speed is held constant within the step.
fn slip_derivatives(
    s: &[f64; 5],
    vx: f64,
    steer: f64,
    params: &VehicleParams,
) -> [f64; 5] {
    let a = CG_FRONT_FRACTION * params.wheelbase; // CG → front axle
    let b = params.wheelbase - a; // CG → rear axle
    let [_, _, heading, w, r] = *s;

    let slip_front = (w + params.wheelbase * r).atan2(vx) - steer;
    let slip_rear = w.atan2(vx);
    let force_front = -params.cornering_stiffness * slip_front;
    let force_rear = -params.cornering_stiffness * slip_rear;

    let yaw_accel = (a * force_front - b * force_rear) / params.yaw_inertia;
    let lat_accel_cg = (force_front + force_rear) / params.mass - vx * r;
    let w_dot = lat_accel_cg - b * yaw_accel;

    [
        vx * heading.cos() - w * heading.sin(),
        vx * heading.sin() + w * heading.cos(),
        r,
        w_dot,
        yaw_accel,
    ]
}

fn rk4(s: &[f64; 5], h: f64, f: impl Fn(&[f64; 5]) -> [f64; 5]) -> [f64; 5] {
    let k1 = f(s);
    let k2 = f(&std::array::from_fn(|i| s[i] + 0.5 * h * k1[i]));
    let k3 = f(&std::array::from_fn(|i| s[i] + 0.5 * h * k2[i]));
    let k4 = f(&std::array::from_fn(|i| s[i] + h * k3[i]));
    std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Advances the state with the linear single-track tire model.
///
/// Converges to [`step_kinematic`] as the cornering stiffness grows (zero
/// slip makes the yaw rate exactly `v·tan δ / L`) and falls back to it below
/// [`SLIP_MIN_SPEED`], where the slip model is singular.
pub fn step_dynamic(
    state: &VehicleState,
    steer: f64,
    throttle_speed: f64,
    dt: f64,
    params: &VehicleParams,
) -> Result<VehicleState, VehicleError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(VehicleError::InvalidStep { dt });
    }
    if state.speed < SLIP_MIN_SPEED {
        return step_kinematic(state, steer, throttle_speed, dt, params).map(|(s, _)| s);
    }
    let steer = params.clamp_steer(steer);
    let vx = state.speed;

    // The tire ODE stiffens as C/(m·v) grows; substep RK4 to stay inside
    // its stability region.
    let a = CG_FRONT_FRACTION * params.wheelbase;
    let b = params.wheelbase - a;
    let rate = (2.0 * params.cornering_stiffness / (params.mass * vx))
        .max(params.cornering_stiffness * (a * a + b * b) / (params.yaw_inertia * vx));
    let substeps = ((dt * rate / 2.0).ceil() as usize).clamp(1, 200_000);
    let h = dt / substeps as f64;

    let mut s = [
        state.pose.x(),
        state.pose.y(),
        state.pose.heading(),
        state.lateral_velocity,
        state.yaw_rate,
    ];
    for _ in 0..substeps {
        s = rk4(&s, h, |s| slip_derivatives(s, vx, steer, params));
    }

    let (new_speed, _) = speed_lag(state.speed, throttle_speed, dt);
    Ok(VehicleState {
        pose: PlanarPose::from_parts(s[0], s[1], s[2]),
        speed: new_speed,
        lateral_velocity: s[3],
        yaw_rate: s[4],
    })
}

/// Splits a single-track steering angle into left/right front-wheel angles:
/// the wheel on the inside of the turn gets `δ + Δδ/2`, the outside wheel
/// `δ − Δδ/2`, with `Δδ = δ²·W/L`; the mean is exactly `δ`.
pub fn ackermann_split(steer: f64, params: &VehicleParams) -> AckermannAngles {
    let delta_diff = steer * steer * params.track_width / params.wheelbase;
    let half = 0.5 * delta_diff * steer.signum();
    AckermannAngles {
        left: steer + half,
        right: steer - half,
    }
}

/// Linear map from a steering angle to the simulator command range [−1, 1],
/// with 1.0 at `max_steer`.
pub fn steering_to_command(steer: f64, params: &VehicleParams) -> f64 {
    (steer / params.max_steer).clamp(-1.0, 1.0)
}

/// Inverse of [`steering_to_command`] inside the command range.
pub fn command_to_steering(command: f64, params: &VehicleParams) -> f64 {
    command.clamp(-1.0, 1.0) * params.max_steer
}
