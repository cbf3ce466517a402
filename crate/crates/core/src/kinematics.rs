//! Parametric human walking model.
//!
//! Joint positions are built recursively from the torso: each joint is its
//! parent's position plus a limb vector rotated about the y-axis by a
//! sinusoidal swing angle. Two gait patterns are supported: normal walking
//! (arms and legs swing in antiphase) and armed walking (arms locked in a
//! gun-holding posture with three rigid gun joints attached to the right
//! hand).

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{CoreError, Result};

/// Walking pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaitPattern {
    NormalWalking,
    ArmedWalking,
}

/// Identifier for a scattering point on the body (or gun).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum JointId {
    Torso,
    Head,
    RightShoulder,
    LeftShoulder,
    Hip,
    RightKnee,
    LeftKnee,
    RightAnkle,
    LeftAnkle,
    RightElbow,
    RightHand,
    LeftElbow,
    LeftHand,
    GunStock,
    GunBody,
    GunMuzzle,
}

impl JointId {
    /// Joints present in a normal-walking pose, in a fixed order.
    pub const NORMAL: [JointId; 13] = [
        JointId::Torso,
        JointId::Head,
        JointId::RightShoulder,
        JointId::LeftShoulder,
        JointId::Hip,
        JointId::RightKnee,
        JointId::LeftKnee,
        JointId::RightAnkle,
        JointId::LeftAnkle,
        JointId::RightElbow,
        JointId::RightHand,
        JointId::LeftElbow,
        JointId::LeftHand,
    ];

    /// Joints added by the armed pattern.
    pub const GUN: [JointId; 3] = [JointId::GunStock, JointId::GunBody, JointId::GunMuzzle];
}

/// Gait model parameters.
///
/// Distances are meters, angles radians, frequencies Hz. The `initial_position`
/// z-component is carried but unused: the torso height is always `h_torso`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GaitConfig {
    pub initial_position: [f64; 3],
    pub torso_speed: f64,
    pub walk_heading: f64,
    pub gait_frequency: f64,
    pub torso_height: f64,
    pub thigh_length: f64,
    pub calf_length: f64,
    pub arm_length: f64,
    pub thigh_amplitude: f64,
    pub calf_amplitude: f64,
    pub arm_amplitude: f64,
    pub head_offset_z: f64,
    pub shoulder_offset_z: f64,
    pub shoulder_offset_y: f64,
    pub hip_offset_z: f64,
    /// Fixed upper-arm angle in the armed posture.
    pub armed_upper_angle: f64,
    /// Fixed forearm angle in the armed posture.
    pub armed_fore_angle: f64,
    pub gun_stock_offset: [f64; 3],
    pub gun_body_offset: [f64; 3],
    pub gun_muzzle_offset: [f64; 3],
    pub pattern: GaitPattern,
}

impl Default for GaitConfig {
    fn default() -> Self {
        Self {
            initial_position: [4.0, 0.0, 0.0],
            torso_speed: 1.2,
            walk_heading: PI,
            gait_frequency: 1.0,
            torso_height: 1.0,
            thigh_length: 0.45,
            calf_length: 0.45,
            arm_length: 0.60,
            thigh_amplitude: 0.40,
            calf_amplitude: 0.50,
            arm_amplitude: 0.30,
            head_offset_z: 0.60,
            shoulder_offset_z: 0.35,
            shoulder_offset_y: 0.20,
            hip_offset_z: -0.35,
            armed_upper_angle: -PI / 6.0,
            armed_fore_angle: -4.0 * PI / 9.0,
            gun_stock_offset: [0.1, 0.0, 0.0],
            gun_body_offset: [0.2, 0.0, 0.0],
            gun_muzzle_offset: [0.3, 0.0, 0.0],
            pattern: GaitPattern::NormalWalking,
        }
    }
}

impl GaitConfig {
    /// Check the documented parameter invariants.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("gait.torso_height", self.torso_height),
            ("gait.thigh_length", self.thigh_length),
            ("gait.calf_length", self.calf_length),
            ("gait.arm_length", self.arm_length),
            ("gait.gait_frequency", self.gait_frequency),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CoreError::invalid_config(name, "must be strictly positive"));
            }
        }
        let amplitudes = [
            ("gait.thigh_amplitude", self.thigh_amplitude),
            ("gait.calf_amplitude", self.calf_amplitude),
            ("gait.arm_amplitude", self.arm_amplitude),
        ];
        for (name, v) in amplitudes {
            if !(v > 0.0 && v < PI / 2.0) {
                return Err(CoreError::invalid_config(name, "must lie in (0, pi/2)"));
            }
        }
        if !self.torso_speed.is_finite() || self.torso_speed < 0.0 {
            return Err(CoreError::invalid_config(
                "gait.torso_speed",
                "must be finite and nonnegative",
            ));
        }
        Ok(())
    }

    /// Kinematic bound on any joint's speed: torso translation plus the sum
    /// of limb tip speeds at unit swing amplitude.
    pub fn speed_cap(&self) -> f64 {
        self.torso_speed
            + 2.0 * PI * self.gait_frequency * (self.thigh_length + self.calf_length + self.arm_length)
    }
}

/// Skeleton joint positions at one slow-time instant.
#[derive(Debug, Clone)]
pub struct SkeletonPose {
    pub time: f64,
    joints: Vec<(JointId, Vector3<f64>)>,
}

impl SkeletonPose {
    pub fn new(time: f64, joints: Vec<(JointId, Vector3<f64>)>) -> Self {
        Self { time, joints }
    }

    /// Joints in insertion order.
    pub fn joints(&self) -> &[(JointId, Vector3<f64>)] {
        &self.joints
    }

    pub fn position(&self, id: JointId) -> Option<Vector3<f64>> {
        self.joints.iter().find(|(j, _)| *j == id).map(|(_, p)| *p)
    }

    pub fn len(&self) -> usize {
        self.joints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.joints.is_empty()
    }
}

/// Radial velocity of one joint relative to a radar position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocitySample {
    pub joint: JointId,
    /// m/s, positive toward the radar.
    pub radial_velocity: f64,
}

/// Rotation matrix about the y-axis.
pub fn rotation_y(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

/// Torso center position at slow time `t`.
pub fn torso_position(cfg: &GaitConfig, t: f64) -> Vector3<f64> {
    let [x0, y0, _z0] = cfg.initial_position;
    Vector3::new(
        x0 + cfg.torso_speed * cfg.walk_heading.cos() * t,
        y0 + cfg.torso_speed * cfg.walk_heading.sin() * t,
        cfg.torso_height,
    )
}

/// Full skeleton pose at slow time `t`.
///
/// Normal walking yields 13 joints; armed walking 16 (three gun joints).
pub fn pose_at(cfg: &GaitConfig, t: f64) -> SkeletonPose {
    let omega = 2.0 * PI * cfg.gait_frequency;
    let torso = torso_position(cfg, t);
    let head = torso + Vector3::new(0.0, 0.0, cfg.head_offset_z);
    let rs = torso + Vector3::new(0.0, -cfg.shoulder_offset_y, cfg.shoulder_offset_z);
    let ls = torso + Vector3::new(0.0, cfg.shoulder_offset_y, cfg.shoulder_offset_z);
    let hip = torso + Vector3::new(0.0, 0.0, cfg.hip_offset_z);

    let thigh = Vector3::new(0.0, 0.0, -cfg.thigh_length);
    let calf = Vector3::new(0.0, 0.0, -cfg.calf_length);
    let half_arm = Vector3::new(0.0, 0.0, -cfg.arm_length / 2.0);

    let theta_rk = cfg.thigh_amplitude * (omega * t).sin();
    let theta_ra = cfg.calf_amplitude * (omega * t + PI / 4.0).sin();
    let rk = hip + rotation_y(theta_rk) * thigh;
    let ra = rk + rotation_y(theta_ra) * calf;
    let lk = hip + rotation_y(-theta_rk) * thigh;
    let la = lk + rotation_y(-theta_ra) * calf;

    let mut joints = vec![
        (JointId::Torso, torso),
        (JointId::Head, head),
        (JointId::RightShoulder, rs),
        (JointId::LeftShoulder, ls),
        (JointId::Hip, hip),
        (JointId::RightKnee, rk),
        (JointId::LeftKnee, lk),
        (JointId::RightAnkle, ra),
        (JointId::LeftAnkle, la),
    ];

    match cfg.pattern {
        GaitPattern::NormalWalking => {
            let theta_re = cfg.arm_amplitude * (omega * t + PI).sin();
            let re = rs + rotation_y(theta_re) * half_arm;
            let rh = re + half_arm;
            let le = ls + rotation_y(-theta_re) * half_arm;
            let lh = le + half_arm;
            joints.extend([
                (JointId::RightElbow, re),
                (JointId::RightHand, rh),
                (JointId::LeftElbow, le),
                (JointId::LeftHand, lh),
            ]);
        }
        GaitPattern::ArmedWalking => {
            let upper = rotation_y(cfg.armed_upper_angle) * half_arm;
            let fore = rotation_y(cfg.armed_fore_angle) * half_arm;
            let re = rs + upper;
            let rh = re + fore;
            let le = ls + upper;
            let lh = le + fore;
            let stock = rh + Vector3::from(cfg.gun_stock_offset);
            let body = stock + Vector3::from(cfg.gun_body_offset);
            let muzzle = body + Vector3::from(cfg.gun_muzzle_offset);
            joints.extend([
                (JointId::RightElbow, re),
                (JointId::RightHand, rh),
                (JointId::LeftElbow, le),
                (JointId::LeftHand, lh),
                (JointId::GunStock, stock),
                (JointId::GunBody, body),
                (JointId::GunMuzzle, muzzle),
            ]);
        }
    }

    SkeletonPose::new(t, joints)
}

/// Instantaneous radial velocity of every joint via central finite
/// difference with step `dt`. Positive means approaching the radar.
pub fn radial_velocity_set(
    cfg: &GaitConfig,
    t: f64,
    radar_center: Vector3<f64>,
    dt: f64,
) -> Vec<VelocitySample> {
    assert!(dt > 0.0, "finite-difference step must be positive");
    let before = pose_at(cfg, (t - dt).max(0.0));
    let after = pose_at(cfg, t + dt);
    let span = after.time - before.time;
    before
        .joints()
        .iter()
        .zip(after.joints())
        .map(|((id, p0), (_, p1))| {
            let r0 = (p0 - radar_center).norm();
            let r1 = (p1 - radar_center).norm();
            VelocitySample {
                joint: *id,
                radial_velocity: -(r1 - r0) / span,
            }
        })
        .collect()
}

/// Directed Hausdorff distance `max_a min_b |a - b|` between two velocity sets.
pub fn directed_hausdorff(v_a: &[f64], v_b: &[f64]) -> Result<f64> {
    if v_a.is_empty() || v_b.is_empty() {
        return Err(CoreError::EmptyInput("directed_hausdorff velocity set"));
    }
    let dist = v_a
        .iter()
        .map(|a| {
            v_b.iter()
                .map(|b| (a - b).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    Ok(dist)
}

/// Physical peak micro-Doppler frequency at time `t`:
/// `(2/lambda) * max_i |v_r,i - v_comp|`, where `v_comp` is the torso radial
/// velocity when `compensated` is set and zero otherwise.
pub fn expected_peak_doppler(
    cfg: &GaitConfig,
    t: f64,
    radar_center: Vector3<f64>,
    lambda: f64,
    compensated: bool,
) -> f64 {
    assert!(lambda > 0.0, "wavelength must be positive");
    let samples = radial_velocity_set(cfg, t, radar_center, 1e-4);
    let v_comp = if compensated {
        samples
            .iter()
            .find(|s| s.joint == JointId::Torso)
            .map(|s| s.radial_velocity)
            .unwrap_or(0.0)
    } else {
        0.0
    };
    let peak = samples
        .iter()
        .map(|s| (s.radial_velocity - v_comp).abs())
        .fold(0.0, f64::max);
    2.0 / lambda * peak
}
