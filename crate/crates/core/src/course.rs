//! Driving courses: a G¹-continuous centerline of line/arc segments with a
//! corridor half-width and per-segment driving-intent tags. Provides arc-length
//! sampling, nearest-point projection with a signed (left-positive) lateral
//! offset, and the JSON file format used by the CLI.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{wrap_angle, PlanarPose};

#[derive(Debug, Error)]
pub enum CourseError {
    #[error("invalid course: {0}")]
    Invalid(String),
    #[error("failed to read course file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse course file {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

/// Driving intent attached to a course segment and carried into the one-hot
/// command input of the predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Command {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "S")]
    Straight,
    #[serde(rename = "R")]
    Right,
}

impl Command {
    pub fn one_hot(&self) -> [f64; 3] {
        match self {
            Command::Left => [1.0, 0.0, 0.0],
            Command::Straight => [0.0, 1.0, 0.0],
            Command::Right => [0.0, 0.0, 1.0],
        }
    }

    pub fn letter(&self) -> char {
        match self {
            Command::Left => 'L',
            Command::Straight => 'S',
            Command::Right => 'R',
        }
    }

    pub fn from_letter(c: char) -> Option<Command> {
        match c {
            'L' => Some(Command::Left),
            'S' => Some(Command::Straight),
            'R' => Some(Command::Right),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Line,
    Arc,
}

/// One centerline piece. Curvature is signed, positive for left turns, and
/// must be zero exactly for lines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(rename = "type")]
    pub kind: SegmentKind,
    pub length_m: f64,
    pub curvature_per_m: f64,
    pub command: Command,
}

impl Segment {
    pub fn line(length_m: f64) -> Self {
        Segment {
            kind: SegmentKind::Line,
            length_m,
            curvature_per_m: 0.0,
            command: Command::Straight,
        }
    }

    pub fn arc(length_m: f64, curvature_per_m: f64) -> Self {
        let command = if curvature_per_m > 0.0 {
            Command::Left
        } else {
            Command::Right
        };
        Segment {
            kind: SegmentKind::Arc,
            length_m,
            curvature_per_m,
            command,
        }
    }
}

/// Point sampled from the centerline at a given arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoursePoint {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub curvature: f64,
    pub command: Command,
}

/// Result of projecting a position onto the centerline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    /// Arc-length coordinate of the nearest centerline point.
    pub s: f64,
    /// Unsigned distance to that point, meters.
    pub distance: f64,
    /// Signed lateral offset, positive when left of the centerline.
    pub lateral_offset: f64,
}

#[derive(Debug, Clone)]
pub struct Course {
    id: String,
    corridor_half_width: f64,
    segments: Vec<Segment>,
    /// Pose at the start of each segment, plus the end pose of the course.
    joints: Vec<PlanarPose>,
    cumulative: Vec<f64>,
}

impl Course {
    /// Builds a course from segments chained head-to-tail starting at the
    /// origin, which makes the centerline G¹-continuous by construction.
    pub fn new(
        id: impl Into<String>,
        corridor_half_width: f64,
        segments: Vec<Segment>,
    ) -> Result<Self, CourseError> {
        if segments.is_empty() {
            return Err(CourseError::Invalid("course has no segments".into()));
        }
        if !(corridor_half_width.is_finite() && corridor_half_width > 0.0) {
            return Err(CourseError::Invalid(format!(
                "corridor_half_width = {corridor_half_width} must be positive"
            )));
        }
        for (i, seg) in segments.iter().enumerate() {
            if !(seg.length_m.is_finite() && seg.length_m > 0.0) {
                return Err(CourseError::Invalid(format!(
                    "segment {i}: length {} must be positive",
                    seg.length_m
                )));
            }
            match seg.kind {
                SegmentKind::Line => {
                    if seg.curvature_per_m != 0.0 {
                        return Err(CourseError::Invalid(format!(
                            "segment {i}: line must have zero curvature"
                        )));
                    }
                }
                SegmentKind::Arc => {
                    if seg.curvature_per_m == 0.0 || !seg.curvature_per_m.is_finite() {
                        return Err(CourseError::Invalid(format!(
                            "segment {i}: arc must have nonzero curvature"
                        )));
                    }
                    let sweep = (seg.curvature_per_m * seg.length_m).abs();
                    if sweep > std::f64::consts::PI {
                        return Err(CourseError::Invalid(format!(
                            "segment {i}: arc sweep {sweep:.3} rad exceeds π; split it"
                        )));
                    }
                }
            }
        }

        let mut joints = Vec::with_capacity(segments.len() + 1);
        let mut cumulative = Vec::with_capacity(segments.len() + 1);
        let mut pose = PlanarPose::origin();
        let mut s = 0.0;
        for seg in &segments {
            joints.push(pose);
            cumulative.push(s);
            pose = advance(&pose, seg, seg.length_m);
            s += seg.length_m;
        }
        joints.push(pose);
        cumulative.push(s);

        Ok(Course {
            id: id.into(),
            corridor_half_width,
            segments,
            joints,
            cumulative,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn corridor_half_width(&self) -> f64 {
        self.corridor_half_width
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn start_pose(&self) -> PlanarPose {
        self.joints[0]
    }

    /// Whether the end pose returns to the start pose (closed circuit).
    pub fn is_closed(&self) -> bool {
        let start = self.joints[0];
        let end = *self.joints.last().unwrap();
        start.distance(&end) < 1e-6 && wrap_angle(end.heading() - start.heading()).abs() < 1e-6
    }

    fn segment_index(&self, s: f64) -> usize {
        match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&s).unwrap())
        {
            Ok(i) => i.min(self.segments.len() - 1),
            Err(i) => i.saturating_sub(1).min(self.segments.len() - 1),
        }
    }

    /// Samples the centerline at arc length `s`, clamped to the course range.
    /// Beyond the end the course is treated as ending straight (curvature 0).
    pub fn sample(&self, s: f64) -> CoursePoint {
        let total = self.length();
        let beyond_end = s > total;
        let s = s.clamp(0.0, total);
        let idx = self.segment_index(s);
        let seg = &self.segments[idx];
        let local = s - self.cumulative[idx];
        let pose = advance(&self.joints[idx], seg, local);
        CoursePoint {
            x: pose.x(),
            y: pose.y(),
            heading: pose.heading(),
            curvature: if beyond_end { 0.0 } else { seg.curvature_per_m },
            command: seg.command,
        }
    }

    /// Offsets the centerline point at `s` laterally (left-positive).
    pub fn offset_point(&self, s: f64, lateral: f64) -> (f64, f64) {
        let p = self.sample(s);
        (
            p.x - lateral * p.heading.sin(),
            p.y + lateral * p.heading.cos(),
        )
    }

    /// Nearest centerline point to `(x, y)` over all segments, with the
    /// signed lateral offset. Ties resolve to the smallest arc length.
    pub fn project(&self, x: f64, y: f64) -> Projection {
        let mut best: Option<(f64, f64)> = None; // (distance, s)
        for (idx, seg) in self.segments.iter().enumerate() {
            let local = project_segment(&self.joints[idx], seg, x, y);
            let s = self.cumulative[idx] + local;
            let p = advance(&self.joints[idx], seg, local);
            let d = ((x - p.x()).powi(2) + (y - p.y()).powi(2)).sqrt();
            let better = match best {
                None => true,
                Some((bd, bs)) => d < bd - 1e-12 || (d < bd + 1e-12 && s < bs),
            };
            if better {
                best = Some((d, s));
            }
        }
        let (distance, s) = best.unwrap();
        let p = self.sample(s);
        let cross = p.heading.cos() * (y - p.y) - p.heading.sin() * (x - p.x);
        Projection {
            s,
            distance,
            lateral_offset: if cross >= 0.0 { distance } else { -distance },
        }
    }

    /// Reads the on-disk format: a bare JSON array of segments.
    pub fn from_json_file(
        path: &Path,
        id: impl Into<String>,
        corridor_half_width: f64,
    ) -> Result<Self, CourseError> {
        let text = std::fs::read_to_string(path).map_err(|source| CourseError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let segments: Vec<Segment> =
            serde_json::from_str(&text).map_err(|source| CourseError::Json {
                path: path.display().to_string(),
                source,
            })?;
        Course::new(id, corridor_half_width, segments)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.segments).expect("segments serialize")
    }
}

/// Pose after traveling `s` meters from `start` along a segment.
fn advance(start: &PlanarPose, seg: &Segment, s: f64) -> PlanarPose {
    let h = start.heading();
    let k = seg.curvature_per_m;
    if k == 0.0 {
        PlanarPose::from_parts(start.x() + s * h.cos(), start.y() + s * h.sin(), h)
    } else {
        let h1 = h + k * s;
        PlanarPose::from_parts(
            start.x() + (h1.sin() - h.sin()) / k,
            start.y() + (h.cos() - h1.cos()) / k,
            h1,
        )
    }
}

/// Arc length within `seg` of the point nearest to `(x, y)`, clamped to
/// `[0, length]`. Arc sweeps are ≤ π so the angular branch is unambiguous.
fn project_segment(start: &PlanarPose, seg: &Segment, x: f64, y: f64) -> f64 {
    let h = start.heading();
    let k = seg.curvature_per_m;
    if k == 0.0 {
        let t = (x - start.x()) * h.cos() + (y - start.y()) * h.sin();
        t.clamp(0.0, seg.length_m)
    } else {
        // Center sits 1/k along the left normal of the start heading.
        let cx = start.x() - h.sin() / k;
        let cy = start.y() + h.cos() / k;
        let angle_to = (y - cy).atan2(x - cx);
        // At arc length s the point direction from the center is
        // heading(s) − π/2 for left turns, + π/2 for right turns.
        let angle_at_zero = if k > 0.0 {
            h - std::f64::consts::FRAC_PI_2
        } else {
            h + std::f64::consts::FRAC_PI_2
        };
        let raw = wrap_angle(angle_to - angle_at_zero) / k;
        if raw >= 0.0 && raw <= seg.length_m {
            raw
        } else {
            // Outside the sweep: nearer endpoint wins.
            let end = advance(start, seg, seg.length_m);
            let d0 = (x - start.x()).powi(2) + (y - start.y()).powi(2);
            let d1 = (x - end.x()).powi(2) + (y - end.y()).powi(2);
            if d0 <= d1 {
                0.0
            } else {
                seg.length_m
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn straight(len: f64) -> Course {
        Course::new("straight", 1.75, vec![Segment::line(len)]).unwrap()
    }

    #[test]
    fn validation_rejects_bad_segments() {
        assert!(Course::new("empty", 1.75, vec![]).is_err());
        assert!(Course::new("neg", 1.75, vec![Segment::line(-1.0)]).is_err());
        let mut bent_line = Segment::line(10.0);
        bent_line.curvature_per_m = 0.1;
        assert!(Course::new("bent", 1.75, vec![bent_line]).is_err());
        assert!(Course::new("flat-arc", 1.75, vec![Segment::arc(10.0, 0.0)]).is_err());
        // Sweep over π must be split.
        assert!(Course::new("sweep", 1.75, vec![Segment::arc(40.0, 0.1)]).is_err());
    }

    #[test]
    fn sample_line_and_arc() {
        let course = Course::new(
            "lr",
            1.75,
            vec![Segment::line(10.0), Segment::arc(std::f64::consts::PI * 5.0, 0.1)],
        )
        .unwrap();
        let p = course.sample(5.0);
        assert!((p.x - 5.0).abs() < 1e-12 && p.y.abs() < 1e-12);
        assert_eq!(p.curvature, 0.0);
        assert_eq!(p.command, Command::Straight);
        // Quarter of the R=10 arc: 90° left from (10, 0).
        let s = 10.0 + std::f64::consts::FRAC_PI_2 * 10.0;
        let p = course.sample(s);
        assert!((p.x - 20.0).abs() < 1e-9);
        assert!((p.y - 10.0).abs() < 1e-9);
        assert!((p.heading - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert_eq!(p.command, Command::Left);
    }

    #[test]
    fn joints_are_g1_continuous() {
        let course = Course::new(
            "mixed",
            1.75,
            vec![
                Segment::line(20.0),
                Segment::arc(15.0, 0.05),
                Segment::arc(10.0, -0.08),
                Segment::line(5.0),
            ],
        )
        .unwrap();
        let eps = 1e-6;
        for s in [20.0, 35.0, 45.0] {
            let before = course.sample(s - eps);
            let after = course.sample(s + eps);
            assert!((before.x - after.x).abs() < 1e-4);
            assert!((before.y - after.y).abs() < 1e-4);
            assert!(wrap_angle(before.heading - after.heading).abs() < 1e-4);
        }
    }

    #[test]
    fn projection_on_straight_course() {
        let course = straight(100.0);
        let p = course.project(40.0, 0.3);
        assert!((p.s - 40.0).abs() < 1e-9);
        assert!((p.distance - 0.3).abs() < 1e-9);
        assert!((p.lateral_offset - 0.3).abs() < 1e-9, "left is positive");
        let p = course.project(40.0, -0.3);
        assert!((p.lateral_offset + 0.3).abs() < 1e-9);
        // Clamped before the start.
        let p = course.project(-5.0, 1.0);
        assert!(p.s.abs() < 1e-12);
    }

    #[test]
    fn projection_on_arc() {
        // Full-left R=10 half circle; a point outside the arc at 45°.
        let course = Course::new(
            "arc",
            1.75,
            vec![Segment::arc(std::f64::consts::PI * 10.0 * 0.9, 0.1)],
        )
        .unwrap();
        let (cx, cy) = (0.0, 10.0);
        let angle: f64 = -std::f64::consts::FRAC_PI_2 + 0.7;
        let (x, y) = (cx + 12.0 * angle.cos(), cy + 12.0 * angle.sin());
        let p = course.project(x, y);
        assert!((p.s - 0.7 * 10.0).abs() < 1e-9);
        assert!((p.distance - 2.0).abs() < 1e-9);
        // Outside a left turn is to the right of the tangent.
        assert!((p.lateral_offset + 2.0).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let course = Course::new(
            "io",
            1.75,
            vec![Segment::line(10.0), Segment::arc(12.0, -0.05)],
        )
        .unwrap();
        let text = course.to_json_string();
        let parsed: Vec<Segment> = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, course.segments);
        let segment_json =
            r#"[{"type":"line","length_m":5.0,"curvature_per_m":0.0,"command":"S"}]"#;
        let parsed: Vec<Segment> = serde_json::from_str(segment_json).unwrap();
        assert_eq!(parsed[0].kind, SegmentKind::Line);
        assert_eq!(parsed[0].command, Command::Straight);
    }

    #[test]
    fn offset_point_moves_left() {
        let course = straight(50.0);
        let (x, y) = course.offset_point(10.0, 0.5);
        assert!((x - 10.0).abs() < 1e-12);
        assert!((y - 0.5).abs() < 1e-12);
    }
}
