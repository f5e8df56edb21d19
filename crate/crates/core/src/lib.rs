//! Self-supervised steering from recorded vehicle poses.
//!
//! The pipeline turns pose trajectories into local-frame `(dx, dy)` steering
//! labels, trains a small lateral-offset regressor on them, and evaluates it
//! closed-loop in a bicycle-model simulator:
//!
//! * [`geometry`] — planar pose algebra and the global→local label transform
//! * [`vehicle`] — bicycle-model kinematics/dynamics and the steering law
//! * [`course`] — arc/line driving courses with corridors and intent tags
//! * [`trajectory`] — pose-file ingestion, VO-noise synthesis, relabeling,
//!   and dataset construction
//! * [`predictor`] — observation encoding, the FEM/SAP regressor, L1
//!   training, and teacher–student distillation
//! * [`harness`] — closed-loop episodes, the in-track-ratio metric, and the
//!   experiment sweeps

pub mod course;
pub mod geometry;
pub mod harness;
pub mod predictor;
pub(crate) mod seed;
pub mod trajectory;
pub mod vehicle;

pub use seed::derive_seed;
