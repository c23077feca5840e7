//! Tube model: fold kinematics, plan discretization into fold-release
//! commands, forward simulation and verification.
//!
//! The tube leaves the outlet pre-folded at regular stations. Releasing one
//! side of a fold makes the pressurized tube bend toward the remaining
//! thread; releasing both sides removes the fold and pays out its doubled
//! material; leaving the fold alone keeps the tube straight.

mod discretize;
mod fold;
mod simulate;
mod verify;

pub use discretize::{discretize_plan, StraightPolicy};
pub use fold::{fold_angle, inflated_diameter, FoldGeometry};
pub use simulate::simulate_schedule;
pub use verify::{
    axis_sweep_grid, perturbation_robustness, verify_discretized, ContactObservation,
    DirectionalMargins, MarginMap, PerturbationOutcome, PerturbationSample, VerificationReport,
    VerifyParams,
};

use thiserror::Error;

use crate::geometry::Point2;
use crate::units::{MM_PER_IN, MM_PER_MIL, PA_PER_PSI};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TubeError {
    #[error("tube field {field} must be positive, got {value}")]
    NonPositiveField { field: &'static str, value: f64 },
    #[error("thread length {l_thread} is not within 10% of fold length {l_fold}")]
    ThreadLengthMismatch { l_thread: f64, l_fold: f64 },
    #[error("fold angle override {theta} outside (0, pi)")]
    InvalidThetaOverride { theta: f64 },
    #[error("inflated diameter needs a non-negative lay-flat diameter, got {d_flat}")]
    NegativeDiameter { d_flat: f64 },
    #[error("fold system has no root for x in ({lo}, {hi})")]
    NoFoldSolution { lo: f64, hi: f64 },
    #[error(
        "turn {turn} of {angle} rad needs {releases} releases of {theta} rad; \
         residual {residual} exceeds tolerance {tol}"
    )]
    TurnResidualTooLarge {
        turn: usize,
        angle: f64,
        releases: usize,
        theta: f64,
        residual: f64,
        tol: f64,
    },
    #[error("schedule needs {required} mm of tube but the reel holds {available} mm")]
    ReelExhausted { required: f64, available: f64 },
    #[error("fold indices must be strictly increasing and start at 1")]
    BadFoldIndices,
    #[error("no obstacle with index {index}")]
    NoSuchObstacle { index: usize },
    #[error("schedule fails verification on the nominal environment")]
    NominalVerificationFailed,
}

/// Pressure band the release mechanism was validated in: 5 to 8 PSI.
pub const VALIDATED_PRESSURE_PA: (f64, f64) = (5.0 * PA_PER_PSI, 8.0 * PA_PER_PSI);

/// Fold lengths with a clean failure record; shorter folds shed their tape,
/// longer ones stall against eversion friction.
pub const RELIABLE_FOLD_LENGTH_MM: (f64, f64) = (30.0, 50.0);

/// Physical tube parameters. All lengths in millimetres, pressure in
/// pascals.
#[derive(Debug, Clone, PartialEq)]
pub struct TubeSpec {
    /// Lay-flat diameter: half the circumference.
    pub d_flat: f64,
    /// Wall thickness.
    pub wall_thickness: f64,
    pub pressure: f64,
    /// Arclength between consecutive fold stations.
    pub fold_spacing: f64,
    pub l_fold: f64,
    pub l_thread: f64,
    /// Total tubing available on the reel.
    pub reel_length: f64,
    /// Calibrated per-release bend, overriding the solved fold model.
    pub theta_override: Option<f64>,
}

/// Soft validation findings; none of these stop planning.
#[derive(Debug, Clone, PartialEq)]
pub enum TubeWarning {
    PressureOutsideValidatedRange { pressure: f64, lo: f64, hi: f64 },
    FoldLengthOutsideReliableBand { l_fold: f64, lo: f64, hi: f64 },
}

impl std::fmt::Display for TubeWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TubeWarning::PressureOutsideValidatedRange { pressure, lo, hi } => write!(
                f,
                "pressure {pressure} Pa outside the validated range [{lo:.0}, {hi:.0}] Pa"
            ),
            TubeWarning::FoldLengthOutsideReliableBand { l_fold, lo, hi } => write!(
                f,
                "fold length {l_fold} mm outside the reliable band [{lo}, {hi}] mm"
            ),
        }
    }
}

impl TubeSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        d_flat: f64,
        wall_thickness: f64,
        pressure: f64,
        fold_spacing: f64,
        l_fold: f64,
        l_thread: f64,
        reel_length: f64,
        theta_override: Option<f64>,
    ) -> Result<Self, TubeError> {
        for (field, value) in [
            ("d_flat", d_flat),
            ("wall_thickness", wall_thickness),
            ("pressure", pressure),
            ("fold_spacing", fold_spacing),
            ("l_fold", l_fold),
            ("l_thread", l_thread),
            ("reel_length", reel_length),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(TubeError::NonPositiveField { field, value });
            }
        }
        if (l_thread - l_fold).abs() > 0.1 * l_fold {
            return Err(TubeError::ThreadLengthMismatch { l_thread, l_fold });
        }
        if let Some(theta) = theta_override {
            if !(theta > 0.0 && theta < std::f64::consts::PI) {
                return Err(TubeError::InvalidThetaOverride { theta });
            }
        }
        Ok(Self {
            d_flat,
            wall_thickness,
            pressure,
            fold_spacing,
            l_fold,
            l_thread,
            reel_length,
            theta_override,
        })
    }

    pub fn inflated_diameter(&self) -> f64 {
        inflated_diameter(self.d_flat).expect("validated spec")
    }

    /// Bend per single release: the calibrated override when present,
    /// otherwise the solved fold model angle.
    pub fn effective_theta(&self) -> Result<f64, TubeError> {
        match self.theta_override {
            Some(t) => Ok(t),
            None => Ok(fold_angle(self.l_fold, self.inflated_diameter(), 1e-12)?.theta),
        }
    }

    pub fn warnings(&self) -> Vec<TubeWarning> {
        let mut out = Vec::new();
        let (plo, phi) = VALIDATED_PRESSURE_PA;
        if self.pressure < plo || self.pressure > phi {
            out.push(TubeWarning::PressureOutsideValidatedRange {
                pressure: self.pressure,
                lo: plo,
                hi: phi,
            });
        }
        let (flo, fhi) = RELIABLE_FOLD_LENGTH_MM;
        if self.l_fold < flo || self.l_fold > fhi {
            out.push(TubeWarning::FoldLengthOutsideReliableBand {
                l_fold: self.l_fold,
                lo: flo,
                hi: fhi,
            });
        }
        out
    }
}

impl Default for TubeSpec {
    /// 3" lay-flat LDPE at 2 mil, 8 PSI, 100 mm fold stations, 40 mm folds,
    /// 30 m reel.
    fn default() -> Self {
        TubeSpec::new(
            3.0 * MM_PER_IN,
            2.0 * MM_PER_MIL,
            8.0 * PA_PER_PSI,
            100.0,
            40.0,
            40.0,
            30_000.0,
            None,
        )
        .expect("default spec is valid")
    }
}

/// Per-station fold action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldCommand {
    /// Leave the fold in place; the tube runs straight and keeps the fold's
    /// material doubled over.
    Keep,
    /// Release both threads: the fold disappears and its doubled material
    /// pays out as extra straight length.
    ReleaseBoth,
    /// Release the left thread: the tube bends toward the remaining right
    /// thread (clockwise, negative heading change).
    ReleaseLeft,
    /// Release the right thread: the tube bends left (positive heading
    /// change).
    ReleaseRight,
}

impl FoldCommand {
    /// Straight length deployed over this station's interval.
    pub fn interval_length(self, tube: &TubeSpec) -> f64 {
        match self {
            FoldCommand::ReleaseBoth => tube.fold_spacing + 2.0 * tube.l_fold,
            _ => tube.fold_spacing,
        }
    }

    /// Signed heading change applied at the station.
    pub fn heading_change(self, theta: f64) -> f64 {
        match self {
            FoldCommand::ReleaseLeft => -theta,
            FoldCommand::ReleaseRight => theta,
            FoldCommand::Keep | FoldCommand::ReleaseBoth => 0.0,
        }
    }
}

/// Fold-release program: which command fires at which station, plus the
/// outlet pose the rollout starts from.
///
/// Stations sit at arclength `k * fold_spacing` for `k = 1, 2, ...`;
/// station 0 is the outlet itself. Stations without an explicit command
/// keep their fold.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldSchedule {
    pub tube: TubeSpec,
    pub base_position: Point2,
    pub base_heading: f64,
    /// (station index, command), indices strictly increasing from 1.
    pub commands: Vec<(usize, FoldCommand)>,
}

impl FoldSchedule {
    pub fn new(
        tube: TubeSpec,
        base_position: Point2,
        base_heading: f64,
        commands: Vec<(usize, FoldCommand)>,
    ) -> Result<Self, TubeError> {
        if commands.first().is_some_and(|(k, _)| *k == 0)
            || commands.windows(2).any(|w| w[0].0 >= w[1].0)
        {
            return Err(TubeError::BadFoldIndices);
        }
        let schedule = Self {
            tube,
            base_position,
            base_heading,
            commands,
        };
        let required = schedule.consumed_length();
        if required > schedule.tube.reel_length {
            return Err(TubeError::ReelExhausted {
                required,
                available: schedule.tube.reel_length,
            });
        }
        Ok(schedule)
    }

    /// Highest station index addressed by the program.
    pub fn last_station(&self) -> usize {
        self.commands.last().map_or(0, |(k, _)| *k)
    }

    /// Command at a station; unlisted stations keep their fold.
    pub fn command_at(&self, station: usize) -> FoldCommand {
        self.commands
            .iter()
            .find(|(k, _)| *k == station)
            .map_or(FoldCommand::Keep, |(_, c)| *c)
    }

    /// Total straight length deployed through the last station.
    pub fn consumed_length(&self) -> f64 {
        (1..=self.last_station())
            .map(|k| self.command_at(k).interval_length(&self.tube))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spec_matches_data_sheet() {
        let tube = TubeSpec::default();
        assert!((tube.d_flat - 76.2).abs() < 1e-12);
        assert!((tube.wall_thickness - 0.0508).abs() < 1e-12);
        assert!(tube.warnings().is_empty());
    }

    #[test]
    fn thread_length_must_track_fold_length() {
        let r = TubeSpec::new(76.2, 0.05, 55000.0, 100.0, 40.0, 50.0, 30000.0, None);
        assert!(matches!(r, Err(TubeError::ThreadLengthMismatch { .. })));
        assert!(TubeSpec::new(76.2, 0.05, 55000.0, 100.0, 40.0, 43.9, 30000.0, None).is_ok());
    }

    #[test]
    fn pressure_and_fold_warnings() {
        let mut tube = TubeSpec::default();
        tube.pressure = 2.0 * PA_PER_PSI;
        tube.l_fold = 20.0;
        tube.l_thread = 20.0;
        let warnings = tube.warnings();
        assert_eq!(warnings.len(), 2);
    }

    #[test]
    fn schedule_indices_validated() {
        let tube = TubeSpec::default();
        let base = (Point2::new(0.0, 0.0), 0.0);
        let bad = FoldSchedule::new(
            tube.clone(),
            base.0,
            base.1,
            vec![(2, FoldCommand::Keep), (2, FoldCommand::Keep)],
        );
        assert!(matches!(bad, Err(TubeError::BadFoldIndices)));
        let zero = FoldSchedule::new(tube.clone(), base.0, base.1, vec![(0, FoldCommand::Keep)]);
        assert!(matches!(zero, Err(TubeError::BadFoldIndices)));
    }

    #[test]
    fn release_both_pays_out_fold_material() {
        let tube = TubeSpec::default();
        let keep = FoldSchedule::new(
            tube.clone(),
            Point2::default(),
            0.0,
            vec![(1, FoldCommand::Keep), (2, FoldCommand::Keep)],
        )
        .unwrap();
        let both = FoldSchedule::new(
            tube.clone(),
            Point2::default(),
            0.0,
            vec![(1, FoldCommand::ReleaseBoth), (2, FoldCommand::ReleaseBoth)],
        )
        .unwrap();
        let diff = both.consumed_length() - keep.consumed_length();
        assert!((diff - 2.0 * 2.0 * tube.l_fold).abs() < 1e-12);
    }

    #[test]
    fn reel_limit_enforced() {
        let mut tube = TubeSpec::default();
        tube.reel_length = 150.0;
        let r = FoldSchedule::new(
            tube,
            Point2::default(),
            0.0,
            vec![(1, FoldCommand::Keep), (2, FoldCommand::Keep)],
        );
        assert!(matches!(r, Err(TubeError::ReelExhausted { .. })));
    }
}
