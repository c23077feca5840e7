//! Fold bend model.
//!
//! A fold of length `L_fold` held by threads of roughly equal length opens
//! into a circular-arc bend when one thread is released. Two expressions tie
//! the bend angle `theta` to the chord distance `x` across the open fold:
//!
//! ```text
//! theta = 2 * L_fold / (D_infl + x)         (arc geometry)
//! theta = 2 * asin(L_fold / (2 * x))        (chord geometry)
//! ```
//!
//! Both must hold at once, which pins (x, theta) for a given tube. The
//! solver brackets the residual of the two expressions and bisects.

use super::TubeError;

/// Solved fold geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldGeometry {
    pub l_fold: f64,
    /// Chord distance across the open fold, mm. Always exceeds `l_fold / 2`
    /// so the chord expression stays within the arcsine domain.
    pub x: f64,
    /// Bend angle, rad, in (0, pi).
    pub theta: f64,
}

/// Inflated diameter of a lay-flat tube: `2 * D_flat / pi`.
pub fn inflated_diameter(d_flat: f64) -> Result<f64, TubeError> {
    if d_flat < 0.0 || !d_flat.is_finite() {
        return Err(TubeError::NegativeDiameter { d_flat });
    }
    Ok(2.0 * d_flat / std::f64::consts::PI)
}

fn residual(l_fold: f64, d_infl: f64, x: f64) -> f64 {
    2.0 * l_fold / (d_infl + x) - 2.0 * (l_fold / (2.0 * x)).asin()
}

/// Solve the fold system for `(x, theta)`.
///
/// Scans `(L_fold/2, 100 (L_fold + D_infl))` for a sign change of the
/// residual, then bisects until the residual magnitude drops below `tol`.
pub fn fold_angle(l_fold: f64, d_infl: f64, tol: f64) -> Result<FoldGeometry, TubeError> {
    if !(l_fold > 0.0) {
        return Err(TubeError::NonPositiveField { field: "l_fold", value: l_fold });
    }
    if !(d_infl > 0.0) {
        return Err(TubeError::NonPositiveField { field: "d_infl", value: d_infl });
    }
    if !(tol > 0.0) {
        return Err(TubeError::NonPositiveField { field: "tol", value: tol });
    }

    let lo_bound = l_fold / 2.0 * (1.0 + 1e-12);
    let hi_bound = 100.0 * (l_fold + d_infl);

    // Bracket by scanning a geometric grid.
    const SCAN: usize = 4096;
    let ratio = (hi_bound / lo_bound).powf(1.0 / SCAN as f64);
    let mut a = lo_bound;
    let mut fa = residual(l_fold, d_infl, a);
    let mut bracket = None;
    for i in 1..=SCAN {
        let b = lo_bound * ratio.powi(i as i32);
        let fb = residual(l_fold, d_infl, b);
        if fa == 0.0 {
            bracket = Some((a, a));
            break;
        }
        if fa * fb <= 0.0 {
            bracket = Some((a, b));
            break;
        }
        a = b;
        fa = fb;
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Err(TubeError::NoFoldSolution { lo: lo_bound, hi: hi_bound });
    };

    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        x = 0.5 * (lo + hi);
        let fx = residual(l_fold, d_infl, x);
        if fx == 0.0 || (hi - lo) < f64::EPSILON * x {
            break;
        }
        let flo = residual(l_fold, d_infl, lo);
        if flo * fx <= 0.0 {
            hi = x;
        } else {
            lo = x;
        }
    }

    if residual(l_fold, d_infl, x).abs() >= tol {
        return Err(TubeError::NoFoldSolution { lo: lo_bound, hi: hi_bound });
    }
    let theta = 2.0 * (l_fold / (2.0 * x)).asin();
    debug_assert!(theta > 0.0 && theta < std::f64::consts::PI);
    debug_assert!(x > l_fold / 2.0);
    Ok(FoldGeometry { l_fold, x, theta })
}
