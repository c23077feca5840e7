//! Unit conversion constants.
//!
//! Every length inside the library is a millimetre and every angle a radian.
//! These constants exist so that imperial quantities from data sheets can be
//! written down exactly once.

/// Millimetres per inch.
pub const MM_PER_IN: f64 = 25.4;

/// Millimetres per mil (thousandth of an inch).
pub const MM_PER_MIL: f64 = 0.0254;

/// Pascals per PSI.
pub const PA_PER_PSI: f64 = 6894.757293168;

/// Metres per second per mile per hour.
pub const MPS_PER_MPH: f64 = 0.44704;

/// Cubic millimetres per cubic centimetre.
pub const MM3_PER_CM3: f64 = 1000.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gale_speed_in_mps() {
        // 39 mph is the low end of a gale on the Beaufort scale.
        let v = 39.0 * MPS_PER_MPH;
        assert!((v - 17.43456).abs() < 1e-9);
    }

    #[test]
    fn two_mil_wall() {
        assert!((2.0 * MM_PER_MIL - 0.0508).abs() < 1e-12);
    }
}
