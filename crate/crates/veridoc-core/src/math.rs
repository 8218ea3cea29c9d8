//! Float helpers routed through `libm` so std and no_std builds compute
//! identical bits.

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// Round half away from zero, the convention used everywhere an integer
/// pixel value is produced.
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Round and clamp into the `u8` range.
pub(crate) fn round_to_u8(x: f64) -> u8 {
    let r = round(x);
    if r <= 0.0 {
        0
    } else if r >= 255.0 {
        255
    } else {
        r as u8
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_half_away_from_zero() {
        assert_eq!(round(0.5), 1.0);
        assert_eq!(round(1.5), 2.0);
        assert_eq!(round(2.5), 3.0);
        assert_eq!(round(-0.5), -1.0);
    }

    #[test]
    fn round_to_u8_clamps() {
        assert_eq!(round_to_u8(-3.2), 0);
        assert_eq!(round_to_u8(254.5), 255);
        assert_eq!(round_to_u8(300.0), 255);
        assert_eq!(round_to_u8(127.49), 127);
    }
}
