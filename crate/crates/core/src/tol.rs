//! Shared comparison tolerance for radii and distances.
//!
//! Every `<=` on radii goes through [`leq`]: relative `1e-9`, absolute
//! `1e-12` near zero.

pub const REL_TOL: f64 = 1e-9;
pub const ABS_TOL: f64 = 1e-12;

#[inline]
pub fn slack(a: f64, b: f64) -> f64 {
    (REL_TOL * a.abs().max(b.abs())).max(ABS_TOL)
}

/// `a <= b` up to the shared tolerance.
#[inline]
pub fn leq(a: f64, b: f64) -> bool {
    a <= b + slack(a, b)
}

/// `a == b` up to the shared tolerance.
#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= slack(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leq_is_tolerant_both_near_zero_and_at_scale() {
        assert!(leq(1.0 + 1e-10, 1.0));
        assert!(!leq(1.0 + 1e-8, 1.0));
        assert!(leq(5e-13, 0.0));
        assert!(!leq(1e-11, 0.0));
        assert!(leq(1e6 * (1.0 + 5e-10), 1e6));
    }
}
