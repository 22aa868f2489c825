use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Neg};

/// A spider phase in radians, kept in `[0, 2π)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
#[serde(into = "f64", from = "f64")]
pub struct Phase(f64);

impl Phase {
    pub const ZERO: Phase = Phase(0.0);
    pub const PI: Phase = Phase(PI);

    pub fn new(radians: f64) -> Self {
        if !radians.is_finite() {
            return Phase::ZERO;
        }
        let r = radians.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU for tiny negative inputs
        if r >= TAU {
            Phase(0.0)
        } else {
            Phase(r)
        }
    }

    /// `numerator·π / denominator`.
    pub fn pi_frac(numerator: i64, denominator: i64) -> Self {
        Phase::new(numerator as f64 * PI / denominator as f64)
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    /// Circular distance to `other`, in `[0, π]`.
    pub fn distance(self, other: Phase) -> f64 {
        let d = (self.0 - other.0).abs();
        d.min(TAU - d)
    }

    pub fn approx_eq(self, other: Phase, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase::new(self.0 + rhs.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-self.0)
    }
}

impl From<f64> for Phase {
    fn from(v: f64) -> Self {
        Phase::new(v)
    }
}

impl From<Phase> for f64 {
    fn from(p: Phase) -> f64 {
        p.0
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_angle(self.0))
    }
}

/// Formats an angle the way the text formats expect it: exact multiples of
/// π/8 as `pi`, `3pi/4`, `2pi`, everything else as the shortest decimal that
/// round-trips.
pub fn format_angle(radians: f64) -> String {
    for den in [1i64, 2, 4, 8] {
        for num in 0..=(2 * den) {
            if num as f64 * PI / den as f64 == radians {
                if num == 0 {
                    return "0".to_string();
                }
                let g = gcd(num, den);
                let (n, d) = (num / g, den / g);
                let head = if n == 1 { "pi".to_string() } else { format!("{n}pi") };
                return if d == 1 { head } else { format!("{head}/{d}") };
            }
        }
    }
    format!("{radians}")
}

/// Parses the angle syntax produced by [`format_angle`]: a decimal, or
/// `[n]pi[/d]` with an optional leading minus.
pub fn parse_angle(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Some(idx) = t.find("pi") {
        let (coef, rest) = t.split_at(idx);
        let rest = &rest[2..];
        let num: f64 = match coef {
            "" => 1.0,
            "-" => -1.0,
            c => {
                let v: i64 = c.parse().ok()?;
                v as f64
            }
        };
        let den: f64 = if rest.is_empty() {
            1.0
        } else {
            let d: i64 = rest.strip_prefix('/')?.parse().ok()?;
            if d <= 0 {
                return None;
            }
            d as f64
        };
        Some(num * PI / den)
    } else {
        let v: f64 = t.parse().ok()?;
        v.is_finite().then_some(v)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_into_half_open_interval() {
        assert_eq!(Phase::new(TAU).radians(), 0.0);
        assert!((Phase::new(-PI / 2.0).radians() - 1.5 * PI).abs() < 1e-15);
        assert!(Phase::new(-1e-300).radians() < TAU);
        assert_eq!(Phase::new(f64::NAN), Phase::ZERO);
    }

    #[test]
    fn addition_wraps() {
        let p = Phase::pi_frac(3, 2) + Phase::pi_frac(1, 1);
        assert!(p.approx_eq(Phase::pi_frac(1, 2), 1e-12));
    }

    #[test]
    fn angle_text_round_trips() {
        for v in [0.0, PI, PI / 2.0, 3.0 * PI / 4.0, 7.0 * PI / 8.0, TAU, 0.1234, 1e-7] {
            let s = format_angle(v);
            assert_eq!(parse_angle(&s), Some(v), "{s}");
        }
        assert_eq!(format_angle(3.0 * PI / 4.0), "3pi/4");
        assert_eq!(format_angle(TAU), "2pi");
        assert_eq!(parse_angle("-pi/2"), Some(-PI / 2.0));
        assert_eq!(parse_angle("pi/0"), None);
        assert_eq!(parse_angle("abc"), None);
    }
}
