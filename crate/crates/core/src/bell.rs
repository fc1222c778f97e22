//! CHSH evaluation for two-party boxes.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tensor::Box2;

/// Bound satisfied by every local box.
pub const LOCAL_BOUND: f64 = 2.0;
/// Bound satisfied by every no-signaling box.
pub const NS_BOUND: f64 = 4.0;

/// Signed combination `s00 E(0,0) + s01 E(0,1) + s10 E(1,0) + s11 E(1,1)`
/// with an odd number of minus signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChshVariant {
    signs: [i8; 4],
}

impl ChshVariant {
    /// The variant under which the two wirings of the mixed family evaluate
    /// to `alpha + eps (3 - 2 alpha)` and `(1 - alpha) + eps (1 + 2 alpha)`.
    pub const CANONICAL: ChshVariant = ChshVariant { signs: [1, 1, -1, 1] };

    pub fn new(signs: [i8; 4]) -> Result<Self> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidParameter(format!("signs {signs:?} must be +1 or -1")));
        }
        let negatives = signs.iter().filter(|s| **s < 0).count();
        if negatives % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "signs {signs:?} need an odd number of minus signs"
            )));
        }
        Ok(Self { signs })
    }

    pub fn signs(&self) -> [i8; 4] {
        self.signs
    }

    /// All eight variants, in a fixed order.
    pub fn all() -> Vec<ChshVariant> {
        (0..16u8)
            .map(|m| {
                let mut s = [1i8; 4];
                for (k, v) in s.iter_mut().enumerate() {
                    if m & (8 >> k) != 0 {
                        *v = -1;
                    }
                }
                s
            })
            .filter_map(|s| ChshVariant::new(s).ok())
            .collect()
    }
}

impl fmt::Display for ChshVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self.signs.iter().map(|s| if *s > 0 { "+" } else { "-" }).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for ChshVariant {
    type Err = Error;

    /// Parses four comma-separated signs such as `+,+,-,+`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("expected four signs, got {s:?}")));
        }
        let mut signs = [0i8; 4];
        for (v, p) in signs.iter_mut().zip(&parts) {
            *v = match *p {
                "+" | "+1" | "1" => 1,
                "-" | "-1" => -1,
                other => return Err(Error::Parse(format!("bad sign {other:?}"))),
            };
        }
        ChshVariant::new(signs)
    }
}

/// `E(x, y) = sum_{o, o'} (-1)^(o xor o') q(o o' | x y)`.
pub fn correlator(b: &Box2, x: u8, y: u8) -> f64 {
    let mut e = 0.0;
    for o in 0..2u8 {
        for o2 in 0..2u8 {
            let sign = if o == o2 { 1.0 } else { -1.0 };
            e += sign * b.p(o, o2, x, y);
        }
    }
    e
}

pub fn correlators(b: &Box2) -> [f64; 4] {
    [correlator(b, 0, 0), correlator(b, 0, 1), correlator(b, 1, 0), correlator(b, 1, 1)]
}

pub fn chsh_value(b: &Box2, v: ChshVariant) -> f64 {
    correlators(b).iter().zip(v.signs).map(|(e, s)| e * s as f64).sum()
}

/// Largest value over the eight variants, with the maximizing variant.
pub fn chsh_max_variant(b: &Box2) -> (f64, ChshVariant) {
    ChshVariant::all()
        .into_iter()
        .map(|v| (chsh_value(b, v), v))
        .fold((f64::NEG_INFINITY, ChshVariant::CANONICAL), |acc, x| if x.0 > acc.0 { x } else { acc })
}

pub fn chsh_max(b: &Box2) -> f64 {
    chsh_max_variant(b).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::*;

    #[test]
    fn eight_variants() {
        let all = ChshVariant::all();
        assert_eq!(all.len(), 8);
        assert!(all.contains(&ChshVariant::CANONICAL));
        assert!(ChshVariant::new([1, 1, 1, 1]).is_err());
        assert!(ChshVariant::new([1, 0, -1, 1]).is_err());
    }

    #[test]
    fn pr_correlators_and_value() {
        let pr = pr_box(PrVariant::new(0, 0, 0).unwrap());
        assert_eq!(correlators(&pr), [1.0, 1.0, 1.0, -1.0]);
        assert_eq!(chsh_max(&pr), 4.0);
    }

    #[test]
    fn uniform_correlators_vanish() {
        assert_eq!(correlators(&Box2::uniform()), [0.0; 4]);
        assert_eq!(chsh_value(&Box2::uniform(), ChshVariant::CANONICAL), 0.0);
    }

    #[test]
    fn deterministic_local_boxes_reach_two() {
        for f in BitFn::all() {
            for g in BitFn::all() {
                assert_eq!(chsh_max(&det_box2_local(f, g)), 2.0);
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let v: ChshVariant = "+,+,-,+".parse().unwrap();
        assert_eq!(v, ChshVariant::CANONICAL);
        assert_eq!(v.to_string(), "+,+,-,+");
        assert!("+,+,+".parse::<ChshVariant>().is_err());
        assert!("+,+,+,+".parse::<ChshVariant>().is_err());
    }
}
