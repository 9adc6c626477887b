//! The three-layer product colouring of the ambient group.
//!
//! An element `(d, t, q)` is coloured by the triple
//!
//! 1. the profile of its odd-torsion part `d`,
//! 2. the profile of its image `q` in the free part (the projection that
//!    forgets the order-2 bits),
//! 3. whether it is divisible by 2 in the ambient group.
//!
//! Under this colouring no two distinct `a`, `b` have `2a`, `2b` and `a + b`
//! all of one colour.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{fmt_rational, parse_rational, AmbientElement, FreeMode, Profile, PruferCoord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColouringError {
    #[error("element {0} is not divisible by 2")]
    NotHalvable(String),
    #[error("malformed colour `{text}`: {reason}")]
    Decode { text: String, reason: String },
}

/// Projection onto the free coordinates; its kernel on `T ⊕ F` is `T`.
pub fn pi_projection(a: &AmbientElement) -> Vec<BigRational> {
    a.q_part().to_vec()
}

/// Whether `a = 2g` for some `g` in the ambient group.
///
/// Doubling is an automorphism of each odd Prüfer factor, so only the
/// order-2 bits (and, over the integers, the parity of free coordinates)
/// can obstruct.
pub fn is_halvable(a: &AmbientElement) -> bool {
    if a.t_part().iter().any(|&b| b) {
        return false;
    }
    match a.signature().free_mode() {
        FreeMode::Rational => true,
        FreeMode::Integer => a.q_part().iter().all(|v| v.numer().is_even()),
    }
}

/// The canonical half of `a`, with zero order-2 part.
pub fn halve(a: &AmbientElement) -> Result<AmbientElement, ColouringError> {
    if !is_halvable(a) {
        return Err(ColouringError::NotHalvable(a.to_string()));
    }
    let sig = a.signature();
    let mut d = BTreeMap::new();
    for (&i, c) in a.d_part() {
        // den = p^k is odd, so (den + 1) / 2 inverts 2 mod den
        let inv2: BigInt = (c.den() + BigInt::one()) / 2;
        let half = PruferCoord::new(c.num() * inv2, c.den().clone(), sig.prufer_factors()[i])
            .expect("denominator already a prime power");
        d.insert(i, half);
    }
    let two = BigRational::from_integer(2.into());
    let q = a.q_part().iter().map(|v| v / &two).collect();
    Ok(
        AmbientElement::new(sig, d, vec![false; sig.order_two_count()], q)
            .expect("half stays in the ambient group"),
    )
}

/// Colour of an element: (d-profile, free-part profile, halvable).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Colour {
    pub d_profile: Profile,
    pub y_profile: Profile,
    pub halvable: bool,
}

pub fn colour(a: &AmbientElement) -> Colour {
    Colour {
        d_profile: a.d_profile(),
        y_profile: Profile::of_rationals(&pi_projection(a)),
        halvable: is_halvable(a),
    }
}

/// Which layers of the product colouring are kept. Dropped layers are
/// replaced by a constant, which is how the diagnostics show each layer is
/// needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LayerMask {
    pub d_profile: bool,
    pub y_profile: bool,
    pub halvable: bool,
}

impl LayerMask {
    pub const ALL: LayerMask = LayerMask {
        d_profile: true,
        y_profile: true,
        halvable: true,
    };

    /// Every element gets the same colour.
    pub const NONE: LayerMask = LayerMask {
        d_profile: false,
        y_profile: false,
        halvable: false,
    };

    pub fn without(self, layer: Layer) -> Self {
        match layer {
            Layer::DProfile => LayerMask {
                d_profile: false,
                ..self
            },
            Layer::YProfile => LayerMask {
                y_profile: false,
                ..self
            },
            Layer::Halvable => LayerMask {
                halvable: false,
                ..self
            },
        }
    }

    pub fn colour(&self, a: &AmbientElement) -> Colour {
        Colour {
            d_profile: if self.d_profile {
                a.d_profile()
            } else {
                Profile::default()
            },
            y_profile: if self.y_profile {
                Profile::of_rationals(a.q_part())
            } else {
                Profile::default()
            },
            halvable: !self.halvable || is_halvable(a),
        }
    }
}

impl Default for LayerMask {
    fn default() -> Self {
        LayerMask::ALL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    #[serde(rename = "d")]
    DProfile,
    #[serde(rename = "y")]
    YProfile,
    Halvable,
}

impl FromStr for Layer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "d" => Ok(Layer::DProfile),
            "y" => Ok(Layer::YProfile),
            "halvable" => Ok(Layer::Halvable),
            other => Err(format!(
                "unknown layer `{other}` (expected d, y or halvable)"
            )),
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layer::DProfile => "d",
            Layer::YProfile => "y",
            Layer::Halvable => "halvable",
        })
    }
}

/// Stable text encoding: `d[v1,v2,...];y[w1,...];h1` (or `h0`), where each
/// value is `n` or `n/m` in lowest terms. The zero element encodes as
/// `d[];y[];h1`.
impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |p: &Profile| {
            p.values()
                .iter()
                .map(fmt_rational)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "d[{}];y[{}];h{}",
            list(&self.d_profile),
            list(&self.y_profile),
            u8::from(self.halvable)
        )
    }
}

impl Colour {
    pub fn encode(&self) -> String {
        self.to_string()
    }

    pub fn decode(text: &str) -> Result<Colour, ColouringError> {
        let err = |reason: &str| ColouringError::Decode {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let mut parts = text.split(';');
        let (Some(d), Some(y), Some(h), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(err("expected d[..];y[..];hN"));
        };
        let profile = |s: &str, prefix: &str| -> Result<Profile, ColouringError> {
            let body = s
                .strip_prefix(prefix)
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| err("bad profile brackets"))?;
            if body.is_empty() {
                return Ok(Profile::default());
            }
            let values = body
                .split(',')
                .map(|v| match parse_rational(v) {
                    Some(r) if !r.is_zero() => Ok(r),
                    _ => Err(err("profile values must be nonzero canonical rationals")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Profile::new(values))
        };
        let halvable = match h {
            "h1" => true,
            "h0" => false,
            _ => return Err(err("halvable flag must be h0 or h1")),
        };
        Ok(Colour {
            d_profile: profile(d, "d[")?,
            y_profile: profile(y, "y[")?,
            halvable,
        })
    }
}

impl FromStr for Colour {
    type Err = ColouringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Colour::decode(s)
    }
}
