//! The fifteen-part partition of the lattice around the triangle
//! `P = {0, 1, 1+ζ}`, the three closed sectors, and the Tanaka weights.
//!
//! Classification is by closed-form inequalities on `z = a + bζ`:
//!
//! | label | region                 |
//! |-------|------------------------|
//! | P0    | `(0,0)`                |
//! | P1    | `(1,0)`                |
//! | P1Z   | `(1,1)`                |
//! | B1    | `b = 0, a ≥ 2`         |
//! | B2    | `a = 1, b ≥ 2`         |
//! | B3    | `a = b ≤ -1`           |
//! | B4    | `b = 0, a ≤ -1`        |
//! | B5    | `a = 1, b ≤ -1`        |
//! | B6    | `a = b ≥ 2`            |
//! | A1    | `a ≥ 2, b ≤ -1`        |
//! | A2    | `b ≤ -1, b+1 ≤ a ≤ 0`  |
//! | A3    | `b ≤ -1, a ≤ b-1`      |
//! | A4    | `a ≤ 0, b ≥ 1`         |
//! | A5    | `2 ≤ a ≤ b-1`          |
//! | A6    | `b ≥ 1, a ≥ b+1`       |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::eisenstein::Eisenstein;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionLabel {
    P0,
    P1,
    P1Z,
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 15] = [
        RegionLabel::P0,
        RegionLabel::P1,
        RegionLabel::P1Z,
        RegionLabel::A1,
        RegionLabel::A2,
        RegionLabel::A3,
        RegionLabel::A4,
        RegionLabel::A5,
        RegionLabel::A6,
        RegionLabel::B1,
        RegionLabel::B2,
        RegionLabel::B3,
        RegionLabel::B4,
        RegionLabel::B5,
        RegionLabel::B6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegionLabel::P0 => "P0",
            RegionLabel::P1 => "P1",
            RegionLabel::P1Z => "P1Z",
            RegionLabel::A1 => "A1",
            RegionLabel::A2 => "A2",
            RegionLabel::A3 => "A3",
            RegionLabel::A4 => "A4",
            RegionLabel::A5 => "A5",
            RegionLabel::A6 => "A6",
            RegionLabel::B1 => "B1",
            RegionLabel::B2 => "B2",
            RegionLabel::B3 => "B3",
            RegionLabel::B4 => "B4",
            RegionLabel::B5 => "B5",
            RegionLabel::B6 => "B6",
        }
    }

    pub fn is_p(self) -> bool {
        matches!(self, RegionLabel::P0 | RegionLabel::P1 | RegionLabel::P1Z)
    }

    pub fn is_sector(self) -> bool {
        use RegionLabel::*;
        matches!(self, A1 | A2 | A3 | A4 | A5 | A6)
    }

    pub fn is_ray(self) -> bool {
        use RegionLabel::*;
        matches!(self, B1 | B2 | B3 | B4 | B5 | B6)
    }

    /// The closed sector this label belongs to, if any.
    pub fn closure(self) -> Option<ClosureId> {
        use RegionLabel::*;
        match self {
            A1 | B1 | B5 | P1 => Some(ClosureId::A1),
            A3 | B3 | B4 | P0 => Some(ClosureId::A3),
            A5 | B2 | B6 | P1Z => Some(ClosureId::A5),
            A2 | A4 | A6 => None,
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegionLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RegionLabel::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown region label `{s}`"))
    }
}

/// The three closed sectors `Ā1 = A1 ∪ B1 ∪ B5 ∪ {1}`, `Ā3 = A3 ∪ B3 ∪ B4 ∪ {0}`
/// and `Ā5 = A5 ∪ B2 ∪ B6 ∪ {1+ζ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClosureId {
    A1,
    A3,
    A5,
}

impl ClosureId {
    pub const ALL: [ClosureId; 3] = [ClosureId::A1, ClosureId::A3, ClosureId::A5];

    pub fn name(self) -> &'static str {
        match self {
            ClosureId::A1 => "closure(A1)",
            ClosureId::A3 => "closure(A3)",
            ClosureId::A5 => "closure(A5)",
        }
    }

    /// The labels whose union is this closure.
    pub fn labels(self) -> [RegionLabel; 4] {
        use RegionLabel::*;
        match self {
            ClosureId::A1 => [A1, B1, B5, P1],
            ClosureId::A3 => [A3, B3, B4, P0],
            ClosureId::A5 => [A5, B2, B6, P1Z],
        }
    }
}

impl fmt::Display for ClosureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify(z: Eisenstein) -> RegionLabel {
    use RegionLabel::*;
    let Eisenstein { a, b } = z;
    match (a, b) {
        (0, 0) => P0,
        (1, 0) => P1,
        (1, 1) => P1Z,
        _ if b == 0 && a >= 2 => B1,
        _ if a == 1 && b >= 2 => B2,
        _ if a == b && b <= -1 => B3,
        _ if b == 0 && a <= -1 => B4,
        _ if a == 1 && b <= -1 => B5,
        _ if a == b && a >= 2 => B6,
        _ if a >= 2 && b <= -1 => A1,
        _ if b <= -1 && b < a && a <= 0 => A2,
        _ if b <= -1 && a < b => A3,
        _ if a <= 0 && b >= 1 => A4,
        _ if a >= 2 && a < b => A5,
        _ if b >= 1 && a > b => A6,
        _ => unreachable!("lattice point {z} escaped the region atlas"),
    }
}

pub fn in_closure(z: Eisenstein, c: ClosureId) -> bool {
    let Eisenstein { a, b } = z;
    match c {
        ClosureId::A1 => a >= 1 && b <= 0,
        ClosureId::A3 => a <= b && b <= 0,
        ClosureId::A5 => 1 <= a && a <= b,
    }
}

/// The closed sector containing `z`, if any. The three are pairwise disjoint.
pub fn closure_of(z: Eisenstein) -> Option<ClosureId> {
    ClosureId::ALL.into_iter().find(|&c| in_closure(z, c))
}

/// Martingale weight against `ΔZ`: `1` on Ā1, `ζ` on Ā3, `ζ²` on Ā5, zero elsewhere.
pub fn phi(z: Eisenstein) -> Eisenstein {
    match closure_of(z) {
        Some(ClosureId::A1) => Eisenstein::ONE,
        Some(ClosureId::A3) => Eisenstein::ZETA,
        Some(ClosureId::A5) => Eisenstein::ZETA2,
        None => Eisenstein::ZERO,
    }
}

/// Martingale weight against `conj(ΔZ)`: `1` on A6, `ζ` on A4, `ζ²` on A2, zero elsewhere.
pub fn psi(z: Eisenstein) -> Eisenstein {
    match classify(z) {
        RegionLabel::A6 => Eisenstein::ONE,
        RegionLabel::A4 => Eisenstein::ZETA,
        RegionLabel::A2 => Eisenstein::ZETA2,
        _ => Eisenstein::ZERO,
    }
}

/// All points with `|a|, |b| ≤ radius`, row-major in `(a, b)`.
pub fn lattice_box(radius: i64) -> impl Iterator<Item = Eisenstein> {
    (-radius..=radius).flat_map(move |a| (-radius..=radius).map(move |b| Eisenstein::new(a, b)))
}
