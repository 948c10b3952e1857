//! Independent oracles shared by the integration tests. Nothing here calls
//! the classifier or closed-form distance it is used to check.

#![allow(dead_code)]

use std::collections::HashSet;

use pwalk_core::eisenstein::Eisenstein;
use pwalk_core::regions::{ClosureId, RegionLabel};

const ZETA: Eisenstein = Eisenstein::ZETA;
const ZETA2: Eisenstein = Eisenstein::ZETA2;

fn int(n: i64) -> Eisenstein {
    Eisenstein::from_int(n)
}

/// Points produced by the generator form of `label` with both indices in `0..=max_index`.
pub fn generated(label: RegionLabel, max_index: i64) -> HashSet<Eisenstein> {
    use RegionLabel::*;
    let mut out = HashSet::new();
    let r = 0..=max_index;
    for k1 in r.clone() {
        match label {
            B1 if k1 >= 2 => {
                out.insert(int(k1));
            }
            B2 if k1 >= 1 => {
                out.insert(ZETA.scale(k1) - ZETA2);
            }
            B3 if k1 >= 1 => {
                out.insert(ZETA2.scale(k1));
            }
            B4 if k1 >= 1 => {
                out.insert(int(-k1));
            }
            B5 if k1 >= 1 => {
                out.insert(int(1) + ZETA.scale(-k1));
            }
            B6 if k1 >= 2 => {
                out.insert(ZETA2.scale(-k1));
            }
            P0 if k1 == 0 => {
                out.insert(int(0));
            }
            P1 if k1 == 0 => {
                out.insert(int(1));
            }
            P1Z if k1 == 0 => {
                out.insert(int(1) + ZETA);
            }
            _ => {}
        }
        for k2 in r.clone() {
            let z = match label {
                A1 if 1 < k2 + 1 && k2 + 1 < k1 => int(k1) + ZETA2.scale(k2),
                // corrected A2 sector: -k2 - k1ζ
                A2 if k2 < k1 => int(-k2) - ZETA.scale(k1),
                A3 if 0 < k2 && k2 < k1 => int(-k1) - ZETA.scale(k2),
                A4 if k2 < k1 => ZETA.scale(k1) + ZETA2.scale(k2),
                A5 if 1 < k2 + 1 && k2 + 1 < k1 => -ZETA2.scale(k1) - int(k2),
                A6 if 0 < k2 && k2 < k1 => int(k1) + ZETA.scale(k2),
                _ => continue,
            };
            out.insert(z);
        }
    }
    out
}

/// The A2 generator exactly as printed, `-k1ζ² - k2` with `0 ≤ k2 < k1`.
pub fn literal_a2(max_index: i64) -> HashSet<Eisenstein> {
    let mut out = HashSet::new();
    for k1 in 0..=max_index {
        for k2 in 0..k1 {
            out.insert(-ZETA2.scale(k1) - int(k2));
        }
    }
    out
}

/// Membership in the printed A2 set, which is `{1 ≤ a ≤ b}`.
pub fn in_literal_a2(z: Eisenstein) -> bool {
    1 <= z.a && z.a <= z.b
}

/// `ψ` built with the printed A2 set in place of the corrected sector.
pub fn psi_literal(z: Eisenstein) -> Eisenstein {
    let Eisenstein { a, b } = z;
    if b >= 1 && a > b {
        Eisenstein::ONE
    } else if a <= 0 && b >= 1 {
        Eisenstein::ZETA
    } else if in_literal_a2(z) {
        Eisenstein::ZETA2
    } else {
        Eisenstein::ZERO
    }
}

/// The fifteen label predicates written out separately, so that overlaps and
/// gaps are visible instead of being hidden by match-arm order.
#[allow(clippy::int_plus_one)]
pub fn label_predicates(z: Eisenstein) -> Vec<RegionLabel> {
    use RegionLabel::*;
    let Eisenstein { a, b } = z;
    let tests: [(RegionLabel, bool); 15] = [
        (P0, a == 0 && b == 0),
        (P1, a == 1 && b == 0),
        (P1Z, a == 1 && b == 1),
        (B1, b == 0 && a >= 2),
        (B2, a == 1 && b >= 2),
        (B3, a == b && b <= -1),
        (B4, b == 0 && a <= -1),
        (B5, a == 1 && b <= -1),
        (B6, a == b && a >= 2),
        (A1, a >= 2 && b <= -1),
        (A2, b <= -1 && b + 1 <= a && a <= 0),
        (A3, b <= -1 && a <= b - 1),
        (A4, a <= 0 && b >= 1),
        (A5, 2 <= a && a <= b - 1),
        (A6, b >= 1 && a >= b + 1),
    ];
    tests.into_iter().filter(|(_, hit)| *hit).map(|(l, _)| l).collect()
}

pub fn closure_union(z: Eisenstein, c: ClosureId) -> bool {
    let labels = label_predicates(z);
    c.labels().iter().any(|l| labels.contains(l))
}

pub fn box_points(radius: i64) -> impl Iterator<Item = Eisenstein> {
    (-radius..=radius).flat_map(move |a| (-radius..=radius).map(move |b| Eisenstein::new(a, b)))
}
