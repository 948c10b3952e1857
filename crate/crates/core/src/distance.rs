//! Graph distance from the triangle `P = {0, 1, 1+ζ}` in the undirected
//! six-neighbor lattice, and the `g1, g2, g3` functions built from it.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::eisenstein::{Eisenstein, Step};
use crate::error::{Error, Result};
use crate::regions::{classify, lattice_box, RegionLabel};
use crate::report::{ReportBuilder, VerificationReport};

/// The three points of `P`.
pub const P_POINTS: [Eisenstein; 3] = [Eisenstein::new(0, 0), Eisenstein::new(1, 0), Eisenstein::new(1, 1)];

/// Hops from `d` to the origin using steps `±1, ±ζ, ±ζ²`.
pub fn hex_dist(d: Eisenstein) -> u64 {
    let (a, b) = (d.a.unsigned_abs(), d.b.unsigned_abs());
    if (d.a >= 0) == (d.b >= 0) || d.a == 0 || d.b == 0 {
        a.max(b)
    } else {
        a + b
    }
}

/// `‖z‖`: the length of a shortest lattice path from `P` to `z`.
pub fn norm(z: Eisenstein) -> u64 {
    P_POINTS.iter().map(|&p| hex_dist(z - p)).min().expect("P is nonempty")
}

/// `‖z‖` by breadth-first search from `P`, giving up past `bound` hops.
pub fn norm_bfs(z: Eisenstein, bound: u32) -> Result<u64> {
    let mut seen: HashSet<Eisenstein> = P_POINTS.into_iter().collect();
    let mut frontier: VecDeque<(Eisenstein, u32)> = P_POINTS.iter().map(|&p| (p, 0)).collect();
    while let Some((x, d)) = frontier.pop_front() {
        if x == z {
            return Ok(d as u64);
        }
        if d == bound {
            continue;
        }
        for y in x.neighbors() {
            if seen.insert(y) {
                frontier.push_back((y, d + 1));
            }
        }
    }
    Err(Error::BoundExceeded { point: z, bound })
}

/// Distances from `P` for every point of the box `|a|, |b| ≤ radius`, by one
/// multi-source BFS. The box is geodesically convex for this metric, so
/// restricting the search to it loses no shortest paths.
#[derive(Clone, Debug)]
pub struct DistanceField {
    radius: i64,
    dist: Vec<u32>,
}

impl DistanceField {
    pub fn bfs(radius: i64) -> Self {
        assert!(radius >= 1, "distance field needs radius >= 1");
        let side = (2 * radius + 1) as usize;
        let mut dist = vec![u32::MAX; side * side];
        let index = |z: Eisenstein| -> Option<usize> {
            (z.a.abs() <= radius && z.b.abs() <= radius)
                .then(|| (z.a + radius) as usize * side + (z.b + radius) as usize)
        };
        let mut queue = VecDeque::new();
        for p in P_POINTS {
            dist[index(p).expect("P inside box")] = 0;
            queue.push_back(p);
        }
        while let Some(x) = queue.pop_front() {
            let d = dist[index(x).unwrap()];
            for y in x.neighbors() {
                if let Some(i) = index(y) {
                    if dist[i] == u32::MAX {
                        dist[i] = d + 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        DistanceField { radius, dist }
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn get(&self, z: Eisenstein) -> Option<u64> {
        let r = self.radius;
        if z.a.abs() > r || z.b.abs() > r {
            return None;
        }
        let side = (2 * r + 1) as usize;
        Some(self.dist[(z.a + r) as usize * side + (z.b + r) as usize] as u64)
    }
}

/// `(g1, g2, g3)` at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GValues {
    pub g1: Eisenstein,
    pub g2: Eisenstein,
    pub g3: i64,
}

/// `g1 = ‖z+1‖ + ζ²‖z+ζ‖ + ζ‖z+ζ²‖`, `g2 = ‖z+1‖ + ζ‖z+ζ‖ + ζ²‖z+ζ²‖`,
/// `g3 = ‖z+1‖ + ‖z+ζ‖ + ‖z+ζ²‖ - 3‖z‖`.
pub fn g_with(z: Eisenstein, norm_of: impl Fn(Eisenstein) -> u64) -> GValues {
    let n = Step::ALL.map(|s| norm_of(z + s.value()) as i64);
    let e = Eisenstein::from_int;
    let g1 = e(n[0]) + Eisenstein::ZETA2.scale(n[1]) + Eisenstein::ZETA.scale(n[2]);
    let g2 = e(n[0]) + Eisenstein::ZETA.scale(n[1]) + Eisenstein::ZETA2.scale(n[2]);
    let g3 = n[0] + n[1] + n[2] - 3 * norm_of(z) as i64;
    GValues { g1, g2, g3 }
}

pub fn g(z: Eisenstein) -> GValues {
    g_with(z, norm)
}

/// Expected `g` values per region label.
#[derive(Clone, Debug, PartialEq)]
pub struct GTable {
    entries: BTreeMap<RegionLabel, GValues>,
}

impl GTable {
    /// The values tabulated alongside the Tanaka formula, one column per label.
    pub fn published() -> Self {
        use RegionLabel::*;
        let e = Eisenstein::new;
        // (label, g1, g3); g2 is the conjugate of g1 in every column.
        let rows: [(RegionLabel, Eisenstein, i64); 15] = [
            (A1, e(2, 1), 0),   // 1 - ζ²
            (A2, e(1, 2), 0),   // ζ - ζ²
            (A3, e(-1, 1), 0),  // ζ - 1
            (A4, e(-2, -1), 0), // ζ² - 1
            (A5, e(-1, -2), 0), // ζ² - ζ
            (A6, e(1, -1), 0),  // 1 - ζ
            (B1, e(1, 0), 1),
            (B2, e(-1, -1), 1), // ζ²
            (B3, e(0, 1), 1),   // ζ
            (B4, e(-2, 0), 1),
            (B5, e(2, 2), 1),  // -2ζ²
            (B6, e(0, -2), 1), // -2ζ
            (P0, e(-1, 0), 2),
            (P1, e(1, 1), 2),   // -ζ²
            (P1Z, e(0, -1), 2), // -ζ
        ];
        let mut entries = BTreeMap::new();
        for (label, g1, g3) in rows {
            entries.insert(label, GValues { g1, g2: g1.conj(), g3 });
        }
        GTable { entries }
    }

    pub fn get(&self, label: RegionLabel) -> GValues {
        self.entries[&label]
    }

    /// Exchanges two columns; used to build negative controls.
    pub fn swapped(mut self, x: RegionLabel, y: RegionLabel) -> Self {
        let vx = self.entries[&x];
        let vy = self.entries[&y];
        self.entries.insert(x, vy);
        self.entries.insert(y, vx);
        self
    }
}

/// Compares `g(z)` against `table` for every point with `|a|, |b| ≤ radius`.
pub fn verify_tables_against(radius: i64, table: &GTable) -> Result<VerificationReport> {
    if radius < 3 {
        return Err(Error::InvalidConfig(format!("table verification needs radius >= 3, got {radius}")));
    }
    let mut report = ReportBuilder::new("tables");
    for (i, z) in lattice_box(radius).enumerate() {
        let label = classify(z);
        let want = table.get(label);
        let got = g(z);
        report.checked(1);
        if got != want {
            report.violation(
                i as u64,
                format!("{z} in {label}"),
                format!("g1={} g2={} g3={}", want.g1, want.g2, want.g3),
                format!("g1={} g2={} g3={}", got.g1, got.g2, got.g3),
            );
        }
    }
    Ok(report.finish())
}

pub fn verify_tables(radius: i64) -> Result<VerificationReport> {
    verify_tables_against(radius, &GTable::published())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: i64, b: i64) -> Eisenstein {
        Eisenstein::new(a, b)
    }

    #[test]
    fn hex_dist_examples() {
        assert_eq!(hex_dist(e(0, 0)), 0);
        assert_eq!(hex_dist(e(2, 1)), 2);
        assert_eq!(hex_dist(e(1, -1)), 2);
        assert_eq!(hex_dist(e(-3, 0)), 3);
        assert_eq!(hex_dist(e(0, -4)), 4);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(e(1, 1)), 0);
        assert_eq!(norm(e(0, 1)), 1);
        for k in 2..30 {
            assert_eq!(norm(e(k, 0)), (k - 1) as u64);
        }
        for p in P_POINTS {
            assert_eq!(norm(p), 0);
        }
    }

    #[test]
    fn bfs_examples() {
        assert_eq!(norm_bfs(e(0, 0), 0), Ok(0));
        assert_eq!(norm_bfs(e(-1, -1), 5), Ok(1));
        assert_eq!(norm_bfs(e(-3, 0), 5), Ok(3));
        assert_eq!(norm_bfs(e(-3, 0), 2), Err(Error::BoundExceeded { point: e(-3, 0), bound: 2 }));
    }

    #[test]
    fn field_matches_single_point_bfs() {
        let field = DistanceField::bfs(6);
        for z in lattice_box(6) {
            assert_eq!(field.get(z), Some(norm_bfs(z, 20).unwrap()), "{z}");
        }
        assert_eq!(field.get(e(7, 0)), None);
    }

    #[test]
    fn g_examples() {
        let at0 = g(e(0, 0));
        assert_eq!((at0.g1, at0.g2, at0.g3), (e(-1, 0), e(-1, 0), 2));
        for k in 2..10 {
            let v = g(e(k, 0));
            assert_eq!((v.g1, v.g2, v.g3), (e(1, 0), e(1, 0), 1));
        }
        let a4 = g(e(0, 1));
        assert_eq!(a4.g1, Eisenstein::ZETA2 - Eisenstein::ONE);
        assert_eq!(a4.g3, 0);
    }

    #[test]
    fn small_ball_tables() {
        let r = verify_tables(3).unwrap();
        assert!(r.pass, "{:?}", r.violations);
        assert_eq!(r.checked, 49);
        assert!(matches!(verify_tables(2), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn swapped_table_is_caught() {
        let bad = GTable::published().swapped(RegionLabel::A2, RegionLabel::A6);
        let r = verify_tables_against(5, &bad).unwrap();
        assert!(!r.pass);
        assert!(r.violations[0].location.contains("A2") || r.violations[0].location.contains("A6"));
    }
}
