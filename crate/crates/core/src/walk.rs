//! Walk paths, exit-counting local time and the radial process `‖Z_t‖ - L_t`.

use num_rational::Ratio;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::distance::norm;
use crate::eisenstein::{Eisenstein, Step};
use crate::error::{Error, Result};
use crate::regions::{closure_of, in_closure, ClosureId};

/// Longest horizon `enumerate_paths` accepts.
pub const ENUMERATION_CAP: usize = 13;
/// Longest horizon for the exact trinomial law (`3^40 < 2^64`).
pub const EXACT_LAW_CAP: usize = 40;

/// Uniform steps keyed by `(seed, trial, step index)`.
///
/// Trial `n` reads ChaCha8 stream `n` under the master seed, and step `i`
/// is drawn from the 64-bit word pair at position `2i`, so any step of any
/// trial can be regenerated independently of the others.
#[derive(Clone, Debug)]
pub struct StepStream {
    rng: ChaCha8Rng,
}

impl StepStream {
    pub fn new(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        StepStream { rng }
    }

    fn draw(word: u64) -> Step {
        // multiply-shift onto {0, 1, 2}; bias is below 2^-62
        Step::from_index(((word as u128 * 3) >> 64) as usize)
    }

    pub fn next_step(&mut self) -> Step {
        Self::draw(self.rng.next_u64())
    }

    pub fn step_at(&mut self, index: u64) -> Step {
        self.rng.set_word_pos(2 * index as u128);
        self.next_step()
    }
}

impl Iterator for StepStream {
    type Item = Step;
    fn next(&mut self) -> Option<Step> {
        Some(self.next_step())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkPath {
    start: Eisenstein,
    steps: Vec<Step>,
    positions: Vec<Eisenstein>,
}

impl WalkPath {
    pub fn new(start: Eisenstein, steps: Vec<Step>) -> Self {
        let mut positions = Vec::with_capacity(steps.len() + 1);
        positions.push(start);
        let mut z = start;
        for s in &steps {
            z = z + s.value();
            positions.push(z);
        }
        WalkPath { start, steps, positions }
    }

    pub fn start(&self) -> Eisenstein {
        self.start
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// `Z_0, ..., Z_T`.
    pub fn positions(&self) -> &[Eisenstein] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> Eisenstein {
        *self.positions.last().expect("positions always holds the start")
    }
}

pub fn simulate(start: Eisenstein, n_steps: usize, seed: u64) -> WalkPath {
    WalkPath::new(start, StepStream::new(seed, 0).take(n_steps).collect())
}

/// Which closed sector, if any, is left by the move `z -> next`. At most one,
/// since the sectors are disjoint.
pub fn exit_from(z: Eisenstein, next: Eisenstein) -> Option<ClosureId> {
    closure_of(z).filter(|&c| !in_closure(next, c))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTimeLedger {
    pub l1: u64,
    pub l3: u64,
    pub l5: u64,
}

impl LocalTimeLedger {
    /// `L = l1 + l3 + l5`.
    pub fn total(&self) -> u64 {
        self.l1 + self.l3 + self.l5
    }

    /// Charges the move `z -> next`; returns whether an exit happened.
    pub fn record(&mut self, z: Eisenstein, next: Eisenstein) -> bool {
        match exit_from(z, next) {
            Some(ClosureId::A1) => self.l1 += 1,
            Some(ClosureId::A3) => self.l3 += 1,
            Some(ClosureId::A5) => self.l5 += 1,
            None => return false,
        }
        true
    }
}

/// Ledger at every time `0..=T`. The exit on the move from `Z_u` to `Z_{u+1}`
/// is charged to time `u + 1`.
pub fn local_time(path: &WalkPath) -> Vec<LocalTimeLedger> {
    let mut ledger = LocalTimeLedger::default();
    let mut out = Vec::with_capacity(path.positions.len());
    out.push(ledger);
    for w in path.positions.windows(2) {
        ledger.record(w[0], w[1]);
        out.push(ledger);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadialProcess {
    pub values: Vec<i64>,
}

impl RadialProcess {
    pub fn increments(&self) -> impl Iterator<Item = i64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }
}

/// `X_t = ‖Z_t‖ - L_t`.
pub fn radial(path: &WalkPath) -> RadialProcess {
    let values = path
        .positions
        .iter()
        .zip(local_time(path))
        .map(|(&z, l)| norm(z) as i64 - l.total() as i64)
        .collect();
    RadialProcess { values }
}

/// One step of the radial process from `z`: `‖z+s‖ - ‖z‖ - (1 if the move exits a closed sector)`.
pub fn radial_increment(z: Eisenstein, s: Step) -> i64 {
    let next = z + s.value();
    norm(next) as i64 - norm(z) as i64 - exit_from(z, next).is_some() as i64
}

/// Step sequence with lexicographic rank `index` among `{1, ζ, ζ²}^len`.
pub fn steps_from_index(mut index: usize, len: usize) -> Vec<Step> {
    let mut steps = vec![Step::One; len];
    for slot in steps.iter_mut().rev() {
        *slot = Step::from_index(index % 3);
        index /= 3;
    }
    steps
}

/// All `3^T` paths from `start`, in lexicographic order of their step sequences.
pub fn enumerate_paths(start: Eisenstein, horizon: usize) -> Result<impl ExactSizeIterator<Item = WalkPath>> {
    if horizon > ENUMERATION_CAP {
        return Err(Error::EnumerationCap { requested: horizon, cap: ENUMERATION_CAP });
    }
    let count = 3usize.pow(horizon as u32);
    Ok((0..count).map(move |k| WalkPath::new(start, steps_from_index(k, horizon))))
}

/// Exact law of `X_T - X_0` for the lazy simple walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleWalkLaw {
    horizon: usize,
    /// `counts[k + T]` = number of step sequences ending at `k`.
    counts: Vec<u128>,
}

impl SimpleWalkLaw {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn denominator(&self) -> u128 {
        3u128.pow(self.horizon as u32)
    }

    pub fn count(&self, k: i64) -> u128 {
        let t = self.horizon as i64;
        if k.abs() > t {
            0
        } else {
            self.counts[(k + t) as usize]
        }
    }

    pub fn probability(&self, k: i64) -> Ratio<u128> {
        Ratio::new(self.count(k), self.denominator())
    }

    /// `(k, P(X_T - X_0 = k))` for `k = -T..=T`.
    pub fn support(&self) -> impl Iterator<Item = (i64, Ratio<u128>)> + '_ {
        let t = self.horizon as i64;
        (-t..=t).map(move |k| (k, self.probability(k)))
    }
}

pub fn simple_walk_law(horizon: usize) -> Result<SimpleWalkLaw> {
    if horizon > EXACT_LAW_CAP {
        return Err(Error::EnumerationCap { requested: horizon, cap: EXACT_LAW_CAP });
    }
    let mut counts = vec![1u128];
    for _ in 0..horizon {
        let mut next = vec![0u128; counts.len() + 2];
        for (i, &c) in counts.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c;
            next[i + 2] += c;
        }
        counts = next;
    }
    Ok(SimpleWalkLaw { horizon, counts })
}

/// Floating-point trinomial pmf for horizons past the exact cap; index `k + T`.
pub fn simple_walk_pmf(horizon: usize) -> Vec<f64> {
    let mut p = vec![1.0f64];
    for _ in 0..horizon {
        let mut next = vec![0.0; p.len() + 2];
        for (i, &q) in p.iter().enumerate() {
            let third = q / 3.0;
            next[i] += third;
            next[i + 1] += third;
            next[i + 2] += third;
        }
        p = next;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: i64, b: i64) -> Eisenstein {
        Eisenstein::new(a, b)
    }

    #[test]
    fn empty_simulation() {
        let p = simulate(e(0, 0), 0, 7);
        assert_eq!(p.positions(), &[e(0, 0)]);
    }

    #[test]
    fn simulation_is_deterministic() {
        assert_eq!(simulate(e(0, 0), 5, 42), simulate(e(0, 0), 5, 42));
        assert_ne!(simulate(e(0, 0), 64, 42), simulate(e(0, 0), 64, 43));
    }

    #[test]
    fn random_access_matches_sequential() {
        let seq: Vec<Step> = StepStream::new(9, 3).take(50).collect();
        let mut s = StepStream::new(9, 3);
        for i in (0..50).rev() {
            assert_eq!(s.step_at(i as u64), seq[i]);
        }
    }

    #[test]
    fn step_frequencies_are_uniform() {
        let n = 100_000usize;
        let mut counts = [0usize; 3];
        for s in StepStream::new(2024, 0).take(n) {
            counts[s.index()] += 1;
        }
        let mean = n as f64 / 3.0;
        let sd = (n as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for c in counts {
            assert!((c as f64 - mean).abs() < 3.0 * sd, "{counts:?}");
        }
    }

    #[test]
    fn local_time_examples() {
        let l = local_time(&WalkPath::new(e(0, 0), vec![Step::One]));
        assert_eq!(l[0].total(), 0);
        assert_eq!(l[1], LocalTimeLedger { l1: 0, l3: 1, l5: 0 });
        let l = local_time(&WalkPath::new(e(0, 0), vec![Step::Zeta2]));
        assert_eq!(l[1].total(), 0);
        let l = local_time(&WalkPath::new(e(2, -1), vec![Step::One; 20]));
        assert!(l.iter().all(|x| x.total() == 0));
    }

    #[test]
    fn radial_examples() {
        let x = |s| radial(&WalkPath::new(e(0, 0), vec![s])).values;
        assert_eq!(x(Step::One), vec![0, -1]);
        assert_eq!(x(Step::Zeta), vec![0, 0]);
        assert_eq!(x(Step::Zeta2), vec![0, 1]);
        for s in Step::ALL {
            assert_eq!(radial_increment(e(0, 0), s), x(s)[1]);
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_paths(e(0, 0), 1).unwrap().len(), 3);
        assert_eq!(enumerate_paths(e(0, 0), 9).unwrap().count(), 19683);
        assert_eq!(
            enumerate_paths(e(0, 0), 14).err(),
            Some(Error::EnumerationCap { requested: 14, cap: 13 })
        );
        let steps: Vec<Vec<Step>> = enumerate_paths(e(0, 0), 3).unwrap().map(|p| p.steps().to_vec()).collect();
        let mut sorted = steps.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(steps, sorted);
    }

    #[test]
    fn enumeration_is_a_martingale() {
        // E[Z_{t+1} | prefix] = Z_t exactly: the three children of every node sum to 3 Z_t.
        for t in 0..6 {
            for p in enumerate_paths(e(2, -1), t).unwrap() {
                let sum = Step::ALL.iter().fold(Eisenstein::ZERO, |acc, s| acc + p.end() + s.value());
                assert_eq!(sum, p.end().scale(3));
            }
        }
    }

    #[test]
    fn ledger_and_radial_invariants_on_enumeration() {
        for start in [e(0, 0), e(1, 0), e(1, 1), e(-2, 3)] {
            for p in enumerate_paths(start, 7).unwrap() {
                let l = local_time(&p);
                for w in l.windows(2) {
                    let d = w[1].total() - w[0].total();
                    assert!(d <= 1);
                    assert!(w[1].l1 >= w[0].l1 && w[1].l3 >= w[0].l3 && w[1].l5 >= w[0].l5);
                }
                assert!(radial(&p).increments().all(|d| (-1..=1).contains(&d)));
            }
        }
    }

    #[test]
    fn simple_walk_law_examples() {
        let law = simple_walk_law(1).unwrap();
        for k in -1..=1 {
            assert_eq!(law.probability(k), Ratio::new(1, 3));
        }
        let law = simple_walk_law(2).unwrap();
        let got: Vec<_> = law.support().map(|(_, p)| p).collect();
        let want: Vec<_> = [1u128, 2, 3, 2, 1].iter().map(|&c| Ratio::new(c, 9)).collect();
        assert_eq!(got, want);
        assert_eq!(simple_walk_law(0).unwrap().probability(0), Ratio::from_integer(1));
        assert!(simple_walk_law(41).is_err());
        let law40 = simple_walk_law(40).unwrap();
        let total: u128 = (-40..=40).map(|k| law40.count(k)).sum();
        assert_eq!(total, law40.denominator());
    }

    #[test]
    fn float_pmf_agrees_with_exact_law() {
        let law = simple_walk_law(30).unwrap();
        let pmf = simple_walk_pmf(30);
        for k in -30i64..=30 {
            let exact = law.count(k) as f64 / law.denominator() as f64;
            assert!((pmf[(k + 30) as usize] - exact).abs() <= 1e-12 * exact);
        }
    }
}
