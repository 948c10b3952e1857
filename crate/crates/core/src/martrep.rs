//! Orthonormal basis `{ΔZ_S}` of functionals of the first `t` steps and the
//! first-order martingale representation it induces.
//!
//! For a word `S = (s_1, ..., s_t)` over `{1, ζ, ζ²}`,
//! `ΔZ_S = Π_{s_i = ζ} ΔZ_i · Π_{s_i = ζ²} conj(ΔZ_i)`; letters equal to `1`
//! contribute no factor. Every `ΔZ_i` is a cube root of unity, so with words
//! and paths both written as digit strings over `{0, 1, 2}`,
//! `ΔZ_S(path) = ζ^{⟨S, path⟩ mod 3}`.
//!
//! Expectations are exact averages over all `3^t` equally likely paths.

use std::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::eisenstein::{Eisenstein, Step};
use crate::error::{Error, Result};
use crate::exact::Triadic;
use crate::report::{ReportBuilder, VerificationReport};
use crate::walk::{radial, steps_from_index, WalkPath};

pub const GRAM_CAP: usize = 5;
pub const REPRESENTATION_CAP: usize = 7;

const UNIT: [Eisenstein; 3] = [Eisenstein::ONE, Eisenstein::ZETA, Eisenstein::ZETA2];

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignatureWord(pub Vec<Step>);

impl SignatureWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Lexicographic rank among words of the same length.
    pub fn rank(&self) -> usize {
        self.0.iter().fold(0, |acc, s| 3 * acc + s.index())
    }

    pub fn from_rank(rank: usize, len: usize) -> Self {
        SignatureWord(steps_from_index(rank, len))
    }

    /// All `3^t` words of length `t`, lexicographically.
    pub fn all(len: usize) -> impl Iterator<Item = SignatureWord> {
        (0..3usize.pow(len as u32)).map(move |r| SignatureWord::from_rank(r, len))
    }
}

impl fmt::Display for SignatureWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// `ΔZ_S` on the first `|S|` increments of `path`, by direct product.
pub fn onb_element(word: &SignatureWord, path: &WalkPath) -> Result<Eisenstein> {
    if path.len() < word.len() {
        return Err(Error::LengthMismatch { word: word.len(), path: path.len() });
    }
    let mut acc = Eisenstein::ONE;
    for (s, dz) in word.0.iter().zip(path.steps()) {
        match s {
            Step::One => {}
            Step::Zeta => acc = acc.checked_mul(dz.value())?,
            Step::Zeta2 => acc = acc.checked_mul(dz.value().checked_conj()?)?,
        }
    }
    Ok(acc)
}

/// Exponent `k` with `ΔZ_S(path) = ζ^k`, for word and path ranks of length `len`.
fn onb_exponent(mut word: usize, mut path: usize, len: usize) -> usize {
    let mut k = 0;
    for _ in 0..len {
        k += (word % 3) * (path % 3);
        word /= 3;
        path /= 3;
    }
    k % 3
}

/// Checks `E[ΔZ_S conj(ΔZ_S')] = δ_{S,S'}` over all words of length `t`, by
/// comparing the path sums against `3^t` times the identity.
pub fn gram_check(t: usize) -> Result<VerificationReport> {
    if t > GRAM_CAP {
        return Err(Error::EnumerationCap { requested: t, cap: GRAM_CAP });
    }
    let n = 3usize.pow(t as u32);
    let mut report = ReportBuilder::new(format!("gram[t={t}]"));
    // basis[S][p] = ΔZ_S on path p
    let paths: Vec<WalkPath> = (0..n).map(|p| WalkPath::new(Eisenstein::ZERO, steps_from_index(p, t))).collect();
    let basis: Vec<Vec<Eisenstein>> = SignatureWord::all(t)
        .map(|w| paths.iter().map(|p| onb_element(&w, p)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let scale = n as i64;
    for (i, row) in basis.iter().enumerate() {
        for (j, col) in basis.iter().enumerate() {
            let mut sum = Eisenstein::ZERO;
            for (x, y) in row.iter().zip(col) {
                sum = sum.checked_add(x.checked_mul(y.checked_conj()?)?)?;
            }
            let want = if i == j { Eisenstein::from_int(scale) } else { Eisenstein::ZERO };
            report.checked(1);
            if sum != want {
                report.violation(
                    (i * n + j) as u64,
                    format!("S={}, S'={}", SignatureWord::from_rank(i, t), SignatureWord::from_rank(j, t)),
                    Triadic::new(want, t as u32),
                    Triadic::new(sum, t as u32),
                );
            }
        }
    }
    Ok(report.finish())
}

/// A process adapted to the step filtration: `tables[t][prefix rank]` is
/// `X_t` on that prefix. Built from functions of the prefix alone, so
/// adaptedness holds by construction.
#[derive(Clone, Debug)]
pub struct AdaptedFunctional {
    name: String,
    horizon: usize,
    tables: Vec<Vec<Triadic>>,
}

impl AdaptedFunctional {
    /// Tabulates `f` on every prefix path from `start` of length `0..=horizon`.
    pub fn from_fn(
        name: impl Into<String>,
        start: Eisenstein,
        horizon: usize,
        f: impl Fn(&WalkPath) -> Triadic,
    ) -> Result<Self> {
        if horizon > REPRESENTATION_CAP {
            return Err(Error::EnumerationCap { requested: horizon, cap: REPRESENTATION_CAP });
        }
        let tables = (0..=horizon)
            .map(|t| (0..3usize.pow(t as u32)).map(|p| f(&WalkPath::new(start, steps_from_index(p, t)))).collect())
            .collect();
        Ok(AdaptedFunctional { name: name.into(), horizon, tables })
    }

    /// `X_t = Z_t`.
    pub fn position(start: Eisenstein, horizon: usize) -> Result<Self> {
        Self::from_fn("Z", start, horizon, |p| Triadic::from(p.end()))
    }

    /// `X_t = conj(Z_t)`.
    pub fn conj_position(start: Eisenstein, horizon: usize) -> Result<Self> {
        Self::from_fn("conj(Z)", start, horizon, |p| Triadic::from(p.end().conj()))
    }

    /// `X_t = ‖Z_t‖ - L_t`.
    pub fn radial(start: Eisenstein, horizon: usize) -> Result<Self> {
        Self::from_fn("radial", start, horizon, |p| {
            Triadic::from_int(*radial(p).values.last().expect("nonempty"))
        })
    }

    /// Independent seeded values `(x + yζ)/3`, `|x|, |y| ≤ 9`, on every prefix.
    pub fn random(seed: u64, horizon: usize) -> Result<Self> {
        if horizon > REPRESENTATION_CAP {
            return Err(Error::EnumerationCap { requested: horizon, cap: REPRESENTATION_CAP });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut small = move || (rng.next_u64() % 19) as i64 - 9;
        let tables = (0..=horizon)
            .map(|t| {
                (0..3usize.pow(t as u32))
                    .map(|_| {
                        let x = small();
                        let y = small();
                        Triadic::new(Eisenstein::new(x, y), 1)
                    })
                    .collect()
            })
            .collect();
        Ok(AdaptedFunctional { name: format!("random[{seed}]"), horizon, tables })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// `X_t` on the prefix with lexicographic rank `prefix`.
    pub fn value(&self, t: usize, prefix: usize) -> Triadic {
        self.tables[t][prefix]
    }

    /// `X_t - X_{t-1}` on the length-`t` prefix `path`.
    pub fn increment(&self, t: usize, path: usize) -> Triadic {
        self.tables[t][path] - self.tables[t - 1][path / 3]
    }
}

/// `x_S = E[(X_t - X_{t-1}) conj(ΔZ_S)]` for every word of length `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficients {
    t: usize,
    values: Vec<Triadic>,
}

impl Coefficients {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn get(&self, word: &SignatureWord) -> Triadic {
        self.values[word.rank()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (SignatureWord, Triadic)> + '_ {
        self.values.iter().enumerate().map(|(r, &x)| (SignatureWord::from_rank(r, self.t), x))
    }
}

pub fn coefficients(x: &AdaptedFunctional, t: usize) -> Result<Coefficients> {
    if t > x.horizon() || t == 0 {
        return Err(Error::InvalidConfig(format!("coefficients need 1 <= t <= {}, got {t}", x.horizon())));
    }
    let n = 3usize.pow(t as u32);
    let conj_unit = UNIT.map(|u| Triadic::from(u.conj()));
    let increments: Vec<Triadic> = (0..n).map(|p| x.increment(t, p)).collect();
    let values = (0..n)
        .map(|w| {
            let sum: Triadic = increments
                .iter()
                .enumerate()
                .map(|(p, &dx)| dx * conj_unit[onb_exponent(w, p, t)])
                .sum();
            sum.div_pow3(t as u32)
        })
        .collect();
    Ok(Coefficients { t, values })
}

/// The regrouped expansion of `X_t - X_{t-1}` on one path: an integrand
/// against `ΔZ_t`, one against `conj(ΔZ_t)`, and the predictable drift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub dz: Triadic,
    pub dzbar: Triadic,
    pub drift: Triadic,
}

impl Decomposition {
    pub fn evaluate(&self, last: Step) -> Triadic {
        self.dz * Triadic::from(last.value()) + self.dzbar * Triadic::from(last.conj().value()) + self.drift
    }
}

/// Integrands on the prefix of rank `prefix` (length `t - 1`). They depend only
/// on that prefix.
pub fn decompose(coeffs: &Coefficients, prefix: usize) -> Decomposition {
    let t = coeffs.t;
    let units = UNIT.map(Triadic::from);
    let mut groups = [Triadic::ZERO; 3];
    for (w, &x) in coeffs.values.iter().enumerate() {
        let head = w / 3;
        let last = w % 3;
        groups[last] = groups[last] + x * units[onb_exponent(head, prefix, t - 1)];
    }
    Decomposition { dz: groups[1], dzbar: groups[2], drift: groups[0] }
}

/// Verifies, for `t = 1..=T` and every path, that `X_t - X_{t-1}` equals its
/// regrouped expansion exactly, that the drift is the conditional mean of the
/// increment, and Parseval. With `martingale`, also that the drift vanishes.
pub fn representation_check(x: &AdaptedFunctional, horizon: usize, martingale: bool) -> Result<VerificationReport> {
    if horizon > REPRESENTATION_CAP {
        return Err(Error::EnumerationCap { requested: horizon, cap: REPRESENTATION_CAP });
    }
    if horizon > x.horizon() {
        return Err(Error::InvalidConfig(format!(
            "functional {} is tabulated to {} steps, {horizon} requested",
            x.name(),
            x.horizon()
        )));
    }
    let mut report = ReportBuilder::new(format!("martrep[{}]", x.name()));
    let mut index = 0u64;
    for t in 1..=horizon {
        let coeffs = coefficients(x, t)?;
        let n_prefix = 3usize.pow(t as u32 - 1);
        let mut second_moment = Triadic::ZERO;
        for prefix in 0..n_prefix {
            let d = decompose(&coeffs, prefix);
            let mut mean = Triadic::ZERO;
            for s in Step::ALL {
                let p = 3 * prefix + s.index();
                let dx = x.increment(t, p);
                let rhs = d.evaluate(s);
                report.checked(1);
                if dx != rhs {
                    report.violation(
                        index,
                        format!("t={t}, path={}", SignatureWord::from_rank(p, t)),
                        dx,
                        rhs,
                    );
                }
                index += 1;
                mean = mean + dx;
                second_moment = second_moment + dx.abs_sq();
            }
            let mean = mean.div_pow3(1);
            report.checked(1);
            if mean != d.drift {
                report.violation(
                    index,
                    format!("t={t}, prefix={}: conditional mean", SignatureWord::from_rank(prefix, t - 1)),
                    d.drift,
                    mean,
                );
            }
            if martingale {
                report.checked(1);
                if !d.drift.is_zero() {
                    report.violation(
                        index,
                        format!("t={t}, prefix={}: martingale drift", SignatureWord::from_rank(prefix, t - 1)),
                        Triadic::ZERO,
                        d.drift,
                    );
                }
            }
        }
        let parseval: Triadic = coeffs.values.iter().map(|x| x.abs_sq()).sum();
        let second_moment = second_moment.div_pow3(t as u32);
        report.checked(1);
        if parseval != second_moment {
            report.violation(index, format!("t={t}: Parseval"), second_moment, parseval);
        }
        index += 1;
    }
    report.note("exhaustive over all paths; exact rational arithmetic");
    Ok(report.finish())
}
