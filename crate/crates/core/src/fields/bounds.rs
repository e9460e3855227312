//! Measured constants of the boost commutator inequalities
//! `|H^I X u| ≤ |X H^I u| + C Σ_{|J|<|I|} Σ_Y |Y H^J u|`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::geometry::SpacetimePoint;
use crate::jet::Jet;

use super::field::ScalarField;
use super::operators::{apply_jet, CoordinateJets, FieldOperator as Op};
use super::{FieldError, Result};

/// Largest word length accepted by the bound checks.
pub const MAX_BOUND_ORDER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CommutatorBound {
    /// `X = ∂_α`, lower terms `∂_β H^J u`.
    BoostPartial,
    /// Summed over `i` and `|I| = p`: `X = ∂̄_i`, lower terms `∂̄_j H^J u`.
    BoostTangent,
    /// `X = (T/t)∂_α`, lower terms `(T/t)∂_β H^J u`.
    BoostWeighted,
    /// `X, Y ∈ 𝒟_g`; only meaningful on `r ≥ t/2`.
    BoostGood,
}

impl CommutatorBound {
    pub const ALL: [CommutatorBound; 4] = [
        CommutatorBound::BoostPartial,
        CommutatorBound::BoostTangent,
        CommutatorBound::BoostWeighted,
        CommutatorBound::BoostGood,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            CommutatorBound::BoostPartial => "boost-partial",
            CommutatorBound::BoostTangent => "boost-tangent",
            CommutatorBound::BoostWeighted => "boost-weighted",
            CommutatorBound::BoostGood => "boost-good",
        }
    }

    /// Number of first-order operators in the family.
    fn family_len(&self) -> usize {
        match self {
            CommutatorBound::BoostPartial | CommutatorBound::BoostWeighted => 4,
            CommutatorBound::BoostTangent => 3,
            CommutatorBound::BoostGood => Op::GOOD.len(),
        }
    }

    /// Applies the `k`-th family member to `f`.
    fn apply(&self, k: usize, f: &Jet, p: &SpacetimePoint) -> Result<Jet> {
        match self {
            CommutatorBound::BoostPartial => apply_jet(Op::Partial(k as u8), f, p),
            CommutatorBound::BoostTangent => apply_jet(Op::Tangent(k as u8 + 1), f, p),
            CommutatorBound::BoostGood => apply_jet(Op::GOOD[k], f, p),
            CommutatorBound::BoostWeighted => {
                let d = apply_jet(Op::Partial(k as u8), f, p)?;
                let ratio = CoordinateJets::new(p, d.order()).lorentz_ratio()?;
                Ok(&ratio * &d)
            }
        }
    }
}

impl fmt::Display for CommutatorBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CommutatorBound {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self> {
        CommutatorBound::ALL
            .iter()
            .find(|l| l.id() == s)
            .copied()
            .ok_or_else(|| FieldError::UnknownIdentity(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub bound: CommutatorBound,
    pub order: usize,
    /// Smallest `C` making the inequality hold at every sample; infinite if a
    /// positive excess meets a vanishing lower-order sum.
    pub constant: f64,
    pub samples: usize,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.constant.is_finite()
    }
}

/// Boost words of one length with their images.
type WordLevel = Vec<(Vec<u8>, Jet)>;

/// Applies boost words (last operator first) of every length `≤ order` to `base`.
fn boost_words(base: &Jet, p: &SpacetimePoint, order: usize) -> Result<Vec<WordLevel>> {
    let mut levels = vec![vec![(Vec::new(), base.clone())]];
    for len in 1..=order {
        let mut next = Vec::new();
        for (word, jet) in &levels[len - 1] {
            for b in 1..=3u8 {
                let mut w = vec![b];
                w.extend_from_slice(word);
                next.push((w, apply_jet(Op::Boost(b), jet, p)?));
            }
        }
        levels.push(next);
    }
    Ok(levels)
}

fn apply_word(word: &[u8], f: &Jet, p: &SpacetimePoint) -> Result<Jet> {
    word.iter()
        .rev()
        .try_fold(f.clone(), |g, &b| apply_jet(Op::Boost(b), &g, p))
}

/// Measures the constant of `bound` for boost words of length `order` over `points`.
pub fn check_commutator_bound(
    bound: CommutatorBound,
    u: &ScalarField,
    points: &[SpacetimePoint],
    order: usize,
) -> Result<BoundReport> {
    if order > MAX_BOUND_ORDER {
        return Err(FieldError::Domain(format!(
            "word length {order} exceeds {MAX_BOUND_ORDER}"
        )));
    }
    let mut constant = 0.0f64;
    for p in points {
        constant = constant.max(constant_at(bound, u, p, order)?);
    }
    Ok(BoundReport {
        bound,
        order,
        constant,
        samples: points.len(),
    })
}

fn ratio(excess: f64, lower: f64, scale: f64) -> f64 {
    let excess = excess.max(0.0);
    if excess <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        0.0
    } else if lower == 0.0 {
        f64::INFINITY
    } else {
        excess / lower
    }
}

fn constant_at(
    bound: CommutatorBound,
    u: &ScalarField,
    p: &SpacetimePoint,
    order: usize,
) -> Result<f64> {
    let base = u.jet(p, order + 1)?;
    let levels = boost_words(&base, p, order)?;
    let n = bound.family_len();

    let mut lower = 0.0;
    for level in &levels[..order] {
        for (_, jet) in level {
            for k in 0..n {
                lower += bound.apply(k, jet, p)?.value().abs();
            }
        }
    }

    let mut worst = 0.0f64;
    let (mut lhs_sum, mut main_sum) = (0.0, 0.0);
    for k in 0..n {
        let xu = bound.apply(k, &base, p)?;
        for (word, hu) in &levels[order] {
            let lhs = apply_word(word, &xu, p)?.value().abs();
            let main = bound.apply(k, hu, p)?.value().abs();
            if bound == CommutatorBound::BoostTangent {
                lhs_sum += lhs;
                main_sum += main;
            } else {
                worst = worst.max(ratio(lhs - main, lower, lhs));
            }
        }
    }
    if bound == CommutatorBound::BoostTangent {
        worst = ratio(lhs_sum - main_sum, lower, lhs_sum);
    }
    Ok(worst)
}

/// Measured `𝒟_g` constant restricted to samples with `r ≥ (1/2 + m)t`, per margin `m`.
///
/// Returns `(margin, constant, samples used)`.
pub fn good_bound_sweep(
    u: &ScalarField,
    points: &[SpacetimePoint],
    order: usize,
    margins: &[f64],
) -> Result<Vec<(f64, f64, usize)>> {
    let mut per_point: HashMap<usize, f64> = HashMap::new();
    for (idx, p) in points.iter().enumerate() {
        if p.r() >= 0.5 * p.t {
            per_point.insert(idx, constant_at(CommutatorBound::BoostGood, u, p, order)?);
        }
    }
    Ok(margins
        .iter()
        .map(|&m| {
            let kept: Vec<f64> = per_point
                .iter()
                .filter(|(&i, _)| points[i].r() >= (0.5 + m) * points[i].t)
                .map(|(_, &c)| c)
                .collect();
            (m, kept.iter().copied().fold(0.0, f64::max), kept.len())
        })
        .collect())
}
