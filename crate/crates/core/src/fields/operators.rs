use std::fmt;

use crate::geometry::SpacetimePoint;
use crate::jet::Jet;

use super::{FieldError, Result};

/// First-order differential operators of the vector-field algebra.
///
/// Spatial indices are 1-based (`Boost(1)` is `H₁`), matching `xⁱ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldOperator {
    /// `∂_α`, `α ∈ 0..=3`.
    Partial(u8),
    /// Lorentz boost `H_i = t∂_i + xⁱ∂_t`.
    Boost(u8),
    /// Hyperboloid-tangent derivative `∂̄_i = t⁻¹H_i`.
    Tangent(u8),
    /// Outgoing-cone tangent derivative `∂̃_i = ωⁱ∂_t + ∂_i`.
    ConeTangent(u8),
    /// `(t − r)r⁻¹∂_α`.
    ConeWeighted(u8),
}

impl FieldOperator {
    pub const ALL: [FieldOperator; 17] = [
        FieldOperator::Partial(0),
        FieldOperator::Partial(1),
        FieldOperator::Partial(2),
        FieldOperator::Partial(3),
        FieldOperator::Boost(1),
        FieldOperator::Boost(2),
        FieldOperator::Boost(3),
        FieldOperator::Tangent(1),
        FieldOperator::Tangent(2),
        FieldOperator::Tangent(3),
        FieldOperator::ConeTangent(1),
        FieldOperator::ConeTangent(2),
        FieldOperator::ConeTangent(3),
        FieldOperator::ConeWeighted(0),
        FieldOperator::ConeWeighted(1),
        FieldOperator::ConeWeighted(2),
        FieldOperator::ConeWeighted(3),
    ];

    /// The good-derivative family `𝒟_g = {∂̃_i, (t − r)r⁻¹∂_α}`.
    pub const GOOD: [FieldOperator; 7] = [
        FieldOperator::ConeTangent(1),
        FieldOperator::ConeTangent(2),
        FieldOperator::ConeTangent(3),
        FieldOperator::ConeWeighted(0),
        FieldOperator::ConeWeighted(1),
        FieldOperator::ConeWeighted(2),
        FieldOperator::ConeWeighted(3),
    ];

    pub const BOOSTS: [FieldOperator; 3] = [
        FieldOperator::Boost(1),
        FieldOperator::Boost(2),
        FieldOperator::Boost(3),
    ];

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            FieldOperator::Partial(a) | FieldOperator::ConeWeighted(a) => a <= 3,
            FieldOperator::Boost(i) | FieldOperator::Tangent(i) | FieldOperator::ConeTangent(i) => {
                (1..=3).contains(&i)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(FieldError::BadIndex(*self))
        }
    }
}

impl fmt::Display for FieldOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldOperator::Partial(a) => write!(f, "D{a}"),
            FieldOperator::Boost(i) => write!(f, "H{i}"),
            FieldOperator::Tangent(i) => write!(f, "Db{i}"),
            FieldOperator::ConeTangent(i) => write!(f, "Nd{i}"),
            FieldOperator::ConeWeighted(0) => write!(f, "GoodT"),
            FieldOperator::ConeWeighted(a) => write!(f, "GoodX{a}"),
        }
    }
}

/// A word `Z_{J₁}⋯Z_{J_n}` of operators; `Z_{J_n}` acts first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiIndex(pub Vec<FieldOperator>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation: `Z^{self·other} = Z^{self} Z^{other}`.
    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().chain(&other.0).copied().collect())
    }

    /// All words of length `len` over `alphabet`.
    pub fn words(alphabet: &[FieldOperator], len: usize) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::empty()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    alphabet.iter().map(move |op| {
                        let mut v = w.0.clone();
                        v.push(*op);
                        MultiIndex(v)
                    })
                })
                .collect();
        }
        out
    }
}

/// Jets of the coordinate and coefficient functions at a point.
pub(crate) struct CoordinateJets {
    pub t: Jet,
    pub x: [Jet; 3],
}

impl CoordinateJets {
    pub fn new(p: &SpacetimePoint, order: usize) -> Self {
        CoordinateJets {
            t: Jet::variable(order, 0, p.t),
            x: [
                Jet::variable(order, 1, p.x[0]),
                Jet::variable(order, 2, p.x[1]),
                Jet::variable(order, 3, p.x[2]),
            ],
        }
    }

    pub fn r(&self) -> Result<Jet> {
        let r2 =
            &(&(&self.x[0] * &self.x[0]) + &(&self.x[1] * &self.x[1])) + &(&self.x[2] * &self.x[2]);
        if r2.value() <= 0.0 {
            return Err(FieldError::Domain("operator needs r > 0".into()));
        }
        Ok(r2.sqrt())
    }

    pub fn inv_t(&self) -> Result<Jet> {
        if self.t.value() <= 0.0 {
            return Err(FieldError::Domain("operator needs t > 0".into()));
        }
        Ok(self.t.recip())
    }

    pub fn omega(&self, i: usize) -> Result<Jet> {
        Ok(&self.x[i - 1] * &self.r()?.recip())
    }

    /// `t/r − 1 = (t − r)r⁻¹`.
    pub fn cone_weight(&self) -> Result<Jet> {
        let r = self.r()?;
        Ok(&(&self.t * &r.recip()) - &Jet::constant(r.order(), 1.0))
    }

    /// `T/t` with `T = √(t² − r²)`.
    pub fn lorentz_ratio(&self) -> Result<Jet> {
        let s = &(&self.t * &self.t)
            - &(&(&(&self.x[0] * &self.x[0]) + &(&self.x[1] * &self.x[1]))
                + &(&self.x[2] * &self.x[2]));
        if s.value() <= 0.0 {
            return Err(FieldError::Domain("T/t needs t > r".into()));
        }
        Ok(&s.sqrt() * &self.inv_t()?)
    }
}

/// Applies `op` to the jet `f` of a function at `p`; the result has one order less.
pub fn apply_jet(op: FieldOperator, f: &Jet, p: &SpacetimePoint) -> Result<Jet> {
    op.validate()?;
    if f.order() == 0 {
        return Err(FieldError::Budget);
    }
    let order = f.order() - 1;
    let c = CoordinateJets::new(p, order);
    Ok(match op {
        FieldOperator::Partial(a) => f.diff(a as usize),
        FieldOperator::Boost(i) => boost(&c, f, i as usize),
        FieldOperator::Tangent(i) => &c.inv_t()? * &boost(&c, f, i as usize),
        FieldOperator::ConeTangent(i) => {
            let i = i as usize;
            &(&c.omega(i)? * &f.diff(0)) + &f.diff(i)
        }
        FieldOperator::ConeWeighted(a) => &c.cone_weight()? * &f.diff(a as usize),
    })
}

fn boost(c: &CoordinateJets, f: &Jet, i: usize) -> Jet {
    &(&c.t * &f.diff(i)) + &(&c.x[i - 1] * &f.diff(0))
}

/// `□f = ∂_t²f − Δf` on jets; the result has two orders less.
pub fn wave_jet(f: &Jet) -> Result<Jet> {
    if f.order() < 2 {
        return Err(FieldError::Budget);
    }
    let mut out = f.diff(0).diff(0);
    for i in 1..=3 {
        out = &out - &f.diff(i).diff(i);
    }
    Ok(out)
}
