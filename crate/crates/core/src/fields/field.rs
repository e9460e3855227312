use std::sync::Arc;

use crate::geometry::SpacetimePoint;
use crate::jet::{Jet, MAX_ORDER};

use super::operators::{apply_jet, wave_jet, CoordinateJets, FieldOperator, MultiIndex};
use super::{FieldError, Result};

/// Default derivative budget of closed-form test fields.
pub const DEFAULT_BUDGET: usize = 6;

/// `amp · exp(−a(t − t₀)² − b|x − x₀|²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    pub amp: f64,
    pub a: f64,
    pub t0: f64,
    pub b: f64,
    pub x0: [f64; 3],
}

/// `Σ c · t^{e₀} (x¹)^{e₁} (x²)^{e₂} (x³)^{e₃}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    pub terms: Vec<(f64, [u8; 4])>,
}

impl Polynomial {
    pub fn new(terms: Vec<(f64, [u8; 4])>) -> Self {
        Polynomial { terms }
    }

    pub fn coordinate(var: usize) -> Self {
        let mut e = [0u8; 4];
        e[var] = 1;
        Polynomial {
            terms: vec![(1.0, e)],
        }
    }
}

/// Cone-adapted profile `amp · f(t − r) · (1 + k·y) · exp(−|y − y₀|²/σ²)` with `y = x/t`.
///
/// `f(s) = exp(−(s − s₀)²/w²)` when `shell` is set, otherwise `f ≡ 1`.
/// With `f ≡ 1` the field is constant along rays from the origin, i.e. a fixed
/// profile transported along the hyperboloids.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeProfile {
    pub amp: f64,
    pub shell: Option<(f64, f64)>,
    pub y0: [f64; 3],
    pub sigma: f64,
    pub tilt: [f64; 3],
}

/// Compactly supported radial bump `amp · cos(νt) · (1 − r²/ρ(t)²)⁴₊` with
/// `ρ(t) = c·(t − 1)`, so that for `c < 1` the support stays inside `Λ′`.
///
/// The profile is `C³` across the edge of its support; jets beyond order 3 are
/// only valid strictly inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeBump {
    pub amp: f64,
    pub freq: f64,
    pub c: f64,
}

/// Highest exact jet order of a [`ConeBump`] everywhere.
pub const CONE_BUMP_BUDGET: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum BaseField {
    Gaussian(Gaussian),
    Polynomial(Polynomial),
    PolyGaussian(Polynomial, Gaussian),
    Cone(ConeProfile),
    ConeBump(ConeBump),
}

impl BaseField {
    pub fn jet(&self, p: &SpacetimePoint, order: usize) -> Result<Jet> {
        let c = CoordinateJets::new(p, order);
        match self {
            BaseField::Gaussian(g) => Ok(gaussian_jet(g, &c)),
            BaseField::Polynomial(poly) => Ok(polynomial_jet(poly, &c, order)),
            BaseField::PolyGaussian(poly, g) => {
                Ok(&polynomial_jet(poly, &c, order) * &gaussian_jet(g, &c))
            }
            BaseField::Cone(cp) => cone_jet(cp, &c, order),
            BaseField::ConeBump(b) => Ok(cone_bump_jet(b, &c, order)),
        }
    }
}

fn gaussian_jet(g: &Gaussian, c: &CoordinateJets) -> Jet {
    let dt = &c.t - &Jet::constant(c.t.order(), g.t0);
    let mut expo = (&dt * &dt).scale(-g.a);
    for i in 0..3 {
        let dx = &c.x[i] - &Jet::constant(c.t.order(), g.x0[i]);
        expo = &expo - &(&dx * &dx).scale(g.b);
    }
    expo.exp().scale(g.amp)
}

fn polynomial_jet(poly: &Polynomial, c: &CoordinateJets, order: usize) -> Jet {
    let vars = [&c.t, &c.x[0], &c.x[1], &c.x[2]];
    let mut out = Jet::constant(order, 0.0);
    for (coef, exps) in &poly.terms {
        let mut mono = Jet::constant(order, *coef);
        for (v, &e) in vars.iter().zip(exps) {
            for _ in 0..e {
                mono = &mono * v;
            }
        }
        out = &out + &mono;
    }
    out
}

fn cone_jet(cp: &ConeProfile, c: &CoordinateJets, order: usize) -> Result<Jet> {
    let inv_t = c.inv_t()?;
    let y: Vec<Jet> = c.x.iter().map(|x| x * &inv_t).collect();
    let mut expo = Jet::constant(order, 0.0);
    let mut lin = Jet::constant(order, 1.0);
    for i in 0..3 {
        let d = &y[i] - &Jet::constant(order, cp.y0[i]);
        expo = &expo - &(&d * &d).scale(1.0 / (cp.sigma * cp.sigma));
        lin = &lin + &y[i].scale(cp.tilt[i]);
    }
    let mut out = (&lin * &expo.exp()).scale(cp.amp);
    if let Some((s0, w)) = cp.shell {
        let s = &(&c.t - &c.r()?) - &Jet::constant(order, s0);
        let f = (&s * &s).scale(-1.0 / (w * w)).exp();
        out = &out * &f;
    }
    Ok(out)
}

fn cone_bump_jet(b: &ConeBump, c: &CoordinateJets, order: usize) -> Jet {
    let rho = (&c.t - &Jet::constant(order, 1.0)).scale(b.c);
    if rho.value() <= 0.0 {
        return Jet::constant(order, 0.0);
    }
    let r2 = &(&(&c.x[0] * &c.x[0]) + &(&c.x[1] * &c.x[1])) + &(&c.x[2] * &c.x[2]);
    let s = &r2 * &(&rho * &rho).recip();
    if s.value() >= 1.0 {
        return Jet::constant(order, 0.0);
    }
    let one_minus = &Jet::constant(order, 1.0) - &s;
    let sq = &one_minus * &one_minus;
    let time = c.t.scale(b.freq).cos().scale(b.amp);
    &time * &(&sq * &sq)
}

#[derive(Debug, Clone)]
enum Node {
    Base(BaseField),
    Apply(FieldOperator, ScalarField),
    Combine(Vec<(f64, ScalarField)>),
    Wave(ScalarField),
}

/// A closed-form field with exact derivatives up to its remaining budget.
///
/// Applying an operator builds a composite whose jets are obtained by
/// propagating the base field's Taylor jet through each operator.
#[derive(Debug, Clone)]
pub struct ScalarField {
    node: Arc<Node>,
    budget: usize,
}

impl ScalarField {
    pub fn new(base: BaseField, budget: usize) -> Result<Self> {
        if budget > MAX_ORDER {
            return Err(FieldError::Domain(format!(
                "budget {budget} exceeds {MAX_ORDER}"
            )));
        }
        Ok(ScalarField {
            node: Arc::new(Node::Base(base)),
            budget,
        })
    }

    pub fn from_base(base: BaseField) -> Self {
        ScalarField {
            node: Arc::new(Node::Base(base)),
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn gaussian(g: Gaussian) -> Self {
        Self::from_base(BaseField::Gaussian(g))
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self::from_base(BaseField::Polynomial(p))
    }

    pub fn cone_bump(b: ConeBump) -> Self {
        ScalarField {
            node: Arc::new(Node::Base(BaseField::ConeBump(b))),
            budget: CONE_BUMP_BUDGET,
        }
    }

    /// Remaining number of derivatives that can still be taken exactly.
    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn jet(&self, p: &SpacetimePoint, order: usize) -> Result<Jet> {
        if order > self.budget {
            return Err(FieldError::Budget);
        }
        match &*self.node {
            Node::Base(b) => b.jet(p, order),
            Node::Apply(op, inner) => apply_jet(*op, &inner.jet(p, order + 1)?, p),
            Node::Wave(inner) => wave_jet(&inner.jet(p, order + 2)?),
            Node::Combine(terms) => {
                let mut out = Jet::constant(order, 0.0);
                for (c, f) in terms {
                    out = &out + &f.jet(p, order)?.scale(*c);
                }
                Ok(out)
            }
        }
    }

    pub fn value(&self, p: &SpacetimePoint) -> Result<f64> {
        Ok(self.jet(p, 0)?.value())
    }

    pub fn apply(&self, op: FieldOperator) -> Result<ScalarField> {
        if self.budget == 0 {
            return Err(FieldError::Budget);
        }
        Ok(ScalarField {
            node: Arc::new(Node::Apply(op, self.clone())),
            budget: self.budget - 1,
        })
    }

    /// `Z^J f`; the last operator of `J` acts first.
    pub fn apply_multi(&self, word: &MultiIndex) -> Result<ScalarField> {
        if word.len() > self.budget {
            return Err(FieldError::Budget);
        }
        word.0
            .iter()
            .rev()
            .try_fold(self.clone(), |f, op| f.apply(*op))
    }

    /// `□f = ∂_t²f − Δf`.
    pub fn wave(&self) -> Result<ScalarField> {
        if self.budget < 2 {
            return Err(FieldError::Budget);
        }
        Ok(ScalarField {
            node: Arc::new(Node::Wave(self.clone())),
            budget: self.budget - 2,
        })
    }

    /// Linear combination `Σ cₖ fₖ`.
    pub fn combine(terms: Vec<(f64, ScalarField)>) -> ScalarField {
        let budget = terms
            .iter()
            .map(|(_, f)| f.budget)
            .min()
            .unwrap_or(MAX_ORDER);
        ScalarField {
            node: Arc::new(Node::Combine(terms)),
            budget,
        }
    }
}

/// The five closed-form fields used by the identity batteries.
pub fn test_family() -> Vec<(&'static str, ScalarField)> {
    let g1 = Gaussian {
        amp: 1.0,
        a: 0.08,
        t0: 6.0,
        b: 0.1,
        x0: [1.0, 0.5, -0.5],
    };
    let g2 = Gaussian {
        amp: 0.7,
        a: 0.05,
        t0: 8.0,
        b: 0.06,
        x0: [-2.0, 1.0, 0.0],
    };
    let poly = Polynomial::new(vec![
        (1.0, [0, 0, 0, 0]),
        (0.03, [1, 1, 0, 0]),
        (-0.02, [0, 0, 2, 0]),
        (0.1, [0, 0, 0, 1]),
    ]);
    let shell = ConeProfile {
        amp: 1.0,
        shell: Some((3.0, 1.5)),
        y0: [0.3, 0.2, -0.1],
        sigma: 0.5,
        tilt: [0.5, 0.0, 0.2],
    };
    let ray = ConeProfile {
        amp: 0.8,
        shell: None,
        y0: [-0.2, 0.4, 0.1],
        sigma: 0.4,
        tilt: [0.0, 0.3, 0.0],
    };
    let g3 = Gaussian {
        amp: 1.2,
        a: 0.02,
        t0: 15.0,
        b: 0.03,
        x0: [5.0, -3.0, 6.0],
    };
    vec![
        ("gaussian", ScalarField::gaussian(g1)),
        (
            "poly-gaussian",
            ScalarField::from_base(BaseField::PolyGaussian(poly, g2)),
        ),
        ("cone-shell", ScalarField::from_base(BaseField::Cone(shell))),
        ("cone-ray", ScalarField::from_base(BaseField::Cone(ray))),
        ("wide-gaussian", ScalarField::gaussian(g3)),
    ]
}

/// Ray-transported profiles (constant along rays from the origin) used for Sobolev ratio sweeps.
pub fn sobolev_profiles() -> Vec<(&'static str, ScalarField)> {
    let profile = |amp, y0, sigma, tilt| {
        ScalarField::from_base(BaseField::Cone(ConeProfile {
            amp,
            shell: None,
            y0,
            sigma,
            tilt,
        }))
    };
    vec![
        ("offset", profile(1.0, [0.2, 0.0, 0.1], 0.3, [0.0; 3])),
        (
            "tilted",
            profile(1.0, [-0.3, 0.3, 0.0], 0.25, [0.4, 0.0, 0.0]),
        ),
        ("centred", profile(2.0, [0.0; 3], 0.4, [0.0, 0.2, 0.3])),
    ]
}
